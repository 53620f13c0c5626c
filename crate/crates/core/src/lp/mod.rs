//! Sparse linear programs over non-negative variables, solved by a revised
//! simplex backend, plus builders for the relaxations used by the drivers.

mod builders;

pub use builders::{
    build_flow_lp, build_layered_lp, build_preserver_lp, flow_support, DemandRule, FlowLp, LayeredLp, PreserverLp,
};

use std::fmt::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use crate::error::{Error, Result};

/// Feasibility tolerance applied when validating a returned solution.
pub const FEAS_TOL: f64 = 1e-7;
/// Most negative value accepted as zero.
pub const NONNEG_TOL: f64 = 1e-9;

/// Handle to a variable inside one [`LpModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(Var, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

impl Constraint {
    fn lhs(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v.0]).sum()
    }

    fn holds(&self, values: &[f64], tol: f64) -> bool {
        let lhs = self.lhs(values);
        match self.cmp {
            Cmp::Le => lhs <= self.rhs + tol,
            Cmp::Ge => lhs >= self.rhs - tol,
            Cmp::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

/// Minimization LP; every variable has lower bound 0 and an optional upper bound.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LpModel {
    names: Vec<String>,
    objective: Vec<f64>,
    upper: Vec<Option<f64>>,
    constraints: Vec<Constraint>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, cost: f64) -> Var {
        self.add_bounded_var(name, cost, None)
    }

    pub fn add_bounded_var(&mut self, name: impl Into<String>, cost: f64, upper: Option<f64>) -> Var {
        self.names.push(name.into());
        self.objective.push(cost);
        self.upper.push(upper);
        Var(self.names.len() - 1)
    }

    pub fn add_constraint(&mut self, terms: Vec<(Var, f64)>, cmp: Cmp, rhs: f64) {
        self.constraints.push(Constraint { terms, cmp, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_coef(&self, v: Var) -> f64 {
        self.objective[v.0]
    }

    /// Objective and constraint check for an arbitrary assignment.
    pub fn evaluate(&self, values: &[f64]) -> (f64, bool) {
        let obj = self.objective.iter().zip(values).map(|(c, x)| c * x).sum();
        let ok = values.iter().all(|&x| x >= -NONNEG_TOL)
            && values.iter().zip(&self.upper).all(|(&x, u)| u.is_none_or(|u| x <= u + FEAS_TOL))
            && self.constraints.iter().all(|c| c.holds(values, FEAS_TOL));
        (obj, ok)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let finite = |x: f64| x.is_finite();
        if !self.objective.iter().copied().all(finite) {
            return Err(Error::Model("non-finite objective coefficient".into()));
        }
        for u in self.upper.iter().flatten() {
            if !u.is_finite() || *u < 0.0 {
                return Err(Error::Model(format!("bad upper bound {u}")));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if !finite(c.rhs) {
                return Err(Error::Model(format!("constraint {i} has non-finite rhs")));
            }
            for &(v, coef) in &c.terms {
                if v.0 >= n {
                    return Err(Error::Model(format!("constraint {i} references undeclared variable {}", v.0)));
                }
                if !finite(coef) {
                    return Err(Error::Model(format!("constraint {i} has non-finite coefficient")));
                }
            }
        }
        Ok(())
    }

    /// CPLEX LP text rendering, for cross-checking with external solvers.
    pub fn to_lp_format(&self) -> String {
        fn expr(out: &mut String, terms: impl Iterator<Item = (String, f64)>) {
            let mut first = true;
            for (name, c) in terms {
                if c == 0.0 {
                    continue;
                }
                let sign = if c < 0.0 {
                    " -"
                } else if first {
                    ""
                } else {
                    " +"
                };
                let mag = c.abs();
                if mag == 1.0 {
                    write!(out, "{sign} {name}").unwrap();
                } else {
                    write!(out, "{sign} {mag} {name}").unwrap();
                }
                first = false;
            }
            if first {
                out.push_str(" 0");
            }
        }
        let mut out = String::from("Minimize\n obj:");
        expr(&mut out, self.names.iter().cloned().zip(self.objective.iter().copied()));
        out.push_str("\nSubject To\n");
        for (i, c) in self.constraints.iter().enumerate() {
            write!(out, " c{i}:").unwrap();
            expr(&mut out, c.terms.iter().map(|&(v, coef)| (self.names[v.0].clone(), coef)));
            let op = match c.cmp {
                Cmp::Le => "<=",
                Cmp::Ge => ">=",
                Cmp::Eq => "=",
            };
            writeln!(out, " {op} {}", c.rhs).unwrap();
        }
        out.push_str("Bounds\n");
        for (name, u) in self.names.iter().zip(&self.upper) {
            match u {
                Some(u) => writeln!(out, " 0 <= {name} <= {u}").unwrap(),
                None => writeln!(out, " {name} >= 0").unwrap(),
            }
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Empty unless optimal.
    pub values: Vec<f64>,
    pub objective: f64,
}

impl LpSolution {
    pub fn value(&self, v: Var) -> f64 {
        self.values[v.0]
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Solves `model` to an optimal basic solution.
///
/// Infeasible and unbounded models are ordinary results; a solver breakdown or
/// a returned point that violates the model beyond tolerance is reported as
/// [`Error::Numerical`].
pub fn solve(model: &LpModel) -> Result<LpSolution> {
    use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

    model.validate()?;
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let mut p = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<_> = model
            .objective
            .iter()
            .zip(&model.upper)
            .map(|(&c, u)| p.add_var(c, (0.0, u.unwrap_or(f64::INFINITY))))
            .collect();
        for c in &model.constraints {
            let mut e = LinearExpr::empty();
            for &(v, coef) in &c.terms {
                e.add(vars[v.0], coef);
            }
            let op = match c.cmp {
                Cmp::Le => ComparisonOp::Le,
                Cmp::Ge => ComparisonOp::Ge,
                Cmp::Eq => ComparisonOp::Eq,
            };
            p.add_constraint(e, op, c.rhs);
        }
        p.solve().map(|sol| vars.iter().map(|&v| *sol.var_value(v)).collect::<Vec<f64>>())
    }));
    let values = match outcome {
        Err(_) => return Err(Error::Numerical("simplex backend aborted".into())),
        Ok(Err(minilp::Error::Infeasible)) => {
            return Ok(LpSolution { status: LpStatus::Infeasible, values: Vec::new(), objective: f64::NAN })
        }
        Ok(Err(minilp::Error::Unbounded)) => {
            return Ok(LpSolution { status: LpStatus::Unbounded, values: Vec::new(), objective: f64::NEG_INFINITY })
        }
        // the backend can report an unbounded ray as an infinite point
        Ok(Ok(v)) if v.iter().any(|x| x.is_infinite()) => {
            return Ok(LpSolution { status: LpStatus::Unbounded, values: Vec::new(), objective: f64::NEG_INFINITY })
        }
        Ok(Ok(v)) => v,
    };
    if let Some(i) = model.constraints.iter().position(|c| !c.holds(&values, FEAS_TOL)) {
        return Err(Error::Numerical(format!("constraint c{i} violated by returned point")));
    }
    if let Some(x) = values.iter().find(|&&x| x < -NONNEG_TOL || !x.is_finite()) {
        return Err(Error::Numerical(format!("returned value {x} out of domain")));
    }
    let values: Vec<f64> = values.into_iter().map(|x| if x.abs() < NONNEG_TOL { 0.0 } else { x }).collect();
    let objective = model.objective.iter().zip(&values).map(|(c, x)| c * x).sum();
    Ok(LpSolution { status: LpStatus::Optimal, values, objective })
}
