//! Shallow in/out trees over `G_r` joined at the root, and the label-cover
//! relaxation on top of them.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::layered::{LabelCoverInstance, LayeredJunctionGraph, NodeKind};
use super::prune::PairMass;
use crate::error::{Error, Result};
use crate::graph::{Dist, MetricCompletion, Reversed};
use crate::lp::{solve, Cmp, LpModel, LpStatus, Var};
use crate::rounding::{height_reduce, HeightOptions, ShallowTree};

/// In-tree and out-tree of height `sigma` sharing node 0 as the root.
/// Nodes `1..=in_len` belong to the in-tree.
#[derive(Clone, Debug)]
pub struct JoinedTree {
    pub sigma: usize,
    pub in_len: usize,
    pub parent: Vec<Option<usize>>,
    pub weight: Vec<Dist>,
    /// `G_r` node represented by each tree node.
    pub psi: Vec<usize>,
    /// `G_r` arcs realizing the edge into each node.
    pub arcs: Vec<Vec<usize>>,
}

impl JoinedTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn path_to_root(&self, mut v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some(p) = self.parent[v] {
            out.push(v);
            v = p;
        }
        out
    }

    pub fn height(&self) -> usize {
        (0..self.len()).map(|v| self.path_to_root(v).len()).max().unwrap_or(0)
    }
}

/// Height-reduces both sides of `G_r`; only branches that reach a terminal copy are kept.
pub fn join_trees(gr: &LayeredJunctionGraph, sigma: usize, node_budget: usize) -> Result<JoinedTree> {
    let metric = MetricCompletion::from_arcs(gr.len(), gr.arcs.clone());
    let sources: Vec<bool> = gr.nodes.iter().map(|k| matches!(k, NodeKind::Source { .. })).collect();
    let sinks: Vec<bool> = gr.nodes.iter().map(|k| matches!(k, NodeKind::Sink { .. })).collect();
    let tin =
        height_reduce(&Reversed(&metric), gr.root, sigma, HeightOptions { node_budget, terminals: Some(&sources) })?;
    let tout = height_reduce(&metric, gr.root, sigma, HeightOptions { node_budget, terminals: Some(&sinks) })?;
    let mut tree = JoinedTree {
        sigma,
        in_len: tin.len() - 1,
        parent: vec![None],
        weight: vec![0],
        psi: vec![gr.root],
        arcs: vec![Vec::new()],
    };
    let mut append = |t: &ShallowTree| {
        let offset = tree.len() - 1;
        for v in 1..t.len() {
            let p = t.parent[v].unwrap();
            tree.parent.push(Some(if p == 0 { 0 } else { p + offset }));
            tree.weight.push(t.weight[v]);
            tree.psi.push(t.psi[v]);
            tree.arcs.push(t.phi[v].arcs.clone());
        }
    };
    append(&tin);
    append(&tout);
    Ok(tree)
}

/// Representatives of one pair: tree nodes standing for its terminal copies.
#[derive(Clone, Debug, PartialEq)]
pub struct PairSolution {
    /// Index into the label-cover instance.
    pub pair: usize,
    pub sources: Vec<(usize, Dist)>,
    pub sinks: Vec<(usize, Dist)>,
    pub bound: Option<Dist>,
    /// Label-level mass `y_ij`.
    pub y: Vec<(Dist, Dist, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelCoverSolution {
    pub value: f64,
    /// Capacity of the edge into each tree node (0 at the root).
    pub x: Vec<f64>,
    /// Representative mass `z` per tree node (0 for non-representatives).
    pub z: Vec<f64>,
    pub pairs: Vec<PairSolution>,
    pub vars: usize,
    pub constraints: usize,
}

impl PairSolution {
    /// Representative-level mass in product form `y_ij · (z_s / Z_i) · (z_t / Z_j)`,
    /// which meets the per-representative row and column bounds whenever the
    /// label-level solution does.
    pub fn rep_masses(&self, z: &[f64]) -> PairMass {
        let q = |v: f64| BigRational::from_float(v).unwrap_or_else(BigRational::zero);
        let mut src_tot: BTreeMap<Dist, BigRational> = BTreeMap::new();
        let mut snk_tot: BTreeMap<Dist, BigRational> = BTreeMap::new();
        for &(v, l) in &self.sources {
            *src_tot.entry(l).or_insert_with(BigRational::zero) += q(z[v]);
        }
        for &(v, l) in &self.sinks {
            *snk_tot.entry(l).or_insert_with(BigRational::zero) += q(z[v]);
        }
        let mut y = Vec::new();
        for &(i, j, m) in &self.y {
            let m = q(m);
            if m.is_zero() {
                continue;
            }
            let (zi, zj) = (&src_tot[&i], &snk_tot[&j]);
            if zi.is_zero() || zj.is_zero() {
                continue;
            }
            for &(a, _) in self.sources.iter().filter(|&&(_, l)| l == i) {
                let fa = q(z[a]) / zi;
                if fa.is_zero() {
                    continue;
                }
                for &(b, _) in self.sinks.iter().filter(|&&(_, l)| l == j) {
                    let fb = q(z[b]) / zj;
                    if !fb.is_zero() {
                        y.push((a, b, &m * &fa * fb));
                    }
                }
            }
        }
        PairMass { sources: self.sources.clone(), sinks: self.sinks.clone(), bound: self.bound, y }
    }
}

/// Label-aggregated form of the relaxation: `y` lives on related label pairs,
/// each label's row (column) total is bounded by the summed `z` of its
/// representatives, and every representative's `z` is at most the capacity of
/// each tree edge on its root path. Splitting `y_ij` proportionally to `z`
/// recovers a representative-level solution of equal cost.
pub fn solve_label_cover_lp(
    tree: &JoinedTree,
    gr: &LayeredJunctionGraph,
    inst: &LabelCoverInstance,
) -> Result<LabelCoverSolution> {
    let mut model = LpModel::new();
    let x: Vec<Option<Var>> =
        (0..tree.len()).map(|v| (v > 0).then(|| model.add_var(format!("x_{v}"), f64::from(tree.weight[v])))).collect();
    let mut rep_of: Vec<Option<(usize, bool, Dist)>> = vec![None; tree.len()];
    for v in 1..tree.len() {
        match gr.nodes[tree.psi[v]] {
            NodeKind::Source { pair, label } if v <= tree.in_len => rep_of[v] = Some((pair, true, label)),
            NodeKind::Sink { pair, label } if v > tree.in_len => rep_of[v] = Some((pair, false, label)),
            _ => {}
        }
    }
    let mut z: Vec<Option<Var>> = vec![None; tree.len()];
    let mut per_pair: Vec<(Vec<(usize, Dist)>, Vec<(usize, Dist)>)> = vec![(Vec::new(), Vec::new()); inst.pairs.len()];
    for v in 1..tree.len() {
        if let Some((p, is_src, label)) = rep_of[v] {
            let zv = model.add_var(format!("z_{v}"), 0.0);
            z[v] = Some(zv);
            for e in tree.path_to_root(v) {
                model.add_constraint(vec![(zv, 1.0), (x[e].unwrap(), -1.0)], Cmp::Le, 0.0);
            }
            if is_src {
                per_pair[p].0.push((v, label));
            } else {
                per_pair[p].1.push((v, label));
            }
        }
    }
    let mut all_y = Vec::new();
    let mut layouts = Vec::new();
    for (p, (srcs, snks)) in per_pair.into_iter().enumerate() {
        let pair = &inst.pairs[p];
        let src_labels: BTreeMap<Dist, Vec<usize>> = srcs.iter().fold(BTreeMap::new(), |mut m, &(v, l)| {
            m.entry(l).or_insert_with(Vec::new).push(v);
            m
        });
        let snk_labels: BTreeMap<Dist, Vec<usize>> = snks.iter().fold(BTreeMap::new(), |mut m, &(v, l)| {
            m.entry(l).or_insert_with(Vec::new).push(v);
            m
        });
        let mut rows: BTreeMap<Dist, Vec<(Var, f64)>> = BTreeMap::new();
        let mut cols: BTreeMap<Dist, Vec<(Var, f64)>> = BTreeMap::new();
        let mut ys = Vec::new();
        for &i in src_labels.keys() {
            for &j in snk_labels.keys() {
                if pair.related(i, j) {
                    let y = model.add_var(format!("y_{p}_{i}_{j}"), 0.0);
                    rows.entry(i).or_default().push((y, 1.0));
                    cols.entry(j).or_default().push((y, 1.0));
                    ys.push((i, j, y));
                    all_y.push((y, 1.0));
                }
            }
        }
        for (i, mut terms) in rows {
            terms.extend(src_labels[&i].iter().map(|&v| (z[v].unwrap(), -1.0)));
            model.add_constraint(terms, Cmp::Le, 0.0);
        }
        for (j, mut terms) in cols {
            terms.extend(snk_labels[&j].iter().map(|&v| (z[v].unwrap(), -1.0)));
            model.add_constraint(terms, Cmp::Le, 0.0);
        }
        if !ys.is_empty() {
            layouts.push((p, srcs, snks, ys));
        }
    }
    if all_y.is_empty() {
        return Err(Error::Infeasible("no pair has related representatives in the shallow tree".into()));
    }
    model.add_constraint(all_y, Cmp::Eq, 1.0);
    let sol = solve(&model)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Numerical(format!("label-cover relaxation reported {:?}", sol.status)));
    }
    let xs = x.iter().map(|v| v.map_or(0.0, |v| sol.value(v))).collect();
    let zs = z.iter().map(|v| v.map_or(0.0, |v| sol.value(v))).collect();
    let pairs = layouts
        .into_iter()
        .map(|(p, sources, sinks, ys)| PairSolution {
            pair: p,
            sources,
            sinks,
            bound: inst.pairs[p].bound,
            y: ys.into_iter().map(|(i, j, v)| (i, j, sol.value(v))).collect(),
        })
        .collect();
    Ok(LabelCoverSolution {
        value: sol.objective,
        x: xs,
        z: zs,
        pairs,
        vars: model.num_vars(),
        constraints: model.num_constraints(),
    })
}
