use super::{Cmp, LpModel, LpSolution, Var};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, local_graph, Bound, DemandSet, Direction, Dist, EdgeId, Graph, INF};

/// Flow below this is treated as absent when computing supports.
const SUPPORT_EPS: f64 = 1e-9;

fn unreachable(s: usize, t: usize) -> Error {
    Error::Infeasible(format!("demand ({s}, {t}) is unreachable"))
}

fn capacity_vars(model: &mut LpModel, g: &Graph) -> Vec<Var> {
    (0..g.m()).map(|e| model.add_var(format!("x_{e}"), 1.0)).collect()
}

fn edge_values(x: &[Var], sol: &LpSolution) -> Vec<f64> {
    x.iter().map(|&v| sol.value(v)).collect()
}

/// Vertices that lie on some positive-flow route from `source` to `sink`:
/// reachable from the source and co-reachable to the sink through arcs
/// carrying flow. Circulations detached from that route are ignored.
pub fn flow_support(nodes: usize, arcs: &[(usize, usize, f64)], source: usize, sink: usize) -> Vec<bool> {
    let mut fwd = vec![Vec::new(); nodes];
    let mut bwd = vec![Vec::new(); nodes];
    for &(u, v, f) in arcs {
        if f > SUPPORT_EPS {
            fwd[u].push(v);
            bwd[v].push(u);
        }
    }
    let reach = |adj: &[Vec<usize>], start: usize| {
        let mut seen = vec![false; nodes];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let a = reach(&fwd, source);
    let b = reach(&bwd, sink);
    a.iter().zip(&b).map(|(&x, &y)| x && y).collect()
}

/// Edge-flow form of the path relaxation: each pair routes one unit inside its
/// local graph, so every unit flow decomposes into shortest paths.
#[derive(Clone, Debug)]
pub struct PreserverLp {
    pub model: LpModel,
    pub x: Vec<Var>,
}

impl PreserverLp {
    pub fn edge_values(&self, sol: &LpSolution) -> Vec<f64> {
        edge_values(&self.x, sol)
    }
}

/// Every demand is treated as an exact-distance pair.
pub fn build_preserver_lp(g: &Graph, demands: &DemandSet) -> Result<PreserverLp> {
    let mut model = LpModel::new();
    let x = capacity_vars(&mut model, g);
    for (p, d) in demands.iter().enumerate() {
        let lg = local_graph(g, d.s, d.t).map_err(|_| unreachable(d.s, d.t))?;
        let mut balance: Vec<Vec<(Var, f64)>> = vec![Vec::new(); g.n()];
        for &e in lg.edges.ids() {
            let (u, v) = g.edge(e);
            let f = model.add_var(format!("f_{p}_{e}"), 0.0);
            balance[u].push((f, 1.0));
            balance[v].push((f, -1.0));
            model.add_constraint(vec![(f, 1.0), (x[e], -1.0)], Cmp::Le, 0.0);
        }
        for &v in &lg.vertices {
            let rhs = if v == d.s {
                1.0
            } else if v == d.t {
                -1.0
            } else {
                0.0
            };
            model.add_constraint(std::mem::take(&mut balance[v]), Cmp::Eq, rhs);
        }
    }
    Ok(PreserverLp { model, x })
}

/// Unit `s -> t` flow per pair over the whole graph with shared capacities.
#[derive(Clone, Debug)]
pub struct FlowLp {
    pub model: LpModel,
    pub x: Vec<Var>,
    /// `flows[p][e]` carries pair `p`'s flow on edge `e`.
    pub flows: Vec<Vec<Var>>,
}

impl FlowLp {
    pub fn edge_values(&self, sol: &LpSolution) -> Vec<f64> {
        edge_values(&self.x, sol)
    }

    /// Sorted vertex set involved in pair `p`'s flow.
    pub fn support(&self, g: &Graph, demands: &DemandSet, p: usize, sol: &LpSolution) -> Vec<usize> {
        let d = demands.pairs()[p];
        let arcs: Vec<_> = g.edges().iter().zip(&self.flows[p]).map(|(&(u, v), &f)| (u, v, sol.value(f))).collect();
        let mask = flow_support(g.n(), &arcs, d.s, d.t);
        (0..g.n()).filter(|&v| mask[v]).collect()
    }
}

pub fn build_flow_lp(g: &Graph, demands: &DemandSet) -> Result<FlowLp> {
    let mut model = LpModel::new();
    let x = capacity_vars(&mut model, g);
    let mut flows = Vec::with_capacity(demands.len());
    for (p, d) in demands.iter().enumerate() {
        g.check_vertex(d.s)?;
        g.check_vertex(d.t)?;
        if bfs_distances(g, d.s, Direction::Forward)?[d.t] == INF {
            return Err(unreachable(d.s, d.t));
        }
        let mut balance: Vec<Vec<(Var, f64)>> = vec![Vec::new(); g.n()];
        let mut fp = Vec::with_capacity(g.m());
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let f = model.add_var(format!("f_{p}_{e}"), 0.0);
            balance[u].push((f, 1.0));
            balance[v].push((f, -1.0));
            model.add_constraint(vec![(f, 1.0), (x[e], -1.0)], Cmp::Le, 0.0);
            fp.push(f);
        }
        for (v, terms) in balance.into_iter().enumerate() {
            if terms.is_empty() {
                continue;
            }
            let rhs = if v == d.s {
                1.0
            } else if v == d.t {
                -1.0
            } else {
                0.0
            };
            model.add_constraint(terms, Cmp::Eq, rhs);
        }
        flows.push(fp);
    }
    Ok(FlowLp { model, x, flows })
}

/// How much total flow the layered relaxation must carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemandRule {
    /// `Σ|f_p| >= |P|/2`, each `|f_p| <= 1`.
    HalfTotal,
    /// `|f_p| = 1` for every pair.
    EveryPair,
}

/// One arc of the implicit layered graph: `(from, layer-1) -> (to, layer)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayeredArc {
    pub from: usize,
    pub to: usize,
    pub layer: Dist,
    /// `None` for a stay-in-place arc.
    pub edge: Option<EdgeId>,
    pub var: Var,
}

#[derive(Clone, Debug)]
pub struct LayeredLp {
    pub model: LpModel,
    pub x: Vec<Var>,
    /// Flow value `|f_p|` per pair.
    pub value: Vec<Var>,
    /// Sink layer per pair.
    pub target: Vec<Dist>,
    pub arcs: Vec<Vec<LayeredArc>>,
}

impl LayeredLp {
    pub fn edge_values(&self, sol: &LpSolution) -> Vec<f64> {
        edge_values(&self.x, sol)
    }

    pub fn flow_value(&self, p: usize, sol: &LpSolution) -> f64 {
        sol.value(self.value[p])
    }

    /// Vertices of `G` whose layered copies carry pair `p`'s routed flow.
    pub fn support(&self, g: &Graph, demands: &DemandSet, p: usize, sol: &LpSolution) -> Vec<usize> {
        let d = demands.pairs()[p];
        let width = self.target[p] as usize + 1;
        let node = |v: usize, j: Dist| v * width + j as usize;
        let arcs: Vec<_> =
            self.arcs[p].iter().map(|a| (node(a.from, a.layer - 1), node(a.to, a.layer), sol.value(a.var))).collect();
        let mask = flow_support(g.n() * width, &arcs, node(d.s, 0), node(d.t, self.target[p]));
        let mut out: Vec<usize> = (0..g.n() * width).filter(|&i| mask[i]).map(|i| i / width).collect();
        out.dedup();
        out
    }
}

/// Bounded-hop relaxation over the layered graph with layers `0..=D0`.
///
/// Pair `p` sends `|f_p|` from `(s,0)` to `(t,T_p)` where `T_p = D0`, or
/// `min(D0, D(s,t))` when `per_pair` is set (exact pairs use `D = d(s,t)`).
/// Stay-in-place arcs model waiting and consume no capacity; all copies of
/// an edge share its `x_e`. Only layered nodes that lie on some admissible
/// route get variables.
pub fn build_layered_lp(
    g: &Graph,
    demands: &DemandSet,
    d0: Dist,
    per_pair: bool,
    rule: DemandRule,
) -> Result<LayeredLp> {
    if d0 == 0 {
        return Err(Error::Invalid("layer count D0 must be at least 1".into()));
    }
    let mut model = LpModel::new();
    let x = capacity_vars(&mut model, g);
    let mut values = Vec::new();
    let mut targets = Vec::new();
    let mut all_arcs = Vec::new();
    for (p, d) in demands.iter().enumerate() {
        let from_s = bfs_distances(g, d.s, Direction::Forward)?;
        let to_t = bfs_distances(g, d.t, Direction::Backward)?;
        if from_s[d.t] == INF {
            return Err(unreachable(d.s, d.t));
        }
        let target = if per_pair {
            match d.bound {
                Bound::Exact => d0.min(from_s[d.t]),
                Bound::AtMost(b) => d0.min(b),
                Bound::Unbounded => d0,
            }
        } else {
            d0
        };
        let ok = |v: usize, j: Dist| from_s[v] <= j && to_t[v] != INF && to_t[v] <= target - j;
        let value = model.add_bounded_var(format!("F_{p}"), 0.0, Some(1.0));
        let width = target as usize + 1;
        let mut balance: Vec<Vec<(Var, f64)>> = vec![Vec::new(); g.n() * width];
        let node = |v: usize, j: Dist| v * width + j as usize;
        let mut arcs = Vec::new();
        let mut per_edge: Vec<Vec<(Var, f64)>> = vec![Vec::new(); g.m()];
        for j in 1..=target {
            for u in 0..g.n() {
                if !ok(u, j - 1) {
                    continue;
                }
                if ok(u, j) {
                    let var = model.add_var(format!("w_{p}_{j}_{u}"), 0.0);
                    arcs.push(LayeredArc { from: u, to: u, layer: j, edge: None, var });
                }
                for &(v, e) in g.out_edges(u) {
                    if ok(v, j) {
                        let var = model.add_var(format!("l_{p}_{j}_{e}"), 0.0);
                        arcs.push(LayeredArc { from: u, to: v, layer: j, edge: Some(e), var });
                        per_edge[e].push((var, 1.0));
                    }
                }
            }
        }
        for a in &arcs {
            balance[node(a.from, a.layer - 1)].push((a.var, 1.0));
            balance[node(a.to, a.layer)].push((a.var, -1.0));
        }
        let (src, snk) = (node(d.s, 0), node(d.t, target));
        if arcs.is_empty() {
            model.add_constraint(vec![(value, 1.0)], Cmp::Eq, 0.0);
        } else {
            for (i, mut terms) in balance.into_iter().enumerate() {
                if terms.is_empty() {
                    continue;
                }
                if i == src {
                    terms.push((value, -1.0));
                } else if i == snk {
                    terms.push((value, 1.0));
                }
                model.add_constraint(terms, Cmp::Eq, 0.0);
            }
        }
        for (e, mut terms) in per_edge.into_iter().enumerate() {
            if !terms.is_empty() {
                terms.push((x[e], -1.0));
                model.add_constraint(terms, Cmp::Le, 0.0);
            }
        }
        if rule == DemandRule::EveryPair {
            model.add_constraint(vec![(value, 1.0)], Cmp::Eq, 1.0);
        }
        values.push(value);
        targets.push(target);
        all_arcs.push(arcs);
    }
    if rule == DemandRule::HalfTotal && !values.is_empty() {
        let half = demands.len() as f64 / 2.0;
        model.add_constraint(values.iter().map(|&v| (v, 1.0)).collect(), Cmp::Ge, half);
    }
    Ok(LayeredLp { model, x, value: values, target: targets, arcs: all_arcs })
}
