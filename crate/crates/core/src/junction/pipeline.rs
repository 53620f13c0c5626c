use std::fmt::Write;

use num_rational::BigRational;

use super::bucket::bucket_and_scale;
use super::layered::{build_gr, connectivity_suffices, prune_relevant, routable_through};
use super::lp::{join_trees, solve_label_cover_lp, JoinedTree};
use super::prune::median_prune;
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, bfs_in_subgraph, Bound, Demand, DemandSet, Direction, EdgeSet, Graph, INF};
use crate::rng::sub_seed;
use crate::rounding::{gkr_round, pass_count, tree_group_flow};

/// Flow shortfall tolerated before capacities are rescaled.
const FLOW_TOL: f64 = 1e-9;
const MAX_REPAIR_ROUNDS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JunctionOptions {
    /// Height of the shallow trees.
    pub sigma: usize,
    /// Per-side node budget; `sigma` is lowered step by step when exceeded.
    pub node_budget: usize,
    /// Fresh rounding seeds tried before giving up.
    pub max_retries: usize,
}

impl JunctionOptions {
    /// `sigma = ⌈1/ε⌉`.
    pub fn from_epsilon(epsilon: f64) -> Self {
        let sigma = if epsilon > 0.0 { (1.0 / epsilon).ceil().max(1.0) as usize } else { 2 };
        JunctionOptions { sigma, ..Self::default() }
    }
}

impl Default for JunctionOptions {
    fn default() -> Self {
        JunctionOptions { sigma: 2, node_budget: 4000, max_retries: 4 }
    }
}

/// Per-stage record of one pipeline run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PipelineTrace {
    pub root: usize,
    pub connectivity: bool,
    pub sigma: usize,
    pub gr_nodes: usize,
    pub gr_arcs: usize,
    pub relevant_nodes: usize,
    pub relevant_arcs: usize,
    pub tree_nodes: usize,
    pub tree_height: usize,
    pub lp_vars: usize,
    pub lp_constraints: usize,
    pub lp_value: f64,
    pub gammas: Vec<(Demand, String)>,
    pub i_star: usize,
    pub bucket: Vec<Demand>,
    pub repair_rounds: usize,
    pub passes: usize,
    pub attempts: usize,
    pub kept_tree_nodes: usize,
    pub edges: usize,
    pub satisfied: usize,
}

impl PipelineTrace {
    /// `key=value` lines.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let pair = |d: &Demand| format!("{}->{}", d.s, d.t);
        writeln!(out, "root={}", self.root).unwrap();
        writeln!(out, "mode={}", if self.connectivity { "connectivity" } else { "layered" }).unwrap();
        writeln!(out, "sigma={}", self.sigma).unwrap();
        writeln!(out, "gr_nodes={} gr_arcs={}", self.gr_nodes, self.gr_arcs).unwrap();
        writeln!(out, "relevant_nodes={} relevant_arcs={}", self.relevant_nodes, self.relevant_arcs).unwrap();
        writeln!(out, "tree_nodes={} tree_height={}", self.tree_nodes, self.tree_height).unwrap();
        writeln!(out, "lp_vars={} lp_constraints={} lp_value={:.6}", self.lp_vars, self.lp_constraints, self.lp_value)
            .unwrap();
        for (d, g) in &self.gammas {
            writeln!(out, "gamma[{}]={g}", pair(d)).unwrap();
        }
        let bucket: Vec<String> = self.bucket.iter().map(pair).collect();
        writeln!(out, "i_star={} bucket={}", self.i_star, bucket.join(",")).unwrap();
        writeln!(out, "repair_rounds={} passes={} attempts={}", self.repair_rounds, self.passes, self.attempts)
            .unwrap();
        writeln!(out, "kept_tree_nodes={} edges={} satisfied={}", self.kept_tree_nodes, self.edges, self.satisfied)
            .unwrap();
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JunctionOutcome {
    pub edges: EdgeSet,
    pub satisfied: DemandSet,
    pub trace: PipelineTrace,
}

impl JunctionOutcome {
    pub fn density(&self) -> f64 {
        self.edges.len() as f64 / self.satisfied.len() as f64
    }
}

/// Demands with an `s -> r -> t` route in `sol` within their bound.
pub fn satisfied_through(g: &Graph, sol: &EdgeSet, r: usize, demands: &DemandSet) -> Result<DemandSet> {
    let mask = g.mask(sol);
    let from_r = bfs_in_subgraph(g, r, Direction::Forward, Some(&mask));
    let to_r = bfs_in_subgraph(g, r, Direction::Backward, Some(&mask));
    let mut keep = Vec::new();
    for p in demands {
        let (a, b) = (to_r[p.s], from_r[p.t]);
        let ok = a != INF
            && b != INF
            && match p.bound {
                Bound::Unbounded => true,
                Bound::AtMost(d) => a + b <= d,
                Bound::Exact => a + b <= bfs_distances(g, p.s, Direction::Forward)?[p.t],
            };
        keep.push(ok);
    }
    let mut it = keep.into_iter();
    Ok(demands.filter(|_| it.next().unwrap()))
}

/// Group flows under `x`, rescaling until every group can draw a unit.
fn repair(tree: &JoinedTree, x: &mut [f64], groups: &[Vec<usize>]) -> usize {
    let masks: Vec<Vec<bool>> = groups
        .iter()
        .map(|g| {
            let mut m = vec![false; tree.len()];
            for &v in g {
                m[v] = true;
            }
            m
        })
        .collect();
    for round in 0..MAX_REPAIR_ROUNDS {
        let worst = masks.iter().map(|m| tree_group_flow(&tree.parent, x, m)).fold(f64::INFINITY, f64::min);
        if worst >= 1.0 - FLOW_TOL {
            return round;
        }
        if worst <= 0.0 {
            break;
        }
        for v in x.iter_mut().skip(1) {
            *v = (*v / worst).min(1.0);
        }
    }
    // fall back to opening every edge that already carries capacity
    for v in x.iter_mut().skip(1) {
        if *v > 0.0 {
            *v = 1.0;
        }
    }
    MAX_REPAIR_ROUNDS
}

/// Approximately minimum-density junction tree at root `r`.
///
/// Layered graph, shallow trees, label-cover relaxation, median pruning,
/// bucketing, tree rounding and projection back to `g`. Every reported pair
/// is re-checked for an `s -> r -> t` route within its bound in the output.
pub fn junction_tree_density(
    g: &Graph,
    demands: &DemandSet,
    r: usize,
    opts: &JunctionOptions,
    seed: u64,
) -> Result<JunctionOutcome> {
    let routable = routable_through(g, r, demands)?;
    if routable.is_empty() {
        return Err(Error::Infeasible(format!("no demand can be routed through {r} within its bound")));
    }
    let mut trace = PipelineTrace { root: r, ..PipelineTrace::default() };
    trace.connectivity = connectivity_suffices(g, &routable)?;
    let (full, inst) = build_gr(g, r, &routable, trace.connectivity)?;
    trace.gr_nodes = full.len();
    trace.gr_arcs = full.arcs.len();
    let (gr, inst) = prune_relevant(&full, &inst);
    trace.relevant_nodes = gr.len();
    trace.relevant_arcs = gr.arcs.len();

    let mut tree = None;
    for sigma in (1..=opts.sigma.max(1)).rev() {
        match join_trees(&gr, sigma, opts.node_budget) {
            Ok(t) => {
                tree = Some(t);
                break;
            }
            Err(Error::Budget(msg)) if sigma > 1 => log::debug!("root {r}: {msg}; lowering sigma"),
            Err(e) => return Err(e),
        }
    }
    let tree = tree.expect("sigma loop ends with a tree or an error");
    trace.sigma = tree.sigma;
    trace.tree_nodes = tree.len();
    trace.tree_height = tree.height();

    let sol = solve_label_cover_lp(&tree, &gr, &inst)?;
    trace.lp_vars = sol.vars;
    trace.lp_constraints = sol.constraints;
    trace.lp_value = sol.value;

    let masses: Vec<_> = sol.pairs.iter().map(|p| p.rep_masses(&sol.z)).collect();
    let pruned = median_prune(&masses);
    let gammas: Vec<Option<BigRational>> = pruned.iter().map(|p| p.as_ref().map(|p| p.gamma.clone())).collect();
    for (ps, g) in sol.pairs.iter().zip(&gammas) {
        let shown = g.as_ref().map_or("0".to_string(), |g| g.to_string());
        trace.gammas.push((inst.pairs[ps.pair].demand, shown));
    }
    let buckets = bucket_and_scale(&gammas, &sol.x)
        .ok_or_else(|| Error::Numerical("label-cover solution carries no mass".into()))?;
    trace.i_star = buckets.i_star;
    let mut groups = Vec::new();
    for &m in &buckets.members {
        let p = pruned[m].as_ref().unwrap();
        trace.bucket.push(inst.pairs[sol.pairs[m].pair].demand);
        groups.push(p.s_tilde.clone());
        groups.push(p.t_tilde.clone());
    }
    let mut x_star = buckets.x_star;
    trace.repair_rounds = repair(&tree, &mut x_star, &groups);
    trace.passes = pass_count(tree.height(), groups.len(), tree.len());

    for attempt in 0..opts.max_retries.max(1) {
        trace.attempts = attempt + 1;
        let kept = match gkr_round(&tree.parent, &x_star, &groups, sub_seed(seed, "junction", attempt as u64)) {
            Ok(k) => k,
            Err(Error::RoundingExhausted { .. }) => continue,
            Err(e) => return Err(e),
        };
        let arcs = (1..tree.len()).filter(|&v| kept[v]).flat_map(|v| tree.arcs[v].iter().copied());
        let edges = EdgeSet::new(gr.edges_of(arcs));
        let satisfied = satisfied_through(g, &edges, r, &routable)?;
        if satisfied.is_empty() {
            continue;
        }
        trace.kept_tree_nodes = kept.iter().filter(|&&k| k).count();
        trace.edges = edges.len();
        trace.satisfied = satisfied.len();
        return Ok(JunctionOutcome { edges, satisfied, trace });
    }
    Err(Error::RoundingExhausted { rounds: opts.max_retries.max(1) })
}
