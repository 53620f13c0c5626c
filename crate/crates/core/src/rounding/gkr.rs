use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::{self, Rng};

/// Attempts allowed before [`gkr_round`] gives up.
pub const GKR_MAX_ATTEMPTS: usize = 64;

/// Trees here are parent arrays with node 0 as the root and every parent
/// index smaller than its child's; a capacity lives on the edge into a node.
fn check_tree(parent: &[Option<usize>], x: &[f64]) -> Result<()> {
    if parent.is_empty() || parent[0].is_some() || x.len() != parent.len() {
        return Err(Error::Invalid("tree must be non-empty, rooted at node 0, with one capacity per node".into()));
    }
    if (1..parent.len()).any(|v| parent[v].is_none_or(|p| p >= v)) {
        return Err(Error::Invalid("tree nodes must follow their parents".into()));
    }
    Ok(())
}

/// `x_v <- min(x_v, x_parent)` top-down, with every capacity clamped to `[0,1]`.
pub fn monotonize(parent: &[Option<usize>], x: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = x.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    out[0] = 1.0;
    for v in 1..parent.len() {
        let p = parent[v].unwrap();
        out[v] = out[v].min(out[p]);
    }
    out
}

/// One dependent-rounding pass over monotone capacities: a node joins with
/// probability `x_v / x_parent` given that its parent joined.
pub fn gkr_pass(parent: &[Option<usize>], x: &[f64], rng: &mut Rng) -> Vec<bool> {
    let mut keep = vec![false; parent.len()];
    keep[0] = true;
    for v in 1..parent.len() {
        let p = parent[v].unwrap();
        let prob = if x[p] > 0.0 { (x[v] / x[p]).min(1.0) } else { 0.0 };
        // draw unconditionally so each node owns a fixed stream position
        let u: f64 = rng.random();
        keep[v] = keep[p] && u < prob;
    }
    keep
}

/// `⌈8 · height · ln(2 · groups · nodes)⌉`.
pub fn pass_count(height: usize, groups: usize, nodes: usize) -> usize {
    let arg = (2 * groups.max(1) * nodes.max(1)) as f64;
    ((8 * height.max(1)) as f64 * arg.ln()).ceil().max(1.0) as usize
}

/// Maximum root-to-group flow in a tree under capacities `x` (edge into each node).
pub fn tree_group_flow(parent: &[Option<usize>], x: &[f64], group: &[bool]) -> f64 {
    let mut below = vec![0.0f64; parent.len()];
    let mut flow = vec![0.0f64; parent.len()];
    for v in (0..parent.len()).rev() {
        let through = if group[v] { f64::INFINITY } else { below[v] };
        flow[v] = if v == 0 { through } else { through.min(x[v]) };
        if let Some(p) = parent[v] {
            below[p] += flow[v];
        }
    }
    flow[0]
}

/// Rounds fractional tree capacities to a subtree that touches every group.
///
/// Each attempt is the union of [`pass_count`] independent passes; attempts
/// repeat with fresh streams up to [`GKR_MAX_ATTEMPTS`]. Leaves outside every
/// group are then pruned. Returns the kept-node mask (root always kept).
pub fn gkr_round(parent: &[Option<usize>], x: &[f64], groups: &[Vec<usize>], seed: u64) -> Result<Vec<bool>> {
    check_tree(parent, x)?;
    let n = parent.len();
    let xm = monotonize(parent, x);
    let mut depth = vec![0usize; n];
    for v in 1..n {
        depth[v] = depth[parent[v].unwrap()] + 1;
    }
    let height = depth.iter().copied().max().unwrap_or(0);
    let passes = pass_count(height, groups.len(), n);
    let mut in_group = vec![false; n];
    for g in groups {
        for &v in g {
            in_group[v] = true;
        }
    }
    for attempt in 0..GKR_MAX_ATTEMPTS {
        let mut r = rng::stream(seed, "gkr", attempt as u64);
        let mut keep = vec![false; n];
        for _ in 0..passes {
            for (k, p) in keep.iter_mut().zip(gkr_pass(parent, &xm, &mut r)) {
                *k |= p;
            }
        }
        if groups.iter().all(|g| g.iter().any(|&v| keep[v])) {
            log::debug!("gkr: all {} groups hit on attempt {} ({passes} passes)", groups.len(), attempt + 1);
            prune(parent, &mut keep, &in_group);
            return Ok(keep);
        }
    }
    Err(Error::RoundingExhausted { rounds: GKR_MAX_ATTEMPTS })
}

fn prune(parent: &[Option<usize>], keep: &mut [bool], in_group: &[bool]) {
    let mut kids = vec![0usize; parent.len()];
    for v in 1..parent.len() {
        if keep[v] {
            kids[parent[v].unwrap()] += 1;
        }
    }
    // children follow parents, so a reverse sweep sees every subtree before its root
    for v in (1..parent.len()).rev() {
        if keep[v] && kids[v] == 0 && !in_group[v] {
            keep[v] = false;
            kids[parent[v].unwrap()] -= 1;
        }
    }
}
