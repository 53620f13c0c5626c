use rand::seq::SliceRandom;

use super::{canonicalize, extract_covers, min_rep, rep_cover_verify, verify_additive, SpannerInstance};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, INF};
use crate::rng::stream;

/// Largest number of free edges [`soundness_scan`] will enumerate.
pub const FREE_EDGE_LIMIT: usize = 24;

/// Outcome of exhaustively checking every spanner of a small instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub forced: usize,
    pub free: usize,
    pub spanners: usize,
    pub min_spanner: usize,
    pub opt_mr: usize,
    pub x: usize,
    /// Largest `|H'| / |H|` seen, as `(|H'|, |H|)`.
    pub worst_growth: (usize, usize),
    pub failures: Vec<String>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.spanners > 0
    }
}

/// Edges whose endpoints drift past `1 + stretch` once the edge is removed;
/// every spanner contains them.
fn forced_edges(g: &SpannerInstance) -> Vec<bool> {
    let graph = g.graph();
    let k = g.stretch();
    let mut mask = vec![true; graph.m()];
    let mut forced = vec![false; graph.m()];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        mask[e] = false;
        let d = graph.bfs(u, Some(&mask))[v];
        forced[e] = d == INF || d > 1 + k;
        mask[e] = true;
    }
    forced
}

/// Bitset additive check with precomputed distances in `G`; stops at the
/// first level where some due vertex is still unreached.
struct FastCheck {
    n: usize,
    /// `due[s][l]`: vertices that must be reached from `s` within `l` hops.
    due: Vec<Vec<u128>>,
}

impl FastCheck {
    fn new(g: &SpannerInstance) -> Self {
        let graph = g.graph();
        let k = g.stretch();
        let due = (0..graph.n())
            .map(|s| {
                let d = graph.bfs(s, None);
                let top = d.iter().filter(|&&x| x != INF).max().copied().unwrap_or(0) + k;
                let mut levels = vec![0u128; top as usize + 1];
                for (v, &dv) in d.iter().enumerate() {
                    if dv != INF {
                        for l in &mut levels[(dv + k) as usize..] {
                            *l |= 1 << v;
                        }
                    }
                }
                levels
            })
            .collect();
        FastCheck { n: graph.n(), due }
    }

    fn spans(&self, adj: &[u128]) -> bool {
        (0..self.n).all(|s| {
            let due = &self.due[s];
            let mut seen: u128 = 1 << s;
            let mut frontier = seen;
            for &need in due {
                if need & !seen != 0 {
                    return false;
                }
                let mut next = 0;
                let mut f = frontier;
                while f != 0 {
                    let v = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= adj[v];
                }
                frontier = next & !seen;
                seen |= frontier;
            }
            true
        })
    }
}

/// Enumerates every spanner of `g` (forced edges always kept, all subsets of
/// the rest tried) and checks canonicalization growth, charge injectivity,
/// cover extraction and the `x · OPT / (growth factor)` lower bound on each.
pub fn soundness_scan(g: &SpannerInstance) -> Result<SoundnessReport> {
    let graph = g.graph();
    if graph.n() > 128 {
        return Err(Error::Budget(format!("{} vertices exceed the 128-vertex scan", graph.n())));
    }
    let forced = forced_edges(g);
    let free: Vec<usize> = (0..graph.m()).filter(|&e| !forced[e]).collect();
    if free.len() > FREE_EDGE_LIMIT {
        return Err(Error::Budget(format!("{} free edges exceed the limit of {FREE_EDGE_LIMIT}", free.len())));
    }
    let opt_mr = min_rep(g.minrep()).ok_or_else(|| Error::Budget("Min-Rep instance too large".into()))?.len();
    let growth = if g.stretch() == 1 { 4 } else { 2 * g.stretch() as usize };
    let mut base = vec![0u128; graph.n()];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if forced[e] {
            base[u] |= 1 << v;
            base[v] |= 1 << u;
        }
    }
    let check = FastCheck::new(g);
    let n_forced = graph.m() - free.len();
    let mut report = SoundnessReport {
        forced: n_forced,
        free: free.len(),
        spanners: 0,
        min_spanner: usize::MAX,
        opt_mr,
        x: g.x(),
        worst_growth: (0, 1),
        failures: Vec::new(),
    };
    for subset in 0u64..1 << free.len() {
        let mut adj = base.clone();
        let mut bits = subset;
        while bits != 0 {
            let (u, v) = graph.edge(free[bits.trailing_zeros() as usize]);
            bits &= bits - 1;
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        if !check.spans(&adj) {
            continue;
        }
        let h = EdgeSet::new(
            (0..graph.m())
                .filter(|&e| forced[e])
                .chain(free.iter().enumerate().filter(|&(b, _)| subset >> b & 1 == 1).map(|(_, &e)| e)),
        );
        report.spanners += 1;
        report.min_spanner = report.min_spanner.min(h.len());
        let fail = |msg: String| format!("subset {subset:#x}: {msg}");
        if !verify_additive(graph, &h, g.stretch()) {
            report.failures.push(fail("bitset check disagrees with BFS".into()));
            continue;
        }
        let out = match canonicalize(g, &h) {
            Ok(out) => out,
            Err(e) => {
                report.failures.push(fail(e.to_string()));
                continue;
            }
        };
        let (hp, hl) = (out.edges.len(), h.len());
        if hp * report.worst_growth.1 > report.worst_growth.0 * hl {
            report.worst_growth = (hp, hl);
        }
        if hp > growth * hl {
            report.failures.push(fail(format!("|H'| = {hp} > {growth}·{hl}")));
        }
        if !out.injective() {
            report.failures.push(fail("two charges on one outer edge".into()));
        }
        match extract_covers(g, &out.edges) {
            Ok(covers) if covers.len() == g.x() && covers.iter().all(|c| rep_cover_verify(g.minrep(), c)) => {}
            Ok(_) => report.failures.push(fail("an extracted cover is invalid".into())),
            Err(e) => report.failures.push(fail(e.to_string())),
        }
        if growth * hl < g.x() * opt_mr {
            report.failures.push(fail(format!("|H| = {hl} below x·OPT/{growth}")));
        }
    }
    Ok(report)
}

/// Drops edges in a seeded random order while the stretch still holds.
pub fn greedy_minimal_spanner(g: &SpannerInstance, seed: u64) -> EdgeSet {
    let graph = g.graph();
    let mut order: Vec<usize> = (0..graph.m()).collect();
    order.shuffle(&mut stream(seed, "greedy-spanner", 0));
    let mut keep = vec![true; graph.m()];
    for e in order {
        keep[e] = false;
        let h = EdgeSet::new((0..graph.m()).filter(|&id| keep[id]));
        if !verify_additive(graph, &h, g.stretch()) {
            keep[e] = true;
        }
    }
    EdgeSet::new((0..graph.m()).filter(|&id| keep[id]))
}
