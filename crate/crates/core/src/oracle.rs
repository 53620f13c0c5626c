//! Brute-force exact solvers for small instances.
//!
//! Both subset searches only range over *useful* edges, those lying on some
//! admissible route of some pair, and refuse when that set exceeds the budget.

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, DemandSet, Direction, Dist, EdgeId, EdgeSet, Graph, INF};

/// Default cap on useful edges for [`exact_min_solution`].
pub const SOLUTION_BUDGET: usize = 22;
/// Default cap on useful edges for [`exact_min_density_junction_tree`].
pub const JUNCTION_BUDGET: usize = 18;
/// Environment override for [`SOLUTION_BUDGET`].
pub const BUDGET_ENV: &str = "SPANNER_ORACLE_BUDGET";
/// Longest distance [`enumerate_shortest_paths`] accepts.
pub const PATH_ENUM_LIMIT: Dist = 8;
const MAX_VERTICES: usize = 128;

/// [`SOLUTION_BUDGET`] unless overridden through [`BUDGET_ENV`].
pub fn solution_budget() -> usize {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(SOLUTION_BUDGET)
}

/// Largest admissible route length per pair, `None` when unbounded.
fn limits(g: &Graph, demands: &DemandSet) -> Result<Vec<(Vec<Dist>, Vec<Dist>, Option<Dist>)>> {
    demands
        .iter()
        .map(|p| {
            let from_s = bfs_distances(g, p.s, Direction::Forward)?;
            let to_t = bfs_distances(g, p.t, Direction::Backward)?;
            if from_s[p.t] == INF {
                return Err(Error::Infeasible(format!("demand ({}, {}) is unreachable", p.s, p.t)));
            }
            let lim = p.bound.limit(from_s[p.t]);
            if lim.is_some_and(|l| l < from_s[p.t]) {
                return Err(Error::Infeasible(format!("demand ({}, {}) has a bound below its distance", p.s, p.t)));
            }
            Ok((from_s, to_t, lim))
        })
        .collect()
}

fn fits(a: Dist, b: Dist, lim: Option<Dist>) -> bool {
    a != INF && b != INF && lim.is_none_or(|l| a + 1 + b <= l)
}

/// Adjacency bitsets of the chosen edges.
struct Bits<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
}

impl Bits<'_> {
    fn adjacency(&self, subset: u64, forward: bool) -> Vec<u128> {
        let mut adj = vec![0u128; self.n];
        let mut rest = subset;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (u, v) = self.edges[i];
            if forward {
                adj[u] |= 1 << v;
            } else {
                adj[v] |= 1 << u;
            }
        }
        adj
    }
}

/// Level-synchronous BFS on bitsets; `INF` when `to` is unreachable within `cap` hops.
fn hops(adj: &[u128], from: usize, to: usize, cap: Option<Dist>) -> Dist {
    let mut seen: u128 = 1 << from;
    let mut frontier = seen;
    let mut d = 0;
    while frontier != 0 {
        if frontier >> to & 1 == 1 {
            return d;
        }
        if cap.is_some_and(|c| d >= c) {
            break;
        }
        let mut next = 0u128;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        frontier = next & !seen;
        seen |= next;
        d += 1;
    }
    INF
}

fn check_size(g: &Graph) -> Result<()> {
    if g.n() > MAX_VERTICES {
        return Err(Error::Budget(format!("oracle handles at most {MAX_VERTICES} vertices, got {}", g.n())));
    }
    Ok(())
}

/// Next subset with the same popcount (Gosper's hack).
fn next_combination(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution {
    pub opt: usize,
    pub witness: EdgeSet,
}

/// Minimum-cardinality edge set meeting every demand (exact distance, bound
/// or reachability), by ascending-cardinality search over useful edges.
pub fn exact_min_solution(g: &Graph, demands: &DemandSet) -> Result<ExactSolution> {
    exact_min_solution_with_budget(g, demands, solution_budget())
}

pub fn exact_min_solution_with_budget(g: &Graph, demands: &DemandSet, budget: usize) -> Result<ExactSolution> {
    check_size(g)?;
    let lim = limits(g, demands)?;
    let useful: Vec<EdgeId> = (0..g.m())
        .filter(|&e| {
            let (u, v) = g.edge(e);
            lim.iter().any(|(fs, tt, l)| fits(fs[u], tt[v], *l))
        })
        .collect();
    if useful.len() > budget.min(63) {
        return Err(Error::Budget(format!("{} useful edges exceed the oracle budget of {budget}", useful.len())));
    }
    if demands.is_empty() {
        return Ok(ExactSolution { opt: 0, witness: EdgeSet::empty() });
    }
    let pairs: Vec<(usize, usize, Option<Dist>)> =
        demands.iter().zip(&lim).map(|(p, (_, _, l))| (p.s, p.t, *l)).collect();
    let ends: Vec<(usize, usize)> = useful.iter().map(|&e| g.edge(e)).collect();
    let bits = Bits { n: g.n(), edges: &ends };
    // every source needs a chosen out-edge and every sink a chosen in-edge
    let mut required = Vec::new();
    for &(s, t, _) in &pairs {
        let out: u64 = ends.iter().enumerate().filter(|(_, e)| e.0 == s).map(|(i, _)| 1 << i).sum();
        let inn: u64 = ends.iter().enumerate().filter(|(_, e)| e.1 == t).map(|(i, _)| 1 << i).sum();
        required.push(out);
        required.push(inn);
    }
    let lower = lim.iter().zip(demands.iter()).map(|((fs, _, _), p)| fs[p.t] as usize).max().unwrap_or(0);
    let total = useful.len();
    for size in lower.max(1)..=total {
        let mut subset: u64 = (1u64 << size) - 1;
        while subset < 1u64 << total {
            if required.iter().all(|&r| r & subset != 0) {
                let adj = bits.adjacency(subset, true);
                if pairs.iter().all(|&(s, t, l)| hops(&adj, s, t, l) != INF) {
                    let witness = EdgeSet::new((0..total).filter(|&i| subset >> i & 1 == 1).map(|i| useful[i]));
                    return Ok(ExactSolution { opt: size, witness });
                }
            }
            if size == 0 {
                break;
            }
            subset = next_combination(subset);
        }
    }
    Err(Error::Infeasible("no edge subset meets every demand".into()))
}

/// Best junction tree found by [`exact_min_density_junction_tree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityOpt {
    pub edges: EdgeSet,
    /// Pairs with an `s -> r -> t` route in `edges` within their bound.
    pub satisfied: usize,
}

impl DensityOpt {
    pub fn density(&self) -> f64 {
        self.edges.len() as f64 / self.satisfied as f64
    }
}

/// Minimum `|F| / #{pairs routed through r within bound}` over all edge
/// subsets; ties go to the smaller `|F|`. `Ok(None)` when no pair can be
/// routed through `r` at all.
pub fn exact_min_density_junction_tree(g: &Graph, demands: &DemandSet, r: usize) -> Result<Option<DensityOpt>> {
    check_size(g)?;
    g.check_vertex(r)?;
    let lim = limits(g, demands)?;
    let from_r = bfs_distances(g, r, Direction::Forward)?;
    let to_r = bfs_distances(g, r, Direction::Backward)?;
    let mut pairs = Vec::new();
    let mut useful = vec![false; g.m()];
    for (p, (fs, tt, l)) in demands.iter().zip(&lim) {
        let via = fs[r].saturating_add(from_r[p.t]);
        if fs[r] == INF || from_r[p.t] == INF || l.is_some_and(|l| via > l) {
            continue;
        }
        pairs.push((p.s, p.t, *l));
        // slack left once the other half takes its shortest route
        let slack = l.map(|l| l - via);
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let first = fs[u] != INF && to_r[v] != INF && slack.is_none_or(|x| fs[u] + 1 + to_r[v] <= fs[r] + x);
            let second =
                from_r[u] != INF && tt[v] != INF && slack.is_none_or(|x| from_r[u] + 1 + tt[v] <= from_r[p.t] + x);
            useful[e] |= first || second;
        }
    }
    if pairs.is_empty() {
        return Ok(None);
    }
    let useful: Vec<EdgeId> = (0..g.m()).filter(|&e| useful[e]).collect();
    if useful.len() > JUNCTION_BUDGET {
        return Err(Error::Budget(format!(
            "{} useful edges exceed the junction oracle budget of {JUNCTION_BUDGET}",
            useful.len()
        )));
    }
    let ends: Vec<(usize, usize)> = useful.iter().map(|&e| g.edge(e)).collect();
    let bits = Bits { n: g.n(), edges: &ends };
    let mut best: Option<(u64, usize, usize)> = None;
    for subset in 1u64..1 << useful.len() {
        let size = subset.count_ones() as usize;
        // even satisfying every pair cannot beat the incumbent
        if best.is_some_and(|(_, bs, bsat)| size * bsat > bs * pairs.len()) {
            continue;
        }
        let fwd = bits.adjacency(subset, true);
        let bwd = bits.adjacency(subset, false);
        let sat = pairs
            .iter()
            .filter(|&&(s, t, total)| {
                let a = hops(&bwd, r, s, None);
                let b = hops(&fwd, r, t, None);
                a != INF && b != INF && total.is_none_or(|l| a + b <= l)
            })
            .count();
        if sat == 0 {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, bs, bsat)) => size * bsat < bs * sat || (size * bsat == bs * sat && size < bs),
        };
        if better {
            best = Some((subset, size, sat));
        }
    }
    Ok(best.map(|(subset, _, satisfied)| DensityOpt {
        edges: EdgeSet::new((0..useful.len()).filter(|&i| subset >> i & 1 == 1).map(|i| useful[i])),
        satisfied,
    }))
}

/// All shortest `s -> t` paths as vertex sequences, in lexicographic order.
pub fn enumerate_shortest_paths(g: &Graph, s: usize, t: usize) -> Result<Vec<Vec<usize>>> {
    let from_s = bfs_distances(g, s, Direction::Forward)?;
    let to_t = bfs_distances(g, t, Direction::Backward)?;
    let d = from_s[t];
    if d == INF {
        return Ok(Vec::new());
    }
    if d > PATH_ENUM_LIMIT {
        return Err(Error::Budget(format!("distance {d} exceeds the enumeration limit {PATH_ENUM_LIMIT}")));
    }
    fn walk(g: &Graph, to_t: &[Dist], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let cur = *path.last().unwrap();
        if to_t[cur] == 0 {
            out.push(path.clone());
            return;
        }
        for &(w, _) in g.out_edges(cur) {
            if to_t[w] != INF && to_t[w] + 1 == to_t[cur] {
                path.push(w);
                walk(g, to_t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, &to_t, &mut vec![s], &mut out);
    Ok(out)
}
