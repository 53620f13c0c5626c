use std::collections::{BTreeMap, VecDeque};

use super::{Demand, DemandSet, Dist, EdgeId, EdgeSet, Graph, INF};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Distances `source -> v`.
    Forward,
    /// Distances `v -> source`.
    Backward,
}

pub fn bfs_distances(g: &Graph, source: usize, dir: Direction) -> Result<Vec<Dist>> {
    g.check_vertex(source)?;
    Ok(bfs_in_subgraph(g, source, dir, None))
}

/// BFS restricted to edges whose mask entry is set (all edges when `mask` is `None`).
pub fn bfs_in_subgraph(g: &Graph, source: usize, dir: Direction, mask: Option<&[bool]>) -> Vec<Dist> {
    let mut dist = vec![INF; g.n()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = match dir {
            Direction::Forward => g.out_edges(u),
            Direction::Backward => g.in_edges(u),
        };
        for &(w, e) in next {
            if mask.is_some_and(|m| !m[e]) || dist[w] != INF {
                continue;
            }
            dist[w] = dist[u] + 1;
            queue.push_back(w);
        }
    }
    dist
}

/// Lexicographically smallest shortest path `u -> v` as a vertex sequence.
///
/// `dist_to_v` must hold backward distances to `v`.
pub(crate) fn canonical_path(g: &Graph, u: usize, dist_to_v: &[Dist]) -> Option<Vec<usize>> {
    if dist_to_v[u] == INF {
        return None;
    }
    let mut path = vec![u];
    let mut cur = u;
    while dist_to_v[cur] > 0 {
        let want = dist_to_v[cur] - 1;
        // out_edges is sorted by head, so the first match is the smallest id
        let &(next, _) = g.out_edges(cur).iter().find(|&&(w, _)| dist_to_v[w] == want)?;
        path.push(next);
        cur = next;
    }
    Some(path)
}

/// The canonical shortest path `u -> v`: among all shortest paths, the one with
/// the lexicographically smallest vertex sequence.
pub fn shortest_path(g: &Graph, u: usize, v: usize) -> Result<Option<Vec<usize>>> {
    g.check_vertex(u)?;
    let back = bfs_distances(g, v, Direction::Backward)?;
    Ok(canonical_path(g, u, &back))
}

pub(crate) fn path_edge_ids(g: &Graph, path: &[usize]) -> Vec<EdgeId> {
    path.windows(2).map(|w| g.edge_id(w[0], w[1]).expect("path follows graph edges")).collect()
}

/// Union of all shortest `s -> t` paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGraph {
    pub edges: EdgeSet,
    /// Sorted vertex set `V^{s,t}`.
    pub vertices: Vec<usize>,
    pub distance: Dist,
}

pub fn local_graph(g: &Graph, s: usize, t: usize) -> Result<LocalGraph> {
    let from_s = bfs_distances(g, s, Direction::Forward)?;
    let to_t = bfs_distances(g, t, Direction::Backward)?;
    local_graph_from(g, s, t, &from_s, &to_t)
}

pub(crate) fn local_graph_from(g: &Graph, s: usize, t: usize, from_s: &[Dist], to_t: &[Dist]) -> Result<LocalGraph> {
    let d = from_s[t];
    if d == INF {
        return Err(Error::NoPath { s, t });
    }
    let mut on_path = vec![false; g.n()];
    on_path[s] = true;
    on_path[t] = true;
    let mut edges = Vec::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if from_s[u] != INF && to_t[v] != INF && from_s[u] + 1 + to_t[v] == d {
            edges.push(id);
            on_path[u] = true;
            on_path[v] = true;
        }
    }
    let vertices = (0..g.n()).filter(|&v| on_path[v]).collect();
    Ok(LocalGraph { edges: EdgeSet::new(edges), vertices, distance: d })
}

/// Thick pairs have `|V^{s,t}| >= k`; everything else is thin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thickness {
    pub thick: DemandSet,
    pub thin: DemandSet,
}

pub fn classify_thickness(g: &Graph, demands: &DemandSet, k: f64) -> Result<Thickness> {
    let mut thick = Vec::new();
    let mut thin = Vec::new();
    for p in demands {
        let lg = local_graph(g, p.s, p.t)?;
        if lg.vertices.len() as f64 >= k {
            thick.push(*p);
        } else {
            thin.push(*p);
        }
    }
    Ok(Thickness { thick: DemandSet::new(thick)?, thin: DemandSet::new(thin)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub demand: Demand,
    /// `d_G(s,t)`.
    pub original: Dist,
    /// `d_H(s,t)`, [`INF`] when disconnected.
    pub achieved: Dist,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub pairs: Vec<PairReport>,
}

impl VerifyReport {
    pub fn all_satisfied(&self) -> bool {
        self.pairs.iter().all(|p| p.satisfied)
    }

    pub fn satisfied(&self) -> impl Iterator<Item = &Demand> {
        self.pairs.iter().filter(|p| p.satisfied).map(|p| &p.demand)
    }

    pub fn violated(&self) -> impl Iterator<Item = &PairReport> {
        self.pairs.iter().filter(|p| !p.satisfied)
    }
}

/// Checks every demand against the sub-graph `sol`.
pub fn verify_solution(g: &Graph, sol: &EdgeSet, demands: &DemandSet) -> VerifyReport {
    let mask = g.mask(sol);
    let mut cache: BTreeMap<usize, (Vec<Dist>, Vec<Dist>)> = BTreeMap::new();
    let pairs = demands
        .iter()
        .map(|p| {
            let (full, sub) = cache.entry(p.s).or_insert_with(|| {
                (
                    bfs_in_subgraph(g, p.s, Direction::Forward, None),
                    bfs_in_subgraph(g, p.s, Direction::Forward, Some(&mask)),
                )
            });
            let original = full[p.t];
            let achieved = sub[p.t];
            PairReport { demand: *p, original, achieved, satisfied: p.bound.allows(original, achieved) }
        })
        .collect();
    VerifyReport { pairs }
}

/// Groups pairs by `d* = 2^⌊log2 d(s,t)⌋`, so each bucket holds distances in `[d*, 2d*)`.
pub fn distance_buckets(g: &Graph, demands: &DemandSet) -> Result<BTreeMap<Dist, DemandSet>> {
    let mut raw: BTreeMap<Dist, Vec<Demand>> = BTreeMap::new();
    for p in demands {
        let d = bfs_distances(g, p.s, Direction::Forward)?[p.t];
        if d == INF {
            return Err(Error::NoPath { s: p.s, t: p.t });
        }
        let bucket = 1 << (31 - d.leading_zeros());
        raw.entry(bucket).or_default().push(*p);
    }
    raw.into_iter().map(|(k, v)| Ok((k, DemandSet::new(v)?))).collect()
}

/// Sources of `bucket` within distance `< 2d*` of `u`, and sinks within `< 2d*` from `u`.
pub fn nearby_terminals(g: &Graph, u: usize, d_star: Dist, bucket: &DemandSet) -> Result<(Vec<usize>, Vec<usize>)> {
    let to_u = bfs_distances(g, u, Direction::Backward)?;
    let from_u = bfs_distances(g, u, Direction::Forward)?;
    let limit = 2 * d_star;
    let mut sources: Vec<usize> = bucket.iter().map(|p| p.s).filter(|&s| to_u[s] < limit).collect();
    let mut sinks: Vec<usize> = bucket.iter().map(|p| p.t).filter(|&t| from_u[t] < limit).collect();
    sources.sort_unstable();
    sources.dedup();
    sinks.sort_unstable();
    sinks.dedup();
    Ok((sources, sinks))
}

/// Demand pairs whose requirement is met, used by the drivers after each phase.
pub(crate) fn satisfied_pairs(g: &Graph, sol: &EdgeSet, demands: &DemandSet) -> DemandSet {
    let report = verify_solution(g, sol, demands);
    DemandSet::new(report.satisfied().copied()).expect("subset of a valid demand set")
}
