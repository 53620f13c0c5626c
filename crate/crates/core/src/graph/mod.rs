//! Directed unweighted graphs, demand pairs and edge subsets.
//!
//! Vertices are dense ids `0..n`. Edges are stored in a canonical sorted
//! order and an edge id is the position of the edge in that order, so any
//! [`EdgeSet`] is independent of the order in which edges were supplied.

mod io;
mod metric;
mod paths;

pub(crate) use io::{parse_header_and_pairs, parse_pairs};
pub(crate) use paths::{path_edge_ids, satisfied_pairs};

pub use io::{format_demands, format_graph, parse_demands, parse_edge_list, parse_graph};
pub use metric::{MetricCompletion, MetricView, Reversed, Witness};
pub use paths::{
    bfs_distances, bfs_in_subgraph, classify_thickness, distance_buckets, local_graph, nearby_terminals, shortest_path,
    verify_solution, Direction, LocalGraph, PairReport, Thickness, VerifyReport,
};

use crate::error::{Error, Result};

/// Hop distance; [`INF`] marks an unreachable vertex.
pub type Dist = u32;
pub const INF: Dist = u32::MAX;

pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out_adj: Vec<Vec<(usize, EdgeId)>>,
    in_adj: Vec<Vec<(usize, EdgeId)>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and endpoints `>= n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            out_adj[u].push((v, id));
            in_adj[v].push((u, id));
        }
        for list in in_adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, out_adj, in_adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<EdgeId> {
        self.edges.binary_search(&(u, v)).ok()
    }

    /// Out-neighbours of `u` with edge ids, sorted by neighbour id.
    pub fn out_edges(&self, u: usize) -> &[(usize, EdgeId)] {
        &self.out_adj[u]
    }

    /// In-neighbours of `v` with edge ids, sorted by neighbour id.
    pub fn in_edges(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.in_adj[v]
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet((0..self.m()).collect())
    }

    /// Boolean membership mask over edge ids.
    pub fn mask(&self, set: &EdgeSet) -> Vec<bool> {
        let mut mask = vec![false; self.m()];
        for &e in set.ids() {
            mask[e] = true;
        }
        mask
    }
}

/// A subset of a graph's edges, kept as sorted unique edge ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(Vec<EdgeId>);

impl EdgeSet {
    pub fn new(ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut v: Vec<EdgeId> = ids.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        EdgeSet(v)
    }

    pub fn empty() -> Self {
        EdgeSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn insert(&mut self, e: EdgeId) {
        if let Err(pos) = self.0.binary_search(&e) {
            self.0.insert(pos, e);
        }
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        EdgeSet(out)
    }

    pub fn extend_from(&mut self, other: &EdgeSet) {
        *self = self.union(other);
    }

    pub fn is_subset_of(&self, g: &Graph) -> bool {
        self.0.last().is_none_or(|&e| e < g.m())
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet::new(iter)
    }
}

/// Distance requirement attached to a demand pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    /// Preserver pair: the shortest-path distance must survive.
    Exact,
    /// Spanner pair: `d_H(s,t) <= D`.
    AtMost(Dist),
    /// Steiner-forest pair: any `s -> t` path.
    Unbounded,
}

impl Bound {
    /// Largest admissible distance given `d_G(s,t)`; `None` means connectivity only.
    pub fn limit(self, d_g: Dist) -> Option<Dist> {
        match self {
            Bound::Exact => Some(d_g),
            Bound::AtMost(d) => Some(d),
            Bound::Unbounded => None,
        }
    }

    pub fn allows(self, d_g: Dist, d_h: Dist) -> bool {
        if d_h == INF {
            return false;
        }
        self.limit(d_g).is_none_or(|lim| d_h <= lim)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Demand {
    pub s: usize,
    pub t: usize,
    pub bound: Bound,
}

impl Demand {
    pub fn new(s: usize, t: usize, bound: Bound) -> Self {
        Demand { s, t, bound }
    }
}

/// Demand pairs; each ordered pair `(s,t)` appears at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DemandSet {
    pairs: Vec<Demand>,
}

impl DemandSet {
    pub fn new(pairs: impl IntoIterator<Item = Demand>) -> Result<Self> {
        let pairs: Vec<Demand> = pairs.into_iter().collect();
        let mut seen = std::collections::HashSet::new();
        for p in &pairs {
            if p.s == p.t {
                return Err(Error::TrivialDemand(p.s));
            }
            if !seen.insert((p.s, p.t)) {
                return Err(Error::DuplicateDemand(p.s, p.t));
            }
        }
        Ok(DemandSet { pairs })
    }

    pub fn empty() -> Self {
        DemandSet { pairs: Vec::new() }
    }

    /// All pairs flagged with the same bound.
    pub fn uniform(pairs: impl IntoIterator<Item = (usize, usize)>, bound: Bound) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(s, t)| Demand::new(s, t, bound)))
    }

    pub fn pairs(&self) -> &[Demand] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Demand> {
        self.pairs.iter()
    }

    /// Subset by predicate, keeping order.
    pub fn filter(&self, mut keep: impl FnMut(&Demand) -> bool) -> DemandSet {
        DemandSet { pairs: self.pairs.iter().copied().filter(|p| keep(p)).collect() }
    }

    pub fn with_bound(&self, bound: Bound) -> DemandSet {
        DemandSet { pairs: self.pairs.iter().map(|p| Demand { bound, ..*p }).collect() }
    }

    /// Rejects out-of-range endpoints, unreachable pairs and bounds below `d_G(s,t)`.
    pub fn check_feasible(&self, g: &Graph) -> Result<()> {
        for p in &self.pairs {
            g.check_vertex(p.s)?;
            g.check_vertex(p.t)?;
        }
        for p in &self.pairs {
            let d = bfs_distances(g, p.s, Direction::Forward)?[p.t];
            if d == INF {
                return Err(Error::Infeasible(format!("demand ({}, {}) is unreachable", p.s, p.t)));
            }
            if let Bound::AtMost(bound) = p.bound {
                if bound < d {
                    return Err(Error::Infeasible(format!(
                        "demand ({}, {}) has bound {bound} below distance {d}",
                        p.s, p.t
                    )));
                }
            }
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a DemandSet {
    type Item = &'a Demand;
    type IntoIter = std::slice::Iter<'a, Demand>;
    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_ids_follow_sorted_order() {
        let g = Graph::new(3, [(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(g.edge_id(2, 0), Some(2));
        assert_eq!(g.edge_id(0, 2), None);
    }

    #[test]
    fn graph_invariants_enforced() {
        assert_eq!(Graph::new(2, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert_eq!(Graph::new(2, [(0, 1), (0, 1)]), Err(Error::DuplicateEdge(0, 1)));
        assert!(matches!(Graph::new(2, [(0, 2)]), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn demand_set_invariants() {
        assert!(DemandSet::uniform([(0, 0)], Bound::Exact).is_err());
        assert!(DemandSet::uniform([(0, 1), (0, 1)], Bound::Exact).is_err());
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let d = DemandSet::uniform([(0, 2)], Bound::Unbounded).unwrap();
        assert!(matches!(d.check_feasible(&g), Err(Error::Infeasible(_))));
        let tight = DemandSet::uniform([(0, 1)], Bound::AtMost(0)).unwrap();
        assert!(matches!(tight.check_feasible(&g), Err(Error::Infeasible(_))));
    }

    #[test]
    fn edge_set_union_is_sorted() {
        let a = EdgeSet::new([5, 1, 3]);
        let b = EdgeSet::new([2, 3, 9]);
        assert_eq!(a.union(&b).ids(), &[1, 2, 3, 5, 9]);
    }
}
