use std::collections::VecDeque;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{Dist, EdgeId, EdgeSet, INF};

/// Simple undirected graph; edges are stored as `(min, max)` in sorted order
/// and an edge id is the position in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, EdgeId)>>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(UndirectedGraph { n, edges, adj })
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
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, EdgeId)] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::new(0..self.m())
    }

    pub fn mask(&self, set: &EdgeSet) -> Vec<bool> {
        let mut m = vec![false; self.m()];
        for &e in set.ids() {
            m[e] = true;
        }
        m
    }

    /// BFS over the edges whose mask entry is set (all when `None`).
    pub fn bfs(&self, src: usize, mask: Option<&[bool]>) -> Vec<Dist> {
        let mut dist = vec![INF; self.n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &self.adj[u] {
                if dist[w] == INF && mask.is_none_or(|m| m[e]) {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Same text format as directed graphs; each line is one undirected edge.
    pub fn format(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (n, pairs) = crate::graph::parse_header_and_pairs(text)?;
        for &(line, u, v) in &pairs {
            if u >= n || v >= n || u == v {
                return Err(Error::Parse { line, msg: format!("bad edge {u} {v}") });
            }
        }
        UndirectedGraph::new(n, pairs.into_iter().map(|(_, u, v)| (u, v)))
    }

    /// Edge ids for `u v` lines that must be edges of this graph.
    pub fn parse_edge_list(&self, text: &str) -> Result<EdgeSet> {
        let mut ids = Vec::new();
        for (line, u, v) in crate::graph::parse_pairs(text)? {
            ids.push(self.edge_id(u, v).ok_or(Error::Parse { line, msg: format!("{u} {v} is not an edge") })?);
        }
        Ok(EdgeSet::new(ids))
    }
}

/// A pair whose distance in `H` exceeds `d_G + k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub in_g: Dist,
    pub in_h: Dist,
}

/// Every violating pair `u < v`, by BFS from each vertex in both graphs.
pub fn additive_violations(g: &UndirectedGraph, h: &EdgeSet, k: Dist) -> Vec<Violation> {
    let mask = g.mask(h);
    let mut out = Vec::new();
    for u in 0..g.n() {
        let dg = g.bfs(u, None);
        let dh = g.bfs(u, Some(&mask));
        for v in u + 1..g.n() {
            if dg[v] != INF && (dh[v] == INF || dh[v] > dg[v] + k) {
                out.push(Violation { u, v, in_g: dg[v], in_h: dh[v] });
            }
        }
    }
    out
}

/// `d_H(u,v) <= d_G(u,v) + k` for all pairs.
pub fn verify_additive(g: &UndirectedGraph, h: &EdgeSet, k: Dist) -> bool {
    let mask = g.mask(h);
    (0..g.n()).all(|u| {
        let dg = g.bfs(u, None);
        let dh = g.bfs(u, Some(&mask));
        (u + 1..g.n()).all(|v| dg[v] == INF || (dh[v] != INF && dh[v] <= dg[v] + k))
    })
}
