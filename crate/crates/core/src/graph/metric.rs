use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Dist, Graph, INF};

/// A concrete shortest path: vertex sequence plus the ids of the arcs it uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub vertices: Vec<usize>,
    pub arcs: Vec<usize>,
}

/// Distances and witness paths as seen from one orientation of a metric.
pub trait MetricView {
    fn len(&self) -> usize;
    fn weight(&self, u: usize, v: usize) -> Dist;
    /// Witness path `u -> v` in this view's orientation.
    fn witness(&self, u: usize, v: usize) -> Option<Witness>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// All-pairs shortest-path metric over a digraph with small non-negative arc weights.
///
/// Witnesses are the lexicographically smallest shortest vertex sequences.
#[derive(Clone, Debug)]
pub struct MetricCompletion {
    n: usize,
    arcs: Vec<(usize, usize, Dist)>,
    out: Vec<Vec<usize>>,
    dist: Vec<Dist>,
}

impl MetricCompletion {
    pub fn from_graph(g: &Graph) -> Self {
        Self::from_arcs(g.n(), g.edges().iter().map(|&(u, v)| (u, v, 1)).collect())
    }

    /// Arc ids are positions in `arcs`.
    pub fn from_arcs(n: usize, arcs: Vec<(usize, usize, Dist)>) -> Self {
        let mut out = vec![Vec::new(); n];
        for (id, &(u, _, _)) in arcs.iter().enumerate() {
            out[u].push(id);
        }
        for list in out.iter_mut() {
            list.sort_by_key(|&a| (arcs[a].1, a));
        }
        let mut dist = vec![INF; n * n];
        for src in 0..n {
            let row = &mut dist[src * n..(src + 1) * n];
            row[src] = 0;
            let mut heap = BinaryHeap::from([Reverse((0, src))]);
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > row[u] {
                    continue;
                }
                for &a in &out[u] {
                    let (_, v, w) = arcs[a];
                    let nd = d + w;
                    if nd < row[v] {
                        row[v] = nd;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
        }
        MetricCompletion { n, arcs, out, dist }
    }

    pub fn arc(&self, id: usize) -> (usize, usize, Dist) {
        self.arcs[id]
    }

    pub fn arcs(&self) -> &[(usize, usize, Dist)] {
        &self.arcs
    }
}

impl MetricView for MetricCompletion {
    fn len(&self) -> usize {
        self.n
    }

    fn weight(&self, u: usize, v: usize) -> Dist {
        self.dist[u * self.n + v]
    }

    fn witness(&self, u: usize, v: usize) -> Option<Witness> {
        let total = self.weight(u, v);
        if total == INF {
            return None;
        }
        let mut vertices = vec![u];
        let mut arcs = Vec::new();
        let mut cur = u;
        while cur != v {
            let remaining = self.weight(cur, v);
            let &a = self.out[cur].iter().find(|&&a| {
                let (_, w, len) = self.arcs[a];
                let rest = self.weight(w, v);
                rest != INF && len + rest == remaining && !vertices.contains(&w)
            })?;
            cur = self.arcs[a].1;
            vertices.push(cur);
            arcs.push(a);
        }
        Some(Witness { vertices, arcs })
    }
}

/// The same metric with every arc reversed.
#[derive(Clone, Copy, Debug)]
pub struct Reversed<'a>(pub &'a MetricCompletion);

impl MetricView for Reversed<'_> {
    fn len(&self) -> usize {
        self.0.n
    }

    fn weight(&self, u: usize, v: usize) -> Dist {
        self.0.weight(v, u)
    }

    fn witness(&self, u: usize, v: usize) -> Option<Witness> {
        let mut w = self.0.witness(v, u)?;
        w.vertices.reverse();
        w.arcs.reverse();
        Some(w)
    }
}
