//! Layered reformulation: distances to and from a root become layer indices,
//! so bounded-length routing through the root turns into plain connectivity
//! between labelled terminal copies.

use std::collections::VecDeque;

use crate::error::Result;
use crate::graph::{bfs_distances, Bound, Demand, DemandSet, Direction, Dist, EdgeId, Graph, INF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// Copy of vertex `v` in layer `layer`. The root is the only layer-0 node.
    /// In connectivity mode every non-root copy sits in layer -1 (in-side) or +1 (out-side).
    Layer { v: usize, layer: i32 },
    /// Source copy `s^t` of pair `pair`, labelled with its distance to the root.
    Source { pair: usize, label: Dist },
    /// Sink copy `t^s` of pair `pair`, labelled with its distance from the root.
    Sink { pair: usize, label: Dist },
}

/// One demand pair of the label-cover instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelPair {
    pub demand: Demand,
    /// Largest admissible `i + j`; `None` when any labels may be combined.
    pub bound: Option<Dist>,
    /// Node ids of the source copies.
    pub sources: Vec<usize>,
    /// Node ids of the sink copies.
    pub sinks: Vec<usize>,
}

impl LabelPair {
    pub fn related(&self, i: Dist, j: Dist) -> bool {
        self.bound.is_none_or(|d| i + j <= d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelCoverInstance {
    pub pairs: Vec<LabelPair>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredJunctionGraph {
    pub root_vertex: usize,
    /// Node id of `(r, 0)`.
    pub root: usize,
    pub nodes: Vec<NodeKind>,
    /// `(from, to, weight)`; weight 1 for layer arcs and 0 for terminal attachments.
    pub arcs: Vec<(usize, usize, Dist)>,
    /// Original edge behind each layer arc.
    pub arc_edge: Vec<Option<EdgeId>>,
    /// True when layers were collapsed because no bound can bind.
    pub connectivity: bool,
}

impl LayeredJunctionGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn label(&self, node: usize) -> Option<Dist> {
        match self.nodes[node] {
            NodeKind::Source { label, .. } | NodeKind::Sink { label, .. } => Some(label),
            NodeKind::Layer { .. } => None,
        }
    }

    /// Original edges behind a set of arcs; attachment arcs are dropped.
    pub fn edges_of(&self, arcs: impl IntoIterator<Item = usize>) -> Vec<EdgeId> {
        arcs.into_iter().filter_map(|a| self.arc_edge[a]).collect()
    }

    fn adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut out = vec![Vec::new(); self.len()];
        let mut inc = vec![Vec::new(); self.len()];
        for &(u, v, _) in &self.arcs {
            out[u].push(v);
            inc[v].push(u);
        }
        (out, inc)
    }
}

fn reach(adj: &[Vec<usize>], starts: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::new();
    for s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Effective bound per pair; `None` means connectivity only.
fn bounds(g: &Graph, demands: &DemandSet) -> Result<Vec<Option<Dist>>> {
    demands
        .iter()
        .map(|p| {
            Ok(match p.bound {
                Bound::Exact => Some(bfs_distances(g, p.s, Direction::Forward)?[p.t]),
                Bound::AtMost(d) => Some(d),
                Bound::Unbounded => None,
            })
        })
        .collect()
}

/// Whether every bound is loose enough that the layer structure cannot matter:
/// a shortest walk through the root never needs more than `2(n-1)` hops.
pub fn connectivity_suffices(g: &Graph, demands: &DemandSet) -> Result<bool> {
    let limit = 2 * (g.n() as Dist).saturating_sub(1);
    Ok(bounds(g, demands)?.iter().all(|b| b.is_none_or(|d| d >= limit)))
}

/// Builds `G_r` and its label-cover instance. With `connectivity` set, the
/// layers collapse to one in-copy and one out-copy of `G` and all labels are 0.
pub fn build_gr(
    g: &Graph,
    r: usize,
    demands: &DemandSet,
    connectivity: bool,
) -> Result<(LayeredJunctionGraph, LabelCoverInstance)> {
    g.check_vertex(r)?;
    let n = g.n();
    let bounds = bounds(g, demands)?;
    let top = if connectivity { 1 } else { n as i32 - 1 };
    let mut nodes = vec![NodeKind::Layer { v: r, layer: 0 }];
    // index of (v, layer) for v != r, layer in ±1..=±top
    let mut layer_id = vec![vec![usize::MAX; 2 * top as usize + 1]; n];
    layer_id[r][top as usize] = 0;
    for v in (0..n).filter(|&v| v != r) {
        for layer in (-top..=top).filter(|&l| l != 0) {
            layer_id[v][(layer + top) as usize] = nodes.len();
            nodes.push(NodeKind::Layer { v, layer });
        }
    }
    let id = |v: usize, layer: i32| -> Option<usize> {
        if layer.abs() > top {
            return None;
        }
        let x = layer_id[v][(layer + top) as usize];
        (x != usize::MAX).then_some(x)
    };
    let mut arcs = Vec::new();
    let mut arc_edge = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if connectivity {
            let hops = [(-1, -1), (1, 1), (-1, 0), (0, 1)];
            for (a, b) in hops {
                if (u == r) != (a == 0) || (v == r) != (b == 0) {
                    continue;
                }
                if let (Some(x), Some(y)) = (id(u, a), id(v, b)) {
                    arcs.push((x, y, 1));
                    arc_edge.push(Some(e));
                }
            }
        } else {
            for i in -top..top {
                if let (Some(x), Some(y)) = (id(u, i), id(v, i + 1)) {
                    arcs.push((x, y, 1));
                    arc_edge.push(Some(e));
                }
            }
        }
    }
    let mut pairs = Vec::with_capacity(demands.len());
    for (p, (d, &bound)) in demands.iter().zip(&bounds).enumerate() {
        let mut sources = Vec::new();
        let mut sinks = Vec::new();
        let labels: Vec<i32> = if connectivity { vec![1] } else { (1..=top).collect() };
        let src_labels: Vec<(Dist, usize)> = if d.s == r {
            vec![(0, 0)]
        } else {
            labels.iter().map(|&i| (if connectivity { 0 } else { i as Dist }, id(d.s, -i).unwrap())).collect()
        };
        for (label, at) in src_labels {
            let c = nodes.len();
            nodes.push(NodeKind::Source { pair: p, label });
            arcs.push((c, at, 0));
            arc_edge.push(None);
            sources.push(c);
        }
        let snk_labels: Vec<(Dist, usize)> = if d.t == r {
            vec![(0, 0)]
        } else {
            labels.iter().map(|&j| (if connectivity { 0 } else { j as Dist }, id(d.t, j).unwrap())).collect()
        };
        for (label, at) in snk_labels {
            let c = nodes.len();
            nodes.push(NodeKind::Sink { pair: p, label });
            arcs.push((at, c, 0));
            arc_edge.push(None);
            sinks.push(c);
        }
        pairs.push(LabelPair { demand: *d, bound: if connectivity { None } else { bound }, sources, sinks });
    }
    let graph = LayeredJunctionGraph { root_vertex: r, root: 0, nodes, arcs, arc_edge, connectivity };
    Ok((graph, LabelCoverInstance { pairs }))
}

/// Drops labels that cannot take part in any admissible route and every node
/// that lies on no route between a surviving copy and the root. Pairs left
/// without labels are removed. Node ids are renumbered; the root stays 0.
pub fn prune_relevant(
    gr: &LayeredJunctionGraph,
    inst: &LabelCoverInstance,
) -> (LayeredJunctionGraph, LabelCoverInstance) {
    let (out, inc) = gr.adjacency();
    let to_root = reach(&inc, [gr.root]);
    let from_root = reach(&out, [gr.root]);
    let mut keep_copy = vec![false; gr.len()];
    let mut kept_pairs = Vec::new();
    for pair in &inst.pairs {
        let src: Vec<usize> = pair.sources.iter().copied().filter(|&c| to_root[c]).collect();
        let snk: Vec<usize> = pair.sinks.iter().copied().filter(|&c| from_root[c]).collect();
        let lab = |c: usize| gr.label(c).unwrap();
        let src: Vec<usize> =
            src.iter().copied().filter(|&a| snk.iter().any(|&b| pair.related(lab(a), lab(b)))).collect();
        let snk: Vec<usize> =
            snk.iter().copied().filter(|&b| src.iter().any(|&a| pair.related(lab(a), lab(b)))).collect();
        if src.is_empty() {
            continue;
        }
        for &c in src.iter().chain(&snk) {
            keep_copy[c] = true;
        }
        kept_pairs.push((pair, src, snk));
    }
    let srcs = kept_pairs.iter().flat_map(|(_, s, _)| s.iter().copied());
    let snks = kept_pairs.iter().flat_map(|(_, _, t)| t.iter().copied());
    let from_src = reach(&out, srcs);
    let to_snk = reach(&inc, snks);
    let keep: Vec<bool> = (0..gr.len())
        .map(|v| {
            v == gr.root
                || match gr.nodes[v] {
                    NodeKind::Layer { .. } => (from_src[v] && to_root[v]) || (from_root[v] && to_snk[v]),
                    _ => keep_copy[v],
                }
        })
        .collect();
    let mut new_id = vec![usize::MAX; gr.len()];
    let mut nodes = Vec::new();
    for v in 0..gr.len() {
        if keep[v] {
            new_id[v] = nodes.len();
            nodes.push(gr.nodes[v]);
        }
    }
    let mut arcs = Vec::new();
    let mut arc_edge = Vec::new();
    for (a, &(u, v, w)) in gr.arcs.iter().enumerate() {
        // an arc is useful when it continues a route on the same side of the root
        let useful = keep[u] && keep[v] && ((from_src[u] && to_root[v]) || (from_root[u] && to_snk[v]));
        if useful {
            arcs.push((new_id[u], new_id[v], w));
            arc_edge.push(gr.arc_edge[a]);
        }
    }
    let pairs = kept_pairs
        .into_iter()
        .map(|(p, s, t)| LabelPair {
            demand: p.demand,
            bound: p.bound,
            sources: s.into_iter().map(|c| new_id[c]).collect(),
            sinks: t.into_iter().map(|c| new_id[c]).collect(),
        })
        .collect();
    let graph = LayeredJunctionGraph {
        root_vertex: gr.root_vertex,
        root: new_id[gr.root],
        nodes,
        arcs,
        arc_edge,
        connectivity: gr.connectivity,
    };
    (graph, LabelCoverInstance { pairs })
}

/// Pairs with some route `s -> r -> t` within their bound.
pub fn routable_through(g: &Graph, r: usize, demands: &DemandSet) -> Result<DemandSet> {
    let to_r = bfs_distances(g, r, Direction::Backward)?;
    let from_r = bfs_distances(g, r, Direction::Forward)?;
    let bounds = bounds(g, demands)?;
    let keep: Vec<bool> = demands
        .iter()
        .zip(&bounds)
        .map(|(p, b)| {
            let (a, c) = (to_r[p.s], from_r[p.t]);
            a != INF && c != INF && b.is_none_or(|d| a + c <= d)
        })
        .collect();
    let mut it = keep.into_iter();
    Ok(demands.filter(|_| it.next().unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layer_count(gr: &LayeredJunctionGraph) -> usize {
        gr.nodes.iter().filter(|k| matches!(k, NodeKind::Layer { .. })).count()
    }

    #[test]
    fn three_vertex_layer_count() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let (gr, _) = build_gr(&g, 1, &DemandSet::empty(), false).unwrap();
        assert_eq!(layer_count(&gr), 9);
    }

    #[test]
    fn relation_for_tight_pair() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let d = DemandSet::uniform([(0, 2)], Bound::AtMost(2)).unwrap();
        let (gr, inst) = build_gr(&g, 1, &d, false).unwrap();
        let p = &inst.pairs[0];
        let related: Vec<(Dist, Dist)> = p
            .sources
            .iter()
            .flat_map(|&a| p.sinks.iter().map(move |&b| (a, b)))
            .map(|(a, b)| (gr.label(a).unwrap(), gr.label(b).unwrap()))
            .filter(|&(i, j)| p.related(i, j))
            .collect();
        assert_eq!(related, vec![(1, 1)]);
        let (pr, pinst) = prune_relevant(&gr, &inst);
        assert_eq!(pinst.pairs[0].sources.len(), 1);
        assert_eq!(pinst.pairs[0].sinks.len(), 1);
        // (0,-1) (1,0) (2,1) and the two copies
        assert_eq!(pr.len(), 5);
        assert_eq!(pr.arcs.len(), 4);
    }

    #[test]
    fn connectivity_mode_is_small() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let d = DemandSet::uniform([(0, 3)], Bound::Unbounded).unwrap();
        assert!(connectivity_suffices(&g, &d).unwrap());
        let (gr, inst) = build_gr(&g, 2, &d, true).unwrap();
        assert_eq!(layer_count(&gr), 7);
        let (pr, pinst) = prune_relevant(&gr, &inst);
        assert_eq!(pinst.pairs.len(), 1);
        assert!(pr.len() <= gr.len());
    }

    #[test]
    fn unroutable_pairs_dropped() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let d = DemandSet::uniform([(2, 0)], Bound::Unbounded).unwrap();
        let (gr, inst) = build_gr(&g, 1, &d, false).unwrap();
        assert!(prune_relevant(&gr, &inst).1.pairs.is_empty());
        assert!(routable_through(&g, 1, &d).unwrap().is_empty());
    }
}
