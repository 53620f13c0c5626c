use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::stream;

/// Bipartite group-partitioned graph.
///
/// Vertex ids: `A = 0..r·σ`, `B = r·σ..2r·σ`. Vertex `a` lies in group
/// `a / σ`; groups `0..r` are the left supernodes `U`, groups `r..2r` the
/// right supernodes `V`. Edges are stored `(a, b)` with `a ∈ A`, `b ∈ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinRepInstance {
    r: usize,
    sigma: usize,
    edges: Vec<(usize, usize)>,
    superedges: Vec<(usize, usize)>,
}

impl MinRepInstance {
    pub fn new(r: usize, sigma: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if r == 0 || sigma == 0 {
            return Err(Error::Invalid(format!("need r >= 1 and sigma >= 1, got r={r}, sigma={sigma}")));
        }
        let half = r * sigma;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.min(b), a.max(b));
            if a >= half || b < half || b >= 2 * half {
                return Err(Error::Invalid(format!("({a}, {b}) does not cross A x B")));
            }
            if !set.insert((a, b)) {
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let superedges: BTreeSet<_> = edges.iter().map(|&(a, b)| (a / sigma, b / sigma)).collect();
        Ok(MinRepInstance { r, sigma, edges, superedges: superedges.into_iter().collect() })
    }

    /// Groups per side.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Supernode count `n' = 2r`.
    pub fn supernodes(&self) -> usize {
        2 * self.r
    }

    /// Inner vertex count `|A| + |B|`.
    pub fn inner(&self) -> usize {
        2 * self.r * self.sigma
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted `(u, v)` group pairs with `u < r <= v`.
    pub fn superedges(&self) -> &[(usize, usize)] {
        &self.superedges
    }

    pub fn group_of(&self, a: usize) -> usize {
        a / self.sigma
    }

    pub fn group(&self, y: usize) -> std::ops::Range<usize> {
        y * self.sigma..(y + 1) * self.sigma
    }

    pub fn is_left(&self, y: usize) -> bool {
        y < self.r
    }

    /// Largest supernode degree in the supergraph.
    pub fn supergraph_degree(&self) -> usize {
        let mut deg = vec![0; self.supernodes()];
        for &(u, v) in &self.superedges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Largest inner degree.
    pub fn inner_degree(&self) -> usize {
        let mut deg = vec![0; self.inner()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Edges crossing the groups of one superedge.
    pub fn crossing(&self, u: usize, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (ga, gb) = (self.group(u), self.group(v));
        let lo = self.edges.partition_point(|&(a, _)| a < ga.start);
        self.edges[lo..].iter().copied().take_while(move |&(a, _)| a < ga.end).filter(move |(_, b)| gb.contains(b))
    }

    /// `n m sigma` header (`n` counts groups per side) and one `a b` line per edge.
    pub fn format(&self) -> String {
        let mut out = format!("{} {} {}\n", self.r, self.edges.len(), self.sigma);
        for &(a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let nums = |ln: usize, l: &str| -> Result<Vec<usize>> {
            l.split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse { line: ln, msg: format!("not a non-negative integer: {t:?}") })
                })
                .collect()
        };
        let h = nums(hl, header)?;
        let [r, m, sigma] = h[..] else {
            return Err(Error::Parse { line: hl, msg: "expected header `r m sigma`".into() });
        };
        let mut edges = Vec::with_capacity(m);
        for (ln, l) in lines {
            let [a, b] = nums(ln, l)?[..] else {
                return Err(Error::Parse { line: ln, msg: "expected `a b`".into() });
            };
            edges.push((a, b));
        }
        if edges.len() != m {
            return Err(Error::Parse { line: hl, msg: format!("header promises {m} edges, found {}", edges.len()) });
        }
        MinRepInstance::new(r, sigma, edges).map_err(|e| Error::Parse { line: hl, msg: e.to_string() })
    }
}

/// A subset of `A ∪ B`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RepCover(Vec<usize>);

impl RepCover {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<_> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        RepCover(v)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    /// Members of group `y`.
    pub fn in_group<'a>(&'a self, inst: &'a MinRepInstance, y: usize) -> impl Iterator<Item = usize> + 'a {
        let g = inst.group(y);
        self.0.iter().copied().filter(move |a| g.contains(a))
    }
}

/// Every superedge has a crossing edge with both ends in `c`.
pub fn rep_cover_verify(inst: &MinRepInstance, c: &RepCover) -> bool {
    inst.superedges().iter().all(|&(u, v)| inst.crossing(u, v).any(|(a, b)| c.contains(a) && c.contains(b)))
}

/// Exact minimum cover by ascending-size subset search; `None` past 24 inner vertices.
pub fn min_rep(inst: &MinRepInstance) -> Option<RepCover> {
    let n = inst.inner();
    if n > 24 {
        return None;
    }
    let edge_masks: Vec<Vec<u32>> = inst
        .superedges()
        .iter()
        .map(|&(u, v)| inst.crossing(u, v).map(|(a, b)| (1u32 << a) | (1u32 << b)).collect())
        .collect();
    for size in 0..=n {
        let mut found = None;
        for_each_subset(n, size, |mask| {
            if edge_masks.iter().all(|ms| ms.iter().any(|&m| mask & m == m)) {
                found = Some(mask);
                return true;
            }
            false
        });
        if let Some(mask) = found {
            return Some(RepCover::new((0..n).filter(|&a| mask >> a & 1 == 1)));
        }
    }
    unreachable!("A ∪ B covers every superedge")
}

/// Visits `size`-subsets of `0..n` in colex order until `visit` returns true.
fn for_each_subset(n: usize, size: usize, mut visit: impl FnMut(u32) -> bool) {
    if size == 0 {
        visit(0);
        return;
    }
    let mut mask: u32 = (1 << size) - 1;
    while mask < 1 << n {
        if visit(mask) {
            return;
        }
        let low = mask & mask.wrapping_neg();
        let ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
}

/// A YES instance: `r` groups per side of size `sigma`, a `d`-regular
/// circulant supergraph, one planted representative per group and planted
/// edges between representatives of every superedge. Filler edges are only
/// added between groups that already form a superedge, so the supergraph and
/// the planted cover of size `2r` stay optimal.
pub fn minrep_yes(r: usize, sigma: usize, d: usize, seed: u64) -> Result<(MinRepInstance, RepCover)> {
    if r == 0 || sigma == 0 || d == 0 || d > r {
        return Err(Error::Invalid(format!(
            "no {d}-regular bipartite supergraph with {r} groups per side and sigma={sigma}"
        )));
    }
    let mut rng = stream(seed, "minrep-yes", 0);
    let reps: Vec<usize> = (0..2 * r).map(|y| y * sigma + rng.random_range(0..sigma)).collect();
    let mut edges = BTreeSet::new();
    for u in 0..r {
        for j in 0..d {
            let v = r + (u + j) % r;
            edges.insert((reps[u], reps[v]));
            for a in u * sigma..(u + 1) * sigma {
                for b in v * sigma..(v + 1) * sigma {
                    if rng.random_bool(0.3) {
                        edges.insert((a, b));
                    }
                }
            }
        }
    }
    let inst = MinRepInstance::new(r, sigma, edges)?;
    Ok((inst, RepCover::new(reps)))
}

/// Unstructured instance: each `A × B` pair is an edge with probability `p`,
/// redrawn until at least one edge exists.
pub fn random_minrep(r: usize, sigma: usize, p: f64, seed: u64) -> Result<MinRepInstance> {
    let half = r * sigma;
    for attempt in 0.. {
        let mut rng = stream(seed, "minrep-random", attempt);
        let mut pairs: Vec<(usize, usize)> = (0..half).flat_map(|a| (half..2 * half).map(move |b| (a, b))).collect();
        pairs.shuffle(&mut rng);
        let edges: Vec<_> = pairs.into_iter().filter(|_| rng.random_bool(p)).collect();
        if !edges.is_empty() || half == 0 {
            return MinRepInstance::new(r, sigma, edges);
        }
    }
    unreachable!()
}
