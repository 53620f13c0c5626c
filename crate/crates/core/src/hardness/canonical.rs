use super::{verify_additive, RepCover, Role, SpannerInstance};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet};

/// Edges of the canonical path for superedge `e`, copy `i`, through the inner
/// edge `(a, b)`: down the outer path of `u`, across, and up the outer path of `v`.
fn canonical_path(g: &SpannerInstance, e: usize, i: usize, a: usize, b: usize) -> Vec<EdgeId> {
    let (u, v) = g.minrep().superedges()[e];
    let top = g.layers();
    let mut path = Vec::with_capacity(2 * top + 1);
    for (y, end) in [(u, a), (v, b)] {
        for j in 1..top {
            path.push(g.edge_between(Role::Outer { y, i, j }, Role::Outer { y, i, j: j + 1 }).expect("path edge"));
        }
        path.push(g.edge_between(Role::Outer { y, i, j: 1 }, Role::Inner { a: end }).expect("connection edge"));
    }
    path.push(g.edge_between(Role::Inner { a }, Role::Inner { a: b }).expect("inner edge"));
    path
}

/// Whether `mask` contains a canonical path for superedge `e` and copy `i`.
pub fn has_canonical_path(g: &SpannerInstance, mask: &[bool], e: usize, i: usize) -> bool {
    let (u, v) = g.minrep().superedges()[e];
    let top = g.layers();
    let spine = |y: usize| {
        (1..top).all(|j| mask[g.edge_between(Role::Outer { y, i, j }, Role::Outer { y, i, j: j + 1 }).unwrap()])
    };
    let attached = |y: usize, a: usize| mask[g.edge_between(Role::Outer { y, i, j: 1 }, Role::Inner { a }).unwrap()];
    spine(u)
        && spine(v)
        && g.minrep().crossing(u, v).any(|(a, b)| {
            attached(u, a) && attached(v, b) && mask[g.edge_between(Role::Inner { a }, Role::Inner { a: b }).unwrap()]
        })
}

/// Canonical paths exist for every superedge and copy.
pub fn is_canonical(g: &SpannerInstance, h: &EdgeSet) -> bool {
    let mask = g.graph().mask(h);
    (0..g.minrep().superedges().len()).all(|e| (0..g.x()).all(|i| has_canonical_path(g, &mask, e, i)))
}

/// Edges added for one (superedge, copy) pair, charged to an outer edge of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Charge {
    pub superedge: usize,
    pub copy: usize,
    pub outer: EdgeId,
    pub added: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonicalized {
    pub edges: EdgeSet,
    pub charges: Vec<Charge>,
}

impl Canonicalized {
    /// No outer edge carries two charges.
    pub fn injective(&self) -> bool {
        let mut outer: Vec<_> = self.charges.iter().map(|c| c.outer).collect();
        outer.sort_unstable();
        outer.windows(2).all(|w| w[0] != w[1])
    }

    /// Most edges added under a single charge.
    pub fn max_charge(&self) -> usize {
        self.charges.iter().map(|c| c.added.len()).max().unwrap_or(0)
    }
}

/// Adds a canonical path through the smallest crossing inner edge for every
/// (superedge, copy) pair that lacks one, charging each addition to an outer
/// edge of `h` at one end of the pair.
pub fn canonicalize(g: &SpannerInstance, h: &EdgeSet) -> Result<Canonicalized> {
    if !verify_additive(g.graph(), h, g.stretch()) {
        return Err(Error::Invalid(format!("input is not a +{} spanner", g.stretch())));
    }
    let original = g.graph().mask(h);
    let mut mask = original.clone();
    let mut charges = Vec::new();
    let (top, mid) = (g.layers(), g.middle_len());
    for (e, &(u, v)) in g.minrep().superedges().iter().enumerate() {
        let (a, b) = g.minrep().crossing(u, v).next().expect("superedges have a crossing edge");
        for i in 0..g.x() {
            if has_canonical_path(g, &mask, e, i) {
                continue;
            }
            let left = g.edge_between(Role::Outer { y: u, i, j: top }, Role::Middle { e, j: 1 }).unwrap();
            let right = g.edge_between(Role::Outer { y: v, i, j: top }, Role::Middle { e, j: mid }).unwrap();
            let outer = [left, right].into_iter().find(|&id| original[id]).ok_or_else(|| {
                Error::Model(format!("superedge {e} copy {i} is spanned without a canonical path or an outer edge"))
            })?;
            let mut added = Vec::new();
            for id in canonical_path(g, e, i, a, b) {
                if !mask[id] {
                    mask[id] = true;
                    added.push(id);
                }
            }
            charges.push(Charge { superedge: e, copy: i, outer, added });
        }
    }
    let edges = EdgeSet::new((0..mask.len()).filter(|&id| mask[id]));
    Ok(Canonicalized { edges, charges })
}

/// `C_i`: inner vertices joined to the first outer layer of copy `i` of their group.
pub fn extract_covers(g: &SpannerInstance, h: &EdgeSet) -> Result<Vec<RepCover>> {
    if !is_canonical(g, h) {
        return Err(Error::Invalid("edge set is not canonical".into()));
    }
    let mask = g.graph().mask(h);
    let inst = g.minrep();
    Ok((0..g.x())
        .map(|i| {
            RepCover::new((0..inst.inner()).filter(|&a| {
                mask[g.edge_between(Role::Outer { y: inst.group_of(a), i, j: 1 }, Role::Inner { a }).unwrap()]
            }))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::{
        completeness_witness_plus1, completeness_witness_plusk, greedy_minimal_spanner, minrep_yes, reduce_plus1,
        reduce_plusk, rep_cover_verify, Family,
    };
    use super::*;

    #[test]
    fn witness_is_already_canonical() {
        let (inst, c) = minrep_yes(2, 2, 2, 3).unwrap();
        let g = reduce_plus1(&inst, 2).unwrap();
        let h = completeness_witness_plus1(&g, &c).unwrap();
        let out = canonicalize(&g, &h).unwrap();
        assert_eq!(out.edges, h);
        assert!(out.charges.is_empty());
        let covers = extract_covers(&g, &h).unwrap();
        assert_eq!(covers, vec![c.clone(); 2]);
    }

    #[test]
    fn middle_routes_get_charged() {
        // All edges except the connection edges: superedge copies are spanned
        // through the middle vertices only.
        let (inst, _) = minrep_yes(2, 1, 2, 5).unwrap();
        let g = reduce_plus1(&inst, 2).unwrap();
        let h = EdgeSet::new((0..g.graph().m()).filter(|&e| g.family(e) != Family::Con));
        let out = canonicalize(&g, &h).unwrap();
        // Paths added for earlier pairs can complete later ones, so not every
        // pair needs a charge of its own.
        assert!(!out.charges.is_empty() && out.charges.len() <= inst.superedges().len() * 2);
        assert!(out.injective());
        assert!(out.max_charge() <= 3);
        assert!(out.edges.len() <= 4 * h.len());
        for c in extract_covers(&g, &out.edges).unwrap() {
            assert!(rep_cover_verify(&inst, &c));
        }
    }

    #[test]
    fn non_spanner_is_refused() {
        let (inst, _) = minrep_yes(1, 1, 1, 0).unwrap();
        let g = reduce_plus1(&inst, 1).unwrap();
        assert!(canonicalize(&g, &EdgeSet::empty()).is_err());
        assert!(extract_covers(&g, &EdgeSet::empty()).is_err());
    }

    #[test]
    fn plusk_canonicalization() {
        for k in [3, 4] {
            let (inst, c) = minrep_yes(2, 2, 1, 8).unwrap();
            let g = reduce_plusk(&inst, 2, k).unwrap();
            let w = completeness_witness_plusk(&g, &c).unwrap();
            assert!(canonicalize(&g, &w).unwrap().charges.is_empty());
            let h = greedy_minimal_spanner(&g, k as u64);
            let out = canonicalize(&g, &h).unwrap();
            assert!(out.injective());
            assert!(out.max_charge() <= 2 * k as usize - 1);
            assert!(out.edges.len() <= 2 * k as usize * h.len());
            assert!(extract_covers(&g, &out.edges).unwrap().iter().all(|c| rep_cover_verify(&inst, c)));
        }
    }
}
