use super::{pairs_within, Builder, Counts, Family, MinRepInstance, RepCover, Role, SpannerInstance};
use crate::error::{Error, Result};
use crate::graph::{Dist, EdgeSet};

fn half_up(k: usize) -> usize {
    (k - 1).div_ceil(2)
}

/// The `+k` construction for `k >= 3`: each copy becomes a path of `k - 1`
/// outer vertices, superedges become middle paths of `k - 2` vertices, and
/// ladder, chain and tail paths keep every pair within reach.
///
/// Two adjustments keep the edge families disjoint and the graph connected:
/// the edge from the top of each ladder to its special vertex is tagged `so`
/// only, and each tail is attached to its main vertex at layer 1.
pub fn reduce_plusk(inst: &MinRepInstance, x: usize, k: Dist) -> Result<SpannerInstance> {
    if k < 3 {
        return Err(Error::Invalid(format!("the +k construction needs k >= 3, got {k}")));
    }
    if x == 0 {
        return Err(Error::Invalid("x must be at least 1".into()));
    }
    let k = k as usize;
    let (n_sup, c) = (inst.supernodes(), half_up(k));
    let mut b = Builder::new();
    for y in 0..n_sup {
        for i in 0..x {
            for j in 1..k {
                b.add(Role::Outer { y, i, j });
            }
        }
    }
    for a in 0..inst.inner() {
        b.add(Role::Inner { a });
    }
    for y in 0..n_sup {
        b.add(Role::Special { y });
    }
    for y in 0..n_sup {
        for i in 0..x {
            for j in 1..k {
                b.add(Role::Ladder { y, i, j });
            }
        }
    }
    for e in 0..inst.superedges().len() {
        for j in 1..k - 1 {
            b.add(Role::Middle { e, j });
        }
    }
    for y in 0..n_sup {
        b.add(Role::Hub { y });
    }
    for y in 0..n_sup {
        for i in 0..x {
            for j in 1..=c {
                b.add(Role::Chain { y, i, j });
            }
        }
    }
    let main = b.roles.len();

    for &(a, c) in inst.edges() {
        b.edge(Role::Inner { a }, Role::Inner { a: c }, Family::In);
    }
    for y in 0..n_sup {
        for i in 0..x {
            let top = Role::Outer { y, i, j: k - 1 };
            for a in inst.group(y) {
                b.edge(Role::Outer { y, i, j: 1 }, Role::Inner { a }, Family::Con);
            }
            for j in 1..k - 1 {
                b.edge(Role::Outer { y, i, j }, Role::Outer { y, i, j: j + 1 }, Family::Path);
            }
            b.edge(top, Role::Ladder { y, i, j: 1 }, Family::L);
            for j in 1..k - 1 {
                b.edge(Role::Ladder { y, i, j }, Role::Ladder { y, i, j: j + 1 }, Family::L);
            }
            b.edge(Role::Ladder { y, i, j: k - 1 }, Role::Special { y }, Family::So);
            b.edge(top, Role::Chain { y, i, j: 1 }, Family::P);
            for j in 1..c {
                b.edge(Role::Chain { y, i, j }, Role::Chain { y, i, j: j + 1 }, Family::P);
            }
            b.edge(Role::Chain { y, i, j: c }, Role::Hub { y }, Family::P);
        }
        for a in inst.group(y) {
            for c in a + 1..inst.group(y).end {
                b.edge(Role::Inner { a }, Role::Inner { a: c }, Family::Group);
            }
        }
    }
    for (e, &(u, v)) in inst.superedges().iter().enumerate() {
        let (first, last) = (Role::Middle { e, j: 1 }, Role::Middle { e, j: k - 2 });
        b.edge(Role::Special { y: u }, first, Family::Sm);
        b.edge(Role::Special { y: v }, last, Family::Sm);
        for j in 1..k - 2 {
            b.edge(Role::Middle { e, j }, Role::Middle { e, j: j + 1 }, Family::M);
        }
        for i in 0..x {
            b.edge(Role::Outer { y: u, i, j: k - 1 }, first, Family::Out);
            b.edge(Role::Outer { y: v, i, j: k - 1 }, last, Family::Out);
        }
    }
    b.star(k - 1);
    b.finish(k as Dist, x, inst.clone(), main)
}

/// Closed-form vertex and family counts of [`reduce_plusk`].
pub fn plusk_counts(inst: &MinRepInstance, x: usize, k: Dist) -> Counts {
    let k = k as usize;
    let (n, s, e, m, c) = (inst.supernodes(), inst.sigma(), inst.superedges().len(), inst.edges().len(), half_up(k));
    let main = n * x * (k - 1) + n * s + n + n * x * (k - 1) + e * (k - 2) + n + n * x * c;
    Counts::new(
        k * main + 1,
        main,
        [
            (Family::In, m),
            (Family::Con, x * n * s),
            (Family::Path, n * x * (k - 2)),
            (Family::L, n * x * (k - 1)),
            (Family::P, n * x * (c + 1)),
            (Family::So, n * x),
            (Family::Sm, 2 * e),
            (Family::M, e * (k - 3)),
            (Family::Out, 2 * x * e),
            (Family::Group, n * pairs_within(s)),
            (Family::Star, k * main),
        ],
    )
}

/// `x · 8k² · |C| + 8k² n' d |Σ|²`, with `|C|` standing in for the optimum.
pub fn plusk_size_bound(inst: &MinRepInstance, x: usize, k: Dist, cover_size: usize) -> usize {
    let k2 = 8 * (k as usize).pow(2);
    x * k2 * cover_size + k2 * inst.supernodes() * inst.supergraph_degree() * inst.sigma().pow(2)
}

/// Every family except `con` and `out`, plus connection edges from the first
/// outer layer to the cover members of its group.
pub fn completeness_witness_plusk(g: &SpannerInstance, cover: &RepCover) -> Result<EdgeSet> {
    let inst = g.minrep();
    if g.stretch() < 3 {
        return Err(Error::Invalid("not a +k instance".into()));
    }
    if !super::rep_cover_verify(inst, cover) {
        return Err(Error::Invalid("not a valid cover".into()));
    }
    let mut h: Vec<_> = (0..g.graph().m()).filter(|&e| !matches!(g.family(e), Family::Con | Family::Out)).collect();
    for y in 0..inst.supernodes() {
        let members: Vec<_> = cover.in_group(inst, y).collect();
        if members.is_empty() {
            return Err(Error::Invalid(format!("group {y} has no cover member")));
        }
        for i in 0..g.x() {
            for &a in &members {
                h.push(g.edge_between(Role::Outer { y, i, j: 1 }, Role::Inner { a }).expect("connection edge"));
            }
        }
    }
    Ok(EdgeSet::new(h))
}

#[cfg(test)]
mod tests {
    use super::super::{minrep_yes, verify_additive};
    use super::*;

    #[test]
    fn counts_match_for_each_parity() {
        let (inst, _) = minrep_yes(2, 2, 2, 7).unwrap();
        for k in 3..=6 {
            let g = reduce_plusk(&inst, 2, k).unwrap();
            assert_eq!(g.counts(), plusk_counts(&inst, 2, k), "k={k}");
        }
    }

    #[test]
    fn k3_has_no_middle_path_edges() {
        let (inst, _) = minrep_yes(1, 1, 1, 0).unwrap();
        let g = reduce_plusk(&inst, 1, 3).unwrap();
        assert!(!g.counts().edges.contains_key(&Family::M));
    }

    #[test]
    fn diameter_at_most_2k() {
        let (inst, _) = minrep_yes(1, 2, 1, 2).unwrap();
        for k in [3, 4] {
            let g = reduce_plusk(&inst, 2, k).unwrap();
            for s in 0..g.graph().n() {
                assert!(g.graph().bfs(s, None).iter().all(|&d| d <= 2 * k));
            }
        }
    }

    #[test]
    fn superedge_copies_at_distance_k_minus_1() {
        let (inst, _) = minrep_yes(1, 1, 1, 0).unwrap();
        for k in [3, 4, 5] {
            let g = reduce_plusk(&inst, 2, k).unwrap();
            let kk = k as usize;
            let a = g.vertex(Role::Outer { y: 0, i: 0, j: kk - 1 }).unwrap();
            let b = g.vertex(Role::Outer { y: 1, i: 1, j: kk - 1 }).unwrap();
            assert_eq!(g.graph().bfs(a, None)[b], k - 1);
        }
    }

    #[test]
    fn witnesses_verify() {
        for k in [3, 4, 5] {
            let (inst, c) = minrep_yes(2, 2, 1, 11).unwrap();
            let g = reduce_plusk(&inst, 2, k).unwrap();
            let h = completeness_witness_plusk(&g, &c).unwrap();
            assert!(verify_additive(g.graph(), &h, k), "k={k}");
            assert!(h.len() <= plusk_size_bound(&inst, 2, k, c.len()));
        }
    }

    #[test]
    fn rejects_small_k() {
        let (inst, _) = minrep_yes(1, 1, 1, 0).unwrap();
        assert!(reduce_plusk(&inst, 1, 2).is_err());
        assert!(reduce_plusk(&inst, 0, 3).is_err());
    }
}
