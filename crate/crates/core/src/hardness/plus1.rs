use super::{pairs_within, Builder, Counts, Family, MinRepInstance, RepCover, Role, SpannerInstance};
use crate::error::{Error, Result};
use crate::graph::EdgeSet;

/// The `+1` construction: `x` copies of every supernode, one special vertex
/// per supernode, one shared middle vertex per superedge, and a two-hop star
/// through the apex.
pub fn reduce_plus1(inst: &MinRepInstance, x: usize) -> Result<SpannerInstance> {
    if x == 0 {
        return Err(Error::Invalid("x must be at least 1".into()));
    }
    let n_sup = inst.supernodes();
    let mut b = Builder::new();
    for y in 0..n_sup {
        for i in 0..x {
            b.add(Role::Outer { y, i, j: 1 });
        }
    }
    for a in 0..inst.inner() {
        b.add(Role::Inner { a });
    }
    for y in 0..n_sup {
        b.add(Role::Special { y });
    }
    for e in 0..inst.superedges().len() {
        b.add(Role::Middle { e, j: 1 });
    }
    let main = b.roles.len();

    for &(a, c) in inst.edges() {
        b.edge(Role::Inner { a }, Role::Inner { a: c }, Family::In);
    }
    for y in 0..n_sup {
        for i in 0..x {
            let o = Role::Outer { y, i, j: 1 };
            for a in inst.group(y) {
                b.edge(o, Role::Inner { a }, Family::Con);
            }
            b.edge(o, Role::Special { y }, Family::So);
        }
        for a in inst.group(y) {
            b.edge(Role::Inner { a }, Role::Special { y }, Family::Si);
            for c in a + 1..inst.group(y).end {
                b.edge(Role::Inner { a }, Role::Inner { a: c }, Family::Group);
            }
        }
    }
    for (e, &(u, v)) in inst.superedges().iter().enumerate() {
        let m = Role::Middle { e, j: 1 };
        for y in [u, v] {
            for i in 0..x {
                b.edge(Role::Outer { y, i, j: 1 }, m, Family::Out);
            }
            b.edge(Role::Special { y }, m, Family::Sm);
        }
    }
    b.star(1);
    b.finish(1, x, inst.clone(), main)
}

/// Closed-form vertex and family counts of [`reduce_plus1`].
pub fn plus1_counts(inst: &MinRepInstance, x: usize) -> Counts {
    let (n, s, e, m) = (inst.supernodes(), inst.sigma(), inst.superedges().len(), inst.edges().len());
    let main = x * n + n * s + n + e;
    Counts::new(
        2 * main + 1,
        main,
        [
            (Family::In, m),
            (Family::Con, x * n * s),
            (Family::Out, 2 * x * e),
            (Family::So, x * n),
            (Family::Si, n * s),
            (Family::Sm, 2 * e),
            (Family::Group, n * pairs_within(s)),
            (Family::Star, 2 * main),
        ],
    )
}

/// `8 n' d |Σ|² + 4 n' x`.
pub fn plus1_size_bound(inst: &MinRepInstance, x: usize) -> usize {
    let n = inst.supernodes();
    8 * n * inst.supergraph_degree() * inst.sigma().pow(2) + 4 * n * x
}

/// One representative per group: every copy connects only to its group's
/// representative, each group keeps a star of group edges around it, and the
/// inner, special and star families are kept whole.
pub fn completeness_witness_plus1(g: &SpannerInstance, cover: &RepCover) -> Result<EdgeSet> {
    let inst = g.minrep();
    if g.stretch() != 1 {
        return Err(Error::Invalid("not a +1 instance".into()));
    }
    let reps = single_representatives(inst, cover)?;
    let mut h: Vec<_> = (0..g.graph().m())
        .filter(|&e| matches!(g.family(e), Family::In | Family::So | Family::Si | Family::Sm | Family::Star))
        .collect();
    for (y, &rep) in reps.iter().enumerate() {
        for i in 0..g.x() {
            h.push(g.edge_between(Role::Outer { y, i, j: 1 }, Role::Inner { a: rep }).expect("connection edge"));
        }
        for a in inst.group(y).filter(|&a| a != rep) {
            h.push(g.edge_between(Role::Inner { a: rep }, Role::Inner { a }).expect("group edge"));
        }
    }
    Ok(EdgeSet::new(h))
}

fn single_representatives(inst: &MinRepInstance, cover: &RepCover) -> Result<Vec<usize>> {
    if !super::rep_cover_verify(inst, cover) {
        return Err(Error::Invalid("not a valid cover".into()));
    }
    (0..inst.supernodes())
        .map(|y| {
            let members: Vec<_> = cover.in_group(inst, y).collect();
            match members[..] {
                [a] => Ok(a),
                _ => Err(Error::Invalid(format!("group {y} has {} representatives, expected one", members.len()))),
            }
        })
        .collect()
}
