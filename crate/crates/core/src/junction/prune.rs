//! Median pruning of representative sets, in exact arithmetic.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::graph::Dist;

/// Representative-level mass of one pair. Representatives are `(id, label)`;
/// `(a, b)` is related when `label(a) + label(b) <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairMass {
    pub sources: Vec<(usize, Dist)>,
    pub sinks: Vec<(usize, Dist)>,
    pub bound: Option<Dist>,
    pub y: Vec<(usize, usize, BigRational)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrunedPair {
    /// Representatives sorted by `(label, id)`.
    pub s_order: Vec<usize>,
    pub t_order: Vec<usize>,
    /// Prefix lengths; `S̃` is `s_order[..mu_s]`.
    pub mu_s: usize,
    pub mu_t: usize,
    pub gamma: BigRational,
    pub s_tilde: Vec<usize>,
    pub t_tilde: Vec<usize>,
    pub retained_s: BigRational,
    pub retained_t: BigRational,
}

fn label_of(reps: &[(usize, Dist)], id: usize) -> Option<Dist> {
    reps.iter().find(|&&(v, _)| v == id).map(|&(_, l)| l)
}

impl PairMass {
    pub fn related(&self, a: usize, b: usize) -> bool {
        match (label_of(&self.sources, a), label_of(&self.sinks, b)) {
            (Some(i), Some(j)) => self.bound.is_none_or(|d| i + j <= d),
            _ => false,
        }
    }
}

/// Sorts each side by label, then keeps the shortest prefix whose mass
/// reaches `γ/2`. Mass placed on unrelated pairs is ignored. Pairs with
/// `γ = 0` yield `None`.
pub fn median_prune(pairs: &[PairMass]) -> Vec<Option<PrunedPair>> {
    pairs.iter().map(prune_one).collect()
}

fn prune_one(pm: &PairMass) -> Option<PrunedPair> {
    let live: Vec<&(usize, usize, BigRational)> =
        pm.y.iter().filter(|(a, b, m)| m > &BigRational::zero() && pm.related(*a, *b)).collect();
    let gamma: BigRational = live.iter().map(|(_, _, m)| m.clone()).sum();
    if gamma.is_zero() {
        return None;
    }
    let half = &gamma / BigRational::from_integer(2.into());
    let side = |reps: &[(usize, Dist)], pick: &dyn Fn(&(usize, usize, BigRational)) -> usize| {
        let mut order: Vec<(Dist, usize)> = reps.iter().map(|&(v, l)| (l, v)).collect();
        order.sort_unstable();
        let order: Vec<usize> = order.into_iter().map(|(_, v)| v).collect();
        let mut acc = BigRational::zero();
        let mut mu = order.len();
        for (k, &v) in order.iter().enumerate() {
            for e in &live {
                if pick(e) == v {
                    acc += &e.2;
                }
            }
            if acc >= half {
                mu = k + 1;
                break;
            }
        }
        (order, mu, acc)
    };
    let (s_order, mu_s, retained_s) = side(&pm.sources, &|e| e.0);
    let (t_order, mu_t, retained_t) = side(&pm.sinks, &|e| e.1);
    Some(PrunedPair {
        s_tilde: s_order[..mu_s].to_vec(),
        t_tilde: t_order[..mu_t].to_vec(),
        s_order,
        t_order,
        mu_s,
        mu_t,
        gamma,
        retained_s,
        retained_t,
    })
}

/// Whether `S̃ × T̃` only contains related pairs.
pub fn product_is_related(pm: &PairMass, p: &PrunedPair) -> bool {
    p.s_tilde.iter().all(|&a| p.t_tilde.iter().all(|&b| pm.related(a, b)))
}

/// `γ/2 <= retained mass` on both sides.
pub fn retains_half(p: &PrunedPair) -> bool {
    let half = &p.gamma / (BigRational::one() + BigRational::one());
    p.retained_s >= half && p.retained_t >= half
}
