use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{verify_solution, DemandSet, EdgeSet, Graph};
use crate::rng;

/// `min(1, x·k·ln n)`.
pub fn retention_probability(x: f64, k: f64, n: usize) -> f64 {
    let ln_n = (n.max(2) as f64).ln();
    (x * k * ln_n).clamp(0.0, 1.0)
}

/// Keeps each edge independently with [`retention_probability`], taking the
/// union of fresh rounds until every demand in `demands` is satisfied.
pub fn randomized_round(
    g: &Graph,
    x: &[f64],
    k: f64,
    demands: &DemandSet,
    seed: u64,
    max_rounds: usize,
) -> Result<EdgeSet> {
    if demands.is_empty() {
        return Ok(EdgeSet::empty());
    }
    let probs: Vec<f64> = x.iter().map(|&xe| retention_probability(xe, k, g.n())).collect();
    let mut kept = vec![false; g.m()];
    for round in 0..max_rounds {
        let mut r = rng::stream(seed, "round", round as u64);
        for (e, &p) in probs.iter().enumerate() {
            // draw for every edge so the stream position never depends on earlier hits
            let hit = r.random::<f64>() < p;
            kept[e] |= hit;
        }
        let sol = EdgeSet::new((0..g.m()).filter(|&e| kept[e]));
        if verify_solution(g, &sol, demands).all_satisfied() {
            log::debug!("rounding satisfied {} pairs after {} rounds", demands.len(), round + 1);
            return Ok(sol);
        }
    }
    Err(Error::RoundingExhausted { rounds: max_rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Bound;

    fn diamond() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn unit_capacity_path_kept_in_first_round() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let d = DemandSet::uniform([(0, 2)], Bound::Exact).unwrap();
        let k = 1.0 / (3f64).ln();
        let sol = randomized_round(&g, &[1.0, 1.0], k, &d, 1, 1).unwrap();
        assert_eq!(sol.len(), 2);
    }

    #[test]
    fn zero_capacities_exhaust() {
        let g = diamond();
        let d = DemandSet::uniform([(0, 3)], Bound::Exact).unwrap();
        assert_eq!(randomized_round(&g, &[0.0; 4], 5.0, &d, 3, 7), Err(Error::RoundingExhausted { rounds: 7 }));
    }

    #[test]
    fn half_capacities_with_unit_multiplier_keep_everything() {
        let g = diamond();
        let d = DemandSet::uniform([(0, 3)], Bound::Exact).unwrap();
        // k ln n = 2, so every probability is min(1, 1/2 * 2) = 1
        let k = 2.0 / (4f64).ln();
        let sol = randomized_round(&g, &[0.5; 4], k, &d, 9, 1).unwrap();
        assert_eq!(sol, g.all_edges());
    }

    #[test]
    fn same_seed_same_output() {
        let g = diamond();
        let d = DemandSet::uniform([(0, 3)], Bound::Exact).unwrap();
        let a = randomized_round(&g, &[0.3; 4], 1.0, &d, 42, 500).unwrap();
        let b = randomized_round(&g, &[0.3; 4], 1.0, &d, 42, 500).unwrap();
        assert_eq!(a, b);
    }
}
