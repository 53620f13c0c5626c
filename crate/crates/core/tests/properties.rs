use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use spanner_core::bench::{random_instance, Shape};
use spanner_core::dsf::{dsf_approx, pairwise_spanner_approx};
use spanner_core::graph::{
    format_demands, format_graph, parse_demands, parse_graph, verify_solution, Bound, Demand, DemandSet, EdgeSet, Graph,
};
use spanner_core::hardness::{
    greedy_minimal_spanner, plus1_counts, plusk_counts, random_minrep, reduce_plus1, reduce_plusk, verify_additive,
};
use spanner_core::junction::{median_prune, product_is_related, retains_half, PairMass};
use spanner_core::preserver::preserver_approx;
use spanner_core::rng::{stream, sub_seed};
use spanner_core::rounding::{monotonize, tree_group_flow};

fn digraph() -> impl Strategy<Value = Graph> {
    (2usize..8).prop_flat_map(|n| {
        proptest::collection::btree_set((0..n, 0..n), 0..20)
            .prop_map(move |set| Graph::new(n, set.into_iter().filter(|(u, v)| u != v)).unwrap())
    })
}

fn tree() -> impl Strategy<Value = (Vec<Option<usize>>, Vec<f64>)> {
    (2usize..16).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
        (parents, proptest::collection::vec(-0.5f64..1.5, n))
            .prop_map(|(ps, x)| (std::iter::once(None).chain(ps.into_iter().map(Some)).collect(), x))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_round_trips(g in digraph()) {
        prop_assert_eq!(parse_graph(&format_graph(&g)).unwrap(), g);
    }

    #[test]
    fn demand_text_round_trips(pairs in proptest::collection::btree_map((0usize..9, 0usize..9), 0u32..4, 0..8)) {
        let demands = DemandSet::new(pairs.into_iter().filter(|((s, t), _)| s != t).map(|((s, t), k)| {
            let bound = match k { 0 => Bound::Exact, 1 => Bound::Unbounded, d => Bound::AtMost(d) };
            Demand::new(s, t, bound)
        })).unwrap();
        prop_assert_eq!(parse_demands(&format_demands(&demands)).unwrap(), demands);
    }

    #[test]
    fn whole_graph_meets_every_reachable_demand(g in digraph(), s in 0usize..8, t in 0usize..8) {
        prop_assume!(s < g.n() && t < g.n() && s != t);
        let d = DemandSet::new([Demand::new(s, t, Bound::Exact)]).unwrap();
        let reachable = d.check_feasible(&g).is_ok();
        prop_assert_eq!(verify_solution(&g, &g.all_edges(), &d).all_satisfied(), reachable);
        prop_assert!(!verify_solution(&g, &EdgeSet::empty(), &d).all_satisfied());
    }

    #[test]
    fn edge_set_union_is_sorted_and_covers_both(a in proptest::collection::vec(0usize..50, 0..20),
                                                b in proptest::collection::vec(0usize..50, 0..20)) {
        let (x, y) = (EdgeSet::new(a.clone()), EdgeSet::new(b.clone()));
        let u = x.union(&y);
        prop_assert!(u.ids().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.iter().chain(&b).all(|&e| u.contains(e)));
        prop_assert!(u.len() <= x.len() + y.len());
    }

    #[test]
    fn monotone_capacities_never_exceed_their_parent((parent, x) in tree()) {
        let m = monotonize(&parent, &x);
        prop_assert_eq!(m[0], 1.0);
        for v in 1..m.len() {
            prop_assert!(m[v] >= 0.0 && m[v] <= m[parent[v].unwrap()]);
        }
        prop_assert_eq!(monotonize(&parent, &m), m);
    }

    #[test]
    fn group_flow_is_bounded_by_root_edges((parent, x) in tree(), pick in 1usize..16) {
        let n = parent.len();
        let mut group = vec![false; n];
        group[pick % (n - 1) + 1] = true;
        let xm = monotonize(&parent, &x);
        let root_cap: f64 = (1..n).filter(|&v| parent[v] == Some(0)).map(|v| xm[v]).sum();
        prop_assert!(tree_group_flow(&parent, &xm, &group) <= root_cap + 1e-12);
    }

    #[test]
    fn median_prune_contract(
        src in proptest::collection::vec(1u32..6, 1..5),
        snk in proptest::collection::vec(1u32..6, 1..5),
        bound in 2u32..10,
        masses in proptest::collection::vec((0i64..9, 1i64..9), 25),
    ) {
        let sources: Vec<_> = src.iter().enumerate().map(|(i, &l)| (i, l)).collect();
        let sinks: Vec<_> = snk.iter().enumerate().map(|(i, &l)| (10 + i, l)).collect();
        let mut y = Vec::new();
        for (k, &(a, _)) in sources.iter().enumerate() {
            for (j, &(b, _)) in sinks.iter().enumerate() {
                let (p, q) = masses[(k * 5 + j) % masses.len()];
                y.push((a, b, BigRational::new(BigInt::from(p), BigInt::from(q))));
            }
        }
        let pm = PairMass { sources, sinks, bound: Some(bound), y };
        if let Some(p) = median_prune(std::slice::from_ref(&pm)).remove(0) {
            prop_assert!(product_is_related(&pm, &p));
            prop_assert!(retains_half(&p));
            prop_assert!(!p.s_tilde.is_empty() && !p.t_tilde.is_empty());
        }
    }

    #[test]
    fn sub_seeds_are_stable(seed in any::<u64>(), idx in 0u64..1000) {
        prop_assert_eq!(sub_seed(seed, "x", idx), sub_seed(seed, "x", idx));
        prop_assert_ne!(sub_seed(seed, "x", idx), sub_seed(seed, "y", idx));
    }

    #[test]
    fn reduction_counts_follow_closed_forms(r in 1usize..4, sigma in 1usize..4, x in 1usize..4, p in 0.05f64..0.8, seed in any::<u64>()) {
        let inst = random_minrep(r, sigma, p, seed).unwrap();
        prop_assert_eq!(reduce_plus1(&inst, x).unwrap().counts(), plus1_counts(&inst, x));
        for k in 3..=6 {
            prop_assert_eq!(reduce_plusk(&inst, x, k).unwrap().counts(), plusk_counts(&inst, x, k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn drivers_always_return_feasible_outputs(seed in any::<u64>()) {
        let inst = random_instance(&mut stream(seed, "prop-instance", 0), Shape::ORACLE);
        let g = &inst.graph;
        let connect = inst.exact.with_bound(Bound::Unbounded);
        let h = preserver_approx(g, &inst.exact, 0.5, seed).unwrap();
        prop_assert!(verify_solution(g, &h, &inst.exact).all_satisfied());
        let h = pairwise_spanner_approx(g, &inst.bounded, 0.5, seed).unwrap();
        prop_assert!(verify_solution(g, &h, &inst.bounded).all_satisfied());
        let h = dsf_approx(g, &inst.exact, 0.5, seed).unwrap();
        prop_assert!(verify_solution(g, &h, &connect).all_satisfied());
    }

    #[test]
    fn greedy_spanners_are_minimal(seed in any::<u64>(), x in 1usize..3) {
        let inst = random_minrep(1, 2, 0.5, seed).unwrap();
        let g = reduce_plus1(&inst, x).unwrap();
        let h = greedy_minimal_spanner(&g, seed);
        prop_assert!(verify_additive(g.graph(), &h, 1));
        for &e in h.ids().iter().take(6) {
            let smaller = EdgeSet::new(h.ids().iter().copied().filter(|&f| f != e));
            prop_assert!(!verify_additive(g.graph(), &smaller, 1));
        }
    }
}
