//! End-to-end runs on hand-written instances, checked against the exact oracles.

use spanner_core::dsf::{dsf_approx, dsf_report, pairwise_spanner_approx};
use spanner_core::graph::{parse_demands, parse_graph, verify_solution, Bound, DemandSet, Graph};
use spanner_core::hardness::{
    canonicalize, extract_covers, minrep_yes, reduce_plus1, rep_cover_verify, soundness_scan,
};
use spanner_core::oracle::{exact_min_density_junction_tree, exact_min_solution};
use spanner_core::preserver::{preserver_approx, preserver_report};
use spanner_core::Error;

const DIAMOND: &str = "\
# two routes from 0 to 3, plus a shortcut 0 -> 3 of length 3
6 7
0 1
1 3
0 2
2 3
0 4
4 5
5 3
";

fn diamond() -> Graph {
    parse_graph(DIAMOND).unwrap()
}

#[test]
fn preserver_matches_oracle_on_the_diamond() {
    let g = diamond();
    let d = parse_demands("0 3 -\n").unwrap();
    let h = preserver_approx(&g, &d, 0.5, 1).unwrap();
    assert!(verify_solution(&g, &h, &d).all_satisfied());
    assert_eq!(exact_min_solution(&g, &d).unwrap().opt, 2);
    assert_eq!(h.len(), 2);
}

#[test]
fn loose_bound_accepts_the_long_route_only_when_allowed() {
    let g = diamond();
    let tight = parse_demands("0 3 2\n").unwrap();
    let loose = parse_demands("0 3 3\n").unwrap();
    for d in [&tight, &loose] {
        let h = pairwise_spanner_approx(&g, d, 0.5, 4).unwrap();
        assert!(verify_solution(&g, &h, d).all_satisfied());
        assert_eq!(h.len(), exact_min_solution(&g, d).unwrap().opt);
    }
}

#[test]
fn dsf_connects_a_chain_of_pairs() {
    let g = parse_graph("5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let d = parse_demands("0 2 *\n3 4 *\n").unwrap();
    let rep = dsf_report(&g, &d, 0.5, 9).unwrap();
    assert!(verify_solution(&g, &rep.edges, &d).all_satisfied());
    assert!(!rep.phases.is_empty());
    assert_eq!(dsf_approx(&g, &d, 0.5, 9).unwrap(), rep.edges);
}

#[test]
fn reports_are_seed_deterministic() {
    let g = diamond();
    let d = parse_demands("0 3 -\n0 5 -\n").unwrap();
    assert_eq!(preserver_report(&g, &d, 0.5, 77).unwrap(), preserver_report(&g, &d, 0.5, 77).unwrap());
}

#[test]
fn unreachable_demands_are_rejected() {
    let g = parse_graph("3 1\n0 1\n").unwrap();
    let d = parse_demands("1 0 *\n").unwrap();
    assert!(preserver_approx(&g, &d, 0.5, 0).is_err());
    assert!(dsf_approx(&g, &d, 0.5, 0).is_err());
}

#[test]
fn parse_errors_carry_line_numbers() {
    match parse_graph("3 2\n0 1\n1 x\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
    match parse_demands("0 1 -\n\n0 1 7 9\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn junction_oracle_prefers_the_shared_hub() {
    // 0 and 1 both reach 4 and 5 through hub 2
    let g = parse_graph("6 4\n0 2\n1 2\n2 4\n2 5\n").unwrap();
    let d = DemandSet::uniform([(0, 4), (0, 5), (1, 4), (1, 5)], Bound::Exact).unwrap();
    let best = exact_min_density_junction_tree(&g, &d, 2).unwrap().unwrap();
    assert_eq!((best.edges.len(), best.satisfied), (4, 4));
    assert!(exact_min_density_junction_tree(&g, &d, 3).unwrap().is_none());
}

#[test]
fn plus1_pipeline_from_minrep_to_covers() {
    let (inst, cover) = minrep_yes(1, 2, 1, 3).unwrap();
    let g = reduce_plus1(&inst, 1).unwrap();
    let report = soundness_scan(&g).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    assert!(report.min_spanner >= report.opt_mr.div_ceil(4));
    let h = spanner_core::hardness::completeness_witness_plus1(&g, &cover).unwrap();
    let out = canonicalize(&g, &h).unwrap();
    let covers = extract_covers(&g, &out.edges).unwrap();
    assert!(covers.iter().all(|c| rep_cover_verify(&inst, c)));
}
