//! Browser entry points for solving, building reductions and checking
//! spanners. Each takes plain text and returns a JSON string; failures come
//! back as `{"error": "..."}` so the page never has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use spanner_core::dsf::{dsf_report, pairwise_spanner_report};
use spanner_core::graph::{parse_demands, parse_graph, verify_solution, Bound, Dist, INF};
use spanner_core::hardness::{
    additive_violations, completeness_witness_plus1, completeness_witness_plusk, minrep_yes, reduce_plus1,
    reduce_plusk, verify_additive, UndirectedGraph,
};
use spanner_core::preserver::preserver_report;

fn dist(d: Dist) -> Value {
    if d == INF {
        Value::Null
    } else {
        json!(d)
    }
}

fn finish(result: spanner_core::Result<Value>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

/// Runs one driver (`preserver`, `spanner` or `dsf`) on a graph and demand file.
#[wasm_bindgen]
pub fn solve(graph: &str, demands: &str, mode: &str, epsilon: f64, seed: u64) -> String {
    finish((|| {
        let g = parse_graph(graph)?;
        let d = parse_demands(demands)?;
        let (report, target) = match mode {
            "preserver" => (preserver_report(&g, &d, epsilon, seed)?, d.with_bound(Bound::Exact)),
            "dsf" => (dsf_report(&g, &d, epsilon, seed)?, d.with_bound(Bound::Unbounded)),
            "spanner" => (pairwise_spanner_report(&g, &d, epsilon, seed)?, d.clone()),
            other => return Err(spanner_core::Error::Invalid(format!("unknown mode {other:?}"))),
        };
        let check = verify_solution(&g, &report.edges, &target);
        let pairs: Vec<Value> = check
            .pairs
            .iter()
            .map(|p| json!({ "s": p.demand.s, "t": p.demand.t, "d_g": dist(p.original), "d_h": dist(p.achieved), "ok": p.satisfied }))
            .collect();
        let edges: Vec<[usize; 2]> = report.edges.ids().iter().map(|&e| g.edge(e).into()).collect();
        Ok(json!({
            "mode": mode,
            "chosen": report.chosen,
            "size": edges.len(),
            "of": g.m(),
            "edges": edges,
            "pairs": pairs,
            "ok": check.all_satisfied(),
        }))
    })())
}

/// Plants a YES Min-Rep instance, reduces it to a `+k` instance and checks
/// the completeness witness by full BFS.
#[wasm_bindgen]
pub fn reduce(r: usize, sigma: usize, degree: usize, x: usize, k: u32, seed: u64) -> String {
    finish((|| {
        let (inst, cover) = minrep_yes(r, sigma, degree, seed)?;
        let g = if k == 1 { reduce_plus1(&inst, x)? } else { reduce_plusk(&inst, x, k)? };
        let h = if k == 1 { completeness_witness_plus1(&g, &cover)? } else { completeness_witness_plusk(&g, &cover)? };
        let families: serde_json::Map<String, Value> =
            g.counts().edges.iter().map(|(f, c)| (f.name().to_string(), json!(c))).collect();
        Ok(json!({
            "k": k,
            "vertices": g.graph().n(),
            "edges": g.graph().m(),
            "families": families,
            "cover": cover.vertices(),
            "witness_edges": h.len(),
            "witness_ok": verify_additive(g.graph(), &h, k),
            "graph": g.graph().format(),
            "witness": h.ids().iter().map(|&e| { let (u, v) = g.graph().edge(e); format!("{u} {v}\n") }).collect::<String>(),
        }))
    })())
}

/// Checks an undirected `u v` edge list against `d_H <= d_G + k` for all pairs.
#[wasm_bindgen]
pub fn verify(graph: &str, solution: &str, k: u32) -> String {
    finish((|| {
        let g = UndirectedGraph::parse(graph)?;
        let h = g.parse_edge_list(solution)?;
        let bad = additive_violations(&g, &h, k);
        let shown: Vec<Value> = bad
            .iter()
            .take(20)
            .map(|v| json!({ "u": v.u, "v": v.v, "d_g": dist(v.in_g), "d_h": dist(v.in_h) }))
            .collect();
        Ok(json!({ "k": k, "size": h.len(), "violated": bad.len(), "examples": shown, "ok": bad.is_empty() }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRAPH: &str = "6 7\n0 1\n1 3\n0 2\n2 3\n0 4\n4 5\n5 3\n";

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn solve_reports_a_feasible_preserver() {
        let v = parse(solve(GRAPH, "0 3 -\n", "preserver", 0.5, 1));
        assert_eq!(v["ok"], true);
        assert_eq!(v["size"], 2);
        assert_eq!(v["pairs"][0]["d_h"], 2);
    }

    #[test]
    fn errors_come_back_as_json() {
        let v = parse(solve("2 1\n0 x\n", "", "dsf", 0.5, 1));
        assert!(v["error"].as_str().unwrap().contains("line 2"));
        assert!(parse(solve(GRAPH, "0 3 -\n", "nope", 0.5, 1))["error"].is_string());
    }

    #[test]
    fn reduction_witness_round_trips_through_verify() {
        for k in [1, 3] {
            let v = parse(reduce(2, 2, 1, 2, k, 5));
            assert_eq!(v["witness_ok"], true);
            let check = parse(verify(v["graph"].as_str().unwrap(), v["witness"].as_str().unwrap(), k));
            assert_eq!(check["ok"], true);
            assert_eq!(check["size"], v["witness_edges"]);
        }
    }

    #[test]
    fn verify_flags_an_empty_spanner() {
        let v = parse(verify("3 2\n0 1\n1 2\n", "", 1));
        assert_eq!(v["ok"], false);
        assert_eq!(v["violated"], 3);
    }
}
