//! Seeded instance generation and the deterministic desk benchmark.
//!
//! Every suite takes a run seed and derives per-instance seeds from it, so
//! its rendered report is a pure function of the seed.

use std::collections::BTreeMap;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::dsf::{dsf_approx, dsf_report, pairwise_spanner_approx, pairwise_spanner_report};
use crate::error::Error;
use crate::graph::{bfs_distances, verify_solution, Bound, Demand, DemandSet, Direction, EdgeSet, Graph, INF};
use crate::hardness::{
    canonicalize, completeness_witness_plus1, completeness_witness_plusk, extract_covers, min_rep, minrep_yes,
    plus1_counts, plus1_size_bound, plusk_counts, plusk_size_bound, random_minrep, reduce_plus1, reduce_plusk,
    rep_cover_verify, soundness_scan, verify_additive,
};
use crate::junction::{junction_tree_density, JunctionOptions};
use crate::oracle::{exact_min_density_junction_tree, exact_min_solution, DensityOpt};
use crate::preserver::{preserver_approx, preserver_report};
use crate::rng::{stream, sub_seed, Rng};

/// Shape limits for [`random_instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub min_n: usize,
    pub max_n: usize,
    pub max_m: usize,
    pub max_pairs: usize,
    /// Largest additive slack put on spanner bounds.
    pub max_slack: u32,
}

impl Shape {
    /// `n <= 10`, `m <= 25`, `|P| <= 5`.
    pub const DESK: Shape = Shape { min_n: 3, max_n: 10, max_m: 25, max_pairs: 5, max_slack: 2 };
    /// Small enough that the exact oracles usually stay within budget.
    pub const ORACLE: Shape = Shape { min_n: 3, max_n: 8, max_m: 16, max_pairs: 4, max_slack: 2 };
}

/// A random digraph with reachable demand pairs, in three flavours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    /// Exact-distance pairs.
    pub exact: DemandSet,
    /// The same pairs with `D = d(s,t) + slack`.
    pub bounded: DemandSet,
}

/// Draws until at least one pair is reachable; pairs are distinct reachable `(s, t)`.
pub fn random_instance(rng: &mut Rng, shape: Shape) -> Instance {
    loop {
        let n = rng.random_range(shape.min_n..=shape.max_n);
        let mut all: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        all.shuffle(rng);
        let m = rng.random_range(n - 1..=shape.max_m.min(all.len()));
        all.truncate(m);
        all.sort_unstable();
        let graph = Graph::new(n, all).expect("distinct non-loop edges");
        let mut reachable = Vec::new();
        for s in 0..n {
            let d = bfs_distances(&graph, s, Direction::Forward).expect("vertex in range");
            reachable.extend((0..n).filter(|&t| t != s && d[t] != INF).map(|t| (s, t, d[t])));
        }
        if reachable.is_empty() {
            continue;
        }
        reachable.shuffle(rng);
        let count = rng.random_range(1..=shape.max_pairs.min(reachable.len()));
        reachable.truncate(count);
        reachable.sort_unstable();
        let exact =
            DemandSet::uniform(reachable.iter().map(|&(s, t, _)| (s, t)), Bound::Exact).expect("distinct pairs");
        let bounded = DemandSet::new(
            reachable
                .iter()
                .map(|&(s, t, d)| Demand::new(s, t, Bound::AtMost(d + rng.random_range(0..=shape.max_slack)))),
        )
        .expect("distinct pairs");
        return Instance { graph, exact, bounded };
    }
}

/// The `index`-th instance of a seeded suite.
pub fn suite_instance(seed: u64, suite: &str, index: usize, shape: Shape) -> Instance {
    random_instance(&mut stream(seed, suite, index as u64), shape)
}

/// The same pairs with `D = bound(d_G(s,t), n)`.
fn rebound(g: &Graph, d: &DemandSet, bound: impl Fn(u32, u32) -> u32) -> DemandSet {
    DemandSet::new(d.iter().map(|p| {
        let dist = bfs_distances(g, p.s, Direction::Forward).expect("vertex in range")[p.t];
        Demand::new(p.s, p.t, Bound::AtMost(bound(dist, g.n() as u32)))
    }))
    .expect("distinct pairs")
}

/// Feasibility and specialization checks over one seeded corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeasibilityStats {
    pub instances: usize,
    pub preserver_ok: usize,
    pub spanner_ok: usize,
    pub dsf_ok: usize,
    /// Spanner output with `D = d_G` preserves exact distances.
    pub tight_ok: usize,
    /// Spanner output with `D = n` connects every pair.
    pub loose_ok: usize,
    /// How often each candidate was chosen, per driver.
    pub chosen: BTreeMap<String, usize>,
    pub failures: Vec<String>,
}

impl FeasibilityStats {
    pub fn all_ok(&self) -> bool {
        let n = self.instances;
        [self.preserver_ok, self.spanner_ok, self.dsf_ok, self.tight_ok, self.loose_ok].iter().all(|&c| c == n)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "instances={}", self.instances).unwrap();
        writeln!(out, "preserver_ok={} spanner_ok={} dsf_ok={}", self.preserver_ok, self.spanner_ok, self.dsf_ok)
            .unwrap();
        writeln!(out, "spanner_tight_ok={} spanner_loose_ok={}", self.tight_ok, self.loose_ok).unwrap();
        for (label, count) in &self.chosen {
            writeln!(out, "chosen {label} {count}").unwrap();
        }
        for f in &self.failures {
            writeln!(out, "failure {f}").unwrap();
        }
        out
    }
}

/// Runs the three drivers on `count` instances and verifies every output
/// against its demand semantics; the spanner driver is also run with
/// `D = d_G` and `D = n`.
pub fn feasibility_suite(seed: u64, count: usize, epsilon: f64) -> FeasibilityStats {
    let mut st = FeasibilityStats { instances: count, ..FeasibilityStats::default() };
    for i in 0..count {
        let inst = suite_instance(seed, "feasibility", i, Shape::DESK);
        let g = &inst.graph;
        let run_seed = sub_seed(seed, "feasibility-run", i as u64);
        let mut check = |name: &str, out: crate::Result<crate::preserver::DriverReport>, target: &DemandSet| -> bool {
            match out {
                Ok(rep) => {
                    *st.chosen.entry(format!("{name}:{}", rep.chosen)).or_insert(0) += 1;
                    let ok = rep.edges.is_subset_of(g) && verify_solution(g, &rep.edges, target).all_satisfied();
                    if !ok {
                        st.failures.push(format!("{i} {name} output violates a demand"));
                    }
                    ok
                }
                Err(e) => {
                    st.failures.push(format!("{i} {name} {e}"));
                    false
                }
            }
        };
        let connect = inst.exact.with_bound(Bound::Unbounded);
        st.preserver_ok +=
            check("preserver", preserver_report(g, &inst.exact, epsilon, run_seed), &inst.exact) as usize;
        st.spanner_ok +=
            check("spanner", pairwise_spanner_report(g, &inst.bounded, epsilon, run_seed), &inst.bounded) as usize;
        st.dsf_ok += check("dsf", dsf_report(g, &inst.exact, epsilon, run_seed), &connect) as usize;
        let tight = rebound(g, &inst.exact, |d, _| d);
        let loose = rebound(g, &inst.exact, |_, n| n);
        let verdict = |out: crate::Result<EdgeSet>, target: &DemandSet| {
            out.map(|h| verify_solution(g, &h, target).all_satisfied()).unwrap_or(false)
        };
        if verdict(pairwise_spanner_approx(g, &tight, epsilon, run_seed), &inst.exact) {
            st.tight_ok += 1;
        } else {
            st.failures.push(format!("{i} spanner with D=d_G does not preserve distances"));
        }
        if verdict(pairwise_spanner_approx(g, &loose, epsilon, run_seed), &connect) {
            st.loose_ok += 1;
        } else {
            st.failures.push(format!("{i} spanner with D=n leaves a pair disconnected"));
        }
    }
    st
}

/// Ratio samples for one driver.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RatioColumn {
    pub samples: Vec<f64>,
    pub failures: usize,
}

impl RatioColumn {
    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        if self.samples.is_empty() {
            0.0
        } else {
            self.samples.iter().sum::<f64>() / self.samples.len() as f64
        }
    }

    fn row(&self, label: &str) -> String {
        format!(
            "{label:<10} n={:<4} mean={:.3} max={:.3} failures={}",
            self.samples.len(),
            self.mean(),
            self.max(),
            self.failures
        )
    }
}

/// Output size over the exact optimum, per driver, plus junction-tree density
/// over the exact best density at the oracle's best root.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RatioStats {
    pub instances: usize,
    pub skipped: usize,
    pub preserver: RatioColumn,
    pub spanner: RatioColumn,
    pub dsf: RatioColumn,
    pub junction: RatioColumn,
}

impl RatioStats {
    pub fn render(&self) -> String {
        let mut out = format!("instances={} skipped_over_budget={}\n", self.instances, self.skipped);
        for (label, col) in [
            ("preserver", &self.preserver),
            ("spanner", &self.spanner),
            ("dsf", &self.dsf),
            ("junction", &self.junction),
        ] {
            writeln!(out, "{}", col.row(label)).unwrap();
        }
        out
    }
}

/// Draws instances until `count` of them fit every oracle budget.
pub fn ratio_suite(seed: u64, count: usize, epsilon: f64) -> RatioStats {
    let mut st = RatioStats::default();
    let mut index = 0;
    while st.instances < count {
        let inst = suite_instance(seed, "ratio", index, Shape::ORACLE);
        index += 1;
        let g = &inst.graph;
        let connect = inst.exact.with_bound(Bound::Unbounded);
        let opts = [&inst.exact, &inst.bounded, &connect].map(|d| exact_min_solution(g, d));
        let mut best_root: Option<(usize, DensityOpt)> = None;
        let mut over_budget = opts.iter().any(|o| matches!(o, Err(Error::Budget(_))));
        for r in 0..g.n() {
            match exact_min_density_junction_tree(g, &inst.bounded, r) {
                Ok(Some(d)) => {
                    let better = match &best_root {
                        None => true,
                        Some((_, b)) => d.edges.len() * b.satisfied < b.edges.len() * d.satisfied,
                    };
                    if better {
                        best_root = Some((r, d));
                    }
                }
                Ok(None) => {}
                Err(_) => over_budget = true,
            }
        }
        if over_budget {
            st.skipped += 1;
            continue;
        }
        st.instances += 1;
        let run_seed = sub_seed(seed, "ratio-run", index as u64);
        let cols = [
            (&mut st.preserver, preserver_approx(g, &inst.exact, epsilon, run_seed), &opts[0]),
            (&mut st.spanner, pairwise_spanner_approx(g, &inst.bounded, epsilon, run_seed), &opts[1]),
            (&mut st.dsf, dsf_approx(g, &inst.exact, epsilon, run_seed), &opts[2]),
        ];
        for (col, out, opt) in cols {
            match (out, opt) {
                (Ok(h), Ok(opt)) if opt.opt > 0 => col.samples.push(h.len() as f64 / opt.opt as f64),
                _ => col.failures += 1,
            }
        }
        if let Some((r, exact)) = best_root {
            let jopts = JunctionOptions::from_epsilon(epsilon);
            match junction_tree_density(g, &inst.bounded, r, &jopts, run_seed) {
                Ok(out) => st.junction.samples.push(out.density() / exact.density()),
                Err(_) => st.junction.failures += 1,
            }
        }
    }
    st
}

/// Closed-form counts, witnesses and canonicalization on generated reductions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub count_checks: usize,
    pub count_mismatches: Vec<String>,
    pub minimal_vertices: usize,
    pub witnesses: usize,
    pub witness_failures: Vec<String>,
    /// `(|H|, bound)` with the smallest slack seen, per stretch.
    pub tightest: BTreeMap<u32, (usize, usize)>,
}

impl ReductionStats {
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "count_checks={} mismatches={}", self.count_checks, self.count_mismatches.len()).unwrap();
        writeln!(out, "minimal_plus1_vertices={}", self.minimal_vertices).unwrap();
        writeln!(out, "witnesses={} failures={}", self.witnesses, self.witness_failures.len()).unwrap();
        for (k, (h, b)) in &self.tightest {
            writeln!(out, "tightest +{k} size={h} bound={b}").unwrap();
        }
        for m in self.count_mismatches.iter().chain(&self.witness_failures) {
            writeln!(out, "failure {m}").unwrap();
        }
        out
    }
}

/// `instances` random Min-Rep instances checked against the closed forms for
/// `+1` and `+k` (k = 3, 4, 5), and as many YES instances whose witnesses are
/// verified by all-pairs BFS and against their size bounds.
pub fn reduction_suite(seed: u64, instances: usize) -> ReductionStats {
    let mut st = ReductionStats::default();
    for idx in 0..instances {
        let mut rng = stream(seed, "reduction-shape", idx as u64);
        let (r, sigma, x) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
        let p = rng.random_range(0.1..0.6);
        let inst = random_minrep(r, sigma, p, sub_seed(seed, "reduction-minrep", idx as u64)).expect("valid shape");
        let mut compare = |label: String, got: crate::Result<crate::hardness::SpannerInstance>, want| {
            st.count_checks += 1;
            match got {
                Ok(g) if g.counts() == want => {}
                Ok(g) => st.count_mismatches.push(format!("{label}: {:?} != {:?}", g.counts(), want)),
                Err(e) => st.count_mismatches.push(format!("{label}: {e}")),
            }
        };
        compare(format!("{idx} +1"), reduce_plus1(&inst, x), plus1_counts(&inst, x));
        for k in 3..=5 {
            compare(format!("{idx} +{k}"), reduce_plusk(&inst, x, k), plusk_counts(&inst, x, k));
        }
    }
    let (tiny, _) = minrep_yes(1, 1, 1, seed).expect("valid shape");
    st.minimal_vertices = reduce_plus1(&tiny, 2).map(|g| g.graph().n()).unwrap_or(0);

    for idx in 0..instances {
        let mut rng = stream(seed, "witness-shape", idx as u64);
        let r = rng.random_range(1..=3);
        let (sigma, d, x) = (rng.random_range(1..=2), rng.random_range(1..=r), rng.random_range(1..=3));
        let (inst, cover) = minrep_yes(r, sigma, d, sub_seed(seed, "witness-minrep", idx as u64)).expect("d <= r");
        let opt = min_rep(&inst).map(|c| c.len()).unwrap_or(cover.len());
        for k in [1, 3, 4, 5] {
            st.witnesses += 1;
            let label = format!("{idx} +{k} r={r} sigma={sigma} d={d} x={x}");
            let built = if k == 1 { reduce_plus1(&inst, x) } else { reduce_plusk(&inst, x, k) };
            let result = built.and_then(|g| {
                let h = if k == 1 {
                    completeness_witness_plus1(&g, &cover)?
                } else {
                    completeness_witness_plusk(&g, &cover)?
                };
                let bound = if k == 1 { plus1_size_bound(&inst, x) } else { plusk_size_bound(&inst, x, k, opt) };
                Ok((verify_additive(g.graph(), &h, k), h.len(), bound, g, h))
            });
            match result {
                Ok((true, size, bound, g, h)) if size <= bound => {
                    let slack = st.tightest.entry(k).or_insert((size, bound));
                    if (bound - size) * slack.1 < (slack.1 - slack.0) * bound {
                        *slack = (size, bound);
                    }
                    let canonical = canonicalize(&g, &h).map(|c| c.charges.is_empty()).unwrap_or(false);
                    let covers = extract_covers(&g, &h).map(|cs| cs.iter().all(|c| rep_cover_verify(&inst, c)));
                    if !canonical || covers != Ok(true) {
                        st.witness_failures.push(format!("{label}: witness is not canonical"));
                    }
                }
                Ok((true, size, bound, ..)) => st.witness_failures.push(format!("{label}: {size} > bound {bound}")),
                Ok((false, ..)) => st.witness_failures.push(format!("{label}: not a +{k} spanner")),
                Err(e) => st.witness_failures.push(format!("{label}: {e}")),
            }
        }
    }
    st
}

/// Exhaustive `+1` spanner scans on the smallest YES instances.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SoundnessStats {
    pub rows: Vec<String>,
    pub spanners: usize,
    pub failures: Vec<String>,
}

/// `(r, sigma, d, x)` shapes whose free-edge count fits the scan.
pub const SOUNDNESS_CORPUS: [(usize, usize, usize, usize); 5] =
    [(1, 1, 1, 1), (1, 1, 1, 2), (1, 1, 1, 3), (1, 2, 1, 1), (2, 1, 1, 1)];

pub fn soundness_suite(seed: u64) -> SoundnessStats {
    let mut st = SoundnessStats::default();
    for (idx, &(r, sigma, d, x)) in SOUNDNESS_CORPUS.iter().enumerate() {
        let label = format!("r={r} sigma={sigma} d={d} x={x}");
        let scan = minrep_yes(r, sigma, d, sub_seed(seed, "soundness", idx as u64))
            .and_then(|(inst, _)| reduce_plus1(&inst, x))
            .and_then(|g| soundness_scan(&g));
        match scan {
            Ok(rep) => {
                st.spanners += rep.spanners;
                st.rows.push(format!(
                    "{label} free={} spanners={} min_H={} opt_mr={} worst_growth={}/{}",
                    rep.free, rep.spanners, rep.min_spanner, rep.opt_mr, rep.worst_growth.0, rep.worst_growth.1
                ));
                if !rep.passed() {
                    st.failures.extend(rep.failures.iter().map(|f| format!("{label} {f}")));
                }
            }
            Err(e) => st.failures.push(format!("{label} {e}")),
        }
    }
    st
}

impl SoundnessStats {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            writeln!(out, "{r}").unwrap();
        }
        writeln!(out, "spanners_checked={} failures={}", self.spanners, self.failures.len()).unwrap();
        for f in &self.failures {
            writeln!(out, "failure {f}").unwrap();
        }
        out
    }
}

/// Sizes of the desk run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeskPlan {
    pub feasibility: usize,
    pub ratio: usize,
    pub reductions: usize,
    pub epsilon: f64,
}

impl DeskPlan {
    pub const FULL: DeskPlan = DeskPlan { feasibility: 500, ratio: 100, reductions: 20, epsilon: 0.5 };
}

/// All desk suites, rendered as one report.
pub fn desk(seed: u64, plan: DeskPlan) -> String {
    let mut out = format!("# desk seed={seed} epsilon={}\n", plan.epsilon);
    out.push_str("[feasibility]\n");
    out.push_str(&feasibility_suite(seed, plan.feasibility, plan.epsilon).render());
    out.push_str("[ratios]\n");
    out.push_str(&ratio_suite(seed, plan.ratio, plan.epsilon).render());
    out.push_str("[reductions]\n");
    out.push_str(&reduction_suite(seed, plan.reductions).render());
    out.push_str("[soundness]\n");
    out.push_str(&soundness_suite(seed).render());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_respect_the_shape() {
        for i in 0..50 {
            let inst = suite_instance(1, "shape", i, Shape::DESK);
            assert!(inst.graph.n() <= 10 && inst.graph.m() <= 25);
            assert!((1..=5).contains(&inst.exact.len()));
            inst.exact.check_feasible(&inst.graph).unwrap();
            inst.bounded.check_feasible(&inst.graph).unwrap();
        }
    }

    #[test]
    fn small_desk_run_is_clean() {
        let plan = DeskPlan { feasibility: 6, ratio: 3, reductions: 2, epsilon: 0.5 };
        let f = feasibility_suite(2, plan.feasibility, plan.epsilon);
        assert!(f.all_ok(), "{}", f.render());
        let r = reduction_suite(2, plan.reductions);
        assert!(r.count_mismatches.is_empty() && r.witness_failures.is_empty(), "{}", r.render());
        assert_eq!(r.minimal_vertices, 19);
        let q = ratio_suite(2, plan.ratio, plan.epsilon);
        assert_eq!(q.instances, 3);
    }

    #[test]
    fn instances_are_reproducible() {
        assert_eq!(suite_instance(3, "x", 4, Shape::DESK), suite_instance(3, "x", 4, Shape::DESK));
        assert_ne!(suite_instance(3, "x", 4, Shape::DESK), suite_instance(3, "x", 5, Shape::DESK));
    }
}
