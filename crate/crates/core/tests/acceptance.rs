//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! each and exits non-zero if any failed. Tolerances are the constants below.
//!
//! Most criteria are checked twice: once through the library's own suite or
//! verifier and once through a small reimplementation in this file.

use std::collections::{BTreeSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng as _;

use spanner_core::bench::{
    desk, feasibility_suite, ratio_suite, reduction_suite, soundness_suite, suite_instance, DeskPlan, Shape,
    SOUNDNESS_CORPUS,
};
use spanner_core::dsf::{dsf_approx, pairwise_spanner_approx};
use spanner_core::graph::{Bound, Demand, DemandSet, Dist, EdgeSet, Graph, MetricCompletion, INF};
use spanner_core::hardness::{
    completeness_witness_plus1, completeness_witness_plusk, min_rep, minrep_yes, plus1_size_bound, plusk_size_bound,
    random_minrep, reduce_plus1, reduce_plusk, soundness_scan, MinRepInstance, UndirectedGraph,
};
use spanner_core::junction::{build_gr, median_prune, product_is_related, retains_half, NodeKind, PairMass};
use spanner_core::preserver::preserver_approx;
use spanner_core::rng::{stream, sub_seed, Rng};
use spanner_core::rounding::{
    gkr_pass, gkr_round, height_reduce, monotonize, project_tree, zelikovsky_reduce, Arborescence, HeightOptions,
};

const SEED: u64 = 20_240_611;
const EPSILON: f64 = 0.5;

const FEASIBILITY_INSTANCES: usize = 500;
const FEASIBILITY_TIME: Duration = Duration::from_secs(60);
const RATIO_INSTANCES: usize = 100;
const RATIO_TIME: Duration = Duration::from_secs(180);
const PRESERVER_RATIO_CAP: f64 = 20.0;
const JUNCTION_RATIO_CAP: f64 = 50.0;
const PRUNE_CONFIGS: usize = 1000;
const PRUNE_TIME: Duration = Duration::from_secs(10);
const LAYERED_RANDOM_N5: usize = 300;
const SUBTREES: usize = 1000;
const DESK_TREES: usize = 1000;
const ZELIKOVSKY_FACTOR: f64 = 4.0;
const GKR_PASSES: usize = 10_000;
const GKR_TOLERANCE: f64 = 0.02;
const GKR_TREES: usize = 10;
const GKR_ROUND_INPUTS: usize = 200;
const REDUCTION_INSTANCES: usize = 20;
const MINIMAL_PLUS1_VERTICES: usize = 19;
const FLOW_SLACK: f64 = 1e-9;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: String) -> Verdict {
    Verdict { ok, detail }
}

// ---- independent graph helpers ----

fn bfs(n: usize, out: &[Vec<usize>], s: usize) -> Vec<Dist> {
    let mut d = vec![INF; n];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &out[u] {
            if d[v] == INF {
                d[v] = d[u] + 1;
                q.push_back(v);
            }
        }
    }
    d
}

fn directed_adj(g: &Graph, keep: Option<&EdgeSet>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if keep.is_none_or(|h| h.contains(e)) {
            out[u].push(v);
        }
    }
    out
}

fn undirected_adj(g: &UndirectedGraph, keep: Option<&EdgeSet>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if keep.is_none_or(|h| h.contains(e)) {
            out[u].push(v);
            out[v].push(u);
        }
    }
    out
}

/// Full APSP comparison for `d_H <= d_G + k`.
fn is_additive(g: &UndirectedGraph, h: &EdgeSet, k: Dist) -> bool {
    let (ga, ha) = (undirected_adj(g, None), undirected_adj(g, Some(h)));
    (0..g.n()).all(|s| {
        let (dg, dh) = (bfs(g.n(), &ga, s), bfs(g.n(), &ha, s));
        dg.iter().zip(&dh).all(|(&a, &b)| a == INF || (b != INF && b <= a + k))
    })
}

/// Which pairs of `demands` the edge set satisfies, by plain BFS. `Exact`
/// compares against `d_G`; `AtMost` against the bound; `Unbounded` asks for reachability.
fn satisfies(g: &Graph, h: &EdgeSet, demands: &DemandSet) -> bool {
    if h.ids().iter().any(|&e| e >= g.m()) {
        return false;
    }
    let (ga, ha) = (directed_adj(g, None), directed_adj(g, Some(h)));
    demands.iter().all(|d| {
        let dh = bfs(g.n(), &ha, d.s)[d.t];
        let dg = bfs(g.n(), &ga, d.s)[d.t];
        dh != INF
            && match d.bound {
                Bound::Exact => dh == dg,
                Bound::AtMost(b) => dh <= b,
                Bound::Unbounded => true,
            }
    })
}

fn with_bounds(g: &Graph, demands: &DemandSet, bound: impl Fn(Dist) -> Bound) -> DemandSet {
    let ga = directed_adj(g, None);
    DemandSet::new(demands.iter().map(|d| Demand::new(d.s, d.t, bound(bfs(g.n(), &ga, d.s)[d.t])))).unwrap()
}

// ---- criteria ----

/// Three drivers on the desk corpus; also carries the specialization checks.
fn feasibility() -> (Verdict, Verdict) {
    let start = Instant::now();
    let st = feasibility_suite(SEED, FEASIBILITY_INSTANCES, EPSILON);
    let took = start.elapsed();

    // second route: rerun the drivers and check outputs with local BFS
    let (mut pres, mut span, mut dsf, mut tight, mut loose) = (0, 0, 0, 0, 0);
    for i in 0..FEASIBILITY_INSTANCES {
        let inst = suite_instance(SEED, "feasibility", i, Shape::DESK);
        let g = &inst.graph;
        let seed = sub_seed(SEED, "feasibility-run", i as u64);
        let connect = inst.exact.with_bound(Bound::Unbounded);
        let ok = |out: spanner_core::Result<EdgeSet>, target: &DemandSet| out.is_ok_and(|h| satisfies(g, &h, target));
        pres += ok(preserver_approx(g, &inst.exact, EPSILON, seed), &inst.exact) as usize;
        span += ok(pairwise_spanner_approx(g, &inst.bounded, EPSILON, seed), &inst.bounded) as usize;
        dsf += ok(dsf_approx(g, &inst.exact, EPSILON, seed), &connect) as usize;
        let d_g = with_bounds(g, &inst.exact, Bound::AtMost);
        let d_n = with_bounds(g, &inst.exact, |_| Bound::AtMost(g.n() as Dist));
        tight += ok(pairwise_spanner_approx(g, &d_g, EPSILON, seed), &inst.exact) as usize;
        loose += ok(pairwise_spanner_approx(g, &d_n, EPSILON, seed), &connect) as usize;
    }
    let n = FEASIBILITY_INSTANCES;
    let first = st.preserver_ok == n && st.spanner_ok == n && st.dsf_ok == n;
    let c1 = verdict(
        first && took < FEASIBILITY_TIME && pres == n && span == n && dsf == n,
        format!(
            "suite preserver={}/{n} spanner={}/{n} dsf={}/{n}; recheck {pres}/{span}/{dsf}; {:.1}s (limit {}s)",
            st.preserver_ok,
            st.spanner_ok,
            st.dsf_ok,
            took.as_secs_f64(),
            FEASIBILITY_TIME.as_secs()
        ),
    );
    let c10 = verdict(
        st.tight_ok == n && st.loose_ok == n && tight == n && loose == n,
        format!("D=d_G {}/{n} (recheck {tight}), D=n {}/{n} (recheck {loose})", st.tight_ok, st.loose_ok),
    );
    (c1, c10)
}

fn ratios() -> Verdict {
    let start = Instant::now();
    let st = ratio_suite(SEED, RATIO_INSTANCES, EPSILON);
    let took = start.elapsed();
    let ok = st.instances == RATIO_INSTANCES
        && st.preserver.failures == 0
        && st.junction.failures == 0
        && st.preserver.samples.len() == RATIO_INSTANCES
        && st.preserver.max() <= PRESERVER_RATIO_CAP
        && st.junction.max() <= JUNCTION_RATIO_CAP
        && took < RATIO_TIME;
    verdict(
        ok,
        format!(
            "{} instances ({} skipped); max ratio preserver={:.3} (cap {PRESERVER_RATIO_CAP}) spanner={:.3} dsf={:.3} junction={:.3} (cap {JUNCTION_RATIO_CAP}); {:.1}s",
            st.instances,
            st.skipped,
            st.preserver.max(),
            st.spanner.max(),
            st.dsf.max(),
            st.junction.max(),
            took.as_secs_f64()
        ),
    )
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_pair_mass(rng: &mut Rng) -> PairMass {
    let reps = |rng: &mut Rng, base: usize| -> Vec<(usize, Dist)> {
        (0..rng.random_range(1..=5)).map(|k| (base + k, rng.random_range(1..=6))).collect()
    };
    loop {
        let sources = reps(rng, 0);
        let sinks = reps(rng, 100);
        let bound = if rng.random_bool(0.1) { None } else { Some(rng.random_range(2..=12)) };
        let mut y = Vec::new();
        for &(a, i) in &sources {
            for &(b, j) in &sinks {
                if bound.is_none_or(|d| i + j <= d) && rng.random_bool(0.6) {
                    y.push((a, b, q(rng.random_range(0..=10), rng.random_range(1..=12))));
                }
            }
        }
        if y.iter().any(|(_, _, m)| !m.is_zero()) {
            return PairMass { sources, sinks, bound, y };
        }
    }
}

fn median_pruning() -> Verdict {
    let start = Instant::now();
    let mut rng = stream(SEED, "acceptance-prune", 0);
    let mut bad = 0;
    for _ in 0..PRUNE_CONFIGS / 10 {
        let batch: Vec<PairMass> = (0..10).map(|_| random_pair_mass(&mut rng)).collect();
        for (pm, out) in batch.iter().zip(median_prune(&batch)) {
            let Some(p) = out else {
                bad += 1;
                continue;
            };
            let label = |reps: &[(usize, Dist)], id: usize| reps.iter().find(|r| r.0 == id).map(|r| r.1);
            let related = |a, b| match (label(&pm.sources, a), label(&pm.sinks, b)) {
                (Some(i), Some(j)) => pm.bound.is_none_or(|d| i + j <= d),
                _ => false,
            };
            let gamma: BigRational = pm.y.iter().map(|e| e.2.clone()).sum();
            let half = &gamma / q(2, 1);
            let s_set: BTreeSet<usize> = p.s_tilde.iter().copied().collect();
            let t_set: BTreeSet<usize> = p.t_tilde.iter().copied().collect();
            let kept_s: BigRational = pm.y.iter().filter(|e| s_set.contains(&e.0)).map(|e| e.2.clone()).sum();
            let kept_t: BigRational = pm.y.iter().filter(|e| t_set.contains(&e.1)).map(|e| e.2.clone()).sum();
            let own = s_set.iter().all(|&a| t_set.iter().all(|&b| related(a, b))) && kept_s >= half && kept_t >= half;
            let lib = product_is_related(pm, &p) && retains_half(&p) && p.gamma == gamma;
            if !(own && lib) {
                bad += 1;
            }
        }
    }
    let took = start.elapsed();
    verdict(
        bad == 0 && took < PRUNE_TIME,
        format!("{PRUNE_CONFIGS} configurations, {bad} violations; {:.2}s", took.as_secs_f64()),
    )
}

fn weakly_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    bfs(n, &adj, 0).iter().all(|&d| d != INF)
}

/// Walks of exactly `len` arcs from `s` that end at `r` and touch `r` only at the end.
fn walks_into(g: &Graph, s: usize, r: usize, len: usize) -> u64 {
    let mut ways = vec![0u64; g.n()];
    ways[s] = 1;
    for _ in 0..len {
        let mut next = vec![0u64; g.n()];
        for &(u, v) in g.edges() {
            if u != r {
                next[v] += ways[u];
            }
        }
        ways = next;
    }
    ways[r]
}

/// Per graph, root and source, compares path counts in `G_r` with walk counts in `g`.
fn layered_mismatches(g: &Graph) -> (usize, usize) {
    let (mut checks, mut bad) = (0, 0);
    for r in 0..g.n() {
        for s in (0..g.n()).filter(|&s| s != r) {
            let demands = DemandSet::new([Demand::new(s, r, Bound::Unbounded)]).unwrap();
            let (gr, inst) = build_gr(g, r, &demands, false).unwrap();
            let mut out = vec![Vec::new(); gr.len()];
            for &(a, b, _) in &gr.arcs {
                out[a].push(b);
            }
            // layers only increase along arcs, so memoized counting terminates
            let mut memo: Vec<Option<u64>> = vec![None; gr.len()];
            fn count(v: usize, root: usize, out: &[Vec<usize>], memo: &mut [Option<u64>]) -> u64 {
                if v == root {
                    return 1;
                }
                if let Some(c) = memo[v] {
                    return c;
                }
                let c = out[v].iter().map(|&w| count(w, root, out, memo)).sum();
                memo[v] = Some(c);
                c
            }
            for &src in &inst.pairs[0].sources {
                let NodeKind::Source { label, .. } = gr.nodes[src] else { unreachable!() };
                checks += 1;
                if count(src, gr.root, &out, &mut memo) != walks_into(g, s, r, label as usize) {
                    bad += 1;
                }
            }
        }
    }
    (checks, bad)
}

fn layered_bijection() -> Verdict {
    let (mut graphs, mut checks, mut bad) = (0, 0, 0);
    for n in 2..=4usize {
        let slots: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << slots.len() {
            let edges: Vec<_> =
                slots.iter().enumerate().filter(|&(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            if !weakly_connected(n, &edges) {
                continue;
            }
            let (c, b) = layered_mismatches(&Graph::new(n, edges).unwrap());
            graphs += 1;
            checks += c;
            bad += b;
        }
    }
    let mut rng = stream(SEED, "acceptance-layered", 0);
    let slots: Vec<(usize, usize)> =
        (0..5).flat_map(|u| (0..5).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let mut drawn = 0;
    while drawn < LAYERED_RANDOM_N5 {
        let p = rng.random_range(0.15..0.6);
        let edges: Vec<_> = slots.iter().copied().filter(|_| rng.random_bool(p)).collect();
        if !weakly_connected(5, &edges) {
            continue;
        }
        drawn += 1;
        let (c, b) = layered_mismatches(&Graph::new(5, edges).unwrap());
        graphs += 1;
        checks += c;
        bad += b;
    }
    verdict(
        bad == 0,
        format!(
            "{graphs} digraphs (all n<=4, {LAYERED_RANDOM_N5} random n=5), {checks} label checks, {bad} mismatches"
        ),
    )
}

fn random_digraph(rng: &mut Rng, n: usize) -> Graph {
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let p = rng.random_range(0.2..0.7);
    Graph::new(n, edges.into_iter().filter(|_| rng.random_bool(p))).unwrap()
}

fn height_contracts() -> Verdict {
    let mut rng = stream(SEED, "acceptance-height", 0);
    let (mut done, mut bad) = (0, 0);
    while done < SUBTREES {
        let n = rng.random_range(2..=7);
        let g = random_digraph(&mut rng, n);
        let metric = MetricCompletion::from_graph(&g);
        let (r, sigma) = (rng.random_range(0..n), rng.random_range(1..=3));
        let tree = height_reduce(&metric, r, sigma, HeightOptions::default()).unwrap();
        if tree.len() < 2 {
            continue;
        }
        let p = rng.random_range(0.3..0.9);
        let mut sel = vec![false; tree.len()];
        sel[0] = true;
        for v in 1..tree.len() {
            sel[v] = sel[tree.parent[v].unwrap()] && rng.random_bool(p);
        }
        done += 1;
        let j = project_tree(&tree, &sel);
        // second route: every witness is a real path of the stated weight
        let mut union = BTreeSet::new();
        let mut weight = 0u64;
        for v in (1..tree.len()).filter(|&v| sel[v]) {
            let w = &tree.phi[v];
            let walks = w.arcs.len() == w.vertices.len() - 1
                && w.arcs.iter().zip(w.vertices.windows(2)).all(|(&a, pair)| g.edge(a) == (pair[0], pair[1]));
            if !walks || w.arcs.len() as Dist != tree.weight[v] {
                bad += 1;
            }
            union.extend(w.arcs.iter().copied());
            weight += u64::from(tree.weight[v]);
        }
        if j.len() as u64 > tree.cost(&sel) || union.len() != j.len() || weight != tree.cost(&sel) {
            bad += 1;
        }
    }

    let mut worst_c = 0.0f64;
    let mut zbad = 0;
    for _ in 0..DESK_TREES {
        let n = rng.random_range(2..=30);
        let edges: Vec<(usize, usize, u64)> =
            (1..n).map(|v| (rng.random_range(0..v), v, rng.random_range(1..=5))).collect();
        let arb = Arborescence::new(n, 0, &edges).unwrap();
        let sigma = rng.random_range(1..=4);
        let red = zelikovsky_reduce(&arb, sigma).unwrap();
        let mut has_child = vec![false; n];
        for &(p, _, _) in &edges {
            has_child[p] = true;
        }
        let leaves: Vec<usize> = (1..n).filter(|&v| !has_child[v]).collect();
        let cost: u64 = edges.iter().map(|e| e.2).sum();
        let scale = sigma as f64 * (leaves.len() as f64).powf(1.0 / sigma as f64);
        let ratio = red.cost() as f64 / cost as f64;
        worst_c = worst_c.max(ratio / scale);
        if red.leaf_vertices() != leaves || red.height() > sigma || ratio > ZELIKOVSKY_FACTOR * scale {
            zbad += 1;
        }
    }
    verdict(
        bad == 0 && zbad == 0,
        format!(
            "{SUBTREES} subtrees, {bad} projection violations; {DESK_TREES} arborescences, {zbad} violations, worst c={worst_c:.3} (cap {ZELIKOVSKY_FACTOR})"
        ),
    )
}

fn random_tree(rng: &mut Rng, nodes: usize) -> Vec<Option<usize>> {
    std::iter::once(None).chain((1..nodes).map(|v| Some(rng.random_range(0..v)))).collect()
}

fn own_monotone(parent: &[Option<usize>], x: &[f64]) -> Vec<f64> {
    (0..parent.len())
        .map(|mut v| {
            let mut m = 1.0f64;
            while let Some(p) = parent[v] {
                m = m.min(x[v].clamp(0.0, 1.0));
                v = p;
            }
            m
        })
        .collect()
}

/// Root-to-group max flow, by recursion over children.
fn own_flow(v: usize, kids: &[Vec<usize>], x: &[f64], group: &BTreeSet<usize>) -> f64 {
    let inner =
        if group.contains(&v) { f64::INFINITY } else { kids[v].iter().map(|&c| own_flow(c, kids, x, group)).sum() };
    if v == 0 {
        inner
    } else {
        inner.min(x[v])
    }
}

fn gkr() -> Verdict {
    let mut rng = stream(SEED, "acceptance-gkr", 0);
    let (mut worst, mut mono_bad) = (0.0f64, 0);
    for t in 0..GKR_TREES {
        let nodes = rng.random_range(8..=20);
        let parent = random_tree(&mut rng, nodes);
        let x: Vec<f64> = (0..nodes).map(|_| rng.random_range(0.0..1.0)).collect();
        let xm = own_monotone(&parent, &x);
        if monotonize(&parent, &x).iter().zip(&xm).any(|(a, b)| (a - b).abs() > 1e-12) {
            mono_bad += 1;
        }
        let mut hits = vec![0usize; nodes];
        let mut pass_rng = stream(SEED, "acceptance-gkr-pass", t as u64);
        for _ in 0..GKR_PASSES {
            for (h, k) in hits.iter_mut().zip(gkr_pass(&parent, &xm, &mut pass_rng)) {
                *h += k as usize;
            }
        }
        for v in 0..nodes {
            worst = worst.max((hits[v] as f64 / GKR_PASSES as f64 - xm[v]).abs());
        }
    }

    let (mut round_bad, mut attempts) = (0, 0);
    for idx in 0..GKR_ROUND_INPUTS {
        let nodes = rng.random_range(6..=25);
        let parent = random_tree(&mut rng, nodes);
        let mut kids = vec![Vec::new(); nodes];
        for v in 1..nodes {
            kids[parent[v].unwrap()].push(v);
        }
        let groups: Vec<Vec<usize>> = (0..rng.random_range(1..=4))
            .map(|_| (0..rng.random_range(1..=3)).map(|_| rng.random_range(1..nodes)).collect())
            .collect();
        // route one unit per group, split across its members
        let mut x = vec![0.0f64; nodes];
        for g in &groups {
            let shares: Vec<f64> = g.iter().map(|_| rng.random_range(0.1..1.0)).collect();
            let total: f64 = shares.iter().sum();
            for (&member, share) in g.iter().zip(&shares) {
                let mut v = member;
                while let Some(p) = parent[v] {
                    x[v] = (x[v] + share / total).min(1.0);
                    v = p;
                }
            }
        }
        let feasible = groups.iter().all(|g| {
            let set: BTreeSet<usize> = g.iter().copied().collect();
            own_flow(0, &kids, &x, &set) >= 1.0 - FLOW_SLACK
        });
        if !feasible {
            continue;
        }
        attempts += 1;
        match gkr_round(&parent, &x, &groups, sub_seed(SEED, "acceptance-gkr-round", idx as u64)) {
            Ok(keep) => {
                let hit = groups.iter().all(|g| g.iter().any(|&v| keep[v]));
                let closed = (1..nodes).all(|v| !keep[v] || keep[parent[v].unwrap()]);
                if !(hit && closed && keep[0]) {
                    round_bad += 1;
                }
            }
            Err(_) => round_bad += 1,
        }
    }
    verdict(
        worst <= GKR_TOLERANCE && mono_bad == 0 && round_bad == 0 && attempts == GKR_ROUND_INPUTS,
        format!(
            "max marginal deviation {worst:.4} (tol {GKR_TOLERANCE}) over {GKR_PASSES} passes x {GKR_TREES} trees; {attempts} feasible rounding inputs, {round_bad} misses"
        ),
    )
}

fn pairs_within(s: usize) -> usize {
    s * s.saturating_sub(1) / 2
}

/// Vertex and edge totals written out from the construction recipes.
fn expected_size(inst: &MinRepInstance, x: usize, k: usize) -> (usize, usize) {
    let (n, s, e, m) = (inst.supernodes(), inst.sigma(), inst.superedges().len(), inst.edges().len());
    if k == 1 {
        let main = x * n + n * s + n + e;
        let edges = m + x * n * s + 2 * x * e + x * n + n * s + 2 * e + n * pairs_within(s) + 2 * main;
        (2 * main + 1, edges)
    } else {
        let c = (k - 1).div_ceil(2);
        let main = 2 * n * x * (k - 1) + n * s + 2 * n + e * (k - 2) + n * x * c;
        let per_copy = s + (k - 2) + (k - 1) + (c + 1) + 1;
        let edges = m + n * x * per_copy + 2 * e + e * (k - 3) + 2 * x * e + n * pairs_within(s) + k * main;
        (k * main + 1, edges)
    }
}

fn reduction_formulas() -> Verdict {
    let st = reduction_suite(SEED, REDUCTION_INSTANCES);
    let mut rng = stream(SEED, "acceptance-formulas", 0);
    let mut bad = 0;
    for idx in 0..REDUCTION_INSTANCES {
        let (r, sigma, x) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
        let inst = random_minrep(r, sigma, rng.random_range(0.1..0.6), sub_seed(SEED, "acceptance-minrep", idx as u64))
            .unwrap();
        for k in [1usize, 3, 4, 5] {
            let g = if k == 1 { reduce_plus1(&inst, x) } else { reduce_plusk(&inst, x, k as Dist) }.unwrap();
            if (g.graph().n(), g.graph().m()) != expected_size(&inst, x, k) {
                bad += 1;
            }
        }
    }
    let (tiny, _) = minrep_yes(1, 1, 1, SEED).unwrap();
    let minimal = reduce_plus1(&tiny, 2).unwrap().graph().n();
    verdict(
        st.count_mismatches.is_empty()
            && st.count_checks == 4 * REDUCTION_INSTANCES
            && st.minimal_vertices == MINIMAL_PLUS1_VERTICES
            && minimal == MINIMAL_PLUS1_VERTICES
            && bad == 0,
        format!(
            "{} family-count checks, {} mismatches; {} size rechecks, {bad} mismatches; minimal +1 instance |V|={}",
            st.count_checks,
            st.count_mismatches.len(),
            4 * REDUCTION_INSTANCES,
            st.minimal_vertices
        ),
    )
}

fn completeness() -> Verdict {
    let st = reduction_suite(SEED, REDUCTION_INSTANCES);
    let mut rng = stream(SEED, "acceptance-witness", 0);
    let (mut checks, mut bad) = (0, 0);
    for idx in 0..REDUCTION_INSTANCES {
        let r = rng.random_range(1..=3);
        let (sigma, d, x) = (rng.random_range(1..=2), rng.random_range(1..=r), rng.random_range(1..=3));
        let (inst, cover) = minrep_yes(r, sigma, d, sub_seed(SEED, "acceptance-yes", idx as u64)).unwrap();
        let opt = min_rep(&inst).map_or(cover.len(), |c| c.len());
        for k in [1, 3, 4, 5] {
            checks += 1;
            let g = if k == 1 { reduce_plus1(&inst, x) } else { reduce_plusk(&inst, x, k) }.unwrap();
            let h =
                if k == 1 { completeness_witness_plus1(&g, &cover) } else { completeness_witness_plusk(&g, &cover) }
                    .unwrap();
            let bound = if k == 1 { plus1_size_bound(&inst, x) } else { plusk_size_bound(&inst, x, k, opt) };
            if !is_additive(g.graph(), &h, k) || h.len() > bound {
                bad += 1;
            }
        }
    }
    let tight: Vec<String> = st.tightest.iter().map(|(k, (h, b))| format!("+{k}:{h}/{b}")).collect();
    verdict(
        st.witness_failures.is_empty() && st.witnesses == 4 * REDUCTION_INSTANCES && bad == 0,
        format!(
            "{} witnesses, {} failures; {checks} APSP rechecks, {bad} failures; tightest |H|/bound {}",
            st.witnesses,
            st.witness_failures.len(),
            tight.join(" ")
        ),
    )
}

/// Recounts the spanners of the first corpus shape by plain enumeration.
fn recount_first_shape() -> (usize, usize, bool) {
    let (r, sigma, d, x) = SOUNDNESS_CORPUS[0];
    let (inst, _) = minrep_yes(r, sigma, d, sub_seed(SEED, "soundness", 0)).unwrap();
    let g = reduce_plus1(&inst, x).unwrap();
    let report = soundness_scan(&g).unwrap();
    let graph = g.graph();
    let forced: Vec<usize> = (0..graph.m())
        .filter(|&e| {
            let rest = EdgeSet::new((0..graph.m()).filter(|&f| f != e));
            let (u, v) = graph.edge(e);
            let dh = bfs(graph.n(), &undirected_adj(graph, Some(&rest)), u)[v];
            dh == INF || dh > 2
        })
        .collect();
    let free: Vec<usize> = (0..graph.m()).filter(|e| !forced.contains(e)).collect();
    let opt = min_rep(&inst).unwrap().len();
    let (mut count, mut lower_ok) = (0, true);
    for subset in 0u32..1 << free.len() {
        let h = EdgeSet::new(
            forced
                .iter()
                .copied()
                .chain(free.iter().enumerate().filter(|&(b, _)| subset >> b & 1 == 1).map(|(_, &e)| e)),
        );
        if is_additive(graph, &h, 1) {
            count += 1;
            lower_ok &= 4 * h.len() >= x * opt;
        }
    }
    (report.spanners, count, lower_ok)
}

fn soundness() -> Verdict {
    let st = soundness_suite(SEED);
    let (scanned, recounted, lower_ok) = recount_first_shape();
    verdict(
        st.failures.is_empty() && st.spanners > 0 && scanned == recounted && lower_ok,
        format!(
            "{} spanners over {} shapes, {} failures; first shape recount {recounted} vs {scanned}",
            st.spanners,
            SOUNDNESS_CORPUS.len(),
            st.failures.len()
        ),
    )
}

fn determinism() -> Verdict {
    let start = Instant::now();
    let a = desk(SEED, DeskPlan::FULL);
    let b = desk(SEED, DeskPlan::FULL);
    verdict(
        a == b && !a.is_empty(),
        format!("two desk runs, {} bytes each, identical={}; {:.1}s", a.len(), a == b, start.elapsed().as_secs_f64()),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    let mut report = |id: u32, name: &'static str, v: Verdict| {
        println!("criterion {id:>2} {name:<22} {} {}", if v.ok { "PASS" } else { "FAIL" }, v.detail);
        results.push((id, name, v));
    };
    let (c1, c10) = feasibility();
    report(1, "feasibility", c1);
    report(2, "oracle-ratios", ratios());
    report(3, "median-pruning", median_pruning());
    report(4, "layered-bijection", layered_bijection());
    report(5, "height-reduction", height_contracts());
    report(6, "gkr-marginals", gkr());
    report(7, "reduction-formulas", reduction_formulas());
    report(8, "completeness", completeness());
    report(9, "soundness", soundness());
    report(10, "specialization", c10);
    report(11, "determinism", determinism());
    let failed = results.iter().filter(|r| !r.2.ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
