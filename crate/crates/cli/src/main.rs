//! `spanner`: solvers, reduction generators, verification, exact oracles and
//! the desk benchmark, reporting `key=value` records on stdout.
//!
//! Exit codes: 0 success, 1 internal or input error, 2 infeasible input,
//! 3 budget refusal, 4 verification found a violated pair.

mod records;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spanner_core::bench::{desk, feasibility_suite, ratio_suite, reduction_suite, soundness_suite, DeskPlan};
use spanner_core::dsf::{dsf_report, pairwise_spanner_report};
use spanner_core::graph::{parse_demands, parse_edge_list, parse_graph, verify_solution, Bound, DemandSet, Graph};
use spanner_core::hardness::{
    additive_violations, completeness_witness_plus1, completeness_witness_plusk, minrep_yes, random_minrep,
    reduce_plus1, reduce_plusk, MinRepInstance, RepCover, UndirectedGraph,
};
use spanner_core::oracle::{exact_min_density_junction_tree, exact_min_solution};
use spanner_core::preserver::{preserver_report, DriverReport};
use spanner_core::Error;

use records::{dist, edge_lines, Records};

#[derive(Parser)]
#[command(name = "spanner", version, about = "Distance preservers, pairwise spanners and directed Steiner forest")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Run seed; every randomized step derives its stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 0.5)]
    epsilon: f64,
    /// Where to write the artifact (solution, instance, graph or report).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print candidate phases and debug logging (stderr).
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(clap::Args)]
struct Problem {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    demands: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Desk,
    Feasibility,
    Ratio,
    Reductions,
    Soundness,
}

#[derive(Subcommand)]
enum Cmd {
    /// Keep every demand distance exactly (bounds in the file are ignored).
    SolvePreserver(Problem),
    /// Connect every demand pair (bounds in the file are ignored).
    SolveDsf(Problem),
    /// Meet every pair's bound.
    SolveSpanner(Problem),
    /// Min-Rep instance: planted YES instance by default, random with `--density`.
    GenMinrep {
        /// Groups per side.
        #[arg(long)]
        r: usize,
        /// Vertices per group.
        #[arg(long)]
        sigma: usize,
        /// Supergraph degree of the planted instance.
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Edge probability for a random instance instead.
        #[arg(long)]
        density: Option<f64>,
        /// Write the planted cover, one vertex per line.
        #[arg(long)]
        cover_out: Option<PathBuf>,
    },
    /// Additive-spanner instance from a Min-Rep instance: `+1`, `+k` with `--k`, or `+3`, `+4`, ...
    Reduce {
        stretch: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        minrep: PathBuf,
        /// Copies per supernode.
        #[arg(long, default_value_t = 1)]
        x: usize,
        /// Write the role map here.
        #[arg(long)]
        roles_out: Option<PathBuf>,
        /// Cover file used to build a completeness witness.
        #[arg(long, requires = "witness_out")]
        cover: Option<PathBuf>,
        #[arg(long, requires = "cover")]
        witness_out: Option<PathBuf>,
    },
    /// Check a solution against demands (directed) or an additive stretch (undirected).
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        demands: Option<PathBuf>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Exact minimum solution, or the densest junction tree at `--root`.
    Oracle {
        #[command(flatten)]
        problem: Problem,
        #[arg(long)]
        root: Option<usize>,
    },
    /// Seeded benchmark suites; `desk` runs all of them.
    Bench {
        #[arg(long, value_enum, default_value_t = Suite::Desk)]
        suite: Suite,
        /// Instances for a single suite (defaults follow the desk plan).
        #[arg(long)]
        count: Option<usize>,
    },
}

enum Failure {
    Core(Error),
    File(PathBuf, Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
    Violated,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) | Error::NoPath { .. } => 2,
        Error::Budget(_) => 3,
        _ => 1,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> spanner_core::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| Failure::File(path.to_owned(), e))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn solve(cli: &Cli, name: &str, p: &Problem, target: impl Fn(&DemandSet) -> DemandSet) -> Outcome {
    let g = load(&p.graph, parse_graph)?;
    let demands = load(&p.demands, parse_demands)?;
    let report: DriverReport = match name {
        "solve-preserver" => preserver_report(&g, &demands, cli.epsilon, cli.seed)?,
        "solve-dsf" => dsf_report(&g, &demands, cli.epsilon, cli.seed)?,
        _ => pairwise_spanner_report(&g, &demands, cli.epsilon, cli.seed)?,
    };
    let mut rec = Records::new(name);
    rec.kv("seed", cli.seed).kv("epsilon", cli.epsilon);
    rec.kv("n", g.n()).kv("m", g.m()).kv("pairs", demands.len());
    if cli.trace {
        for line in report.render().lines() {
            rec.line(format!("trace {line}"));
        }
    }
    rec.kv("chosen", &report.chosen).kv("size", report.edges.len());
    for (u, v) in report.edges.ids().iter().map(|&e| g.edge(e)) {
        rec.line(format!("edge u={u} v={v}"));
    }
    let check = verify_solution(&g, &report.edges, &target(&demands));
    rec.pairs(&check);
    rec.kv("status", if check.all_satisfied() { "ok" } else { "violated" });
    if let Some(out) = &cli.out {
        write(out, &edge_lines(&g, &report.edges))?;
    }
    rec.print();
    if check.all_satisfied() {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn gen_minrep(
    cli: &Cli,
    r: usize,
    sigma: usize,
    degree: usize,
    density: Option<f64>,
    cover_out: &Option<PathBuf>,
) -> Outcome {
    let (inst, cover) = match density {
        Some(p) => (random_minrep(r, sigma, p, cli.seed)?, None),
        None => {
            let (inst, c) = minrep_yes(r, sigma, degree, cli.seed)?;
            (inst, Some(c))
        }
    };
    let mut rec = Records::new("gen-minrep");
    rec.kv("seed", cli.seed).kv("r", r).kv("sigma", sigma);
    rec.kv("inner", inst.inner()).kv("edges", inst.edges().len()).kv("superedges", inst.superedges().len());
    rec.kv("supergraph_degree", inst.supergraph_degree());
    if let Some(c) = &cover {
        let list: Vec<String> = c.vertices().iter().map(usize::to_string).collect();
        rec.kv("cover", list.join(","));
        if let Some(path) = cover_out {
            write(path, &(list.join("\n") + "\n"))?;
        }
    } else if cover_out.is_some() {
        return Err(Failure::Usage("a random instance has no planted cover".into()));
    }
    match &cli.out {
        Some(out) => write(out, &inst.format())?,
        None => rec.block(&inst.format()),
    }
    rec.print();
    Ok(())
}

fn parse_stretch(stretch: &str, k: Option<u32>) -> Result<u32, Failure> {
    let bad = || Failure::Usage(format!("stretch must be +1, +k (with --k) or +<integer>, got {stretch:?}"));
    match (stretch.strip_prefix('+').ok_or_else(bad)?, k) {
        ("k", Some(k)) => Ok(k),
        ("k", None) => Err(Failure::Usage("+k needs --k".into())),
        (digits, _) => digits.parse().map_err(|_| bad()),
    }
}

fn parse_cover(text: &str) -> spanner_core::Result<RepCover> {
    let mut ids = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        ids.push(line.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("not a vertex id: {line:?}") })?);
    }
    Ok(RepCover::new(ids))
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    cli: &Cli,
    stretch: &str,
    k: Option<u32>,
    minrep: &Path,
    x: usize,
    roles_out: &Option<PathBuf>,
    cover: &Option<PathBuf>,
    witness_out: &Option<PathBuf>,
) -> Outcome {
    let k = parse_stretch(stretch, k)?;
    let inst = load(minrep, MinRepInstance::parse)?;
    let g = match k {
        1 => reduce_plus1(&inst, x)?,
        2 => return Err(Failure::Usage("no construction for +2; use +1 or k >= 3".into())),
        k => reduce_plusk(&inst, x, k)?,
    };
    let counts = g.counts();
    let mut rec = Records::new("reduce");
    rec.kv("stretch", k).kv("x", x).kv("vertices", counts.vertices).kv("main_vertices", counts.main);
    rec.kv("edges", g.graph().m());
    for (family, c) in &counts.edges {
        rec.line(format!("family name={} edges={c}", family.name()));
    }
    if let (Some(cover), Some(path)) = (cover, witness_out) {
        let c = load(cover, parse_cover)?;
        let h = if k == 1 { completeness_witness_plus1(&g, &c)? } else { completeness_witness_plusk(&g, &c)? };
        let mut text = String::new();
        for &e in h.ids() {
            let (u, v) = g.graph().edge(e);
            text.push_str(&format!("{u} {v}\n"));
        }
        write(path, &text)?;
        rec.kv("witness_edges", h.len());
    }
    if let Some(path) = roles_out {
        write(path, &g.format_roles())?;
    }
    match &cli.out {
        Some(out) => write(out, &g.graph().format())?,
        None => rec.block(&g.graph().format()),
    }
    rec.print();
    Ok(())
}

fn verify(graph: &Path, solution: &Path, demands: &Option<PathBuf>, k: Option<u32>) -> Outcome {
    let mut rec = Records::new("verify");
    let ok = match (demands, k) {
        (Some(d), _) => {
            let g: Graph = load(graph, parse_graph)?;
            let h = load(solution, |t| parse_edge_list(t, &g))?;
            let demands = load(d, parse_demands)?;
            let report = verify_solution(&g, &h, &demands);
            rec.kv("mode", "demands").kv("size", h.len());
            rec.pairs(&report);
            report.all_satisfied()
        }
        (None, Some(k)) => {
            let g = load(graph, UndirectedGraph::parse)?;
            let h = load(solution, |t| g.parse_edge_list(t))?;
            let bad = additive_violations(&g, &h, k);
            rec.kv("mode", "additive").kv("k", k).kv("size", h.len());
            rec.kv("pairs", g.n() * g.n().saturating_sub(1) / 2).kv("violated", bad.len());
            for v in &bad {
                rec.line(format!("violation u={} v={} d_g={} d_h={}", v.u, v.v, dist(v.in_g), dist(v.in_h)));
            }
            bad.is_empty()
        }
        (None, None) => return Err(Failure::Usage("verify needs --demands or --k".into())),
    };
    rec.kv("status", if ok { "pass" } else { "fail" });
    rec.print();
    if ok {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn oracle(cli: &Cli, p: &Problem, root: Option<usize>) -> Outcome {
    let g = load(&p.graph, parse_graph)?;
    let demands = load(&p.demands, parse_demands)?;
    let mut rec = Records::new("oracle");
    let edges = match root {
        None => {
            let sol = exact_min_solution(&g, &demands)?;
            rec.kv("opt", sol.opt);
            sol.witness
        }
        Some(r) => match exact_min_density_junction_tree(&g, &demands, r)? {
            Some(best) => {
                rec.kv("root", r).kv("edges", best.edges.len()).kv("satisfied", best.satisfied);
                rec.kv("density", format!("{:.6}", best.density()));
                best.edges
            }
            None => return Err(Error::Infeasible(format!("no pair can be routed through {r}")).into()),
        },
    };
    for (u, v) in edges.ids().iter().map(|&e| g.edge(e)) {
        rec.line(format!("edge u={u} v={v}"));
    }
    if let Some(out) = &cli.out {
        write(out, &edge_lines(&g, &edges))?;
    }
    rec.print();
    Ok(())
}

fn bench(cli: &Cli, suite: Suite, count: Option<usize>) -> Outcome {
    let plan = DeskPlan { epsilon: cli.epsilon, ..DeskPlan::FULL };
    let report = match suite {
        Suite::Desk => desk(cli.seed, plan),
        Suite::Feasibility => feasibility_suite(cli.seed, count.unwrap_or(plan.feasibility), plan.epsilon).render(),
        Suite::Ratio => ratio_suite(cli.seed, count.unwrap_or(plan.ratio), plan.epsilon).render(),
        Suite::Reductions => reduction_suite(cli.seed, count.unwrap_or(plan.reductions)).render(),
        Suite::Soundness => soundness_suite(cli.seed).render(),
    };
    match &cli.out {
        Some(out) => write(out, &report),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::SolvePreserver(p) => solve(cli, "solve-preserver", p, |d| d.with_bound(Bound::Exact)),
        Cmd::SolveDsf(p) => solve(cli, "solve-dsf", p, |d| d.with_bound(Bound::Unbounded)),
        Cmd::SolveSpanner(p) => solve(cli, "solve-spanner", p, DemandSet::clone),
        Cmd::GenMinrep { r, sigma, degree, density, cover_out } => {
            gen_minrep(cli, *r, *sigma, *degree, *density, cover_out)
        }
        Cmd::Reduce { stretch, k, minrep, x, roles_out, cover, witness_out } => {
            reduce(cli, stretch, *k, minrep, *x, roles_out, cover, witness_out)
        }
        Cmd::Verify { graph, solution, demands, k } => verify(graph, solution, demands, *k),
        Cmd::Oracle { problem, root } => oracle(cli, problem, *root),
        Cmd::Bench { suite, count } => bench(cli, *suite, *count),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.trace { log::LevelFilter::Debug } else { log::LevelFilter::Warn })
        .parse_env("SPANNER_LOG")
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = match &f {
                Failure::Core(e) => {
                    eprintln!("error: {e}");
                    exit_code(e)
                }
                Failure::File(path, e) => {
                    eprintln!("error: {}: {e}", path.display());
                    exit_code(e)
                }
                Failure::Io(path, e) => {
                    eprintln!("error: {}: {e}", path.display());
                    1
                }
                Failure::Usage(msg) => {
                    eprintln!("error: {msg}");
                    1
                }
                Failure::Violated => 4,
            };
            ExitCode::from(code)
        }
    }
}
