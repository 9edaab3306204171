//! The `coupon` command line.
//!
//! Exit codes: 0 success or valid, 1 invalid or certified negative, 2
//! malformed input, 3 search budget exhausted.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use coupon_core::construct::{
    boolean_cube_coloring, concatenated_coloring, syndrome_coloring, ConcatParams, HammingCode,
};
use coupon_core::exact::{
    exact_coupon_number, exact_injective_number, min_total_dominating, panchromatic_number, Outcome,
    SearchBudget,
};
use coupon_core::experiment::{ensemble_experiment, paley_experiment, EnsembleConfig, ExperimentReport, Status};
use coupon_core::generators::{
    complete_bipartite, cycle, extremal_blowup, hamming_graph, incidence_graph, paley_graph, random_regular,
};
use coupon_core::two_round::{best_k, two_round_color, TwoRoundError, TwoRoundParams, TwoRoundTrace};
use coupon_core::verify::{check_coupon, check_injective, check_total_dominating, Check};
use coupon_core::{Coloring, Graph, Hypergraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "coupon", version, about = "Coupon and injective colorings of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a graph as an edge list.
    Gen(GenArgs),
    /// Write an explicit coloring of a Hamming graph.
    Construct(ConstructArgs),
    /// Check a coloring or vertex set against a graph.
    Verify(VerifyArgs),
    /// Solve a small instance exactly.
    Exact(ExactArgs),
    /// Randomized two-round coupon coloring of a regular graph.
    Color(ColorArgs),
    /// Run one of the batch experiments and write its JSON report.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Hamming,
    Cycle,
    Kdd,
    Paley,
    Incidence,
    Blowup,
    Regular,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Word length, cycle length, ground-set size or vertex count, by family.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Construction {
    /// Coupon coloring of the cube H(2^r, 2).
    Thm21,
    /// Hamming-code syndrome coloring of H((q^k-1)/(q-1), q).
    Thm22,
    /// Concatenated syndrome coloring.
    Thm23,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum)]
    construction: Construction,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the colored Hamming graph here.
    #[arg(long)]
    graph_out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyKind {
    Coupon,
    Injective,
    Totaldom,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: VerifyKind,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Whitespace-separated vertex list, for `totaldom`.
    #[arg(long)]
    set: Option<PathBuf>,
    /// Number of colors for `coupon`; defaults to the coloring's header.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ExactKind {
    Chic,
    Chii,
    Gammat,
    Panchromatic,
}

#[derive(Args, Debug)]
struct BudgetArgs {
    #[arg(long, default_value_t = 60_000)]
    budget_ms: u64,
    #[arg(long, default_value_t = 200_000_000)]
    budget_nodes: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SearchBudget> {
        Ok(SearchBudget::new(self.budget_nodes, self.budget_ms)?)
    }
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(value_enum)]
    kind: ExactKind,
    /// Graph edge list, or a hypergraph file for `panchromatic`.
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Witness output (coloring, or vertex set for `gammat`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct TwoRoundArgs {
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 0.25)]
    eta: f64,
    #[arg(long, default_value_t = 50)]
    max_restarts: usize,
    #[arg(long, default_value_t = 3)]
    max_attempts: usize,
    #[arg(long, default_value_t = 16)]
    d_min: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl TwoRoundArgs {
    fn params(&self) -> TwoRoundParams {
        TwoRoundParams {
            delta: self.delta,
            eta: self.eta,
            max_restarts: self.max_restarts,
            max_attempts: self.max_attempts,
            d_min: self.d_min,
            seed: self.seed,
        }
    }
}

#[derive(Args, Debug)]
struct ColorArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Target number of colors; without it the largest certified `k` is searched.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    params: TwoRoundArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentKind {
    Ensemble,
    Paley,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: ExperimentKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Paley orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    q: Vec<usize>,
    /// Allow ensemble instances too large for exact solves.
    #[arg(long)]
    heuristic: bool,
    /// `--seed` is the base seed of the whole ensemble.
    #[command(flatten)]
    params: TwoRoundArgs,
    #[arg(long, default_value_t = 60_000)]
    budget_ms: u64,
    #[arg(long, default_value_t = 50_000_000)]
    budget_nodes: u64,
    /// Record wall-clock times (reports are then no longer reproducible).
    #[arg(long)]
    wall_times: bool,
    /// Directory for witness colorings referenced from the report.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exact-solver record printed with `--json`.
#[derive(Serialize)]
struct SolveRecord {
    problem: &'static str,
    n: usize,
    result: serde_json::Value,
    witness_file: Option<String>,
    nodes: u64,
    wall_ms: u64,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_MALFORMED
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Exact(a) => exact(a),
        Command::Color(a) => color(a),
        Command::Experiment(a) => experiment(a),
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.with_context(|| format!("missing --{flag}"))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::parse_edge_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_coloring(path: &Path) -> Result<Coloring> {
    Coloring::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_set(path: &Path) -> Result<Vec<usize>> {
    read(path)?
        .split_whitespace()
        .map(|t| t.parse::<usize>().with_context(|| format!("bad vertex `{t}`")))
        .collect()
}

fn set_text(set: &[usize]) -> String {
    let mut s = set.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    s.push('\n');
    s
}

fn gen(a: GenArgs) -> Result<i32> {
    let g = match a.family {
        Family::Hamming => hamming_graph(need(a.n, "n")?, need(a.q, "q")?)?,
        Family::Cycle => cycle(need(a.n, "n")?)?,
        Family::Kdd => complete_bipartite(need(a.d, "d")?)?,
        Family::Paley => paley_graph(need(a.q, "q")?)?,
        Family::Incidence => incidence_graph(need(a.n, "n")?, need(a.d, "d")?)?,
        Family::Blowup => extremal_blowup(need(a.d, "d")?, need(a.n, "n")?)?,
        Family::Regular => random_regular(need(a.n, "n")?, need(a.d, "d")?, a.seed)?,
    };
    emit(a.out.as_deref(), &g.to_edge_list())?;
    Ok(EXIT_OK)
}

fn construct(a: ConstructArgs) -> Result<i32> {
    let (coloring, len, q) = match a.construction {
        Construction::Thm21 => {
            let r = need(a.r, "r")?;
            let r32 = u32::try_from(r).context("--r too large")?;
            let len = 1usize.checked_shl(r32).context("--r too large")?;
            (boolean_cube_coloring(r32)?, len, 2)
        }
        Construction::Thm22 => {
            let q = need(a.q, "q")?;
            let code = HammingCode::new(q, need(a.k, "k")?)?;
            let len = code.len();
            (syndrome_coloring(&code, len, q)?, len, q)
        }
        Construction::Thm23 => {
            let params = ConcatParams {
                p: need(a.p, "p")?,
                r: need(a.r, "r")?,
                q: need(a.q, "q")?,
                k: need(a.k, "k")?,
            };
            if params.p < 2 || params.q < 2 {
                bail!("--p and --q must be prime powers");
            }
            (concatenated_coloring(params)?, params.word_len(), params.q)
        }
    };
    if let Some(path) = &a.graph_out {
        emit(Some(path), &hamming_graph(len, q)?.to_edge_list())?;
    }
    emit(a.out.as_deref(), &coloring.to_text())?;
    if a.json {
        let degree = (q - 1) * len;
        let summary = serde_json::json!({
            "construction": format!("{:?}", a.construction).to_lowercase(),
            "word_len": len,
            "q": q,
            "vertices": coloring.len(),
            "colors": coloring.k(),
            "colors_over_degree": coloring.k() as f64 / degree as f64,
            "colors_over_q_times_len_minus_1": if len > 1 {
                Some(coloring.k() as f64 / (q * (len - 1)) as f64)
            } else {
                None
            },
        });
        eprintln!("{summary}");
    }
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    let (valid, detail) = match a.kind {
        VerifyKind::Coupon => {
            let c = read_coloring(need(a.coloring.as_ref(), "coloring")?)?;
            let k = a.k.unwrap_or(c.k());
            match check_coupon(&g, &c, k)? {
                Check::Valid => (true, serde_json::json!({ "k": k })),
                Check::Invalid(w) => (
                    false,
                    serde_json::json!({ "k": k, "vertex": w.vertex, "missing_color": w.color }),
                ),
            }
        }
        VerifyKind::Injective => {
            let c = read_coloring(need(a.coloring.as_ref(), "coloring")?)?;
            match check_injective(&g, &c)? {
                Check::Valid => (true, serde_json::json!({ "colors": c.distinct_colors() })),
                Check::Invalid(w) => (
                    false,
                    serde_json::json!({ "u": w.u, "middle": w.middle, "v": w.v }),
                ),
            }
        }
        VerifyKind::Totaldom => {
            let set = read_set(need(a.set.as_ref(), "set")?)?;
            match check_total_dominating(&g, &set)? {
                Check::Valid => (true, serde_json::json!({ "size": set.len() })),
                Check::Invalid(v) => (false, serde_json::json!({ "undominated": v })),
            }
        }
    };
    if a.json {
        println!("{}", serde_json::json!({ "valid": valid, "detail": detail }));
    } else if valid {
        println!("valid");
    } else {
        println!("invalid {detail}");
    }
    Ok(if valid { EXIT_OK } else { EXIT_INVALID })
}

fn exact(a: ExactArgs) -> Result<i32> {
    let budget = a.budget.budget()?;
    let text = read(&a.graph)?;
    let (problem, n, outcome): (&'static str, usize, Outcome<String>) = match a.kind {
        ExactKind::Panchromatic => {
            let h = Hypergraph::parse(&text).with_context(|| format!("parsing {}", a.graph.display()))?;
            ("panchromatic", h.n(), map_witness(panchromatic_number(&h, budget)?, |c| c.to_text()))
        }
        kind => {
            let g = Graph::parse_edge_list(&text).with_context(|| format!("parsing {}", a.graph.display()))?;
            let out = match kind {
                ExactKind::Chic => ("chic", map_witness(exact_coupon_number(&g, budget)?, |c| c.to_text())),
                ExactKind::Chii => ("chii", map_witness(exact_injective_number(&g, budget)?, |c| c.to_text())),
                _ => ("gammat", map_witness(min_total_dominating(&g, budget)?, |s| set_text(&s))),
            };
            (out.0, g.n(), out.1)
        }
    };
    let stats = outcome.stats();
    let (code, result) = match &outcome {
        Outcome::Solved { value, witness, .. } => {
            if let Some(path) = &a.out {
                emit(Some(path), witness)?;
            }
            (EXIT_OK, serde_json::json!(value))
        }
        Outcome::Unknown { lower, upper, .. } => (
            EXIT_UNKNOWN,
            serde_json::json!({ "unknown": { "lower": lower, "upper": upper } }),
        ),
    };
    if a.json {
        let record = SolveRecord {
            problem,
            n,
            result,
            witness_file: a
                .out
                .as_ref()
                .filter(|_| code == EXIT_OK)
                .map(|p| p.display().to_string()),
            nodes: stats.nodes,
            wall_ms: stats.wall_ms,
        };
        println!("{}", serde_json::to_string(&record)?);
    } else {
        match outcome {
            Outcome::Solved { value, .. } => println!("{value}"),
            Outcome::Unknown { lower, upper, .. } => println!("unknown {lower} {upper}"),
        }
    }
    Ok(code)
}

fn map_witness<W, V>(o: Outcome<W>, f: impl FnOnce(W) -> V) -> Outcome<V> {
    match o {
        Outcome::Solved { value, witness, stats } => Outcome::Solved {
            value,
            witness: f(witness),
            stats,
        },
        Outcome::Unknown { lower, upper, stats } => Outcome::Unknown { lower, upper, stats },
    }
}

#[derive(Serialize)]
struct ColorRecord<'a> {
    k: Option<usize>,
    success: bool,
    method: &'static str,
    coloring_file: Option<String>,
    trace: Option<&'a TwoRoundTrace>,
}

fn color(a: ColorArgs) -> Result<i32> {
    let g = read_graph(&a.graph)?;
    let params = a.params.params();
    let (k, coloring, method, trace) = match a.k {
        Some(k) => match two_round_color(&g, k, &params) {
            Ok(s) => (Some(k), Some(s.coloring), "two_round", Some(s.trace)),
            Err(TwoRoundError::Failed(trace)) => (None, None, "two_round", Some(*trace)),
            Err(e) => return Err(e.into()),
        },
        None => {
            let best = best_k(&g, &params, a.budget.budget()?)?;
            let method = match best.method {
                coupon_core::two_round::BestKMethod::TwoRound => "two_round",
                coupon_core::two_round::BestKMethod::Exact => "exact",
                coupon_core::two_round::BestKMethod::Trivial => "trivial",
            };
            (Some(best.k), Some(best.coloring), method, best.trace)
        }
    };
    if let Some(c) = &coloring {
        if let Some(path) = &a.out {
            emit(Some(path), &c.to_text())?;
        }
    }
    let success = coloring.is_some();
    if a.json {
        let record = ColorRecord {
            k,
            success,
            method,
            coloring_file: a.out.as_ref().filter(|_| success).map(|p| p.display().to_string()),
            trace: trace.as_ref(),
        };
        println!("{}", serde_json::to_string(&record)?);
    } else if let Some(k) = k.filter(|_| success) {
        println!("{k}");
    } else {
        println!("failed");
    }
    Ok(if success { EXIT_OK } else { EXIT_INVALID })
}

fn experiment(a: ExperimentArgs) -> Result<i32> {
    let budget = SearchBudget::new(a.budget_nodes, a.budget_ms)?;
    let mut report = match a.kind {
        ExperimentKind::Ensemble => {
            let mut cfg = EnsembleConfig::new(need(a.n, "n")?, need(a.d, "d")?, a.samples, a.params.seed);
            cfg.budget = budget;
            cfg.heuristic = a.heuristic;
            cfg.params = a.params.params();
            cfg.record_wall_ms = a.wall_times;
            ensemble_experiment(&cfg)?
        }
        ExperimentKind::Paley => {
            if a.q.is_empty() {
                bail!("missing --q");
            }
            paley_experiment(&a.q, budget, a.wall_times)?
        }
    };
    if let Some(dir) = &a.witness_dir {
        write_witnesses(&mut report, dir)?;
    }
    let mut json = report.to_json();
    json.push('\n');
    emit(a.out.as_deref(), &json)?;
    let unknown = report.records.iter().any(|r| r.status == Status::Unknown);
    Ok(if unknown { EXIT_UNKNOWN } else { EXIT_OK })
}

fn write_witnesses(report: &mut ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for r in &mut report.records {
        if let Some(c) = &r.witness {
            let path = dir.join(format!("{}-{:04}.col", report.experiment, r.instance));
            fs::write(&path, c.to_text()).with_context(|| format!("writing {}", path.display()))?;
            r.coloring_file = Some(path.display().to_string());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn argument_definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_are_malformed() {
        assert_eq!(run(["coupon", "gen"]), EXIT_MALFORMED);
        assert_eq!(run(["coupon", "--help"]), EXIT_OK);
        assert_eq!(run(["coupon", "gen", "--family", "cycle"]), EXIT_MALFORMED);
    }
}
