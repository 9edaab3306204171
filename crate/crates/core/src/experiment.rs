//! Desk-scale experiments: exact coupon numbers over a random regular
//! ensemble, and domination numbers of small Paley graphs.
//!
//! Instances run concurrently, each with its own derived seed, so a report
//! depends only on its parameters. Wall-clock times are left out unless
//! asked for, which keeps reruns byte-identical.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::Coloring;
use crate::exact::{exact_coupon_number, min_dominating, min_total_dominating, ExactError, Outcome, SearchBudget, SearchStats};
use crate::generators::{paley_graph, random_regular};
use crate::graph::{Graph, GraphError};
use crate::seeds::derive_seed;
use crate::two_round::{best_k, TwoRoundError, TwoRoundParams};

pub const FORMAT_VERSION: u32 = 1;

/// Largest ensemble instance solved exactly without the heuristic flag.
pub const EXACT_MAX_N: usize = 24;
pub const EXACT_MAX_D: usize = 4;
/// Largest Paley order for which the exact coupon number is attempted.
pub const PALEY_EXACT_CHI_MAX_Q: usize = 13;
pub const PALEY_MAX_Q: usize = 61;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    TwoRound(#[from] TwoRoundError),
    #[error("invalid experiment parameters: {0}")]
    InvalidParameter(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Solved,
    Unknown,
    /// Lower bound from the two-round procedure; not an exact value.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub instance: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<usize>,
    pub edges: usize,
    pub status: Status,
    /// Exact coupon number, when solved.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chi_c: Option<usize>,
    pub lower: usize,
    pub upper: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gamma_t: Option<usize>,
    /// `floor(q / γ_t)`, an upper bound on the coupon number.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coupon_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub half_ln_q: Option<f64>,
    pub restarts: usize,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_ms: Option<u64>,
    /// Path of the witness coloring, filled in by callers that write one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coloring_file: Option<String>,
    #[serde(skip)]
    pub witness: Option<Coloring>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q_list: Option<Vec<usize>>,
    #[serde(default)]
    pub heuristic: bool,
    pub budget: SearchBudget,
}

/// Count of instances at one coupon number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub k: usize,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub unknown: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub distribution: Vec<Bucket>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reference: Option<Reference>,
    /// Every computed relation (`γ <= γ_t`, `χ_c <= floor(q/γ_t)`) held.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub relations_hold: Option<bool>,
}

/// `d / ln d` and its two scalings, for context only: the asymptotic bounds
/// say nothing numerically at these sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub d_over_ln_d: f64,
    pub delta: f64,
    pub lower_scaled: f64,
    pub epsilon: f64,
    pub upper_scaled: f64,
}

impl Reference {
    pub fn new(d: usize, delta: f64, epsilon: f64) -> Option<Self> {
        if d < 2 {
            return None;
        }
        let base = d as f64 / (d as f64).ln();
        Some(Reference {
            d_over_ln_d: base,
            delta,
            lower_scaled: (1.0 - delta) * base,
            epsilon,
            upper_scaled: (1.0 + epsilon) * base,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub format_version: u32,
    pub experiment: String,
    pub parameters: Parameters,
    pub records: Vec<InstanceRecord>,
    pub summary: Summary,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn strip_wall_times(&mut self) {
        for r in &mut self.records {
            r.wall_ms = None;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleConfig {
    pub n: usize,
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    pub budget: SearchBudget,
    /// Allow instances too large for exact solves; records get the two-round
    /// lower bound instead.
    pub heuristic: bool,
    pub params: TwoRoundParams,
    pub record_wall_ms: bool,
}

impl EnsembleConfig {
    pub fn new(n: usize, d: usize, samples: usize, seed: u64) -> Self {
        EnsembleConfig {
            n,
            d,
            samples,
            seed,
            budget: SearchBudget {
                max_nodes: 50_000_000,
                wall_ms: 60_000,
            },
            heuristic: false,
            params: TwoRoundParams::default(),
            record_wall_ms: false,
        }
    }
}

/// Worker count from `COUPON_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("COUPON_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
}

fn run_parallel<T, F>(count: usize, f: F) -> Result<Vec<T>, ExperimentError>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_cap() {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
    // collect keeps index order regardless of scheduling
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}

fn base_record(instance: usize, g: &Graph) -> InstanceRecord {
    InstanceRecord {
        instance,
        seed: None,
        n: g.n(),
        d: g.regular_degree(),
        q: None,
        edges: g.edge_count(),
        status: Status::Unknown,
        chi_c: None,
        lower: 1,
        upper: g.min_degree(),
        gamma: None,
        gamma_t: None,
        coupon_bound: None,
        half_ln_q: None,
        restarts: 0,
        nodes: 0,
        wall_ms: None,
        coloring_file: None,
        witness: None,
    }
}

fn apply_coupon(rec: &mut InstanceRecord, out: Outcome<Coloring>) -> SearchStats {
    let stats = out.stats();
    let (lower, upper) = out.bounds();
    rec.lower = lower;
    rec.upper = upper;
    if let Outcome::Solved { value, witness, .. } = out {
        rec.status = Status::Solved;
        rec.chi_c = Some(value);
        rec.witness = Some(witness);
    }
    rec.nodes += stats.nodes;
    stats
}

fn ensemble_instance(cfg: &EnsembleConfig, i: usize) -> Result<InstanceRecord, ExperimentError> {
    let seed = derive_seed(cfg.seed, i as u64);
    let g = random_regular(cfg.n, cfg.d, seed)?;
    let mut rec = base_record(i, &g);
    rec.seed = Some(seed);
    let exact_ok = cfg.n <= EXACT_MAX_N && cfg.d <= EXACT_MAX_D;
    if exact_ok {
        let stats = apply_coupon(&mut rec, exact_coupon_number(&g, cfg.budget)?);
        if cfg.record_wall_ms {
            rec.wall_ms = Some(stats.wall_ms);
        }
    } else {
        let start = std::time::Instant::now();
        let params = TwoRoundParams {
            seed: derive_seed(seed, 1),
            ..cfg.params.clone()
        };
        let best = best_k(&g, &params, cfg.budget)?;
        rec.status = Status::Heuristic;
        rec.lower = best.k;
        rec.restarts = best
            .trace
            .as_ref()
            .map(|t| t.restarts.reserve + t.restarts.first_round + t.restarts.second_round)
            .unwrap_or(0);
        rec.witness = Some(best.coloring);
        if cfg.record_wall_ms {
            rec.wall_ms = Some(start.elapsed().as_millis() as u64);
        }
    }
    Ok(rec)
}

/// Samples `samples` random `d`-regular graphs on `n` vertices and computes
/// the coupon number of each.
pub fn ensemble_experiment(cfg: &EnsembleConfig) -> Result<ExperimentReport, ExperimentError> {
    if cfg.samples == 0 {
        return Err(ExperimentError::InvalidParameter("samples must be positive".into()));
    }
    if !cfg.heuristic && (cfg.n > EXACT_MAX_N || cfg.d > EXACT_MAX_D) {
        return Err(ExperimentError::InvalidParameter(format!(
            "exact solves need n <= {EXACT_MAX_N} and d <= {EXACT_MAX_D}; pass the heuristic flag for larger instances"
        )));
    }
    let records = run_parallel(cfg.samples, |i| ensemble_instance(cfg, i))?
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    let mut counts = vec![0usize; cfg.d + 1];
    for r in &records {
        if let Some(k) = r.chi_c {
            counts[k] += 1;
        }
    }
    let distribution = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(k, &count)| Bucket {
            k,
            count,
            fraction: count as f64 / records.len() as f64,
        })
        .collect();
    let summary = Summary {
        instances: records.len(),
        unknown: records.iter().filter(|r| r.status == Status::Unknown).count(),
        distribution,
        reference: Reference::new(cfg.d, cfg.params.delta, cfg.params.delta),
        relations_hold: None,
    };
    Ok(ExperimentReport {
        format_version: FORMAT_VERSION,
        experiment: "ensemble".into(),
        parameters: Parameters {
            n: Some(cfg.n),
            d: Some(cfg.d),
            samples: Some(cfg.samples),
            seed: Some(cfg.seed),
            q_list: None,
            heuristic: cfg.heuristic,
            budget: cfg.budget,
        },
        records,
        summary,
    })
}

fn paley_instance(i: usize, q: usize, budget: SearchBudget, record_wall_ms: bool) -> Result<InstanceRecord, ExperimentError> {
    let g = paley_graph(q)?;
    let mut rec = base_record(i, &g);
    rec.q = Some(q);
    rec.half_ln_q = Some(0.5 * (q as f64).ln());
    let mut wall = 0;

    let dom = min_dominating(&g, budget)?;
    rec.nodes += dom.stats().nodes;
    wall += dom.stats().wall_ms;
    rec.gamma = dom.value();

    let total = min_total_dominating(&g, budget)?;
    rec.nodes += total.stats().nodes;
    wall += total.stats().wall_ms;
    rec.gamma_t = total.value();
    rec.coupon_bound = rec.gamma_t.map(|t| q / t);
    if let Some(b) = rec.coupon_bound {
        rec.upper = rec.upper.min(b);
    }

    if q <= PALEY_EXACT_CHI_MAX_Q {
        wall += apply_coupon(&mut rec, exact_coupon_number(&g, budget)?).wall_ms;
    }
    let solved = rec.gamma.is_some() && rec.gamma_t.is_some() && (q > PALEY_EXACT_CHI_MAX_Q || rec.chi_c.is_some());
    rec.status = if solved { Status::Solved } else { Status::Unknown };
    if record_wall_ms {
        rec.wall_ms = Some(wall);
    }
    Ok(rec)
}

fn paley_relations_hold(r: &InstanceRecord) -> bool {
    let dom = match (r.gamma, r.gamma_t) {
        (Some(g), Some(t)) => g <= t,
        _ => true,
    };
    let bound = match (r.chi_c, r.coupon_bound) {
        (Some(c), Some(b)) => c <= b,
        _ => true,
    };
    dom && bound
}

/// Exact `γ` and `γ_t` of the Paley graphs `G_q`, with the implied bound
/// `floor(q / γ_t)` on the coupon number and, for small `q`, its exact value.
pub fn paley_experiment(
    q_list: &[usize],
    budget: SearchBudget,
    record_wall_ms: bool,
) -> Result<ExperimentReport, ExperimentError> {
    if q_list.is_empty() {
        return Err(ExperimentError::InvalidParameter("empty q list".into()));
    }
    if let Some(&q) = q_list.iter().find(|&&q| q > PALEY_MAX_Q) {
        return Err(ExperimentError::InvalidParameter(format!(
            "q = {q} exceeds {PALEY_MAX_Q}"
        )));
    }
    let records = run_parallel(q_list.len(), |i| paley_instance(i, q_list[i], budget, record_wall_ms))?
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let summary = Summary {
        instances: records.len(),
        unknown: records.iter().filter(|r| r.status == Status::Unknown).count(),
        distribution: Vec::new(),
        reference: None,
        relations_hold: Some(records.iter().all(paley_relations_hold)),
    };
    Ok(ExperimentReport {
        format_version: FORMAT_VERSION,
        experiment: "paley".into(),
        parameters: Parameters {
            n: None,
            d: None,
            samples: None,
            seed: None,
            q_list: Some(q_list.to_vec()),
            heuristic: false,
            budget,
        },
        records,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ensemble() {
        let cfg = EnsembleConfig::new(8, 3, 10, 7);
        let report = ensemble_experiment(&cfg).unwrap();
        assert_eq!(report.records.len(), 10);
        for r in &report.records {
            assert_eq!(r.edges, 12);
            assert!((1..=3).contains(&r.chi_c.unwrap()));
        }
        let json = report.to_json();
        let back = ExperimentReport::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        assert!(report.summary.reference.is_some());
    }

    #[test]
    fn ensemble_size_gate() {
        let cfg = EnsembleConfig::new(30, 3, 1, 0);
        assert!(ensemble_experiment(&cfg).is_err());
    }

    #[test]
    fn paley_five() {
        let report = paley_experiment(&[5], SearchBudget::default(), false).unwrap();
        let r = &report.records[0];
        assert_eq!(r.chi_c, Some(1));
        assert_eq!((r.gamma, r.gamma_t), (Some(2), Some(3)));
        assert_eq!(r.coupon_bound, Some(1));
        assert_eq!(report.summary.relations_hold, Some(true));
        assert!(paley_experiment(&[7], SearchBudget::default(), false).is_err());
    }
}
