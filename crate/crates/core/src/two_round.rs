//! Randomized two-round coupon coloring of regular graphs.
//!
//! A reserved set `U` is sampled with per-vertex probability `d^-η`. The rest
//! of the graph is colored uniformly at random from `1..=k`. Each reserved
//! vertex `u` then collects the list `K_u` of colors missed by at least one of
//! its neighbors, and is colored uniformly from that list.
//!
//! Each phase is checked against its target event (the reserved-degree
//! window, the `|K_u|` cap, and finally the coupon property itself) and
//! resampled as a whole, up to `max_restarts` times, until the event holds.
//! When the last phase runs out of restarts the pipeline starts over from the
//! reserved set, up to `max_attempts` times. Nothing unverified is returned.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::Coloring;
use crate::exact::{exact_coupon_number, Outcome, SearchBudget};
use crate::graph::Graph;
use crate::seeds::derive_seed;
use crate::verify::check_coupon;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwoRoundError {
    #[error("graph is not regular")]
    NotRegular,
    #[error("degree {d} is below the minimum {d_min} for the two-round procedure")]
    DegreeTooSmall { d: usize, d_min: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("two-round coloring with k = {} failed after all restarts", .0.k)]
    Failed(Box<TwoRoundTrace>),
}

/// Tunable parameters. `γ` and the `|K_u|` cap are derived from `d`, never
/// supplied directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoRoundParams {
    pub delta: f64,
    pub eta: f64,
    /// Resamples allowed within each phase.
    pub max_restarts: usize,
    /// Full restarts of the pipeline after the last phase gives up.
    pub max_attempts: usize,
    /// Smallest degree the procedure is run on.
    pub d_min: usize,
    pub seed: u64,
}

impl Default for TwoRoundParams {
    fn default() -> Self {
        TwoRoundParams {
            delta: 0.5,
            eta: 0.25,
            max_restarts: 50,
            max_attempts: 3,
            d_min: 16,
            seed: 1,
        }
    }
}

impl TwoRoundParams {
    pub fn validate(&self) -> Result<(), TwoRoundError> {
        let bad = |m: &str| Err(TwoRoundError::InvalidParams(m.to_string()));
        if !(self.delta.is_finite() && self.eta.is_finite()) {
            return bad("delta and eta must be finite");
        }
        if !(0.0 < self.eta && self.eta < self.delta) {
            return bad("need 0 < eta < delta");
        }
        if self.max_restarts == 0 || self.max_attempts == 0 {
            return bad("restart budgets must be positive");
        }
        Ok(())
    }

    /// Expected reserved degree `d^(1-η)`.
    pub fn expected_reserved_degree(&self, d: usize) -> f64 {
        (d as f64).powf(1.0 - self.eta)
    }

    /// Window half-width `γ = 4 sqrt(ln d / d^(1-η))`.
    pub fn gamma(&self, d: usize) -> f64 {
        4.0 * ((d as f64).ln() / self.expected_reserved_degree(d)).sqrt()
    }

    /// Open interval `((1-γ) d^(1-η), (1+γ) d^(1-η))` for `|U_v|`.
    pub fn window(&self, d: usize) -> (f64, f64) {
        let mu = self.expected_reserved_degree(d);
        let g = self.gamma(d);
        ((1.0 - g) * mu, (1.0 + g) * mu)
    }

    /// Cap `4 d k^-δ` on the second-round list sizes.
    pub fn ku_cap(&self, d: usize, k: usize) -> f64 {
        4.0 * d as f64 * (k as f64).powf(-self.delta)
    }

    /// Largest `k` with `(1+δ) k ln k <= d`.
    pub fn default_k(&self, d: usize) -> usize {
        (1..=d.max(1))
            .take_while(|&k| (1.0 + self.delta) * k as f64 * (k as f64).ln() <= d as f64)
            .last()
            .unwrap_or(1)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseStatus {
    #[default]
    NotRun,
    Success,
    Failed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCounts {
    pub reserve: usize,
    pub first_round: usize,
    pub second_round: usize,
    pub attempts: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseOutcomes {
    pub reserve: PhaseStatus,
    pub first_round: PhaseStatus,
    pub second_round: PhaseStatus,
}

/// Observable statistics of one run, describing the last attempt made.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TwoRoundTrace {
    pub d: usize,
    pub k: usize,
    pub delta: f64,
    pub eta: f64,
    pub gamma: f64,
    pub ku_cap: f64,
    pub window_lower: f64,
    pub window_upper: f64,
    pub reserved_size: usize,
    pub degree_window_violations: usize,
    /// `ku_histogram[s]` counts reserved vertices with `|K_u| = s`.
    pub ku_histogram: Vec<usize>,
    pub ku_mean: f64,
    pub ku_std_error: f64,
    /// Reference value `2 d k^-δ` for the mean of `|K_u|`.
    pub ku_mean_bound: f64,
    /// Fraction of (vertex, color) pairs missed after the first round.
    pub miss_rate: f64,
    pub miss_std_error: f64,
    /// Reference value `2 k^(-1-δ)` for the miss probability.
    pub miss_bound: f64,
    /// Resamples per phase, summed over attempts; `attempts` counts pipeline runs.
    pub restarts: PhaseCounts,
    pub phase_outcome: PhaseOutcomes,
}

/// A reserved set with its per-vertex reserved degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct ReservedSet {
    pub in_set: Vec<bool>,
    pub members: Vec<usize>,
    /// `|U ∩ Γ(v)|` for every vertex.
    pub reserved_degree: Vec<usize>,
    pub window: (f64, f64),
    pub violations: usize,
    /// Number of samples drawn, including the accepted one.
    pub samples: usize,
}

impl ReservedSet {
    pub fn window_holds(&self) -> bool {
        self.violations == 0
    }
}

/// Phase failure, carrying the statistics of the last try.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFailure<T> {
    pub last: T,
    pub tries: usize,
}

fn regular_degree(g: &Graph) -> Result<usize, TwoRoundError> {
    g.regular_degree().ok_or(TwoRoundError::NotRegular)
}

fn draw_reserved(g: &Graph, d: usize, params: &TwoRoundParams, rng: &mut ChaCha8Rng) -> ReservedSet {
    let p = (d as f64).powf(-params.eta).min(1.0);
    let in_set: Vec<bool> = (0..g.n()).map(|_| rng.gen_bool(p)).collect();
    let members = (0..g.n()).filter(|&v| in_set[v]).collect();
    let reserved_degree: Vec<usize> = (0..g.n())
        .map(|v| g.neighbors(v).iter().filter(|&&u| in_set[u]).count())
        .collect();
    let window = params.window(d);
    let violations = reserved_degree
        .iter()
        .filter(|&&c| !(window.0 < c as f64 && (c as f64) < window.1))
        .count();
    ReservedSet {
        in_set,
        members,
        reserved_degree,
        window,
        violations,
        samples: 1,
    }
}

/// Samples `U` until every vertex's reserved degree lies strictly inside the
/// window, trying at most `max_restarts` samples.
pub fn sample_reserved_set(
    g: &Graph,
    params: &TwoRoundParams,
    rng: &mut ChaCha8Rng,
) -> Result<Result<ReservedSet, PhaseFailure<ReservedSet>>, TwoRoundError> {
    let d = regular_degree(g)?;
    let tries = params.max_restarts.max(1);
    let mut last = None;
    for t in 1..=tries {
        let mut sample = draw_reserved(g, d, params, rng);
        sample.samples = t;
        if sample.window_holds() {
            return Ok(Ok(sample));
        }
        last = Some(sample);
    }
    Ok(Err(PhaseFailure {
        last: last.unwrap(),
        tries,
    }))
}

/// Color sets over `1..=k` as packed bit words.
#[derive(Clone, Debug)]
struct ColorSets {
    words: usize,
    bits: Vec<u64>,
}

impl ColorSets {
    fn new(count: usize, k: usize) -> Self {
        let words = (k + 1).div_ceil(64);
        ColorSets {
            words,
            bits: vec![0; count * words],
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn insert(&mut self, i: usize, c: usize) {
        self.bits[i * self.words + c / 64] |= 1 << (c % 64);
    }

    fn union_into(&mut self, dst: usize, src: &ColorSets, i: usize) {
        for w in 0..self.words {
            self.bits[dst * self.words + w] |= src.bits[i * src.words + w];
        }
    }

    fn len(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn members(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.row(i).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Result of the first round: colors on `V \ U` and the list `K_u` for each
/// reserved vertex, in the order of `ReservedSet::members`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstRound {
    /// Color per vertex; 0 for reserved vertices.
    pub colors: Vec<usize>,
    pub lists: Vec<Vec<usize>>,
    pub ku_histogram: Vec<usize>,
    pub ku_mean: f64,
    pub ku_std_error: f64,
    pub ku_max: usize,
    pub miss_rate: f64,
    pub tries: usize,
}

fn draw_first_round(g: &Graph, reserved: &ReservedSet, k: usize, rng: &mut ChaCha8Rng) -> FirstRound {
    let n = g.n();
    let colors: Vec<usize> = (0..n)
        .map(|v| if reserved.in_set[v] { 0 } else { rng.gen_range(1..=k) })
        .collect();
    // present colors among non-reserved neighbors, then complement
    let mut present = ColorSets::new(n, k);
    for v in 0..n {
        for &u in g.neighbors(v) {
            if colors[u] != 0 {
                present.insert(v, colors[u]);
            }
        }
    }
    let mut missing = ColorSets::new(n, k);
    let mut total_missed = 0usize;
    for v in 0..n {
        for c in 1..=k {
            let has = present.row(v)[c / 64] >> (c % 64) & 1 == 1;
            if !has {
                missing.insert(v, c);
                total_missed += 1;
            }
        }
    }
    let mut lists = ColorSets::new(reserved.members.len(), k);
    for (i, &u) in reserved.members.iter().enumerate() {
        for &v in g.neighbors(u) {
            lists.union_into(i, &missing, v);
        }
    }
    let sizes: Vec<usize> = (0..reserved.members.len()).map(|i| lists.len(i)).collect();
    let mut ku_histogram = vec![0; k + 1];
    for &s in &sizes {
        ku_histogram[s] += 1;
    }
    let (ku_mean, ku_std_error) = mean_and_std_error(&sizes);
    FirstRound {
        colors,
        lists: (0..reserved.members.len()).map(|i| lists.members(i)).collect(),
        ku_histogram,
        ku_mean,
        ku_std_error,
        ku_max: sizes.iter().copied().max().unwrap_or(0),
        miss_rate: if n == 0 { 0.0 } else { total_missed as f64 / (n * k) as f64 },
        tries: 1,
    }
}

fn mean_and_std_error(values: &[usize]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<usize>() as f64 / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values
        .iter()
        .map(|&x| (x as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Colors `V \ U` uniformly and builds the lists `K_u`, recoloring until
/// every `|K_u|` is at most the cap.
pub fn first_round(
    g: &Graph,
    reserved: &ReservedSet,
    k: usize,
    params: &TwoRoundParams,
    rng: &mut ChaCha8Rng,
) -> Result<Result<FirstRound, PhaseFailure<FirstRound>>, TwoRoundError> {
    let d = regular_degree(g)?;
    if k == 0 {
        return Err(TwoRoundError::InvalidParams("k must be at least 1".into()));
    }
    let cap = params.ku_cap(d, k);
    let tries = params.max_restarts.max(1);
    let mut last = None;
    for t in 1..=tries {
        let mut round = draw_first_round(g, reserved, k, rng);
        round.tries = t;
        if round.ku_max as f64 <= cap {
            return Ok(Ok(round));
        }
        last = Some(round);
    }
    Ok(Err(PhaseFailure {
        last: last.unwrap(),
        tries,
    }))
}

/// Colors each reserved vertex uniformly from its list (from `1..=k` when the
/// list is empty) until the completed coloring is a `k`-coupon coloring.
pub fn second_round(
    g: &Graph,
    reserved: &ReservedSet,
    first: &FirstRound,
    k: usize,
    params: &TwoRoundParams,
    rng: &mut ChaCha8Rng,
) -> Result<Result<(Coloring, usize), PhaseFailure<()>>, TwoRoundError> {
    if k == 0 {
        return Err(TwoRoundError::InvalidParams("k must be at least 1".into()));
    }
    let tries = params.max_restarts.max(1);
    let mut colors = first.colors.clone();
    for t in 1..=tries {
        for (i, &u) in reserved.members.iter().enumerate() {
            let list = &first.lists[i];
            colors[u] = if list.is_empty() {
                rng.gen_range(1..=k)
            } else {
                list[rng.gen_range(0..list.len())]
            };
        }
        let coloring = Coloring::new_unchecked(k, colors.clone());
        let valid = check_coupon(g, &coloring, k)
            .map(|c| c.is_valid())
            .unwrap_or(false);
        if valid {
            return Ok(Ok((coloring, t)));
        }
    }
    Ok(Err(PhaseFailure { last: (), tries }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoRoundSuccess {
    pub coloring: Coloring,
    pub trace: TwoRoundTrace,
}

fn rng_for(params: &TwoRoundParams, k: usize, attempt: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(derive_seed(params.seed, k as u64), attempt as u64))
}

/// Runs the full pipeline for a fixed `k`. Success implies the returned
/// coloring passed [`check_coupon`].
pub fn two_round_color(g: &Graph, k: usize, params: &TwoRoundParams) -> Result<TwoRoundSuccess, TwoRoundError> {
    params.validate()?;
    let d = regular_degree(g)?;
    if k == 0 {
        return Err(TwoRoundError::InvalidParams("k must be at least 1".into()));
    }
    let (window_lower, window_upper) = params.window(d);
    let mut trace = TwoRoundTrace {
        d,
        k,
        delta: params.delta,
        eta: params.eta,
        gamma: params.gamma(d),
        ku_cap: params.ku_cap(d, k),
        window_lower,
        window_upper,
        ku_mean_bound: 2.0 * d as f64 * (k as f64).powf(-params.delta),
        miss_bound: 2.0 * (k as f64).powf(-1.0 - params.delta),
        ..TwoRoundTrace::default()
    };
    if k == 1 {
        if d == 0 {
            return Err(TwoRoundError::Failed(Box::new(trace)));
        }
        trace.phase_outcome = PhaseOutcomes {
            reserve: PhaseStatus::Success,
            first_round: PhaseStatus::Success,
            second_round: PhaseStatus::Success,
        };
        return Ok(TwoRoundSuccess {
            coloring: Coloring::monochromatic(g.n()),
            trace,
        });
    }
    if d < params.d_min {
        return Err(TwoRoundError::DegreeTooSmall { d, d_min: params.d_min });
    }

    for attempt in 0..params.max_attempts {
        let mut rng = rng_for(params, k, attempt);
        trace.restarts.attempts += 1;
        trace.phase_outcome = PhaseOutcomes::default();

        let reserved = match sample_reserved_set(g, params, &mut rng)? {
            Ok(r) => r,
            Err(fail) => {
                trace.restarts.reserve += fail.tries;
                record_reserved(&mut trace, &fail.last);
                trace.phase_outcome.reserve = PhaseStatus::Failed;
                continue;
            }
        };
        trace.restarts.reserve += reserved.samples;
        record_reserved(&mut trace, &reserved);
        trace.phase_outcome.reserve = PhaseStatus::Success;

        let first = match first_round(g, &reserved, k, params, &mut rng)? {
            Ok(f) => f,
            Err(fail) => {
                trace.restarts.first_round += fail.tries;
                record_first(&mut trace, &fail.last, g.n(), k);
                trace.phase_outcome.first_round = PhaseStatus::Failed;
                continue;
            }
        };
        trace.restarts.first_round += first.tries;
        record_first(&mut trace, &first, g.n(), k);
        trace.phase_outcome.first_round = PhaseStatus::Success;

        match second_round(g, &reserved, &first, k, params, &mut rng)? {
            Ok((coloring, tries)) => {
                trace.restarts.second_round += tries;
                trace.phase_outcome.second_round = PhaseStatus::Success;
                return Ok(TwoRoundSuccess { coloring, trace });
            }
            Err(fail) => {
                trace.restarts.second_round += fail.tries;
                trace.phase_outcome.second_round = PhaseStatus::Failed;
            }
        }
    }
    Err(TwoRoundError::Failed(Box::new(trace)))
}

fn record_reserved(trace: &mut TwoRoundTrace, r: &ReservedSet) {
    trace.reserved_size = r.members.len();
    trace.degree_window_violations = r.violations;
}

fn record_first(trace: &mut TwoRoundTrace, f: &FirstRound, n: usize, k: usize) {
    trace.ku_histogram = f.ku_histogram.clone();
    trace.ku_mean = f.ku_mean;
    trace.ku_std_error = f.ku_std_error;
    trace.miss_rate = f.miss_rate;
    let pairs = (n * k).max(1) as f64;
    trace.miss_std_error = (f.miss_rate * (1.0 - f.miss_rate) / pairs).sqrt();
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BestKMethod {
    TwoRound,
    Exact,
    /// Nothing better was certified; the monochromatic coloring.
    Trivial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestK {
    pub k: usize,
    pub coloring: Coloring,
    pub method: BestKMethod,
    /// Trace of the successful two-round run, if any.
    pub trace: Option<TwoRoundTrace>,
    /// Trace of the last failed two-round run above `k`, if any.
    pub failure_above: Option<TwoRoundTrace>,
}

/// Largest `k` certified for `g`: the two-round procedure scanned downward
/// from `d` when `d >= d_min`, otherwise the exact solver.
pub fn best_k(g: &Graph, params: &TwoRoundParams, budget: SearchBudget) -> Result<BestK, TwoRoundError> {
    params.validate()?;
    let d = regular_degree(g)?;
    if d == 0 {
        return Err(TwoRoundError::InvalidParams("graph has isolated vertices".into()));
    }
    let trivial = BestK {
        k: 1,
        coloring: Coloring::monochromatic(g.n()),
        method: BestKMethod::Trivial,
        trace: None,
        failure_above: None,
    };
    if d < params.d_min {
        return Ok(match exact_coupon_number(g, budget) {
            Ok(Outcome::Solved { value, witness, .. }) => BestK {
                k: value,
                coloring: witness,
                method: BestKMethod::Exact,
                ..trivial
            },
            _ => trivial,
        });
    }
    let mut failure_above = None;
    for k in (2..=d).rev() {
        match two_round_color(g, k, params) {
            Ok(success) => {
                return Ok(BestK {
                    k,
                    coloring: success.coloring,
                    method: BestKMethod::TwoRound,
                    trace: Some(success.trace),
                    failure_above,
                })
            }
            Err(TwoRoundError::Failed(trace)) => failure_above = Some(*trace),
            Err(e) => return Err(e),
        }
    }
    Ok(BestK {
        failure_above,
        ..trivial
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_bipartite, cycle, random_regular};

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn parameter_formulas() {
        let p = TwoRoundParams::default();
        let mu = 64f64.powf(0.75);
        assert!((p.expected_reserved_degree(64) - mu).abs() < 1e-12);
        assert!((p.gamma(64) - 4.0 * (64f64.ln() / mu).sqrt()).abs() < 1e-12);
        assert!((p.ku_cap(64, 8) - 4.0 * 64.0 / 8f64.sqrt()).abs() < 1e-9);
        // 1.5 * 15 * ln 15 = 60.9 <= 64 < 1.5 * 16 * ln 16 = 66.5
        assert_eq!(p.default_k(64), 15);
        assert_eq!(p.default_k(1), 1);
    }

    #[test]
    fn params_validation() {
        let mut p = TwoRoundParams::default();
        assert!(p.validate().is_ok());
        p.eta = 0.6;
        assert!(p.validate().is_err());
        p.eta = 0.0;
        assert!(p.validate().is_err());
        p = TwoRoundParams { max_restarts: 0, ..Default::default() };
        assert!(p.validate().is_err());
    }

    #[test]
    fn eta_zero_reserves_everything() {
        let g = complete_bipartite(16).unwrap();
        let p = TwoRoundParams { eta: 0.0, ..Default::default() };
        let r = sample_reserved_set(&g, &p, &mut rng(3)).unwrap().unwrap();
        assert_eq!(r.members.len(), g.n());
        assert!(r.reserved_degree.iter().all(|&c| c == 16));
    }

    #[test]
    fn empty_reserved_set_first_round() {
        let g = complete_bipartite(16).unwrap();
        let p = TwoRoundParams::default();
        let reserved = ReservedSet {
            in_set: vec![false; g.n()],
            members: vec![],
            reserved_degree: vec![0; g.n()],
            window: p.window(16),
            violations: 0,
            samples: 1,
        };
        for k in [1, 3] {
            let f = first_round(&g, &reserved, k, &p, &mut rng(1)).unwrap().unwrap();
            assert!(f.lists.is_empty());
            assert!(f.colors.iter().all(|&c| (1..=k).contains(&c)));
        }
    }

    #[test]
    fn singleton_lists_are_used() {
        let g = complete_bipartite(16).unwrap();
        let p = TwoRoundParams::default();
        let reserved = ReservedSet {
            in_set: (0..32).map(|v| v < 4).collect(),
            members: vec![0, 1, 2, 3],
            reserved_degree: vec![0; 32],
            window: p.window(16),
            violations: 0,
            samples: 1,
        };
        let first = FirstRound {
            colors: (0..32).map(|v| if v < 4 { 0 } else { 1 + v % 3 }).collect(),
            lists: vec![vec![3]; 4],
            ku_histogram: vec![],
            ku_mean: 1.0,
            ku_std_error: 0.0,
            ku_max: 1,
            miss_rate: 0.0,
            tries: 1,
        };
        let p1 = TwoRoundParams { max_restarts: 1, ..p };
        // Whether or not the result is a coupon coloring, reserved vertices
        // only ever receive color 3.
        let mut r = rng(0);
        if let Ok(Ok((c, _))) = second_round(&g, &reserved, &first, 3, &p1, &mut r) {
            assert!((0..4).all(|v| c.color(v) == 3));
        }
        let mut colors = first.colors.clone();
        let mut r = rng(0);
        for &u in &reserved.members {
            colors[u] = first.lists[0][r.gen_range(0..1)];
        }
        assert!((0..4).all(|v| colors[v] == 3));
    }

    #[test]
    fn k1_and_bipartite() {
        let p = TwoRoundParams::default();
        let c8 = cycle(8).unwrap();
        let out = two_round_color(&c8, 1, &p).unwrap();
        assert_eq!(out.coloring, Coloring::monochromatic(8));
        assert!(matches!(
            two_round_color(&c8, 2, &p),
            Err(TwoRoundError::DegreeTooSmall { d: 2, d_min: 16 })
        ));
        let g = complete_bipartite(16).unwrap();
        let out = two_round_color(&g, 2, &p).unwrap();
        assert!(check_coupon(&g, &out.coloring, 2).unwrap().is_valid());
        assert_eq!(out.trace.degree_window_violations, 0);
    }

    #[test]
    fn not_regular_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            two_round_color(&g, 2, &TwoRoundParams::default()),
            Err(TwoRoundError::NotRegular)
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let g = random_regular(300, 20, 4).unwrap();
        let p = TwoRoundParams { seed: 9, ..Default::default() };
        let a = two_round_color(&g, 4, &p);
        let b = two_round_color(&g, 4, &p);
        assert_eq!(a, b);
    }

    #[test]
    fn best_k_small_degree_uses_exact() {
        let p = TwoRoundParams::default();
        let out = best_k(&cycle(8).unwrap(), &p, SearchBudget::default()).unwrap();
        assert_eq!((out.k, out.method), (2, BestKMethod::Exact));
        let g = complete_bipartite(8).unwrap();
        let out = best_k(&g, &p, SearchBudget::default()).unwrap();
        assert_eq!(out.k, 8);
        assert!(check_coupon(&g, &out.coloring, 8).unwrap().is_valid());
    }

    #[test]
    fn best_k_is_at_least_any_success() {
        let g = random_regular(200, 16, 2).unwrap();
        let p = TwoRoundParams { seed: 5, max_restarts: 10, max_attempts: 1, ..Default::default() };
        let best = best_k(&g, &p, SearchBudget::default()).unwrap();
        assert!(check_coupon(&g, &best.coloring, best.k).unwrap().is_valid());
        for k in 2..=16 {
            if two_round_color(&g, k, &p).is_ok() {
                assert!(best.k >= k);
            }
        }
    }
}
