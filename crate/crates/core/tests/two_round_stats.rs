//! Statistical calibration of the two-round procedure on the reference
//! instance, a random 64-regular graph on 4096 vertices.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coupon_core::generators::random_regular;
use coupon_core::two_round::{first_round, sample_reserved_set, two_round_color, PhaseStatus, TwoRoundParams};
use coupon_core::verify::check_coupon;
use coupon_core::Graph;

const N: usize = 4096;
const D: usize = 64;

fn reference() -> &'static Graph {
    static G: OnceLock<Graph> = OnceLock::new();
    G.get_or_init(|| random_regular(N, D, 1).unwrap())
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn reserved_set_size_is_binomial() {
    let g = reference();
    let params = TwoRoundParams::default();
    let p = (D as f64).powf(-params.eta);
    let sizes: Vec<f64> = (0..100)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let r = sample_reserved_set(g, &params, &mut rng).unwrap().unwrap();
            assert_eq!(r.violations, 0);
            r.members.len() as f64
        })
        .collect();
    let mean = sizes.iter().sum::<f64>() / 100.0;
    // standard error of the mean of 100 Binomial(N, p) draws
    let se = (N as f64 * p * (1.0 - p) / 100.0).sqrt();
    assert!((mean - N as f64 * p).abs() < 5.0 * se, "mean {mean}, expected {}", N as f64 * p);
}

#[test]
fn reserved_degree_has_expected_mean() {
    let g = reference();
    let params = TwoRoundParams::default();
    let p = (D as f64).powf(-params.eta);
    let means: Vec<f64> = (0..100)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + s);
            let r = sample_reserved_set(g, &params, &mut rng).unwrap().unwrap();
            // double counting on a regular graph
            let total: usize = r.reserved_degree.iter().sum();
            assert_eq!(total, D * r.members.len());
            total as f64 / N as f64
        })
        .collect();
    let mean = means.iter().sum::<f64>() / 100.0;
    let se = D as f64 / N as f64 * (N as f64 * p * (1.0 - p) / 100.0).sqrt();
    let expected = params.expected_reserved_degree(D);
    assert!((mean - expected).abs() < 5.0 * se, "{mean} vs {expected}");
}

#[test]
fn list_sizes_and_miss_rate_within_bounds() {
    let g = reference();
    let params = TwoRoundParams::default();
    let k = 8;
    let ku_bound = 2.0 * D as f64 * (k as f64).powf(-params.delta);
    let miss_bound = 2.0 * (k as f64).powf(-1.0 - params.delta);
    let mut ku_means = Vec::new();
    let mut miss_rates = Vec::new();
    for s in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + s);
        let r = sample_reserved_set(g, &params, &mut rng).unwrap().unwrap();
        let f = first_round(g, &r, k, &params, &mut rng).unwrap().unwrap();
        if s < 20 {
            ku_means.push(f.ku_mean);
        }
        miss_rates.push(f.miss_rate);
    }
    let (ku, ku_se) = mean_and_se(&ku_means);
    assert!(ku <= ku_bound + 3.0 * ku_se, "mean |K_u| {ku} over bound {ku_bound}");
    let (miss, miss_se) = mean_and_se(&miss_rates);
    assert!(miss <= miss_bound + 3.0 * miss_se, "miss rate {miss} over bound {miss_bound}");
}

#[test]
fn golden_trace_at_k8() {
    let g = reference();
    let out = two_round_color(g, 8, &TwoRoundParams::default()).unwrap();
    assert!(check_coupon(g, &out.coloring, 8).unwrap().is_valid());
    let t = &out.trace;
    assert_eq!(t.reserved_size, 1463);
    assert_eq!(t.degree_window_violations, 0);
    assert_eq!(t.ku_histogram, vec![90, 291, 448, 368, 172, 76, 15, 3, 0]);
    assert_eq!(t.ku_mean, 3470.0 / 1463.0);
    assert_eq!(t.miss_rate, 163.0 / 32768.0);
    assert_eq!(
        (t.restarts.reserve, t.restarts.first_round, t.restarts.second_round, t.restarts.attempts),
        (1, 1, 1, 1)
    );
    assert_eq!(t.phase_outcome.second_round, PhaseStatus::Success);
}

#[test]
fn default_k_at_reference_degree() {
    assert_eq!(TwoRoundParams::default().default_k(D), 15);
}
