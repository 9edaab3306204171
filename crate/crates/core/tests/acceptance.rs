//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout. The
//! process fails if any criterion fails other than those listed in
//! `KNOWN_FAILURES`, each of which is explained where it is checked.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use coupon_core::construct::{boolean_cube_coloring, concatenated_coloring, syndrome_coloring, ConcatParams, HammingCode};
use coupon_core::exact::{
    certify_coupon_at_min_degree, exact_coupon_number, exact_injective_number, kw_condition, panchromatic_number,
    SearchBudget,
};
use coupon_core::experiment::{ensemble_experiment, paley_experiment, EnsembleConfig};
use coupon_core::field::{prime_power, FiniteField};
use coupon_core::generators::{
    complete_bipartite, cycle, extremal_blowup, hamming_graph, incidence_graph, paley_graph, random_regular,
};
use coupon_core::hypergraph::neighborhood_hypergraph;
use coupon_core::two_round::{best_k, two_round_color, TwoRoundParams};
use coupon_core::verify::{check_coupon, check_injective};
use coupon_core::{Graph, Hypergraph};
use itertools::Itertools;

/// The complete 3-uniform hypergraph on six points has no Property B: any
/// 2-coloring of six points puts three of them in one class, and that triple
/// is a monochromatic edge. The expected value 2 cannot be met.
const KNOWN_FAILURES: &[&str] = &["6b"];

struct Run {
    results: Vec<(String, bool)>,
}

impl Run {
    fn record(&mut self, id: &str, pass: bool, detail: String) {
        println!("criterion {id}: {} {detail}", if pass { "PASS" } else { "FAIL" });
        self.results.push((id.to_string(), pass));
    }
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

/// Little-endian base-q digits of `x`.
fn digits(mut x: usize, q: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = x % q;
            x /= q;
            d
        })
        .collect()
}

fn hamming_distance(a: usize, b: usize, q: usize, len: usize) -> usize {
    digits(a, q, len)
        .iter()
        .zip(digits(b, q, len))
        .filter(|(x, y)| **x != *y)
        .count()
}

fn corpus(max_n: usize) -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 3..=20 {
        out.push((format!("C{n}"), cycle(n).unwrap()));
    }
    for d in 1..=4 {
        out.push((format!("K{d},{d}"), complete_bipartite(d).unwrap()));
    }
    for (len, q) in [(2, 2), (3, 2), (4, 2), (2, 3), (2, 4)] {
        out.push((format!("H({len},{q})"), hamming_graph(len, q).unwrap()));
    }
    for q in [5, 9, 13, 17] {
        out.push((format!("Paley{q}"), paley_graph(q).unwrap()));
    }
    for (m, d) in [(3, 2), (4, 2), (5, 2), (4, 3)] {
        out.push((format!("Inc({m},{d})"), incidence_graph(m, d).unwrap()));
    }
    for (d, n) in [(2, 8), (3, 12), (4, 16), (2, 12)] {
        out.push((format!("Blowup({d},{n})"), extremal_blowup(d, n).unwrap()));
    }
    for (n, d, seed) in [(10, 3, 1), (12, 3, 2), (14, 4, 3), (16, 3, 4), (16, 5, 5), (18, 3, 6), (20, 4, 7), (20, 3, 8)] {
        out.push((format!("RR({n},{d},{seed})"), random_regular(n, d, seed).unwrap()));
    }
    out.retain(|(_, g)| g.n() <= max_n);
    out
}

fn criterion_1(run: &mut Run) {
    let ((ok, detail), t) = timed(|| {
        for r in 1..=4u32 {
            let g = hamming_graph(1 << r, 2).unwrap();
            let c = boolean_cube_coloring(r).unwrap();
            let coupon = check_coupon(&g, &c, 1 << r).unwrap().is_valid();
            let inj = check_injective(&g, &c).unwrap().is_valid();
            if !(coupon && inj) {
                return (false, format!("r={r} coupon={coupon} injective={inj}"));
            }
        }
        (true, "r=1..4 coupon and injective".to_string())
    });
    run.record("1", ok && t < Duration::from_secs(5), format!("{detail} in {t:.2?} (limit 5s)"));
}

fn criterion_2(run: &mut Run) {
    let ((ok, detail), t) = timed(|| {
        for (q, k) in [(2, 2), (2, 3), (2, 4), (3, 2), (4, 2), (5, 2)] {
            let code = HammingCode::new(q, k).unwrap();
            let len = code.len();
            let c = syndrome_coloring(&code, len, q).unwrap();
            let colors = q.pow(k as u32);
            let class = q.pow((len - k) as u32);
            if c.distinct_colors() != colors || c.class_sizes().iter().any(|&s| s != class) {
                return (false, format!("(q,k)=({q},{k}) class structure"));
            }
            let total = c.len();
            // Every word at distance 1 or 2, reached by changing one or two coordinates.
            let pow: Vec<usize> = (0..len).map(|j| q.pow(j as u32)).collect();
            for x in 0..total {
                let dx = digits(x, q, len);
                let moved = |x: usize, j: usize, to: usize| x - dx[j] * pow[j] + to * pow[j];
                for i in 0..len {
                    for a in (0..q).filter(|&a| a != dx[i]) {
                        let y = moved(x, i, a);
                        if c.color(x) == c.color(y) {
                            return (false, format!("(q,k)=({q},{k}) distance-1 clash {x} {y}"));
                        }
                        for j in i + 1..len {
                            for b in (0..q).filter(|&b| b != dx[j]) {
                                let z = y - dx[j] * pow[j] + b * pow[j];
                                if c.color(x) == c.color(z) {
                                    return (false, format!("(q,k)=({q},{k}) distance-2 clash {x} {z}"));
                                }
                            }
                        }
                    }
                }
            }
            // Full pair scan where it is cheap, as an independent check.
            if total <= 1024 {
                for x in 0..total {
                    for y in x + 1..total {
                        if hamming_distance(x, y, q, len) <= 2 && c.color(x) == c.color(y) {
                            return (false, format!("(q,k)=({q},{k}) pair scan {x} {y}"));
                        }
                    }
                }
            }
        }
        (true, "six (q,k) cases: q^k colors, classes of size q^(n-k), distance 1-2 pairs distinct".to_string())
    });
    run.record("2", ok && t < Duration::from_secs(60), format!("{detail} in {t:.2?} (limit 60s)"));
}

fn criterion_3(run: &mut Run) {
    let ((ok, detail), t) = timed(|| {
        for (p, r, q, k) in [(4, 1, 2, 2), (4, 2, 2, 2)] {
            let params = ConcatParams { p, r, q, k };
            let c = concatenated_coloring(params).unwrap();
            let g = hamming_graph(params.word_len(), q).unwrap();
            let inj = check_injective(&g, &c).unwrap().is_valid();
            let used = c.distinct_colors();
            if !inj || used > p.pow(r as u32) {
                return (false, format!("(p,r,q,k)=({p},{r},{q},{k}) injective={inj} colors={used}"));
            }
        }
        (true, "H(3,2) and H(15,2) injective with at most p^r colors".to_string())
    });
    run.record("3", ok && t < Duration::from_secs(120), format!("{detail} in {t:.2?} (limit 120s)"));
}

fn criterion_4(run: &mut Run) {
    let mut ok = true;
    let mut detail = String::from("cycles 3..12 and chain on corpus n<=20");
    for n in 3..=12 {
        let g = cycle(n).unwrap();
        let cc = exact_coupon_number(&g, budget()).unwrap().value();
        let ci = exact_injective_number(&g, budget()).unwrap().value();
        let want_c = if n % 4 == 0 { 2 } else { 1 };
        let want_i = if n % 4 == 0 { 2 } else { 3 };
        if cc != Some(want_c) || ci != Some(want_i) {
            ok = false;
            detail = format!("C{n}: chi_c={cc:?} chi_i={ci:?}");
        }
    }
    let graphs = corpus(20);
    for (name, g) in &graphs {
        let cc = exact_coupon_number(g, budget()).unwrap().value();
        let ci = exact_injective_number(g, budget()).unwrap().value();
        match (cc, ci) {
            (Some(c), Some(i)) if c <= g.min_degree() && g.min_degree() <= g.max_degree() && g.max_degree() <= i => {}
            _ => {
                ok = false;
                detail = format!("{name}: chi_c={cc:?} chi_i={ci:?}");
            }
        }
    }
    run.record("4", ok, format!("{detail} ({} corpus graphs)", graphs.len()));
}

fn criterion_5(run: &mut Run) {
    let mut ok = true;
    for d in 1..=4 {
        let g = complete_bipartite(d).unwrap();
        ok &= exact_coupon_number(&g, budget()).unwrap().value() == Some(d);
    }
    let h42 = hamming_graph(4, 2).unwrap();
    let witness = boolean_cube_coloring(2).unwrap();
    let cert = certify_coupon_at_min_degree(&h42, &witness);
    ok &= cert == Some(4);
    run.record("5", ok, format!("chi_c(K_dd)=d for d<=4, chi_c(H(4,2)) certified {cert:?}"));
}

fn criterion_6(run: &mut Run) {
    let seven = panchromatic_number(&Hypergraph::complete_uniform(7, 3), budget()).unwrap();
    run.record("6a", seven.value() == Some(1), format!("panchromatic(3-subsets of [7]) = {:?}", seven.value()));

    let six = panchromatic_number(&Hypergraph::complete_uniform(6, 3), budget()).unwrap();
    // Independent check over all 2^6 bipartitions.
    let bipartitions_fail = (0u32..64).all(|mask| {
        (0..6)
            .combinations(3)
            .any(|t| t.iter().map(|&v| mask >> v & 1).all_equal())
    });
    run.record(
        "6b",
        six.value() == Some(2),
        format!(
            "panchromatic(3-subsets of [6]) = {:?}, expected 2; every 2-coloring has a monochromatic triple: {bipartitions_fail}",
            six.value()
        ),
    );

    let g = incidence_graph(7, 3).unwrap();
    let (out, t) = timed(|| exact_coupon_number(&g, SearchBudget::new(200_000_000, 60_000).unwrap()).unwrap());
    run.record("6c", out.value() == Some(1), format!("chi_c(incidence(7,3)) = {:?} in {t:.2?}", out.value()));
}

fn criterion_7(run: &mut Run) {
    let graphs = corpus(16);
    let mut bad = Vec::new();
    for (name, g) in &graphs {
        let cc = exact_coupon_number(g, budget()).unwrap().value();
        let h = neighborhood_hypergraph(g).unwrap();
        let pc = panchromatic_number(&h, budget()).unwrap().value();
        if cc.is_none() || cc != pc {
            bad.push(format!("{name}: {cc:?} vs {pc:?}"));
        }
    }
    run.record("7", bad.is_empty(), format!("{} graphs with n<=16 {:?}", graphs.len(), bad));
}

fn criterion_8(run: &mut Run) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut tested, mut drawn, mut counterexamples) = (0, 0, 0);
    while tested < 500 && drawn < 200_000 {
        drawn += 1;
        let k = rng.gen_range(2..=3);
        let n = rng.gen_range(k.max(4)..=12);
        let m = rng.gen_range(1..=10);
        let edges: Vec<Vec<usize>> = (0..m)
            .map(|_| {
                let size = rng.gen_range(k..=n);
                rand::seq::index::sample(&mut rng, n, size).into_vec()
            })
            .collect();
        let h = Hypergraph::new(n, edges).unwrap();
        if !kw_condition(&h, k).unwrap() {
            continue;
        }
        tested += 1;
        if panchromatic_number(&h, budget()).unwrap().value().unwrap_or(0) < k {
            counterexamples += 1;
        }
    }
    run.record(
        "8",
        tested == 500 && counterexamples == 0,
        format!("{tested} hypergraphs satisfying the condition ({drawn} drawn), {counterexamples} counterexamples"),
    );
}

fn criterion_9(run: &mut Run) {
    // (a) soundness fuzz over seeds and parameters
    let graphs: Vec<Graph> = (0..10)
        .map(|i| random_regular(96 + 8 * i, 16 + (i % 3) * 4, 900 + i as u64).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut runs, mut successes, mut unsound) = (0, 0, 0);
    for seed in 0..1000u64 {
        let g = &graphs[(seed % 10) as usize];
        let d = g.regular_degree().unwrap();
        let delta = rng.gen_range(0.2..1.0);
        let params = TwoRoundParams {
            delta,
            eta: rng.gen_range(0.05..delta),
            max_restarts: rng.gen_range(1..=8),
            max_attempts: rng.gen_range(1..=2),
            d_min: 16,
            seed,
        };
        let k = rng.gen_range(1..=d);
        runs += 1;
        if let Ok(out) = two_round_color(g, k, &params) {
            successes += 1;
            if !check_coupon(g, &out.coloring, k).unwrap().is_valid() {
                unsound += 1;
            }
        }
    }
    run.record("9a", unsound == 0, format!("{runs} fuzz runs, {successes} colorings returned, {unsound} invalid"));

    // (b) reference instance
    let g = random_regular(4096, 64, 1).unwrap();
    let params = TwoRoundParams::default();
    let (best, t) = timed(|| best_k(&g, &params, budget()).unwrap());
    let valid = check_coupon(&g, &best.coloring, best.k).unwrap().is_valid();
    let detail = match (&best.trace, &best.failure_above) {
        (Some(tr), Some(fail)) => format!(
            "k*={} in {t:.2?} (limit 300s); window violations {}, mean |K_u| {:.3} (bound {:.3}); next k={} failed in phase {:?}",
            best.k, tr.degree_window_violations, tr.ku_mean, tr.ku_mean_bound, fail.k, fail.phase_outcome
        ),
        _ => format!("k*={} in {t:.2?}", best.k),
    };
    run.record("9b", valid && best.k >= 7 && t < Duration::from_secs(300), detail);
}

fn criterion_10(run: &mut Run) {
    let cfg = EnsembleConfig::new(16, 3, 200, 10);
    let (a, t) = timed(|| ensemble_experiment(&cfg).unwrap());
    let b = ensemble_experiment(&cfg).unwrap();
    let in_range = a.records.iter().all(|r| matches!(r.chi_c, Some(1..=3)));
    let same = a.to_json() == b.to_json();
    let reference = a.summary.reference.is_some();
    let dist: Vec<(usize, usize)> = a.summary.distribution.iter().map(|b| (b.k, b.count)).collect();
    run.record(
        "10",
        in_range && same && reference,
        format!("200 samples in {t:.2?}, distribution {dist:?}, deterministic={same}, reference={reference}"),
    );
}

/// Field multiplication by schoolbook polynomial product and reduction,
/// independent of the table-driven implementation.
fn poly_mul_oracle(f: &FiniteField, a: usize, b: usize) -> usize {
    let p = f.characteristic();
    let m = f.degree() as usize;
    let da = f.digits(a);
    let db = f.digits(b);
    let mut prod = vec![0usize; 2 * m];
    for i in 0..m {
        for j in 0..m {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    let modulus = f.modulus();
    for deg in (m..2 * m).rev() {
        let c = prod[deg];
        if c != 0 {
            for (i, &mi) in modulus.iter().enumerate() {
                let at = deg - m + i;
                prod[at] = (prod[at] + p * p - c * mi % p) % p;
            }
        }
    }
    prod[..m].iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn criterion_11(run: &mut Run) {
    let ((ok, detail), t) = timed(|| {
        let orders: Vec<usize> = (2..=64).filter(|&q| prime_power(q).is_some()).collect();
        for &q in &orders {
            let f = FiniteField::with_order(q).unwrap();
            for a in 0..q {
                if f.add(a, 0) != a || f.mul(a, 1) != a || f.add(a, f.neg(a)) != 0 || f.mul(a, 0) != 0 {
                    return (false, format!("GF({q}) identities at {a}"));
                }
                if a != 0 && f.mul(a, f.inv(a).unwrap()) != 1 {
                    return (false, format!("GF({q}) inverse of {a}"));
                }
                for b in 0..q {
                    if f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a) {
                        return (false, format!("GF({q}) commutativity"));
                    }
                    if f.mul(a, b) != poly_mul_oracle(&f, a, b) {
                        return (false, format!("GF({q}) product oracle at {a}*{b}"));
                    }
                    if a != 0 && b != 0 && f.mul(a, b) == 0 {
                        return (false, format!("GF({q}) zero divisor"));
                    }
                    for c in 0..q {
                        if f.add(f.add(a, b), c) != f.add(a, f.add(b, c))
                            || f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c))
                            || f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))
                        {
                            return (false, format!("GF({q}) associativity or distributivity"));
                        }
                    }
                }
            }
            if q % 2 == 1 && f.squares().len() != (q - 1) / 2 {
                return (false, format!("GF({q}) has {} nonzero squares", f.squares().len()));
            }
        }
        (true, format!("{} fields of order <= 64", orders.len()))
    });
    run.record("11", ok && t < Duration::from_secs(10), format!("{detail} in {t:.2?} (limit 10s)"));
}

fn criterion_12(run: &mut Run) {
    let report = paley_experiment(&[5, 9, 13, 17], budget(), false).unwrap();
    let mut ok = report.summary.relations_hold == Some(true);
    let mut rows = Vec::new();
    for r in &report.records {
        let (g, gt) = (r.gamma.unwrap_or(0), r.gamma_t.unwrap_or(0));
        ok &= r.gamma.is_some() && r.gamma_t.is_some() && g <= gt;
        if let (Some(c), Some(b)) = (r.chi_c, r.coupon_bound) {
            ok &= c <= b;
        }
        rows.push(format!("q={} gamma={g} gamma_t={gt} chi_c={:?}", r.q.unwrap(), r.chi_c));
    }
    ok &= report.records[0].chi_c == Some(1);
    run.record("12", ok, rows.join("; "));
}

fn main() {
    let mut run = Run { results: Vec::new() };
    criterion_1(&mut run);
    criterion_2(&mut run);
    criterion_3(&mut run);
    criterion_4(&mut run);
    criterion_5(&mut run);
    criterion_6(&mut run);
    criterion_7(&mut run);
    criterion_8(&mut run);
    criterion_9(&mut run);
    criterion_10(&mut run);
    criterion_11(&mut run);
    criterion_12(&mut run);

    let unexpected: Vec<&str> = run
        .results
        .iter()
        .filter(|(id, pass)| !pass && !KNOWN_FAILURES.contains(&id.as_str()))
        .map(|(id, _)| id.as_str())
        .collect();
    let failed = run.results.iter().filter(|(_, p)| !p).count();
    println!("acceptance: {} criteria, {failed} failed, {} unexpected", run.results.len(), unexpected.len());
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
