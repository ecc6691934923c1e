//! Acceptance criteria, one test each. Run with `--nocapture` to see the
//! measured values behind each verdict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2};
use std::time::{Duration, Instant};
use triqubit::classify::{ghz_uniqueness_witness, reconstruct_from_tangles};
use triqubit::closed_form::{
    measure_report, measure_report_asd, relation_residual, tangles_asd, tangles_closed_form, theta, three_tangle,
    EntropySet, TAYLOR_OFFSET,
};
use triqubit::oracle::{measures_oracle, tangle_oracle, williamson_check};
use triqubit::presets;
use triqubit::relations::{
    ckw_suite, maximize_avg_entropy_w_class, maximize_avg_tangle_case, proposition_suite, TangleCase,
};
use triqubit::state::{
    apply_local_unitary, random_asd, random_local_unitary, random_state, reduced_pair, reduced_single, Amplitudes,
    AsdParams, Qubit,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn verdict(n: u32, ok: bool, detail: String) {
    println!("{} criterion {n}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n}: {detail}");
}

#[test]
fn c01_reference_table() {
    let start = Instant::now();
    let mut worst_t: f64 = 0.0;
    let mut worst_s: f64 = 0.0;
    for row in presets::published_table() {
        let r = measure_report(&row.state.to_amplitudes()).unwrap();
        let t = &r.tangles;
        let got_t = [t.tau_ab, t.tau_ac, t.tau_bc, t.tau_abc];
        for (g, p) in got_t.iter().zip(row.tangles) {
            worst_t = worst_t.max((g - p).abs());
        }
        for (g, p) in r.entropies.as_array().iter().zip(row.entropies) {
            worst_s = worst_s.max((g - p).abs());
        }
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        worst_t <= 1e-12 && worst_s <= presets::PUBLISHED_ENTROPY_TOL && elapsed < Duration::from_secs(1),
        format!("tangle dev {worst_t:.2e}, entropy dev {worst_s:.2e}, {elapsed:?}"),
    );
}

#[test]
fn c02_closed_form_matches_oracle() {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst = (String::new(), 0.0f64);
    let mut track = |field: &str, d: f64| {
        if !(d <= worst.1) {
            worst = (field.to_string(), d);
        }
    };
    for _ in 0..1000 {
        let s = random_state(&mut r);
        let (f, d) = measure_report(&s).unwrap().max_diff(&measures_oracle(&s).unwrap());
        track(f, d);
    }
    for _ in 0..1000 {
        let p = random_asd(&mut r);
        let (f, d) = measure_report_asd(&p)
            .unwrap()
            .max_diff(&measures_oracle(&p.to_amplitudes()).unwrap());
        track(f, d);
    }
    let elapsed = start.elapsed();
    verdict(
        2,
        worst.1 <= 1e-9 && elapsed < Duration::from_secs(10),
        format!("max diff {:.2e} ({}), {elapsed:?}", worst.1, worst.0),
    );
}

#[test]
fn c03_local_unitary_invariance() {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let s = random_state(&mut r);
        let base = measure_report(&s).unwrap();
        for _ in 0..5 {
            let u = random_local_unitary(&mut r);
            let moved = measure_report(&apply_local_unitary(&s, &u)).unwrap();
            let t0 = &base.tangles;
            let t1 = &moved.tangles;
            let a = [t0.tau_ab, t0.tau_ac, t0.tau_bc, t0.tau_abc];
            let b = [t1.tau_ab, t1.tau_ac, t1.tau_bc, t1.tau_abc];
            let sa = base.entropies.as_array();
            let sb = moved.entropies.as_array();
            for (x, y) in a.iter().chain(&sa).zip(b.iter().chain(&sb)) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    verdict(
        3,
        worst <= 1e-9,
        format!("max change {worst:.2e} over 1000 transformed states"),
    );
}

#[test]
fn c04_theta_identity() {
    let mut r = rng(4);
    let worst = (0..10_000)
        .map(|_| {
            let s = random_state(&mut r);
            (4.0 * theta(&s) - three_tangle(&s)).abs()
        })
        .fold(0.0, f64::max);
    verdict(4, worst <= 1e-12, format!("max |4 Theta - tau_ABC| = {worst:.2e}"));
}

#[test]
fn c05_ckw_equalities_and_monogamy() {
    let mut r = rng(5);
    let mut worst_eq: f64 = 0.0;
    let mut violations = 0;
    for _ in 0..10_000 {
        let s = random_state(&mut r);
        let t = tangles_closed_form(&s);
        for (q, (x, y)) in [
            (Qubit::A, (t.tau_ab, t.tau_ac)),
            (Qubit::B, (t.tau_ab, t.tau_bc)),
            (Qubit::C, (t.tau_ac, t.tau_bc)),
        ] {
            let four_det = 4.0 * reduced_single(&s, q).matrix().det().re;
            worst_eq = worst_eq.max((x + y + t.tau_abc - four_det).abs());
            if x + y > four_det + 1e-10 {
                violations += 1;
            }
        }
    }
    verdict(
        5,
        worst_eq <= 1e-10 && violations == 0,
        format!("max equality residual {worst_eq:.2e}, {violations} monogamy violations"),
    );
}

#[test]
fn c06_williamson_identity() {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let s = random_state(&mut r);
        let tau_abc = three_tangle(&s);
        for traced in Qubit::ALL {
            let rho = reduced_pair(&s, traced);
            let tau = tangle_oracle(&rho).unwrap();
            worst = worst.max(williamson_check(&rho, tau, tau_abc).abs());
        }
    }
    verdict(6, worst <= 1e-9, format!("max residual {worst:.2e} over 300 marginals"));
}

#[test]
fn c07_w_class_entropy_maximum() {
    let start = Instant::now();
    let w = maximize_avg_entropy_w_class(&mut rng(7), 50).unwrap();
    let elapsed = start.elapsed();
    let l = w.best.argmax.lambda();
    let t = 1.0 / 3f64.sqrt();
    let dist = [l[0], l[2], l[3]]
        .iter()
        .map(|v| (v - t).abs())
        .fold(0.0, f64::max)
        .max(w.restart_spread());
    let m_err = (w.best.value - 0.63651).abs();
    verdict(
        7,
        dist <= 1e-6 && m_err <= 1e-5 && w.gradient_error <= 1e-5 && elapsed < Duration::from_secs(5),
        format!(
            "argmax distance {dist:.2e}, m = {:.6}, gradient error {:.2e}, {elapsed:?}",
            w.best.value, w.gradient_error
        ),
    );
}

#[test]
fn c08_average_tangle_case_maxima() {
    let mut r = rng(8);
    let mut ok = true;
    let mut detail = Vec::new();
    for case in [TangleCase::B, TangleCase::C] {
        let res = maximize_avg_tangle_case(case, &mut r).unwrap();
        let hit = (res.maximum.value - 1.0 / 6.0).abs() <= 1e-8;
        ok &= hit;
        detail.push(format!(
            "{}: max {:.10} (quarter point {:.10})",
            case.label(),
            res.maximum.value,
            res.candidate_value
        ));
    }
    for lambda4 in [0.0, 0.1, 0.5] {
        let res = maximize_avg_tangle_case(TangleCase::D { lambda4 }, &mut r).unwrap();
        let want = 4.0 / 9.0 * (1.0 - lambda4 * lambda4).powi(2);
        ok &= (res.maximum.value - want).abs() <= 1e-8;
        detail.push(format!("D({lambda4}): {:.10} vs {want:.10}", res.maximum.value));
    }
    let res = maximize_avg_tangle_case(TangleCase::E { lambda0_sq: 0.01 }, &mut r).unwrap();
    ok &= (res.maximum.value - 0.3333).abs() <= 1e-4;
    detail.push(format!(
        "E(0.01): max {:.6} (equal family {:.6})",
        res.maximum.value, res.candidate_value
    ));
    verdict(8, ok, detail.join("; "));
}

#[test]
fn c09_ckw_case_bounds() {
    let mut r = rng(9);
    let (report, summaries) = ckw_suite(10_000, &mut r).unwrap();
    let violated: Vec<String> = summaries
        .iter()
        .filter(|s| s.violations > 0)
        .map(|s| {
            format!(
                "case {} ({} of {}, max {:.4})",
                s.case.id(),
                s.violations,
                s.samples,
                s.max_sampled
            )
        })
        .collect();
    let six_seven: Vec<_> = summaries.iter().filter(|s| [6, 7].contains(&s.case.id())).collect();
    let reach: Vec<String> = six_seven
        .iter()
        .map(|s| format!("case {} optimized sup {:.6}", s.case.id(), s.supremum))
        .collect();
    let reached = six_seven.iter().all(|s| s.supremum >= 0.5 - 1e-3);
    verdict(
        9,
        violated.is_empty() && reached && report.samples == 80_000,
        format!("violations: [{}]; {}", violated.join(", "), reach.join(", ")),
    );
}

#[test]
fn c10_ghz_uniqueness() {
    let mut r = rng(10);
    let mut counterexamples = 0;
    let mut maximal = 0;
    for _ in 0..100_000 {
        let p = random_asd(&mut r);
        let e = EntropySet::from_tangles(&tangles_asd(&p)).unwrap();
        if e.as_array().iter().all(|&s| s >= LN_2 - 1e-10) {
            maximal += 1;
            if ghz_uniqueness_witness(&p).is_err() {
                counterexamples += 1;
            }
        }
    }
    let ghz = ghz_uniqueness_witness(&presets::ghz_asd()).unwrap();
    // the phase is irrelevant for GHZ: λ1 = λ2 = λ3 = 0
    let ghz_phase =
        ghz_uniqueness_witness(&AsdParams::new([FRAC_1_SQRT_2, 0.0, 0.0, 0.0, FRAC_1_SQRT_2], 1.0).unwrap()).unwrap();
    verdict(
        10,
        counterexamples == 0 && ghz && ghz_phase,
        format!("{counterexamples} counterexamples, {maximal} random states at maximal entropy, GHZ witness {ghz}"),
    );
}

#[test]
fn c11_relation_residual() {
    let mut r = rng(11);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..10_000 {
        let v = relation_residual(&random_state(&mut r)).unwrap();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let ghz = relation_residual(&presets::ghz()).unwrap();
    let product = relation_residual(&Amplitudes::basis(0)).unwrap();
    let ok = lo >= -TAYLOR_OFFSET - 1e-9 && hi <= 1e-9 && ghz.abs() <= 1e-12 && (product + (LN_2 - 0.5)).abs() <= 1e-12;
    verdict(
        11,
        ok,
        format!("range [{lo:.6}, {hi:.2e}], GHZ {ghz:.2e}, product {product:.6}"),
    );
}

#[test]
fn c12_reconstruction_round_trip() {
    let mut r = rng(12);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 100 {
        let t: [f64; 3] = [r.random(), r.random(), r.random()];
        let Ok(rec) = reconstruct_from_tangles(t[0], t[1], t[2]) else {
            continue;
        };
        let back = tangles_asd(&rec.params);
        for (a, b) in back.pairwise().iter().zip(t) {
            worst = worst.max((a - b).abs());
        }
        done += 1;
    }
    let kappa = reconstruct_from_tangles(4.0 / 9.0, 4.0 / 9.0, 0.25).unwrap().params;
    let k_err = kappa
        .lambda()
        .iter()
        .zip(presets::kappa_asd().lambda())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    verdict(
        12,
        worst <= 1e-10 && k_err <= 1e-12,
        format!("max round-trip error {worst:.2e}, kappa parameter error {k_err:.2e}"),
    );
}

#[test]
fn c13_sign_relations() {
    let report = proposition_suite(10_000, &mut rng(13)).unwrap();
    let relevant: Vec<_> = report
        .checks
        .iter()
        .filter(|c| matches!(c.anchor, "Prop 1" | "Prop 2" | "Sec III.C"))
        .collect();
    let violations: usize = relevant.iter().map(|c| c.violations).sum();
    let evaluated: usize = relevant.iter().map(|c| c.evaluated).sum();
    let failing: Vec<String> = relevant
        .iter()
        .filter(|c| c.violations > 0)
        .map(|c| match &c.first_counterexample {
            Some(w) => format!("{} (worst {:.2e}) at {w}", c.name, c.worst),
            None => format!("{} (worst {:.2e})", c.name, c.worst),
        })
        .collect();
    verdict(
        13,
        violations == 0 && relevant.len() == 5,
        format!(
            "{violations} violations in {evaluated} evaluations over {} checks{}",
            relevant.len(),
            if failing.is_empty() {
                String::new()
            } else {
                format!("; {}", failing.join("; "))
            }
        ),
    );
}
