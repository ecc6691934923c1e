//! Monte-Carlo suites for the tangle/entropy propositions, the averages
//! relation and the CKW equalities.

use super::{Check, SuiteReport, Summary, Witness};
use crate::closed_form::{entropy_derivative, TAYLOR_OFFSET};
use crate::closed_form::{measure_report, measure_report_asd, MeasureReport, ENTROPY_TIE_TOL, TANGLE_TIE_TOL};
use crate::error::Result;
use crate::oracle::measures_oracle;
use crate::presets;
use crate::state::{random_asd, random_state, Amplitudes, AsdParams, Qubit};
use rand::Rng;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

/// Differences of tangles above this must have a definite entropy ordering.
pub const ORDERING_TOL: f64 = 1e-9;
/// Lower end of the α range on which the factor-2 relation is bounded.
pub const ALPHA_LO: f64 = 0.05;
/// Slack on the interval assertions of the averages relation.
pub const INTERVAL_TOL: f64 = 1e-9;
pub const CKW_TOL: f64 = 1e-10;
/// Samples with τ_ABC at least this large count as near-GHZ.
pub const NEAR_GHZ: f64 = 0.999;

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub witness: Witness,
    pub amplitudes: Amplitudes,
    pub asd: Option<AsdParams>,
}

impl Sample {
    pub fn asd(p: AsdParams) -> Self {
        Self {
            amplitudes: p.to_amplitudes(),
            asd: Some(p),
            witness: Witness::Asd(p),
        }
    }

    pub fn haar(s: Amplitudes) -> Self {
        Self {
            amplitudes: s,
            asd: None,
            witness: Witness::Amplitudes(s),
        }
    }

    pub fn report(&self) -> Result<MeasureReport> {
        match &self.asd {
            Some(p) => measure_report_asd(p),
            None => measure_report(&self.amplitudes),
        }
    }
}

// Schmidt-form states with an exact tie between two pairwise tangles:
// λ2 = λ3 ties τ_AB with τ_AC; λ1 = 0 with λ0 = λ3 ties τ_AC with τ_BC;
// λ1 = 0 with λ0 = λ2 ties τ_AB with τ_BC.
fn tie_sample<R: Rng + ?Sized>(kind: usize, rng: &mut R) -> Result<AsdParams> {
    let p = random_asd(rng);
    let mut l = *p.lambda();
    match kind % 3 {
        0 => l[3] = l[2],
        1 => {
            l[1] = 0.0;
            l[3] = l[0];
        }
        _ => {
            l[1] = 0.0;
            l[2] = l[0];
        }
    }
    AsdParams::normalized(l, p.phi())
}

/// GHZ state with the other coefficients of order `eps`.
fn near_ghz<R: Rng + ?Sized>(eps: f64, rng: &mut R) -> Result<AsdParams> {
    let mut l = [FRAC_1_SQRT_2, 0.0, 0.0, 0.0, FRAC_1_SQRT_2];
    for v in &mut l[1..4] {
        *v = eps * rng.random_range(0.0..1.0);
    }
    l[0] += eps * rng.random_range(-1.0..1.0);
    l[4] += eps * rng.random_range(-1.0..1.0);
    AsdParams::normalized(l, rng.random_range(0.0..std::f64::consts::TAU))
}

fn fixtures() -> Vec<Sample> {
    let mut out: Vec<Sample> = presets::table_states()
        .into_iter()
        .map(|(_, p)| Sample::asd(p))
        .collect();
    out.push(Sample::haar(Amplitudes::basis(0)));
    out
}

/// The three unordered pairs (u, v) of qubits.
const PAIRS: [(Qubit, Qubit); 3] = [(Qubit::A, Qubit::B), (Qubit::A, Qubit::C), (Qubit::B, Qubit::C)];

/// Exact and ordering forms of the tangle/entropy propositions, plus the
/// bounded factor-2 relation for α ≥ `ALPHA_LO`.
///
/// For qubits u ≠ v the pairwise tangle with v traced out is compared with
/// the one with u traced out; their difference is 4(α_u − α_v) and the
/// entropies of the two pairs are S_v and S_u.
pub fn proposition_suite<R: Rng + ?Sized>(n_samples: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("propositions");
    let mut tie = Check::new("pairwise tangle tie <=> pair entropy tie", "Prop 1");
    let mut order = Check::new("pairwise tangle order <=> reversed pair entropy order", "Prop 2");
    let mut one_order = Check::new("one-tangle order <=> single entropy order", "Prop 2");
    let mut exact = Check::new("tangle difference = 4 * alpha difference", "Prop 3");
    let mut bounded = Check::new(
        format!("|dtau - 2 dS| <= 2(S'(a_lo) - 2)|dalpha| for alpha >= {ALPHA_LO}"),
        "Prop 3",
    );
    let mut j_tie = Check::new("entropy tie <=> invariant tie", "Sec III.C");
    let mut j_order = Check::new("entropy order <=> invariant order", "Sec III.C");
    let mut ratio_all = Summary::default();
    let mut ratio_lo = Summary::default();
    let mut j_ratio = Summary::default();
    let e_max = entropy_derivative(ALPHA_LO)? - 2.0;

    let mut samples = fixtures();
    for i in 0..n_samples {
        samples.push(match i % 3 {
            0 => Sample::haar(random_state(rng)),
            1 => Sample::asd(random_asd(rng)),
            _ => Sample::asd(tie_sample(i / 3, rng)?),
        });
    }
    for sample in &samples {
        let r = sample.report()?;
        let (t, e) = (&r.tangles, &r.entropies);
        let w = || sample.witness.clone();
        for (u, v) in PAIRS {
            // τ(v traced) − τ(u traced) against S(pair without v) − S(pair without u)
            let dtau = t.pair(v) - t.pair(u);
            let ds_pairs = e.single(v) - e.single(u);
            let dalpha = e.alpha(u) - e.alpha(v);
            let tau_tied = dtau.abs() <= TANGLE_TIE_TOL;
            let s_tied = ds_pairs.abs() <= ENTROPY_TIE_TOL;
            tie.record(tau_tied == s_tied, dtau.abs(), w);
            if dtau.abs() > ORDERING_TOL {
                order.record(dtau.signum() == -ds_pairs.signum() && ds_pairs != 0.0, dtau.abs(), w);
            }
            let d1 = t.one_tangle(u) - t.one_tangle(v);
            if d1.abs() > ORDERING_TOL {
                let ds = e.single(u) - e.single(v);
                one_order.record(d1.signum() == ds.signum() && ds != 0.0, d1.abs(), w);
            }
            let gap = (dtau - 4.0 * dalpha).abs();
            exact.record(gap <= TANGLE_TIE_TOL, gap, w);

            // dtau is 4 dalpha and −ds_pairs is S_u − S_v = S′(ξ) dalpha
            let ds = -ds_pairs;
            if ds.abs() > 1e-6 {
                ratio_all.push(dtau / ds);
            }
            if e.alpha(u) >= ALPHA_LO && e.alpha(v) >= ALPHA_LO {
                let dev = (dtau - 2.0 * ds).abs();
                let allowed = 2.0 * e_max * dalpha.abs() + 1e-12;
                bounded.record(dev <= allowed, dev, w);
                if ds.abs() > 1e-6 {
                    ratio_lo.push(dtau / ds);
                }
            }

            if let Some(j) = &r.invariants {
                // α_u − α_v = J(v traced) − J(u traced), with J1, J2, J3
                // belonging to the pairs BC, AC, AB
                let traced = |q: Qubit| match q {
                    Qubit::A => j.j1,
                    Qubit::B => j.j2,
                    Qubit::C => j.j3,
                };
                let (ju, jv) = (traced(v), traced(u));
                let dj = ju - jv;
                let ds_single = e.single(u) - e.single(v);
                j_tie.record(
                    (dj.abs() <= TANGLE_TIE_TOL / 4.0) == (ds_single.abs() <= ENTROPY_TIE_TOL),
                    dj.abs(),
                    w,
                );
                if dj.abs() > ORDERING_TOL / 4.0 {
                    j_order.record(dj.signum() == ds_single.signum() && ds_single != 0.0, dj.abs(), w);
                }
                if dj.abs() > 1e-6 {
                    j_ratio.push(ds_single / dj);
                }
            }
        }
    }
    report.samples = samples.len();
    report.checks = vec![tie, order, one_order, exact, bounded, j_tie, j_order];
    report.stats.push(("alpha_lo".into(), ALPHA_LO));
    report.stats.push(("e_max".into(), e_max));
    ratio_all.export("ratio_dtau_over_dS", &mut report.stats);
    ratio_lo.export("ratio_dtau_over_dS_alpha_lo", &mut report.stats);
    j_ratio.export("ratio_dS_over_dJ", &mut report.stats);
    Ok(report)
}

/// Interval forms of m − A − τ_ABC/2 ≈ ln 2 − 1/2 and its consequences.
pub fn averages_relation_suite<R: Rng + ?Sized>(n_samples: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("averages");
    let mut residual = Check::new("m - A - tau_ABC/2 - (ln2 - 1/2) in [-(ln2 - 1/2), 0]", "Eq. relat-0");
    let mut gap = Check::new("m - A in [0, ln 2]", "Sec V.C");
    let mut ghz_m = Check::new("tau_ABC >= 0.999 => m >= ln2 - 0.01", "Sec V.E");
    let mut ghz_a = Check::new("tau_ABC >= 0.999 => A <= 0.01", "Sec V.E");
    let mut res = Summary::default();
    let mut m_minus_a = Summary::default();
    let mut a_plus_half = Summary::default();

    let mut samples = fixtures();
    for i in 0..n_samples {
        samples.push(match i % 4 {
            0 | 1 => Sample::haar(random_state(rng)),
            2 => Sample::asd(random_asd(rng)),
            _ => Sample::asd(near_ghz(10f64.powi(-(1 + (i / 4 % 4) as i32)), rng)?),
        });
    }
    let mut near = 0usize;
    for sample in &samples {
        let r = sample.report()?;
        let w = || sample.witness.clone();
        let rr = r.relation_residual;
        res.push(rr);
        residual.record((-TAYLOR_OFFSET - INTERVAL_TOL..=INTERVAL_TOL).contains(&rr), rr.abs(), w);
        let d = r.avg_entropy - r.avg_tangle;
        m_minus_a.push(d);
        gap.record((-INTERVAL_TOL..=LN_2 + INTERVAL_TOL).contains(&d), d, w);
        a_plus_half.push(r.avg_tangle + r.tangles.tau_abc / 2.0);
        if r.tangles.tau_abc >= NEAR_GHZ {
            near += 1;
            ghz_m.record(r.avg_entropy >= LN_2 - 0.01, LN_2 - r.avg_entropy, w);
            ghz_a.record(r.avg_tangle <= 0.01, r.avg_tangle, w);
        }
    }
    report.samples = samples.len();
    report.checks = vec![residual, gap, ghz_m, ghz_a];
    res.export("residual", &mut report.stats);
    m_minus_a.export("m_minus_a", &mut report.stats);
    a_plus_half.export("a_plus_half_tau_abc", &mut report.stats);
    report.stats.push(("published_lower_estimate".into(), TAYLOR_OFFSET));
    report.stats.push(("near_ghz_samples".into(), near as f64));
    Ok(report)
}

/// τ_uv + τ_uw + τ_ABC = 4 det ρ_u in both the closed form and the oracle,
/// and the monogamy inequality τ_uv + τ_uw ≤ τ_u(vw).
pub fn monogamy_suite<R: Rng + ?Sized>(n_samples: usize, rng: &mut R) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("monogamy");
    let mut ineq = Check::new("tau_uv + tau_uw <= tau_u(vw)", "CKW inequality");
    let mut cf_eq = Check::new("closed form: tau_uv + tau_uw + tau_ABC = 4 det rho_u", "CKW equality");
    let mut or_eq = Check::new("oracle: tau_uv + tau_uw + tau_ABC = 4 det rho_u", "CKW equality");

    let mut samples = fixtures();
    for i in 0..n_samples {
        samples.push(if i % 2 == 0 {
            Sample::haar(random_state(rng))
        } else {
            Sample::asd(random_asd(rng))
        });
    }
    for sample in &samples {
        let cf = sample.report()?;
        let or = measures_oracle(&sample.amplitudes)?;
        let w = || sample.witness.clone();
        for u in Qubit::ALL {
            // pairs containing u are those with some other qubit traced
            let others = |t: &crate::closed_form::TangleSet| -> f64 {
                Qubit::ALL.iter().filter(|&&q| q != u).map(|&q| t.pair(q)).sum()
            };
            let det4 = or.tangles.one_tangle(u);
            for t in [&cf.tangles, &or.tangles] {
                let excess = others(t) - t.one_tangle(u);
                ineq.record(excess <= CKW_TOL, excess, w);
            }
            let d = (others(&cf.tangles) + cf.tangles.tau_abc - det4).abs();
            cf_eq.record(d <= CKW_TOL, d, w);
            let d = (others(&or.tangles) + or.tangles.tau_abc - det4).abs();
            or_eq.record(d <= CKW_TOL, d, w);
        }
    }
    report.samples = samples.len();
    report.checks = vec![ineq, cf_eq, or_eq];
    Ok(report)
}
