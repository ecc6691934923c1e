//! Constrained maxima of the average tangle and the average entropy over
//! families of Schmidt-form states.

use super::{Check, SuiteReport, Witness};
use crate::classify::ZERO_TOL;
use crate::closed_form::{entropy_derivative, entropy_from_alpha};
use crate::error::Result;
use crate::optimize::{
    gradient_check, interior_stationary_points, multistart_ascent, random_start, AscentResult, Objective,
    StationaryKind, MULTISTART, OPT_TOL,
};
use crate::state::AsdParams;
use rand::Rng;
use std::f64::consts::PI;

/// α below this is treated as this value when differentiating S(α).
const ALPHA_FLOOR: f64 = 1e-14;
/// Target residual for the W-class search; convergence is still judged
/// against `OPT_TOL`.
const W_CLASS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremumResult {
    pub argmax: AsdParams,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub kkt_residual: f64,
}

/// Schmidt coefficients split into optimized ("free") and fixed entries.
#[derive(Clone, Debug, PartialEq)]
struct Slice {
    free: Vec<usize>,
    fixed: [f64; 5],
    phi: f64,
}

impl Slice {
    fn lambda(&self, x: &[f64]) -> [f64; 5] {
        let mut l = self.fixed;
        for (&i, &v) in self.free.iter().zip(x) {
            l[i] = v;
        }
        l
    }

    fn radius(&self) -> f64 {
        let fixed_sq: f64 = (0..5)
            .filter(|i| !self.free.contains(i))
            .map(|i| self.fixed[i] * self.fixed[i])
            .sum();
        (1.0 - fixed_sq).max(0.0).sqrt()
    }

    fn restrict(&self, full: [f64; 5]) -> Vec<f64> {
        self.free.iter().map(|&i| full[i]).collect()
    }

    fn params(&self, x: &[f64]) -> Result<AsdParams> {
        AsdParams::normalized(self.lambda(x), self.phi)
    }

    fn result(&self, r: &AscentResult) -> Result<ExtremumResult> {
        Ok(ExtremumResult {
            argmax: self.params(&r.x)?,
            value: r.value,
            iterations: r.iterations,
            converged: r.kkt_residual <= OPT_TOL,
            kkt_residual: r.kkt_residual,
        })
    }
}

/// Average pairwise tangle A = (τ_AB + τ_AC + τ_BC)/3 of a Schmidt-form
/// state, as a function of the free coefficients at fixed φ.
#[derive(Clone, Debug, PartialEq)]
pub struct AverageTangle {
    slice: Slice,
}

impl AverageTangle {
    /// `free` lists the optimized λ indices; the others keep `fixed`.
    pub fn new(free: Vec<usize>, fixed: [f64; 5], phi: f64) -> Self {
        Self {
            slice: Slice { free, fixed, phi },
        }
    }

    pub fn radius(&self) -> f64 {
        self.slice.radius()
    }

    pub fn lambda(&self, x: &[f64]) -> [f64; 5] {
        self.slice.lambda(x)
    }

    fn full_gradient(&self, l: &[f64; 5]) -> [f64; 5] {
        let c = self.slice.phi.cos();
        let k = 8.0 / 3.0;
        [
            k * l[0] * (l[2] * l[2] + l[3] * l[3]),
            k * (l[1] * l[4] * l[4] - l[2] * l[3] * l[4] * c),
            k * (l[0] * l[0] * l[2] + l[2] * l[3] * l[3] - l[1] * l[3] * l[4] * c),
            k * (l[0] * l[0] * l[3] + l[2] * l[2] * l[3] - l[1] * l[2] * l[4] * c),
            k * (l[1] * l[1] * l[4] - l[1] * l[2] * l[3] * c),
        ]
    }
}

impl Objective for AverageTangle {
    fn dim(&self) -> usize {
        self.slice.free.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let l = self.lambda(x);
        let c = self.slice.phi.cos();
        let (l0, l1, l2, l3, l4) = (l[0] * l[0], l[1] * l[1], l[2] * l[2], l[3] * l[3], l[4] * l[4]);
        // τ_AB + τ_AC + τ_BC with τ_BC = 4|λ1λ4 e^{iφ} − λ2λ3|²
        let sum = 4.0 * (l0 * l3 + l0 * l2 + l1 * l4 + l2 * l3) - 8.0 * l[1] * l[2] * l[3] * l[4] * c;
        sum / 3.0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.slice.restrict(self.full_gradient(&self.lambda(x)))
    }
}

/// S′(α) with α floored away from 0 and the removable point 1/4 filled in.
fn entropy_slope(alpha: f64) -> f64 {
    let a = alpha.max(ALPHA_FLOOR);
    if a >= 0.25 {
        return 2.0;
    }
    entropy_derivative(a).unwrap_or(2.0)
}

/// Average entropy m on the W class, λ1 = λ4 = 0, over (λ0, λ2, λ3).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WClassEntropy;

impl WClassEntropy {
    /// (α_A, α_B, α_C) for λ0, λ2, λ3.
    pub fn alphas(x: &[f64]) -> [f64; 3] {
        let (a, b, c) = (x[0] * x[0], x[1] * x[1], x[2] * x[2]);
        [a * (b + c), c * (a + b), b * (a + c)]
    }

    /// Differences of the three Lagrange conditions obtained by eliminating
    /// the multiplier; all vanish at a stationary point.
    pub fn stationarity_residuals(x: &[f64]) -> [f64; 3] {
        let [aa, ab, ac] = Self::alphas(x);
        let (l0, l2, l3) = (x[0] * x[0], x[1] * x[1], x[2] * x[2]);
        // (1 − 2λ²) ln(η2/η1)/√(1 − 4α) = −(1 − 2λ²) S′(α)
        let ta = (1.0 - 2.0 * l0) * entropy_slope(aa);
        let tb = (1.0 - 2.0 * l3) * entropy_slope(ab);
        let tc = (1.0 - 2.0 * l2) * entropy_slope(ac);
        [ta - tc, ta - tb, tb - tc]
    }
}

impl Objective for WClassEntropy {
    fn dim(&self) -> usize {
        3
    }

    fn value(&self, x: &[f64]) -> f64 {
        Self::alphas(x)
            .iter()
            .map(|&a| entropy_from_alpha(a.clamp(0.0, 0.25)).unwrap_or(0.0))
            .sum::<f64>()
            / 3.0
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let [sa, sb, sc] = Self::alphas(x).map(entropy_slope);
        let (l0, l2, l3) = (x[0], x[1], x[2]);
        let (q0, q2, q3) = (l0 * l0, l2 * l2, l3 * l3);
        // ∂m/∂λ = (1/3) Σ_μ S′(α_μ) ∂α_μ/∂λ
        vec![
            2.0 * l0 * (sa * (q2 + q3) + sb * q3 + sc * q2) / 3.0,
            2.0 * l2 * (sa * q0 + sb * q3 + sc * (q0 + q3)) / 3.0,
            2.0 * l3 * (sa * q0 + sb * (q0 + q2) + sc * q2) / 3.0,
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WClassExtremum {
    /// Best of the restarts.
    pub best: ExtremumResult,
    /// Final (λ0, λ2, λ3) of every restart.
    pub restarts: Vec<[f64; 3]>,
    pub all_converged: bool,
    /// Residuals of the three eliminated Lagrange conditions at the best point.
    pub stationarity: [f64; 3],
    /// Worst relative analytic/finite-difference gradient gap over random points.
    pub gradient_error: f64,
}

impl WClassExtremum {
    /// Largest distance between any restart's argmax and the best one.
    pub fn restart_spread(&self) -> f64 {
        let l = self.best.argmax.lambda();
        let b = [l[0], l[2], l[3]];
        self.restarts
            .iter()
            .map(|r| r.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// Maximizes the average entropy over the W class from `MULTISTART` random
/// starts, and checks the gradient at `gradient_points` random points.
pub fn maximize_avg_entropy_w_class<R: Rng + ?Sized>(rng: &mut R, gradient_points: usize) -> Result<WClassExtremum> {
    let f = WClassEntropy;
    let runs = multistart_ascent(&f, 1.0, MULTISTART, W_CLASS_TOL, rng);
    let best = &runs[0];
    let slice = Slice {
        free: vec![0, 2, 3],
        fixed: [0.0; 5],
        phi: 0.0,
    };
    let gradient_error = (0..gradient_points)
        .map(|_| gradient_check(&f, &random_start(rng, 3, 1.0)))
        .fold(0.0, f64::max);
    Ok(WClassExtremum {
        best: slice.result(best)?,
        restarts: runs.iter().map(|r| [r.x[0], r.x[1], r.x[2]]).collect(),
        all_converged: runs.iter().all(|r| r.kkt_residual <= OPT_TOL),
        stationarity: WClassEntropy::stationarity_residuals(&best.x),
        gradient_error,
    })
}

/// Zero patterns of the average-tangle maximization problems.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TangleCase {
    /// λ2 = 0, λ1λ3 ≠ 0.
    B,
    /// λ3 = 0, λ1λ2 ≠ 0.
    C,
    /// λ1 = 0 with λ4 held fixed.
    D { lambda4: f64 },
    /// λ1λ2λ3 ≠ 0 with λ0² held fixed.
    E { lambda0_sq: f64 },
}

impl TangleCase {
    pub fn label(&self) -> String {
        match self {
            TangleCase::B => "B".into(),
            TangleCase::C => "C".into(),
            TangleCase::D { lambda4 } => format!("D(lambda4={lambda4})"),
            TangleCase::E { lambda0_sq } => format!("E(lambda0^2={lambda0_sq})"),
        }
    }

    fn objective(&self) -> AverageTangle {
        match *self {
            TangleCase::B => AverageTangle::new(vec![0, 1, 3, 4], [0.0; 5], PI),
            TangleCase::C => AverageTangle::new(vec![0, 1, 2, 4], [0.0; 5], PI),
            TangleCase::D { lambda4 } => AverageTangle::new(vec![0, 2, 3], [0.0, 0.0, 0.0, 0.0, lambda4], PI),
            TangleCase::E { lambda0_sq } => {
                AverageTangle::new(vec![1, 2, 3, 4], [lambda0_sq.sqrt(), 0.0, 0.0, 0.0, 0.0], PI)
            }
        }
    }

    /// The point the closed-form analysis singles out, and its value of A:
    /// the quarter-amplitude states for B and C, equal λ0 = λ2 = λ3 for D,
    /// and λ1 = λ2 = λ3 = λ4 for E.
    pub fn candidate(&self) -> Result<(AsdParams, f64)> {
        let lambda = match *self {
            TangleCase::B => [0.5, 0.5, 0.0, 0.5, 0.5],
            TangleCase::C => [0.5, 0.5, 0.5, 0.0, 0.5],
            TangleCase::D { lambda4 } => {
                let l = ((1.0 - lambda4 * lambda4) / 3.0).sqrt();
                [l, 0.0, l, l, lambda4]
            }
            TangleCase::E { lambda0_sq } => {
                let l = ((1.0 - lambda0_sq) / 4.0).sqrt();
                [lambda0_sq.sqrt(), l, l, l, l]
            }
        };
        let f = self.objective();
        let x = f.slice.restrict(lambda);
        Ok((f.slice.params(&x)?, f.value(&x)))
    }

    /// Whether λ satisfies the case's non-vanishing conditions, including
    /// λ0λ4 ≠ 0.
    pub fn contains(&self, l: &[f64; 5]) -> bool {
        let nz = |i: usize| l[i] > ZERO_TOL;
        let ghz = l[0] * l[4] > ZERO_TOL;
        ghz && match self {
            TangleCase::B => nz(1) && nz(3) && l[2] <= ZERO_TOL,
            TangleCase::C => nz(1) && nz(2) && l[3] <= ZERO_TOL,
            TangleCase::D { .. } => l[1] <= ZERO_TOL && nz(2) && nz(3),
            TangleCase::E { .. } => nz(1) && nz(2) && nz(3),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub params: AsdParams,
    pub value: f64,
    pub kind: StationaryKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseExtremum {
    pub case: TangleCase,
    /// Best multistart ascent over the closure of the case.
    pub maximum: ExtremumResult,
    /// Whether the maximizer itself lies inside the case (otherwise the
    /// value is a supremum approached from inside).
    pub attained_in_case: bool,
    /// Lagrange points with every free coefficient positive.
    pub critical_points: Vec<CriticalPoint>,
    pub candidate: AsdParams,
    pub candidate_value: f64,
}

impl CaseExtremum {
    /// The critical point closest to the candidate, if any lies within `tol`.
    pub fn candidate_critical_point(&self, tol: f64) -> Option<&CriticalPoint> {
        let c = self.candidate.lambda();
        self.critical_points
            .iter()
            .find(|p| p.params.lambda().iter().zip(c).all(|(a, b)| (a - b).abs() <= tol))
    }
}

/// Maximizes the average pairwise tangle in one case, and locates the
/// interior Lagrange points of the same problem.
pub fn maximize_avg_tangle_case<R: Rng + ?Sized>(case: TangleCase, rng: &mut R) -> Result<CaseExtremum> {
    let f = case.objective();
    let radius = f.radius();
    let runs = multistart_ascent(&f, radius, MULTISTART, OPT_TOL, rng);
    let maximum = f.slice.result(&runs[0])?;
    let mut critical_points = Vec::new();
    for p in interior_stationary_points(&f, radius, 4 * MULTISTART, rng) {
        critical_points.push(CriticalPoint {
            params: f.slice.params(&p.x)?,
            value: p.value,
            kind: p.kind,
        });
    }
    let (candidate, candidate_value) = case.candidate()?;
    Ok(CaseExtremum {
        attained_in_case: case.contains(maximum.argmax.lambda()),
        case,
        maximum,
        critical_points,
        candidate,
        candidate_value,
    })
}

/// λ4 values for the fixed-λ4 case and λ0² values for the fixed-λ0 case.
pub const CASE_D_LAMBDA4: [f64; 3] = [0.0, 0.1, 0.5];
pub const CASE_E_LAMBDA0_SQ: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// All extremum claims as one report: the W-class entropy maximum and the
/// average-tangle maxima of each case.
pub fn extrema_suite<R: Rng + ?Sized>(rng: &mut R) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("extrema");
    let delta = (3.0 * 3f64.ln() - 2.0 * 2f64.ln()) / 3.0;
    let t = 1.0 / 3f64.sqrt();

    let w = maximize_avg_entropy_w_class(rng, 50)?;
    let l = *w.best.argmax.lambda();
    let wit = || Witness::Asd(w.best.argmax);
    let mut c = Check::new("W class: all restarts converge", "Appendix C extremum");
    c.record(w.all_converged, w.best.kkt_residual, wit);
    report.checks.push(c);
    let dist = [l[0], l[2], l[3]].iter().map(|v| (v - t).abs()).fold(0.0, f64::max);
    let mut c = Check::new(
        "W class: argmax lambda0 = lambda2 = lambda3 = 1/sqrt3",
        "Appendix C extremum",
    );
    c.record(
        dist <= 1e-6 && w.restart_spread() <= 1e-6,
        dist.max(w.restart_spread()),
        wit,
    );
    report.checks.push(c);
    let mut c = Check::new("W class: max m = (3 ln3 - 2 ln2)/3", "Appendix C extremum");
    c.record((w.best.value - delta).abs() <= 1e-9, (w.best.value - delta).abs(), wit);
    report.checks.push(c);
    let st = w.stationarity.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut c = Check::new("W class: eliminated Lagrange conditions", "Appendix C extremum");
    c.record(st <= 1e-8, st, wit);
    report.checks.push(c);
    let mut c = Check::new("W class: analytic gradient vs finite difference", "Appendix C extremum");
    c.record(w.gradient_error <= 1e-5, w.gradient_error, wit);
    report.checks.push(c);
    report.stats.push(("w_class_max_m".into(), w.best.value));
    report.stats.push(("w_class_lambda0".into(), l[0]));
    report.stats.push(("w_class_lambda2".into(), l[2]));
    report.stats.push(("w_class_lambda3".into(), l[3]));

    for case in [TangleCase::B, TangleCase::C] {
        let r = maximize_avg_tangle_case(case, rng)?;
        let name = case.label();
        let mut c = Check::new(
            format!("case {name}: quarter-amplitude point is a Lagrange point with A = 1/6"),
            "Appendix D",
        );
        let cp = r.candidate_critical_point(1e-8);
        let ok = cp.is_some_and(|p| (p.value - 1.0 / 6.0).abs() <= 1e-8);
        let cand = r.candidate;
        c.record(ok, (r.candidate_value - 1.0 / 6.0).abs(), || Witness::Asd(cand));
        report.checks.push(c);
        let mut c = Check::new(format!("case {name}: max A = 1/6"), "Appendix D");
        let argmax = r.maximum.argmax;
        c.record((r.maximum.value - 1.0 / 6.0).abs() <= 1e-8, r.maximum.value, || {
            Witness::Asd(argmax)
        });
        report.checks.push(c);
        report.stats.push((format!("case_{name}_max"), r.maximum.value));
        report.stats.push((
            format!("case_{name}_quarter_point_is_max"),
            if cp.is_some_and(|p| p.kind == StationaryKind::Maximum) {
                1.0
            } else {
                0.0
            },
        ));
    }

    for lambda4 in CASE_D_LAMBDA4 {
        let case = TangleCase::D { lambda4 };
        let r = maximize_avg_tangle_case(case, rng)?;
        let expect = 4.0 / 9.0 * (1.0 - lambda4 * lambda4).powi(2);
        let mut c = Check::new(
            format!("case {}: max A = (4/9)(1 - lambda4^2)^2", case.label()),
            "Appendix D",
        );
        let argmax = r.maximum.argmax;
        c.record(
            (r.maximum.value - expect).abs() <= 1e-8,
            (r.maximum.value - expect).abs(),
            || Witness::Asd(argmax),
        );
        report.checks.push(c);
    }

    let mut below = Check::new("case E: sup A < 1/3 at fixed lambda0^2", "Appendix D");
    let mut rising = Check::new("case E: sup A increases as lambda0^2 shrinks", "Appendix D");
    let mut prev: Option<f64> = None;
    for eps in CASE_E_LAMBDA0_SQ {
        let case = TangleCase::E { lambda0_sq: eps };
        let r = maximize_avg_tangle_case(case, rng)?;
        let argmax = r.maximum.argmax;
        below.record(r.maximum.value < 1.0 / 3.0, r.maximum.value, || Witness::Asd(argmax));
        if let Some(p) = prev {
            rising.record(r.maximum.value > p, r.maximum.value - p, || Witness::Asd(argmax));
        }
        prev = Some(r.maximum.value);
        report.stats.push((format!("case_E_{eps:e}_max"), r.maximum.value));
        report
            .stats
            .push((format!("case_E_{eps:e}_equal_family"), r.candidate_value));
        if eps == 1e-2 {
            let mut c = Check::new(
                "case E(lambda0^2 = 1/100): A = 0.3333 on lambda1 = .. = lambda4",
                "Appendix D",
            );
            let cand = r.candidate;
            c.record((r.candidate_value - 0.3333).abs() <= 1e-4, r.candidate_value, || {
                Witness::Asd(cand)
            });
            report.checks.push(c);
        }
    }
    report.checks.push(below);
    report.checks.push(rising);
    report.samples = report.checks.iter().map(|c| c.evaluated).sum();
    Ok(report)
}
