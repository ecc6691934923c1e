//! Polynomial formulas for the tangles of a pure three-qubit state and the
//! quantities derived from them.

mod entropy;

pub use entropy::{
    alphas, average_entropy, entropy_derivative, entropy_from_alpha, entropy_taylor, eta_pair, EntropySet,
    ALPHA_INPUT_TOL, TAYLOR_OFFSET,
};

use crate::error::{Error, Result};
use crate::state::{Amplitudes, AsdParams, Qubit};
use num_complex::Complex64;

/// Round-off band clamped back into the valid range of a measure.
pub const CLAMP_TOL: f64 = 1e-12;
/// Two tangles closer than this are considered equal.
pub const TANGLE_TIE_TOL: f64 = 1e-12;
/// Two entropies closer than this are considered equal.
pub const ENTROPY_TIE_TOL: f64 = 1e-10;
/// Maximum disagreement between the Schmidt-form and general paths.
pub const PATH_TOL: f64 = 1e-10;

fn clamp_unit(x: f64) -> f64 {
    if (-CLAMP_TOL..0.0).contains(&x) {
        0.0
    } else if x > 1.0 && x <= 1.0 + CLAMP_TOL {
        1.0
    } else {
        x
    }
}

/// Θ, a quarter of the 3-tangle, written out in the amplitudes.
pub fn theta(s: &Amplitudes) -> f64 {
    let c = s.coeffs();
    let p = c[0] * c[7] - c[2] * c[5];
    let q = c[1] * c[6] - c[3] * c[4];
    let v = p * p + q * q - 2.0 * (c[0] * c[7] + c[2] * c[5]) * (c[1] * c[6] + c[3] * c[4])
        + 4.0 * c[0] * c[3] * c[5] * c[6]
        + 4.0 * c[1] * c[2] * c[4] * c[7];
    v.norm()
}

/// Coffman–Kundu–Wootters 3-tangle.
pub fn three_tangle(s: &Amplitudes) -> f64 {
    let c = s.coeffs();
    let d1 = c[0] * c[7] - c[2] * c[5] - c[1] * c[6] + c[3] * c[4];
    let d2 = (c[0] * c[3] - c[1] * c[2]) * (c[4] * c[7] - c[5] * c[6]);
    4.0 * (d1 * d1 - 4.0 * d2).norm()
}

fn n2(z: Complex64) -> f64 {
    z.norm_sqr()
}

// Shared shape of Δ, Φ, Ψ. The index tuple is the relabelling that maps the
// AB case onto the other two pairs.
fn pair_poly(c: &[Complex64; 8], i: [usize; 8]) -> f64 {
    let [a0, a1, a2, a3, a4, a5, a6, a7] = i.map(|k| c[k]);
    2.0 * (n2(a0) + n2(a1)) * (n2(a6) + n2(a7))
        + 2.0 * (n2(a2) + n2(a3)) * (n2(a4) + n2(a5))
        + 2.0 * n2(a0 * a6.conj() + a1 * a7.conj())
        + 2.0 * n2(a2 * a4.conj() + a3 * a5.conj())
        - 4.0 * ((a0 * a2.conj() + a1 * a3.conj()) * (a6 * a4.conj() + a7 * a5.conj())).re
        - 4.0 * ((a0 * a4.conj() + a1 * a5.conj()) * (a6 * a2.conj() + a7 * a3.conj())).re
}

/// Δ = tr(ρ_AB ρ̄_AB).
pub fn delta(s: &Amplitudes) -> f64 {
    pair_poly(s.coeffs(), [0, 1, 2, 3, 4, 5, 6, 7])
}

/// Φ = tr(ρ_AC ρ̄_AC).
pub fn phi_poly(s: &Amplitudes) -> f64 {
    pair_poly(s.coeffs(), [0, 2, 1, 3, 4, 6, 5, 7])
}

/// Ψ = tr(ρ_BC ρ̄_BC).
pub fn psi_poly(s: &Amplitudes) -> f64 {
    pair_poly(s.coeffs(), [0, 4, 1, 5, 2, 6, 3, 7])
}

/// Pairwise tangles, 3-tangle and the one-tangles τ_μ(νω) = 4 det ρ_μ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangleSet {
    pub tau_ab: f64,
    pub tau_ac: f64,
    pub tau_bc: f64,
    pub tau_abc: f64,
    pub tau_a_bc: f64,
    pub tau_b_ac: f64,
    pub tau_c_ab: f64,
}

impl TangleSet {
    /// Fills the one-tangles from τ_AB + τ_AC + τ_ABC = τ_A(BC) and its
    /// cyclic versions.
    pub fn from_pairwise(tau_ab: f64, tau_ac: f64, tau_bc: f64, tau_abc: f64) -> Self {
        Self {
            tau_ab,
            tau_ac,
            tau_bc,
            tau_abc,
            tau_a_bc: tau_ab + tau_ac + tau_abc,
            tau_b_ac: tau_ab + tau_bc + tau_abc,
            tau_c_ab: tau_ac + tau_bc + tau_abc,
        }
    }

    pub fn pairwise(&self) -> [f64; 3] {
        [self.tau_ab, self.tau_ac, self.tau_bc]
    }

    /// Tangle of the pair left after tracing out `traced`.
    pub fn pair(&self, traced: Qubit) -> f64 {
        match traced {
            Qubit::C => self.tau_ab,
            Qubit::B => self.tau_ac,
            Qubit::A => self.tau_bc,
        }
    }

    pub fn one_tangle(&self, q: Qubit) -> f64 {
        match q {
            Qubit::A => self.tau_a_bc,
            Qubit::B => self.tau_b_ac,
            Qubit::C => self.tau_c_ab,
        }
    }

    /// Field-wise maximum absolute difference with its name.
    pub fn max_diff(&self, other: &Self) -> (&'static str, f64) {
        let pairs = [
            ("tau_ab", self.tau_ab, other.tau_ab),
            ("tau_ac", self.tau_ac, other.tau_ac),
            ("tau_bc", self.tau_bc, other.tau_bc),
            ("tau_abc", self.tau_abc, other.tau_abc),
            ("tau_a_bc", self.tau_a_bc, other.tau_a_bc),
            ("tau_b_ac", self.tau_b_ac, other.tau_b_ac),
            ("tau_c_ab", self.tau_c_ab, other.tau_c_ab),
        ];
        pairs
            .into_iter()
            .map(|(n, a, b)| (n, (a - b).abs()))
            .fold(("tau_ab", 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }
}

pub fn tangles_closed_form(s: &Amplitudes) -> TangleSet {
    let t = clamp_unit(three_tangle(s));
    TangleSet::from_pairwise(
        clamp_unit(delta(s) - t / 2.0),
        clamp_unit(phi_poly(s) - t / 2.0),
        clamp_unit(psi_poly(s) - t / 2.0),
        t,
    )
}

/// J1..J4 of the Schmidt form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantSet {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub j4: f64,
}

impl InvariantSet {
    pub fn as_array(&self) -> [f64; 4] {
        [self.j1, self.j2, self.j3, self.j4]
    }
}

/// J1 = |λ1λ4e^{iφ} − λ2λ3|², J_i = (λ0λ_i)² for i = 2, 3, 4.
pub fn invariants_asd(p: &AsdParams) -> InvariantSet {
    let l = p.lambda();
    let z = Complex64::from_polar(l[1] * l[4], p.phi()) - l[2] * l[3];
    InvariantSet {
        j1: z.norm_sqr(),
        j2: (l[0] * l[2]).powi(2),
        j3: (l[0] * l[3]).powi(2),
        j4: (l[0] * l[4]).powi(2),
    }
}

pub fn tangles_asd(p: &AsdParams) -> TangleSet {
    let j = invariants_asd(p);
    TangleSet::from_pairwise(4.0 * j.j3, 4.0 * j.j2, 4.0 * j.j1, 4.0 * j.j4)
}

/// A = (τ_AB + τ_AC + τ_BC)/3.
pub fn average_tangle(t: &TangleSet) -> f64 {
    (t.tau_ab + t.tau_ac + t.tau_bc) / 3.0
}

pub fn entropy_set(s: &Amplitudes) -> Result<EntropySet> {
    EntropySet::from_tangles(&tangles_closed_form(s))
}

/// m − A − τ_ABC/2 − (ln 2 − 1/2).
pub fn relation_residual(s: &Amplitudes) -> Result<f64> {
    let t = tangles_closed_form(s);
    let e = EntropySet::from_tangles(&t)?;
    Ok(residual_of(&t, &e))
}

fn residual_of(t: &TangleSet, e: &EntropySet) -> f64 {
    average_entropy(e) - average_tangle(t) - t.tau_abc / 2.0 - TAYLOR_OFFSET
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Concurrences {
    pub c_ab: f64,
    pub c_ac: f64,
    pub c_bc: f64,
}

impl Concurrences {
    pub fn from_tangles(t: &TangleSet) -> Self {
        Self {
            c_ab: t.tau_ab.max(0.0).sqrt(),
            c_ac: t.tau_ac.max(0.0).sqrt(),
            c_bc: t.tau_bc.max(0.0).sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub tangles: TangleSet,
    /// Present only when the state was given in Schmidt form.
    pub invariants: Option<InvariantSet>,
    pub entropies: EntropySet,
    pub concurrences: Concurrences,
    pub avg_tangle: f64,
    pub avg_entropy: f64,
    pub relation_residual: f64,
}

impl MeasureReport {
    pub fn from_parts(tangles: TangleSet, entropies: EntropySet) -> Self {
        Self {
            tangles,
            invariants: None,
            entropies,
            concurrences: Concurrences::from_tangles(&tangles),
            avg_tangle: average_tangle(&tangles),
            avg_entropy: average_entropy(&entropies),
            relation_residual: residual_of(&tangles, &entropies),
        }
    }

    /// Named scalar fields, in a fixed order, for comparisons and output.
    pub fn fields(&self) -> Vec<(&'static str, f64)> {
        let t = &self.tangles;
        let e = &self.entropies;
        let c = &self.concurrences;
        vec![
            ("tau_ab", t.tau_ab),
            ("tau_ac", t.tau_ac),
            ("tau_bc", t.tau_bc),
            ("tau_abc", t.tau_abc),
            ("tau_a_bc", t.tau_a_bc),
            ("tau_b_ac", t.tau_b_ac),
            ("tau_c_ab", t.tau_c_ab),
            ("alpha_a", e.alpha_a),
            ("alpha_b", e.alpha_b),
            ("alpha_c", e.alpha_c),
            ("s_a", e.s_a),
            ("s_b", e.s_b),
            ("s_c", e.s_c),
            ("c_ab", c.c_ab),
            ("c_ac", c.c_ac),
            ("c_bc", c.c_bc),
            ("avg_tangle", self.avg_tangle),
            ("avg_entropy", self.avg_entropy),
            ("relation_residual", self.relation_residual),
        ]
    }

    /// Largest field-wise disagreement with another report. Concurrences are
    /// skipped: the square root turns a 1e-16 tangle into a 1e-8 concurrence,
    /// so agreement is judged on the tangles they are derived from.
    pub fn max_diff(&self, other: &Self) -> (&'static str, f64) {
        self.fields()
            .into_iter()
            .zip(other.fields())
            .filter(|((n, _), _)| !n.starts_with("c_"))
            .map(|((n, a), (_, b))| (n, (a - b).abs()))
            .fold(
                ("tau_ab", 0.0),
                |acc, x| if x.1 > acc.1 || x.1.is_nan() { x } else { acc },
            )
    }
}

pub fn measure_report(s: &Amplitudes) -> Result<MeasureReport> {
    let t = tangles_closed_form(s);
    Ok(MeasureReport::from_parts(t, EntropySet::from_tangles(&t)?))
}

/// Report from the Schmidt-form shortcuts, checked against the general
/// amplitude path.
pub fn measure_report_asd(p: &AsdParams) -> Result<MeasureReport> {
    let t = tangles_asd(p);
    let mut fast = MeasureReport::from_parts(t, EntropySet::from_tangles(&t)?);
    let general = measure_report(&p.to_amplitudes())?;
    let (field, diff) = fast.max_diff(&general);
    if !(diff <= PATH_TOL) {
        return Err(Error::PathMismatch { field, diff });
    }
    fast.invariants = Some(invariants_asd(p));
    Ok(fast)
}
