//! Brute-force measures built straight from density matrices, independent of
//! the polynomial formulas. Used as ground truth in the equivalence tests.

use crate::closed_form::{EntropySet, MeasureReport, TangleSet};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, poly, CMat};
use crate::state::{density_matrix, Amplitudes, DensityMatrix, Qubit};
use num_complex::Complex64;

/// Largest imaginary part of an eigenvalue of ρρ̄ that is dropped silently.
pub const IMAG_TOL: f64 = 1e-8;
/// Most negative eigenvalue of ρρ̄ that is clamped to zero.
pub const NEG_TOL: f64 = 1e-9;

/// Pauli σ_y with rows ((0, −i), (i, 0)).
pub fn sigma_y() -> CMat {
    let i = Complex64::new(0.0, 1.0);
    CMat::from_rows(2, vec![0.0.into(), -i, i, 0.0.into()])
}

/// σ_y ⊗ σ_y
pub fn sigma_yy() -> CMat {
    let y = sigma_y();
    y.kron(&y)
}

/// (σ_y⊗σ_y) m* (σ_y⊗σ_y) for any 4×4 matrix.
pub fn flip_conj(m: &CMat) -> CMat {
    let yy = sigma_yy();
    &(&yy * &m.conj()) * &yy
}

/// (σ_y⊗σ_y) mᵀ (σ_y⊗σ_y), the transpose variant.
pub fn flip_transpose(m: &CMat) -> CMat {
    let yy = sigma_yy();
    &(&yy * &m.transpose()) * &yy
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinFlippedPair {
    pub rho: DensityMatrix,
    pub rho_bar: CMat,
}

impl SpinFlippedPair {
    pub fn product(&self) -> CMat {
        self.rho.matrix() * &self.rho_bar
    }
}

pub fn spin_flip(rho: &DensityMatrix) -> SpinFlippedPair {
    assert_eq!(rho.dim(), 4, "spin flip is defined on two-qubit operators");
    SpinFlippedPair {
        rho: rho.clone(),
        rho_bar: flip_conj(rho.matrix()),
    }
}

/// η1 ≥ η2 ≥ η3 ≥ η4 ≥ 0, the square roots of the eigenvalues of ρρ̄.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaSpectrum {
    pub eta: [f64; 4],
}

impl EtaSpectrum {
    pub fn tangle(&self) -> f64 {
        let [a, b, c, d] = self.eta;
        (a - b - c - d).max(0.0).powi(2)
    }
}

/// Eigenvalues of ρρ̄ from its characteristic polynomial.
///
/// The coefficients are expanded by Cauchy–Binet over minors of ρ and ρ̄,
/// which keeps the trailing ones at the square of round-off for a rank-two
/// ρ. The quartic is then solved analytically and polished against those
/// coefficients.
pub fn eta_spectrum(pair: &SpinFlippedPair) -> Result<EtaSpectrum> {
    let coeffs = poly::char_poly_of_product(pair.rho.matrix(), &pair.rho_bar);
    spectrum_from_coeffs(&coeffs)
}

/// Same spectrum with the coefficients taken from the Faddeev–LeVerrier
/// trace recursion. Kept as a cross-check; its trailing coefficients carry
/// absolute round-off, which the square roots amplify into errors of order
/// 1e-4 in the small η.
pub fn eta_spectrum_trace_recursion(pair: &SpinFlippedPair) -> Result<EtaSpectrum> {
    spectrum_from_coeffs(&poly::faddeev_leverrier(&pair.product()))
}

fn spectrum_from_coeffs(coeffs: &[Complex64]) -> Result<EtaSpectrum> {
    let roots = poly::roots(coeffs);
    let mut eta = [0.0; 4];
    for (e, z) in eta.iter_mut().zip(&roots) {
        if z.im.abs() > IMAG_TOL {
            return Err(Error::ComplexEigenvalue(z.im));
        }
        if z.re < -NEG_TOL {
            return Err(Error::NegativeEigenvalue(z.re));
        }
        *e = z.re.max(0.0).sqrt();
    }
    eta.sort_by(|a, b| b.total_cmp(a));
    Ok(EtaSpectrum { eta })
}

/// [max(η1 − η2 − η3 − η4, 0)]²
pub fn tangle_oracle(rho: &DensityMatrix) -> Result<f64> {
    Ok(eta_spectrum(&spin_flip(rho))?.tangle())
}

/// −Σ η ln η over the spectrum of ρ, with 0·ln 0 = 0.
pub fn entropy_oracle(rho: &DensityMatrix) -> f64 {
    hermitian_eigenvalues(rho.matrix())
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.ln())
        .sum::<f64>()
        .max(0.0)
}

/// tr[ρ ρ̃] − (τ_pair + τ_ABC/2) with ρ̃ = (σ_y⊗σ_y) ρᵀ (σ_y⊗σ_y).
pub fn williamson_check(rho: &DensityMatrix, tau_pair: f64, tau_abc: f64) -> f64 {
    let tr = (rho.matrix() * &flip_transpose(rho.matrix())).trace().re;
    tr - (tau_pair + tau_abc / 2.0)
}

fn det_real(rho: &DensityMatrix) -> f64 {
    rho.matrix().det().re
}

/// Full report from density matrices only. The 3-tangle comes from
/// τ_ABC = 4 det ρ_A − τ_AB − τ_AC.
pub fn measures_oracle(s: &Amplitudes) -> Result<MeasureReport> {
    let rho = density_matrix(s);
    let pair = |keep: [Qubit; 2]| rho.partial_trace(&keep);
    let rho_ab = pair([Qubit::A, Qubit::B])?;
    let rho_ac = pair([Qubit::A, Qubit::C])?;
    let rho_bc = pair([Qubit::B, Qubit::C])?;
    let singles = [
        rho.partial_trace(&[Qubit::A])?,
        rho.partial_trace(&[Qubit::B])?,
        rho.partial_trace(&[Qubit::C])?,
    ];
    let tau_ab = tangle_oracle(&rho_ab)?;
    let tau_ac = tangle_oracle(&rho_ac)?;
    let tau_bc = tangle_oracle(&rho_bc)?;
    let dets = singles.each_ref().map(det_real);
    let tangles = TangleSet {
        tau_ab,
        tau_ac,
        tau_bc,
        tau_abc: 4.0 * dets[0] - tau_ab - tau_ac,
        tau_a_bc: 4.0 * dets[0],
        tau_b_ac: 4.0 * dets[1],
        tau_c_ab: 4.0 * dets[2],
    };
    let eta = singles.each_ref().map(|r| {
        let ev = hermitian_eigenvalues(r.matrix());
        (ev[0], ev[1])
    });
    let entropies = EntropySet {
        s_a: entropy_oracle(&singles[0]),
        s_b: entropy_oracle(&singles[1]),
        s_c: entropy_oracle(&singles[2]),
        alpha_a: dets[0],
        alpha_b: dets[1],
        alpha_c: dets[2],
        eta,
    };
    Ok(MeasureReport::from_parts(tangles, entropies))
}
