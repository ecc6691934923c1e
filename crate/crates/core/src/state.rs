//! Pure three-qubit states: general amplitudes, the five-parameter Schmidt
//! form, local unitaries, density matrices and partial traces.
//!
//! Qubit A is the most significant bit of the basis index, so the amplitude
//! of |abc⟩ sits at index `4a + 2b + c`.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMat};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::Index;

/// Accepted deviation of Σ|c_i|² (or Σλ_i²) from 1.
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance for Hermiticity, trace, positivity and unitarity checks.
pub const MAT_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    /// Bit position inside the three-qubit basis index.
    pub fn bit(self) -> usize {
        match self {
            Qubit::A => 2,
            Qubit::B => 1,
            Qubit::C => 0,
        }
    }

    pub fn label(self) -> char {
        match self {
            Qubit::A => 'A',
            Qubit::B => 'B',
            Qubit::C => 'C',
        }
    }
}

/// Normalized amplitudes c0..c7 of a pure three-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitudes {
    c: [Complex64; 8],
}

fn norm_sqr(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum()
}

impl Amplitudes {
    /// Accepts amplitudes whose squared norm is within [`NORM_TOL`] of 1.
    /// Nothing is rescaled; use [`Amplitudes::normalize`] for that.
    pub fn new(c: [Complex64; 8]) -> Result<Self> {
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("amplitudes"));
        }
        let n = norm_sqr(&c);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq: n,
                tol: NORM_TOL,
            });
        }
        Ok(Self { c })
    }

    /// Rescales a non-zero vector to unit norm.
    pub fn normalize(raw: [Complex64; 8]) -> Result<Self> {
        if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("amplitudes"));
        }
        let n = norm_sqr(&raw).sqrt();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { c: raw.map(|z| z / n) })
    }

    /// Computational basis state |i⟩.
    pub fn basis(index: usize) -> Self {
        let mut c = [ZERO; 8];
        c[index] = Complex64::new(1.0, 0.0);
        Self { c }
    }

    pub fn coeffs(&self) -> &[Complex64; 8] {
        &self.c
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.c)
    }
}

impl Index<usize> for Amplitudes {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.c[i]
    }
}

/// λ0|000⟩ + λ1 e^{iφ}|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩ with λ_i ≥ 0,
/// Σλ_i² = 1 and φ ∈ [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsdParams {
    lambda: [f64; 5],
    phi: f64,
}

impl AsdParams {
    /// Validates the magnitudes and reduces φ modulo 2π.
    pub fn new(lambda: [f64; 5], phi: f64) -> Result<Self> {
        if lambda.iter().any(|x| !x.is_finite()) || !phi.is_finite() {
            return Err(Error::NonFinite("ASD parameters"));
        }
        if let Some((index, &value)) = lambda.iter().enumerate().find(|(_, &x)| x < 0.0) {
            return Err(Error::NegativeLambda { index, value });
        }
        let n: f64 = lambda.iter().map(|x| x * x).sum();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sq: n,
                tol: NORM_TOL,
            });
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self {
            lambda: lambda.map(|x| x + 0.0), // drop negative zero
            phi,
        })
    }

    /// Rescales non-negative magnitudes to unit norm.
    pub fn normalized(lambda: [f64; 5], phi: f64) -> Result<Self> {
        let n = lambda.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Self::new(lambda.map(|x| x / n), phi)
    }

    pub fn lambda(&self) -> &[f64; 5] {
        &self.lambda
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Amplitudes with c0 = λ0, c4 = λ1 e^{iφ}, c5 = λ2, c6 = λ3, c7 = λ4.
    pub fn to_amplitudes(&self) -> Amplitudes {
        let l = &self.lambda;
        let mut c = [ZERO; 8];
        c[0] = l[0].into();
        c[4] = Complex64::from_polar(l[1], self.phi);
        c[5] = l[2].into();
        c[6] = l[3].into();
        c[7] = l[4].into();
        Amplitudes { c }
    }
}

impl fmt::Display for AsdParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.lambda;
        write!(
            f,
            "lambda = ({:.6}, {:.6}, {:.6}, {:.6}, {:.6}), phi = {:.6}",
            l[0], l[1], l[2], l[3], l[4], self.phi
        )
    }
}

/// u_a ⊗ u_b ⊗ u_c with each factor a 2×2 unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalUnitary {
    factors: [CMat; 3],
}

impl LocalUnitary {
    pub fn new(u_a: CMat, u_b: CMat, u_c: CMat) -> Result<Self> {
        for (u, label) in [(&u_a, 'A'), (&u_b, 'B'), (&u_c, 'C')] {
            if u.dim() != 2 {
                return Err(Error::NonUnitary {
                    factor: label,
                    defect: f64::INFINITY,
                });
            }
            let defect = u.unitarity_defect();
            if defect.is_nan() || defect > MAT_TOL {
                return Err(Error::NonUnitary { factor: label, defect });
            }
        }
        Ok(Self {
            factors: [u_a, u_b, u_c],
        })
    }

    pub fn identity() -> Self {
        Self {
            factors: [CMat::identity(2), CMat::identity(2), CMat::identity(2)],
        }
    }

    pub fn factor(&self, q: Qubit) -> &CMat {
        &self.factors[2 - q.bit()]
    }

    /// The full 8×8 operator.
    pub fn matrix(&self) -> CMat {
        self.factors[0].kron(&self.factors[1]).kron(&self.factors[2])
    }
}

/// (u_a ⊗ u_b ⊗ u_c)|ψ⟩
pub fn apply_local_unitary(s: &Amplitudes, u: &LocalUnitary) -> Amplitudes {
    let v = u.matrix().mul_vec(s.coeffs());
    let mut c = [ZERO; 8];
    c.copy_from_slice(&v);
    Amplitudes { c }
}

/// Density operator on an ordered set of qubits (A before B before C).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    qubits: Vec<Qubit>,
    mat: CMat,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity within [`MAT_TOL`].
    pub fn new(qubits: Vec<Qubit>, mat: CMat) -> Result<Self> {
        let mut sorted = qubits.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != qubits.len() || qubits.is_empty() || sorted != qubits {
            return Err(Error::InvalidDensityMatrix(format!(
                "qubit labels must be distinct and ordered, got {qubits:?}"
            )));
        }
        if mat.dim() != 1 << qubits.len() {
            return Err(Error::InvalidDensityMatrix(format!(
                "dimension {} does not match {} qubits",
                mat.dim(),
                qubits.len()
            )));
        }
        let herm = mat.hermiticity_defect();
        if herm.is_nan() || herm > MAT_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > MAT_TOL || tr.im.abs() > MAT_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not 1")));
        }
        let min_ev = hermitian_eigenvalues(&mat).last().copied().unwrap_or(0.0);
        if min_ev < -MAT_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_ev:e}")));
        }
        Ok(Self { qubits, mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Reduced operator on `keep`, which must be a non-empty proper subset of
    /// the qubits this operator lives on.
    pub fn partial_trace(&self, keep: &[Qubit]) -> Result<DensityMatrix> {
        let mut keep = keep.to_vec();
        keep.sort();
        keep.dedup();
        if keep.is_empty() || keep.len() >= self.qubits.len() {
            return Err(Error::InvalidKeep(keep.len()));
        }
        if keep.iter().any(|q| !self.qubits.contains(q)) {
            return Err(Error::InvalidDensityMatrix(format!(
                "cannot keep {keep:?} from a state on {:?}",
                self.qubits
            )));
        }
        let nq = self.qubits.len();
        // local bit position of each qubit: first listed is most significant
        let pos = |q: Qubit| nq - 1 - self.qubits.iter().position(|&x| x == q).expect("present");
        let kept: Vec<usize> = keep.iter().map(|&q| pos(q)).collect();
        let traced: Vec<usize> = self
            .qubits
            .iter()
            .filter(|q| !keep.contains(q))
            .map(|&q| pos(q))
            .collect();
        let compose = |sub: usize, bits: &[usize]| -> usize {
            bits.iter()
                .enumerate()
                .map(|(k, &b)| ((sub >> (bits.len() - 1 - k)) & 1) << b)
                .sum()
        };
        let dk = 1 << kept.len();
        let dt = 1 << traced.len();
        let mut out = CMat::zeros(dk);
        for i in 0..dk {
            for j in 0..dk {
                let (bi, bj) = (compose(i, &kept), compose(j, &kept));
                let mut s = ZERO;
                for t in 0..dt {
                    let bt = compose(t, &traced);
                    s += self.mat[(bi | bt, bj | bt)];
                }
                out[(i, j)] = s;
            }
        }
        Ok(DensityMatrix { qubits: keep, mat: out })
    }

    /// Single-qubit marginal shortcut.
    pub fn marginal(&self, q: Qubit) -> Result<DensityMatrix> {
        self.partial_trace(&[q])
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }
}

/// |ψ⟩⟨ψ| on qubits A, B, C.
pub fn density_matrix(s: &Amplitudes) -> DensityMatrix {
    DensityMatrix {
        qubits: Qubit::ALL.to_vec(),
        mat: CMat::outer(s.coeffs()),
    }
}

/// Single-qubit marginal of a pure state, read directly off the amplitudes.
pub fn reduced_single(s: &Amplitudes, q: Qubit) -> DensityMatrix {
    density_matrix(s)
        .partial_trace(&[q])
        .expect("single qubit keep set is valid")
}

/// Two-qubit marginal of a pure state on the complement of `traced`.
pub fn reduced_pair(s: &Amplitudes, traced: Qubit) -> DensityMatrix {
    let keep: Vec<Qubit> = Qubit::ALL.into_iter().filter(|&q| q != traced).collect();
    density_matrix(s)
        .partial_trace(&keep)
        .expect("two-qubit keep set is valid")
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: a normalized vector of eight complex Gaussians.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> Amplitudes {
    loop {
        let raw: [Complex64; 8] = std::array::from_fn(|_| complex_gaussian(rng));
        if let Ok(s) = Amplitudes::normalize(raw) {
            return s;
        }
    }
}

/// Random Schmidt-form parameters: |Gaussian| magnitudes rescaled to unit
/// norm, φ uniform on [0, 2π).
pub fn random_asd<R: Rng + ?Sized>(rng: &mut R) -> AsdParams {
    loop {
        let lambda: [f64; 5] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal).abs());
        let phi = rng.random_range(0.0..TAU);
        if let Ok(p) = AsdParams::normalized(lambda, phi) {
            return p;
        }
    }
}

/// Haar-random 2×2 unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn random_unitary_2<R: Rng + ?Sized>(rng: &mut R) -> CMat {
    loop {
        let z1 = [complex_gaussian(rng), complex_gaussian(rng)];
        let z2 = [complex_gaussian(rng), complex_gaussian(rng)];
        let n1 = norm_sqr(&z1).sqrt();
        if n1 == 0.0 {
            continue;
        }
        let q1 = z1.map(|z| z / n1);
        let proj = q1[0].conj() * z2[0] + q1[1].conj() * z2[1];
        let w = [z2[0] - proj * q1[0], z2[1] - proj * q1[1]];
        let n2 = norm_sqr(&w).sqrt();
        if n2 < 1e-12 {
            continue;
        }
        let q2 = w.map(|z| z / n2);
        return CMat::from_rows(2, vec![q1[0], q2[0], q1[1], q2[1]]);
    }
}

pub fn random_local_unitary<R: Rng + ?Sized>(rng: &mut R) -> LocalUnitary {
    LocalUnitary {
        factors: [random_unitary_2(rng), random_unitary_2(rng), random_unitary_2(rng)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ghz() -> Amplitudes {
        AsdParams::new([FRAC_1_SQRT_2, 0.0, 0.0, 0.0, FRAC_1_SQRT_2], 0.0)
            .unwrap()
            .to_amplitudes()
    }

    #[test]
    fn asd_ghz_amplitudes() {
        let s = ghz();
        assert_eq!(s[0], c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(s[7], c(FRAC_1_SQRT_2, 0.0));
        for i in 1..7 {
            assert_eq!(s[i], c(0.0, 0.0));
        }
    }

    #[test]
    fn asd_product_and_w() {
        let s = AsdParams::new([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap().to_amplitudes();
        assert_eq!(s, Amplitudes::basis(0));
        let t = 1.0 / 3f64.sqrt();
        let w = AsdParams::new([t, 0.0, t, t, 0.0], 0.0).unwrap().to_amplitudes();
        for (i, z) in w.coeffs().iter().enumerate() {
            let want = if matches!(i, 0 | 5 | 6) { t } else { 0.0 };
            assert_eq!(*z, c(want, 0.0));
        }
    }

    #[test]
    fn asd_rejects_bad_input() {
        assert!(matches!(
            AsdParams::new([0.9, 0.0, 0.0, 0.0, 0.0], 0.0),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            AsdParams::new([-1.0, 0.0, 0.0, 0.0, 0.0], 0.0),
            Err(Error::NegativeLambda { index: 0, .. })
        ));
    }

    #[test]
    fn phi_is_reduced_mod_two_pi() {
        let p = AsdParams::new([0.6, 0.8, 0.0, 0.0, 0.0], -1.0).unwrap();
        assert!((p.phi() - (TAU - 1.0)).abs() < 1e-15);
        let p = AsdParams::new([0.6, 0.8, 0.0, 0.0, 0.0], TAU).unwrap();
        assert_eq!(p.phi(), 0.0);
    }

    #[test]
    fn normalize_examples() {
        let mut raw = [c(0.0, 0.0); 8];
        raw[0] = c(2.0, 0.0);
        assert_eq!(Amplitudes::normalize(raw).unwrap(), Amplitudes::basis(0));

        raw[7] = c(2.0, 0.0);
        let s = Amplitudes::normalize(raw).unwrap();
        assert!((s[0].re - FRAC_1_SQRT_2).abs() < 1e-15 && (s[7].re - FRAC_1_SQRT_2).abs() < 1e-15);

        let mut raw = [c(0.0, 0.0); 8];
        raw[0] = c(1.0, 1.0);
        let s = Amplitudes::normalize(raw).unwrap();
        assert!((s[0] - c(FRAC_1_SQRT_2, FRAC_1_SQRT_2)).norm() < 1e-15);

        assert_eq!(Amplitudes::normalize([c(0.0, 0.0); 8]), Err(Error::ZeroVector));
    }

    #[test]
    fn unnormalized_amplitudes_rejected() {
        let mut raw = [c(0.0, 0.0); 8];
        raw[3] = c(1.1, 0.0);
        assert!(matches!(Amplitudes::new(raw), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn local_unitary_examples() {
        let s = ghz();
        assert_eq!(apply_local_unitary(&s, &LocalUnitary::identity()), s);

        let x = CMat::from_rows(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let u = LocalUnitary::new(CMat::identity(2), CMat::identity(2), x).unwrap();
        assert_eq!(apply_local_unitary(&Amplitudes::basis(0), &u), Amplitudes::basis(1));
    }

    #[test]
    fn non_unitary_factor_rejected() {
        let m = CMat::from_rows(2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let err = LocalUnitary::new(CMat::identity(2), m, CMat::identity(2)).unwrap_err();
        assert!(matches!(err, Error::NonUnitary { factor: 'B', .. }));
    }

    #[test]
    fn density_matrix_examples() {
        let rho = density_matrix(&Amplitudes::basis(0));
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert_eq!(rho.matrix()[(i, j)], c(want, 0.0));
            }
        }
        let rho = density_matrix(&ghz());
        for (i, j) in [(0, 0), (0, 7), (7, 0), (7, 7)] {
            assert!((rho.matrix()[(i, j)].re - 0.5).abs() < 1e-15);
        }
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_examples() {
        let a = density_matrix(&ghz()).partial_trace(&[Qubit::A]).unwrap();
        assert!((a.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((a.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert_eq!(a.matrix()[(0, 1)], c(0.0, 0.0));

        let bc = density_matrix(&Amplitudes::basis(0))
            .partial_trace(&[Qubit::B, Qubit::C])
            .unwrap();
        assert_eq!(bc.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(bc.matrix().max_abs(), 1.0);

        let t = 1.0 / 3f64.sqrt();
        let w = AsdParams::new([t, 0.0, t, t, 0.0], 0.0).unwrap().to_amplitudes();
        let ra = density_matrix(&w).partial_trace(&[Qubit::A]).unwrap();
        let det = ra.matrix().det().re;
        assert!((det - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_empty_and_full() {
        let rho = density_matrix(&ghz());
        assert_eq!(rho.partial_trace(&[]), Err(Error::InvalidKeep(0)));
        assert_eq!(rho.partial_trace(&Qubit::ALL), Err(Error::InvalidKeep(3)));
    }

    #[test]
    fn partial_trace_keeps_bit_order() {
        // |011⟩: A=0, B=1, C=1; keep {A, C} gives |01⟩
        let rho = density_matrix(&Amplitudes::basis(3));
        let ac = rho.partial_trace(&[Qubit::C, Qubit::A]).unwrap();
        assert_eq!(ac.qubits(), &[Qubit::A, Qubit::C]);
        assert_eq!(ac.matrix()[(1, 1)], c(1.0, 0.0));
    }

    #[test]
    fn density_matrix_validation() {
        let bad = CMat::from_rows(2, vec![c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.6, 0.0)]);
        assert!(DensityMatrix::new(vec![Qubit::A], bad).is_err());
        let neg = CMat::from_rows(2, vec![c(1.2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.2, 0.0)]);
        assert!(DensityMatrix::new(vec![Qubit::A], neg).is_err());
        let ok = CMat::from_rows(2, vec![c(0.5, 0.0), c(0.0, 0.1), c(0.0, -0.1), c(0.5, 0.0)]);
        assert!(DensityMatrix::new(vec![Qubit::B], ok).is_ok());
    }

    #[test]
    fn random_sources_are_deterministic_and_valid() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (a, b) = (random_state(&mut r1), random_state(&mut r2));
            assert_eq!(a, b);
            assert!((a.norm_sqr() - 1.0).abs() < 1e-14);
            let (p, q) = (random_asd(&mut r1), random_asd(&mut r2));
            assert_eq!(p, q);
            let u = random_local_unitary(&mut r1);
            let _ = random_local_unitary(&mut r2);
            for q in Qubit::ALL {
                assert!(u.factor(q).unitarity_defect() <= 1e-12);
            }
        }
    }
}
