//! Marginal spectra and von Neumann entropies from the one-tangles.

use super::{TangleSet, CLAMP_TOL};
use crate::error::{Error, Result};
use crate::state::Qubit;
use std::f64::consts::LN_2;

/// α above 1/4 by at most this much is treated as round-off and clamped.
pub const ALPHA_INPUT_TOL: f64 = 1e-9;

/// ln 2 − 1/2, the constant in the linear approximation of S(α).
pub const TAYLOR_OFFSET: f64 = LN_2 - 0.5;

/// Marginal determinants α_μ = det ρ_μ = τ_μ(νω)/4 for μ = A, B, C.
pub fn alphas(t: &TangleSet) -> Result<[f64; 3]> {
    let raw = [t.tau_a_bc / 4.0, t.tau_b_ac / 4.0, t.tau_c_ab / 4.0];
    let mut out = [0.0; 3];
    for (o, a) in out.iter_mut().zip(raw) {
        if !a.is_finite() || !(-CLAMP_TOL..=0.25 + ALPHA_INPUT_TOL).contains(&a) {
            return Err(Error::AlphaOutOfRange(a));
        }
        *o = a.clamp(0.0, 0.25);
    }
    Ok(out)
}

/// Eigenvalues (η1, η2) of a qubit marginal with determinant α, η1 ≥ η2.
pub fn eta_pair(alpha: f64) -> Result<(f64, f64)> {
    let a = check_alpha(alpha)?;
    let s = (1.0 - 4.0 * a).max(0.0).sqrt();
    // the small root via the product avoids cancellation in (1 − s)/2
    let eta2 = 2.0 * a / (1.0 + s);
    Ok((1.0 - eta2, eta2))
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || !(-CLAMP_TOL..=0.25 + CLAMP_TOL).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(alpha.clamp(0.0, 0.25))
}

/// S(α) = −η1 ln η1 − η2 ln η2 in nats, with 0·ln 0 = 0.
pub fn entropy_from_alpha(alpha: f64) -> Result<f64> {
    let (_, eta2) = eta_pair(alpha)?;
    if eta2 <= 0.0 {
        return Ok(0.0);
    }
    // ln η1 = ln(1 − η2)
    let s = -(1.0 - eta2) * (-eta2).ln_1p() - eta2 * eta2.ln();
    Ok(s.clamp(0.0, LN_2))
}

/// dS/dα = ln[(1 + s)/(1 − s)] / s with s = √(1 − 4α), on the open interval.
pub fn entropy_derivative(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.25) {
        return Err(Error::DerivativeDomain(alpha));
    }
    let s = (1.0 - 4.0 * alpha).sqrt();
    if s < 1e-4 {
        // 2 atanh(s)/s
        let s2 = s * s;
        return Ok(2.0 * (1.0 + s2 / 3.0 + s2 * s2 / 5.0));
    }
    Ok(2.0 * s.atanh() / s)
}

/// First-order expansion of S about α = 1/4.
pub fn entropy_taylor(alpha: f64) -> f64 {
    TAYLOR_OFFSET + 2.0 * alpha
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropySet {
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub alpha_c: f64,
    /// (η1, η2) for A, B, C.
    pub eta: [(f64, f64); 3],
}

impl EntropySet {
    pub fn from_tangles(t: &TangleSet) -> Result<Self> {
        let [a, b, c] = alphas(t)?;
        Ok(Self {
            s_a: entropy_from_alpha(a)?,
            s_b: entropy_from_alpha(b)?,
            s_c: entropy_from_alpha(c)?,
            alpha_a: a,
            alpha_b: b,
            alpha_c: c,
            eta: [eta_pair(a)?, eta_pair(b)?, eta_pair(c)?],
        })
    }

    pub fn single(&self, q: Qubit) -> f64 {
        match q {
            Qubit::A => self.s_a,
            Qubit::B => self.s_b,
            Qubit::C => self.s_c,
        }
    }

    pub fn alpha(&self, q: Qubit) -> f64 {
        match q {
            Qubit::A => self.alpha_a,
            Qubit::B => self.alpha_b,
            Qubit::C => self.alpha_c,
        }
    }

    /// S(ρ_BC), equal to S(ρ_A) for a pure state.
    pub fn s_bc(&self) -> f64 {
        self.s_a
    }

    /// S(ρ_AC) = S(ρ_B).
    pub fn s_ac(&self) -> f64 {
        self.s_b
    }

    /// S(ρ_AB) = S(ρ_C).
    pub fn s_ab(&self) -> f64 {
        self.s_c
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.s_a, self.s_b, self.s_c]
    }
}

/// m = (S_A + S_B + S_C)/3.
pub fn average_entropy(e: &EntropySet) -> f64 {
    (e.s_a + e.s_b + e.s_c) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn entropy_examples() {
        assert!((entropy_from_alpha(0.25).unwrap() - LN_2).abs() < 1e-15);
        let delta = (3.0 * 3f64.ln() - 2.0 * LN_2) / 3.0;
        assert!((entropy_from_alpha(2.0 / 9.0).unwrap() - delta).abs() < 1e-14);
        assert!((delta - 0.63651).abs() < 5e-6);
        assert_eq!(entropy_from_alpha(0.0).unwrap(), 0.0);
    }

    #[test]
    fn entropy_rejects_out_of_range() {
        assert!(entropy_from_alpha(-1e-6).is_err());
        assert!(entropy_from_alpha(0.25 + 1e-6).is_err());
        assert_eq!(entropy_from_alpha(-1e-13).unwrap(), 0.0);
        assert!((entropy_from_alpha(0.25 + 1e-13).unwrap() - LN_2).abs() < 1e-15);
    }

    #[test]
    fn entropy_is_strictly_increasing_on_grid() {
        let n = 10_000;
        let mut prev = entropy_from_alpha(0.0).unwrap();
        for k in 1..n {
            let s = entropy_from_alpha(0.25 * k as f64 / n as f64).unwrap();
            assert!(s > prev, "not increasing at k = {k}");
            prev = s;
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for &a in &[2.0 / 9.0, 0.05, 0.1, 0.2, 0.24] {
            let fd = (entropy_from_alpha(a + h).unwrap() - entropy_from_alpha(a - h).unwrap()) / (2.0 * h);
            let d = entropy_derivative(a).unwrap();
            assert!(((d - fd) / d).abs() < 1e-6, "alpha {a}: {d} vs {fd}");
        }
    }

    #[test]
    fn derivative_agrees_with_log_form() {
        for &a in &[0.01, 0.1, 2.0 / 9.0] {
            let s = (1.0f64 - 4.0 * a).sqrt();
            let log_form = -(1.0 / s) * ((1.0 - s) / (1.0 + s)).ln();
            assert!((entropy_derivative(a).unwrap() - log_form).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_limit_at_quarter() {
        for k in 4..15 {
            let a = 0.25 - 10f64.powi(-k);
            assert!((entropy_derivative(a).unwrap() - 2.0).abs() < 10.0 * 10f64.powi(-k) + 1e-12);
        }
        assert!(entropy_derivative(0.05).unwrap() > 0.0);
        assert!(entropy_derivative(0.0).is_err());
        assert!(entropy_derivative(0.25).is_err());
    }

    #[test]
    fn taylor_gap_is_largest_at_zero() {
        assert!((entropy_taylor(0.25) - LN_2).abs() < 1e-16);
        assert!((entropy_taylor(0.0) - 0.19315).abs() < 5e-6);
        let mut worst = (0.0, 0.0);
        for k in 0..=100_000 {
            let a = 0.25 * k as f64 / 100_000.0;
            let gap = (entropy_from_alpha(a).unwrap() - entropy_taylor(a)).abs();
            if gap > worst.0 {
                worst = (gap, a);
            }
        }
        assert!((worst.0 - TAYLOR_OFFSET).abs() < 1e-15);
        assert_eq!(worst.1, 0.0);
    }

    #[test]
    fn alphas_clamp_and_reject() {
        let mut t = TangleSet::from_pairwise(0.0, 0.0, 0.0, 1.0);
        assert_eq!(alphas(&t).unwrap(), [0.25; 3]);
        t.tau_a_bc = 1.0 + 2e-9;
        assert!(alphas(&t).is_ok());
        t.tau_a_bc = 1.0 + 8e-9;
        assert!(matches!(alphas(&t), Err(Error::AlphaOutOfRange(_))));
    }

    proptest! {
        #[test]
        fn eta_pair_invariants(a in 0.0f64..=0.25) {
            let (e1, e2) = eta_pair(a).unwrap();
            prop_assert!(e1 >= e2 && e2 >= 0.0);
            prop_assert!((e1 + e2 - 1.0).abs() < 1e-15);
            prop_assert!((e1 * e2 - a).abs() < 1e-12);
            let s = entropy_from_alpha(a).unwrap();
            prop_assert!((0.0..=LN_2).contains(&s));
        }

        #[test]
        fn entropy_lies_between_two_alpha_and_taylor(a in 0.0f64..=0.25) {
            let s = entropy_from_alpha(a).unwrap();
            prop_assert!(s >= 2.0 * a - 1e-15);
            prop_assert!(s <= entropy_taylor(a) + 1e-15);
        }
    }
}
