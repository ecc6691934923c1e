//! Characteristic polynomials and polynomial roots for low degrees.
//!
//! Coefficient vectors are stored highest degree first and are monic unless
//! stated otherwise: `[1, a1, .., an]` is `X^n + a1 X^(n-1) + .. + an`.

use super::cmat::{subsets, CMat};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Iteration cap for the simultaneous root polish.
pub const POLISH_MAX_ITER: usize = 200;

/// det(X·I − A) by the Faddeev–LeVerrier trace recursion.
pub fn faddeev_leverrier(a: &CMat) -> Vec<Complex64> {
    let n = a.dim();
    let mut coeffs = vec![ONE];
    let mut m = CMat::zeros(n);
    let ident = CMat::identity(n);
    for k in 1..=n {
        let prev = *coeffs.last().expect("non-empty");
        m = (a * &m).add(&ident.scale(prev));
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

/// det(X·I − A·B) with every coefficient expanded by Cauchy–Binet into
/// products of minors of the two factors:
/// `e_k(AB) = Σ_{|S|=|T|=k} det A[S,T] · det B[T,S]`.
///
/// When one factor is numerically rank-deficient its large minors are at
/// round-off scale, so the trailing coefficients come out at the square of
/// round-off instead of at round-off as the trace recursion gives.
pub fn char_poly_of_product(a: &CMat, b: &CMat) -> Vec<Complex64> {
    let n = a.dim();
    assert_eq!(n, b.dim());
    let mut coeffs = vec![ONE];
    for k in 1..=n {
        let sets = subsets(n, k);
        let minors_a: Vec<Vec<Complex64>> = sets
            .iter()
            .map(|s| sets.iter().map(|t| a.submatrix(s, t).det()).collect())
            .collect();
        let mut e = ZERO;
        for (i, s) in sets.iter().enumerate() {
            for (j, t) in sets.iter().enumerate() {
                let ma = minors_a[i][j];
                if ma == ZERO {
                    continue;
                }
                e += ma * b.submatrix(t, s).det();
            }
        }
        coeffs.push(if k % 2 == 1 { -e } else { e });
    }
    coeffs
}

/// Horner evaluation of p and p'.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Both roots of a·x² + b·x + c, cancellation-free.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    // align the square root with b so that b + disc does not cancel
    let sd = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q = -(b + sd) * 0.5;
    if q == ZERO {
        return [ZERO, ZERO];
    }
    [q / a, c / q]
}

/// Roots of the monic cubic x³ + a x² + b x + c (Cardano).
pub fn cubic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c;
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    if u3.norm() < (-q / 2.0 - disc).norm() {
        u3 = -q / 2.0 - disc;
    }
    let u = u3.powf(1.0 / 3.0);
    let mut roots = [ZERO; 3];
    let mut w = ONE;
    for r in roots.iter_mut() {
        let uk = u * w;
        let t = if uk == ZERO { ZERO } else { uk - p / (uk * 3.0) };
        *r = t - shift;
        w *= omega;
    }
    roots
}

/// Roots of the monic quartic x⁴ + a x³ + b x² + c x + d by Ferrari's
/// resolvent cubic.
pub fn quartic_roots(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 4] {
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - a2 * (3.0 / 8.0);
    let q = c - a * b / 2.0 + a2 * a / 8.0;
    let r = d - a * c / 4.0 + a2 * b / 16.0 - a2 * a2 * (3.0 / 256.0);
    let scale = 1.0 + p.norm() + r.norm().sqrt();
    let ys: [Complex64; 4] = if q.norm() <= 1e-14 * scale * scale.sqrt() {
        // biquadratic in y²
        let [z1, z2] = quadratic_roots(ONE, p, r);
        let (s1, s2) = (z1.sqrt(), z2.sqrt());
        [s1, -s1, s2, -s2]
    } else {
        // 8m³ + 8p m² + (2p² − 8r) m − q² = 0, monic form
        let ms = cubic_roots(p, p * p / 4.0 - r, -q * q / 8.0);
        let m = ms
            .into_iter()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("three roots");
        let s = (m * 2.0).sqrt();
        let k = q / (s * 2.0);
        let [y1, y2] = quadratic_roots(ONE, -s, p / 2.0 + m + k);
        let [y3, y4] = quadratic_roots(ONE, s, p / 2.0 + m - k);
        [y1, y2, y3, y4]
    };
    ys.map(|y| y - shift)
}

/// All roots of a polynomial of degree ≤ 4 (leading coefficient non-zero).
///
/// Exact zero roots are split off first; the remaining roots are seeded by
/// the closed-form solvers and then polished simultaneously (Aberth–Ehrlich)
/// against the original coefficients, which keeps clustered and tiny roots
/// accurate relative to their own size.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    assert!(
        !coeffs.is_empty() && coeffs[0] != ZERO,
        "leading coefficient must be non-zero"
    );
    assert!(coeffs.len() <= 5, "degree above 4 not supported");
    let lead = coeffs[0];
    let mut monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
    let mut out = Vec::with_capacity(monic.len() - 1);
    while monic.len() > 1 && *monic.last().expect("non-empty") == ZERO {
        monic.pop();
        out.push(ZERO);
    }
    let seeds: Vec<Complex64> = match monic.len() - 1 {
        0 => Vec::new(),
        1 => vec![-monic[1]],
        2 => quadratic_roots(ONE, monic[1], monic[2]).to_vec(),
        3 => cubic_roots(monic[1], monic[2], monic[3]).to_vec(),
        4 => quartic_roots(monic[1], monic[2], monic[3], monic[4]).to_vec(),
        _ => unreachable!(),
    };
    out.extend(aberth_polish(&monic, seeds));
    out
}

/// Simultaneous Newton iteration with Aberth's repulsion term.
pub fn aberth_polish(coeffs: &[Complex64], mut z: Vec<Complex64>) -> Vec<Complex64> {
    let n = z.len();
    if n == 0 {
        return z;
    }
    let radius = coeffs
        .iter()
        .skip(1)
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // Separate seeds that (nearly) coincide: Aberth's repulsion between two
    // seeds closer than their own error freezes both in place.
    let floor = f64::EPSILON * radius;
    for k in 0..n {
        for j in 0..k {
            if (z[k] - z[j]).norm() <= 1e-8 * z[k].norm().max(z[j].norm()).max(floor) {
                let bump = 1e-8 * (z[k].norm() + radius.min(1.0));
                z[k] += Complex64::from_polar(bump, 0.7 + k as f64);
            }
        }
    }
    for _ in 0..POLISH_MAX_ITER {
        let mut done = true;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[k]);
            if p == ZERO {
                continue;
            }
            let newton = if dp == ZERO { p } else { p / dp };
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d == ZERO {
                        ZERO
                    } else {
                        ONE / d
                    }
                })
                .sum();
            let denom = ONE - newton * repulsion;
            let w = if denom == ZERO { newton } else { newton / denom };
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[k] -= w;
            if w.norm() > 4.0 * f64::EPSILON * z[k].norm() {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    z
}
