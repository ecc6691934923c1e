//! Eigenvalues of small Hermitian matrices.

use super::CMat;
use num_complex::Complex64;

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops.
pub const JACOBI_OFF_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// 1×1 and 2×2 are solved in closed form; larger matrices use cyclic complex
/// Jacobi rotations. Only the Hermitian part of the input is looked at.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let mut ev = match a.dim() {
        0 => Vec::new(),
        1 => vec![a[(0, 0)].re],
        2 => {
            let (p, d) = (a[(0, 0)].re, a[(1, 1)].re);
            let b = (a[(0, 1)] + a[(1, 0)].conj()) * 0.5;
            let mean = 0.5 * (p + d);
            let rad = (0.5 * (p - d)).hypot(b.norm());
            vec![mean + rad, mean - rad]
        }
        _ => jacobi(a),
    };
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

fn off_norm(a: &CMat) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(input: &CMat) -> Vec<f64> {
    let n = input.dim();
    // symmetrize so that round-off in the input cannot stall the sweep
    let mut a = CMat::from_fn(n, |i, j| (input[(i, j)] + input[(j, i)].conj()) * 0.5);
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= JACOBI_OFF_TOL {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = a[(p, q)];
                let bn = b.norm();
                if bn == 0.0 {
                    continue;
                }
                let phase = b / bn;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * bn);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // U = diag(1, conj(phase)) on (p, q) followed by a real rotation
                let mut u = CMat::identity(n);
                u[(p, p)] = Complex64::new(c, 0.0);
                u[(p, q)] = Complex64::new(s, 0.0);
                u[(q, p)] = -phase.conj() * s;
                u[(q, q)] = phase.conj() * c;
                a = &(&u.adjoint() * &a) * &u;
            }
        }
    }
    (0..n).map(|i| a[(i, i)].re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = CMat::from_rows(2, vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        let ev = hermitian_eigenvalues(&a);
        assert!((ev[0] - 1.0).abs() < 1e-15 && ev[1].abs() < 1e-15);
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // Q diag(d) Q† with Q = Fourier-like unitary
        let d = [0.4, 0.3, 0.2, 0.1];
        let n = 4;
        let w = std::f64::consts::TAU / n as f64;
        let q = CMat::from_fn(n, |i, j| Complex64::from_polar(0.5, w * (i * j) as f64));
        assert!(q.unitarity_defect() < 1e-14);
        let dm = CMat::from_fn(n, |i, j| if i == j { c(d[i], 0.0) } else { c(0.0, 0.0) });
        let a = &(&q * &dm) * &q.adjoint();
        let ev = hermitian_eigenvalues(&a);
        for (x, y) in ev.iter().zip(d) {
            assert!((x - y).abs() < 1e-13, "{ev:?}");
        }
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        let a = CMat::from_fn(4, |i, j| {
            let z = c((i + j) as f64 * 0.1, (i as f64 - j as f64) * 0.07);
            if i == j {
                c(z.re, 0.0)
            } else {
                z
            }
        });
        let ev = hermitian_eigenvalues(&a);
        let tr: f64 = ev.iter().sum();
        let fro: f64 = ev.iter().map(|x| x * x).sum();
        assert!((tr - a.trace().re).abs() < 1e-13);
        assert!((fro - a.norm_fro().powi(2)).abs() < 1e-13);
    }
}
