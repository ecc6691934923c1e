//! Maximization on the non-negative part of a sphere ‖x‖ = R, x ≥ 0, and a
//! Newton solver for the Lagrange conditions on the same set.

use crate::linalg::real::{dot, norm, solve, symmetric_eigenvalues};
use rand::Rng;

pub const MAX_ITER: usize = 10_000;
pub const OPT_TOL: f64 = 1e-8;
pub const MULTISTART: usize = 20;
const INITIAL_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-20;
const MAX_STEP: f64 = 1e6;
const ARMIJO: f64 = 1e-4;
/// Required shrink of the KKT residual for steps that values cannot rank.
const FLAT_DECREASE: f64 = 0.9;
/// Components at or below this are on the boundary x_i = 0.
const ACTIVE_TOL: f64 = 1e-12;
/// Largest fraction of a positive component one step may remove.
const TO_BOUNDARY: f64 = 0.99;
const FD_STEP: f64 = 1e-6;

pub trait Objective {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Hessian by central differences of the gradient.
    fn hessian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut h = vec![vec![0.0; n]; n];
        for j in 0..n {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += FD_STEP;
            xm[j] -= FD_STEP;
            let (gp, gm) = (self.gradient(&xp), self.gradient(&xm));
            for i in 0..n {
                h[i][j] = (gp[i] - gm[i]) / (2.0 * FD_STEP);
            }
        }
        for i in 0..n {
            for j in 0..i {
                let s = 0.5 * (h[i][j] + h[j][i]);
                h[i][j] = s;
                h[j][i] = s;
            }
        }
        h
    }
}

/// Central finite-difference gradient, used to check analytic gradients.
/// Largest relative disagreement, against the gradient norm, between the
/// analytic gradient and central differences along the tangent plane of the
/// sphere through x. Steps are pulled back onto the sphere, so objectives
/// that are only meaningful there (α ≤ 1/4) are checked where they live.
pub fn gradient_check<O: Objective + ?Sized>(f: &O, x: &[f64]) -> f64 {
    let g = f.gradient(x);
    let r = norm(x);
    let scale = norm(&g).max(1e-300);
    let on_sphere = |t: &[f64], h: f64| -> Vec<f64> {
        let y: Vec<f64> = x.iter().zip(t).map(|(a, b)| a + h * b).collect();
        let n = norm(&y);
        y.iter().map(|v| v * r / n).collect()
    };
    tangent_basis(x)
        .iter()
        .map(|t| {
            let fd = (f.value(&on_sphere(t, FD_STEP)) - f.value(&on_sphere(t, -FD_STEP))) / (2.0 * FD_STEP);
            (dot(&g, t) - fd).abs() / scale
        })
        .fold(0.0, f64::max)
}

/// Euclidean projection onto {x ≥ 0, ‖x‖ = R}.
pub fn project(y: &[f64], radius: f64) -> Option<Vec<f64>> {
    let clipped: Vec<f64> = y.iter().map(|v| v.max(0.0)).collect();
    let n = norm(&clipped);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some(clipped.iter().map(|v| v * radius / n).collect())
}

/// Half the sphere multiplier, 2ν in ∇f = 2νx − μ, estimated from x.
pub fn sphere_multiplier(x: &[f64], g: &[f64]) -> f64 {
    dot(g, x) / dot(x, x)
}

/// Norm of the KKT violation at x: tangential gradient on the free
/// components, and any outward-pointing gradient on the active ones.
pub fn kkt_residual(x: &[f64], g: &[f64]) -> f64 {
    let two_nu = sphere_multiplier(x, g);
    x.iter()
        .zip(g)
        .map(|(&xi, &gi)| {
            if xi <= ACTIVE_TOL {
                gi.max(0.0)
            } else {
                gi - two_nu * xi
            }
        })
        .map(|r| r * r)
        .sum::<f64>()
        .sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AscentResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub kkt_residual: f64,
}

/// Projected gradient ascent with backtracking from a Barzilai-Borwein
/// trial step (twice the last accepted one when that is undefined). An unconverged run is finished by a Newton
/// solve of the Lagrange conditions if that improves it.
pub fn projected_ascent<O: Objective + ?Sized>(f: &O, radius: f64, x0: &[f64], tol: f64) -> AscentResult {
    let mut x = project(x0, radius).unwrap_or_else(|| {
        let n = f.dim();
        vec![radius / (n as f64).sqrt(); n]
    });
    let mut fx = f.value(&x);
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut step = INITIAL_STEP / 2.0;
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    while iterations < MAX_ITER {
        let g = f.gradient(&x);
        residual = kkt_residual(&x, &g);
        if residual <= tol {
            break;
        }
        // move along the tangential part of the gradient; the radial part is
        // undone by the projection anyway and only spoils the step length
        let two_nu = sphere_multiplier(&x, &g);
        let d: Vec<f64> = x
            .iter()
            .zip(&g)
            .map(|(&xi, &gi)| {
                let di = gi - two_nu * xi;
                if xi <= ACTIVE_TOL {
                    di.max(0.0)
                } else {
                    di
                }
            })
            .collect();
        let mut t = 2.0 * step;
        if let Some((px, pd)) = &prev {
            let s: Vec<f64> = x.iter().zip(px).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = pd.iter().zip(&d).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 0.0 {
                t = dot(&s, &s) / sy;
            }
        }
        // Stop short of the boundary. A component clipped to exactly zero
        // can sit where its partial derivative vanishes and never come back.
        let t_wall = x
            .iter()
            .zip(&d)
            .filter(|(&xi, &di)| xi > ACTIVE_TOL && di < 0.0)
            .map(|(&xi, &di)| -TO_BOUNDARY * xi / di)
            .fold(f64::INFINITY, f64::min);
        t = t.min(t_wall).clamp(MIN_STEP, MAX_STEP);
        let x_before = x.clone();
        let mut moved = false;
        while t >= MIN_STEP {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            if let Some(y) = project(&trial, radius) {
                let fy = f.value(&y);
                // first-order gain along the sphere
                let predicted = t * dot(&d, &d);
                let sufficient = fy >= fx + ARMIJO * predicted && fy >= fx;
                // once even the predicted gain is below the resolution of f,
                // values cannot rank the steps; ask for a smaller KKT residual
                let resolution = 64.0 * f64::EPSILON * fx.abs().max(1.0);
                let flat = predicted.abs() <= resolution
                    && (fy - fx).abs() <= resolution
                    && kkt_residual(&y, &f.gradient(&y)) <= FLAT_DECREASE * residual;
                if sufficient || flat {
                    moved = y != x;
                    x = y;
                    fx = fy;
                    step = t;
                    break;
                }
            }
            t *= 0.5;
        }
        iterations += 1;
        if !moved {
            break;
        }
        prev = Some((x_before, d));
    }
    if residual > tol {
        // slow ascent near a flat maximum: finish with Newton on the
        // Lagrange system when that keeps x feasible and does not lose value
        if let Some((y, _, _)) = lagrange_newton(f, radius, &x) {
            let fy = f.value(&y);
            let ry = kkt_residual(&y, &f.gradient(&y));
            let resolution = 64.0 * f64::EPSILON * fx.abs().max(1.0);
            if y.iter().all(|&v| v >= 0.0) && fy >= fx - resolution && ry < residual {
                x = y;
                fx = fy;
                residual = ry;
            }
        }
    }
    AscentResult {
        value: fx,
        converged: residual <= tol,
        kkt_residual: residual,
        iterations,
        x,
    }
}

/// Uniform random point on the positive part of the sphere.
pub fn random_start<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let y: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..1.0)).collect();
        if let Some(x) = project(&y, radius) {
            if x.iter().all(|&v| v > 0.0) {
                return x;
            }
        }
    }
}

/// Runs the ascent from `starts` random points; results sorted best first.
pub fn multistart_ascent<O: Objective + ?Sized, R: Rng + ?Sized>(
    f: &O,
    radius: f64,
    starts: usize,
    tol: f64,
    rng: &mut R,
) -> Vec<AscentResult> {
    let mut out: Vec<AscentResult> = (0..starts)
        .map(|_| {
            let x0 = random_start(rng, f.dim(), radius);
            projected_ascent(f, radius, &x0, tol)
        })
        .collect();
    out.sort_by(|a, b| b.value.total_cmp(&a.value));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StationaryKind {
    Maximum,
    Minimum,
    Saddle,
    /// The reduced Hessian has a (numerically) zero eigenvalue.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StationaryPoint {
    pub x: Vec<f64>,
    pub value: f64,
    /// ℓ in ∇f + 2ℓx = 0, the sign convention of a Lagrangian f + ℓ(‖x‖² − R²).
    pub multiplier: f64,
    pub residual: f64,
    pub kind: StationaryKind,
}

// Orthonormal basis of the plane orthogonal to x.
fn tangent_basis(x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let u: Vec<f64> = x.iter().map(|v| v / norm(x)).collect();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        for b in std::iter::once(&u).chain(basis.iter()) {
            let c = dot(&e, b);
            for (ei, bi) in e.iter_mut().zip(b) {
                *ei -= c * bi;
            }
        }
        let m = norm(&e);
        if m > 1e-8 {
            basis.push(e.iter().map(|v| v / m).collect());
        }
        if basis.len() == n - 1 {
            break;
        }
    }
    basis
}

/// Second-order type of a point satisfying ∇f = 2νx on the sphere, from the
/// Hessian of the Lagrangian restricted to the tangent plane.
pub fn classify_stationary<O: Objective + ?Sized>(f: &O, x: &[f64], two_nu: f64) -> StationaryKind {
    let h = f.hessian(x);
    let basis = tangent_basis(x);
    let m = basis.len();
    let mut reduced = vec![vec![0.0; m]; m];
    for (i, bi) in basis.iter().enumerate() {
        let hb: Vec<f64> = h.iter().map(|row| dot(row, bi)).collect();
        for (j, bj) in basis.iter().enumerate() {
            reduced[j][i] = dot(bj, &hb) - two_nu * dot(bj, bi);
        }
    }
    let ev = symmetric_eigenvalues(&reduced);
    let tol = 1e-6 * ev.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    if ev.iter().any(|v| v.abs() <= tol) {
        StationaryKind::Degenerate
    } else if ev.iter().all(|&v| v < 0.0) {
        StationaryKind::Maximum
    } else if ev.iter().all(|&v| v > 0.0) {
        StationaryKind::Minimum
    } else {
        StationaryKind::Saddle
    }
}

/// Newton iteration on the Lagrange system ∇f = 2νx, ‖x‖² = R².
pub fn lagrange_newton<O: Objective + ?Sized>(f: &O, radius: f64, x0: &[f64]) -> Option<(Vec<f64>, f64, f64)> {
    let n = f.dim();
    let mut x = x0.to_vec();
    let mut two_nu = sphere_multiplier(&x, &f.gradient(&x));
    let residual = |x: &[f64], two_nu: f64| -> Vec<f64> {
        let g = f.gradient(x);
        let mut r: Vec<f64> = g.iter().zip(x).map(|(gi, xi)| gi - two_nu * xi).collect();
        r.push(0.5 * (dot(x, x) - radius * radius));
        r
    };
    for _ in 0..100 {
        let r = residual(&x, two_nu);
        if norm(&r) <= 1e-13 {
            break;
        }
        let h = f.hessian(&x);
        let mut jac = vec![vec![0.0; n + 1]; n + 1];
        for i in 0..n {
            for j in 0..n {
                jac[i][j] = h[i][j] - if i == j { two_nu } else { 0.0 };
            }
            jac[i][n] = -x[i];
            jac[n][i] = x[i];
        }
        let step = solve(jac, r.iter().map(|v| -v).collect())?;
        for i in 0..n {
            x[i] += step[i];
        }
        two_nu += step[n];
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
    }
    let res = norm(&residual(&x, two_nu));
    (res <= 1e-10).then_some((x, two_nu, res))
}

/// Interior stationary points (all components > 0) found by Newton from
/// random starts, with duplicates removed.
pub fn interior_stationary_points<O: Objective + ?Sized, R: Rng + ?Sized>(
    f: &O,
    radius: f64,
    starts: usize,
    rng: &mut R,
) -> Vec<StationaryPoint> {
    let mut found: Vec<StationaryPoint> = Vec::new();
    for _ in 0..starts {
        let x0 = random_start(rng, f.dim(), radius);
        let Some((x, two_nu, res)) = lagrange_newton(f, radius, &x0) else {
            continue;
        };
        if x.iter().any(|&v| v <= 1e-8) {
            continue;
        }
        if found
            .iter()
            .any(|p| p.x.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-6))
        {
            continue;
        }
        found.push(StationaryPoint {
            value: f.value(&x),
            multiplier: -two_nu / 2.0,
            residual: res,
            kind: classify_stationary(f, &x, two_nu),
            x,
        });
    }
    found.sort_by(|a, b| b.value.total_cmp(&a.value));
    found
}
