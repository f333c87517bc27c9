//! Independent reference computations: a marching search for the orthogonal
//! width, radial shooting for annuli and dense generalized eigenproblems.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::geometry::Spiral;
use crate::sparse::CsrMatrix;

/// Orthogonal width by marching along the inward normal and bisecting the
/// first sign change of |P(u)| − r(φ(u) − 2π/m), φ the unwrapped polar angle.
pub fn brute_force_orthogonal_width(spiral: &Spiral, theta: f64) -> Result<f64> {
    let p = spiral.period();
    let gap = spiral.radius_difference(theta, theta - p)?;
    let f = |u: f64| -> Result<f64> {
        let q = spiral.offset_point(theta, u);
        let raw = q[1].atan2(q[0]);
        let phi = theta + (raw - theta + PI).rem_euclid(2.0 * PI) - PI;
        Ok(q[0].hypot(q[1]) - spiral.radius(phi - p)?)
    };
    let steps = 4000;
    let h = 2.0 * gap / steps as f64;
    let mut lo = 0.0;
    let mut flo = f(lo)?;
    for i in 1..=steps {
        let hi = i as f64 * h;
        let fhi = f(hi)?;
        if flo.signum() != fhi.signum() {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if f(mid)?.signum() == flo.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
                if b - a <= 1e-15 * b {
                    break;
                }
            }
            return Ok(0.5 * (a + b));
        }
        lo = hi;
        flo = fhi;
    }
    Err(Error::NoIntersection { theta })
}

/// Lowest `count` Dirichlet eigenvalues of the radial problem
/// −(rR')'/r + ℓ²R/r² = E R on (r1, r2), by RK4 shooting and bisection on
/// the node count.
pub fn annulus_radial_eigenvalues(r1: f64, r2: f64, ell: u32, count: usize) -> Vec<f64> {
    let steps = 4000;
    // Number of interior zeros of the shot solution and its end value.
    let shoot = |e: f64| -> (usize, f64) {
        let h = (r2 - r1) / steps as f64;
        let l2 = (ell * ell) as f64;
        let rhs = |r: f64, y: [f64; 2]| -> [f64; 2] {
            // y = (R, rR')
            [y[1] / r, (l2 / r - e * r) * y[0]]
        };
        let mut y = [0.0, 1.0];
        let mut r = r1;
        let mut zeros = 0;
        for _ in 0..steps {
            let k1 = rhs(r, y);
            let k2 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = rhs(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = rhs(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            let next = [
                y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            ];
            r += h;
            if next[0].signum() != y[0].signum() && r < r2 - 0.5 * h {
                zeros += 1;
            }
            y = next;
        }
        (zeros, y[0])
    };
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        // Eigenvalue n has n interior zeros; bisect on "more than n zeros or
        // past the n-th root".
        let above = |e: f64| {
            let (z, end) = shoot(e);
            z > n || (z == n && end.signum() != if n % 2 == 0 { 1.0 } else { -1.0 })
        };
        let mut hi = 1.0;
        while !above(hi) {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if above(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

/// All eigenvalues of K x = E M x by dense Cholesky reduction and a
/// symmetric eigen-decomposition, ascending.
pub fn dense_eigenvalues(k: &CsrMatrix, m: &CsrMatrix) -> Result<Vec<f64>> {
    let n = k.n;
    let to_dense = |a: &CsrMatrix| {
        let mut d = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for (j, v) in a.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    };
    let chol = to_dense(m)
        .cholesky()
        .ok_or_else(|| Error::Assembly("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let kd = to_dense(k);
    // C = L⁻¹ K L⁻ᵀ
    let y = l
        .solve_lower_triangular(&kd)
        .ok_or_else(|| Error::Assembly("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::Assembly("singular Cholesky factor".into()))?;
    let c = 0.5 * (&c + c.transpose());
    let mut vals: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}
