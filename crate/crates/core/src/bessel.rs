//! Bessel functions of the first kind and their zeros.

use crate::error::{Error, Result};

const RESCALE: f64 = 1e250;

/// J_0(x), …, J_nmax(x) by Miller's backward recurrence normalised with
/// J₀ + 2 Σ J₂ₖ = 1.
fn bessel_j_all(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = nmax.max(ax as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;
    let (mut next, mut cur) = (0.0, 1e-300);
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        // cur = J_{k-1}
        if k - 1 <= nmax {
            out[k - 1] = cur;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * cur;
        }
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            norm /= RESCALE;
            for v in out.iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// J_n(x).
pub fn bessel_j(n: usize, x: f64) -> f64 {
    bessel_j_all(n + 1, x)[n]
}

/// (J_n(x), J_n'(x)).
fn bessel_j_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let all = bessel_j_all(n + 1, x);
    let d = if n == 0 { -all[1] } else { 0.5 * (all[n - 1] - all[n + 1]) };
    (all[n], d)
}

/// k-th positive zero j_{n,k} of J_n, k ≥ 1.
///
/// Sign changes are bracketed on a grid finer than the zero spacing, then
/// refined by bisection and polished by Newton steps.
pub fn bessel_zero(n: usize, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("Bessel zero index starts at 1".into()));
    }
    let step = 0.25;
    let mut x0 = if n == 0 { 0.5 } else { n as f64 };
    let mut f0 = bessel_j(n, x0);
    let mut found = 0;
    let limit = n as f64 + 4.0 * (k as f64 + n as f64) + 50.0;
    while x0 < limit {
        let x1 = x0 + step;
        let f1 = bessel_j(n, x1);
        if f0 == 0.0 || f0.signum() != f1.signum() {
            found += 1;
            if found == k {
                return Ok(refine(n, x0, x1));
            }
        }
        x0 = x1;
        f0 = f1;
    }
    Err(Error::Convergence { what: "Bessel zero search", iterations: found, residual: f0.abs() })
}

fn refine(n: usize, mut lo: f64, mut hi: f64) -> f64 {
    let flo = bessel_j(n, lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if bessel_j(n, mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..5 {
        let (f, df) = bessel_j_with_derivative(n, x);
        let dx = f / df;
        x -= dx;
        if dx.abs() < 1e-16 * x {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Bessel's integral (1/2π) ∫₀^{2π} cos(nτ − x sin τ) dτ by the periodic
    /// trapezoidal rule, which converges geometrically.
    fn integral_oracle(n: usize, x: f64) -> f64 {
        let m = 400;
        let h = 2.0 * PI / m as f64;
        (0..m).map(|i| (n as f64 * i as f64 * h - x * (i as f64 * h).sin()).cos()).sum::<f64>() / m as f64
    }

    fn bisection_oracle(n: usize, mut lo: f64, mut hi: f64) -> f64 {
        let flo = integral_oracle(n, lo);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if integral_oracle(n, mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn matches_integral_representation() {
        for n in 0..=10 {
            for &x in &[0.1, 1.0, 3.7, 10.0, 25.0, 60.0] {
                assert!((bessel_j(n, x) - integral_oracle(n, x)).abs() < 1e-13, "n={n} x={x}");
            }
        }
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        assert!((bessel_j(1, -2.0) + bessel_j(1, 2.0)).abs() < 1e-16);
    }

    #[test]
    fn zeros_agree_with_bisection_oracle() {
        for n in [0, 1, 2, 5, 10] {
            for k in [1, 2, 7, 20] {
                let z = bessel_zero(n, k).unwrap();
                let o = bisection_oracle(n, z - 0.1, z + 0.1);
                assert!((z - o).abs() < 1e-12, "n={n} k={k}: {z} vs {o}");
                assert!(bessel_j(n, z - 1e-6).signum() != bessel_j(n, z + 1e-6).signum());
            }
        }
    }

    #[test]
    fn first_zero_of_j0() {
        let z = bessel_zero(0, 1).unwrap();
        assert!((2.0 * z - 4.80965).abs() < 5e-6);
        assert!(z < bessel_zero(1, 1).unwrap());
        assert!(bessel_zero(1, 1).unwrap() < bessel_zero(2, 1).unwrap());
        assert!(z < bessel_zero(0, 2).unwrap());
    }

    #[test]
    fn zero_index_is_rejected() {
        assert!(matches!(bessel_zero(0, 0), Err(Error::InvalidInput(_))));
    }
}
