//! Natural quintic interpolating spline for sampled radius profiles.
//!
//! Each interval carries a quintic Hermite polynomial fixed by value, first
//! and second derivative at both ends. The nodal first/second derivatives are
//! the unknowns of a banded system enforcing C³ and C⁴ continuity at interior
//! knots and vanishing third and fourth derivatives at both ends.

use super::jet::{Jet, ORDER};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct QuinticSpline {
    x: Vec<f64>,
    /// Local polynomial coefficients in t = (x - x_i) / h_i.
    coeffs: Vec<[f64; 6]>,
}

/// Coefficients (c3, c4, c5) of a unit-interval quintic in terms of
/// A = Y1 - Y0 - P0 - Q0/2, B = P1 - P0 - Q0, C = Q1 - Q0.
fn upper_coeffs(a: f64, b: f64, c: f64) -> [f64; 3] {
    [
        10.0 * a - 4.0 * b + 0.5 * c,
        -15.0 * a + 7.0 * b - c,
        6.0 * a - 3.0 * b + 0.5 * c,
    ]
}

/// Linear map from (y0, p0, q0, y1, p1, q1) to (c3, c4, c5) for an interval of width h.
fn upper_coeff_rows(h: f64) -> [[f64; 6]; 3] {
    // A, B, C as linear forms in (y0, p0, q0, y1, p1, q1).
    let a = [-1.0, -h, -0.5 * h * h, 1.0, 0.0, 0.0];
    let b = [0.0, -h, -h * h, 0.0, h, 0.0];
    let c = [0.0, 0.0, -h * h, 0.0, 0.0, h * h];
    let mut rows = [[0.0; 6]; 3];
    for j in 0..6 {
        let u = upper_coeffs(a[j], b[j], c[j]);
        for r in 0..3 {
            rows[r][j] = u[r];
        }
    }
    rows
}

impl QuinticSpline {
    pub fn new(samples: &[[f64; 2]]) -> Result<Self> {
        let n_knots = samples.len();
        if n_knots < 4 {
            return Err(Error::InvalidSpec(
                "custom-sampled spiral needs at least 4 samples".into(),
            ));
        }
        let x: Vec<f64> = samples.iter().map(|s| s[0]).collect();
        let y: Vec<f64> = samples.iter().map(|s| s[1]).collect();
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidSpec(
                "sample angles must be strictly increasing".into(),
            ));
        }
        let n = n_knots - 1;
        let n_unk = 2 * n_knots;
        let (kl, ku) = (3usize, 4usize);
        let mut band = Banded::new(n_unk, kl, ku);
        let mut rhs = vec![0.0; n_unk];

        // Derivative rows of S''' and S'''' at t = 0 or t = 1 for interval i,
        // scaled to x-derivatives; returns coefficients on (y0,p0,q0,y1,p1,q1).
        let deriv_rows = |i: usize, at_right: bool| -> ([f64; 6], [f64; 6]) {
            let h = x[i + 1] - x[i];
            let u = upper_coeff_rows(h);
            let mut d3 = [0.0; 6];
            let mut d4 = [0.0; 6];
            for j in 0..6 {
                if at_right {
                    d3[j] = (6.0 * u[0][j] + 24.0 * u[1][j] + 60.0 * u[2][j]) / h.powi(3);
                    d4[j] = (24.0 * u[1][j] + 120.0 * u[2][j]) / h.powi(4);
                } else {
                    d3[j] = 6.0 * u[0][j] / h.powi(3);
                    d4[j] = 24.0 * u[1][j] / h.powi(4);
                }
            }
            (d3, d4)
        };

        // Place a row: coefficients over (y_i, p_i, q_i, y_{i+1}, p_{i+1}, q_{i+1}).
        let mut put = |row: usize, i: usize, coef: &[f64; 6], sign: f64, rhs: &mut [f64]| {
            rhs[row] -= sign * (coef[0] * y[i] + coef[3] * y[i + 1]);
            band.add(row, 2 * i, sign * coef[1]);
            band.add(row, 2 * i + 1, sign * coef[2]);
            band.add(row, 2 * i + 2, sign * coef[4]);
            band.add(row, 2 * i + 3, sign * coef[5]);
        };

        let (l3, l4) = deriv_rows(0, false);
        put(0, 0, &l3, 1.0, &mut rhs);
        put(1, 0, &l4, 1.0, &mut rhs);
        for k in 1..n {
            let (r3, r4) = deriv_rows(k - 1, true);
            let (s3, s4) = deriv_rows(k, false);
            put(2 * k, k - 1, &r3, 1.0, &mut rhs);
            put(2 * k, k, &s3, -1.0, &mut rhs);
            put(2 * k + 1, k - 1, &r4, 1.0, &mut rhs);
            put(2 * k + 1, k, &s4, -1.0, &mut rhs);
        }
        let (e3, e4) = deriv_rows(n - 1, true);
        put(2 * n, n - 1, &e3, 1.0, &mut rhs);
        put(2 * n + 1, n - 1, &e4, 1.0, &mut rhs);

        let sol = band.solve(rhs)?;
        let coeffs = (0..n)
            .map(|i| {
                let h = x[i + 1] - x[i];
                let (p0, q0, p1, q1) = (sol[2 * i], sol[2 * i + 1], sol[2 * i + 2], sol[2 * i + 3]);
                let (y0, y1) = (y[i], y[i + 1]);
                let (pp0, qq0, pp1, qq1) = (h * p0, h * h * q0, h * p1, h * h * q1);
                let up = upper_coeffs(y1 - y0 - pp0 - 0.5 * qq0, pp1 - pp0 - qq0, qq1 - qq0);
                [y0, pp0, 0.5 * qq0, up[0], up[1], up[2]]
            })
            .collect();
        Ok(QuinticSpline { x, coeffs })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    /// Taylor jet of the spline at `x0` (which must lie inside the sample range).
    pub fn jet(&self, x0: f64) -> Jet {
        let n = self.coeffs.len();
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&x0).unwrap()) {
            Ok(k) => k.min(n - 1),
            Err(k) => k.saturating_sub(1).min(n - 1),
        };
        let h = self.x[i + 1] - self.x[i];
        let t = (x0 - self.x[i]) / h;
        let c = &self.coeffs[i];
        // Taylor shift of the local polynomial to t, rescaled to x.
        let mut out = [0.0; ORDER];
        let mut hk = 1.0;
        for k in 0..ORDER {
            let mut acc = 0.0;
            for j in k..6 {
                acc += c[j] * binom(j, k) * t.powi((j - k) as i32);
            }
            out[k] = acc / hk;
            hk *= h;
        }
        Jet { c: out }
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Banded matrix with partial-pivoting LU solve.
struct Banded {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major storage of columns [i - kl, i + ku + kl] for each row.
    rows: Vec<f64>,
    width: usize,
}

impl Banded {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Banded {
            n,
            kl,
            ku,
            rows: vec![0.0; n * width],
            width,
        }
    }

    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        let lo = i as isize - self.kl as isize;
        let off = j as isize - lo;
        (off >= 0 && (off as usize) < self.width).then(|| i * self.width + off as usize)
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .idx(i, j)
            .expect("spline system entry outside band");
        self.rows[k] += v;
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.rows[k])
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        if let Some(k) = self.idx(i, j) {
            self.rows[k] = v;
        }
    }

    fn solve(mut self, mut b: Vec<f64>) -> Result<Vec<f64>> {
        let n = self.n;
        let reach = self.ku + self.kl;
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let p = (k..=last)
                .max_by(|&a, &c| self.get(a, k).abs().partial_cmp(&self.get(c, k).abs()).unwrap())
                .unwrap();
            if self.get(p, k) == 0.0 {
                return Err(Error::InvalidSpec("singular spline system".into()));
            }
            let jmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (a, c) = (self.get(k, j), self.get(p, j));
                    self.set(k, j, c);
                    self.set(p, j, a);
                }
                b.swap(k, p);
            }
            let piv = self.get(k, k);
            for i in k + 1..=last {
                let f = self.get(i, k) / piv;
                if f == 0.0 {
                    continue;
                }
                for j in k..=jmax {
                    let v = self.get(i, j) - f * self.get(k, j);
                    self.set(i, j, v);
                }
                b[i] -= f * b[k];
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + reach).min(n - 1);
            let mut acc = b[k];
            for j in k + 1..=jmax {
                acc -= self.get(k, j) * b[j];
            }
            b[k] = acc / self.get(k, k);
        }
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_linear_data_exactly() {
        let s: Vec<[f64; 2]> = (0..12).map(|i| [i as f64 * 0.5, 2.0 + 0.3 * i as f64 * 0.5]).collect();
        let sp = QuinticSpline::new(&s).unwrap();
        for &x in &[0.1, 1.7, 3.3, 5.4] {
            let j = sp.jet(x);
            assert!((j.value() - (2.0 + 0.3 * x)).abs() < 1e-12);
            assert!((j.deriv(1) - 0.3).abs() < 1e-11);
            assert!(j.deriv(2).abs() < 1e-9);
        }
    }

    #[test]
    fn interpolates_and_is_c4() {
        let s: Vec<[f64; 2]> = (0..40)
            .map(|i| {
                let x = 0.1 * i as f64 + 0.01 * (i as f64).sin();
                [x, x.sin() + 2.0]
            })
            .collect();
        let sp = QuinticSpline::new(&s).unwrap();
        for p in &s {
            assert!((sp.jet(p[0]).value() - p[1]).abs() < 1e-12);
        }
        // Continuity of the fourth derivative across an interior knot.
        let k = s[17][0];
        let l = sp.jet(k - 1e-9);
        let r = sp.jet(k + 1e-9);
        assert!((l.deriv(3) - r.deriv(3)).abs() < 1e-5);
        assert!((l.deriv(4) - r.deriv(4)).abs() < 1e-4);
        // Interior accuracy against the sampled function.
        let x = 2.05;
        assert!((sp.jet(x).value() - (x.sin() + 2.0)).abs() < 1e-7);
        assert!((sp.jet(x).deriv(1) - x.cos()).abs() < 1e-5);
    }

    #[test]
    fn natural_end_conditions() {
        let s: Vec<[f64; 2]> = (0..20).map(|i| [i as f64, (i as f64).powi(2) * 0.1]).collect();
        let sp = QuinticSpline::new(&s).unwrap();
        let (lo, hi) = sp.domain();
        assert!(sp.jet(lo).deriv(3).abs() < 1e-8);
        assert!(sp.jet(lo).deriv(4).abs() < 1e-8);
        assert!(sp.jet(hi).deriv(3).abs() < 1e-8);
        assert!(sp.jet(hi).deriv(4).abs() < 1e-8);
    }
}
