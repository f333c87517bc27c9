//! Truncated Taylor series ("jets") for exact derivatives of closed-form radii.
//!
//! A `Jet` stores the Taylor coefficients `c_k = f^(k)(x0) / k!` of a function
//! around a base point. Arithmetic is triangular: coefficient `k` of a result
//! depends only on coefficients `<= k` of the operands, so a jet whose high
//! coefficients are unknown (e.g. after [`Jet::derivative`]) stays exact in
//! its low coefficients.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number of Taylor coefficients carried (derivatives up to fourth order).
pub const ORDER: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub c: [f64; ORDER],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; ORDER];
        c[0] = v;
        Jet { c }
    }

    /// The identity function expanded around `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; ORDER];
        c[0] = x0;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `k`-th derivative at the base point.
    pub fn deriv(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }

    /// Jet of the derivative; the top coefficient becomes unknown (zero).
    pub fn derivative(&self) -> Self {
        let mut c = [0.0; ORDER];
        for k in 0..ORDER - 1 {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Jet { c }
    }

    pub fn scale(self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|x| *x *= s);
        Jet { c }
    }

    pub fn offset(self, s: f64) -> Self {
        let mut c = self.c;
        c[0] += s;
        Jet { c }
    }

    pub fn recip(self) -> Self {
        Jet::constant(1.0) / self
    }

    pub fn sqrt(self) -> Self {
        let a = &self.c;
        let mut s = [0.0; ORDER];
        s[0] = a[0].sqrt();
        for k in 1..ORDER {
            let mut acc = a[k];
            for i in 1..k {
                acc -= s[i] * s[k - i];
            }
            s[k] = acc / (2.0 * s[0]);
        }
        Jet { c: s }
    }

    pub fn exp(self) -> Self {
        let a = &self.c;
        let mut e = [0.0; ORDER];
        e[0] = a[0].exp();
        for k in 1..ORDER {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += i as f64 * a[i] * e[k - i];
            }
            e[k] = acc / k as f64;
        }
        Jet { c: e }
    }

    pub fn ln(self) -> Self {
        let a = &self.c;
        let mut l = [0.0; ORDER];
        l[0] = a[0].ln();
        for k in 1..ORDER {
            let mut acc = 0.0;
            for i in 1..k {
                acc += i as f64 * l[i] * a[k - i];
            }
            l[k] = (a[k] - acc / k as f64) / a[0];
        }
        Jet { c: l }
    }

    pub fn powf(self, p: f64) -> Self {
        let a = &self.c;
        let mut y = [0.0; ORDER];
        y[0] = a[0].powf(p);
        for k in 1..ORDER {
            let mut acc = 0.0;
            for i in 1..=k {
                acc += (p * i as f64 - (k - i) as f64) * a[i] * y[k - i];
            }
            y[k] = acc / (k as f64 * a[0]);
        }
        Jet { c: y }
    }

    pub fn sin_cos(self) -> (Self, Self) {
        let a = &self.c;
        let mut s = [0.0; ORDER];
        let mut c = [0.0; ORDER];
        (s[0], c[0]) = a[0].sin_cos();
        for k in 1..ORDER {
            let (mut as_, mut ac) = (0.0, 0.0);
            for i in 1..=k {
                as_ += i as f64 * a[i] * c[k - i];
                ac += i as f64 * a[i] * s[k - i];
            }
            s[k] = as_ / k as f64;
            c[k] = -ac / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }

    pub fn atan(self) -> Self {
        let d = (self * self).offset(1.0);
        let q = self.derivative() / d;
        let mut y = [0.0; ORDER];
        y[0] = self.c[0].atan();
        for k in 1..ORDER {
            y[k] = q.c[k - 1] / k as f64;
        }
        Jet { c: y }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        c.iter_mut().zip(o.c).for_each(|(x, y)| *x += y);
        Jet { c }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut c = self.c;
        c.iter_mut().zip(o.c).for_each(|(x, y)| *x -= y);
        Jet { c }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; ORDER];
        for k in 0..ORDER {
            for i in 0..=k {
                c[k] += self.c[i] * o.c[k - i];
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let mut q = [0.0; ORDER];
        for k in 0..ORDER {
            let mut acc = self.c[k];
            for i in 1..=k {
                acc -= o.c[i] * q[k - i];
            }
            q[k] = acc / o.c[0];
        }
        Jet { c: q }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, s: f64) -> Jet {
        self.offset(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn derivatives_of_elementary_functions() {
        let x0 = 0.7;
        let x = Jet::variable(x0);

        let s = x.sqrt();
        assert!(close(s.deriv(1), 0.5 * x0.powf(-0.5), 1e-14));
        assert!(close(s.deriv(4), -15.0 / 16.0 * x0.powf(-3.5), 1e-13));

        let e = (x * 2.0).exp();
        assert!(close(e.deriv(3), 8.0 * (2.0 * x0).exp(), 1e-13));

        let l = x.ln();
        assert!(close(l.deriv(4), -6.0 / x0.powi(4), 1e-13));

        let (sn, cs) = x.sin_cos();
        assert!(close(sn.deriv(3), -x0.cos(), 1e-14));
        assert!(close(cs.deriv(4), x0.cos(), 1e-14));

        let at = x.atan();
        let d2 = -2.0 * x0 / (1.0 + x0 * x0).powi(2);
        assert!(close(at.deriv(2), d2, 1e-14));

        let p = x.powf(1.5);
        assert!(close(p.deriv(3), 1.5 * 0.5 * -0.5 * x0.powf(-1.5), 1e-13));

        let q = x.recip();
        assert!(close(q.deriv(4), 24.0 / x0.powi(5), 1e-12));
    }

    #[test]
    fn derivative_jet_shifts_coefficients() {
        let x = Jet::variable(1.3);
        let f = x * x * x;
        let df = f.derivative();
        assert!(close(df.value(), 3.0 * 1.3 * 1.3, 1e-14));
        assert!(close(df.deriv(1), 6.0 * 1.3, 1e-14));
        assert!(close(df.deriv(2), 6.0, 1e-14));
    }
}
