//! Geometry of spiral curves: radii, frames, arc length, curvature, coil
//! widths, Fermi coordinates and classification.
//!
//! Every curve is described in polar form r = r(θ) with r strictly
//! increasing. An `m`-arm region is bounded by the `m` rotated copies of the
//! curve, so the neighbouring coil of the point at polar angle θ has radius
//! r(θ − 2π/m).

mod classify;
pub mod family;
pub mod jet;
pub mod spline;
mod width;

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use classify::{AsymptoticFit, Classification, Monotonicity};
pub use family::Family;
use jet::Jet;
use spline::QuinticSpline;
pub use width::OrthogonalWidth;

use crate::error::{Error, Result};
use crate::quadrature;

fn default_m() -> usize {
    1
}

/// Parametric description of a spiral family, its arm count and cut angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpiralSpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default)]
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_min: Option<f64>,
    /// `[θ, r]` pairs for the custom-sampled family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
}

impl SpiralSpec {
    fn base(family: Family) -> Self {
        SpiralSpec {
            family,
            a: None,
            b: None,
            k: None,
            m: 1,
            beta: 0.0,
            theta_min: None,
            samples: None,
        }
    }

    pub fn archimedean(a: f64) -> Self {
        SpiralSpec {
            a: Some(a),
            ..Self::base(Family::Archimedean)
        }
    }

    pub fn multi_arm(a: f64, m: usize) -> Self {
        SpiralSpec {
            a: Some(a),
            m,
            ..Self::base(Family::MultiArmArchimedean)
        }
    }

    pub fn fermat(b: f64) -> Self {
        SpiralSpec {
            b: Some(b),
            ..Self::base(Family::Fermat)
        }
    }

    pub fn fermat_archimedean(a: f64, b: f64) -> Self {
        SpiralSpec {
            a: Some(a),
            b: Some(b),
            ..Self::base(Family::FermatArchimedean)
        }
    }

    pub fn logarithmic(a: f64, k: f64) -> Self {
        SpiralSpec {
            a: Some(a),
            k: Some(k),
            ..Self::base(Family::Logarithmic)
        }
    }

    pub fn hyperbolic(a: f64) -> Self {
        SpiralSpec {
            a: Some(a),
            ..Self::base(Family::Hyperbolic)
        }
    }

    pub fn involute(a: f64) -> Self {
        SpiralSpec {
            a: Some(a),
            ..Self::base(Family::Involute)
        }
    }

    pub fn atzema(a: f64) -> Self {
        SpiralSpec {
            a: Some(a),
            ..Self::base(Family::Atzema)
        }
    }

    pub fn modified_atzema(a: f64) -> Self {
        SpiralSpec {
            a: Some(a),
            ..Self::base(Family::ModifiedAtzema)
        }
    }

    pub fn jelly_roll(a: f64) -> Self {
        SpiralSpec {
            a: Some(a),
            ..Self::base(Family::JellyRoll)
        }
    }

    pub fn custom(samples: Vec<[f64; 2]>) -> Self {
        SpiralSpec {
            samples: Some(samples),
            ..Self::base(Family::CustomSampled)
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_theta_min(mut self, theta_min: f64) -> Self {
        self.theta_min = Some(theta_min);
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Sample of the moving frame of the curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameSample {
    pub theta: f64,
    pub r: f64,
    pub dr: f64,
    pub position: [f64; 2],
    pub tangent: [f64; 2],
    /// Inward unit normal.
    pub normal: [f64; 2],
    pub kappa: f64,
    pub s: f64,
}

/// Curvature and its first two arc-length derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub kappa: f64,
    pub dkappa_ds: f64,
    pub d2kappa_ds2: f64,
}

/// A validated spiral ready for evaluation.
#[derive(Clone, Debug)]
pub struct Spiral {
    spec: SpiralSpec,
    a: f64,
    b: f64,
    k: f64,
    theta_min: f64,
    theta_hi: f64,
    spline: Option<QuinticSpline>,
    fermi_threshold: OnceLock<Option<f64>>,
}

fn require_positive(name: &str, v: Option<f64>, family: Family) -> Result<f64> {
    match v {
        Some(x) if x > 0.0 && x.is_finite() => Ok(x),
        Some(x) => Err(Error::InvalidSpec(format!(
            "{name} must be positive for the {} family (got {x})",
            family.name()
        ))),
        None => Err(Error::InvalidSpec(format!(
            "{name} is required for the {} family",
            family.name()
        ))),
    }
}

impl Spiral {
    pub fn new(spec: SpiralSpec) -> Result<Self> {
        use Family::*;
        let fam = spec.family;
        if spec.m == 0 {
            return Err(Error::InvalidSpec("arm count m must be at least 1".into()));
        }
        if !(spec.beta >= 0.0) || !spec.beta.is_finite() {
            return Err(Error::InvalidSpec(format!("cut angle beta must be >= 0 (got {})", spec.beta)));
        }
        let (mut a, mut b, mut k) = (1.0, 1.0, 1.0);
        match fam {
            Archimedean | MultiArmArchimedean | Hyperbolic | Involute | Atzema | ModifiedAtzema
            | JellyRoll => a = require_positive("a", spec.a, fam)?,
            Fermat => b = require_positive("b", spec.b, fam)?,
            FermatArchimedean => {
                a = require_positive("a", spec.a, fam)?;
                b = require_positive("b", spec.b, fam)?;
            }
            Logarithmic => {
                a = require_positive("a", spec.a, fam)?;
                k = require_positive("k", spec.k, fam)?;
            }
            CustomSampled => {}
        }
        let (spline, theta_min, theta_hi) = if fam == CustomSampled {
            let samples = spec
                .samples
                .as_ref()
                .ok_or_else(|| Error::InvalidSpec("custom-sampled family needs samples".into()))?;
            let sp = QuinticSpline::new(samples)?;
            let (lo, hi) = sp.domain();
            let tmin = spec.theta_min.unwrap_or(lo);
            if tmin < lo || tmin >= hi {
                return Err(Error::InvalidSpec(format!(
                    "theta_min = {tmin} outside the sample range [{lo}, {hi}]"
                )));
            }
            (Some(sp), tmin, hi)
        } else {
            let (lo, hi, open, default) = fam.natural_domain();
            let tmin = spec.theta_min.unwrap_or(default);
            let bad = if open { tmin <= lo } else { tmin < lo };
            if bad || tmin >= hi || !tmin.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "theta_min = {tmin} outside the natural domain of the {} family",
                    fam.name()
                )));
            }
            (None, tmin, hi)
        };
        Ok(Spiral {
            spec,
            a,
            b,
            k,
            theta_min,
            theta_hi,
            spline,
            fermi_threshold: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &SpiralSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn m(&self) -> usize {
        self.spec.m
    }

    pub fn beta(&self) -> f64 {
        self.spec.beta
    }

    /// Angular offset 2π/m between neighbouring coils.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.spec.m as f64
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_min
    }

    /// Upper end of the parameter domain (infinite for most families).
    pub fn theta_max_domain(&self) -> f64 {
        self.theta_hi
    }

    pub(crate) fn params(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.k)
    }

    pub fn check(&self, theta: f64) -> Result<()> {
        let upper_ok = if self.theta_hi.is_finite() && self.family() != Family::CustomSampled {
            theta < self.theta_hi
        } else {
            theta <= self.theta_hi
        };
        if theta >= self.theta_min && upper_ok && theta.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain {
                family: self.family().name(),
                theta,
                detail: format!("domain is [{}, {})", self.theta_min, self.theta_hi),
            })
        }
    }

    fn radius_value(&self, t: f64) -> f64 {
        use Family::*;
        let (a, b, k) = (self.a, self.b, self.k);
        match self.family() {
            Archimedean | MultiArmArchimedean => a * t,
            Fermat => b * t.sqrt(),
            FermatArchimedean => a * (t * (t + b * b / (a * a))).sqrt(),
            Logarithmic => a * (k * t).exp(),
            Hyperbolic => -a / t,
            Involute => a * (1.0 + t * t).sqrt(),
            Atzema => {
                let p = family::atzema_parameter(t);
                a * (p + 1.0 / p)
            }
            ModifiedAtzema => a * (t - 1.0 / t),
            JellyRoll => a * (0.75 + t.atan() / (2.0 * PI)),
            CustomSampled => self.spline.as_ref().unwrap().jet(t).value(),
        }
    }

    fn radius_jet_unchecked(&self, t: f64) -> Jet {
        use Family::*;
        let (a, b, k) = (self.a, self.b, self.k);
        let x = Jet::variable(t);
        match self.family() {
            Archimedean | MultiArmArchimedean => x.scale(a),
            Fermat => x.sqrt().scale(b),
            FermatArchimedean => (x * x.offset(b * b / (a * a))).sqrt().scale(a),
            Logarithmic => x.scale(k).exp().scale(a),
            Hyperbolic => x.recip().scale(-a),
            Involute => (x * x).offset(1.0).sqrt().scale(a),
            Atzema => family::atzema_radius_jet(a, t),
            ModifiedAtzema => (x - x.recip()).scale(a),
            JellyRoll => x.atan().scale(1.0 / (2.0 * PI)).offset(0.75).scale(a),
            CustomSampled => self.spline.as_ref().unwrap().jet(t),
        }
    }

    /// Taylor jet of r around θ (derivatives up to fourth order).
    pub fn radius_jet(&self, theta: f64) -> Result<Jet> {
        self.check(theta)?;
        Ok(self.radius_jet_unchecked(theta))
    }

    pub fn radius(&self, theta: f64) -> Result<f64> {
        self.check(theta)?;
        Ok(self.radius_value(theta))
    }

    pub fn dradius(&self, theta: f64) -> Result<f64> {
        Ok(self.radius_jet(theta)?.deriv(1))
    }

    pub fn d2radius(&self, theta: f64) -> Result<f64> {
        Ok(self.radius_jet(theta)?.deriv(2))
    }

    /// Inner boundary radius max(0, r(θ − 2π/m)) of the strip; zero below the curve start.
    pub fn inner_radius(&self, theta: f64) -> f64 {
        let t = theta - self.period();
        if t < self.theta_min {
            0.0
        } else {
            self.radius_value(t).max(0.0)
        }
    }

    /// r(θ₁) − r(θ₂), evaluated without cancellation where the family allows.
    pub fn radius_difference(&self, t1: f64, t2: f64) -> Result<f64> {
        use Family::*;
        self.check(t1)?;
        self.check(t2)?;
        let (a, b, k) = (self.a, self.b, self.k);
        let d = t1 - t2;
        Ok(match self.family() {
            Archimedean | MultiArmArchimedean => a * d,
            Fermat => b * d / (t1.sqrt() + t2.sqrt()),
            FermatArchimedean => {
                let kk = b * b / (a * a);
                let q1 = (t1 * (t1 + kk)).sqrt();
                let q2 = (t2 * (t2 + kk)).sqrt();
                a * d * (t1 + t2 + kk) / (q1 + q2)
            }
            Logarithmic => a * (k * t2).exp() * (k * d).exp_m1(),
            Hyperbolic => a * d / (t1 * t2),
            Involute => {
                let q1 = (1.0 + t1 * t1).sqrt();
                let q2 = (1.0 + t2 * t2).sqrt();
                a * d * (t1 + t2) / (q1 + q2)
            }
            ModifiedAtzema => a * (d + d / (t1 * t2)),
            JellyRoll if 1.0 + t1 * t2 > 0.0 => a * (d / (1.0 + t1 * t2)).atan() / (2.0 * PI),
            _ => self.radius_value(t1) - self.radius_value(t2),
        })
    }

    /// Width function a(θ) = (m/2π)(r(θ) − r(θ − 2π/m)).
    pub fn width_function(&self, theta: f64) -> Result<f64> {
        let p = self.period();
        if theta < self.theta_min + p {
            return Err(Error::Domain {
                family: self.family().name(),
                theta,
                detail: format!("width function needs theta >= {}", self.theta_min + p),
            });
        }
        Ok(self.radius_difference(theta, theta - p)? / p)
    }

    /// a(θ) − a₀ for families with a linear asymptote of slope a₀.
    pub(crate) fn width_excess(&self, theta: f64, a0: f64) -> Result<f64> {
        use Family::*;
        let p = self.period();
        let (t1, t2) = (theta, theta - p);
        self.width_function(theta)?;
        let a = self.a;
        Ok(match self.family() {
            Archimedean | MultiArmArchimedean => 0.0,
            FermatArchimedean => {
                let kk = self.b * self.b / (a * a);
                let q1 = (t1 * (t1 + kk)).sqrt();
                let q2 = (t2 * (t2 + kk)).sqrt();
                let h = 0.5 * kk;
                a * 0.25 * kk * kk * (1.0 / (t1 + h + q1) + 1.0 / (t2 + h + q2)) / (q1 + q2)
            }
            Involute => {
                let q1 = (1.0 + t1 * t1).sqrt();
                let q2 = (1.0 + t2 * t2).sqrt();
                a * (-1.0 / (t1 + q1) - 1.0 / (t2 + q2)) / (q1 + q2)
            }
            ModifiedAtzema => a / (t1 * t2),
            _ => self.width_function(theta)? - a0,
        })
    }

    /// r(θ) − a₀θ for families with a linear asymptote, evaluated stably.
    pub(crate) fn offset_from_asymptote(&self, theta: f64, a0: f64) -> Result<f64> {
        use Family::*;
        self.check(theta)?;
        let a = self.a;
        Ok(match self.family() {
            FermatArchimedean => {
                let kk = self.b * self.b / (a * a);
                a * kk * theta / ((theta * (theta + kk)).sqrt() + theta)
            }
            Involute => a / ((1.0 + theta * theta).sqrt() + theta),
            ModifiedAtzema => -a / theta,
            Archimedean | MultiArmArchimedean => 0.0,
            _ => self.radius_value(theta) - a0 * theta,
        })
    }

    fn speed(&self, t: f64) -> f64 {
        let j = self.radius_jet_unchecked(t);
        j.value().hypot(j.deriv(1))
    }

    /// Arc length from `theta_min` to θ by adaptive Gauss–Kronrod quadrature.
    pub fn arc_length(&self, theta: f64) -> Result<f64> {
        self.check(theta)?;
        self.arc_length_between(self.theta_min, theta)
    }

    pub fn arc_length_between(&self, t0: f64, t1: f64) -> Result<f64> {
        self.check(t0)?;
        self.check(t1)?;
        let f = |t: f64| {
            if t <= self.theta_min {
                // Endpoint of families whose derivative blows up at the start.
                let j = self.radius_jet_unchecked(t);
                let v = j.value().hypot(j.deriv(1));
                if v.is_finite() { v } else { 0.0 }
            } else {
                self.speed(t)
            }
        };
        // Split long ranges so the error control stays local.
        let n = (((t1 - t0).abs() / PI).ceil() as usize).max(1);
        let h = (t1 - t0) / n as f64;
        let mut total: f64 = 0.0;
        for i in 0..n {
            let (a, b) = (t0 + i as f64 * h, t0 + (i + 1) as f64 * h);
            total += quadrature::integrate(f, a, b, 1e-14 * (1.0 + total.abs()), 1e-14)?;
        }
        Ok(total)
    }

    /// Polar angle at arc length `s`, by monotone bisection to 1e-12.
    pub fn theta_at_arc_length(&self, s: f64) -> Result<f64> {
        if s < 0.0 {
            return Err(Error::Domain {
                family: self.family().name(),
                theta: s,
                detail: "arc length must be non-negative".into(),
            });
        }
        let mut lo = self.theta_min;
        let mut step = 1.0;
        let mut hi = lo + step;
        loop {
            if hi >= self.theta_hi {
                hi = if self.theta_hi.is_finite() { self.theta_hi - 1e-12 * (1.0 + self.theta_hi.abs()) } else { hi };
                break;
            }
            if self.arc_length(hi)? >= s {
                break;
            }
            lo = hi;
            step *= 2.0;
            hi = lo + step;
        }
        let mut s_lo = self.arc_length(lo)?;
        for _ in 0..200 {
            if hi - lo <= 1e-12 * (1.0 + hi.abs()) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let sm = s_lo + self.arc_length_between(lo, mid)?;
            if sm < s {
                lo = mid;
                s_lo = sm;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Curvature jet κ(θ) (exact through the second Taylor coefficient).
    fn curvature_jet(&self, theta: f64) -> (Jet, Jet) {
        let r = self.radius_jet_unchecked(theta);
        let dr = r.derivative();
        let d2r = dr.derivative();
        let l2 = r * r + dr * dr;
        let len = l2.sqrt();
        let kappa = (r * r + (dr * dr).scale(2.0) - r * d2r) / (l2 * len);
        (kappa, len)
    }

    pub fn curvature(&self, theta: f64) -> Result<CurvatureSample> {
        self.check(theta)?;
        let (kappa, len) = self.curvature_jet(theta);
        let ks = kappa.derivative() / len;
        let kss = ks.derivative() / len;
        Ok(CurvatureSample {
            kappa: kappa.value(),
            dkappa_ds: ks.value(),
            d2kappa_ds2: kss.value(),
        })
    }

    pub fn frame(&self, theta: f64) -> Result<FrameSample> {
        self.check(theta)?;
        let j = self.radius_jet_unchecked(theta);
        let (r, dr) = (j.value(), j.deriv(1));
        let len = r.hypot(dr);
        let (sn, cs) = theta.sin_cos();
        let e_r = [cs, sn];
        let e_t = [-sn, cs];
        let tangent = [(dr * e_r[0] + r * e_t[0]) / len, (dr * e_r[1] + r * e_t[1]) / len];
        let normal = [(-r * e_r[0] + dr * e_t[0]) / len, (-r * e_r[1] + dr * e_t[1]) / len];
        Ok(FrameSample {
            theta,
            r,
            dr,
            position: [r * cs, r * sn],
            tangent,
            normal,
            kappa: self.curvature(theta)?.kappa,
            s: self.arc_length(theta)?,
        })
    }

    /// Point at normal distance `u` from the curve point at θ.
    pub fn fermi_point(&self, theta: f64, u: f64) -> Result<[f64; 2]> {
        self.check(theta)?;
        let d = self.orthogonal_width(theta)?.u;
        if !(0.0..=d).contains(&u) {
            return Err(Error::Range { theta, u, width: d });
        }
        Ok(self.offset_point(theta, u))
    }

    pub(crate) fn offset_point(&self, theta: f64, u: f64) -> [f64; 2] {
        let j = self.radius_jet_unchecked(theta);
        let (r, dr) = (j.value(), j.deriv(1));
        let len = r.hypot(dr);
        let (sn, cs) = theta.sin_cos();
        let nx = (-r * cs - dr * sn) / len;
        let ny = (-r * sn + dr * cs) / len;
        [r * cs + u * nx, r * sn + u * ny]
    }

    /// Distance from the origin to the normal line at θ.
    pub fn normal_origin_distance(&self, theta: f64) -> Result<f64> {
        let j = self.radius_jet(theta)?;
        let (r, dr) = (j.value(), j.deriv(1));
        Ok((r * dr).abs() / r.hypot(dr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * (1.0 + y.abs())
    }

    #[test]
    fn radius_examples() {
        let s = Spiral::new(SpiralSpec::archimedean(0.5)).unwrap();
        assert!(close(s.radius(2.0 * PI).unwrap(), PI, 1e-15));
        let f = Spiral::new(SpiralSpec::fermat(1.0)).unwrap();
        assert_eq!(f.radius(4.0).unwrap(), 2.0);
        let fa = Spiral::new(SpiralSpec::fermat_archimedean(1.0, 1.0)).unwrap();
        assert!(close(fa.radius(3.0).unwrap(), 12f64.sqrt(), 1e-15));
        assert!(matches!(s.radius(-1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn derivatives_are_analytic() {
        let fa = Spiral::new(SpiralSpec::fermat_archimedean(1.3, 0.7)).unwrap();
        let t = 2.5;
        let h = 1e-4;
        let fd = (fa.radius(t + h).unwrap() - fa.radius(t - h).unwrap()) / (2.0 * h);
        assert!(close(fa.dradius(t).unwrap(), fd, 1e-8));
        let fd2 = (fa.radius(t + h).unwrap() - 2.0 * fa.radius(t).unwrap() + fa.radius(t - h).unwrap()) / (h * h);
        assert!(close(fa.d2radius(t).unwrap(), fd2, 1e-6));
    }

    #[test]
    fn width_function_examples() {
        let s = Spiral::new(SpiralSpec::archimedean(0.7)).unwrap();
        assert!(close(s.width_function(20.0).unwrap(), 0.7, 1e-15));
        let f = Spiral::new(SpiralSpec::fermat(1.0).with_m(2)).unwrap();
        let expect = (4.0 - (16.0 - PI).sqrt()) / PI;
        assert!(close(f.width_function(16.0).unwrap(), expect, 1e-14));
        assert!(close(expect, 0.131824, 1e-5));
        assert!(s.width_function(1.0).is_err());
    }

    #[test]
    fn stable_width_matches_direct_difference() {
        for spec in [
            SpiralSpec::fermat_archimedean(1.0, 1.0),
            SpiralSpec::involute(0.5),
            SpiralSpec::modified_atzema(0.8),
            SpiralSpec::logarithmic(1.0, 0.1),
            SpiralSpec::hyperbolic(1.0),
            SpiralSpec::jelly_roll(1.0),
        ] {
            let s = Spiral::new(spec).unwrap();
            let t = if s.family() == Family::Hyperbolic { -3.0 } else { 9.0 };
            let direct = (s.radius(t).unwrap() - s.radius(t - 2.0 * PI).unwrap()) / (2.0 * PI);
            assert!(close(s.width_function(t).unwrap(), direct, 1e-12), "{:?}", s.family());
        }
    }

    #[test]
    fn archimedean_arc_length_closed_form() {
        let a = 0.5;
        let s = Spiral::new(SpiralSpec::archimedean(a)).unwrap();
        let exact = |t: f64| 0.5 * a * (t * (1.0 + t * t).sqrt() + t.asinh());
        for &t in &[0.3, 2.0 * PI, 17.0, 300.0] {
            let q = s.arc_length(t).unwrap();
            assert!((q - exact(t)).abs() <= 1e-10 * exact(t), "theta={t}");
        }
        assert!(close(s.arc_length(2.0 * PI).unwrap() / a, 21.255, 1e-4));
        assert_eq!(s.arc_length(0.0).unwrap(), 0.0);
    }

    #[test]
    fn fermat_arc_length_leading_order() {
        let s = Spiral::new(SpiralSpec::fermat(1.0)).unwrap();
        let v = s.arc_length(400.0).unwrap();
        let lead = 2.0 / 3.0 * 400f64.powf(1.5);
        assert!(((v - lead) / lead).abs() < 0.01);
    }

    #[test]
    fn arc_length_inverse() {
        let s = Spiral::new(SpiralSpec::archimedean(0.5)).unwrap();
        let th = s.theta_at_arc_length(s.arc_length(7.3).unwrap()).unwrap();
        assert!((th - 7.3).abs() < 1e-10);
    }

    #[test]
    fn curvature_examples() {
        let s = Spiral::new(SpiralSpec::archimedean(0.5)).unwrap();
        assert!(close(s.curvature(0.0).unwrap().kappa, 4.0, 1e-14));
        let k = s.curvature(100.0).unwrap().kappa;
        assert!(((k - 0.02) / 0.02).abs() <= 0.02);
        let c = Spiral::new(SpiralSpec::custom((0..20).map(|i| [i as f64 * 0.5, 3.0]).collect())).unwrap();
        assert!(close(c.curvature(4.1).unwrap().kappa, 1.0 / 3.0, 1e-12));
        assert_eq!(c.normal_origin_distance(4.1).unwrap(), 0.0);
    }

    #[test]
    fn frame_at_origin_and_offsets() {
        let s = Spiral::new(SpiralSpec::archimedean(0.5)).unwrap();
        let f = s.frame(0.0).unwrap();
        assert_eq!(f.position, [0.0, 0.0]);
        assert!(close(f.tangent[0], 1.0, 1e-15) && f.tangent[1].abs() < 1e-15);
        assert!(f.normal[0].abs() < 1e-15 && close(f.normal[1], 1.0, 1e-15));
        let t = 4.0 * PI;
        let p = s.fermi_point(t, 1.0).unwrap();
        let q = s.frame(t).unwrap().position;
        assert!(((p[0] - q[0]).hypot(p[1] - q[1]) - 1.0).abs() < 1e-12);
        assert_eq!(s.fermi_point(t, 0.0).unwrap(), q);
        assert!(matches!(s.fermi_point(t, 10.0), Err(Error::Range { .. })));
    }

    #[test]
    fn normal_origin_distance_plug_in() {
        let s = Spiral::new(SpiralSpec::archimedean(1.0)).unwrap();
        assert!(close(s.normal_origin_distance(1.0).unwrap(), 0.5f64.sqrt(), 1e-15));
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"family":"fermat-archimedean","a":1.0,"b":0.5,"m":1,"beta":0.0}"#;
        let spec = SpiralSpec::from_json(text).unwrap();
        assert_eq!(spec, SpiralSpec::fermat_archimedean(1.0, 0.5));
        let back: SpiralSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        assert!(Spiral::new(SpiralSpec::archimedean(-1.0)).is_err());
        assert!(Spiral::new(SpiralSpec::multi_arm(1.0, 0)).is_err());
    }
}
