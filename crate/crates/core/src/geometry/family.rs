//! Closed-form radius laws of the supported spiral families.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::jet::Jet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Archimedean,
    MultiArmArchimedean,
    Fermat,
    FermatArchimedean,
    Logarithmic,
    Hyperbolic,
    Involute,
    /// Parametric form r = a(t + 1/t), θ = t + π − atan((t − 1/t)/2), t > 1.
    Atzema,
    /// r = a(θ − 1/θ), θ ≥ 1.
    ModifiedAtzema,
    JellyRoll,
    CustomSampled,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Archimedean => "archimedean",
            Family::MultiArmArchimedean => "multi-arm-archimedean",
            Family::Fermat => "fermat",
            Family::FermatArchimedean => "fermat-archimedean",
            Family::Logarithmic => "logarithmic",
            Family::Hyperbolic => "hyperbolic",
            Family::Involute => "involute",
            Family::Atzema => "atzema",
            Family::ModifiedAtzema => "modified-atzema",
            Family::JellyRoll => "jelly-roll",
            Family::CustomSampled => "custom-sampled",
        }
    }

    /// Natural parameter interval `(lo, hi, lo_is_open)` and the default lower bound.
    pub(crate) fn natural_domain(self) -> (f64, f64, bool, f64) {
        match self {
            Family::Archimedean
            | Family::MultiArmArchimedean
            | Family::Fermat
            | Family::FermatArchimedean
            | Family::Involute => (0.0, f64::INFINITY, false, 0.0),
            Family::Logarithmic | Family::JellyRoll => (f64::NEG_INFINITY, f64::INFINITY, false, 0.0),
            Family::Hyperbolic => (f64::NEG_INFINITY, 0.0, false, -8.0 * PI),
            Family::Atzema => (atzema_theta(1.0), f64::INFINITY, true, atzema_theta(2.0)),
            Family::ModifiedAtzema => (1.0, f64::INFINITY, false, 1.0),
            // Replaced by the sample range.
            Family::CustomSampled => (f64::NEG_INFINITY, f64::INFINITY, false, 0.0),
        }
    }
}

/// Polar angle of the Atzema spiral at curve parameter `t`.
pub(crate) fn atzema_theta(t: f64) -> f64 {
    t + PI - ((t - 1.0 / t) / 2.0).atan()
}

fn atzema_theta_jet(t: Jet) -> Jet {
    let arg = (t - t.recip()).scale(0.5);
    t.offset(PI) - arg.atan()
}

/// Curve parameter t > 1 with `atzema_theta(t) == theta`, by safeguarded Newton.
pub(crate) fn atzema_parameter(theta: f64) -> f64 {
    let (mut lo, mut hi) = (1.0, theta.max(2.0));
    let mut t = (theta - PI / 2.0).clamp(1.0 + 1e-6, hi);
    for _ in 0..200 {
        let f = atzema_theta(t) - theta;
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let d = (t * t - 1.0) / (t * t + 1.0);
        let mut next = t - f / d;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t {
            return next;
        }
        t = next;
    }
    t
}

/// Radius jet of the Atzema spiral as a function of the polar angle: the
/// parameter jet T(θ) is obtained by Newton iteration on jets, each step
/// doubling the number of correct Taylor coefficients.
pub(crate) fn atzema_radius_jet(a: f64, theta: f64) -> Jet {
    let x = Jet::variable(theta);
    let mut t = Jet::constant(atzema_parameter(theta));
    for _ in 0..4 {
        let t2 = t * t;
        let dtheta = (t2.offset(-1.0)) / (t2.offset(1.0));
        t = t - (atzema_theta_jet(t) - x) / dtheta;
    }
    (t + t.recip()).scale(a)
}
