//! Qualitative classification of spiral regions by the behaviour of their
//! width function.

use serde::Serialize;

use super::{Family, Spiral};
use crate::error::{Error, Result};
use crate::fit::linear_fit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    /// Width function non-decreasing.
    Expanding,
    /// Width function non-increasing.
    Shrinking,
    /// Constant width (both expanding and shrinking, neither strictly).
    Constant,
    Neither,
}

/// Linear asymptote r(θ) ≈ a₀θ + b₀ with width excess a(θ) − a₀ ≈ c θ^{−γ}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub a0: f64,
    pub b0: f64,
    /// Zero for an exactly Archimedean tail, in which case `gamma` is infinite.
    pub c: f64,
    pub gamma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub simple: bool,
    pub monotonicity: Monotonicity,
    pub strict: bool,
    pub asymptotically_archimedean: Option<AsymptoticFit>,
    /// Radius of the bounding disc for bounded spirals.
    pub bounded: Option<f64>,
}

const FIT_LO: f64 = 1e2;
const FIT_HI: f64 = 1e4;
const FIT_POINTS: usize = 40;

impl Spiral {
    pub fn classify(&self) -> Result<Classification> {
        use Family::*;
        use Monotonicity::*;
        let (a, _, _) = self.params();
        let plain = |monotonicity, strict| Classification {
            simple: true,
            monotonicity,
            strict,
            asymptotically_archimedean: None,
            bounded: None,
        };
        Ok(match self.family() {
            Archimedean | MultiArmArchimedean => Classification {
                asymptotically_archimedean: Some(AsymptoticFit {
                    a0: a,
                    b0: 0.0,
                    c: 0.0,
                    gamma: f64::INFINITY,
                }),
                ..plain(Constant, false)
            },
            Fermat => plain(Shrinking, true),
            Logarithmic | Hyperbolic => plain(Expanding, true),
            FermatArchimedean | ModifiedAtzema => Classification {
                asymptotically_archimedean: Some(self.fit_asymptote(a)?),
                ..plain(Shrinking, true)
            },
            Involute => Classification {
                asymptotically_archimedean: Some(self.fit_asymptote(a)?),
                ..plain(Expanding, true)
            },
            Atzema => {
                let fit = self.fit_asymptote(a)?;
                let monotonicity = if fit.c > 0.0 { Shrinking } else { Expanding };
                Classification {
                    asymptotically_archimedean: Some(fit),
                    ..plain(monotonicity, true)
                }
            }
            JellyRoll => Classification {
                bounded: Some(a),
                ..plain(Neither, false)
            },
            CustomSampled => self.classify_sampled()?,
        })
    }

    /// Log-log regression of the width excess over θ ∈ [10², 10⁴].
    ///
    /// The width function is a centred difference over one coil, so the
    /// excess is regressed against the midpoint θ − π/m.
    fn fit_asymptote(&self, a0: f64) -> Result<AsymptoticFit> {
        let half = 0.5 * self.period();
        let mut xs = Vec::with_capacity(FIT_POINTS);
        let mut ys = Vec::with_capacity(FIT_POINTS);
        let mut sign = 0.0;
        for i in 0..FIT_POINTS {
            let t = FIT_LO * (FIT_HI / FIT_LO).powf(i as f64 / (FIT_POINTS - 1) as f64);
            let e = self.width_excess(t, a0)?;
            if e == 0.0 || !e.is_finite() {
                return Err(Error::ClassificationUnavailable(format!(
                    "width excess vanishes at theta = {t}"
                )));
            }
            if sign == 0.0 {
                sign = e.signum();
            } else if sign != e.signum() {
                return Err(Error::ClassificationUnavailable("width excess changes sign".into()));
            }
            xs.push((t - half).ln());
            ys.push(e.abs().ln());
        }
        let fit = linear_fit(&xs, &ys);
        let (slope, intercept) = (fit.slope, fit.intercept);
        let gamma = -slope;
        let c = sign * intercept.exp();
        let b0 = if gamma > 1.0 {
            self.offset_from_asymptote(FIT_HI, a0)? + c * FIT_HI.powf(1.0 - gamma) / (gamma - 1.0)
        } else {
            f64::NAN
        };
        Ok(AsymptoticFit { a0, b0, c, gamma })
    }

    /// Sampled curves: only a tail of constant width is recognised.
    fn classify_sampled(&self) -> Result<Classification> {
        let hi = self.theta_max_domain();
        let lo = (self.theta_min() + self.period()).max(hi - 0.25 * (hi - self.theta_min()));
        if lo >= hi {
            return Err(Error::ClassificationUnavailable("sample range shorter than one coil".into()));
        }
        let widths: Vec<f64> = (0..=20)
            .map(|i| self.width_function(lo + (hi - lo) * i as f64 / 20.0))
            .collect::<Result<_>>()?;
        let mean = widths.iter().sum::<f64>() / widths.len() as f64;
        if widths.iter().all(|w| (w - mean).abs() <= 1e-9 * mean.abs()) && mean > 0.0 {
            Ok(Classification {
                simple: true,
                monotonicity: Monotonicity::Constant,
                strict: false,
                asymptotically_archimedean: Some(AsymptoticFit {
                    a0: mean,
                    b0: self.radius(hi)? - mean * hi,
                    c: 0.0,
                    gamma: f64::INFINITY,
                }),
                bounded: None,
            })
        } else {
            Err(Error::ClassificationUnavailable(
                "sampled spiral has no recognisable tail".into(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::SpiralSpec;
    use super::*;

    #[test]
    fn named_families() {
        let f = Spiral::new(SpiralSpec::fermat(1.0)).unwrap().classify().unwrap();
        assert!(f.simple && f.strict && f.monotonicity == Monotonicity::Shrinking);
        let l = Spiral::new(SpiralSpec::logarithmic(1.0, 0.2)).unwrap().classify().unwrap();
        assert!(l.simple && l.strict && l.monotonicity == Monotonicity::Expanding);
        let j = Spiral::new(SpiralSpec::jelly_roll(2.0)).unwrap().classify().unwrap();
        assert_eq!(j.bounded, Some(2.0));
    }

    #[test]
    fn fermat_archimedean_asymptote() {
        let (a, b) = (1.0, 1.0);
        let c = Spiral::new(SpiralSpec::fermat_archimedean(a, b)).unwrap().classify().unwrap();
        let fit = c.asymptotically_archimedean.unwrap();
        assert_eq!(fit.a0, 1.0);
        assert!((fit.gamma - 2.0).abs() < 0.05, "gamma {}", fit.gamma);
        let c_exact = b.powi(4) / (8.0 * a * a * a);
        assert!(((fit.c - c_exact) / c_exact).abs() < 0.02, "c {}", fit.c);
        assert!(((fit.b0 - 0.5) / 0.5).abs() < 0.02, "b0 {}", fit.b0);
    }

    #[test]
    fn other_asymptotically_archimedean_families() {
        let fit = Spiral::new(SpiralSpec::modified_atzema(0.5)).unwrap().classify().unwrap()
            .asymptotically_archimedean.unwrap();
        assert!((fit.gamma - 2.0).abs() < 0.05 && ((fit.c - 0.5) / 0.5).abs() < 0.02);
        let inv = Spiral::new(SpiralSpec::involute(1.0)).unwrap().classify().unwrap();
        let fit = inv.asymptotically_archimedean.unwrap();
        assert!((fit.gamma - 2.0).abs() < 0.05 && ((fit.c + 0.5) / 0.5).abs() < 0.02);
    }

    #[test]
    fn sampled_tail() {
        let circle: Vec<[f64; 2]> = (0..40).map(|i| [i as f64 * 0.5, 2.0 + 0.1 * i as f64 * 0.5]).collect();
        let c = Spiral::new(SpiralSpec::custom(circle)).unwrap().classify().unwrap();
        assert!((c.asymptotically_archimedean.unwrap().a0 - 0.1).abs() < 1e-9);
        let wobbly: Vec<[f64; 2]> = (0..40)
            .map(|i| {
                let t = i as f64 * 0.5;
                [t, 2.0 + t + 0.1 * t.sin()]
            })
            .collect();
        assert!(matches!(
            Spiral::new(SpiralSpec::custom(wobbly)).unwrap().classify(),
            Err(Error::ClassificationUnavailable(_))
        ));
    }
}
