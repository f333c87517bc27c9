//! Orthogonal coil width: intersection of the inward normal with the
//! neighbouring coil, and the Fermi-coordinate validity threshold.

use serde::Serialize;

use super::Spiral;
use crate::error::{Error, Result};

/// Result of the normal-line / neighbouring-coil intersection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrthogonalWidth {
    /// Distance along the inward normal.
    pub u: f64,
    /// Curve parameter of the intersection point on the neighbouring coil.
    pub theta_minus: f64,
    pub iterations: usize,
}

const MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 10;

impl Spiral {
    /// Residual of the intersection system in the polar frame at θ.
    ///
    /// The neighbouring coil point with parameter θ₋ = θ − 2π/m + δ sits at
    /// relative polar angle δ, so with D = r(θ) − r(θ₋):
    ///   E₁ = D + r₋(1 − cos δ) − u r/L,
    ///   E₂ = u ṙ/L − r₋ sin δ.
    fn width_residual(&self, theta: f64, r: f64, dr: f64, len: f64, u: f64, delta: f64) -> Result<([f64; 2], [[f64; 2]; 2])> {
        let tm = theta - self.period() + delta;
        let jm = self.radius_jet(tm)?;
        let (rm, drm) = (jm.value(), jm.deriv(1));
        let d = self.radius_difference(theta, tm)?;
        let (sd, cd) = delta.sin_cos();
        let omc = 2.0 * (0.5 * delta).sin().powi(2);
        let f = [d + rm * omc - u * r / len, u * dr / len - rm * sd];
        let jac = [
            [-r / len, -drm + drm * omc + rm * sd],
            [dr / len, -drm * sd - rm * cd],
        ];
        Ok((f, jac))
    }

    /// Smallest positive distance along the inward normal at θ to the
    /// neighbouring coil, by damped Newton iteration on (u, δ).
    pub fn orthogonal_width(&self, theta: f64) -> Result<OrthogonalWidth> {
        self.check(theta)?;
        let p = self.period();
        let seed_t = theta - p;
        if seed_t < self.theta_min() {
            return Err(Error::Domain {
                family: self.family().name(),
                theta,
                detail: format!("orthogonal width needs theta >= {}", self.theta_min() + p),
            });
        }
        if self.normal_origin_distance(theta)? > self.radius(seed_t)? {
            return Err(Error::NoIntersection { theta });
        }
        let j = self.radius_jet(theta)?;
        let (r, dr) = (j.value(), j.deriv(1));
        let len = r.hypot(dr);
        let tol = 1e-12 * (1.0 + r);

        let mut u = self.radius_difference(theta, seed_t)?;
        let mut delta = 0.0;
        let (mut f, mut jac) = self.width_residual(theta, r, dr, len, u, delta)?;
        let mut norm = f[0].hypot(f[1]);
        for it in 0..MAX_ITER {
            if norm <= tol {
                if u <= 0.0 {
                    return Err(Error::NoIntersection { theta });
                }
                return Ok(OrthogonalWidth {
                    u,
                    theta_minus: theta - p + delta,
                    iterations: it,
                });
            }
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let du = (f[0] * jac[1][1] - f[1] * jac[0][1]) / det;
            let dd = (jac[0][0] * f[1] - jac[1][0] * f[0]) / det;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..=MAX_HALVINGS {
                let (nu, nd) = (u - lambda * du, delta - lambda * dd);
                if let Ok((nf, nj)) = self.width_residual(theta, r, dr, len, nu, nd) {
                    let nn = nf[0].hypot(nf[1]);
                    if nn < norm || nn <= tol {
                        (u, delta, f, jac, norm) = (nu, nd, nf, nj, nn);
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        Err(Error::Convergence {
            what: "orthogonal width",
            iterations: MAX_ITER,
            residual: norm,
        })
    }

    /// Smallest scanned angle beyond which the normal reaches the
    /// neighbouring coil, the width stays below the radial width and the
    /// offset map is locally injective (u κ < 1 across the strip). Cached.
    pub fn fermi_threshold(&self) -> Option<f64> {
        *self.fermi_threshold.get_or_init(|| self.scan_fermi_threshold())
    }

    fn fermi_valid_at(&self, theta: f64) -> bool {
        let Ok(w) = self.orthogonal_width(theta) else {
            return false;
        };
        let Ok(radial) = self.radius_difference(theta, theta - self.period()) else {
            return false;
        };
        let Ok(c) = self.curvature(theta) else {
            return false;
        };
        w.u <= radial * (1.0 + 1e-12) && w.u * c.kappa < 1.0
    }

    fn scan_fermi_threshold(&self) -> Option<f64> {
        let p = self.period();
        let start = self.theta_min() + p;
        let steps = 400;
        let h = 4.0 * p / steps as f64;
        let end = if self.theta_max_domain().is_finite() {
            self.theta_max_domain().min(start + 4.0 * p)
        } else {
            start + 4.0 * p
        };
        let grid: Vec<f64> = (0..=steps).map(|i| start + i as f64 * h).filter(|&t| t < end).collect();
        let mut candidate = None;
        for &t in &grid {
            if self.fermi_valid_at(t) {
                candidate.get_or_insert(t);
            } else {
                candidate = None;
            }
        }
        candidate
    }
}
