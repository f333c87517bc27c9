//! Closed-form expansions, counting laws and Bessel-zero critical angles
//! used to cross-check the finite-element spectra.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bessel::bessel_zero;
use crate::error::{Error, Result};
use crate::fit::{loglog_fit, LinearFit};
use crate::geometry::{Monotonicity, Spiral, SpiralSpec};

/// Bottom of the essential spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EssentialThreshold {
    Energy { value: f64 },
    /// The essential spectrum covers the whole half-line.
    Zero,
    /// Empty essential spectrum (threshold at +∞).
    PurelyDiscrete,
}

impl EssentialThreshold {
    pub fn value(self) -> f64 {
        match self {
            EssentialThreshold::Energy { value } => value,
            EssentialThreshold::Zero => 0.0,
            EssentialThreshold::PurelyDiscrete => f64::INFINITY,
        }
    }
}

/// Essential-spectrum threshold from the classification of the tail:
/// (m/2a₀)² for (asymptotically) Archimedean regions.
pub fn essential_threshold(spiral: &Spiral) -> Result<EssentialThreshold> {
    let c = spiral.classify()?;
    if c.bounded.is_some() {
        return Ok(EssentialThreshold::PurelyDiscrete);
    }
    if let Some(fit) = c.asymptotically_archimedean {
        let v = spiral.m() as f64 / (2.0 * fit.a0);
        return Ok(EssentialThreshold::Energy { value: v * v });
    }
    match (c.monotonicity, c.strict) {
        (Monotonicity::Expanding, true) => Ok(EssentialThreshold::Zero),
        (Monotonicity::Shrinking, true) => Ok(EssentialThreshold::PurelyDiscrete),
        _ => Err(Error::ClassificationUnavailable("tail is neither expanding nor shrinking".into())),
    }
}

/// First `count` entries of the critical-angle sequence divided by m:
/// doubled Bessel zeros 2j_{n,k} in ascending order, entries with n ≥ 1 twice.
pub fn critical_angle_sequence(m: usize, count: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidInput("arm count must be at least 1".into()));
    }
    let mut bound = 8.0;
    loop {
        let mut zeros = Vec::new();
        for n in 0.. {
            let mut k = 1;
            let mut any = false;
            loop {
                let z = bessel_zero(n, k)?;
                if z > bound {
                    break;
                }
                any = true;
                zeros.push(z);
                if n > 0 {
                    zeros.push(z);
                }
                k += 1;
            }
            if !any {
                break;
            }
        }
        if zeros.len() >= count {
            zeros.sort_by(f64::total_cmp);
            zeros.truncate(count);
            return Ok(zeros.into_iter().map(|z| 2.0 * z / m as f64).collect());
        }
        bound *= 2.0;
    }
}

/// Radius of the osculating circle of r = aθ at θ = β.
pub fn osculating_radius(a: f64, beta: f64) -> f64 {
    a * (1.0 + beta * beta).powf(1.5) / (2.0 + beta * beta)
}

/// Cut angle above which the osculating circle at θ = β holds a Dirichlet
/// disc with ground state below the threshold 1/(4a²).
///
/// The condition ρ(β) = 2a j₀,₁ is a cubic in x = β²,
/// (1 + x)³ = 4 j₀,₁² (2 + x)², independent of a.
pub fn osculating_critical(a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::InvalidInput("slope must be positive".into()));
    }
    let j = bessel_zero(0, 1)?;
    let c = 4.0 * j * j;
    let f = |x: f64| (1.0 + x).powi(3) - c * (2.0 + x).powi(2);
    let df = |x: f64| 3.0 * (1.0 + x).powi(2) - 2.0 * c * (2.0 + x);
    // f < 0 at x = 0 and f → +∞; the cubic has a single positive root.
    let mut x = c;
    for _ in 0..100 {
        let dx = f(x) / df(x);
        x -= dx;
        if dx.abs() < 1e-15 * x {
            return Ok(x.sqrt());
        }
    }
    Err(Error::Convergence { what: "osculating critical angle", iterations: 100, residual: f(x).abs() })
}

/// Whether the osculating disc at θ = β binds a state.
pub fn osculating_criterion(a: f64, beta: f64) -> Result<bool> {
    Ok(osculating_radius(a, beta) > 2.0 * a * bessel_zero(0, 1)?)
}

/// Expansion of (π/d)² for the one-arm Archimedean spiral r = aθ.
pub fn transverse_threshold_expansion(theta: f64, a: f64) -> f64 {
    let a2 = a * a;
    let t = theta;
    1.0 / (4.0 * a2)
        + 1.0 / (4.0 * a2 * t * t)
        + PI / (2.0 * a2 * t.powi(3))
        + PI * PI / (a2 * t.powi(4))
        + PI * (4.0 * PI * PI - 1.0) / (2.0 * a2 * t.powi(5))
}

/// Effective potential of the Fermi-coordinate Laplacian,
/// V = −κ²/(4(1−uκ)²) − uκ̈/(2(1−uκ)³) − (5/4)u²κ̇²/(1−uκ)⁴.
pub fn effective_potential(spiral: &Spiral, theta: f64, u: f64) -> Result<f64> {
    let c = spiral.curvature(theta)?;
    effective_potential_from(c.kappa, c.dkappa_ds, c.d2kappa_ds2, u).map_err(|uk| Error::CoordinateBreakdown {
        theta,
        u,
        u_kappa: uk,
    })
}

/// V from the curvature and its arc-length derivatives; `Err(uκ)` when uκ ≥ 1.
pub fn effective_potential_from(kappa: f64, dkappa: f64, d2kappa: f64, u: f64) -> std::result::Result<f64, f64> {
    let g = 1.0 - u * kappa;
    if g <= 0.0 {
        return Err(u * kappa);
    }
    Ok(-kappa * kappa / (4.0 * g * g) - u * d2kappa / (2.0 * g.powi(3)) - 1.25 * u * u * dkappa * dkappa / g.powi(4))
}

/// W(θ, u) = (π/d(θ))² + V(θ, u).
pub fn combined_w(spiral: &Spiral, theta: f64, u: f64) -> Result<f64> {
    let d = spiral.orthogonal_width(theta)?.u;
    Ok((PI / d).powi(2) + effective_potential(spiral, theta, u)?)
}

/// Large-θ expansion of V for r = aθ.
pub fn effective_potential_expansion(theta: f64, u: f64, a: f64) -> f64 {
    let a2 = a * a;
    let t = theta;
    -1.0 / (4.0 * a2 * t * t) - u / (2.0 * a.powi(3) * t.powi(3)) - (a2 + 3.0 * u * u) / (4.0 * a2 * a2 * t.powi(4))
        - u * (9.0 * a2 + 4.0 * u * u) / (4.0 * a.powi(5) * t.powi(5))
}

/// Large-θ expansion of W for r = aθ; the θ⁻² terms cancel.
pub fn combination_expansion(theta: f64, u: f64, a: f64) -> f64 {
    let t = theta;
    1.0 / (4.0 * a * a)
        + (PI * a - u) / (2.0 * a.powi(3) * t.powi(3))
        + (a * a * (4.0 * PI * PI - 1.0) - 3.0 * u * u) / (4.0 * a.powi(4) * t.powi(4))
}

/// Leading W for a one-arm asymptotically Archimedean spiral whose width
/// function exceeds a₀ by cθ^{−γ}: 1/(4a₀²) − c/(2a₀³θ^γ).
pub fn inflated_threshold(theta: f64, a0: f64, c: f64, gamma: f64) -> f64 {
    1.0 / (4.0 * a0 * a0) - c / (2.0 * a0.powi(3) * theta.powf(gamma))
}

/// Coefficient C of the θ⁻² tail C/θ² left in W for an m-arm Archimedean
/// region: the width correction m²/(4a²θ²) against the curvature term
/// −1/(4a²θ²). It vanishes only for one arm.
pub fn multi_arm_tail_coefficient(m: usize, a: f64) -> f64 {
    let m2 = (m * m) as f64;
    (m2 - 1.0) / (4.0 * a * a)
}

/// Weyl-type estimate b⁴E²/64 of the Fermat eigenvalue count.
pub fn fermat_weyl_count(energy: f64, b: f64) -> f64 {
    b.powi(4) * energy * energy / 64.0
}

/// Coefficient c of the effective Fermat potential c s^{2/3}:
/// (2/b)²(3/2b)^{2/3}.
pub fn fermat_effective_coefficient(b: f64) -> f64 {
    (2.0 / b).powi(2) * (1.5 / b).powf(2.0 / 3.0)
}

/// Number of eigenvalues below a⁻² − E for the interpolating region,
/// πb⁴/(32a⁵)·E^{−1/2}.
pub fn accumulation_count(gap: f64, a: f64, b: f64) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::InvalidInput(format!("energy gap must be positive (got {gap})")));
    }
    Ok(PI * b.powi(4) / (32.0 * a.powi(5)) / gap.sqrt())
}

/// Log-log fit of an expansion residual against θ.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualOrder {
    pub law: &'static str,
    pub expected_slope: f64,
    pub window: (f64, f64),
    pub thetas: Vec<f64>,
    pub residuals: Vec<f64>,
    pub fit: LinearFit,
}

impl ResidualOrder {
    pub fn within(&self, tol: f64) -> bool {
        (self.fit.slope - self.expected_slope).abs() <= tol
    }
}

pub const FIT_WINDOW: (f64, f64) = (8.0 * PI, 128.0 * PI);
pub const FIT_POINTS: usize = 20;

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn residual_order(
    law: &'static str,
    expected_slope: f64,
    mut residual: impl FnMut(f64) -> Result<f64>,
) -> Result<ResidualOrder> {
    let thetas = log_grid(FIT_WINDOW.0, FIT_WINDOW.1, FIT_POINTS);
    let residuals = thetas.iter().map(|&t| residual(t)).collect::<Result<Vec<_>>>()?;
    let fit = loglog_fit(&thetas, &residuals);
    Ok(ResidualOrder { law, expected_slope, window: FIT_WINDOW, thetas, residuals, fit })
}

/// Residual of the (π/d)² expansion for r = aθ; expected order θ⁻⁶.
pub fn transen_order(a: f64) -> Result<ResidualOrder> {
    let s = Spiral::new(SpiralSpec::archimedean(a))?;
    residual_order("transverse-threshold", -6.0, |t| {
        let d = s.orthogonal_width(t)?.u;
        Ok((PI / d).powi(2) - transverse_threshold_expansion(t, a))
    })
}

/// Residual of the W expansion at mid-strip for r = aθ; expected order θ⁻⁵.
pub fn combination_order(a: f64) -> Result<ResidualOrder> {
    let s = Spiral::new(SpiralSpec::archimedean(a))?;
    residual_order("combined-potential", -5.0, |t| {
        let u = 0.5 * s.orthogonal_width(t)?.u;
        Ok(combined_w(&s, t, u)? - combination_expansion(t, u, a))
    })
}

/// Residual of the inflated-width law at mid-strip for a one-arm
/// asymptotically Archimedean spiral; expected order −min(γ + 1, 3).
pub fn inflation_order(spiral: &Spiral) -> Result<ResidualOrder> {
    if spiral.m() != 1 {
        return Err(Error::InvalidInput("the inflated-width law is stated for one arm".into()));
    }
    let fit = spiral
        .classify()?
        .asymptotically_archimedean
        .filter(|f| f.c != 0.0)
        .ok_or_else(|| Error::ClassificationUnavailable("no inflating linear asymptote".into()))?;
    inflation_order_with(spiral, fit.a0, fit.c, fit.gamma)
}

/// As [`inflation_order`], with the asymptote a₀ + cθ^{−γ} given explicitly.
pub fn inflation_order_with(spiral: &Spiral, a0: f64, c: f64, gamma: f64) -> Result<ResidualOrder> {
    if spiral.m() != 1 {
        return Err(Error::InvalidInput("the inflated-width law is stated for one arm".into()));
    }
    let order = -(gamma + 1.0).min(3.0);
    residual_order("inflated-width", order, |t| {
        let u = 0.5 * spiral.orthogonal_width(t)?.u;
        Ok(combined_w(spiral, t, u)? - inflated_threshold(t, a0, c, gamma))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalAngles {
    pub centred_disc: Vec<f64>,
    /// Only for the one-arm Archimedean family.
    pub osculating: Option<f64>,
}

/// Every law applicable to a spec, evaluated on the standard grid.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub spec: SpiralSpec,
    pub threshold: EssentialThreshold,
    pub asymptote: Option<crate::geometry::AsymptoticFit>,
    pub critical_angles: Option<CriticalAngles>,
    /// (θ, expansion value) on the fit grid.
    pub transverse_threshold: Vec<(f64, f64)>,
    pub residual_orders: Vec<ResidualOrder>,
    /// Coefficient of the θ⁻² tail left by multiple arms.
    pub multi_arm_tail: Option<f64>,
    pub fermat_potential_coefficient: Option<f64>,
    pub accumulation_coefficient: Option<f64>,
}

pub fn report(spec: &SpiralSpec) -> Result<AsymptoticReport> {
    use crate::geometry::Family::*;
    let spiral = Spiral::new(spec.clone())?;
    let threshold = essential_threshold(&spiral)?;
    let asymptote = spiral.classify()?.asymptotically_archimedean;
    let grid = log_grid(FIT_WINDOW.0, FIT_WINDOW.1, FIT_POINTS);
    let mut out = AsymptoticReport {
        spec: spec.clone(),
        threshold,
        asymptote,
        critical_angles: None,
        transverse_threshold: Vec::new(),
        residual_orders: Vec::new(),
        multi_arm_tail: None,
        fermat_potential_coefficient: None,
        accumulation_coefficient: None,
    };
    let m = spiral.m();
    match spiral.family() {
        Archimedean | MultiArmArchimedean => {
            let a = spec.a.unwrap_or(1.0);
            out.critical_angles = Some(CriticalAngles {
                centred_disc: critical_angle_sequence(m, 8)?,
                osculating: if m == 1 { Some(osculating_critical(a)?) } else { None },
            });
            if m == 1 {
                out.transverse_threshold = grid.iter().map(|&t| (t, transverse_threshold_expansion(t, a))).collect();
                out.residual_orders.push(transen_order(a)?);
                out.residual_orders.push(combination_order(a)?);
            } else {
                out.multi_arm_tail = Some(multi_arm_tail_coefficient(m, a));
            }
        }
        Fermat => {
            out.fermat_potential_coefficient = spec.b.map(fermat_effective_coefficient);
        }
        FermatArchimedean => {
            let (a, b) = (spec.a.unwrap_or(1.0), spec.b.unwrap_or(1.0));
            out.accumulation_coefficient = Some(PI * b.powi(4) / (32.0 * a.powi(5)));
            if m == 1 {
                out.residual_orders.push(inflation_order(&spiral)?);
            } else {
                out.multi_arm_tail = Some(multi_arm_tail_coefficient(m, a));
            }
        }
        _ => {
            if m == 1 && asymptote.is_some_and(|f| f.c != 0.0) {
                out.residual_orders.push(inflation_order(&spiral)?);
            }
        }
    }
    Ok(out)
}
