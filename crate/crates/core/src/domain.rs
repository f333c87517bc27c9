//! The skewed-strip computational region of a spiral waveguide.
//!
//! In polar coordinates the region between a coil and its inner neighbour is
//! Ω = {(r, θ): r_in(θ) < r < r_out(θ), θ_min < θ ≤ θ_max} with
//! r_out(θ) = r(θ) and r_in(θ) = max(0, r(θ − 2π/m)). For θ < β the wall is
//! absent and the outer edge at θ is identified with the inner edge at
//! θ + 2π/m; the inner edge with r_in = 0 is the origin.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Spiral, SpiralSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Cutoff {
    #[default]
    Dirichlet,
    Neumann,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentKind {
    SpiralDirichlet,
    Glued,
    OriginEdge,
    CutoffDirichlet,
    CutoffNeumann,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// ρ = 0, r = r_in(θ).
    Inner,
    /// ρ = 1, r = r_out(θ).
    Outer,
    /// θ = θ_max.
    End,
    /// θ = θ_min (degenerate: the whole column sits at the origin).
    Start,
}

/// Labelled boundary piece; `theta` is the θ-interval it covers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundarySegment {
    pub kind: SegmentKind,
    pub side: Side,
    pub theta: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct StripDomain {
    pub spiral: Spiral,
    pub m: usize,
    pub beta: f64,
    pub theta_max: f64,
    pub cutoff: Cutoff,
    pub segments: Vec<BoundarySegment>,
}

/// Default truncation angle β + 16π/m.
pub fn default_theta_max(beta: f64, m: usize) -> f64 {
    beta + 16.0 * PI / m as f64
}

/// Build the strip for `spec`, overriding its arm count and cut angle.
pub fn build_domain(spec: &SpiralSpec, m: usize, beta: f64, theta_max: f64, cutoff: Cutoff) -> Result<StripDomain> {
    let spec = spec.clone().with_m(m).with_beta(beta);
    StripDomain::new(Spiral::new(spec).map_err(|e| Error::Config(e.to_string()))?, theta_max, cutoff)
}

impl StripDomain {
    pub fn new(spiral: Spiral, theta_max: f64, cutoff: Cutoff) -> Result<Self> {
        let m = spiral.m();
        let beta = spiral.beta();
        let p = spiral.period();
        let t0 = spiral.theta_min();
        if !(theta_max > beta.max(t0) + p) {
            return Err(Error::Config(format!(
                "theta_max = {theta_max} must exceed max(beta, theta_min) + 2π/m = {}",
                beta.max(t0) + p
            )));
        }
        spiral.check(theta_max).map_err(|e| Error::Config(e.to_string()))?;
        let r0 = spiral.radius(t0)?;
        let scale = spiral.radius(theta_max)?;
        if r0.abs() > 1e-13 * scale {
            return Err(Error::Geometry(format!(
                "strip construction needs the curve to start at the origin (r(theta_min) = {r0})"
            )));
        }
        // Positive width: r(θ) − r(θ − 2π/m) on a fine grid, and r > 0 past the start.
        let n = 2000;
        for i in 1..=n {
            let t = t0 + (theta_max - t0) * i as f64 / n as f64;
            let w = if t - p >= t0 { spiral.radius_difference(t, t - p)? } else { spiral.radius(t)? };
            if !(w > 0.0) {
                return Err(Error::Geometry(format!("non-positive strip width {w} at theta = {t}")));
            }
        }

        let mut segments = Vec::new();
        let glue_end = beta.max(t0);
        if beta > t0 {
            segments.push(BoundarySegment { kind: SegmentKind::Glued, side: Side::Outer, theta: (t0, beta) });
            segments.push(BoundarySegment { kind: SegmentKind::Glued, side: Side::Inner, theta: (t0 + p, beta + p) });
        }
        segments.push(BoundarySegment {
            kind: SegmentKind::SpiralDirichlet,
            side: Side::Outer,
            theta: (glue_end, theta_max),
        });
        segments.push(BoundarySegment { kind: SegmentKind::OriginEdge, side: Side::Inner, theta: (t0, t0 + p) });
        segments.push(BoundarySegment { kind: SegmentKind::OriginEdge, side: Side::Start, theta: (t0, t0) });
        segments.push(BoundarySegment {
            kind: SegmentKind::SpiralDirichlet,
            side: Side::Inner,
            theta: (glue_end + p, theta_max),
        });
        segments.push(BoundarySegment {
            kind: match cutoff {
                Cutoff::Dirichlet => SegmentKind::CutoffDirichlet,
                Cutoff::Neumann => SegmentKind::CutoffNeumann,
            },
            side: Side::End,
            theta: (theta_max, theta_max),
        });
        Ok(StripDomain { spiral, m, beta, theta_max, cutoff, segments })
    }

    pub fn period(&self) -> f64 {
        self.spiral.period()
    }

    pub fn theta_min(&self) -> f64 {
        self.spiral.theta_min()
    }

    pub fn r_out(&self, theta: f64) -> f64 {
        self.spiral.radius(theta).unwrap_or(0.0)
    }

    pub fn r_in(&self, theta: f64) -> f64 {
        self.spiral.inner_radius(theta)
    }

    /// Whether the collapsed origin node is a free unknown. With several arms
    /// and no cavity the arm walls meet at the origin.
    pub fn origin_is_free(&self) -> bool {
        self.m == 1 || self.beta > self.theta_min()
    }

    pub fn glued_length(&self) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.kind == SegmentKind::Glued && s.side == Side::Outer)
            .map(|s| s.theta.1 - s.theta.0)
            .sum()
    }

    pub fn with_cutoff(&self, cutoff: Cutoff) -> Result<Self> {
        StripDomain::new(self.spiral.clone(), self.theta_max, cutoff)
    }

    pub fn with_theta_max(&self, theta_max: f64) -> Result<Self> {
        StripDomain::new(self.spiral.clone(), theta_max, self.cutoff)
    }
}
