//! Run configuration shared by the command-line drivers.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::domain::{build_domain, default_theta_max, Cutoff, StripDomain};
use crate::eigensolver::Request;
use crate::error::{Error, Result};
use crate::geometry::{Spiral, SpiralSpec};
use crate::mesh::{MeshParams, StripMesh};

fn default_precision() -> usize {
    9
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    /// Directory for all outputs; the current directory when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub spec: SpiralSpec,
    #[serde(default)]
    pub mesh: MeshParams,
    /// Truncation angle; β + 16π/m when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
    #[serde(default)]
    pub cutoff: Cutoff,
    /// Number of lowest eigenvalues wanted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Upper end of the energy window; alone it asks for every eigenvalue
    /// below it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_top: Option<f64>,
    /// Mesh the whole m-arm region instead of its rotation-invariant component.
    #[serde(default)]
    pub full_region: bool,
    #[serde(default)]
    pub output: OutputPaths,
    /// Significant decimal digits in CSV output.
    #[serde(default = "default_precision")]
    pub precision: usize,
}

impl RunConfig {
    pub fn new(spec: SpiralSpec) -> Self {
        RunConfig {
            spec,
            mesh: MeshParams::default(),
            theta_max: None,
            cutoff: Cutoff::Dirichlet,
            k: None,
            window_top: None,
            full_region: false,
            output: OutputPaths::default(),
            precision: default_precision(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(Error::from)
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max.unwrap_or_else(|| default_theta_max(self.spec.beta, self.spec.m))
    }

    /// Checks everything that can be checked before a solve.
    pub fn validate(&self) -> Result<()> {
        let cfg_err = |e: Error| Error::Config(e.to_string());
        let spiral = Spiral::new(self.spec.clone()).map_err(cfg_err)?;
        if self.k == Some(0) {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.k.is_none() && self.window_top.is_none() {
            return Err(Error::Config("either k or window_top is required".into()));
        }
        if let Some(top) = self.window_top {
            if !(top.is_finite() && top > 0.0) {
                return Err(Error::Config(format!("window_top must be positive (got {top})")));
            }
        }
        if self.mesh.n_theta_per_coil < 4 || self.mesh.n_rho < 4 {
            return Err(Error::Config("mesh needs at least 4 cells per direction".into()));
        }
        if !(self.mesh.grading >= 1.0) {
            return Err(Error::Config(format!("grading must be >= 1 (got {})", self.mesh.grading)));
        }
        if !(1..=17).contains(&self.precision) {
            return Err(Error::Config(format!("precision must be in 1..=17 (got {})", self.precision)));
        }
        let t = self.theta_max();
        if !(t > spiral.theta_min() + spiral.period()) {
            return Err(Error::Config(format!(
                "theta_max = {t} must exceed theta_min + 2pi/m = {}",
                spiral.theta_min() + spiral.period()
            )));
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<StripDomain> {
        build_domain(&self.spec, self.spec.m, self.spec.beta, self.theta_max(), self.cutoff)
    }

    pub fn build_mesh(&self, domain: &StripDomain) -> Result<StripMesh> {
        if self.full_region {
            StripMesh::build_full(domain, self.mesh)
        } else {
            StripMesh::build(domain, self.mesh)
        }
    }

    /// Eigensolver request; with only a window top, every eigenvalue below it.
    pub fn request(&self) -> Result<Request> {
        match (self.k, self.window_top) {
            (Some(0), _) => Err(Error::Config("k must be at least 1".into())),
            (Some(k), top) => Ok(Request::Lowest { k, window_top: top.unwrap_or(10.0) }),
            (None, Some(top)) => Ok(Request::Below(top)),
            (None, None) => Err(Error::Config("either k or window_top is required".into())),
        }
    }

    pub fn output_path(&self, name: &str) -> PathBuf {
        match &self.output.dir {
            Some(d) => d.join(name),
            None => PathBuf::from(name),
        }
    }
}

/// `x` rounded to `digits` significant digits, printed as the shortest
/// decimal that round-trips the rounded value, in exponent form outside
/// [1e-5, 1e16).
pub fn format_float(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x);
    if rounded == 0.0 || (1e-5..1e16).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cavity() -> RunConfig {
        let mut c = RunConfig::new(SpiralSpec::archimedean(0.5).with_beta(10.5));
        c.k = Some(9);
        c.window_top = Some(1.0);
        c
    }

    #[test]
    fn round_trip() {
        let c = cavity();
        let back = RunConfig::from_json(&c.to_json().unwrap()).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn minimal_json_gets_defaults() {
        let c = RunConfig::from_json(r#"{"spec": {"family": "archimedean", "a": 0.5}, "k": 3}"#).unwrap();
        assert_eq!(c.precision, 9);
        assert_eq!(c.cutoff, Cutoff::Dirichlet);
        assert!((c.theta_max() - 16.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(c.request().unwrap(), Request::Lowest { k: 3, window_top: 10.0 });
    }

    #[test]
    fn zero_k_is_a_config_error() {
        let mut c = cavity();
        c.k = Some(0);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        c.k = None;
        c.window_top = None;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn short_truncation_is_rejected() {
        let mut c = cavity();
        c.spec.beta = 0.0;
        c.theta_max = Some(1.0);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.12810312345, 4), "0.1281");
        assert_eq!(format_float(19.546213, 9), "19.546213");
        assert_eq!(format_float(1.0, 9), "1");
        assert_eq!(format_float(f64::NAN, 9), "NaN");
        assert_eq!(format_float(-2.5e-12, 3), "-2.5e-12");
    }

    proptest::proptest! {
        #[test]
        fn full_precision_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            proptest::prop_assert_eq!(format_float(x, 17).parse::<f64>().unwrap(), x);
        }

        #[test]
        fn rounding_is_idempotent(x in -1e20f64..1e20, d in 1usize..17) {
            let once = format_float(x, d);
            proptest::prop_assert_eq!(format_float(once.parse().unwrap(), d), once);
        }

        #[test]
        fn config_round_trips(
            a in 0.05f64..3.0,
            beta in 0.0f64..20.0,
            m in 1usize..5,
            nt in 4usize..200,
            nr in 4usize..64,
            k in proptest::option::of(1usize..50),
            top in proptest::option::of(0.1f64..100.0),
            full in proptest::bool::ANY,
        ) {
            let mut spec = SpiralSpec::archimedean(a).with_beta(beta);
            spec.m = m;
            let mut c = RunConfig::new(spec);
            c.mesh = MeshParams::new(nt, nr);
            c.k = k;
            c.window_top = top;
            c.full_region = full;
            c.theta_max = Some(beta + 7.5);
            let back = RunConfig::from_json(&c.to_json().unwrap());
            if c.validate().is_ok() {
                proptest::prop_assert_eq!(back.unwrap(), c);
            } else {
                proptest::prop_assert!(back.is_err());
            }
        }
    }
}
