use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("theta = {theta} is outside the domain of the {family} spiral ({detail})")]
    Domain {
        family: &'static str,
        theta: f64,
        detail: String,
    },

    #[error("transverse coordinate u = {u} outside [0, {width}] at theta = {theta}")]
    Range { theta: f64, u: f64, width: f64 },

    #[error("inward normal at theta = {theta} does not reach the previous coil")]
    NoIntersection { theta: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("classification unavailable: {0}")]
    ClassificationUnavailable(String),

    #[error("invalid spiral specification: {0}")]
    InvalidSpec(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("Fermi coordinates break down at theta = {theta}, u = {u} (u kappa = {u_kappa})")]
    CoordinateBreakdown { theta: f64, u: f64, u_kappa: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("factorization broke down at pivot {pivot} (value {value:e})")]
    Factorization { pivot: usize, value: f64 },

    #[error("eigensolver stopped after {iterations} iterations with {converged} of {wanted} pairs converged")]
    IterationLimit {
        iterations: usize,
        converged: usize,
        wanted: usize,
    },

    #[error("energy {energy} lies above the computed window (top {window_top})")]
    InsufficientWindow { energy: f64, window_top: f64 },

    #[error("index {index} out of range (have {available})")]
    IndexOutOfRange { index: usize, available: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
