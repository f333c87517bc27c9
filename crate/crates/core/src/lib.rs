//! Spectra of the Dirichlet Laplacian on spiral-shaped planar waveguides.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assembly;
pub mod acceptance;
pub mod asymptotics;
pub mod bessel;
pub mod config;
pub mod domain;
pub mod eigensolver;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod geometry;
pub mod mesh;
pub mod oracle;
pub mod ordering;
pub mod quadrature;
pub mod skyline;
pub mod sparse;
pub mod tridiag;

pub use error::{Error, Result};
pub use geometry::{Spiral, SpiralSpec};
