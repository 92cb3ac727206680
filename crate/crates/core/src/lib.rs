//! Exact kriging and cokriging for zero-mean bivariate Gaussian processes
//! with a proportional exponential/Matérn covariance structure.
//!
//! The library computes best-linear-predictor weights and prediction
//! variances by dense Cholesky solves, carries the closed-form weights and
//! variances available on the interleaved 1-D design, and measures the
//! relative efficiency of kriging to cokriging against its asymptotic limit
//! `1 - r²/2`. A checker for the sufficient conditions under which two
//! bivariate Matérn measures are equivalent (matching microergodic
//! parameters and cross-correlation) rounds out the analysis toolkit.

mod bessel;
pub mod closedform;
pub mod covariance;
pub mod design;
pub mod efficiency;
pub mod equivalence;
mod error;
mod linalg;
pub mod predictor;

pub use covariance::{BivariateModel, CovMatrix, MaternParams, Var};
pub use design::{collocated_design, interleaved_design, Design};
pub use error::{Error, Result};
pub use predictor::{cokrige, krige, markov_krige, Prediction, SamplePaths};
