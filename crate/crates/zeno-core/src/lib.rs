//! Survival of a measured quantum state under renewal-distributed measurements.
//!
//! A d-level system evolves unitarily (optionally with Markovian relaxation)
//! and is projectively measured at random times whose intervals form a renewal
//! process. This crate provides:
//!
//! - [`liouville`]: superoperator algebra for the density-matrix dynamics,
//! - [`renewal`]: the Poissonian, equidistant and Mittag-Leffler interval
//!   statistics with samplers and counting laws,
//! - [`analytic`]: the Laplace-domain measurement-averaged propagator, closed
//!   forms, numerical inverse transforms and Zeno-time diagnostics,
//! - [`montecarlo`]: a trajectory estimator cross-checking every analytic path,
//! - [`validation`]: the end-to-end acceptance checks wired into both the test
//!   suite and the CLI.

pub mod error;
pub mod linalg;
pub mod liouville;
pub mod renewal;
pub mod rng;
pub mod special;
pub(crate) mod quad;
pub mod analytic;
pub mod montecarlo;
pub mod validation;

pub use error::{Result, ZenoError};
