//! Error type shared by all solver modules.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZenoError {
    #[error("matrix is not Hermitian: max |A - A^dag| = {max_dev:.3e} exceeds {tol:.3e}")]
    NotHermitian { max_dev: f64, tol: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("state index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error(
        "equidistant W(t) is a delta distribution, not a density; \
         use survival_p, the interval sampler, or the closed-form counting law"
    )]
    NonDensity,

    #[error("evaluation at (or too near) a branch point of the Laplace-domain expression")]
    BranchPoint,

    #[error(
        "eigenvector matrix too ill-conditioned for a reliable matrix function \
         (cond = {cond:.3e} > {limit:.3e})"
    )]
    IllConditionedEigenvectors { cond: f64, limit: f64 },

    #[error("eigenvalue {value} lies within {tol:.3e} of the branch cut (non-positive real axis)")]
    EigenvalueOnBranchCut { value: Complex64, tol: f64 },

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("eigendecomposition failed: {0}")]
    Eigendecomposition(String),

    #[error("quadrature did not converge: achieved error estimate {achieved:.3e} > requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("inverse Laplace transform failed at t = {t}: {detail}")]
    InversionFailure { t: f64, detail: String },

    #[error("Zeno time diverges for anomalous statistics: the survival integral grows as t^(1-alpha)")]
    ZenoTimeDivergent,

    #[error(
        "scalar Laplace method refused for Mittag-Leffler statistics at Re(eps) = {eps_re:.3e} \
         < w_r/1e3 = {limit:.3e} (heavy tail makes quadrature truncation uncontrolled); \
         use the supermatrix method"
    )]
    ScalarMethodDomain { eps_re: f64, limit: f64 },

    #[error("tail fit window invalid: {0}")]
    TailFitWindow(String),
}

pub type Result<T> = std::result::Result<T, ZenoError>;
