//! Laplace-domain solution of the measurement-averaged dynamics.
//!
//! The survival probability of the measured state is obtained from the
//! averaged propagator U~(eps) = Omega^-1 Phi(Omega) [Phi(Omega) + Q_m]^-1
//! with Omega = eps + L, either as the supermatrix element <mm|U~|mm>, by the
//! scalar renewal resummation P~_{p0} / (1 - W~_{p0}), or from closed forms
//! for the Poissonian and frequent-measurement anomalous regimes. Time-domain
//! curves come from numerical inverse Laplace transforms.

mod fourier;
mod invert;
mod laplace;
mod tailfit;
mod zeno;

pub use fourier::{invert_laplace_fourier, FourierSettings};
pub use invert::{invert_laplace, InversionSettings};
pub use laplace::{
    averaged_propagator_laplace, survival_laplace, survival_laplace_anomalous_limit,
    survival_laplace_poisson, survival_laplace_relaxed_anomalous, LaplaceSurvival, MethodTag,
    SolveMethod,
};
pub use tailfit::{tail_exponent_fit, TailFit};
pub use zeno::{derived_rates, zeno_scan, zeno_time, zeno_time_poisson, DerivedRates, ZenoScan};

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};

/// Where a survival curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Analytic,
    MonteCarlo,
}

/// Human-readable run descriptors attached to every curve.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CurveMeta {
    pub system: String,
    pub renewal: String,
}

/// A survival probability over a time grid, with optional per-point standard
/// errors for Monte-Carlo provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
    pub provenance: Provenance,
    pub metadata: CurveMeta,
    /// Non-fatal diagnostics (e.g. inversion values clipped from outside the
    /// probability band). Never silently empty when clipping happened.
    pub warnings: Vec<String>,
}

/// Tolerance band around [0, 1] for analytically computed probabilities.
pub const CURVE_TOL: f64 = 1e-6;

impl SurvivalCurve {
    pub fn new(
        times: Vec<f64>,
        values: Vec<f64>,
        stderr: Option<Vec<f64>>,
        provenance: Provenance,
        metadata: CurveMeta,
        warnings: Vec<String>,
    ) -> Result<Self> {
        if times.len() != values.len() || times.is_empty() {
            return Err(ZenoError::InvalidParameter {
                name: "times",
                reason: "times and values must be non-empty and of equal length".into(),
            });
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(ZenoError::InvalidParameter {
                name: "times",
                reason: "time grid must be strictly increasing".into(),
            });
        }
        if let Some(se) = &stderr {
            if se.len() != values.len() {
                return Err(ZenoError::InvalidParameter {
                    name: "stderr",
                    reason: "stderr length must match values".into(),
                });
            }
        }
        for (i, &v) in values.iter().enumerate() {
            let tol = match (&provenance, &stderr) {
                (Provenance::MonteCarlo, Some(se)) => (4.0 * se[i]).max(CURVE_TOL),
                _ => CURVE_TOL,
            };
            if !(-tol..=1.0 + tol).contains(&v) {
                return Err(ZenoError::InvalidParameter {
                    name: "values",
                    reason: format!("value {v} at t = {} outside [0, 1] band", times[i]),
                });
            }
            if times[i] == 0.0 && (v - 1.0).abs() > tol {
                return Err(ZenoError::InvalidParameter {
                    name: "values",
                    reason: format!("p(0) = {v} but must equal 1"),
                });
            }
        }
        Ok(Self {
            times,
            values,
            stderr,
            provenance,
            metadata,
            warnings,
        })
    }

    /// Value at a grid time found by exact match.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.times
            .iter()
            .position(|&x| x == t)
            .map(|i| self.values[i])
    }
}
