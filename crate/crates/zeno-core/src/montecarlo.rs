//! Renewal-trajectory Monte-Carlo estimator of the measurement-averaged
//! survival, the independent cross-check on every analytic path.
//!
//! A trajectory samples measurement times by accumulating renewal intervals.
//! Given the times, the survival factorizes through the rank-1 projector into
//! p(t) = p1(t - t_n) prod_j p1(tau_j), so the default estimator multiplies
//! the deterministic factors (zero extra variance); Bernoulli mode replaces
//! each factor by a coin flip and is kept as an independent-semantics
//! validator.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{CurveMeta, Provenance, SurvivalCurve};
use crate::error::{Result, ZenoError};
use crate::liouville::{SurvivalTable, SystemModel};
use crate::renewal::{
    counts_by_trajectories, sample_interval, CountDistribution, RenewalModel,
};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// Product of deterministic survival factors.
    #[default]
    Product,
    /// Independent coin flip per factor.
    Bernoulli,
}

/// Monte-Carlo run description. Identical configs reproduce bit-identical
/// curves: streams are counter-split per trajectory and the reduction is a
/// fixed-order pairwise tree independent of thread scheduling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct McConfig {
    pub n_trajectories: usize,
    pub master_seed: u64,
    pub times: Vec<f64>,
    #[serde(default)]
    pub estimator: Estimator,
    /// Evaluate p1 directly instead of through the tabulated interpolant
    /// (validation fallback; much slower).
    #[serde(default)]
    pub exact_p1: bool,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trajectories == 0 {
            return Err(ZenoError::InvalidParameter {
                name: "n_trajectories",
                reason: "need at least one trajectory".into(),
            });
        }
        if self.times.is_empty()
            || self.times.iter().any(|t| !t.is_finite() || *t < 0.0)
            || !self.times.windows(2).all(|w| w[0] < w[1])
        {
            return Err(ZenoError::InvalidParameter {
                name: "times",
                reason: "need a strictly increasing grid of non-negative times".into(),
            });
        }
        Ok(())
    }
}

enum P1<'a> {
    Table(SurvivalTable),
    Exact(&'a SystemModel),
}

impl P1<'_> {
    fn eval(&self, t: f64) -> f64 {
        let v = match self {
            P1::Table(table) => table.eval(t),
            P1::Exact(model) => {
                crate::liouville::survival_no_measurement(model, t).expect("t >= 0 by construction")
            }
        };
        v.clamp(0.0, 1.0)
    }
}

/// Per-trajectory survival estimates over the grid.
fn trajectory_values<R: Rng + ?Sized>(
    renewal: &RenewalModel,
    times: &[f64],
    p1: &P1,
    estimator: Estimator,
    rng: &mut R,
) -> Vec<f64> {
    let horizon = *times.last().expect("validated non-empty");
    // measurement times up to the horizon
    let mut measurements: Vec<f64> = Vec::new();
    let mut acc = 0.0;
    loop {
        acc += sample_interval(renewal, rng);
        if acc > horizon {
            break;
        }
        measurements.push(acc);
    }

    let mut values = Vec::with_capacity(times.len());
    let mut idx = 0usize; // measurements consumed
    let mut product = 1.0f64;
    let mut alive = true; // Bernoulli survival flag
    let mut last = 0.0f64;
    for &t in times {
        while idx < measurements.len() && measurements[idx] <= t {
            let tau = measurements[idx] - last;
            let factor = p1.eval(tau);
            match estimator {
                Estimator::Product => product *= factor,
                Estimator::Bernoulli => {
                    if alive && rng.random::<f64>() >= factor {
                        alive = false;
                    }
                }
            }
            last = measurements[idx];
            idx += 1;
        }
        let tail_factor = p1.eval(t - last);
        let v = match estimator {
            Estimator::Product => product * tail_factor,
            Estimator::Bernoulli => {
                if alive && rng.random::<f64>() < tail_factor {
                    1.0
                } else {
                    0.0
                }
            }
        };
        debug_assert!((0.0..=1.0).contains(&v));
        values.push(v);
    }
    values
}

const CHUNK: usize = 1024;

/// Mean and standard error of the survival estimator over `cfg.n_trajectories`
/// independent trajectories.
pub fn simulate_survival(
    model: &SystemModel,
    renewal: &RenewalModel,
    cfg: &McConfig,
) -> Result<SurvivalCurve> {
    cfg.validate()?;
    let horizon = *cfg.times.last().expect("validated");
    let p1 = if cfg.exact_p1 {
        P1::Exact(model)
    } else {
        P1::Table(SurvivalTable::build(model, horizon.max(1e-9), None)?)
    };

    let n_points = cfg.times.len();
    let n = cfg.n_trajectories;
    let n_chunks = n.div_ceil(CHUNK);

    // Each chunk accumulates its trajectories in index order; chunks are then
    // combined pairwise in chunk order, so the reduction tree is fixed.
    let chunk_sums: Vec<(Vec<f64>, Vec<f64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(n);
            let mut sum = vec![0.0f64; n_points];
            let mut sumsq = vec![0.0f64; n_points];
            for k in lo..hi {
                let mut rng = stream(cfg.master_seed, k as u64);
                let vals = trajectory_values(renewal, &cfg.times, &p1, cfg.estimator, &mut rng);
                for (i, v) in vals.into_iter().enumerate() {
                    sum[i] += v;
                    sumsq[i] += v * v;
                }
            }
            (sum, sumsq)
        })
        .collect();

    let (sum, sumsq) = pairwise_combine(chunk_sums, n_points);

    let nf = n as f64;
    let values: Vec<f64> = sum.iter().map(|s| s / nf).collect();
    let stderr: Vec<f64> = sumsq
        .iter()
        .zip(&values)
        .map(|(sq, &m)| {
            if n > 1 {
                let mut var = (sq / nf - m * m).max(0.0) * nf / (nf - 1.0);
                // identical trajectory values leave only summation dust,
                // which grows linearly with the number of additions
                if var < 4.0 * nf * f64::EPSILON * (sq / nf + m * m) {
                    var = 0.0;
                }
                (var / nf).sqrt()
            } else {
                0.0
            }
        })
        .collect();

    SurvivalCurve::new(
        cfg.times.clone(),
        values,
        Some(stderr),
        Provenance::MonteCarlo,
        CurveMeta {
            system: format!("d={} (mc, {:?})", model.dim(), cfg.estimator),
            renewal: renewal.to_string(),
        },
        vec![],
    )
}

fn pairwise_combine(
    mut level: Vec<(Vec<f64>, Vec<f64>)>,
    n_points: usize,
) -> (Vec<f64>, Vec<f64>) {
    if level.is_empty() {
        return (vec![0.0; n_points], vec![0.0; n_points]);
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut iter = level.into_iter();
        while let Some((mut s, mut q)) = iter.next() {
            if let Some((s2, q2)) = iter.next() {
                for i in 0..n_points {
                    s[i] += s2[i];
                    q[i] += q2[i];
                }
            }
            next.push((s, q));
        }
        level = next;
    }
    level.into_iter().next().expect("non-empty")
}

/// Histogram of measurement counts in (0, t] with multinomial standard errors.
pub fn simulate_counts(
    renewal: &RenewalModel,
    t: f64,
    n_max: usize,
    cfg: &McConfig,
) -> Result<CountDistribution> {
    if !(t > 0.0) {
        return Err(ZenoError::InvalidParameter {
            name: "t",
            reason: format!("horizon must be positive, got {t}"),
        });
    }
    if cfg.n_trajectories == 0 {
        return Err(ZenoError::InvalidParameter {
            name: "n_trajectories",
            reason: "need at least one trajectory".into(),
        });
    }
    Ok(counts_by_trajectories(
        renewal,
        t,
        n_max,
        cfg.n_trajectories,
        cfg.master_seed,
    ))
}
