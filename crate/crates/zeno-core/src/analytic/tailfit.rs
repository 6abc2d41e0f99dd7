//! Power-law tail fits with oscillation suppression.
//!
//! The long-time anomalous survival behaves as A(t) t^-alpha where A carries
//! a bounded oscillation of period pi/E_bar. Averaging log p over blocks of
//! exactly that width turns the oscillation into a constant offset, so the
//! exponent comes out of a clean log-log regression; for a pure power law the
//! block means of (log t, log p) are exactly collinear.

use crate::error::{Result, ZenoError};

use super::SurvivalCurve;

#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    /// Fitted decay exponent (minus the log-log slope).
    pub exponent: f64,
    /// exp(intercept): the prefactor of t^-exponent. A fit output, never a
    /// prediction.
    pub amplitude: f64,
    /// RMS residual of the block means around the fitted line.
    pub fit_residual: f64,
}

/// Least-squares exponent of p ~ A t^-alpha on `window`, block-averaging
/// log p over windows of width `block_width` (one oscillation period).
pub fn tail_exponent_fit(
    curve: &SurvivalCurve,
    window: (f64, f64),
    block_width: f64,
) -> Result<TailFit> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(ZenoError::TailFitWindow(format!(
            "window ({lo}, {hi}) is empty"
        )));
    }
    let t0 = *curve.times.first().expect("curves are non-empty");
    let t1 = *curve.times.last().expect("curves are non-empty");
    if lo < t0 || hi > t1 {
        return Err(ZenoError::TailFitWindow(format!(
            "window ({lo}, {hi}) outside the curve grid [{t0}, {t1}]"
        )));
    }
    if !(block_width > 0.0) {
        return Err(ZenoError::TailFitWindow(format!(
            "block width must be positive, got {block_width}"
        )));
    }
    if hi - lo < 3.0 * block_width {
        return Err(ZenoError::TailFitWindow(format!(
            "window length {} shorter than 3 oscillation periods ({})",
            hi - lo,
            3.0 * block_width
        )));
    }

    let n_blocks = ((hi - lo) / block_width).floor() as usize;
    let mut xs = Vec::with_capacity(n_blocks);
    let mut ys = Vec::with_capacity(n_blocks);
    for b in 0..n_blocks {
        let b_lo = lo + b as f64 * block_width;
        let b_hi = b_lo + block_width;
        let mut sx = 0.0;
        let mut sy = 0.0;
        let mut count = 0usize;
        for (&t, &p) in curve.times.iter().zip(&curve.values) {
            if t < b_lo || t >= b_hi {
                continue;
            }
            if p <= 0.0 {
                return Err(ZenoError::TailFitWindow(format!(
                    "non-positive value {p} at t = {t} inside the fit window"
                )));
            }
            sx += t.ln();
            sy += p.ln();
            count += 1;
        }
        if count == 0 {
            continue;
        }
        xs.push(sx / count as f64);
        ys.push(sy / count as f64);
    }
    if xs.len() < 3 {
        return Err(ZenoError::TailFitWindow(format!(
            "only {} non-empty blocks; the grid is too coarse for the window",
            xs.len()
        )));
    }

    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();

    Ok(TailFit {
        exponent: -slope,
        amplitude: intercept.exp(),
        fit_residual: residual,
    })
}
