//! Zeno time t_Z = Int_0^inf p(t) dt = p~(0) and the derived decay rates.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};
use crate::liouville::{
    generator, projector_superops, RelaxationParams, SystemModel, TwoLevelParams,
};
use crate::renewal::RenewalModel;

use super::laplace::{survival_laplace, survival_laplace_poisson, SolveMethod};

/// Closed-form Poissonian Zeno time t_Z = 1/w_r + 1/wbar_d(0).
pub fn zeno_time_poisson(p: TwoLevelParams, relax: Option<RelaxationParams>, w_r: f64) -> f64 {
    survival_laplace_poisson(Complex64::default(), p, relax, w_r).re
}

/// Zeno time for rapidly decreasing renewal statistics.
///
/// Poisson: exact s = 0 resolvent element <mm|(L + w_r Q)^-1|mm>. Equidistant:
/// Richardson extrapolation of the supermatrix transform over s_k =
/// {1e-4, 5e-5, 2.5e-5} times the model rate scale, with a 0.5% consistency
/// requirement between the two extrapolation stages. Mittag-Leffler statistics
/// are rejected: the survival integral diverges as t^(1-alpha).
pub fn zeno_time(model: &SystemModel, renewal: &RenewalModel) -> Result<f64> {
    match *renewal {
        RenewalModel::MittagLeffler { alpha, .. } if alpha < 1.0 => {
            Err(ZenoError::ZenoTimeDivergent)
        }
        RenewalModel::Poisson { w_r } | RenewalModel::MittagLeffler { w_r, .. } => {
            let l = generator(model);
            let (_, q) = projector_superops(model.measured_index(), model.dim())?;
            let resolvent = l
                .add(&q.scale(Complex64::new(w_r, 0.0)))
                .inverse()
                .map_err(|_| {
                    ZenoError::LinearSolve("L + w_r Q singular; Zeno time undefined".into())
                })?;
            let idx = model.measured_liouville_index();
            Ok(resolvent.element(idx, idx).re)
        }
        RenewalModel::Equidistant { .. } => {
            let scale = model.rate_scale();
            let eval = |s_re: f64| -> Result<f64> {
                Ok(survival_laplace(
                    Complex64::new(s_re, 0.0),
                    model,
                    renewal,
                    SolveMethod::Supermatrix,
                )?
                .re)
            };
            let s0 = 1e-4 * scale;
            let p0 = eval(s0)?;
            let p1 = eval(s0 / 2.0)?;
            let p2 = eval(s0 / 4.0)?;
            let r1 = 2.0 * p1 - p0;
            let r2 = 2.0 * p2 - p1;
            let extrapolated = (4.0 * r2 - r1) / 3.0;
            let consistency = (r2 - r1).abs() / extrapolated.abs();
            if consistency > 5e-3 {
                return Err(ZenoError::QuadratureNonConvergence {
                    achieved: consistency,
                    requested: 5e-3,
                });
            }
            Ok(extrapolated)
        }
    }
}

/// t_Z over a grid of Poissonian rates, with the grid argmin.
#[derive(Debug, Clone)]
pub struct ZenoScan {
    pub w_r_grid: Vec<f64>,
    pub t_z_values: Vec<f64>,
    pub argmin_w_r: f64,
}

pub fn zeno_scan(
    p: TwoLevelParams,
    relax: Option<RelaxationParams>,
    w_r_grid: &[f64],
) -> Result<ZenoScan> {
    if w_r_grid.len() < 2 || !w_r_grid.windows(2).all(|w| w[0] < w[1]) || w_r_grid[0] <= 0.0 {
        return Err(ZenoError::InvalidParameter {
            name: "w_r_grid",
            reason: "need a strictly increasing grid of positive rates".into(),
        });
    }
    let t_z_values: Vec<f64> = w_r_grid
        .iter()
        .map(|&w_r| zeno_time_poisson(p, relax, w_r))
        .collect();
    let (argmin, _) = t_z_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    Ok(ZenoScan {
        w_r_grid: w_r_grid.to_vec(),
        t_z_values,
        argmin_w_r: w_r_grid[argmin],
    })
}

/// The characteristic rates of the closed-form regimes. Fields are present
/// only when the inputs they need were supplied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DerivedRates {
    /// Frequent-measurement decay rate wbar_0 = 2 w_r v^2 / (w_r^2 + 4 eps^2).
    pub w_bar_0: Option<f64>,
    /// Zeno-time minimum location in units of v: wbar_rm = sqrt(2 + 4 ebar^2).
    pub w_bar_rm: f64,
    /// Slow-relaxation decay rate wbar_d0 = w_d + 2 w_rp v^2/(w_rp^2 + 4 eps^2),
    /// w_rp = w_r + w_p.
    pub w_bar_d0: Option<f64>,
    /// Measurement-free fast-dephasing rate wtilde_d0 = w_d + 2 v^2 w_p/(w_p^2 + 4 eps^2).
    pub w_tilde_d0: Option<f64>,
    /// Near-Poissonian anomalous decay rate w_z = pi (1-alpha) v sqrt(ebar^2+1)/2.
    pub w_z: Option<f64>,
}

pub fn derived_rates(
    p: TwoLevelParams,
    relax: Option<RelaxationParams>,
    w_r: Option<f64>,
    alpha: Option<f64>,
) -> DerivedRates {
    let eps2 = 4.0 * p.epsilon * p.epsilon;
    let v2 = p.v * p.v;
    let ebar = p.epsilon_bar();

    let w_bar_0 = w_r.map(|w| 2.0 * w * v2 / (w * w + eps2));
    let w_bar_rm = (2.0 + 4.0 * ebar * ebar).sqrt();
    let w_bar_d0 = match (relax, w_r) {
        (Some(r), Some(w)) => {
            let w_rp = w + r.w_p;
            Some(r.w_d + 2.0 * w_rp * v2 / (w_rp * w_rp + eps2))
        }
        _ => None,
    };
    let w_tilde_d0 = relax.map(|r| r.w_d + 2.0 * v2 * r.w_p / (r.w_p * r.w_p + eps2));
    let w_z = alpha.map(|a| 0.5 * std::f64::consts::PI * (1.0 - a) * p.v * (ebar * ebar + 1.0).sqrt());

    DerivedRates {
        w_bar_0,
        w_bar_rm,
        w_bar_d0,
        w_tilde_d0,
        w_z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn poisson_zeno_time_minimum() {
        let p = TwoLevelParams::new(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(
            zeno_time_poisson(p, None, 2.0f64.sqrt()),
            2.0f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn poisson_zeno_time_limiting_slopes() {
        let p = TwoLevelParams::new(0.0, 1.0).unwrap();
        // w_r -> 0: t_Z ~ p1_bar/(1 - p1_bar)/w_r = 1/w_r at ebar = 0
        let w_r = 1e-3;
        let tz = zeno_time_poisson(p, None, w_r);
        assert!((tz - 1.0 / w_r).abs() / (1.0 / w_r) < 0.02);
        // w_r -> inf: t_Z ~ w_r/(2 v^2)
        let w_r = 1e3;
        let tz = zeno_time_poisson(p, None, w_r);
        assert!((tz - w_r / 2.0).abs() / (w_r / 2.0) < 0.01);
    }

    #[test]
    fn numeric_zeno_time_matches_closed_form() {
        let p = TwoLevelParams::new(1.0, 1.0).unwrap();
        let model = SystemModel::two_level(p, None);
        for w_r in [0.5, 2.0, 10.0] {
            let renewal = RenewalModel::poisson(w_r).unwrap();
            let numeric = zeno_time(&model, &renewal).unwrap();
            let closed = zeno_time_poisson(p, None, w_r);
            assert_abs_diff_eq!(numeric, closed, epsilon = 1e-9 * closed);
        }
        // relaxed variant
        let relax = RelaxationParams::new(0.2, 0.3).unwrap();
        let model = SystemModel::two_level(p, Some(relax));
        let renewal = RenewalModel::poisson(2.0).unwrap();
        assert_abs_diff_eq!(
            zeno_time(&model, &renewal).unwrap(),
            zeno_time_poisson(p, Some(relax), 2.0),
            epsilon = 1e-9
        );
    }

    #[test]
    fn equidistant_zeno_time_matches_segment_oracle() {
        // t_Z = Int_0^{t_r} p1 / (1 - p1(t_r)) from the deterministic product
        let p = TwoLevelParams::new(1.0, 1.0).unwrap();
        let model = SystemModel::two_level(p, None);
        let t_r = 0.6;
        let renewal = RenewalModel::equidistant(t_r).unwrap();
        let got = zeno_time(&model, &renewal).unwrap();
        let e = p.energy();
        let rabi = |t: f64| 1.0 - (p.v * p.v) / (e * e) * (e * t).sin().powi(2);
        let (seg, _) = crate::quad::adaptive_simpson(&rabi, 0.0, t_r, 1e-13);
        let want = seg / (1.0 - rabi(t_r));
        assert!((got - want).abs() / want < 1e-3, "{got} vs {want}");
    }

    #[test]
    fn anomalous_zeno_time_diverges() {
        let p = TwoLevelParams::new(1.0, 1.0).unwrap();
        let model = SystemModel::two_level(p, None);
        let renewal = RenewalModel::mittag_leffler(0.5, 1.0).unwrap();
        assert!(matches!(
            zeno_time(&model, &renewal),
            Err(ZenoError::ZenoTimeDivergent)
        ));
    }

    #[test]
    fn scan_finds_interior_minimum() {
        let p = TwoLevelParams::new(0.0, 1.0).unwrap();
        let grid: Vec<f64> = (0..200)
            .map(|i| 1e-2 * (1e4f64).powf(i as f64 / 199.0))
            .collect();
        let scan = zeno_scan(p, None, &grid).unwrap();
        assert!((scan.argmin_w_r - 2.0f64.sqrt()).abs() / 2.0f64.sqrt() < 0.05);
        // diverges toward both ends
        assert!(scan.t_z_values[0] > 10.0 * scan.t_z_values.iter().cloned().fold(f64::MAX, f64::min));
        assert!(scan.t_z_values[199] > 10.0 * scan.t_z_values.iter().cloned().fold(f64::MAX, f64::min));
        assert!(scan.t_z_values.iter().all(|&t| t > 0.0));
    }

    #[test]
    fn derived_rate_formulas() {
        let p = TwoLevelParams::new(0.0, 1.0).unwrap();
        let r = derived_rates(p, None, Some(2.0), None);
        assert_abs_diff_eq!(r.w_bar_rm, 2.0f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(r.w_bar_0.unwrap(), 1.0, epsilon = 1e-14);

        let p = TwoLevelParams::new(2.5, 1.0).unwrap();
        let r = derived_rates(p, None, None, None);
        assert_abs_diff_eq!(r.w_bar_rm, 27.0f64.sqrt(), epsilon = 1e-12);

        // wbar_0(w_r) is maximized at w_r = 2 eps with value v^2/(2 eps)
        let p = TwoLevelParams::new(1.0, 1.0).unwrap();
        let at = |w: f64| derived_rates(p, None, Some(w), None).w_bar_0.unwrap();
        assert_abs_diff_eq!(at(2.0), 0.5, epsilon = 1e-14);
        assert!(at(2.0) > at(1.8) && at(2.0) > at(2.2));

        // w_z for the near-Poissonian anomalous regime
        let p = TwoLevelParams::new(0.53, 1.0).unwrap();
        let r = derived_rates(p, None, None, Some(0.97));
        assert_abs_diff_eq!(r.w_z.unwrap(), 0.053330, epsilon = 1e-5);

        // fast-dephasing measurement-free rate
        let p = TwoLevelParams::new(1.0, 1.0).unwrap();
        let relax = RelaxationParams::new(0.5, 2.0).unwrap();
        let r = derived_rates(p, Some(relax), None, None);
        assert_abs_diff_eq!(
            r.w_tilde_d0.unwrap(),
            0.5 + 2.0 * 2.0 / (4.0 + 4.0),
            epsilon = 1e-14
        );
    }
}
