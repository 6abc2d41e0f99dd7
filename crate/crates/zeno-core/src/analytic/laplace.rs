//! Laplace-domain evaluators for the measurement-averaged survival.
//!
//! Naming: `s` is the Laplace variable (the papers' epsilon); `epsilon` is
//! reserved for the two-level half-splitting to avoid the notation collision.

use std::sync::Mutex;

use num_complex::Complex64;

use crate::error::{Result, ZenoError};
use crate::linalg;
use crate::liouville::{
    generator, projector_superops, superop_exp, SuperOp, SurvivalTable, SystemModel,
    TwoLevelParams, RelaxationParams, EIG_COND_LIMIT,
};
use crate::quad::adaptive_simpson_complex;
use crate::renewal::{pdf_w, survival_p, RenewalModel};

fn cr(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Phi applied to the shifted generator Omega = s + L, by the route suited to
/// each renewal model: direct scaling (Poisson), matrix exponential
/// (equidistant), spectral fractional power (Mittag-Leffler).
fn phi_of_omega(omega: &SuperOp, renewal: &RenewalModel) -> Result<SuperOp> {
    match *renewal {
        RenewalModel::Poisson { w_r } => Ok(omega.scale(cr(1.0 / w_r))),
        RenewalModel::MittagLeffler { alpha, w_r } => {
            if alpha == 1.0 {
                return Ok(omega.scale(cr(1.0 / w_r)));
            }
            let scaled = omega.scale(cr(1.0 / w_r));
            Ok(SuperOp::from_matrix(linalg::fractional_power(
                scaled.matrix(),
                alpha,
                EIG_COND_LIMIT,
            )?))
        }
        RenewalModel::Equidistant { t_r } => {
            // exp(t_r Omega) - 1; only used where the stable rearrangement
            // below is not applicable (kept for completeness).
            let grown = superop_exp(&omega.scale(cr(-1.0)), t_r)?;
            let eye = SuperOp::identity(omega.dim());
            Ok(grown.add(&eye.scale(cr(-1.0))))
        }
    }
}

/// Averaged propagator U~(s) = Omega^-1 Phi(Omega) [Phi(Omega) + Q_m]^-1,
/// Omega = s + L.
///
/// For equidistant statistics, Phi = exp(t_r Omega) - 1 overflows at large
/// Re(s); the algebraically identical form
///   U~ = Omega^-1 [1 - Q (1 + E (Q - 1))^-1 E],   E = exp(-t_r Omega),
/// involves only the decaying exponential and is used instead.
pub fn averaged_propagator_laplace(
    s: Complex64,
    model: &SystemModel,
    renewal: &RenewalModel,
) -> Result<SuperOp> {
    if s.re <= 0.0 {
        return Err(ZenoError::InvalidParameter {
            name: "s",
            reason: format!("averaged propagator needs Re(s) > 0, got {s}"),
        });
    }
    let l = generator(model);
    let n = l.dim();
    let eye = SuperOp::identity(n);
    let omega = eye.scale(s).add(&l);
    let (_, q) = projector_superops(model.measured_index(), model.dim())?;

    let omega_inv = omega.inverse().map_err(|_| {
        ZenoError::LinearSolve(format!(
            "Omega = s + L singular at s = {s} (||Omega||_1 = {:.3e})",
            linalg::op_norm_one(omega.matrix())
        ))
    })?;

    match *renewal {
        RenewalModel::Equidistant { t_r } => {
            let e = superop_exp(&omega, t_r)?;
            let q_minus_one = q.add(&eye.scale(cr(-1.0)));
            let m = eye.add(&e.mul(&q_minus_one));
            let m_inv = m.inverse().map_err(|_| {
                ZenoError::LinearSolve(format!(
                    "1 + exp(-t_r Omega)(Q - 1) singular at s = {s} \
                     (cond of Omega = {:.3e})",
                    linalg::cond_one(omega.matrix(), omega_inv.matrix())
                ))
            })?;
            let correction = q.mul(&m_inv).mul(&e);
            Ok(omega_inv.mul(&eye.add(&correction.scale(cr(-1.0)))))
        }
        _ => {
            let phi_hat = phi_of_omega(&omega, renewal)?;
            let m = phi_hat.add(&q);
            let m_inv = m.inverse().map_err(|_| {
                ZenoError::LinearSolve(format!(
                    "Phi(Omega) + Q singular at s = {s} (||Phi + Q||_1 = {:.3e})",
                    linalg::op_norm_one(m.matrix())
                ))
            })?;
            Ok(omega_inv.mul(&phi_hat).mul(&m_inv))
        }
    }
}

/// Which route computes the survival transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Supermatrix element <mm| U~(s) |mm>.
    Supermatrix,
    /// Scalar resummation P~_{p1}(s) [1 - W~_{p1}(s)]^-1 with
    /// X~_{p1}(s) = Int exp(-s t) X(t) p1(t) dt.
    Scalar,
}

/// Survival transform p~(s) by the chosen method.
pub fn survival_laplace(
    s: Complex64,
    model: &SystemModel,
    renewal: &RenewalModel,
    method: SolveMethod,
) -> Result<Complex64> {
    match method {
        SolveMethod::Supermatrix => {
            let u = averaged_propagator_laplace(s, model, renewal)?;
            let idx = model.measured_liouville_index();
            Ok(u.element(idx, idx))
        }
        SolveMethod::Scalar => {
            let table = scalar_table(model, s, renewal)?;
            scalar_survival(s, renewal, &table)
        }
    }
}

/// Truncation horizon with tail bound P(T) exp(-Re(s) T) max(1, 1/Re s) < 1e-14.
fn scalar_horizon(renewal: &RenewalModel, s_re: f64) -> f64 {
    let mut horizon = 4.0 / s_re.min(renewal.rate());
    loop {
        let bound = survival_p(renewal, horizon) * (-s_re * horizon).exp() / s_re.min(1.0);
        if bound < 1e-14 || horizon > 1e12 {
            return horizon;
        }
        horizon *= 1.5;
    }
}

fn scalar_table(model: &SystemModel, s: Complex64, renewal: &RenewalModel) -> Result<SurvivalTable> {
    if s.re <= 0.0 {
        return Err(ZenoError::InvalidParameter {
            name: "s",
            reason: format!("scalar method needs Re(s) > 0, got {s}"),
        });
    }
    if let RenewalModel::MittagLeffler { alpha, w_r } = *renewal {
        let limit = w_r / 1e3;
        if alpha < 1.0 && s.re < limit {
            return Err(ZenoError::ScalarMethodDomain {
                eps_re: s.re,
                limit,
            });
        }
    }
    let horizon = match *renewal {
        RenewalModel::Equidistant { t_r } => t_r,
        _ => scalar_horizon(renewal, s.re),
    };
    SurvivalTable::build(model, horizon, None)
}

fn scalar_survival(
    s: Complex64,
    renewal: &RenewalModel,
    table: &SurvivalTable,
) -> Result<Complex64> {
    let tol = 1e-11 / (s.re + renewal.rate());
    let mut achieved: f64 = 0.0;

    let (p_tilde, w_tilde) = match *renewal {
        RenewalModel::Equidistant { t_r } => {
            // W is a delta at t_r: W~_{p1} = exp(-s t_r) p1(t_r) exactly.
            let (p_int, e) = adaptive_simpson_complex(
                &|t: f64| (-s * t).exp() * table.eval(t),
                0.0,
                t_r,
                tol,
            );
            achieved += e;
            let w_int = (-s * t_r).exp() * table.eval(t_r);
            (p_int, w_int)
        }
        _ => {
            let horizon = table.horizon();
            let (p_int, ep) = adaptive_simpson_complex(
                &|t: f64| (-s * t).exp() * survival_p(renewal, t) * table.eval(t),
                0.0,
                horizon,
                tol,
            );
            achieved += ep;
            let singular = matches!(*renewal, RenewalModel::MittagLeffler { alpha, .. } if alpha < 1.0);
            let (w_int, ew) = if singular {
                // analytic head over the integrable t^(alpha-1) divergence
                let delta = 1e-12 / renewal.rate();
                let head = cr(1.0 - survival_p(renewal, delta)) * (-s * delta / 2.0).exp();
                let (body, e) = adaptive_simpson_complex(
                    &|t: f64| {
                        (-s * t).exp() * pdf_w(renewal, t).expect("density exists") * table.eval(t)
                    },
                    delta,
                    horizon,
                    tol,
                );
                (head + body, e)
            } else {
                adaptive_simpson_complex(
                    &|t: f64| {
                        (-s * t).exp() * pdf_w(renewal, t).expect("density exists") * table.eval(t)
                    },
                    0.0,
                    horizon,
                    tol,
                )
            };
            achieved += ew;
            (p_int, w_int)
        }
    };

    if achieved > 1e4 * tol {
        return Err(ZenoError::QuadratureNonConvergence {
            achieved,
            requested: tol,
        });
    }
    Ok(p_tilde / (cr(1.0) - w_tilde))
}

/// Closed-form Poissonian survival transform
///   p~(s) = (s + w_r + wbar_d(s)) / (s^2 + s (w_r + 2 wbar_d(s)) + w_r wbar_d(s)),
///   wbar_d(s) = w_d + 2 (s + w_rp) v^2 / ((s + w_rp)^2 + 4 eps^2),
/// with w_rp = w_r + w_p; without relaxation w_d = w_p = 0. Valid for
/// Re(s) > 0 and at s = 0, where it yields the Zeno time 1/w_r + 1/wbar_d(0).
pub fn survival_laplace_poisson(
    s: Complex64,
    p: TwoLevelParams,
    relax: Option<RelaxationParams>,
    w_r: f64,
) -> Complex64 {
    let (w_d, w_p) = relax.map(|r| (r.w_d, r.w_p)).unwrap_or((0.0, 0.0));
    let w_rp = w_r + w_p;
    let shifted = s + w_rp;
    let wbar = w_d + 2.0 * p.v * p.v * shifted / (shifted * shifted + 4.0 * p.epsilon * p.epsilon);
    (s + w_r + wbar) / (s * s + s * (w_r + 2.0 * wbar) + w_r * wbar)
}

/// Frequent-measurement limit of the anomalous survival transform,
///   p~(s) = [(2 ebar^2 + 1) s^(a-1) + S^(a-1)] / [(2 ebar^2 + 1) s^a + S^a],
/// where S^b is the symmetric half-sum of (s +- 2iv sqrt(ebar^2+1))^b, making
/// the value manifestly real for real s. Independent of w_r.
pub fn survival_laplace_anomalous_limit(
    s: Complex64,
    p: TwoLevelParams,
    alpha: f64,
) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ZenoError::InvalidParameter {
            name: "alpha",
            reason: format!("need 0 < alpha <= 1, got {alpha}"),
        });
    }
    let ebar = p.epsilon_bar();
    let y = 2.0 * p.v * (ebar * ebar + 1.0).sqrt();
    let tiny = 1e-14 * p.v;
    if s.norm() < tiny
        || (s - Complex64::new(0.0, y)).norm() < tiny
        || (s + Complex64::new(0.0, y)).norm() < tiny
    {
        return Err(ZenoError::BranchPoint);
    }
    let weight = 2.0 * ebar * ebar + 1.0;
    let omega_pow = |beta: f64| -> Complex64 {
        0.5 * ((s + Complex64::new(0.0, y)).powf(beta) + (s - Complex64::new(0.0, y)).powf(beta))
    };
    let num = cr(weight) * s.powf(alpha - 1.0) + omega_pow(alpha - 1.0);
    let den = cr(weight) * s.powf(alpha) + omega_pow(alpha);
    Ok(num / den)
}

/// Fast-dephasing anomalous limit with relaxation:
///   p~(s) = [s^(a-1) + (s + 2 wtilde)^(a-1)] / [s^a + (s + 2 wtilde)^a].
///
/// At alpha = 1 this collapses to 1/(s + wtilde): under infinitely frequent
/// resets each interval contributes its short-time balance decay 1 - wtilde*tau,
/// and the product over intervals exponentiates to exp(-wtilde t).
pub fn survival_laplace_relaxed_anomalous(
    s: Complex64,
    alpha: f64,
    w_tilde_d0: f64,
) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ZenoError::InvalidParameter {
            name: "alpha",
            reason: format!("need 0 < alpha <= 1, got {alpha}"),
        });
    }
    if s.norm() < 1e-300 {
        return Err(ZenoError::BranchPoint);
    }
    let shifted = s + 2.0 * w_tilde_d0;
    let num = s.powf(alpha - 1.0) + shifted.powf(alpha - 1.0);
    let den = s.powf(alpha) + shifted.powf(alpha);
    Ok(num / den)
}

/// Identifies which evaluator produced a [`LaplaceSurvival`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Supermatrix,
    Scalar,
    PoissonClosed,
    AnomalousClosed,
    RelaxedAnomalousClosed,
    /// Known transform pairs used to validate the inversion machinery.
    Reference,
}

type Evaluator = Box<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// A survival transform packaged for inversion: an evaluator on Re(s) > 0
/// plus a bound on the real part of its singularities.
pub struct LaplaceSurvival {
    eval: Evaluator,
    singularity_abscissa: f64,
    method: MethodTag,
    description: String,
}

impl LaplaceSurvival {
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        (self.eval)(s)
    }

    pub fn singularity_abscissa(&self) -> f64 {
        self.singularity_abscissa
    }

    pub fn method(&self) -> MethodTag {
        self.method
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn supermatrix(model: SystemModel, renewal: RenewalModel) -> Self {
        let description = format!("supermatrix; renewal {renewal}");
        Self {
            eval: Box::new(move |s| {
                survival_laplace(s, &model, &renewal, SolveMethod::Supermatrix)
            }),
            singularity_abscissa: 0.0,
            method: MethodTag::Supermatrix,
            description,
        }
    }

    /// Scalar-method evaluator. The p1 table is cached and regrown on demand
    /// when an evaluation needs a longer horizon; caching is transparent to
    /// the returned values.
    pub fn scalar(model: SystemModel, renewal: RenewalModel) -> Self {
        let description = format!("scalar; renewal {renewal}");
        let cache: Mutex<Option<SurvivalTable>> = Mutex::new(None);
        Self {
            eval: Box::new(move |s| {
                let mut guard = cache.lock().expect("table cache poisoned");
                let needs = match renewal {
                    RenewalModel::Equidistant { t_r } => t_r,
                    _ => {
                        if s.re <= 0.0 {
                            return Err(ZenoError::InvalidParameter {
                                name: "s",
                                reason: format!("scalar method needs Re(s) > 0, got {s}"),
                            });
                        }
                        scalar_horizon(&renewal, s.re)
                    }
                };
                if guard.as_ref().map(|t| t.horizon() < needs).unwrap_or(true) {
                    *guard = Some(scalar_table(&model, s, &renewal)?);
                }
                scalar_survival(s, &renewal, guard.as_ref().expect("just built"))
            }),
            singularity_abscissa: 0.0,
            method: MethodTag::Scalar,
            description,
        }
    }

    pub fn poisson_closed(
        p: TwoLevelParams,
        relax: Option<RelaxationParams>,
        w_r: f64,
    ) -> Self {
        let description = format!(
            "poisson closed form; eps={}, v={}, w_r={w_r}, relax={relax:?}",
            p.epsilon, p.v
        );
        Self {
            eval: Box::new(move |s| Ok(survival_laplace_poisson(s, p, relax, w_r))),
            singularity_abscissa: 0.0,
            method: MethodTag::PoissonClosed,
            description,
        }
    }

    pub fn anomalous_closed(p: TwoLevelParams, alpha: f64) -> Result<Self> {
        survival_laplace_anomalous_limit(Complex64::new(p.v, 0.0), p, alpha)?;
        let description = format!(
            "anomalous frequent-measurement limit; eps={}, v={}, alpha={alpha}",
            p.epsilon, p.v
        );
        Ok(Self {
            eval: Box::new(move |s| survival_laplace_anomalous_limit(s, p, alpha)),
            singularity_abscissa: 0.0,
            method: MethodTag::AnomalousClosed,
            description,
        })
    }

    pub fn relaxed_anomalous_closed(alpha: f64, w_tilde_d0: f64) -> Result<Self> {
        survival_laplace_relaxed_anomalous(Complex64::new(1.0, 0.0), alpha, w_tilde_d0)?;
        let description =
            format!("relaxed anomalous limit; alpha={alpha}, w_tilde_d0={w_tilde_d0}");
        Ok(Self {
            eval: Box::new(move |s| survival_laplace_relaxed_anomalous(s, alpha, w_tilde_d0)),
            singularity_abscissa: 0.0,
            method: MethodTag::RelaxedAnomalousClosed,
            description,
        })
    }

    /// Wrap an arbitrary transform (validation pairs, composite expressions).
    pub fn from_fn<F>(f: F, singularity_abscissa: f64, description: &str) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self {
            eval: Box::new(f),
            singularity_abscissa,
            method: MethodTag::Reference,
            description: description.to_string(),
        }
    }
}

impl std::fmt::Debug for LaplaceSurvival {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LaplaceSurvival")
            .field("method", &self.method)
            .field("singularity_abscissa", &self.singularity_abscissa)
            .field("description", &self.description)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{build_hamiltonian, SystemModel};
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn two_level(ebar: f64) -> (TwoLevelParams, SystemModel) {
        let p = TwoLevelParams::new(ebar, 1.0).unwrap();
        (p, SystemModel::two_level(p, None))
    }

    #[test]
    fn poisson_resolvent_identity() {
        // The averaged propagator equals (s + iH_hat + w_r Q)^-1 elementwise.
        for ebar in [0.0, 1.0, 2.5] {
            for w_r in [0.5, 2.0, 10.0] {
                let (_, model) = two_level(ebar);
                let renewal = RenewalModel::poisson(w_r).unwrap();
                for s_re in [0.1, 1.0, 10.0] {
                    let s = Complex64::new(s_re, 0.0);
                    let u = averaged_propagator_laplace(s, &model, &renewal).unwrap();
                    let l = generator(&model);
                    let (_, q) = projector_superops(0, 2).unwrap();
                    let eye = SuperOp::identity(4);
                    let resolvent = eye
                        .scale(s)
                        .add(&l)
                        .add(&q.scale(cr(w_r)))
                        .inverse()
                        .unwrap();
                    assert!(
                        u.max_abs_diff(&resolvent) <= 1e-10,
                        "ebar={ebar}, w_r={w_r}, s={s_re}: gap {}",
                        u.max_abs_diff(&resolvent)
                    );
                }
            }
        }
    }

    #[test]
    fn large_s_short_time_limit() {
        // the correction decays as w_r/s (Poisson), exp(-s t_r) (equidistant)
        // and (w_r/s)^alpha (Mittag-Leffler), so the heavy-tailed case needs
        // a larger s to reach the same 1e-4 band
        let (_, model) = two_level(1.0);
        let cases = [
            (RenewalModel::poisson(2.0).unwrap(), 1e7),
            (RenewalModel::equidistant(0.5).unwrap(), 1e7),
            (RenewalModel::mittag_leffler(0.5, 2.0).unwrap(), 2e10),
        ];
        for (renewal, s_re) in cases {
            let s = Complex64::new(s_re, 0.0);
            let u = averaged_propagator_laplace(s, &model, &renewal).unwrap();
            let want = SuperOp::identity(4).scale(1.0 / s);
            let rel = u.max_abs_diff(&want) * s.norm();
            assert!(rel < 1e-4, "{renewal}: rel deviation {rel:.2e}");
        }
    }

    #[test]
    fn equidistant_supermatrix_matches_segment_oracle() {
        // Direct product formula: p(t) = p1(t - n t_r) p1(t_r)^n gives
        // p~(s) = Int_0^{t_r} e^{-s u} p1(u) du / (1 - p1(t_r) e^{-s t_r}),
        // summing the geometric series over whole segments.
        let (p, model) = two_level(1.0);
        let t_r = 0.8;
        let renewal = RenewalModel::equidistant(t_r).unwrap();
        let rabi = |t: f64| {
            let e = p.energy();
            1.0 - (p.v * p.v) / (e * e) * (e * t).sin().powi(2)
        };
        for s_re in [0.3, 1.0, 5.0] {
            let s = Complex64::new(s_re, 0.0);
            let (seg, _) = adaptive_simpson_complex(
                &|u: f64| (-s * u).exp() * rabi(u),
                0.0,
                t_r,
                1e-13,
            );
            let oracle = seg / (cr(1.0) - cr(rabi(t_r)) * (-s * t_r).exp());
            let got = survival_laplace(s, &model, &renewal, SolveMethod::Supermatrix).unwrap();
            assert!(
                (got - oracle).norm() / oracle.norm() < 1e-6,
                "s={s_re}: got {got}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn uncoupled_state_is_stationary() {
        // v = 0 at the matrix level: measured state is an eigenstate, p~ = 1/s.
        let h = array![
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]
        ];
        let model = SystemModel::new(h, 0, None).unwrap();
        for renewal in [
            RenewalModel::poisson(2.0).unwrap(),
            RenewalModel::equidistant(0.7).unwrap(),
            RenewalModel::mittag_leffler(0.5, 2.0).unwrap(),
        ] {
            for method in [SolveMethod::Supermatrix, SolveMethod::Scalar] {
                let s = Complex64::new(0.9, 0.0);
                let got = survival_laplace(s, &model, &renewal, method).unwrap();
                assert!(
                    (got - 1.0 / s).norm() < 1e-7,
                    "{renewal}, {method:?}: got {got}"
                );
            }
        }
    }

    #[test]
    fn poisson_supermatrix_matches_closed_form() {
        for ebar in [0.0, 1.0, 2.5] {
            let (p, model) = two_level(ebar);
            for w_r in [0.5, 2.0, 10.0] {
                let renewal = RenewalModel::poisson(w_r).unwrap();
                for s_re in [0.1, 1.0, 10.0] {
                    let s = Complex64::new(s_re, 0.0);
                    let got =
                        survival_laplace(s, &model, &renewal, SolveMethod::Supermatrix).unwrap();
                    let want = survival_laplace_poisson(s, p, None, w_r);
                    assert!(
                        (got - want).norm() < 1e-10,
                        "ebar={ebar} w_r={w_r} s={s_re}: {got} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn dual_path_supermatrix_vs_scalar_lattice() {
        // Same transform through two algebraically independent routes. The
        // scalar evaluator is reused per (model, renewal) so its p1 table is
        // built once; s descends so the cached horizon only grows.
        for ebar in [0.0, 1.0, 2.5] {
            let (_, model) = two_level(ebar);
            for w_r in [0.5, 2.0, 10.0] {
                for renewal in [
                    RenewalModel::poisson(w_r).unwrap(),
                    RenewalModel::equidistant(1.0 / w_r).unwrap(),
                    RenewalModel::mittag_leffler(0.5, w_r).unwrap(),
                ] {
                    let scalar = LaplaceSurvival::scalar(model.clone(), renewal);
                    for s_re in [10.0, 1.0, 0.1] {
                        let s = Complex64::new(s_re, 0.0);
                        let a =
                            survival_laplace(s, &model, &renewal, SolveMethod::Supermatrix)
                                .unwrap();
                        let b = scalar.eval(s).unwrap();
                        let rel = (a - b).norm() / a.norm();
                        assert!(
                            rel < 1e-6,
                            "ebar={ebar}, {renewal}, s={s_re}: supermatrix {a} vs scalar {b} (rel {rel:.2e})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn scalar_method_refused_for_ml_small_s() {
        let (_, model) = two_level(1.0);
        let renewal = RenewalModel::mittag_leffler(0.5, 100.0).unwrap();
        let s = Complex64::new(0.05, 0.0);
        assert!(matches!(
            survival_laplace(s, &model, &renewal, SolveMethod::Scalar),
            Err(ZenoError::ScalarMethodDomain { .. })
        ));
    }

    #[test]
    fn poisson_closed_form_zeno_time_values() {
        // s = 0 gives t_Z = 1/w_r + 1/wbar_0; at ebar = 0, v = 1, w_r = sqrt(2)
        // the total is sqrt(2) (the minimum over w_r).
        let p = TwoLevelParams::new(0.0, 1.0).unwrap();
        let w_r = 2.0f64.sqrt();
        let tz = survival_laplace_poisson(Complex64::default(), p, None, w_r).re;
        assert_abs_diff_eq!(tz, 2.0f64.sqrt(), epsilon = 1e-12);

        // v -> 0: p~ -> 1/s
        let small_v = TwoLevelParams::new(1.0, 1e-8).unwrap();
        let s = Complex64::new(0.7, 0.0);
        let val = survival_laplace_poisson(s, small_v, None, 2.0);
        assert!((val - 1.0 / s).norm() < 1e-9);

        // with relaxation at s = 0: 1/w_r + 1/wbar_d0
        let relax = RelaxationParams::new(0.3, 0.4).unwrap();
        let p = TwoLevelParams::new(1.0, 1.0).unwrap();
        let w_r = 2.0;
        let w_rp = w_r + 0.4;
        let wbar_d0 = 0.3 + 2.0 * w_rp / (w_rp * w_rp + 4.0);
        let tz = survival_laplace_poisson(Complex64::default(), p, Some(relax), w_r).re;
        assert_abs_diff_eq!(tz, 1.0 / w_r + 1.0 / wbar_d0, epsilon = 1e-12);
    }

    #[test]
    fn anomalous_limit_alpha_one_is_free() {
        let p = TwoLevelParams::new(0.53, 1.0).unwrap();
        for s_re in [0.2, 1.0, 8.0] {
            let s = Complex64::new(s_re, 0.4);
            let got = survival_laplace_anomalous_limit(s, p, 1.0).unwrap();
            assert!((got - 1.0 / s).norm() < 1e-12);
        }
    }

    #[test]
    fn anomalous_limit_short_time() {
        let p = TwoLevelParams::new(0.94, 1.0).unwrap();
        let s = Complex64::new(1e3, 0.0);
        let got = survival_laplace_anomalous_limit(s, p, 0.3).unwrap();
        let rel = (got - 1.0 / s).norm() * s.norm();
        assert!(rel < 1e-3, "rel = {rel:.2e}");
    }

    #[test]
    fn anomalous_limit_matches_supermatrix_at_large_w_r() {
        let (p, model) = two_level(0.53);
        let alpha = 0.5;
        let renewal = RenewalModel::mittag_leffler(alpha, 1e6).unwrap();
        for s_re in [0.3, 1.0, 4.0] {
            let s = Complex64::new(s_re, 0.0);
            let limit = survival_laplace_anomalous_limit(s, p, alpha).unwrap();
            let full = survival_laplace(s, &model, &renewal, SolveMethod::Supermatrix).unwrap();
            let rel = (limit - full).norm() / full.norm();
            assert!(rel < 1e-3, "s={s_re}: rel={rel:.2e}");
        }
    }

    #[test]
    fn anomalous_limit_real_and_positive_on_real_axis() {
        let p = TwoLevelParams::new(0.53, 1.0).unwrap();
        for alpha in [0.1, 0.3, 0.92] {
            for s_re in [0.01, 0.5, 3.0, 50.0] {
                let v = survival_laplace_anomalous_limit(Complex64::new(s_re, 0.0), p, alpha)
                    .unwrap();
                assert!(v.im.abs() < 1e-14 * v.re.abs());
                assert!(v.re > 0.0);
            }
        }
    }

    #[test]
    fn relaxed_anomalous_values() {
        // alpha = 1, wtilde = 1, s = 1: (1 + 1)/(1 + 3) = 1/2
        let got =
            survival_laplace_relaxed_anomalous(Complex64::new(1.0, 0.0), 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(got.re, 0.5, epsilon = 1e-14);
        assert!(got.im.abs() < 1e-15);

        // alpha = 1 reduces to 1/(s + wtilde) for any s
        for s_re in [0.2, 1.7, 9.0] {
            let s = Complex64::new(s_re, 0.3);
            let got = survival_laplace_relaxed_anomalous(s, 1.0, 0.8).unwrap();
            assert!((got - 1.0 / (s + 0.8)).norm() < 1e-13);
        }

        // s -> infinity: 1/s
        let s = Complex64::new(1e8, 0.0);
        let got = survival_laplace_relaxed_anomalous(s, 0.5, 1.0).unwrap();
        assert!((got - 1.0 / s).norm() * s.norm() < 1e-3);

        // alpha = 0.5, wtilde = 1, s = 1: (1 + 3^-0.5)/(1 + 3^0.5) = 1/sqrt(3)
        let got =
            survival_laplace_relaxed_anomalous(Complex64::new(1.0, 0.0), 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(got.re, 1.0 / 3.0f64.sqrt(), epsilon = 1e-14);

        assert!(matches!(
            survival_laplace_relaxed_anomalous(Complex64::default(), 0.5, 1.0),
            Err(ZenoError::BranchPoint)
        ));
    }

    #[test]
    fn evaluator_invariants_real_axis() {
        // real positive values, s p~(s) <= 1 + 1e-9, and s p~ -> 1 at huge s
        let (p, model) = two_level(1.0);
        let w_r = 2.0;
        let evaluators: Vec<LaplaceSurvival> = vec![
            LaplaceSurvival::supermatrix(model.clone(), RenewalModel::poisson(w_r).unwrap()),
            LaplaceSurvival::scalar(model.clone(), RenewalModel::poisson(w_r).unwrap()),
            LaplaceSurvival::poisson_closed(p, None, w_r),
            LaplaceSurvival::anomalous_closed(p, 0.5).unwrap(),
            LaplaceSurvival::relaxed_anomalous_closed(0.5, 1.0).unwrap(),
        ];
        for ev in &evaluators {
            for s_re in [0.1, 1.0, 10.0] {
                let v = ev.eval(Complex64::new(s_re, 0.0)).unwrap();
                assert!(v.re > 0.0, "{:?} at {s_re}", ev.method());
                assert!(v.im.abs() < 1e-9 * v.re);
                assert!(s_re * v.re <= 1.0 + 1e-9, "{:?}: s p~ = {}", ev.method(), s_re * v.re);
            }
            let s = Complex64::new(1e6 * 10.0, 0.0);
            let v = ev.eval(s).unwrap();
            assert!(
                ((s * v) - cr(1.0)).norm() < 1e-4,
                "{:?}: s p~ = {} at s = 1e7",
                ev.method(),
                s * v
            );
        }
    }
}
