//! Mittag-Leffler functions on the negative real axis.
//!
//! E_alpha(-x) governs the heavy-tailed renewal survival probability and
//! E_{alpha,alpha}(-x) its density. Neither has a single representation that
//! is accurate over the whole domain, so evaluation is split into three
//! regions:
//!
//! - power series for x <= 1 (terms until |term| < 1e-16, capped at 400),
//! - a three-term inverse-power asymptotic series once its own error estimate
//!   (next nonzero term plus the pseudo-exponential hump bound for alpha > 1/2)
//!   drops below 1e-10 relative,
//! - a real integral representation in the crossover band. Substituting
//!   u = r^alpha into the classic spectral form gives, with s = x^(1/alpha),
//!   u(theta) = -cos(alpha pi) + sin(alpha pi) tan(theta):
//!
//!   E_alpha(-x)        = 1/(alpha pi) Int_{theta0}^{pi/2} exp(-s u^(1/alpha)) dtheta
//!   E_{alpha,alpha}(-x) = x^(1/alpha - 1)/(alpha pi)
//!                         Int_{theta0}^{pi/2} u^(1/alpha) exp(-s u^(1/alpha)) dtheta
//!
//!   with theta0 = atan(cot(alpha pi)). The integrands are smooth and bounded;
//!   panels are split at the decades of the exponent to resolve the boundary
//!   layer at large s.

use crate::error::{Result, ZenoError};
use crate::quad::adaptive_simpson;

const SERIES_CAP: usize = 400;
const SERIES_TERM_TOL: f64 = 1e-16;
const ASYM_REL_TOL: f64 = 1e-10;

/// 1/Gamma(x) for real x, zero at the poles (non-positive integers).
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    let g = libm::tgamma(x);
    if g.is_finite() {
        1.0 / g
    } else {
        0.0
    }
}

fn check_domain(alpha: f64, x: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(ZenoError::InvalidParameter {
            name: "alpha",
            reason: format!("need 0 < alpha <= 1, got {alpha}"),
        });
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(ZenoError::InvalidParameter {
            name: "x",
            reason: format!("need x >= 0 and finite, got {x}"),
        });
    }
    Ok(())
}

/// E_alpha(-x) for 0 < alpha <= 1, x >= 0. Monotone decreasing, values in (0, 1].
pub fn mittag_leffler_neg(alpha: f64, x: f64) -> Result<f64> {
    check_domain(alpha, x)?;
    if alpha == 1.0 {
        return Ok((-x).exp());
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x <= 1.0 {
        return Ok(series(alpha, 1.0, x));
    }
    if let Some(v) = asymptotic(alpha, 1.0, x) {
        return Ok(v);
    }
    Ok(integral_e(alpha, x))
}

/// E_{alpha,alpha}(-x) for 0 < alpha <= 1, x >= 0.
pub fn mittag_leffler_aa_neg(alpha: f64, x: f64) -> Result<f64> {
    check_domain(alpha, x)?;
    if alpha == 1.0 {
        return Ok((-x).exp());
    }
    if x == 0.0 {
        return Ok(recip_gamma(alpha));
    }
    if x <= 1.0 {
        return Ok(series(alpha, alpha, x));
    }
    if let Some(v) = asymptotic(alpha, alpha, x) {
        return Ok(v);
    }
    Ok(integral_aa(alpha, x))
}

/// sum_k (-x)^k / Gamma(alpha k + beta)
fn series(alpha: f64, beta: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0;
    for k in 0..SERIES_CAP {
        let term = pow * recip_gamma(alpha * k as f64 + beta);
        sum += term;
        if k > 3 && term.abs() < SERIES_TERM_TOL {
            break;
        }
        pow *= -x;
    }
    sum
}

/// Three-term asymptotic series E_{alpha,beta}(-x) ~ sum_{k>=1} (-1)^{k+1} x^-k / Gamma(beta - alpha k),
/// returned only when its internal error estimate is below `ASYM_REL_TOL` relative.
fn asymptotic(alpha: f64, beta: f64, x: f64) -> Option<f64> {
    let term = |k: u32| {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sign * x.powi(-(k as i32)) * recip_gamma(beta - alpha * k as f64)
    };
    let mut sum = 0.0;
    let mut kept = 0;
    let mut k = 1;
    while kept < 3 && k <= 8 {
        let t = term(k);
        if t != 0.0 {
            kept += 1;
        }
        sum += t;
        k += 1;
    }
    // next nonzero term as the truncation estimate
    let mut err = 0.0;
    for kk in k..k + 4 {
        let t = term(kk).abs();
        if t > 0.0 {
            err = t;
            break;
        }
    }
    // pseudo-exponential hump: for alpha > 1/2 a contribution
    // ~ exp(x^(1/alpha) cos(pi/alpha)) that inverse powers cannot see
    if alpha > 0.5 {
        let decay = x.powf(1.0 / alpha) * (std::f64::consts::PI / alpha).cos();
        err += decay.exp();
    }
    let scale = sum.abs().max(1e-300);
    if err / scale < ASYM_REL_TOL && sum > 0.0 {
        Some(sum)
    } else {
        None
    }
}

/// theta values splitting the crossover integral where s u^(1/alpha) crosses
/// fixed decades, so each panel is boundary-layer free.
fn panel_points(alpha: f64, s: f64, c: f64, sa: f64, theta0: f64) -> Vec<f64> {
    let mut pts = vec![theta0];
    for level in [1e-3, 1e-2, 0.1, 0.5, 1.0, 3.0, 10.0, 40.0] {
        let u = (level / s).powf(alpha);
        let th = ((u + c) / sa).atan();
        if th > *pts.last().unwrap() + 1e-15 && th < std::f64::consts::FRAC_PI_2 {
            pts.push(th);
        }
    }
    pts.push(std::f64::consts::FRAC_PI_2);
    pts
}

/// Integrate over the panels twice: a scouting pass fixes the magnitude, the
/// second pass re-integrates with a tolerance scaled to it so small values
/// keep relative accuracy.
fn two_pass_panels<F: Fn(f64) -> f64>(f: &F, pts: &[f64]) -> f64 {
    let scout: f64 = pts
        .windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], 1e-12).0)
        .sum();
    let tol = (1e-11 * scout.abs()).clamp(1e-16, 1e-13);
    pts.windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], tol).0)
        .sum()
}

fn integral_e(alpha: f64, x: f64) -> f64 {
    let c = (alpha * std::f64::consts::PI).cos();
    let sa = (alpha * std::f64::consts::PI).sin();
    let theta0 = (c / sa).atan();
    let s = x.powf(1.0 / alpha);
    let f = |th: f64| {
        let u = -c + sa * th.tan();
        if u <= 0.0 {
            return 1.0;
        }
        let e = s * u.powf(1.0 / alpha);
        if e > 700.0 {
            0.0
        } else {
            (-e).exp()
        }
    };
    let pts = panel_points(alpha, s, c, sa, theta0);
    two_pass_panels(&f, &pts) / (alpha * std::f64::consts::PI)
}

fn integral_aa(alpha: f64, x: f64) -> f64 {
    let c = (alpha * std::f64::consts::PI).cos();
    let sa = (alpha * std::f64::consts::PI).sin();
    let theta0 = (c / sa).atan();
    let s = x.powf(1.0 / alpha);
    let f = |th: f64| {
        let u = -c + sa * th.tan();
        if u <= 0.0 {
            return 0.0;
        }
        let w = u.powf(1.0 / alpha);
        let e = s * w;
        if e > 700.0 {
            0.0
        } else {
            w * (-e).exp()
        }
    };
    let pts = panel_points(alpha, s, c, sa, theta0);
    x.powf(1.0 / alpha - 1.0) * two_pass_panels(&f, &pts) / (alpha * std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Reference values computed with mpmath at 40+ digits, each cross-checked
    // between an extended-precision power series and an independent
    // quadrature of the spectral representation (agreement < 1e-13 relative).
    const E_ALPHA_TABLE: &[(f64, f64, f64)] = &[
        (0.1, 0.5, 0.65432446028800193),
        (0.1, 2.0, 0.3200153359597274),
        (0.1, 10.0, 0.085696957010654685),
        (0.1, 50.0, 0.018378057012219195),
        (0.1, 1000.0, 0.00093492055360589074),
        (0.1, 100000.0, 9.3577013161971817e-6),
        (0.3, 0.5, 0.63264900594359902),
        (0.3, 2.0, 0.29023222616787536),
        (0.3, 10.0, 0.072649729072772086),
        (0.3, 50.0, 0.015228201501814695),
        (0.3, 1000.0, 0.00076993246495257769),
        (0.3, 100000.0, 7.7037867563508561e-6),
        (0.5, 0.5, 0.61569034419292587),
        (0.5, 2.0, 0.25539567631050574),
        (0.5, 10.0, 0.056140992743822586),
        (0.5, 50.0, 0.011281536265323773),
        (0.5, 1000.0, 0.00056418930145338765),
        (0.5, 100000.0, 5.6418958351954681e-6),
        (0.7, 0.5, 0.60514759205956427),
        (0.7, 2.0, 0.21378672701529728),
        (0.7, 10.0, 0.036173265542309158),
        (0.7, 50.0, 0.0067936656703830939),
        (0.7, 1000.0, 0.0003345414571740996),
        (0.7, 100000.0, 3.3427543859437363e-6),
        (0.9, 0.5, 0.60340549869586097),
        (0.9, 2.0, 0.16352830001693004),
        (0.9, 10.0, 0.0128206060511021),
        (0.9, 50.0, 0.002175353076856976),
        (0.9, 1000.0, 0.00010528835943209589),
        (0.9, 100000.0, 1.0511544325003103e-6),
        (0.97, 0.5, 0.60529480845078951),
        (0.97, 2.0, 0.1439478234106674),
        (0.97, 10.0, 0.0039382778261812577),
        (0.97, 50.0, 0.00063473970809687388),
        (0.97, 1000.0, 3.0560139450713441e-5),
        (0.97, 100000.0, 3.0502337598003991e-7),
        (0.999, 0.5, 0.60648529133691132),
        (0.999, 2.0, 0.13562392299454344),
        (0.999, 10.0, 0.00017584834590871162),
        (0.999, 50.0, 2.0862972463840594e-5),
        (0.999, 1000.0, 1.0025808660865962e-6),
        (0.999, 100000.0, 1.0005965433334295e-8),
    ];

    const E_AA_TABLE: &[(f64, f64, f64)] = &[
        (0.5, 0.25, 0.3716029466150071),
        (0.5, 1.0, 0.13660600739194928),
        (0.5, 9.0, 0.0034200672077841296),
        (0.3, 1.7, 0.040290237389144003),
        (0.9, 4.0, 0.01992384714278625),
        (0.97, 2.0, 0.12709236972801386),
    ];

    #[test]
    fn recip_gamma_poles_and_values() {
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-1.0), 0.0);
        assert_eq!(recip_gamma(-7.0), 0.0);
        assert_abs_diff_eq!(recip_gamma(1.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(recip_gamma(0.5), 1.0 / std::f64::consts::PI.sqrt(), epsilon = 1e-14);
        // Gamma(-0.5) = -2 sqrt(pi)
        assert_abs_diff_eq!(
            recip_gamma(-0.5),
            -1.0 / (2.0 * std::f64::consts::PI.sqrt()),
            epsilon = 1e-14
        );
    }

    #[test]
    fn ml_at_zero_is_one() {
        for alpha in [0.1, 0.5, 0.9, 1.0] {
            assert_abs_diff_eq!(mittag_leffler_neg(alpha, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn ml_alpha_one_is_exp() {
        assert_abs_diff_eq!(
            mittag_leffler_neg(1.0, 2.0).unwrap(),
            0.135335283236612692,
            epsilon = 1e-14
        );
    }

    #[test]
    fn ml_half_erfc_identity() {
        // E_{1/2}(-1) = e * erfc(1)
        assert_abs_diff_eq!(
            mittag_leffler_neg(0.5, 1.0).unwrap(),
            0.427583576155807004,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ml_matches_reference_table() {
        for &(alpha, x, want) in E_ALPHA_TABLE {
            let got = mittag_leffler_neg(alpha, x).unwrap();
            let rel = (got - want).abs() / want;
            assert!(
                rel < 2e-9,
                "E_{alpha}(-{x}): got {got:.17e}, want {want:.17e}, rel {rel:.2e}"
            );
        }
    }

    #[test]
    fn ml_aa_matches_reference_table() {
        for &(alpha, x, want) in E_AA_TABLE {
            let got = mittag_leffler_aa_neg(alpha, x).unwrap();
            let rel = (got - want).abs() / want;
            assert!(
                rel < 2e-9,
                "E_{{{alpha},{alpha}}}(-{x}): got {got:.17e}, want {want:.17e}, rel {rel:.2e}"
            );
        }
    }

    #[test]
    fn ml_monotone_decreasing() {
        for alpha in [0.2, 0.5, 0.8, 0.97] {
            let mut prev = 1.0;
            let mut x = 1e-3;
            while x < 1e6 {
                let v = mittag_leffler_neg(alpha, x).unwrap();
                assert!(v > 0.0 && v < prev, "alpha={alpha}, x={x}: {v} !< {prev}");
                prev = v;
                x *= 1.7;
            }
        }
    }

    #[test]
    fn ml_alpha_near_one_approaches_exp() {
        let mut max_gap: f64 = 0.0;
        for i in 0..=100 {
            let x = i as f64 * 0.1;
            let gap = (mittag_leffler_neg(0.999, x).unwrap() - (-x).exp()).abs();
            max_gap = max_gap.max(gap);
        }
        assert!(max_gap <= 2e-2, "max |E_0.999(-x) - exp(-x)| = {max_gap}");
    }

    #[test]
    fn ml_region_boundaries_are_continuous() {
        // series/integral seam at x = 1 and integral/asymptotic seam
        for alpha in [0.3, 0.5, 0.7, 0.9] {
            let a = mittag_leffler_neg(alpha, 1.0 - 1e-9).unwrap();
            let b = mittag_leffler_neg(alpha, 1.0 + 1e-9).unwrap();
            assert!((a - b).abs() < 1e-8, "alpha={alpha}: {a} vs {b}");
        }
    }

    #[test]
    fn ml_rejects_bad_domain() {
        assert!(mittag_leffler_neg(0.0, 1.0).is_err());
        assert!(mittag_leffler_neg(1.2, 1.0).is_err());
        assert!(mittag_leffler_neg(0.5, -1.0).is_err());
    }
}
