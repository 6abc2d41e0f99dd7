//! Adaptive Simpson quadrature for the scalar Laplace transforms and the
//! Mittag-Leffler crossover integral.

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
/// Returns (integral, error estimate).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 52)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        // Richardson correction; error estimate from the Simpson defect.
        (left + right + delta / 15.0, delta.abs() / 15.0)
    } else {
        let (il, el) = recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
        let (ir, er) = recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        (il + ir, el + er)
    }
}

/// Complex-valued adaptive Simpson (same scheme, error in the complex norm).
pub fn adaptive_simpson_complex<F: Fn(f64) -> num_complex::Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> (num_complex::Complex64, f64) {
    use num_complex::Complex64;
    if a == b {
        return (Complex64::default(), 0.0);
    }
    fn go<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> (Complex64, f64) {
        let m = 0.5 * (a + b);
        let flm = f(0.5 * (a + m));
        let frm = f(0.5 * (m + b));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            (left + right + delta / 15.0, delta.norm() / 15.0)
        } else {
            let (il, el) = go(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
            let (ir, er) = go(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
            (il + ir, el + er)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    go(f, a, b, fa, fm, fb, whole, tol, 52)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn complex_exponential() {
        // Int_0^1 exp(i w x) dx = (exp(i w) - 1)/(i w)
        let w = 7.0;
        let (v, _) = adaptive_simpson_complex(
            &|x: f64| Complex64::new(0.0, w * x).exp(),
            0.0,
            1.0,
            1e-13,
        );
        let want = (Complex64::new(0.0, w).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((v - want).norm() < 1e-11);
    }

    #[test]
    fn polynomial_exact() {
        let (v, _) = adaptive_simpson(&|x: f64| x * x * x, 0.0, 2.0, 1e-12);
        assert_abs_diff_eq!(v, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn decaying_exponential() {
        let (v, _) = adaptive_simpson(&|x: f64| (-x).exp(), 0.0, 40.0, 1e-13);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn oscillatory() {
        let (v, _) = adaptive_simpson(&|x: f64| (10.0 * x).sin(), 0.0, 1.0, 1e-13);
        assert_abs_diff_eq!(v, (1.0 - (10.0f64).cos()) / 10.0, epsilon = 1e-11);
    }

    #[test]
    fn integrable_singularity() {
        // sqrt singularity at the left endpoint
        let (v, _) = adaptive_simpson(&|x: f64| x.sqrt().recip(), 1e-12, 1.0, 1e-10);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-5);
    }
}
