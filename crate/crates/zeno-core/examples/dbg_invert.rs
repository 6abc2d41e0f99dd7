// temporary: inspect subtracted-coefficient fit and |g| decay
use num_complex::Complex64;

fn main() {
    let (a, b) = (2e-4, 2.74);
    let f = |s: Complex64| -> Complex64 {
        let sa = s + a;
        0.5 * (1.0 / sa + sa / (sa * sa + b * b))
    };
    let kappa = 0.5f64 * 3.288;
    let big_s = 1e6 * 3.288;
    // replicate the 3-level fit
    let mut coeffs = [0.0f64; 3];
    for m in 0..3usize {
        let s = Complex64::new(big_s / 4f64.powi(m as i32), 0.0);
        let shifted = s + kappa;
        let mut rest = f(s) - 1.0 / s;
        for (j, c) in coeffs.iter().enumerate().take(m) {
            rest -= *c / shifted.powi(j as i32 + 2);
        }
        coeffs[m] = (rest * shifted.powi(m as i32 + 2)).re;
    }
    println!("coeffs = {coeffs:?}");
    println!("true d1 ~ {}, d2 ~ {}", -a, (a * a - b * b / 2.0));
    let c = 10.06 / 12500.0;
    for omega in [5.0, 10.0, 30.0, 100.0, 300.0, 1000.0, 8300.0] {
        let s = Complex64::new(c, omega);
        let shifted = s + kappa;
        let mut g = f(s) - 1.0 / s;
        let mut power = shifted * shifted;
        for cc in coeffs {
            g -= cc / power;
            power *= shifted;
        }
        println!("omega={omega:8}: |g| = {:.3e}", g.norm());
    }
}
