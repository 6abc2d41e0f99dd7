//! Dense complex matrix helpers used by the Liouville-space solvers.
//!
//! Everything here operates on small d^2 x d^2 supermatrices, so explicit
//! inverses and full eigendecompositions are appropriate; no sparse paths.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, Inverse, OperationNorm};
use num_complex::Complex64;

use crate::error::{Result, ZenoError};

pub type CMat = Array2<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(n: usize) -> CMat {
    Array2::eye(n)
}

/// Largest entry magnitude, used for absolute tolerances.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Max column absolute sum (induced 1-norm).
pub fn op_norm_one(a: &CMat) -> f64 {
    a.opnorm_one().unwrap_or_else(|_| max_abs(a))
}

pub fn hermitian_deviation(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    dev
}

/// LU inverse with partial pivoting for the small supermatrices that dominate
/// the contour evaluations; LAPACK call overhead exceeds the flop count below
/// dimension ~12, so those go through a hand-rolled factorization.
fn inv_small(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, lu[[r, col]].norm_sqr()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty column");
        if pivot_mag == 0.0 {
            return Err(ZenoError::LinearSolve(format!(
                "singular matrix (zero pivot in column {col})"
            )));
        }
        if pivot_row != col {
            perm.swap(pivot_row, col);
            for j in 0..n {
                let tmp = lu[[col, j]];
                lu[[col, j]] = lu[[pivot_row, j]];
                lu[[pivot_row, j]] = tmp;
            }
        }
        let pivot = lu[[col, col]];
        for r in col + 1..n {
            let factor = lu[[r, col]] / pivot;
            lu[[r, col]] = factor;
            for j in col + 1..n {
                let sub = factor * lu[[col, j]];
                lu[[r, j]] -= sub;
            }
        }
    }
    let mut out = Array2::<Complex64>::zeros((n, n));
    let mut col_buf = vec![Complex64::default(); n];
    for e in 0..n {
        // forward substitution on the permuted unit vector
        for (r, slot) in col_buf.iter_mut().enumerate() {
            *slot = if perm[r] == e { ONE } else { Complex64::default() };
        }
        for r in 1..n {
            for j in 0..r {
                let sub = lu[[r, j]] * col_buf[j];
                col_buf[r] -= sub;
            }
        }
        for r in (0..n).rev() {
            for j in r + 1..n {
                let sub = lu[[r, j]] * col_buf[j];
                col_buf[r] -= sub;
            }
            col_buf[r] /= lu[[r, r]];
        }
        for r in 0..n {
            out[[r, e]] = col_buf[r];
        }
    }
    Ok(out)
}

pub fn inv(a: &CMat) -> Result<CMat> {
    if a.nrows() <= 12 {
        return inv_small(a);
    }
    a.inv().map_err(|e| ZenoError::LinearSolve(e.to_string()))
}

/// Solve A X = B for a matrix right-hand side.
pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    Ok(inv(a)?.dot(b))
}

/// 1-norm condition estimate from an explicit inverse.
pub fn cond_one(a: &CMat, a_inv: &CMat) -> f64 {
    op_norm_one(a) * op_norm_one(a_inv)
}

/// Eigendecomposition of a general complex matrix: (eigenvalues, eigenvector columns).
pub fn eig(a: &CMat) -> Result<(Array1<Complex64>, CMat)> {
    a.eig()
        .map_err(|e| ZenoError::Eigendecomposition(e.to_string()))
}

// Pade-13 numerator/denominator coefficients for exp (Higham 2005).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Matrix exponential exp(A) by scaling-and-squaring with the order-13 Pade
/// approximant. Handles non-normal matrices; no eigendecomposition involved.
pub fn matrix_exp(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = op_norm_one(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(squarings as i32), 0.0);
    let a = a.mapv(|z| z * scale);

    let a2 = a.dot(&a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let eye: CMat = identity(n);

    let u_inner = a6.mapv(|z| z * b(13)) + a4.mapv(|z| z * b(11)) + a2.mapv(|z| z * b(9));
    let u_poly =
        a6.dot(&u_inner) + a6.mapv(|z| z * b(7)) + a4.mapv(|z| z * b(5)) + a2.mapv(|z| z * b(3)) + eye.mapv(|z| z * b(1));
    let u = a.dot(&u_poly);

    let v_inner = a6.mapv(|z| z * b(12)) + a4.mapv(|z| z * b(10)) + a2.mapv(|z| z * b(8));
    let v = a6.dot(&v_inner) + a6.mapv(|z| z * b(6)) + a4.mapv(|z| z * b(4)) + a2.mapv(|z| z * b(2)) + eye.mapv(|z| z * b(0));

    let vmu = &v - &u;
    let vpu = &v + &u;
    // (V - U) X = (V + U); V - U is well conditioned after scaling.
    let mut x = solve(&vmu, &vpu).expect("Pade denominator is nonsingular after scaling");
    for _ in 0..squarings {
        x = x.dot(&x);
    }
    x
}

/// Apply a scalar function to a diagonalizable matrix through its
/// eigendecomposition: f(A) = V f(D) V^-1.
///
/// Fails when the eigenvector matrix condition number exceeds `cond_limit`
/// rather than silently degrading.
pub fn apply_spectral<F>(a: &CMat, cond_limit: f64, f: F) -> Result<CMat>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (vals, vecs) = eig(a)?;
    let vinv = inv(&vecs).map_err(|_| ZenoError::IllConditionedEigenvectors {
        cond: f64::INFINITY,
        limit: cond_limit,
    })?;
    let cond = cond_one(&vecs, &vinv);
    if !cond.is_finite() || cond > cond_limit {
        return Err(ZenoError::IllConditionedEigenvectors {
            cond,
            limit: cond_limit,
        });
    }
    let mut fd = Array2::<Complex64>::zeros((vals.len(), vals.len()));
    for (k, lambda) in vals.iter().enumerate() {
        fd[[k, k]] = f(*lambda)?;
    }
    Ok(vecs.dot(&fd).dot(&vinv))
}

/// Principal-branch fractional power A^beta via eigendecomposition.
///
/// The spectrum must stay clear of the branch cut (the non-positive real
/// axis); eigenvalues within `branch_tol` of it are rejected.
pub fn fractional_power(a: &CMat, beta: f64, cond_limit: f64) -> Result<CMat> {
    if beta == 1.0 {
        return Ok(a.clone());
    }
    let branch_tol = 1e-10 * max_abs(a).max(1e-300);
    apply_spectral(a, cond_limit, |lambda| {
        if lambda.im.abs() <= branch_tol && lambda.re <= branch_tol {
            return Err(ZenoError::EigenvalueOnBranchCut {
                value: lambda,
                tol: branch_tol,
            });
        }
        Ok(lambda.powf(beta))
    })
}
