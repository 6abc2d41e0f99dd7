//! Liouville-space algebra for a d-level system.
//!
//! A density matrix is vectorized row-major, index(|j><j'|) = j*d + j', so for
//! d = 2 the basis order is |11>, |12>, |21>, |22> (labels 1-based as usual in
//! the two-level literature, indices 0-based in code). Superoperators are
//! dense d^2 x d^2 complex matrices in that basis.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZenoError};
use crate::linalg::{self, CMat};

/// Absolute per-entry tolerance for Hermiticity checks on construction.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvector condition-number limit for spectral matrix functions.
pub const EIG_COND_LIMIT: f64 = 1e8;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Two-level Hamiltonian parameters: H = eps (|1><1| - |2><2|) + v (|1><2| + |2><1|),
/// both in angular-frequency units (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    /// Half-splitting of the free levels.
    pub epsilon: f64,
    /// Coupling between the levels.
    pub v: f64,
}

impl TwoLevelParams {
    pub fn new(epsilon: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(ZenoError::InvalidParameter {
                name: "v",
                reason: format!("coupling must be positive and finite, got {v}"),
            });
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(ZenoError::InvalidParameter {
                name: "epsilon",
                reason: format!("half-splitting must be >= 0 and finite, got {epsilon}"),
            });
        }
        Ok(Self { epsilon, v })
    }

    /// eps/v, the dimensionless splitting used throughout the closed forms.
    pub fn epsilon_bar(&self) -> f64 {
        self.epsilon / self.v
    }

    /// E = sqrt(eps^2 + v^2), half the Rabi splitting.
    pub fn energy(&self) -> f64 {
        self.epsilon.hypot(self.v)
    }
}

/// Population-relaxation rate w_d and dephasing rate w_p.
///
/// w_p >= w_d/2 is required for the evolved density matrix to stay positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationParams {
    pub w_d: f64,
    pub w_p: f64,
}

impl RelaxationParams {
    pub fn new(w_d: f64, w_p: f64) -> Result<Self> {
        if !(w_d >= 0.0) || !w_d.is_finite() {
            return Err(ZenoError::InvalidParameter {
                name: "w_d",
                reason: format!("population relaxation rate must be >= 0, got {w_d}"),
            });
        }
        if !(w_p >= 0.0) || !w_p.is_finite() {
            return Err(ZenoError::InvalidParameter {
                name: "w_p",
                reason: format!("dephasing rate must be >= 0, got {w_p}"),
            });
        }
        if w_p < w_d / 2.0 {
            return Err(ZenoError::InvalidParameter {
                name: "w_p",
                reason: format!(
                    "positivity requires w_p >= w_d/2, got w_p = {w_p} < {}",
                    w_d / 2.0
                ),
            });
        }
        Ok(Self { w_d, w_p })
    }
}

/// A d-level system: Hermitian Hamiltonian, measured state index, optional
/// relaxation. Source of every superoperator in the solvers.
#[derive(Debug, Clone)]
pub struct SystemModel {
    dim: usize,
    hamiltonian: CMat,
    measured_index: usize,
    relaxation: Option<RelaxationParams>,
}

impl SystemModel {
    pub fn new(
        hamiltonian: CMat,
        measured_index: usize,
        relaxation: Option<RelaxationParams>,
    ) -> Result<Self> {
        let dim = hamiltonian.nrows();
        if dim < 2 || hamiltonian.ncols() != dim {
            return Err(ZenoError::InvalidParameter {
                name: "hamiltonian",
                reason: format!("need a square matrix with d >= 2, got {dim}x{}", hamiltonian.ncols()),
            });
        }
        let dev = linalg::hermitian_deviation(&hamiltonian);
        if dev > HERMITICITY_TOL {
            return Err(ZenoError::NotHermitian {
                max_dev: dev,
                tol: HERMITICITY_TOL,
            });
        }
        if measured_index >= dim {
            return Err(ZenoError::IndexOutOfRange {
                index: measured_index,
                dim,
            });
        }
        if relaxation.is_some() && dim != 2 {
            return Err(ZenoError::InvalidParameter {
                name: "relaxation",
                reason: "the relaxation superoperator is defined for d = 2 only".into(),
            });
        }
        Ok(Self {
            dim,
            hamiltonian,
            measured_index,
            relaxation,
        })
    }

    /// Standard two-level system measured in state |1>.
    pub fn two_level(params: TwoLevelParams, relaxation: Option<RelaxationParams>) -> Self {
        Self::new(build_hamiltonian(params), 0, relaxation)
            .expect("two-level Hamiltonian is Hermitian by construction")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMat {
        &self.hamiltonian
    }

    pub fn measured_index(&self) -> usize {
        self.measured_index
    }

    pub fn relaxation(&self) -> Option<RelaxationParams> {
        self.relaxation
    }

    /// Liouville-space index of |mm> for the measured state m.
    pub fn measured_liouville_index(&self) -> usize {
        self.measured_index * self.dim + self.measured_index
    }

    /// Largest rate/frequency scale of the model, used to size grids.
    pub fn rate_scale(&self) -> f64 {
        let h = linalg::max_abs(&self.hamiltonian);
        let r = self
            .relaxation
            .map(|r| r.w_d.max(r.w_p))
            .unwrap_or(0.0);
        h.max(r)
    }
}

/// A superoperator: dense complex matrix on the vectorized density matrices.
#[derive(Debug, Clone)]
pub struct SuperOp {
    matrix: CMat,
}

impl SuperOp {
    pub fn from_matrix(matrix: CMat) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "superoperator must be square");
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(linalg::identity(dim))
    }

    /// Liouville-space dimension d^2.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[[row, col]]
    }

    pub fn mul(&self, other: &SuperOp) -> SuperOp {
        Self::from_matrix(self.matrix.dot(&other.matrix))
    }

    pub fn add(&self, other: &SuperOp) -> SuperOp {
        Self::from_matrix(&self.matrix + &other.matrix)
    }

    pub fn scale(&self, factor: Complex64) -> SuperOp {
        Self::from_matrix(self.matrix.mapv(|z| z * factor))
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.diag().sum()
    }

    pub fn inverse(&self) -> Result<SuperOp> {
        Ok(Self::from_matrix(linalg::inv(&self.matrix)?))
    }

    pub fn max_abs_diff(&self, other: &SuperOp) -> f64 {
        linalg::max_abs_diff(&self.matrix, &other.matrix)
    }
}

/// H = eps (|1><1| - |2><2|) + v (|1><2| + |2><1|) as a 2x2 matrix.
pub fn build_hamiltonian(p: TwoLevelParams) -> CMat {
    let mut h = Array2::zeros((2, 2));
    h[[0, 0]] = c(p.epsilon);
    h[[0, 1]] = c(p.v);
    h[[1, 0]] = c(p.v);
    h[[1, 1]] = c(-p.epsilon);
    h
}

/// Commutator superoperator: <kk'|H_hat|jj'> = H_kj delta_{j'k'} - H_{j'k'} delta_{jk}.
///
/// Hermitian in Liouville space whenever H is Hermitian; its eigenvalues are
/// all pairwise differences of the eigenvalues of H.
pub fn commutator_superop(h: &CMat) -> Result<SuperOp> {
    let d = h.nrows();
    let dev = linalg::hermitian_deviation(h);
    if dev > HERMITICITY_TOL {
        return Err(ZenoError::NotHermitian {
            max_dev: dev,
            tol: HERMITICITY_TOL,
        });
    }
    let mut m = Array2::zeros((d * d, d * d));
    for k in 0..d {
        for kp in 0..d {
            for j in 0..d {
                for jp in 0..d {
                    let mut val = Complex64::default();
                    if jp == kp {
                        val += h[[k, j]];
                    }
                    if j == k {
                        val -= h[[jp, kp]];
                    }
                    m[[k * d + kp, j * d + jp]] = val;
                }
            }
        }
    }
    Ok(SuperOp::from_matrix(m))
}

/// Projectors onto and off the measured Liouville vector |mm>:
/// P_m = |mm><mm|, Q_m = 1 - P_m.
pub fn projector_superops(m: usize, d: usize) -> Result<(SuperOp, SuperOp)> {
    if m >= d {
        return Err(ZenoError::IndexOutOfRange { index: m, dim: d });
    }
    let n = d * d;
    let idx = m * d + m;
    let mut p = Array2::zeros((n, n));
    p[[idx, idx]] = c(1.0);
    let mut q = linalg::identity(n);
    q[[idx, idx]] = Complex64::default();
    Ok((SuperOp::from_matrix(p), SuperOp::from_matrix(q)))
}

/// Two-level relaxation superoperator
/// R = w_d (|11> - |22>)(<11| - <22|) + w_p (|12><12| + |21><21|).
pub fn relaxation_superop(r: RelaxationParams) -> SuperOp {
    let mut m = Array2::zeros((4, 4));
    m[[0, 0]] = c(r.w_d);
    m[[0, 3]] = c(-r.w_d);
    m[[3, 0]] = c(-r.w_d);
    m[[3, 3]] = c(r.w_d);
    m[[1, 1]] = c(r.w_p);
    m[[2, 2]] = c(r.w_p);
    SuperOp::from_matrix(m)
}

/// Full evolution generator L = i H_hat + R, so that rho(t) = exp(-L t) rho(0).
pub fn generator(model: &SystemModel) -> SuperOp {
    let h_hat = commutator_superop(model.hamiltonian())
        .expect("model Hamiltonian validated at construction");
    let i = Complex64::new(0.0, 1.0);
    let mut l = h_hat.scale(i);
    if let Some(r) = model.relaxation() {
        l = l.add(&relaxation_superop(r));
    }
    l
}

/// exp(-A t) for t >= 0 by scaling-and-squaring Pade-13; valid for non-normal A.
pub fn superop_exp(a: &SuperOp, t: f64) -> Result<SuperOp> {
    if !(t >= 0.0) {
        return Err(ZenoError::InvalidParameter {
            name: "t",
            reason: format!("propagation time must be >= 0, got {t}"),
        });
    }
    let scaled = a.matrix().mapv(|z| z * c(-t));
    Ok(SuperOp::from_matrix(linalg::matrix_exp(&scaled)))
}

/// Principal-branch A^beta via eigendecomposition, rejecting near-defective
/// inputs (eigenvector condition number above [`EIG_COND_LIMIT`]) and spectra
/// touching the branch cut.
pub fn superop_fractional_power(a: &SuperOp, beta: f64) -> Result<SuperOp> {
    Ok(SuperOp::from_matrix(linalg::fractional_power(
        a.matrix(),
        beta,
        EIG_COND_LIMIT,
    )?))
}

/// Survival probability of the measured state with no measurements:
/// <mm| exp(-L t) |mm>.
pub fn survival_no_measurement(model: &SystemModel, t: f64) -> Result<f64> {
    let l = generator(model);
    let u = superop_exp(&l, t)?;
    let idx = model.measured_liouville_index();
    Ok(u.element(idx, idx).re)
}

/// Dense tabulation of the no-measurement survival probability with cubic
/// interpolation. Solvers evaluate p1 millions of times; the table is built
/// once by stepping the propagator, exp(-L (t+h)) = exp(-L h) exp(-L t).
#[derive(Debug, Clone)]
pub struct SurvivalTable {
    step: f64,
    values: Vec<f64>,
}

impl SurvivalTable {
    /// Tabulate p1 on [0, horizon]. `step_hint` bounds the grid step; the
    /// default resolves the Rabi oscillation with ~500 points per period,
    /// keeping the cubic interpolation error below 1e-9.
    pub fn build(model: &SystemModel, horizon: f64, step_hint: Option<f64>) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(ZenoError::InvalidParameter {
                name: "horizon",
                reason: format!("need a positive finite horizon, got {horizon}"),
            });
        }
        let scale = model.rate_scale().max(1e-12);
        let step = step_hint
            .unwrap_or(std::f64::consts::PI / (500.0 * scale))
            .min(horizon / 8.0);
        let n = (horizon / step).ceil() as usize + 2;
        let l = generator(model);
        let u_step = superop_exp(&l, step)?;
        let idx = model.measured_liouville_index();
        let mut u = SuperOp::identity(l.dim());
        let mut values = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            values.push(u.element(idx, idx).re);
            u = u_step.mul(&u);
        }
        Ok(Self { step, values })
    }

    /// Centered 4-point Lagrange cubic; clamps to the tabulated range.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.values[0];
        }
        let v = &self.values;
        let x = t / self.step;
        // stencil [i-1, i, i+1, i+2] with the target between i and i+1
        let i = (x.floor() as usize).clamp(1, v.len() - 3);
        let u = x - i as f64; // in [0, 1) away from the ends
        let (p0, p1, p2, p3) = (v[i - 1], v[i], v[i + 1], v[i + 2]);
        let c0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        let c1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        let c2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        let c3 = (u + 1.0) * u * (u - 1.0) / 6.0;
        c0 * p0 + c1 * p1 + c2 * p2 + c3 * p3
    }

    pub fn horizon(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }
}

/// Long-time average of the no-measurement survival for a dynamic model:
/// p1_bar = sum_j |<psi_m|phi_j>|^4 over Hamiltonian eigenvectors phi_j.
pub fn stationary_overlap(model: &SystemModel) -> Result<f64> {
    if model.relaxation().is_some() {
        return Err(ZenoError::InvalidParameter {
            name: "model",
            reason: "stationary overlap is defined for dynamic (relaxation-free) models".into(),
        });
    }
    use ndarray_linalg::{Eigh, UPLO};
    let (_, vecs) = model
        .hamiltonian()
        .eigh(UPLO::Lower)
        .map_err(|e| ZenoError::Eigendecomposition(e.to_string()))?;
    let m = model.measured_index();
    let mut sum = 0.0;
    for j in 0..model.dim() {
        let overlap = vecs[[m, j]].norm_sqr();
        sum += overlap * overlap;
    }
    Ok(sum)
}
