//! Independent brute-force checks for the transformation pipeline.
//!
//! Nothing in this module calls into the Jacobi eigensolver or the
//! squeeze-rotate-squeeze chain; agreement between these routines and the
//! pipeline is evidence, not tautology. The eigenvalue route here is
//! Householder tridiagonalization followed by bisection on the Sturm count
//! of the shifted characteristic polynomial; the time-evolution routes are
//! fixed-step RK4 and a scaled-and-squared Taylor series.

use crate::dynamics::PhaseState;
use crate::linalg::SymMatrix;
use crate::pipeline::OscillatorNetwork;
use num_complex::Complex64;
use thiserror::Error;

/// Hard cap on RK4 steps.
pub const STEP_BUDGET: usize = 100_000_000;

/// Largest dimension accepted by [`charpoly_eigs`].
pub const CHARPOLY_MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("rk4 needs a finite step 0 < dt <= 1e-2, got {dt}")]
    InvalidStep { dt: f64 },
    #[error("rk4 needs finite t_max >= 0, got {t_max}")]
    InvalidDuration { t_max: f64 },
    #[error("integration would need {steps} steps, budget is {budget}")]
    StepBudget { steps: usize, budget: usize },
    #[error("integration diverged to non-finite values")]
    Diverged,
    #[error("characteristic-polynomial route is limited to n <= {max}, got {n}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("dynamics map has eigenvalue with real part {real_part:e}; the network is unstable")]
    ComplexLeakage { real_part: f64 },
    #[error("state has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Outcome of one verification check.
///
/// `passed` holds exactly when `max_error <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub check_name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub details: String,
}

impl OracleReport {
    pub fn evaluate(
        check_name: impl Into<String>,
        max_error: f64,
        tolerance: f64,
        details: impl Into<String>,
    ) -> Self {
        OracleReport {
            check_name: check_name.into(),
            max_error,
            tolerance,
            passed: max_error <= tolerance,
            details: details.into(),
        }
    }
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<32} max_error={:<12.3e} tol={:<9.1e} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check_name,
            self.max_error,
            self.tolerance,
            self.details
        )
    }
}

/// Time derivative of `(q, p)` under Hamilton's equations, built directly
/// from the network parameters: `qdot = diag(w) p`, `pdot = -H_Q q`.
fn hamilton_rhs(net: &OscillatorNetwork, x: &[f64], out: &mut [f64]) {
    let n = net.n();
    let w = net.diag_freq();
    let c = net.couplings();
    for i in 0..n {
        out[i] = w[i] * x[n + i];
    }
    let mut p0dot = -w[0] * x[0];
    for (k, &ck) in c.iter().enumerate() {
        p0dot -= ck * x[k + 1];
    }
    out[n] = p0dot;
    for (k, &ck) in c.iter().enumerate() {
        out[n + k + 1] = -(ck * x[0] + w[k + 1] * x[k + 1]);
    }
}

/// Fixed-step classical RK4 integration of Hamilton's equations.
///
/// Ground truth for the exact propagator: fourth-order accurate, no
/// knowledge of normal modes, works on unstable networks too.
pub fn rk4_hamilton(
    net: &OscillatorNetwork,
    x0: &PhaseState,
    t_max: f64,
    dt: f64,
) -> Result<PhaseState, OracleError> {
    if !dt.is_finite() || dt <= 0.0 || dt > 1e-2 {
        return Err(OracleError::InvalidStep { dt });
    }
    if !t_max.is_finite() || t_max < 0.0 {
        return Err(OracleError::InvalidDuration { t_max });
    }
    if x0.n() != net.n() {
        return Err(OracleError::DimensionMismatch {
            expected: net.n(),
            got: x0.n(),
        });
    }
    let full_steps = (t_max / dt + 1e-12).floor() as usize;
    if full_steps >= STEP_BUDGET {
        return Err(OracleError::StepBudget {
            steps: full_steps + 1,
            budget: STEP_BUDGET,
        });
    }
    let rem = t_max - full_steps as f64 * dt;

    let dim = 2 * net.n();
    let mut x = x0.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];

    let mut step = |x: &mut Vec<f64>, h: f64| {
        hamilton_rhs(net, x, &mut k1);
        for i in 0..dim {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        hamilton_rhs(net, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        hamilton_rhs(net, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = x[i] + h * k3[i];
        }
        hamilton_rhs(net, &tmp, &mut k4);
        for i in 0..dim {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    };

    for _ in 0..full_steps {
        step(&mut x, dt);
    }
    if rem > 1e-12 * dt {
        step(&mut x, rem);
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(OracleError::Diverged);
    }
    PhaseState::from_vec(&x).map_err(|_| OracleError::Diverged)
}

// ── complex dense helpers for the series exponential ────────────────

struct CMat {
    n: usize,
    data: Vec<Complex64>,
}

impl CMat {
    fn zeros(n: usize) -> Self {
        CMat {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    fn mul(&self, rhs: &CMat) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    fn row_sum_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let mut acc = 0.0;
            for j in 0..self.n {
                acc += self.get(i, j).norm();
            }
            worst = worst.max(acc);
        }
        worst
    }
}

/// Apply `exp(i h t)` to a complex vector by scaling-and-squaring on the
/// Taylor series.
///
/// The scale `s` is chosen so the scaled matrix has infinity norm at most
/// 0.5; the series is truncated once a term falls below `1e-18` of the
/// running sum.
pub fn matexp_series(h: &SymMatrix, t: f64, c0: &[Complex64]) -> Vec<Complex64> {
    let n = h.n();
    assert_eq!(n, c0.len(), "vector length must match dimension");

    let mut m = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.data[i * n + j] = Complex64::new(0.0, t * h.get(i, j));
        }
    }
    let mut s = 0u32;
    let norm = m.row_sum_norm();
    if norm > 0.5 {
        s = (norm / 0.5).log2().ceil() as u32;
    }
    let scale = 0.5f64.powi(s as i32);
    for z in m.data.iter_mut() {
        *z *= scale;
    }

    let mut acc = CMat::identity(n);
    let mut term = CMat::identity(n);
    for k in 1..200 {
        term = term.mul(&m);
        let inv_k = Complex64::new(1.0 / k as f64, 0.0);
        for z in term.data.iter_mut() {
            *z *= inv_k;
        }
        for (a, b) in acc.data.iter_mut().zip(term.data.iter()) {
            *a += *b;
        }
        if term.max_abs() < 1e-18 * acc.max_abs() {
            break;
        }
    }
    for _ in 0..s {
        acc = acc.mul(&acc);
    }

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut v = Complex64::new(0.0, 0.0);
        for j in 0..n {
            v += acc.get(i, j) * c0[j];
        }
        out[i] = v;
    }
    out
}

// ── bisection eigenvalues ────────────────────────────────────────────

/// Householder reduction of a symmetric matrix to tridiagonal form;
/// returns (diagonal, subdiagonal).
fn tridiagonalize(a: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.n();
    let mut m = a.to_mat();
    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let mut x = vec![0.0; len];
        for r in 0..len {
            x[r] = m.get(k + 1 + r, k);
        }
        let sigma = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if sigma == 0.0 {
            continue;
        }
        let alpha = if x[0] >= 0.0 { -sigma } else { sigma };
        let mut v = x;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|w| w * w).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // Two-sided update of the trailing block: A <- A - v w^T - w v^T
        // with w = beta A v - (beta^2/2)(v^T A v) v.
        let mut w = vec![0.0; len];
        for i in 0..len {
            let mut acc = 0.0;
            for j in 0..len {
                acc += m.get(k + 1 + i, k + 1 + j) * v[j];
            }
            w[i] = beta * acc;
        }
        let vw: f64 = v.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
        let kappa = 0.5 * beta * vw;
        for i in 0..len {
            w[i] -= kappa * v[i];
        }
        for i in 0..len {
            for j in 0..len {
                let val =
                    m.get(k + 1 + i, k + 1 + j) - v[i] * w[j] - w[i] * v[j];
                m.set(k + 1 + i, k + 1 + j, val);
            }
        }
        m.set(k + 1, k, alpha);
        m.set(k, k + 1, alpha);
        for r in 2..=len {
            m.set(k + r, k, 0.0);
            m.set(k, k + r, 0.0);
        }
    }
    let d: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    let e: Vec<f64> = (0..n - 1).map(|i| m.get(i + 1, i)).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `sigma`,
/// via the sign changes of the Sturm sequence of leading principal minors
/// of `T - sigma I`.
fn sturm_count(d: &[f64], e: &[f64], sigma: f64) -> usize {
    let mut count = 0usize;
    let mut q = d[0] - sigma;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let denom = if q == 0.0 { 1e-300 } else { q };
        q = d[i] - sigma - e[i - 1] * e[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of a symmetric matrix, ascending, by bisection.
fn sym_eigs_bisect(a: &SymMatrix) -> Vec<f64> {
    let n = a.n();
    if n == 1 {
        return vec![a.get(0, 0)];
    }
    let (d, e) = tridiagonalize(a);
    // Gershgorin interval of the tridiagonal.
    let mut glo = f64::INFINITY;
    let mut ghi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        if i > 0 {
            r += e[i - 1].abs();
        }
        if i < n - 1 {
            r += e[i].abs();
        }
        glo = glo.min(d[i] - r);
        ghi = ghi.max(d[i] + r);
    }
    let scale = glo.abs().max(ghi.abs()).max(1e-300);
    glo -= 1e-12 * scale;
    ghi += 1e-12 * scale;

    let mut eigs = Vec::with_capacity(n);
    for k in 0..n {
        let mut lo = glo;
        let mut hi = ghi;
        for _ in 0..160 {
            let mid = 0.5 * (lo + hi);
            if sturm_count(&d, &e, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * scale + 1e-13 * mid.abs() {
                break;
            }
        }
        eigs.push(0.5 * (lo + hi));
    }
    eigs
}

/// Eigenvalues of a small symmetric matrix (`n <= 4`) by bisection on the
/// characteristic polynomial with Gershgorin bracketing. Returned in
/// descending order.
pub fn charpoly_eigs(a: &SymMatrix) -> Result<Vec<f64>, OracleError> {
    if a.n() > CHARPOLY_MAX_DIM {
        return Err(OracleError::DimensionTooLarge {
            n: a.n(),
            max: CHARPOLY_MAX_DIM,
        });
    }
    let mut eigs = sym_eigs_bisect(a);
    eigs.reverse();
    Ok(eigs)
}

/// Normal-mode frequencies straight from the linear dynamics map, bypassing
/// the transformation chain.
///
/// The map `xdot = [[0, H_P], [-H_Q, 0]] x` has eigenvalues `±i Omega_k`
/// with `Omega_k^2` the eigenvalues of the symmetric matrix
/// `H_P^(1/2) H_Q H_P^(1/2)`. Errors with [`OracleError::ComplexLeakage`]
/// when an eigenvalue of that matrix is negative enough to give the map a
/// real part above `1e-8`, which signals an instability the pipeline should
/// have rejected. Frequencies are returned descending.
pub fn dynamics_spectrum(net: &OscillatorNetwork) -> Result<Vec<f64>, OracleError> {
    let n = net.n();
    let w = net.diag_freq();
    let diag: Vec<f64> = (0..n).map(|i| w[i] * w[i]).collect();
    let border: Vec<f64> = net
        .couplings()
        .iter()
        .enumerate()
        .map(|(k, &c)| c * (w[0] * w[k + 1]).sqrt())
        .collect();
    let b = SymMatrix::arrowhead(&diag, &border)
        .expect("network invariants guarantee a valid arrowhead");
    let eigs = sym_eigs_bisect(&b);
    if eigs[0] < -1e-16 {
        return Err(OracleError::ComplexLeakage {
            real_part: (-eigs[0]).sqrt(),
        });
    }
    let mut omegas: Vec<f64> = eigs.iter().map(|&v| v.max(0.0).sqrt()).collect();
    omegas.reverse();
    Ok(omegas)
}
