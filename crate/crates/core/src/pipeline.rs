//! The squeeze-rotate-squeeze transformation chain for a star-coupled
//! oscillator network.
//!
//! Conventions: the Hamiltonian is
//! `H = (1/2) sum_i w_ii (p_i^2 + q_i^2) + sum_{i>=2} w_1i q_1 q_i`
//! in dimensionless units (hbar = 1). Stored
//! matrix blocks follow the same layout, so `H = x^T * (1/2) blockdiag(H_Q,
//! H_P) * x` with `x = (q_1..q_n, p_1..p_n)`. Couplings of either sign are
//! accepted; the physical setups this models have `w_1i <= 0`.
//!
//! Products of frequencies (`G`, squeeze diagonals) are assembled in log
//! space so that networks with frequencies far from 1 do not overflow
//! intermediate products.

use crate::linalg::{
    jacobi_eigen, EigenResult, LinalgError, Mat, OrthoMatrix, SymMatrix,
};
use thiserror::Error;

/// Errors from network construction and the transformation stages.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("a network needs at least 2 oscillators, got {0}")]
    TooFewOscillators(usize),
    #[error("oscillator {index} has non-positive or non-finite frequency")]
    BadFrequency { index: usize },
    #[error("coupling {index} is not finite")]
    BadCoupling { index: usize },
    #[error("expected {expected} couplings for {n} oscillators, got {got}")]
    CouplingCount {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("frequency product overflows f64 range; rescale the frequencies")]
    Overflow,
    #[error("unstable normal mode(s) {modes:?}: eigenvalue(s) at or below zero")]
    UnstableMode { modes: Vec<usize> },
    #[error("spring-mass parameter {name} must be positive")]
    NonPositiveParameter { name: &'static str },
    #[error(transparent)]
    Eigen(#[from] LinalgError),
}

/// Star-coupled network: oscillator 1 couples to each of the others.
///
/// `diag_freq[i]` is the angular frequency `w_ii > 0`; `couplings[k]` is
/// `w_1j` for `j = k + 2` (1-based oscillator numbering).
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorNetwork {
    diag_freq: Vec<f64>,
    couplings: Vec<f64>,
}

impl OscillatorNetwork {
    pub fn new(diag_freq: Vec<f64>, couplings: Vec<f64>) -> Result<Self, PipelineError> {
        let n = diag_freq.len();
        if n < 2 {
            return Err(PipelineError::TooFewOscillators(n));
        }
        for (i, &w) in diag_freq.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(PipelineError::BadFrequency { index: i + 1 });
            }
        }
        if couplings.len() != n - 1 {
            return Err(PipelineError::CouplingCount {
                n,
                expected: n - 1,
                got: couplings.len(),
            });
        }
        for (i, &c) in couplings.iter().enumerate() {
            if !c.is_finite() {
                return Err(PipelineError::BadCoupling { index: i + 2 });
            }
        }
        Ok(OscillatorNetwork {
            diag_freq,
            couplings,
        })
    }

    pub fn n(&self) -> usize {
        self.diag_freq.len()
    }

    pub fn diag_freq(&self) -> &[f64] {
        &self.diag_freq
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }
}

/// The quadratic-form blocks of the Hamiltonian: `h_q` is the arrowhead
/// coupling matrix, `h_p` the diagonal of the momentum block.
#[derive(Debug, Clone)]
pub struct HamiltonianBlocks {
    pub h_q: SymMatrix,
    pub h_p: Vec<f64>,
}

/// Assemble the position/momentum blocks of the network Hamiltonian.
pub fn build_hamiltonian(net: &OscillatorNetwork) -> HamiltonianBlocks {
    let h_q = SymMatrix::arrowhead(net.diag_freq(), net.couplings())
        .expect("network invariants guarantee a valid arrowhead");
    HamiltonianBlocks {
        h_q,
        h_p: net.diag_freq().to_vec(),
    }
}

/// First stage: one squeezing per oscillator.
///
/// `m_s` is the diagonal of the position-block scale (the momentum block is
/// its elementwise inverse), `big_g` the resulting uniform momentum
/// coefficient, `g_mat` the squeezed coupling matrix.
#[derive(Debug, Clone)]
pub struct SqueezeStage {
    pub m_s: Vec<f64>,
    pub big_g: f64,
    pub g_mat: SymMatrix,
}

/// Squeeze each `(q_i, p_i)` plane so the momentum block becomes `G * I`.
///
/// `m_s[i] = w_ii^(-1/2) * prod_k w_kk^(1/4)`, `G = prod_k sqrt(w_kk)`, and
/// `g_ij = w_ij * sqrt(w_ii w_jj) / G`.
pub fn squeeze_stage(net: &OscillatorNetwork) -> Result<SqueezeStage, PipelineError> {
    let n = net.n();
    let log_w: Vec<f64> = net.diag_freq().iter().map(|w| w.ln()).collect();
    let log_sum: f64 = log_w.iter().sum();
    let log_g = 0.5 * log_sum;

    let big_g = log_g.exp();
    if !big_g.is_finite() || big_g == 0.0 {
        return Err(PipelineError::Overflow);
    }
    let mut m_s = Vec::with_capacity(n);
    for lw in &log_w {
        let v = (0.25 * log_sum - 0.5 * lw).exp();
        if !v.is_finite() || v == 0.0 {
            return Err(PipelineError::Overflow);
        }
        m_s.push(v);
    }
    let mut diag = Vec::with_capacity(n);
    for lw in &log_w {
        let v = (2.0 * lw - log_g).exp();
        if !v.is_finite() {
            return Err(PipelineError::Overflow);
        }
        diag.push(v);
    }
    let mut border = Vec::with_capacity(n - 1);
    for (k, &c) in net.couplings().iter().enumerate() {
        let scale = (0.5 * (log_w[0] + log_w[k + 1]) - log_g).exp();
        let v = c * scale;
        if !v.is_finite() {
            return Err(PipelineError::Overflow);
        }
        border.push(v);
    }
    let g_mat = SymMatrix::arrowhead(&diag, &border)?;
    Ok(SqueezeStage { m_s, big_g, g_mat })
}

/// Second stage: diagonalize the squeezed coupling matrix.
pub fn rotate_stage(g_mat: &SymMatrix) -> Result<EigenResult, PipelineError> {
    Ok(jacobi_eigen(g_mat)?)
}

/// Third stage: one squeezing per normal mode.
#[derive(Debug, Clone)]
pub struct FinalSqueezeStage {
    pub m_t: Vec<f64>,
    pub omegas: Vec<f64>,
}

/// Relative eigenvalue threshold below which a mode counts as unstable.
pub const STABILITY_REL_TOL: f64 = 1e-12;

/// Rescale each normal mode so position and momentum coefficients agree,
/// yielding the mode frequencies `Omega_i = sqrt(G * lambda_i)`.
///
/// Errors with [`PipelineError::UnstableMode`] (1-based mode indices, in the
/// descending-eigenvalue ordering) when any `lambda_i <= 1e-12 * max|lambda|`:
/// such a mode has zero or imaginary frequency and the quartic-root squeeze
/// is undefined.
pub fn final_squeeze_stage(
    lambdas: &[f64],
    big_g: f64,
) -> Result<FinalSqueezeStage, PipelineError> {
    let max_abs = lambdas.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let bad: Vec<usize> = lambdas
        .iter()
        .enumerate()
        .filter(|(_, &l)| l <= STABILITY_REL_TOL * max_abs)
        .map(|(i, _)| i + 1)
        .collect();
    if !bad.is_empty() {
        return Err(PipelineError::UnstableMode { modes: bad });
    }
    let log_g = big_g.ln();
    let mut m_t = Vec::with_capacity(lambdas.len());
    let mut omegas = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let log_l = l.ln();
        let t = (0.25 * (log_l - log_g)).exp();
        let omega = (0.5 * (log_l + log_g)).exp();
        if !t.is_finite() || t == 0.0 || !omega.is_finite() {
            return Err(PipelineError::Overflow);
        }
        m_t.push(t);
        omegas.push(omega);
    }
    Ok(FinalSqueezeStage { m_t, omegas })
}

/// Full output of the transformation chain.
///
/// `z` is the total symplectic map: block-diagonal with position block
/// `diag(m_t) * m_r * diag(m_s)` and momentum block
/// `diag(m_t)^-1 * m_r * diag(m_s)^-1`. Applying `z` to a phase-space point
/// takes original coordinates to normal-mode coordinates.
#[derive(Debug, Clone)]
pub struct NormalModeDecomposition {
    pub m_s: Vec<f64>,
    pub big_g: f64,
    pub g_mat: SymMatrix,
    pub m_r: OrthoMatrix,
    pub lambdas: Vec<f64>,
    pub m_t: Vec<f64>,
    pub omegas: Vec<f64>,
    pub z: Mat,
}

impl NormalModeDecomposition {
    pub fn n(&self) -> usize {
        self.omegas.len()
    }

    /// Entrywise residual of `Z J Z^T = J`.
    pub fn symplectic_residual(&self) -> f64 {
        crate::linalg::symplectic_residual(&self.z)
    }
}

/// Run the three stages and assemble the total map `Z`.
pub fn decompose(net: &OscillatorNetwork) -> Result<NormalModeDecomposition, PipelineError> {
    let n = net.n();
    let squeeze = squeeze_stage(net)?;
    let eigen = rotate_stage(&squeeze.g_mat)?;
    let last = final_squeeze_stage(&eigen.lambdas, squeeze.big_g)?;

    let mut z = Mat::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let r = eigen.basis.get(i, j);
            z.set(i, j, last.m_t[i] * r * squeeze.m_s[j]);
            z.set(n + i, n + j, r / (last.m_t[i] * squeeze.m_s[j]));
        }
    }

    Ok(NormalModeDecomposition {
        m_s: squeeze.m_s,
        big_g: squeeze.big_g,
        g_mat: squeeze.g_mat,
        m_r: eigen.basis,
        lambdas: eigen.lambdas,
        m_t: last.m_t,
        omegas: last.omegas,
        z,
    })
}

/// Closed-form quantities for the two-oscillator system.
///
/// Field names follow the sequence squeeze (`alpha`, `omega_bar`,
/// `omega1_cap`, `omega2_cap`), rotation (`cos_phi`, `sin_phi`,
/// `omega_plus`, `omega_minus`) and final squeeze (`alpha_plus`,
/// `alpha_minus`, `cap_omega_plus`, `cap_omega_minus`), with
/// `cap_omega_pm = sqrt(omega_bar * omega_pm)` the normal-mode frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoOscDiagnostics {
    pub alpha: f64,
    pub omega_bar: f64,
    pub omega1_cap: f64,
    pub omega2_cap: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub cap_omega_plus: f64,
    pub cap_omega_minus: f64,
}

/// Evaluate every stage of the two-oscillator chain in closed form.
///
/// Errors with [`PipelineError::UnstableMode`] when `w1 w2 < g^2`, the
/// regime where the minus-mode frequency turns imaginary.
pub fn two_osc_closed_form(
    omega1: f64,
    omega2: f64,
    g: f64,
) -> Result<TwoOscDiagnostics, PipelineError> {
    if !omega1.is_finite() || omega1 <= 0.0 {
        return Err(PipelineError::BadFrequency { index: 1 });
    }
    if !omega2.is_finite() || omega2 <= 0.0 {
        return Err(PipelineError::BadFrequency { index: 2 });
    }
    if !g.is_finite() {
        return Err(PipelineError::BadCoupling { index: 2 });
    }
    if omega1 * omega2 < g * g {
        return Err(PipelineError::UnstableMode { modes: vec![2] });
    }

    let alpha = (omega2 / omega1).powf(0.25);
    let omega_bar = (omega1 * omega2).sqrt();
    let omega1_cap = (omega1.powi(3) / omega2).sqrt();
    let omega2_cap = (omega2.powi(3) / omega1).sqrt();

    let gap = omega1_cap - omega2_cap;
    let disc = (gap * gap + 4.0 * g * g).sqrt();
    // Degenerate case gap = g = 0: any angle diagonalizes; take ratio -> 0.
    let ratio = if disc == 0.0 { 0.0 } else { gap / disc };
    let cos_phi = (0.5 * (1.0 + ratio)).sqrt();
    // sin < 0 diagonalizes the rotated block only when the coupling is
    // attractive (g <= 0, the physical regime); the sign flips with g.
    let sin_phi = if g > 0.0 {
        (0.5 * (1.0 - ratio)).sqrt()
    } else {
        -(0.5 * (1.0 - ratio)).sqrt()
    };

    let omega_plus = 0.5 * ((omega1_cap + omega2_cap) + disc);
    // omega_plus * omega_minus = w1 w2 - g^2.
    let omega_minus = (omega1 * omega2 - g * g) / omega_plus;

    let alpha_plus = (omega_plus / omega_bar).powf(0.25);
    let alpha_minus = (omega_minus / omega_bar).powf(0.25);
    let cap_omega_plus = (omega_bar * omega_plus).sqrt();
    let cap_omega_minus = (omega_bar * omega_minus).sqrt();

    Ok(TwoOscDiagnostics {
        alpha,
        omega_bar,
        omega1_cap,
        omega2_cap,
        cos_phi,
        sin_phi,
        omega_plus,
        omega_minus,
        alpha_plus,
        alpha_minus,
        cap_omega_plus,
        cap_omega_minus,
    })
}

/// Two masses on springs, coupled by a third spring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpringMassPair {
    pub m1: f64,
    pub m2: f64,
    pub k1: f64,
    pub k2: f64,
    pub k: f64,
}

impl SpringMassPair {
    pub fn new(m1: f64, k1: f64, m2: f64, k2: f64, k: f64) -> Result<Self, PipelineError> {
        let positive = [
            ("m1", m1),
            ("k1", k1),
            ("m2", m2),
            ("k2", k2),
        ];
        for (name, v) in positive {
            if !v.is_finite() || v <= 0.0 {
                return Err(PipelineError::NonPositiveParameter { name });
            }
        }
        if !k.is_finite() || k < 0.0 {
            return Err(PipelineError::NonPositiveParameter { name: "k" });
        }
        Ok(SpringMassPair { m1, m2, k1, k2, k })
    }
}

/// Convert spring-mass parameters to scaled oscillator parameters
/// `(w1, w2, g)`.
///
/// `w_i = sqrt((k_i + k) / m_i)` and `g = -k / (a_1 a_2)` with
/// `a_i = (m_i (k_i + k))^(1/4)`. The result always satisfies
/// `w1 w2 >= g^2`, since that is `(k1 + k)(k2 + k) >= k^2`.
pub fn from_spring_mass(pair: &SpringMassPair) -> (f64, f64, f64) {
    let w1 = ((pair.k1 + pair.k) / pair.m1).sqrt();
    let w2 = ((pair.k2 + pair.k) / pair.m2).sqrt();
    let a1 = (pair.m1 * (pair.k1 + pair.k)).powf(0.25);
    let a2 = (pair.m2 * (pair.k2 + pair.k)).powf(0.25);
    let g = -pair.k / (a1 * a2);
    (w1, w2, g)
}
