//! Single-excitation dynamics of the RWA-coupled cavity network.
//!
//! With the rotating-wave coupling `g_1i (a_1† a_i + a_i† a_1)` the total
//! excitation number commutes with the Hamiltonian, so the span of the
//! one-excitation states `|1_i>` is closed under evolution and a state is
//! just an `n`-vector of complex amplitudes. Evolution follows the
//! `e^{+iHt}` sign convention acting on the amplitude column; the opposite
//! convention is this map's complex conjugate.
//!
//! Mode frequencies may come out negative here (they enter only as phases),
//! so unlike the classical pipeline there is no stability gate.

use crate::linalg::{jacobi_eigen, matexp_hermitian_diag, LinalgError, OrthoMatrix, SymMatrix};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("a network needs at least 1 mode")]
    NoModes,
    #[error("mode {index} has non-positive or non-finite frequency")]
    BadFrequency { index: usize },
    #[error("coupling {index} is not finite")]
    BadCoupling { index: usize },
    #[error("expected {expected} couplings for {n} modes, got {got}")]
    CouplingCount {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("amplitude vector has squared norm {norm}, expected 1 within 1e-12")]
    NotNormalized { norm: f64 },
    #[error("amplitudes must be finite")]
    NonFinite,
    #[error("state has {got} amplitudes, network expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("site {site} out of range 1..={n}")]
    BadSite { site: usize, n: usize },
    #[error(transparent)]
    Eigen(#[from] LinalgError),
}

/// Star-coupled bosonic modes under the rotating-wave approximation.
///
/// `g_diag[i]` is the mode frequency `g_ii > 0`; `g_couple[k]` is the
/// excitation-hopping amplitude `g_1j` for `j = k + 2` (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumNetwork {
    g_diag: Vec<f64>,
    g_couple: Vec<f64>,
}

impl QuantumNetwork {
    pub fn new(g_diag: Vec<f64>, g_couple: Vec<f64>) -> Result<Self, QuantumError> {
        let n = g_diag.len();
        if n == 0 {
            return Err(QuantumError::NoModes);
        }
        for (i, &g) in g_diag.iter().enumerate() {
            if !g.is_finite() || g <= 0.0 {
                return Err(QuantumError::BadFrequency { index: i + 1 });
            }
        }
        if g_couple.len() != n - 1 {
            return Err(QuantumError::CouplingCount {
                n,
                expected: n - 1,
                got: g_couple.len(),
            });
        }
        for (i, &c) in g_couple.iter().enumerate() {
            if !c.is_finite() {
                return Err(QuantumError::BadCoupling { index: i + 2 });
            }
        }
        Ok(QuantumNetwork { g_diag, g_couple })
    }

    pub fn n(&self) -> usize {
        self.g_diag.len()
    }

    pub fn g_diag(&self) -> &[f64] {
        &self.g_diag
    }

    pub fn g_couple(&self) -> &[f64] {
        &self.g_couple
    }

    /// The single-excitation Hamiltonian matrix (arrowhead).
    pub fn coupling_matrix(&self) -> SymMatrix {
        SymMatrix::arrowhead(&self.g_diag, &self.g_couple)
            .expect("network invariants guarantee a valid arrowhead")
    }
}

/// Complex amplitudes over the one-excitation basis, unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleExcitationState {
    amps: Vec<Complex64>,
}

impl SingleExcitationState {
    /// Requires `sum |c_i|^2 = 1` within `1e-12`; the zero vector (the bare
    /// vacuum) is not representable here.
    pub fn new(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        if amps.is_empty() {
            return Err(QuantumError::NoModes);
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(QuantumError::NotNormalized { norm });
        }
        Ok(SingleExcitationState { amps })
    }

    /// The basis state `|1_site>` (zero-based site index).
    pub fn basis(n: usize, site: usize) -> Result<Self, QuantumError> {
        if site >= n {
            return Err(QuantumError::BadSite { site: site + 1, n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[site] = Complex64::new(1.0, 0.0);
        Ok(SingleExcitationState { amps })
    }

    pub fn n(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }
}

/// Normal modes of the quantum network: frequencies and the orthogonal
/// basis change, `m_r * H * m_r^T = diag(lambdas)`.
#[derive(Debug, Clone)]
pub struct QuantumNormalModes {
    pub lambdas: Vec<f64>,
    pub m_r: OrthoMatrix,
}

/// Diagonalize the single-excitation Hamiltonian.
pub fn quantum_normal_modes(qnet: &QuantumNetwork) -> Result<QuantumNormalModes, QuantumError> {
    let eigen = jacobi_eigen(&qnet.coupling_matrix())?;
    Ok(QuantumNormalModes {
        lambdas: eigen.lambdas,
        m_r: eigen.basis,
    })
}

fn apply_real(m: &OrthoMatrix, transpose: bool, x: &[Complex64]) -> Vec<Complex64> {
    let n = m.n();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for j in 0..n {
            let coeff = if transpose { m.get(j, i) } else { m.get(i, j) };
            out[i] += coeff * x[j];
        }
    }
    out
}

/// Evolve amplitudes with a precomputed normal-mode decomposition:
/// `c(t) = m_r^T diag(e^{i lambda_k t}) m_r c(0)`.
pub fn evolve_with(
    modes: &QuantumNormalModes,
    c0: &SingleExcitationState,
    t: f64,
) -> Result<SingleExcitationState, QuantumError> {
    let n = modes.m_r.n();
    if c0.n() != n {
        return Err(QuantumError::DimensionMismatch {
            expected: n,
            got: c0.n(),
        });
    }
    if t == 0.0 {
        return Ok(c0.clone());
    }
    let mut c = apply_real(&modes.m_r, false, c0.amps());
    let phases = matexp_hermitian_diag(&modes.lambdas, t);
    for (z, ph) in c.iter_mut().zip(phases.iter()) {
        *z *= ph;
    }
    let c = apply_real(&modes.m_r, true, &c);
    SingleExcitationState::new(c)
}

/// Exact single-excitation evolution of the network.
pub fn evolve_single_excitation(
    qnet: &QuantumNetwork,
    c0: &SingleExcitationState,
    t: f64,
) -> Result<SingleExcitationState, QuantumError> {
    let modes = quantum_normal_modes(qnet)?;
    evolve_with(&modes, c0, t)
}

/// Total excitation number `sum |c_i|^2`; conserved by evolution and equal
/// in site and normal-mode amplitudes.
pub fn excitation_number(c: &SingleExcitationState) -> f64 {
    c.amps.iter().map(|z| z.norm_sqr()).sum()
}

/// Probability that an excitation starting at `site` (zero-based) is found
/// there again after time `t`.
pub fn survival_probability(
    qnet: &QuantumNetwork,
    site: usize,
    t: f64,
) -> Result<f64, QuantumError> {
    if site >= qnet.n() {
        return Err(QuantumError::BadSite {
            site: site + 1,
            n: qnet.n(),
        });
    }
    let c0 = SingleExcitationState::basis(qnet.n(), site)?;
    let ct = evolve_single_excitation(qnet, &c0, t)?;
    Ok(ct.amps()[site].norm_sqr())
}
