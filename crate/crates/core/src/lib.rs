//! Exact normal-mode analysis of a harmonic oscillator linearly coupled to
//! `N-1` others (star topology), in both the classical and quantum regimes.
//!
//! The central object is a squeeze-rotate-squeeze chain of canonical
//! transformations that diagonalizes the quadratic Hamiltonian:
//!
//! ```text
//! Z = blockdiag(M_T, M_T⁻¹) · blockdiag(M_R, M_R) · blockdiag(M_S, M_S⁻¹)
//! ```
//!
//! where `M_S` and `M_T` are diagonal squeezings and `M_R` is the orthogonal
//! matrix that diagonalizes the squeezed coupling matrix. In the transformed
//! coordinates every mode is a free oscillator, so time evolution is a block
//! rotation applied exactly at any `t`, with no integration error.
//!
//! Module map:
//!
//! - [`linalg`]: dense symmetric/orthogonal kernels (Jacobi eigensolver,
//!   Givens factorization of orthogonal matrices).
//! - [`pipeline`]: the transformation chain itself, the `N = 2` closed forms,
//!   and the spring-mass parameter conversion.
//! - [`dynamics`]: exact classical propagation, energy, and phase-space
//!   section curves.
//! - [`quantum`]: single-excitation dynamics of the RWA-coupled network.
//! - [`oracle`]: independent brute-force checks (RK4, series matrix
//!   exponential, bisection eigenvalues) that deliberately share no code with
//!   the pipeline.

// Index loops over matrix rows/columns are the dominant idiom here.
#![allow(clippy::needless_range_loop)]

pub mod dynamics;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod quantum;

pub use linalg::{
    givens_decompose, givens_reconstruct, jacobi_eigen, matexp_hermitian_diag, EigenResult,
    GivensRotation, GivensSequence, LinalgError, Mat, OrthoMatrix, SymMatrix,
};
pub use pipeline::{
    build_hamiltonian, decompose, from_spring_mass, two_osc_closed_form, NormalModeDecomposition,
    OscillatorNetwork, PipelineError, SpringMassPair,
};

pub use dynamics::{energy, evolve, evolve_trajectory, PhaseState};
pub use quantum::{evolve_single_excitation, QuantumNetwork, SingleExcitationState};
