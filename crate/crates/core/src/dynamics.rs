//! Exact classical time evolution and phase-space sections.
//!
//! In normal-mode coordinates every mode rotates rigidly in its own
//! `(q, p)` plane, so the propagator is a block rotation and the solution in
//! the original coordinates is `x(t) = Z^-1 Lambda(t) Z x(0)`. Trajectory
//! sampling evaluates this closed form independently at every sample time
//! rather than chaining steps, so there is no error accumulation and the
//! samples are embarrassingly parallel.

use crate::linalg::{Mat, SymMatrix};
use crate::pipeline::{
    build_hamiltonian, decompose, squeeze_stage, NormalModeDecomposition, OscillatorNetwork,
    PipelineError,
};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Hard cap on trajectory samples.
pub const SAMPLE_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("state has {got} coordinates, network expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("phase-space coordinates must be finite")]
    NonFinite,
    #[error("sampling needs finite t_max >= 0 and dt > 0")]
    InvalidSampling,
    #[error("trajectory would need {requested} samples, budget is {budget}")]
    SampleBudget { requested: usize, budget: usize },
    #[error("section sampling needs at least 8 points, got {got}")]
    TooFewSamples { got: usize },
    #[error("section energy must be positive and finite")]
    BadEnergy,
    #[error("plane axes must be distinct")]
    DegeneratePlane,
    #[error("axis {axis} out of range for {n} oscillators")]
    AxisOutOfRange { axis: Axis, n: usize },
    #[error("restricted form is not positive definite; no bounded section in this plane")]
    IndefiniteSection,
}

/// A classical phase-space point `(q_1..q_n, p_1..p_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    q: Vec<f64>,
    p: Vec<f64>,
}

impl PhaseState {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self, DynamicsError> {
        if q.len() != p.len() {
            return Err(DynamicsError::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        if q.iter().chain(p.iter()).any(|v| !v.is_finite()) {
            return Err(DynamicsError::NonFinite);
        }
        Ok(PhaseState { q, p })
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// Concatenated `(q, p)` vector of length `2n`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.q.clone();
        v.extend_from_slice(&self.p);
        v
    }

    pub fn from_vec(x: &[f64]) -> Result<Self, DynamicsError> {
        if !x.len().is_multiple_of(2) {
            return Err(DynamicsError::DimensionMismatch {
                expected: x.len() + 1,
                got: x.len(),
            });
        }
        let n = x.len() / 2;
        PhaseState::new(x[..n].to_vec(), x[n..].to_vec())
    }
}

/// Diagonal blocks of the normal-mode propagator at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorBlocks {
    pub t: f64,
    pub cos_diag: Vec<f64>,
    pub sin_diag: Vec<f64>,
}

impl PropagatorBlocks {
    /// Rotate normal-mode coordinates in place:
    /// `q_i <- c q_i + s p_i`, `p_i <- -s q_i + c p_i`.
    pub fn apply(&self, qbar: &mut [f64], pbar: &mut [f64]) {
        for i in 0..self.cos_diag.len() {
            let c = self.cos_diag[i];
            let s = self.sin_diag[i];
            let (qi, pi) = (qbar[i], pbar[i]);
            qbar[i] = c * qi + s * pi;
            pbar[i] = -s * qi + c * pi;
        }
    }

    /// The full `2n x 2n` block matrix `[[C, S], [-S, C]]`.
    pub fn to_matrix(&self) -> Mat {
        let n = self.cos_diag.len();
        let mut m = Mat::zeros(2 * n);
        for i in 0..n {
            m.set(i, i, self.cos_diag[i]);
            m.set(n + i, n + i, self.cos_diag[i]);
            m.set(i, n + i, self.sin_diag[i]);
            m.set(n + i, i, -self.sin_diag[i]);
        }
        m
    }
}

/// Propagator blocks `cos(Omega_i t)`, `sin(Omega_i t)`.
pub fn propagator(omegas: &[f64], t: f64) -> PropagatorBlocks {
    let mut cos_diag = Vec::with_capacity(omegas.len());
    let mut sin_diag = Vec::with_capacity(omegas.len());
    for &w in omegas {
        let (s, c) = (w * t).sin_cos();
        cos_diag.push(c);
        sin_diag.push(s);
    }
    PropagatorBlocks {
        t,
        cos_diag,
        sin_diag,
    }
}

/// Evolve a state by `t` using a precomputed decomposition.
pub fn evolve_with(
    dec: &NormalModeDecomposition,
    x0: &PhaseState,
    t: f64,
) -> Result<PhaseState, DynamicsError> {
    let n = dec.n();
    if x0.n() != n {
        return Err(DynamicsError::DimensionMismatch {
            expected: n,
            got: x0.n(),
        });
    }
    if t == 0.0 {
        return Ok(x0.clone());
    }
    // Forward through the chain: squeeze, rotate, squeeze.
    let mut qs: Vec<f64> = (0..n).map(|i| dec.m_s[i] * x0.q[i]).collect();
    let mut ps: Vec<f64> = (0..n).map(|i| x0.p[i] / dec.m_s[i]).collect();
    qs = dec.m_r.matvec(&qs);
    ps = dec.m_r.matvec(&ps);
    let mut qbar: Vec<f64> = (0..n).map(|i| dec.m_t[i] * qs[i]).collect();
    let mut pbar: Vec<f64> = (0..n).map(|i| ps[i] / dec.m_t[i]).collect();

    propagator(&dec.omegas, t).apply(&mut qbar, &mut pbar);

    // Back through the inverse chain.
    let qr: Vec<f64> = (0..n).map(|i| qbar[i] / dec.m_t[i]).collect();
    let pr: Vec<f64> = (0..n).map(|i| pbar[i] * dec.m_t[i]).collect();
    let qs = dec.m_r.matvec_t(&qr);
    let ps = dec.m_r.matvec_t(&pr);
    let q: Vec<f64> = (0..n).map(|i| qs[i] / dec.m_s[i]).collect();
    let p: Vec<f64> = (0..n).map(|i| ps[i] * dec.m_s[i]).collect();
    PhaseState::new(q, p)
}

/// Exact solution of Hamilton's equations at time `t`.
pub fn evolve(
    net: &OscillatorNetwork,
    x0: &PhaseState,
    t: f64,
) -> Result<PhaseState, DynamicsError> {
    let dec = decompose(net)?;
    evolve_with(&dec, x0, t)
}

/// Number of samples `0, dt, .., t_max` a sweep will produce, with the
/// grid fuzzed by `1e-9 dt` so `t_max` lands on its intended sample.
pub fn sample_count(t_max: f64, dt: f64) -> Result<usize, DynamicsError> {
    if !t_max.is_finite() || !dt.is_finite() || t_max < 0.0 || dt <= 0.0 {
        return Err(DynamicsError::InvalidSampling);
    }
    let count = (t_max / dt + 1e-9).floor() as usize + 1;
    if count > SAMPLE_BUDGET {
        return Err(DynamicsError::SampleBudget {
            requested: count,
            budget: SAMPLE_BUDGET,
        });
    }
    Ok(count)
}

/// Sample the exact solution at `0, dt, 2 dt, ..` up to `t_max`.
///
/// Each sample is evolved directly from `x0`, never from the previous
/// sample. With the `parallel` feature the samples are computed with rayon;
/// output order is by sample time either way.
pub fn evolve_trajectory(
    net: &OscillatorNetwork,
    x0: &PhaseState,
    t_max: f64,
    dt: f64,
) -> Result<Vec<PhaseState>, DynamicsError> {
    let count = sample_count(t_max, dt)?;
    let dec = decompose(net)?;
    if x0.n() != dec.n() {
        return Err(DynamicsError::DimensionMismatch {
            expected: dec.n(),
            got: x0.n(),
        });
    }
    #[cfg(feature = "parallel")]
    {
        (0..count)
            .into_par_iter()
            .map(|k| evolve_with(&dec, x0, k as f64 * dt))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count)
            .map(|k| evolve_with(&dec, x0, k as f64 * dt))
            .collect()
    }
}

/// Sequential reference path for [`evolve_trajectory`]; spends no threads
/// regardless of enabled features.
pub fn evolve_trajectory_serial(
    net: &OscillatorNetwork,
    x0: &PhaseState,
    t_max: f64,
    dt: f64,
) -> Result<Vec<PhaseState>, DynamicsError> {
    let count = sample_count(t_max, dt)?;
    let dec = decompose(net)?;
    if x0.n() != dec.n() {
        return Err(DynamicsError::DimensionMismatch {
            expected: dec.n(),
            got: x0.n(),
        });
    }
    (0..count)
        .map(|k| evolve_with(&dec, x0, k as f64 * dt))
        .collect()
}

/// Total energy `(1/2) sum w_ii (p_i^2 + q_i^2) + sum w_1i q_1 q_i`.
pub fn energy(net: &OscillatorNetwork, x: &PhaseState) -> f64 {
    assert_eq!(
        net.n(),
        x.n(),
        "state dimension must match the network"
    );
    let w = net.diag_freq();
    let mut e = 0.0;
    for i in 0..net.n() {
        e += 0.5 * w[i] * (x.p[i] * x.p[i] + x.q[i] * x.q[i]);
    }
    for (k, &c) in net.couplings().iter().enumerate() {
        e += c * x.q[0] * x.q[k + 1];
    }
    e
}

/// Pipeline stage whose coordinates a section curve is drawn in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Original,
    AfterS,
    AfterR,
    AfterT,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Original => "original",
            Stage::AfterS => "after_s",
            Stage::AfterR => "after_r",
            Stage::AfterT => "after_t",
        };
        f.write_str(s)
    }
}

/// One coordinate axis of the `2n`-dimensional phase space (zero-based
/// oscillator index). Displays with 1-based labels: `q1`, `p3`, ..
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Q(usize),
    P(usize),
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Q(i) => write!(f, "q{}", i + 1),
            Axis::P(i) => write!(f, "p{}", i + 1),
        }
    }
}

/// Points on the intersection of a constant-energy level set with a
/// coordinate plane (all other coordinates zero), in the coordinates of the
/// chosen stage.
#[derive(Debug, Clone)]
pub struct SectionCurve {
    pub stage: Stage,
    pub plane: (Axis, Axis),
    pub energy: f64,
    pub points: Vec<[f64; 2]>,
}

/// Quadratic-form coefficients of one stage Hamiltonian, with the leading
/// 1/2 folded in so that `E(x) = x^T H x`.
enum StageForm {
    Original { h_q: SymMatrix, h_p: Vec<f64> },
    AfterS { g_mat: SymMatrix, big_g: f64 },
    AfterR { lambdas: Vec<f64>, big_g: f64 },
    AfterT { omegas: Vec<f64> },
}

impl StageForm {
    fn build(net: &OscillatorNetwork, stage: Stage) -> Result<Self, DynamicsError> {
        Ok(match stage {
            Stage::Original => {
                let blocks = build_hamiltonian(net);
                StageForm::Original {
                    h_q: blocks.h_q,
                    h_p: blocks.h_p,
                }
            }
            Stage::AfterS => {
                let s = squeeze_stage(net)?;
                StageForm::AfterS {
                    g_mat: s.g_mat,
                    big_g: s.big_g,
                }
            }
            Stage::AfterR => {
                let s = squeeze_stage(net)?;
                let eig = crate::pipeline::rotate_stage(&s.g_mat)?;
                StageForm::AfterR {
                    lambdas: eig.lambdas,
                    big_g: s.big_g,
                }
            }
            Stage::AfterT => {
                let dec = decompose(net)?;
                StageForm::AfterT { omegas: dec.omegas }
            }
        })
    }

    fn coeff(&self, a: Axis, b: Axis) -> f64 {
        let half = 0.5;
        match (a, b) {
            (Axis::Q(i), Axis::Q(j)) => match self {
                StageForm::Original { h_q, .. } => half * h_q.get(i, j),
                StageForm::AfterS { g_mat, .. } => half * g_mat.get(i, j),
                StageForm::AfterR { lambdas, .. } => {
                    if i == j {
                        half * lambdas[i]
                    } else {
                        0.0
                    }
                }
                StageForm::AfterT { omegas } => {
                    if i == j {
                        half * omegas[i]
                    } else {
                        0.0
                    }
                }
            },
            (Axis::P(i), Axis::P(j)) => match self {
                StageForm::Original { h_p, .. } => {
                    if i == j {
                        half * h_p[i]
                    } else {
                        0.0
                    }
                }
                StageForm::AfterS { big_g, .. } | StageForm::AfterR { big_g, .. } => {
                    if i == j {
                        half * big_g
                    } else {
                        0.0
                    }
                }
                StageForm::AfterT { omegas } => {
                    if i == j {
                        half * omegas[i]
                    } else {
                        0.0
                    }
                }
            },
            // Position and momentum never mix in any stage Hamiltonian.
            _ => 0.0,
        }
    }
}

/// Sample an elliptic section of the energy-`E` level set.
///
/// The emitted points satisfy `u^T A u = E` exactly up to rounding, with `A`
/// the restriction of the stage Hamiltonian form to the plane. Errors with
/// [`DynamicsError::IndefiniteSection`] when that restriction is not
/// positive definite.
pub fn section_curve(
    net: &OscillatorNetwork,
    stage: Stage,
    plane: (Axis, Axis),
    energy: f64,
    samples: usize,
) -> Result<SectionCurve, DynamicsError> {
    if samples < 8 {
        return Err(DynamicsError::TooFewSamples { got: samples });
    }
    if samples > SAMPLE_BUDGET {
        return Err(DynamicsError::SampleBudget {
            requested: samples,
            budget: SAMPLE_BUDGET,
        });
    }
    if !energy.is_finite() || energy <= 0.0 {
        return Err(DynamicsError::BadEnergy);
    }
    let n = net.n();
    for axis in [plane.0, plane.1] {
        let idx = match axis {
            Axis::Q(i) | Axis::P(i) => i,
        };
        if idx >= n {
            return Err(DynamicsError::AxisOutOfRange { axis, n });
        }
    }
    if plane.0 == plane.1 {
        return Err(DynamicsError::DegeneratePlane);
    }

    let form = StageForm::build(net, stage)?;
    let a = form.coeff(plane.0, plane.0);
    let b = form.coeff(plane.0, plane.1);
    let c = form.coeff(plane.1, plane.1);
    if !(a > 0.0 && a * c - b * b > 0.0) {
        return Err(DynamicsError::IndefiniteSection);
    }

    // Spectral decomposition of [[a, b], [b, c]].
    let (d1, d2, v1, v2) = if b == 0.0 {
        (a, c, [1.0, 0.0], [0.0, 1.0])
    } else {
        let half_tr = 0.5 * (a + c);
        let disc = (0.25 * (a - c) * (a - c) + b * b).sqrt();
        let d1 = half_tr + disc;
        let d2 = half_tr - disc;
        let v1 = if (d1 - a).abs() > (d1 - c).abs() {
            normalize2([b, d1 - a])
        } else {
            normalize2([d1 - c, b])
        };
        let v2 = [-v1[1], v1[0]];
        (d1, d2, v1, v2)
    };

    let r1 = (energy / d1).sqrt();
    let r2 = (energy / d2).sqrt();
    let mut points = Vec::with_capacity(samples);
    for k in 0..samples {
        let theta = std::f64::consts::TAU * k as f64 / samples as f64;
        let (s, co) = theta.sin_cos();
        let w = [r1 * co, r2 * s];
        points.push([
            v1[0] * w[0] + v2[0] * w[1],
            v1[1] * w[0] + v2[1] * w[1],
        ]);
    }
    Ok(SectionCurve {
        stage,
        plane,
        energy,
        points,
    })
}

fn normalize2(v: [f64; 2]) -> [f64; 2] {
    let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
    [v[0] / norm, v[1] / norm]
}
