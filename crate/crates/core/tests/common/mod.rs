//! Shared generators for the integration tests. Everything is seeded so
//! failures reproduce exactly.
//!
//! Each test binary includes this module separately, so not every helper is
//! used by every binary.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symplecta_core::linalg::{Mat, OrthoMatrix};
use symplecta_core::pipeline::OscillatorNetwork;
use symplecta_core::quantum::QuantumNetwork;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stable triple for the two-oscillator closed form: couplings capped at
/// 95% of the stability boundary.
pub fn random_stable_triple(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    let w1: f64 = rng.gen_range(0.3..3.0);
    let w2: f64 = rng.gen_range(0.3..3.0);
    let s: f64 = rng.gen_range(-0.95..0.95);
    let g = s * (w1 * w2).sqrt();
    (w1, w2, g)
}

/// Star network kept comfortably inside the stability region: the Schur
/// complement of the squeezed coupling matrix stays positive because
/// `sum_j w_1j^2 / (w_11 w_jj) <= 0.64 / (n-1) < 1`.
pub fn random_stable_net(rng: &mut ChaCha8Rng, n: usize) -> OscillatorNetwork {
    let freqs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.5)).collect();
    let couplings: Vec<f64> = (1..n)
        .map(|j| {
            let cap = 0.8 * (freqs[0] * freqs[j]).sqrt() / (n as f64 - 1.0);
            -rng.gen_range(0.0..cap)
        })
        .collect();
    OscillatorNetwork::new(freqs, couplings).unwrap()
}

pub fn random_quantum_net(rng: &mut ChaCha8Rng, n: usize) -> QuantumNetwork {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let couple: Vec<f64> = (1..n).map(|_| -rng.gen_range(0.0..0.3)).collect();
    QuantumNetwork::new(diag, couple).unwrap()
}

/// Random orthogonal matrix built by composing plane rotations, optionally
/// seeded with a reflection so both determinant signs occur.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize, reflect: bool) -> OrthoMatrix {
    let mut m = Mat::identity(n);
    if reflect {
        m.set(n - 1, n - 1, -1.0);
    }
    let rounds = n * (n - 1).max(1);
    for _ in 0..rounds {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        let alpha: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let (s, c) = alpha.sin_cos();
        for k in 0..n {
            let rik = m.get(i, k);
            let rjk = m.get(j, k);
            m.set(i, k, c * rik + s * rjk);
            m.set(j, k, -s * rik + c * rjk);
        }
    }
    OrthoMatrix::from_mat(m).expect("rotation products stay orthogonal")
}

pub fn random_coords(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Random normalized complex amplitude vector.
pub fn random_amplitudes(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|z| z / norm).collect();
        }
    }
}

pub fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
