//! Quantum single-excitation dynamics against the series matrix
//! exponential, plus the classical-quantum spectral bridge.
#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use num_complex::Complex64;
use symplecta_core::oracle::matexp_series;
use symplecta_core::pipeline::squeeze_stage;
use symplecta_core::quantum::{
    evolve_single_excitation, evolve_with, excitation_number, quantum_normal_modes,
    survival_probability, QuantumNetwork, SingleExcitationState,
};

fn max_amp_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn evolution_matches_series_exponential() {
    let mut rng = rng(42);
    let mut worst = 0.0f64;
    for case in 0..20 {
        let n = 2 + case % 7; // 2..=8
        let qnet = random_quantum_net(&mut rng, n);
        let h = qnet.coupling_matrix();
        for _ in 0..3 {
            let c0 = SingleExcitationState::new(random_amplitudes(&mut rng, n)).unwrap();
            for &t in &[0.1, 1.0, 10.0, 100.0] {
                let fast = evolve_single_excitation(&qnet, &c0, t).unwrap();
                let slow = matexp_series(&h, t, c0.amps());
                worst = worst.max(max_amp_diff(fast.amps(), &slow));
            }
        }
    }
    assert!(worst <= 1e-9, "worst amplitude gap {worst:e}");
}

#[test]
fn evolution_is_unitary() {
    let mut rng = rng(43);
    for case in 0..30 {
        let n = 2 + case % 7;
        let qnet = random_quantum_net(&mut rng, n);
        let modes = quantum_normal_modes(&qnet).unwrap();
        let c0 = SingleExcitationState::new(random_amplitudes(&mut rng, n)).unwrap();
        let t = rand::Rng::gen_range(&mut rng, 0.0..200.0);
        let ct = evolve_with(&modes, &c0, t).unwrap();
        assert!((excitation_number(&ct) - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn basis_change_is_orthogonal() {
    let mut rng = rng(44);
    for case in 0..20 {
        let n = 2 + case % 7;
        let qnet = random_quantum_net(&mut rng, n);
        let modes = quantum_normal_modes(&qnet).unwrap();
        assert!(modes.m_r.as_mat().orthogonality_residual() <= 1e-12);
    }
}

/// When the quantum frequencies and couplings equal the squeezed classical
/// coupling matrix entries, both problems conjugate the same matrix, so the
/// spectra agree to rounding.
#[test]
fn classical_quantum_spectral_consistency() {
    let mut rng = rng(45);
    for case in 0..20 {
        let n = 2 + case % 7;
        let net = random_stable_net(&mut rng, n);
        let squeezed = squeeze_stage(&net).unwrap();
        let diag: Vec<f64> = (0..n).map(|i| squeezed.g_mat.get(i, i)).collect();
        let border: Vec<f64> = (1..n).map(|j| squeezed.g_mat.get(0, j)).collect();
        let qnet = QuantumNetwork::new(diag, border).unwrap();
        let modes = quantum_normal_modes(&qnet).unwrap();
        let classical = symplecta_core::pipeline::rotate_stage(&squeezed.g_mat).unwrap();
        let gap = max_abs_diff(&modes.lambdas, &classical.lambdas);
        assert!(gap <= 1e-12, "spectral gap {gap:e}");
    }
}

/// Expected energy in normal-mode amplitudes is a constant of motion.
#[test]
fn energy_expectation_is_conserved() {
    let mut rng = rng(46);
    for case in 0..20 {
        let n = 2 + case % 7;
        let qnet = random_quantum_net(&mut rng, n);
        let modes = quantum_normal_modes(&qnet).unwrap();
        let c0 = SingleExcitationState::new(random_amplitudes(&mut rng, n)).unwrap();
        let expectation = |c: &SingleExcitationState| -> f64 {
            let mut rotated = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                for j in 0..n {
                    rotated[i] += modes.m_r.get(i, j) * c.amps()[j];
                }
            }
            rotated
                .iter()
                .zip(modes.lambdas.iter())
                .map(|(z, &l)| l * z.norm_sqr())
                .sum()
        };
        let e0 = expectation(&c0);
        for &t in &[0.7, 13.0, 90.0] {
            let ct = evolve_with(&modes, &c0, t).unwrap();
            let e = expectation(&ct);
            assert!(
                (e - e0).abs() <= 1e-10 * e0.abs().max(1.0),
                "energy expectation drift {:e}",
                (e - e0).abs()
            );
        }
    }
}

#[test]
fn survival_probability_closed_form_symmetric_pair() {
    let g = -0.17f64;
    let qnet = QuantumNetwork::new(vec![1.4, 1.4], vec![g]).unwrap();
    let mut t = 0.0;
    while t <= 60.0 {
        let p = survival_probability(&qnet, 0, t).unwrap();
        let expect = (g.abs() * t).cos().powi(2);
        assert!((p - expect).abs() <= 1e-9);
        t += 0.37;
    }
}
