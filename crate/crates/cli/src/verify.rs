//! The `verify` subcommand: run the invariant suite for one config against
//! the independent oracles and print one report line per check.
#![allow(clippy::needless_range_loop)]

use crate::config::{load_config, LoadedConfig};
use crate::error::CliError;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use symplecta_core::dynamics::{
    energy, evolve_with, propagator, section_curve, Axis, PhaseState, Stage,
};
use symplecta_core::linalg::{
    givens_decompose, givens_reconstruct, symplectic_residual, Mat, OrthoMatrix, SymMatrix,
};
use symplecta_core::oracle::{
    charpoly_eigs, dynamics_spectrum, matexp_series, rk4_hamilton, OracleReport,
};
use symplecta_core::pipeline::{decompose, two_osc_closed_form, OscillatorNetwork};
use symplecta_core::quantum::{
    self, quantum_normal_modes, QuantumNetwork, SingleExcitationState,
};

pub struct VerifyOptions {
    pub seed: u64,
    /// Test hook: perturb the rotation matrix before the residual checks so
    /// the negative path of the suite is exercised.
    pub corrupt_basis: bool,
}

pub fn run_verify(config: &Path, opts: &VerifyOptions) -> Result<(), CliError> {
    let reports = match load_config(config)? {
        LoadedConfig::Classical(net) => classical_reports(&net, opts)?,
        LoadedConfig::Quantum(qnet) => quantum_reports(&qnet, opts)?,
    };
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut failed = 0usize;
    for report in &reports {
        // Ignore write failures (closed pipe): the exit code still reports.
        let _ = writeln!(out, "{report}");
        if !report.passed {
            failed += 1;
        }
    }
    let total = reports.len();
    let _ = writeln!(
        out,
        "verify: {}/{} checks passed (seed {})",
        total - failed,
        total,
        opts.seed
    );
    if failed > 0 {
        Err(CliError::ChecksFailed { failed, total })
    } else {
        Ok(())
    }
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> PhaseState {
    let q = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let p = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PhaseState::new(q, p).expect("finite by construction")
}

/// Fit the restricted quadratic form through three sampled points: solve
/// a u^2 + 2 b u v + c v^2 = E for (a, b, c).
fn fit_conic(points: &[[f64; 2]], e: f64) -> Option<(f64, f64, f64)> {
    if points.len() < 3 {
        return None;
    }
    let idx = [0, points.len() / 8, points.len() / 4];
    let rows: Vec<[f64; 3]> = idx
        .iter()
        .map(|&k| {
            let [u, v] = points[k];
            [u * u, 2.0 * u * v, v * v]
        })
        .collect();
    let det3 = |m: &[[f64; 3]; 3]| -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let m = [rows[0], rows[1], rows[2]];
    let d = det3(&m);
    if d.abs() < 1e-14 {
        return None;
    }
    let solve_col = |col: usize| -> f64 {
        let mut mm = m;
        for row in mm.iter_mut() {
            row[col] = e;
        }
        det3(&mm) / d
    };
    Some((solve_col(0), solve_col(1), solve_col(2)))
}

fn axis_ratio_minus_one(points: &[[f64; 2]]) -> f64 {
    let radii: Vec<f64> = points
        .iter()
        .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
        .collect();
    let rmax = radii.iter().cloned().fold(0.0, f64::max);
    let rmin = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    rmax / rmin - 1.0
}

/// Rebuild the total map from the stage diagonals and a (possibly
/// corrupted) rotation matrix.
fn assemble_z(m_s: &[f64], m_t: &[f64], m_r: &Mat) -> Mat {
    let n = m_r.n();
    let mut z = Mat::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            let r = m_r.get(i, j);
            z.set(i, j, m_t[i] * r * m_s[j]);
            z.set(n + i, n + j, r / (m_t[i] * m_s[j]));
        }
    }
    z
}

fn conjugation_residual(m_r: &Mat, a: &SymMatrix, lambdas: &[f64]) -> f64 {
    let conj = m_r.mul(a.as_mat()).mul(&m_r.transpose());
    let mut worst = 0.0f64;
    for i in 0..a.n() {
        for j in 0..a.n() {
            let target = if i == j { lambdas[i] } else { 0.0 };
            worst = worst.max((conj.get(i, j) - target).abs());
        }
    }
    worst / a.max_abs().max(f64::MIN_POSITIVE)
}

fn givens_roundtrip_report(m_r: &Mat) -> OracleReport {
    let name = "givens_roundtrip";
    match OrthoMatrix::from_mat(m_r.clone()) {
        Ok(ortho) => match givens_decompose(&ortho) {
            Ok(seq) => {
                let back = givens_reconstruct(&seq).expect("sequence from decompose is valid");
                let residual = back.as_mat().sub(m_r).max_abs();
                OracleReport::evaluate(
                    name,
                    residual,
                    1e-12,
                    format!("{} rotations", seq.rotations.len()),
                )
            }
            Err(e) => OracleReport::evaluate(name, f64::INFINITY, 1e-12, e.to_string()),
        },
        Err(e) => OracleReport::evaluate(name, f64::INFINITY, 1e-12, e.to_string()),
    }
}

fn classical_reports(
    net: &OscillatorNetwork,
    opts: &VerifyOptions,
) -> Result<Vec<OracleReport>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = net.n();
    let dec = decompose(net)?;
    let mut m_r = dec.m_r.to_mat();
    if opts.corrupt_basis {
        m_r.set(0, 0, m_r.get(0, 0) + 1e-3);
    }

    let mut reports = Vec::new();

    let z = assemble_z(&dec.m_s, &dec.m_t, &m_r);
    reports.push(OracleReport::evaluate(
        "symplectic_condition",
        symplectic_residual(&z),
        1e-10,
        "|Z J Z^T - J|",
    ));

    let oracle_omegas = dynamics_spectrum(net)
        .map_err(|e| CliError::input(format!("dynamics spectrum failed: {e}")))?;
    reports.push(OracleReport::evaluate(
        "spectrum_vs_dynamics_map",
        max_rel(&dec.omegas, &oracle_omegas),
        1e-9,
        "normal-mode frequencies, relative",
    ));

    if n == 2 {
        let d = two_osc_closed_form(net.diag_freq()[0], net.diag_freq()[1], net.couplings()[0])?;
        reports.push(OracleReport::evaluate(
            "closed_form_n2",
            max_rel(&dec.omegas, &[d.cap_omega_plus, d.cap_omega_minus]),
            1e-10,
            "two-oscillator closed form, relative",
        ));
    }

    reports.push(OracleReport::evaluate(
        "eigen_conjugation",
        conjugation_residual(&m_r, &dec.g_mat, &dec.lambdas),
        1e-12,
        "|M_R G M_R^T - diag| / |G|",
    ));

    if n <= 4 {
        let oracle_lams = charpoly_eigs(&dec.g_mat)
            .map_err(|e| CliError::input(format!("charpoly failed: {e}")))?;
        reports.push(OracleReport::evaluate(
            "eigen_vs_charpoly",
            max_abs(&dec.lambdas, &oracle_lams),
            1e-10,
            "bisection eigenvalues",
        ));
    }

    reports.push(givens_roundtrip_report(&m_r));

    let mut worst_rk4 = 0.0f64;
    for _ in 0..2 {
        let x0 = random_state(&mut rng, n);
        let exact = evolve_with(&dec, &x0, 10.0)?;
        let integrated = rk4_hamilton(net, &x0, 10.0, 1e-3)
            .map_err(|e| CliError::input(format!("rk4 failed: {e}")))?;
        worst_rk4 = worst_rk4.max(max_abs(&exact.to_vec(), &integrated.to_vec()));
    }
    reports.push(OracleReport::evaluate(
        "evolve_vs_rk4",
        worst_rk4,
        1e-6,
        "t = 10, dt = 1e-3",
    ));

    let x0 = random_state(&mut rng, n);
    let e0 = energy(net, &x0);
    let mut worst_drift = 0.0f64;
    let mut t = 0.0;
    while t <= 100.0 {
        let xt = evolve_with(&dec, &x0, t)?;
        worst_drift = worst_drift.max((energy(net, &xt) - e0).abs() / e0.abs().max(1e-300));
        t += 2.5;
    }
    reports.push(OracleReport::evaluate(
        "energy_conservation",
        worst_drift,
        1e-9,
        "relative drift over t <= 100",
    ));

    let x0 = random_state(&mut rng, n);
    let t: f64 = rng.gen_range(1.0..20.0);
    let back = evolve_with(&dec, &evolve_with(&dec, &x0, t)?, -t)?;
    reports.push(OracleReport::evaluate(
        "reversibility",
        max_abs(&back.to_vec(), &x0.to_vec()),
        1e-10,
        "evolve there and back",
    ));

    let t1: f64 = rng.gen_range(-5.0..5.0);
    let t2: f64 = rng.gen_range(-5.0..5.0);
    let composed = propagator(&dec.omegas, t1)
        .to_matrix()
        .mul(&propagator(&dec.omegas, t2).to_matrix());
    let direct = propagator(&dec.omegas, t1 + t2).to_matrix();
    reports.push(OracleReport::evaluate(
        "propagator_group_law",
        composed.sub(&direct).max_abs(),
        1e-12,
        "Lambda(t1) Lambda(t2) = Lambda(t1+t2)",
    ));

    let curve = section_curve(net, Stage::AfterS, (Axis::P(0), Axis::P(1)), 1.0, 64)?;
    reports.push(OracleReport::evaluate(
        "section_circle_after_s",
        axis_ratio_minus_one(&curve.points),
        1e-10,
        "momentum plane axis ratio",
    ));

    let curve = section_curve(net, Stage::AfterT, (Axis::Q(0), Axis::P(0)), 1.0, 64)?;
    reports.push(OracleReport::evaluate(
        "section_circle_after_t",
        axis_ratio_minus_one(&curve.points),
        1e-10,
        "mode plane axis ratio",
    ));

    let curve = section_curve(net, Stage::AfterR, (Axis::Q(0), Axis::Q(1)), 1.0, 64)?;
    let cross = match fit_conic(&curve.points, 1.0) {
        Some((a, b, c)) => b.abs() / a.abs().max(c.abs()).max(f64::MIN_POSITIVE),
        None => f64::INFINITY,
    };
    reports.push(OracleReport::evaluate(
        "section_cross_term_after_r",
        cross,
        1e-10,
        "fitted cross term, relative",
    ));

    Ok(reports)
}

fn quantum_reports(
    qnet: &QuantumNetwork,
    opts: &VerifyOptions,
) -> Result<Vec<OracleReport>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = qnet.n();
    let modes = quantum_normal_modes(qnet)?;
    let mut m_r = modes.m_r.to_mat();
    if opts.corrupt_basis {
        m_r.set(0, 0, m_r.get(0, 0) + 1e-3);
    }

    let mut reports = Vec::new();

    reports.push(OracleReport::evaluate(
        "basis_orthogonality",
        m_r.orthogonality_residual(),
        1e-12,
        "|M_R M_R^T - I|",
    ));

    let h = qnet.coupling_matrix();
    reports.push(OracleReport::evaluate(
        "eigen_conjugation",
        conjugation_residual(&m_r, &h, &modes.lambdas),
        1e-12,
        "|M_R H M_R^T - diag| / |H|",
    ));

    let mut worst = 0.0f64;
    let mut worst_norm = 0.0f64;
    for case in 0..3 {
        let c0 = if case == 0 {
            SingleExcitationState::basis(n, 0)?
        } else {
            random_amplitudes(&mut rng, n)
        };
        for &t in &[1.0, 10.0, 100.0] {
            let fast = quantum::evolve_with(&modes, &c0, t)?;
            let slow = matexp_series(&h, t, c0.amps());
            let gap = fast
                .amps()
                .iter()
                .zip(slow.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst = worst.max(gap);
            let norm: f64 = fast.amps().iter().map(|z| z.norm_sqr()).sum();
            worst_norm = worst_norm.max((norm - 1.0).abs());
        }
    }
    reports.push(OracleReport::evaluate(
        "evolve_vs_matexp",
        worst,
        1e-9,
        "amplitudes vs series exponential, t <= 100",
    ));
    reports.push(OracleReport::evaluate(
        "norm_conservation",
        worst_norm,
        1e-12,
        "excitation number",
    ));

    if n <= 4 {
        let oracle_lams = charpoly_eigs(&h)
            .map_err(|e| CliError::input(format!("charpoly failed: {e}")))?;
        reports.push(OracleReport::evaluate(
            "eigen_vs_charpoly",
            max_abs(&modes.lambdas, &oracle_lams),
            1e-10,
            "bisection eigenvalues",
        ));
    }

    let c0 = random_amplitudes(&mut rng, n);
    let expectation = |c: &SingleExcitationState| -> f64 {
        let mut rotated = vec![Complex64::new(0.0, 0.0); n];
        for (i, r) in rotated.iter_mut().enumerate() {
            for (j, amp) in c.amps().iter().enumerate() {
                *r += modes.m_r.get(i, j) * amp;
            }
        }
        rotated
            .iter()
            .zip(modes.lambdas.iter())
            .map(|(z, &l)| l * z.norm_sqr())
            .sum()
    };
    let e0 = expectation(&c0);
    let mut worst_e = 0.0f64;
    for &t in &[0.7, 13.0, 90.0] {
        let ct = quantum::evolve_with(&modes, &c0, t)?;
        worst_e = worst_e.max((expectation(&ct) - e0).abs() / e0.abs().max(1.0));
    }
    reports.push(OracleReport::evaluate(
        "energy_expectation",
        worst_e,
        1e-10,
        "sum lambda_k |c_k|^2, relative drift",
    ));

    reports.push(givens_roundtrip_report(&m_r));

    Ok(reports)
}

fn random_amplitudes(rng: &mut ChaCha8Rng, n: usize) -> SingleExcitationState {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            let amps = v.iter().map(|z| z / norm).collect();
            return SingleExcitationState::new(amps).expect("normalized by construction");
        }
    }
}
