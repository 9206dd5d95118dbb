//! The file-emitting subcommands. The `verify` command lives in its own
//! module.

use crate::config::{load_config, load_initial_state};
use crate::error::CliError;
use crate::output::{fmt_g, open_out, write_json, CsvWriter};
use serde_json::json;
use std::path::{Path, PathBuf};
use symplecta_core::dynamics::{
    energy, evolve_trajectory, sample_count, section_curve, Axis, PhaseState, Stage,
};
use symplecta_core::linalg::givens_decompose;
use symplecta_core::pipeline::{decompose, from_spring_mass, SpringMassPair};
use symplecta_core::quantum::{evolve_with, quantum_normal_modes, SingleExcitationState};

fn mat_to_json(m: &symplecta_core::linalg::Mat) -> serde_json::Value {
    let rows: Vec<Vec<f64>> = (0..m.n())
        .map(|i| (0..m.n()).map(|j| m.get(i, j)).collect())
        .collect();
    json!(rows)
}

fn givens_to_json(m: &symplecta_core::linalg::OrthoMatrix) -> Result<serde_json::Value, CliError> {
    let seq = givens_decompose(m).map_err(|e| CliError::input(e.to_string()))?;
    let rotations: Vec<serde_json::Value> = seq
        .rotations
        .iter()
        .map(|r| json!({"i": r.i + 1, "j": r.j + 1, "alpha": r.alpha}))
        .collect();
    Ok(json!({"det_sign": seq.det_sign, "rotations": rotations}))
}

/// `normal-modes`: frequencies, transformation diagonals, the rotation
/// factored into Givens angles, and the symplectic residual.
pub fn cmd_normal_modes(config: &Path, out: &Option<PathBuf>) -> Result<(), CliError> {
    match load_config(config)? {
        crate::config::LoadedConfig::Classical(net) => {
            let dec = decompose(&net)?;
            let doc = json!({
                "kind": "classical",
                "n": net.n(),
                "omegas": dec.omegas,
                "lambdas": dec.lambdas,
                "big_g": dec.big_g,
                "m_s": dec.m_s,
                "m_t": dec.m_t,
                "m_r": mat_to_json(dec.m_r.as_mat()),
                "givens": givens_to_json(&dec.m_r)?,
                "symplectic_residual": dec.symplectic_residual(),
            });
            write_json(out, &doc)
        }
        crate::config::LoadedConfig::Quantum(qnet) => {
            let modes = quantum_normal_modes(&qnet)?;
            let doc = json!({
                "kind": "quantum",
                "n": qnet.n(),
                "lambdas": modes.lambdas,
                "m_r": mat_to_json(modes.m_r.as_mat()),
                "givens": givens_to_json(&modes.m_r)?,
            });
            write_json(out, &doc)
        }
    }
}

/// `evolve`: CSV of the exact classical trajectory with an energy column.
pub fn cmd_evolve(
    config: &Path,
    initial: &Path,
    t_max: f64,
    dt: f64,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let net = load_config(config)?.classical()?;
    let init = load_initial_state(initial)?;
    let x0 = PhaseState::new(init.q, init.p)?;
    if x0.n() != net.n() {
        return Err(CliError::input(format!(
            "initial state has {} oscillators, config has {}",
            x0.n(),
            net.n()
        )));
    }
    let samples = evolve_trajectory(&net, &x0, t_max, dt)?;

    let mut csv = CsvWriter::new(open_out(out)?);
    csv.meta("command", "evolve")?;
    csv.meta("n", net.n())?;
    csv.meta("t_max", fmt_g(t_max))?;
    csv.meta("dt", fmt_g(dt))?;
    let mut columns = vec!["t".to_string()];
    columns.extend((1..=net.n()).map(|i| format!("q_{i}")));
    columns.extend((1..=net.n()).map(|i| format!("p_{i}")));
    columns.push("energy".to_string());
    csv.header(&columns)?;
    for (k, state) in samples.iter().enumerate() {
        let mut row = vec![k as f64 * dt];
        row.extend_from_slice(state.q());
        row.extend_from_slice(state.p());
        row.push(energy(&net, state));
        csv.row(&row)?;
    }
    csv.finish()
}

pub fn parse_plane(text: &str) -> Result<(Axis, Axis), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::input(format!(
            "plane must be two axes like q1,p1 (got {text:?})"
        )));
    }
    let parse_axis = |s: &str| -> Result<Axis, CliError> {
        let (tag, idx) = s.split_at(1);
        let i: usize = idx
            .parse()
            .ok()
            .filter(|&i| i >= 1)
            .ok_or_else(|| CliError::input(format!("bad axis index in {s:?}")))?;
        match tag {
            "q" | "Q" => Ok(Axis::Q(i - 1)),
            "p" | "P" => Ok(Axis::P(i - 1)),
            _ => Err(CliError::input(format!(
                "axis must start with q or p (got {s:?})"
            ))),
        }
    };
    Ok((parse_axis(parts[0])?, parse_axis(parts[1])?))
}

/// `sections`: CSV of one constant-energy section curve. Coordinates are
/// stage-local: for `after-s`/`after-r`/`after-t` the axis labels refer to
/// the transformed variables of that stage.
pub fn cmd_sections(
    config: &Path,
    stage: Stage,
    plane_text: &str,
    section_energy: f64,
    samples: usize,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let net = load_config(config)?.classical()?;
    let plane = parse_plane(plane_text)?;
    let curve = section_curve(&net, stage, plane, section_energy, samples)?;

    let mut csv = CsvWriter::new(open_out(out)?);
    csv.meta("command", "sections")?;
    csv.meta("stage", curve.stage)?;
    csv.meta("plane", format!("{},{}", curve.plane.0, curve.plane.1))?;
    csv.meta("axes", "stage-local coordinates")?;
    csv.meta("energy", fmt_g(curve.energy))?;
    csv.header(&["u".to_string(), "v".to_string()])?;
    for pt in &curve.points {
        csv.row(&[pt[0], pt[1]])?;
    }
    csv.finish()
}

/// `quantum-evolve`: CSV of single-excitation amplitudes, norm, and the
/// survival probability of the initial site.
pub fn cmd_quantum_evolve(
    config: &Path,
    initial_site: usize,
    t_max: f64,
    dt: f64,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let qnet = load_config(config)?.quantum()?;
    if initial_site < 1 || initial_site > qnet.n() {
        return Err(CliError::input(format!(
            "initial site {initial_site} out of range 1..={}",
            qnet.n()
        )));
    }
    let site = initial_site - 1;
    let count = sample_count(t_max, dt)?;
    let modes = quantum_normal_modes(&qnet)?;
    let c0 = SingleExcitationState::basis(qnet.n(), site)?;

    let mut csv = CsvWriter::new(open_out(out)?);
    csv.meta("command", "quantum-evolve")?;
    csv.meta("n", qnet.n())?;
    csv.meta("initial_site", initial_site)?;
    csv.meta("t_max", fmt_g(t_max))?;
    csv.meta("dt", fmt_g(dt))?;
    let mut columns = vec!["t".to_string()];
    for i in 1..=qnet.n() {
        columns.push(format!("re_c_{i}"));
        columns.push(format!("im_c_{i}"));
    }
    columns.push("norm".to_string());
    columns.push("survival".to_string());
    csv.header(&columns)?;
    for k in 0..count {
        let t = k as f64 * dt;
        let ct = evolve_with(&modes, &c0, t)?;
        let mut row = vec![t];
        for z in ct.amps() {
            row.push(z.re);
            row.push(z.im);
        }
        let norm: f64 = ct.amps().iter().map(|z| z.norm_sqr()).sum();
        row.push(norm);
        row.push(ct.amps()[site].norm_sqr());
        csv.row(&row)?;
    }
    csv.finish()
}

/// `from-spring-mass`: write the n = 2 classical config for a spring-mass
/// pair.
pub fn cmd_from_spring_mass(
    m1: f64,
    k1: f64,
    m2: f64,
    k2: f64,
    k: f64,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let pair = SpringMassPair::new(m1, k1, m2, k2, k)?;
    let (w1, w2, g) = from_spring_mass(&pair);
    let doc = json!({
        "kind": "classical",
        "n": 2,
        "diag_freq": [w1, w2],
        "couplings": [g],
    });
    write_json(out, &doc)
}
