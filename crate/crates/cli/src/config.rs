//! Network configuration files.
//!
//! A config is one JSON object with a `kind` discriminator. Classical
//! networks give `diag_freq`/`couplings` or a `spring_mass` block (exactly
//! one of the two); quantum networks give `g_diag`/`g_couple`. Unknown
//! fields are rejected. All indices in file formats are 1-based.

use crate::error::CliError;
use serde::Deserialize;
use std::path::Path;
use symplecta_core::pipeline::{from_spring_mass, OscillatorNetwork, SpringMassPair};
use symplecta_core::quantum::QuantumNetwork;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpringMassConfig {
    pub m1: f64,
    pub k1: f64,
    pub m2: f64,
    pub k2: f64,
    pub k: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassicalConfig {
    #[allow(dead_code)]
    kind: String,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    diag_freq: Option<Vec<f64>>,
    #[serde(default)]
    couplings: Option<Vec<f64>>,
    #[serde(default)]
    spring_mass: Option<SpringMassConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantumConfig {
    #[allow(dead_code)]
    kind: String,
    #[serde(default)]
    n: Option<usize>,
    g_diag: Vec<f64>,
    g_couple: Vec<f64>,
}

#[derive(Debug)]
pub enum LoadedConfig {
    Classical(OscillatorNetwork),
    Quantum(QuantumNetwork),
}

impl LoadedConfig {
    pub fn classical(self) -> Result<OscillatorNetwork, CliError> {
        match self {
            LoadedConfig::Classical(net) => Ok(net),
            LoadedConfig::Quantum(_) => Err(CliError::input(
                "this command needs a classical config (kind = \"classical\")",
            )),
        }
    }

    pub fn quantum(self) -> Result<QuantumNetwork, CliError> {
        match self {
            LoadedConfig::Quantum(net) => Ok(net),
            LoadedConfig::Classical(_) => Err(CliError::input(
                "this command needs a quantum config (kind = \"quantum\")",
            )),
        }
    }
}

pub fn load_config(path: &Path) -> Result<LoadedConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<LoadedConfig, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| CliError::input("config needs a string field \"kind\""))?;
    match kind {
        "classical" => {
            let cfg: ClassicalConfig = serde_json::from_value(value)?;
            classical_network(cfg).map(LoadedConfig::Classical)
        }
        "quantum" => {
            let cfg: QuantumConfig = serde_json::from_value(value)?;
            quantum_network(cfg).map(LoadedConfig::Quantum)
        }
        other => Err(CliError::input(format!(
            "unknown config kind {other:?}; expected \"classical\" or \"quantum\""
        ))),
    }
}

fn classical_network(cfg: ClassicalConfig) -> Result<OscillatorNetwork, CliError> {
    match (cfg.spring_mass, cfg.diag_freq, cfg.couplings) {
        (Some(sm), None, None) => {
            if let Some(n) = cfg.n {
                if n != 2 {
                    return Err(CliError::input(format!(
                        "spring_mass configs describe n = 2 oscillators, got n = {n}"
                    )));
                }
            }
            let pair = SpringMassPair::new(sm.m1, sm.k1, sm.m2, sm.k2, sm.k)?;
            let (w1, w2, g) = from_spring_mass(&pair);
            Ok(OscillatorNetwork::new(vec![w1, w2], vec![g])?)
        }
        (None, Some(diag_freq), Some(couplings)) => {
            if let Some(n) = cfg.n {
                if n != diag_freq.len() {
                    return Err(CliError::input(format!(
                        "n = {n} but diag_freq has {} entries",
                        diag_freq.len()
                    )));
                }
            }
            Ok(OscillatorNetwork::new(diag_freq, couplings)?)
        }
        (None, _, _) => Err(CliError::input(
            "classical config needs both diag_freq and couplings (or a spring_mass block)",
        )),
        (Some(_), _, _) => Err(CliError::input(
            "give either spring_mass or diag_freq/couplings, not both",
        )),
    }
}

fn quantum_network(cfg: QuantumConfig) -> Result<QuantumNetwork, CliError> {
    if let Some(n) = cfg.n {
        if n != cfg.g_diag.len() {
            return Err(CliError::input(format!(
                "n = {n} but g_diag has {} entries",
                cfg.g_diag.len()
            )));
        }
    }
    Ok(QuantumNetwork::new(cfg.g_diag, cfg.g_couple)?)
}

/// Initial classical state file: `{"q": [..], "p": [..]}`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateFile {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

pub fn load_initial_state(path: &Path) -> Result<InitialStateFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}
