//! `symplecta`: normal-mode analysis and exact dynamics of one oscillator
//! coupled to N-1 others, classical and quantum.

mod commands;
mod config;
mod error;
mod output;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use error::CliError;
use std::path::PathBuf;
use symplecta_core::dynamics::Stage;

#[derive(Debug, Parser)]
#[command(
    name = "symplecta",
    version,
    about = "Normal modes and exact dynamics of star-coupled oscillator networks",
    after_help = "Exit codes: 0 success, 1 input error, 2 unstable network, 3 geometry error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StageArg {
    Original,
    AfterS,
    AfterR,
    AfterT,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Stage {
        match s {
            StageArg::Original => Stage::Original,
            StageArg::AfterS => Stage::AfterS,
            StageArg::AfterR => Stage::AfterR,
            StageArg::AfterT => Stage::AfterT,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose a network into normal modes and write the result document.
    NormalModes {
        #[arg(long)]
        config: PathBuf,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve a classical state exactly and write a CSV trajectory.
    Evolve {
        #[arg(long)]
        config: PathBuf,
        /// JSON file with the initial state: {"q": [..], "p": [..]}.
        #[arg(long)]
        initial: PathBuf,
        #[arg(long, value_name = "T")]
        t_max: f64,
        #[arg(long, value_name = "DT")]
        dt: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a constant-energy section curve in stage-local coordinates.
    Sections {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        stage: StageArg,
        /// Two axes like q1,p1 (1-based oscillator indices).
        #[arg(long)]
        plane: String,
        #[arg(long, default_value_t = 1.0)]
        energy: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve a single-excitation quantum state and write amplitudes.
    QuantumEvolve {
        #[arg(long)]
        config: PathBuf,
        /// Site holding the initial excitation (1-based).
        #[arg(long)]
        initial_site: usize,
        #[arg(long, value_name = "T")]
        t_max: f64,
        #[arg(long, value_name = "DT")]
        dt: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle check suite for a config; exit 0 iff all checks pass.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Seed for randomized checks; falls back to SYMPLECTA_SEED, then 42.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, hide = true)]
        corrupt_basis: bool,
    },
    /// Convert spring-mass parameters into a classical config file.
    FromSpringMass {
        #[arg(long)]
        m1: f64,
        #[arg(long)]
        k1: f64,
        #[arg(long)]
        m2: f64,
        #[arg(long)]
        k2: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    if let Some(seed) = flag {
        return seed;
    }
    if let Ok(text) = std::env::var("SYMPLECTA_SEED") {
        if let Ok(seed) = text.trim().parse() {
            return seed;
        }
    }
    42
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::NormalModes { config, out } => commands::cmd_normal_modes(&config, &out),
        Command::Evolve {
            config,
            initial,
            t_max,
            dt,
            out,
        } => commands::cmd_evolve(&config, &initial, t_max, dt, &out),
        Command::Sections {
            config,
            stage,
            plane,
            energy,
            samples,
            out,
        } => commands::cmd_sections(&config, stage.into(), &plane, energy, samples, &out),
        Command::QuantumEvolve {
            config,
            initial_site,
            t_max,
            dt,
            out,
        } => commands::cmd_quantum_evolve(&config, initial_site, t_max, dt, &out),
        Command::Verify {
            config,
            seed,
            corrupt_basis,
        } => verify::run_verify(
            &config,
            &verify::VerifyOptions {
                seed: resolve_seed(seed),
                corrupt_basis,
            },
        ),
        Command::FromSpringMass {
            m1,
            k1,
            m2,
            k2,
            k,
            out,
        } => commands::cmd_from_spring_mass(m1, k1, m2, k2, k, &out),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
