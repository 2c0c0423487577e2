//! Command-line front end: figure presets and parameter sweeps written as CSV.

mod config;
pub mod verify;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub use config::{parse_bias, parse_config_text, QubitChoice, RunArgs, RunConfig};

use crate::cloner::{tau_grid, Cloner};
use crate::model::BiasMode;
use crate::observables::{fidelity, PhotonStats, ProbabilityTable};
use crate::{Error, Result, C64};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_VERIFY: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "cloner", version, about = "Atom-cavity quantum cloning simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Phase-averaged cloning fidelity versus time.
    Fidelity(RunArgs),
    /// Mean photon numbers in the clone mode and in both modes.
    Photons(RunArgs),
    /// Fidelity averaged over all input qubits, with and without the field.
    AvgFidelity(RunArgs),
    /// Run the built-in consistency checks.
    Verify,
    /// Reproduce a figure with every parameter pinned.
    Preset {
        /// fig2 | fig3a | fig3b | fig4 | fig5a | fig5b | fig6a | fig6b
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Fidelity,
    Photons,
    AvgFidelity,
}

/// Column-major numeric table with a header.
#[derive(Debug, Clone, PartialEq)]
pub struct Csv {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// Twelve significant digits, scientific notation, no locale.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

impl Csv {
    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn cloner(cfg: &RunConfig, bias: BiasMode) -> Cloner {
    Cloner::new(cfg.n_atoms, bias)
        .with_method(cfg.method)
        .with_phase_grid(cfg.phase_grid)
}

fn tables(cfg: &RunConfig, bias: BiasMode, taus: &[f64]) -> Result<Vec<ProbabilityTable>> {
    let c = cloner(cfg, bias);
    match cfg.qubit {
        QubitChoice::Explicit(q) => c.tables(&q, taus),
        QubitChoice::Average => c.averaged_tables(taus, cfg.bloch_grid),
    }
}

fn fidelities(cfg: &RunConfig, bias: BiasMode, taus: &[f64]) -> Result<Vec<f64>> {
    tables(cfg, bias, taus)?.iter().map(fidelity).collect()
}

/// `tau, fidelity` plus `fidelity_unbiased` when a field is configured.
pub fn cmd_fidelity(cfg: &RunConfig) -> Result<Csv> {
    cfg.validate()?;
    let taus = tau_grid(cfg.tau_max, cfg.tau_points);
    let f = fidelities(cfg, cfg.bias, &taus)?;
    if cfg.bias.is_none() {
        return Ok(Csv {
            header: vec!["tau", "fidelity"],
            rows: taus.iter().zip(&f).map(|(&t, &x)| vec![t, x]).collect(),
        });
    }
    let f0 = fidelities(cfg, BiasMode::None, &taus)?;
    Ok(Csv {
        header: vec!["tau", "fidelity", "fidelity_unbiased"],
        rows: (0..taus.len()).map(|i| vec![taus[i], f[i], f0[i]]).collect(),
    })
}

/// `tau, n_right, n_all`.
pub fn cmd_photons(cfg: &RunConfig) -> Result<Csv> {
    cfg.validate()?;
    let taus = tau_grid(cfg.tau_max, cfg.tau_points);
    let rows = tables(cfg, cfg.bias, &taus)?
        .into_iter()
        .zip(&taus)
        .map(|(t, &tau)| {
            let s = PhotonStats::from_table(t);
            vec![tau, s.n_right, s.n_all]
        })
        .collect();
    Ok(Csv {
        header: vec!["tau", "n_right", "n_all"],
        rows,
    })
}

/// `tau, F_avg_bias, F_avg_nobias`, both averaged over the Bloch sphere.
pub fn cmd_avg_fidelity(cfg: &RunConfig) -> Result<Csv> {
    if cfg.qubit != QubitChoice::Average {
        return Err(Error::Config("avg-fidelity averages over input qubits; pass --average".into()));
    }
    cfg.validate()?;
    let taus = tau_grid(cfg.tau_max, cfg.tau_points);
    let fb = fidelities(cfg, cfg.bias, &taus)?;
    let f0 = fidelities(cfg, BiasMode::None, &taus)?;
    Ok(Csv {
        header: vec!["tau", "F_avg_bias", "F_avg_nobias"],
        rows: (0..taus.len()).map(|i| vec![taus[i], fb[i], f0[i]]).collect(),
    })
}

pub const PRESETS: [&str; 8] = ["fig2", "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6a", "fig6b"];

/// Pinned parameters for each figure.
pub fn preset(name: &str) -> Result<(Kind, RunConfig)> {
    let base = RunConfig::default();
    let lab8 = BiasMode::Lab(C64::new(0.0, 0.0), C64::new(8.0, 0.0));
    let averaged = |kind| {
        (
            kind,
            RunConfig {
                bias: lab8,
                qubit: QubitChoice::Average,
                tau_max: 6.0,
                tau_points: 601,
                ..base.clone()
            },
        )
    };
    let run = |kind, n_atoms, bias| {
        (
            kind,
            RunConfig {
                n_atoms,
                bias,
                ..base.clone()
            },
        )
    };
    Ok(match name {
        "fig2" => run(Kind::Fidelity, 1, BiasMode::Matched(3.0)),
        "fig3a" => run(Kind::Photons, 1, BiasMode::None),
        "fig3b" => run(Kind::Photons, 1, BiasMode::Matched(3.0)),
        "fig4" => run(Kind::Fidelity, 2, BiasMode::Matched(3.0)),
        "fig5a" => run(Kind::Photons, 2, BiasMode::None),
        "fig5b" => run(Kind::Photons, 2, BiasMode::Matched(3.0)),
        "fig6a" => averaged(Kind::AvgFidelity),
        "fig6b" => averaged(Kind::Photons),
        other => {
            return Err(Error::Config(format!(
                "unknown preset `{other}` (one of {})",
                PRESETS.join(", ")
            )))
        }
    })
}

pub fn execute(kind: Kind, cfg: &RunConfig) -> Result<Csv> {
    match kind {
        Kind::Fidelity => cmd_fidelity(cfg),
        Kind::Photons => cmd_photons(cfg),
        Kind::AvgFidelity => cmd_avg_fidelity(cfg),
    }
}

fn emit(csv: &Csv, out: &Option<PathBuf>) -> Result<()> {
    let text = csv.render();
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

pub fn run(cli: Cli) -> ExitCode {
    let resolve = |a: RunArgs| a.resolve(RunConfig::default());
    let (kind, cfg) = match cli.command {
        Command::Verify => {
            let report = verify::run_all();
            print!("{}", report.render());
            return ExitCode::from(if report.passed() { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::Preset { name, out } => match preset(&name) {
            Ok((kind, cfg)) => (kind, Ok(RunConfig { output_path: out, ..cfg })),
            Err(e) => return fail(&e),
        },
        Command::Fidelity(a) => (Kind::Fidelity, resolve(a)),
        Command::Photons(a) => (Kind::Photons, resolve(a)),
        Command::AvgFidelity(a) => (Kind::AvgFidelity, resolve(RunArgs { average: true, ..a })),
    };
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match execute(kind, &cfg).and_then(|csv| emit(&csv, &cfg.output_path)) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => fail(&e),
    }
}
