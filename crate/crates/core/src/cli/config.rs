//! Run configuration assembled from defaults, an optional `key = value` file
//! and command-line flags (flags win).

use std::path::PathBuf;

use clap::Args;

use crate::cloner::{DEFAULT_BLOCH_GRID, DEFAULT_PHASE_GRID};
use crate::dynamics::Method;
use crate::model::{BiasMode, QubitState};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitChoice {
    Explicit(QubitState),
    Average,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_atoms: usize,
    pub bias: BiasMode,
    pub qubit: QubitChoice,
    pub tau_max: f64,
    pub tau_points: usize,
    pub phase_grid: usize,
    pub bloch_grid: (usize, usize),
    pub method: Method,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_atoms: 1,
            bias: BiasMode::None,
            qubit: QubitChoice::Explicit(QubitState::horizontal()),
            tau_max: 12.0,
            tau_points: 1001,
            phase_grid: DEFAULT_PHASE_GRID,
            bloch_grid: DEFAULT_BLOCH_GRID,
            method: Method::Spectral,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 || self.n_atoms > 4 {
            return Err(Error::Config(format!("atoms must be in 1..=4, got {}", self.n_atoms)));
        }
        if self.tau_points < 2 {
            return Err(Error::Config(format!("tau-points must be at least 2, got {}", self.tau_points)));
        }
        if !(self.tau_max > 0.0) || !self.tau_max.is_finite() {
            return Err(Error::Config(format!("tau-max must be positive, got {}", self.tau_max)));
        }
        if self.phase_grid < 2 {
            return Err(Error::Config(format!("phase-grid must be at least 2, got {}", self.phase_grid)));
        }
        if self.bloch_grid.0 < 4 || self.bloch_grid.1 < 4 {
            return Err(Error::Config(format!(
                "bloch-grid orders must be at least 4, got {}x{}",
                self.bloch_grid.0, self.bloch_grid.1
            )));
        }
        if let BiasMode::Matched(s) = self.bias {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(Error::Config(format!("matched bias strength must be >= 0, got {s}")));
            }
        }
        Ok(())
    }
}

/// Flags shared by the run subcommands. Every field is optional so that a
/// config file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Plain-text `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of atoms in the cavity.
    #[arg(long)]
    pub atoms: Option<usize>,
    /// Cycling field: none | matched:<s> | lab:<g1>,<g2> | primed:<g1'>,<g2'>.
    #[arg(long)]
    pub bias: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_im: Option<f64>,
    /// Average over all input qubits instead of using (alpha, beta).
    #[arg(long)]
    pub average: bool,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub tau_points: Option<usize>,
    /// Points per preparation phase.
    #[arg(long)]
    pub phase_grid: Option<usize>,
    /// Bloch quadrature orders, `<chi>x<phi>` or a single order for both.
    #[arg(long)]
    pub bloch_grid: Option<String>,
    /// spectral | rk5
    #[arg(long)]
    pub method: Option<String>,
    /// Output CSV path (standard output when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_bias(s: &str) -> Result<BiasMode> {
    let bad = || Error::Config(format!("cannot parse bias `{s}` (none | matched:<s> | lab:<g1>,<g2> | primed:<g1>,<g2>)"));
    let s = s.trim();
    if s == "none" {
        return Ok(BiasMode::None);
    }
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let pair = || -> Result<(C64, C64)> {
        let (a, b) = rest.split_once(',').ok_or_else(bad)?;
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        Ok((C64::new(a, 0.0), C64::new(b, 0.0)))
    };
    match kind {
        "matched" => Ok(BiasMode::Matched(rest.trim().parse().map_err(|_| bad())?)),
        "lab" => pair().map(|(a, b)| BiasMode::Lab(a, b)),
        "primed" => pair().map(|(a, b)| BiasMode::Primed(a, b)),
        _ => Err(bad()),
    }
}

fn parse_bloch_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("cannot parse bloch grid `{s}` (e.g. 16x16)"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once(['x', ',']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{v}` for `{key}`")))
}

/// Parses a `key = value` file into flag form. `#` starts a comment; keys may
/// use dashes or underscores.
pub fn parse_config_text(text: &str) -> Result<RunArgs> {
    let mut a = RunArgs::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "atoms" => a.atoms = Some(parse_num(&key, value)?),
            "bias" => a.bias = Some(value.to_string()),
            "alpha_re" => a.alpha_re = Some(parse_num(&key, value)?),
            "alpha_im" => a.alpha_im = Some(parse_num(&key, value)?),
            "beta_re" => a.beta_re = Some(parse_num(&key, value)?),
            "beta_im" => a.beta_im = Some(parse_num(&key, value)?),
            "qubit" => match value {
                "average" => a.average = true,
                "explicit" => a.average = false,
                _ => return Err(Error::Config(format!("qubit must be `average` or `explicit`, got `{value}`"))),
            },
            "average" => a.average = parse_num::<bool>(&key, value)?,
            "tau_max" => a.tau_max = Some(parse_num(&key, value)?),
            "tau_points" => a.tau_points = Some(parse_num(&key, value)?),
            "phase_grid" => a.phase_grid = Some(parse_num(&key, value)?),
            "bloch_grid" => a.bloch_grid = Some(value.to_string()),
            "method" => a.method = Some(value.to_string()),
            "out" | "output_path" => a.out = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
        }
    }
    Ok(a)
}

impl RunArgs {
    /// Fields set here override those in `base`.
    fn overlay(self, base: RunArgs) -> RunArgs {
        RunArgs {
            config: None,
            atoms: self.atoms.or(base.atoms),
            bias: self.bias.or(base.bias),
            alpha_re: self.alpha_re.or(base.alpha_re),
            alpha_im: self.alpha_im.or(base.alpha_im),
            beta_re: self.beta_re.or(base.beta_re),
            beta_im: self.beta_im.or(base.beta_im),
            average: self.average || base.average,
            tau_max: self.tau_max.or(base.tau_max),
            tau_points: self.tau_points.or(base.tau_points),
            phase_grid: self.phase_grid.or(base.phase_grid),
            bloch_grid: self.bloch_grid.or(base.bloch_grid),
            method: self.method.or(base.method),
            out: self.out.or(base.out),
        }
    }

    /// Applies the flags (and the config file they name) on top of `base`.
    pub fn resolve(self, base: RunConfig) -> Result<RunConfig> {
        let merged = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                self.overlay(parse_config_text(&text)?)
            }
            None => self,
        };

        let mut cfg = base;
        if let Some(n) = merged.atoms {
            cfg.n_atoms = n;
        }
        if let Some(b) = &merged.bias {
            cfg.bias = parse_bias(b)?;
        }
        let any_amp = [merged.alpha_re, merged.alpha_im, merged.beta_re, merged.beta_im]
            .iter()
            .any(Option::is_some);
        if merged.average {
            cfg.qubit = QubitChoice::Average;
        } else if any_amp {
            let alpha = C64::new(merged.alpha_re.unwrap_or(0.0), merged.alpha_im.unwrap_or(0.0));
            let beta = C64::new(merged.beta_re.unwrap_or(0.0), merged.beta_im.unwrap_or(0.0));
            cfg.qubit = QubitChoice::Explicit(QubitState::new(alpha, beta)?);
        }
        if let Some(t) = merged.tau_max {
            cfg.tau_max = t;
        }
        if let Some(n) = merged.tau_points {
            cfg.tau_points = n;
        }
        if let Some(m) = merged.phase_grid {
            cfg.phase_grid = m;
        }
        if let Some(g) = &merged.bloch_grid {
            cfg.bloch_grid = parse_bloch_grid(g)?;
        }
        if let Some(m) = &merged.method {
            cfg.method = m.parse()?;
        }
        if merged.out.is_some() {
            cfg.output_path = merged.out;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
