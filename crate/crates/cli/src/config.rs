//! Run configuration: JSON file plus command-line overrides.
//!
//! File schema (every key optional; defaults are the Fig. 1a parameter set):
//!
//! ```json
//! {
//!   "tau": 0.2, "omega": 1.0, "Omega": 0.1, "Nc": 1e5,
//!   "alpha": 0.5, "theta": 0.0,
//!   "t_start": 0.0, "t_max": 1.0, "samples": 2000,
//!   "path": "closed",
//!   "xi_weight": 1.0, "lambda_sign": "minus", "theta_model": "heisenberg",
//!   "nmax": null, "kmax": null, "workers": null,
//!   "channel": "Q", "out": null, "format": ["csv"]
//! }
//! ```

use std::path::PathBuf;
use std::str::FromStr;

use atomlaser::oracle::TruncationPolicy;
use atomlaser::params::{validate, Violation};
use atomlaser::{
    AtomLaser, DeformationParams, DerivedCouplings, FidelityOptions, LambdaSign, LaserParams,
    ThetaModel, TimeGrid, ValidationError,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_T_MAX: f64 = 1.0;
pub const DEFAULT_SAMPLES: usize = 2000;

/// Which evaluation paths to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PathSelect {
    #[default]
    Closed,
    Oracle,
    Exact,
    All,
}

impl FromStr for PathSelect {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closed" => Ok(Self::Closed),
            "oracle" => Ok(Self::Oracle),
            "exact" => Ok(Self::Exact),
            "all" => Ok(Self::All),
            other => Err(format!(
                "unknown path `{other}` (expected closed|oracle|exact|all)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "svg" => Ok(Self::Svg),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected csv|svg|json)")),
        }
    }
}

/// Raw, unvalidated settings as they appear in a config file or on the
/// command line. Command-line values are merged on top of file values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigInput {
    pub tau: Option<f64>,
    pub omega: Option<f64>,
    #[serde(rename = "Omega")]
    pub coupling: Option<f64>,
    #[serde(rename = "Nc")]
    pub n_c: Option<f64>,
    pub alpha: Option<f64>,
    pub theta: Option<f64>,
    pub t_start: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub path: Option<PathSelect>,
    pub xi_weight: Option<f64>,
    pub lambda_sign: Option<LambdaSign>,
    pub theta_model: Option<ThetaModel>,
    pub nmax: Option<usize>,
    pub kmax: Option<usize>,
    pub workers: Option<usize>,
    pub channel: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Vec<Format>>,
}

impl ConfigInput {
    /// Values set in `over` replace those in `self`.
    pub fn merged(self, over: ConfigInput) -> ConfigInput {
        ConfigInput {
            tau: over.tau.or(self.tau),
            omega: over.omega.or(self.omega),
            coupling: over.coupling.or(self.coupling),
            n_c: over.n_c.or(self.n_c),
            alpha: over.alpha.or(self.alpha),
            theta: over.theta.or(self.theta),
            t_start: over.t_start.or(self.t_start),
            t_max: over.t_max.or(self.t_max),
            samples: over.samples.or(self.samples),
            path: over.path.or(self.path),
            xi_weight: over.xi_weight.or(self.xi_weight),
            lambda_sign: over.lambda_sign.or(self.lambda_sign),
            theta_model: over.theta_model.or(self.theta_model),
            nmax: over.nmax.or(self.nmax),
            kmax: over.kmax.or(self.kmax),
            workers: over.workers.or(self.workers),
            channel: over.channel.or(self.channel),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: AtomLaser,
    pub grid: TimeGrid,
    pub path: PathSelect,
    pub fidelity: FidelityOptions,
    pub theta_model: ThetaModel,
    pub truncation: TruncationPolicy,
    /// Worker threads for grid evaluation; `None` uses the global pool.
    pub workers: Option<usize>,
    pub channel: String,
    pub out: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        resolve(ConfigInput::default()).expect("defaults are valid")
    }
}

/// Fully resolved parameter set embedded in every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub tau: f64,
    pub d: f64,
    pub c: f64,
    pub omega: f64,
    #[serde(rename = "Omega")]
    pub coupling: f64,
    #[serde(rename = "Nc")]
    pub n_c: f64,
    pub alpha: f64,
    pub theta: f64,
    pub couplings: DerivedCouplings,
    pub t_start: f64,
    pub t_max: f64,
    pub samples: usize,
    pub path: PathSelect,
    pub xi_weight: f64,
    pub lambda_sign: LambdaSign,
    pub theta_model: ThetaModel,
    pub nmax: usize,
    pub kmax: usize,
}

impl RunConfig {
    pub fn echo(&self) -> ConfigEcho {
        let m = &self.model;
        ConfigEcho {
            tau: m.def.tau(),
            d: m.def.d(),
            c: m.def.c(),
            omega: m.las.omega,
            coupling: m.las.coupling,
            n_c: m.las.n_c,
            alpha: m.las.alpha_mag,
            theta: m.las.theta,
            couplings: m.cpl,
            t_start: self.grid.t_start(),
            t_max: self.grid.t_end(),
            samples: self.grid.samples(),
            path: self.path,
            xi_weight: self.fidelity.xi_weight,
            lambda_sign: self.fidelity.lambda_sign,
            theta_model: self.theta_model,
            nmax: self.truncation.polariton_cutoff(m.las.alpha_mag),
            kmax: self.truncation.exact_cutoff(m.las.alpha_mag),
        }
    }
}

/// Parses a JSON config document and applies `overrides` on top of it.
pub fn parse_config(bytes: &[u8], overrides: ConfigInput) -> Result<RunConfig, CliError> {
    resolve(read_config_input(bytes)?.merged(overrides))
}

/// Deserializes a config document without filling defaults. Blank input is
/// an empty config.
pub fn read_config_input(bytes: &[u8]) -> Result<ConfigInput, CliError> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Ok(ConfigInput::default());
    }
    serde_json::from_slice(bytes).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Fills defaults and validates, reporting every violation at once.
pub fn resolve(input: ConfigInput) -> Result<RunConfig, CliError> {
    let tau = input.tau.unwrap_or(0.2);
    let las = LaserParams {
        omega: input.omega.unwrap_or(1.0),
        coupling: input.coupling.unwrap_or(0.1),
        n_c: input.n_c.unwrap_or(1e5),
        alpha_mag: input.alpha.unwrap_or(0.5),
        theta: input.theta.unwrap_or(0.0),
    };
    let fidelity = FidelityOptions {
        xi_weight: input.xi_weight.unwrap_or(1.0),
        lambda_sign: input.lambda_sign.unwrap_or_default(),
    };

    let mut violations: Vec<Violation> = Vec::new();
    let def = match DeformationParams::new(tau) {
        Ok(d) => Some(d),
        Err(e) => {
            violations.extend(e.0);
            None
        }
    };
    if let Err(e) = validate(DeformationParams::undeformed(), las) {
        violations.extend(e.0);
    }
    let grid = TimeGrid::new(
        input.t_start.unwrap_or(0.0),
        input.t_max.unwrap_or(DEFAULT_T_MAX),
        input.samples.unwrap_or(DEFAULT_SAMPLES),
    );
    if let Err(e) = &grid {
        violations.extend(e.0.iter().copied());
    }
    let mut extra = Vec::new();
    if !fidelity.xi_weight.is_finite() {
        extra.push("xi_weight must be finite".to_string());
    }
    if input.nmax == Some(0) {
        extra.push("nmax must be at least 1".to_string());
    }
    if input.kmax == Some(0) {
        extra.push("kmax must be at least 1".to_string());
    }
    if input.workers == Some(0) {
        extra.push("workers must be at least 1".to_string());
    }
    if !violations.is_empty() || !extra.is_empty() {
        return Err(CliError::Validation {
            violations: ValidationError(violations),
            other: extra,
        });
    }

    let model = AtomLaser::new(def.expect("checked"), las).map_err(|e| CliError::Validation {
        violations: e,
        other: Vec::new(),
    })?;
    Ok(RunConfig {
        model,
        grid: grid.expect("checked"),
        path: input.path.unwrap_or_default(),
        fidelity,
        theta_model: input.theta_model.unwrap_or_default(),
        truncation: TruncationPolicy {
            nmax: input.nmax,
            kmax: input.kmax,
        },
        workers: input.workers,
        channel: input.channel.unwrap_or_else(|| "Q".to_string()),
        out: input.out,
        formats: input.format.unwrap_or_else(|| vec![Format::Csv]),
    })
}
