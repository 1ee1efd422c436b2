//! The three reference parameter sets rendered as CSV + SVG artifacts.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use atomlaser::closed_form::evaluate_series;
use atomlaser::oracle::polariton_series;
use serde::Serialize;

use crate::config::{resolve, ConfigEcho, ConfigInput, PathSelect, RunConfig};
use crate::csv_io::emit_csv;
use crate::error::CliError;
use crate::run::with_workers;
use crate::svg::emit_svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// |α| = 0.5, Ω = 0.1, D = 0.1; Mandel Q.
    Fig1a,
    /// As `Fig1a` with D = 0.4.
    Fig1b,
    /// |α| = 2, Ω = 0.2, D = 0.1, θ = 0.5; S₁ and S₂.
    Fig2,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig1a, Figure::Fig1b, Figure::Fig2];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig2 => "fig2",
        }
    }

    pub fn channels(self) -> &'static [&'static str] {
        match self {
            Figure::Fig1a | Figure::Fig1b => &["Q"],
            Figure::Fig2 => &["S1", "S2"],
        }
    }

    /// Physical parameters of the figure on top of `base`, which may still
    /// set the window, fidelity options, truncation and worker count.
    pub fn config(self, base: ConfigInput) -> Result<RunConfig, CliError> {
        let (d, coupling, alpha, theta) = match self {
            Figure::Fig1a => (0.1, 0.1, 0.5, 0.0),
            Figure::Fig1b => (0.4, 0.1, 0.5, 0.0),
            Figure::Fig2 => (0.1, 0.2, 2.0, 0.5),
        };
        resolve(ConfigInput {
            tau: Some(2.0 * d),
            omega: Some(1.0),
            coupling: Some(coupling),
            n_c: Some(1e5),
            alpha: Some(alpha),
            theta: Some(theta),
            path: Some(PathSelect::Closed),
            ..base
        })
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig1a" => Ok(Figure::Fig1a),
            "fig1b" => Ok(Figure::Fig1b),
            "fig2" => Ok(Figure::Fig2),
            other => Err(format!(
                "unknown figure `{other}` (expected fig1a|fig1b|fig2)"
            )),
        }
    }
}

#[derive(Serialize)]
struct FigureEcho<'a> {
    figure: Figure,
    channels: &'a [&'a str],
    oracle_overlay: bool,
    config: ConfigEcho,
}

/// In-memory artifacts of one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureArtifacts {
    pub figure: Figure,
    pub series: Vec<atomlaser::ObservableSeries>,
    /// (file name, bytes), in write order.
    pub files: Vec<(String, Vec<u8>)>,
}

/// Runs the closed-form path (and the polariton oracle when `overlay`) for
/// each figure and renders `<name>.csv`, `<name>_<channel>.svg` and the
/// `<name>.json` parameter echo.
pub fn reproduce_figures(
    which: &[Figure],
    overlay: bool,
    base: &ConfigInput,
) -> Result<Vec<FigureArtifacts>, CliError> {
    which
        .iter()
        .map(|&fig| {
            let cfg = fig.config(base.clone())?;
            let series = with_workers(cfg.workers, || -> Result<_, CliError> {
                let mut v = vec![evaluate_series(&cfg.grid, &cfg.model, &cfg.fidelity)];
                if overlay {
                    let nmax = cfg.truncation.polariton_cutoff(cfg.model.las.alpha_mag);
                    v.push(polariton_series(
                        &cfg.grid,
                        &cfg.model,
                        cfg.theta_model,
                        nmax,
                    )?);
                }
                Ok(v)
            })??;
            let mut files = vec![(format!("{}.csv", fig.name()), emit_csv(&series))];
            for ch in fig.channels() {
                files.push((
                    format!("{}_{}.svg", fig.name(), ch.to_lowercase()),
                    emit_svg(&series, ch)?,
                ));
            }
            let echo = FigureEcho {
                figure: fig,
                channels: fig.channels(),
                oracle_overlay: overlay,
                config: cfg.echo(),
            };
            let mut json = serde_json::to_vec_pretty(&echo).expect("serializable");
            json.push(b'\n');
            files.push((format!("{}.json", fig.name()), json));
            Ok(FigureArtifacts {
                figure: fig,
                series,
                files,
            })
        })
        .collect()
}

pub fn write_files(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    files
        .iter()
        .map(|(name, bytes)| {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(path)
        })
        .collect()
}
