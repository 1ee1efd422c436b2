use atomlaser::closed_form::evaluate_series;
use atomlaser::oracle::{compare_paths, exact_series, polariton_series, DiscrepancyReport};
use atomlaser::ObservableSeries;

use crate::config::{PathSelect, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub series: Vec<ObservableSeries>,
    /// Present when `path = all`.
    pub report: Option<DiscrepancyReport>,
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Evaluates every path requested by `config` on its grid.
pub fn run(config: &RunConfig) -> Result<RunOutput, CliError> {
    with_workers(config.workers, || run_inner(config))?
}

fn run_inner(c: &RunConfig) -> Result<RunOutput, CliError> {
    let alpha = c.model.las.alpha_mag;
    match c.path {
        PathSelect::Closed => Ok(RunOutput {
            series: vec![evaluate_series(&c.grid, &c.model, &c.fidelity)],
            report: None,
        }),
        PathSelect::Oracle => {
            let nmax = c.truncation.polariton_cutoff(alpha);
            Ok(RunOutput {
                series: vec![polariton_series(&c.grid, &c.model, c.theta_model, nmax)?],
                report: None,
            })
        }
        PathSelect::Exact => {
            let kmax = c.truncation.exact_cutoff(alpha);
            Ok(RunOutput {
                series: vec![exact_series(&c.grid, &c.model, kmax)?],
                report: None,
            })
        }
        PathSelect::All => {
            let report = compare_paths(
                &c.grid,
                &c.model,
                &c.fidelity,
                c.theta_model,
                &c.truncation,
                true,
            )?;
            Ok(RunOutput {
                series: report.series.clone(),
                report: Some(report),
            })
        }
    }
}
