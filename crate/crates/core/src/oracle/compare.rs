//! Side-by-side evaluation of the closed-form and oracle paths.

use serde::{Deserialize, Serialize};

use crate::closed_form::{evaluate_series, FidelityOptions, ThetaModel};
use crate::error::Result;
use crate::model::{AtomLaser, ObservableRow, ObservableSeries, PathTag};
use crate::oracle::exact::exact_series;
use crate::oracle::polariton::polariton_series;
use crate::oracle::truncation::TruncationPolicy;
use crate::params::TimeGrid;

/// Observables compared, in report order.
pub const OBSERVABLES: [&str; 7] = ["a", "n", "nn", "a2", "Q", "S1", "S2"];

/// Deviation of one observable between two series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableDeviation {
    pub observable: String,
    /// Largest |reference − candidate| over the grid (modulus for complex values).
    pub max_abs: f64,
    pub t_at_max: f64,
    /// Deviation at the first grid point.
    pub at_start: f64,
    /// Grid points skipped because the value is undefined on either side.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathComparison {
    pub reference: PathTag,
    pub candidate: PathTag,
    pub deviations: Vec<ObservableDeviation>,
}

impl PathComparison {
    pub fn deviation(&self, observable: &str) -> Option<&ObservableDeviation> {
        self.deviations.iter().find(|d| d.observable == observable)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub model: AtomLaser,
    pub grid: TimeGrid,
    pub fidelity: FidelityOptions,
    pub theta_model: ThetaModel,
    pub nmax: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    pub polariton_tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_tail_bound: Option<f64>,
}

/// Closed-form vs oracle deviations, always produced in full even when the
/// paths agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub meta: ReportMeta,
    pub comparisons: Vec<PathComparison>,
    pub series: Vec<ObservableSeries>,
}

impl DiscrepancyReport {
    pub fn comparison(&self, reference: PathTag, candidate: PathTag) -> Option<&PathComparison> {
        self.comparisons
            .iter()
            .find(|c| c.reference == reference && c.candidate == candidate)
    }

    pub fn series(&self, path: PathTag) -> Option<&ObservableSeries> {
        self.series.iter().find(|s| s.path == path)
    }
}

fn observable_gap(a: &ObservableRow, b: &ObservableRow, name: &str) -> Option<f64> {
    match name {
        "a" => Some((a.a - b.a).norm()),
        "n" => Some((a.n - b.n).abs()),
        "nn" => Some((a.nn - b.nn).abs()),
        "a2" => Some((a.a2 - b.a2).norm()),
        "Q" => match (a.q, b.q) {
            (Some(x), Some(y)) => Some((x - y).abs()),
            (None, None) => Some(0.0),
            _ => None,
        },
        "S1" => Some((a.s1 - b.s1).abs()),
        "S2" => Some((a.s2 - b.s2).abs()),
        _ => unreachable!("unknown observable {name}"),
    }
}

/// Per-observable deviations of `candidate` from `reference` (same grid).
pub fn compare_series(
    reference: &ObservableSeries,
    candidate: &ObservableSeries,
) -> PathComparison {
    assert_eq!(
        reference.rows.len(),
        candidate.rows.len(),
        "series on different grids"
    );
    let deviations = OBSERVABLES
        .iter()
        .map(|&name| {
            let mut dev = ObservableDeviation {
                observable: name.to_string(),
                max_abs: 0.0,
                t_at_max: reference.rows[0].t,
                at_start: f64::NAN,
                skipped: 0,
            };
            for (i, (r, c)) in reference.rows.iter().zip(&candidate.rows).enumerate() {
                match observable_gap(r, c, name) {
                    Some(g) => {
                        if i == 0 {
                            dev.at_start = g;
                        }
                        if g > dev.max_abs {
                            dev.max_abs = g;
                            dev.t_at_max = r.t;
                        }
                    }
                    None => dev.skipped += 1,
                }
            }
            dev
        })
        .collect();
    PathComparison {
        reference: reference.path,
        candidate: candidate.path,
        deviations,
    }
}

/// Runs the closed-form path and the polariton oracle (and optionally the
/// exact path) on one grid and reports their deviations. Deviations are
/// never turned into errors here.
pub fn compare_paths(
    grid: &TimeGrid,
    model: &AtomLaser,
    opts: &FidelityOptions,
    theta_model: ThetaModel,
    policy: &TruncationPolicy,
    include_exact: bool,
) -> Result<DiscrepancyReport> {
    let nmax = policy.polariton_cutoff(model.las.alpha_mag);
    let closed = evaluate_series(grid, model, opts);
    let oracle = polariton_series(grid, model, theta_model, nmax)?;

    let mut comparisons = vec![compare_series(&oracle, &closed)];
    let mut series = vec![closed];
    let mut kmax = None;
    let mut exact_tail_bound = None;
    if include_exact {
        let k = policy.exact_cutoff(model.las.alpha_mag);
        let exact = exact_series(grid, model, k)?;
        comparisons.push(compare_series(&oracle, &exact));
        kmax = Some(k);
        exact_tail_bound = exact.meta.tail_bound;
        series.push(oracle.clone());
        series.push(exact);
    } else {
        series.push(oracle.clone());
    }

    Ok(DiscrepancyReport {
        meta: ReportMeta {
            model: *model,
            grid: *grid,
            fidelity: *opts,
            theta_model,
            nmax,
            kmax,
            polariton_tail_bound: oracle.meta.tail_bound.unwrap_or(0.0),
            exact_tail_bound,
        },
        comparisons,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{DeformationParams, LaserParams};

    fn fig2(xi_weight: f64) -> (AtomLaser, FidelityOptions) {
        let m = AtomLaser::new(
            DeformationParams::from_d(0.1).unwrap(),
            LaserParams {
                omega: 1.0,
                coupling: 0.2,
                n_c: 1e5,
                alpha_mag: 2.0,
                theta: 0.5,
            },
        )
        .unwrap();
        (
            m,
            FidelityOptions {
                xi_weight,
                ..Default::default()
            },
        )
    }

    #[test]
    fn vacuum_has_no_deviation() {
        let mut m = fig2(1.0).0;
        m.las.alpha_mag = 0.0;
        let grid = TimeGrid::new(0.0, 0.5, 11).unwrap();
        let r = compare_paths(
            &grid,
            &m,
            &FidelityOptions::default(),
            ThetaModel::Heisenberg,
            &TruncationPolicy::default(),
            true,
        )
        .unwrap();
        assert_eq!(r.comparisons.len(), 2);
        for c in &r.comparisons {
            for d in &c.deviations {
                assert_eq!(d.max_abs, 0.0, "{}", d.observable);
            }
        }
    }

    #[test]
    fn a2_start_deviation_pins_xi_weight() {
        let grid = TimeGrid::new(0.0, 0.05, 6).unwrap();
        let (m, opts) = fig2(1.0);
        let r = compare_paths(
            &grid,
            &m,
            &opts,
            ThetaModel::Heisenberg,
            &TruncationPolicy::default(),
            false,
        )
        .unwrap();
        let c = r.comparison(PathTag::Oracle, PathTag::ClosedForm).unwrap();
        assert!((c.deviation("a2").unwrap().at_start - 1.0).abs() < 1e-11);
        assert!(c.deviation("a").unwrap().at_start < 1e-11);

        let (m, opts) = fig2(2.0);
        let r = compare_paths(
            &grid,
            &m,
            &opts,
            ThetaModel::Heisenberg,
            &TruncationPolicy::default(),
            false,
        )
        .unwrap();
        let c = r.comparison(PathTag::Oracle, PathTag::ClosedForm).unwrap();
        assert!(c.deviation("a2").unwrap().at_start < 1e-11);
    }
}
