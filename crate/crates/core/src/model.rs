//! A validated parameter set bundled with its derived couplings, plus the
//! per-time observable rows every evaluation path produces.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::params::{
    derive_couplings, validate, DeformationParams, DerivedCouplings, LaserParams, TimeGrid,
    ValidationError,
};

/// Below this mean photon number the Mandel parameter is reported as undefined.
pub const MANDEL_DENOMINATOR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomLaser {
    pub def: DeformationParams,
    pub las: LaserParams,
    pub cpl: DerivedCouplings,
}

impl AtomLaser {
    pub fn new(def: DeformationParams, las: LaserParams) -> Result<Self, ValidationError> {
        let (def, las) = validate(def, las)?;
        Ok(Self {
            def,
            las,
            cpl: derive_couplings(&def, &las),
        })
    }

    /// The common phase rate (ω/2)(C+D+1) shared by Θ_M and Θ_N.
    pub fn base_frequency(&self) -> f64 {
        self.las.omega / 2.0 * (self.def.c() + self.def.d() + 1.0)
    }
}

/// Which computation produced a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathTag {
    ClosedForm,
    Oracle,
    Exact,
}

impl PathTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathTag::ClosedForm => "closed_form",
            PathTag::Oracle => "oracle",
            PathTag::Exact => "exact",
        }
    }
}

impl fmt::Display for PathTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// All observables at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRow {
    pub t: f64,
    /// ⟨a⟩
    pub a: Complex64,
    /// ⟨a†a⟩
    pub n: f64,
    /// ⟨(a†a)²⟩
    pub nn: f64,
    /// ⟨a²⟩
    pub a2: Complex64,
    /// Mandel Q, `None` where ⟨a†a⟩ is below [`MANDEL_DENOMINATOR_FLOOR`].
    pub q: Option<f64>,
    pub s1: f64,
    pub s2: f64,
}

impl ObservableRow {
    /// Assembles Q, S₁ and S₂ from the four primitive expectations.
    pub fn from_moments(t: f64, a: Complex64, n: f64, nn: f64, a2: Complex64) -> Self {
        let (s1, s2) = squeezing_pair(n, a2.re, (a * a).re, a.norm_sqr());
        Self {
            t,
            a,
            n,
            nn,
            a2,
            q: mandel(n, nn),
            s1,
            s2,
        }
    }
}

/// `Q = (⟨(a†a)²⟩ − ⟨a†a⟩²)/⟨a†a⟩ − 1`.
pub fn mandel(n: f64, nn: f64) -> Option<f64> {
    if n < MANDEL_DENOMINATOR_FLOOR {
        None
    } else {
        Some((nn - n * n) / n - 1.0)
    }
}

/// `S₁ = 2{n + Re⟨a²⟩ − Re⟨a⟩² − |⟨a⟩|²}`, `S₂` with the two real parts flipped.
pub fn squeezing_pair(n: f64, re_a2: f64, re_a_squared: f64, abs_a_sq: f64) -> (f64, f64) {
    (
        2.0 * (n + re_a2 - re_a_squared - abs_a_sq),
        2.0 * (n - re_a2 + re_a_squared - abs_a_sq),
    )
}

/// Extra knobs that were resolved while building a series, echoed into outputs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_sign: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_model: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub path: PathTag,
    pub grid: TimeGrid,
    pub model: AtomLaser,
    pub meta: SeriesMeta,
    pub rows: Vec<ObservableRow>,
}
