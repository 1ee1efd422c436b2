//! Model parameters, derived couplings and the simulation time grid.
//!
//! All quantities use units with ħ = 1. The deformation is specified through
//! `tau` alone; `d = tau/2` and `c = 1 + d` are always derived from it.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parameter field names, used when reporting validation failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Tau,
    Omega,
    Coupling,
    CondensateAtoms,
    AlphaMag,
    Theta,
    TStart,
    TEnd,
    Samples,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Field::Tau => "tau",
            Field::Omega => "omega",
            Field::Coupling => "Omega (coupling)",
            Field::CondensateAtoms => "Nc",
            Field::AlphaMag => "|alpha|",
            Field::Theta => "theta",
            Field::TStart => "t_start",
            Field::TEnd => "t_end",
            Field::Samples => "samples",
        };
        f.write_str(s)
    }
}

/// A single violated parameter invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NonPositive(Field),
    Negative(Field),
    NonFinite(Field),
    /// Time window end not after its start.
    EmptyWindow,
    TooFewSamples,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositive(x) => write!(f, "{x} must be > 0"),
            Violation::Negative(x) => write!(f, "{x} must be >= 0"),
            Violation::NonFinite(x) => write!(f, "{x} must be finite"),
            Violation::EmptyWindow => f.write_str("t_end must be greater than t_start"),
            Violation::TooFewSamples => f.write_str("samples must be at least 2"),
        }
    }
}

/// Every violation found while validating, not only the first.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid parameters: {}", list(.0))]
pub struct ValidationError(pub Vec<Violation>);

fn list(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Deformation strength of the minimal-length oscillator, f(n) = sqrt(c + d n).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDeformation", into = "RawDeformation")]
pub struct DeformationParams {
    tau: f64,
    d: f64,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct RawDeformation {
    tau: f64,
}

impl TryFrom<RawDeformation> for DeformationParams {
    type Error = ValidationError;
    fn try_from(raw: RawDeformation) -> Result<Self, Self::Error> {
        DeformationParams::new(raw.tau)
    }
}

impl From<DeformationParams> for RawDeformation {
    fn from(p: DeformationParams) -> Self {
        RawDeformation { tau: p.tau }
    }
}

impl DeformationParams {
    pub fn new(tau: f64) -> Result<Self, ValidationError> {
        let mut v = Vec::new();
        check_nonneg(tau, Field::Tau, &mut v);
        if !v.is_empty() {
            return Err(ValidationError(v));
        }
        Ok(Self::unchecked(tau))
    }

    /// Builds from `d = tau/2`, the form most plots are labelled with.
    pub fn from_d(d: f64) -> Result<Self, ValidationError> {
        Self::new(2.0 * d)
    }

    /// The undeformed (standard boson) limit.
    pub fn undeformed() -> Self {
        Self::unchecked(0.0)
    }

    fn unchecked(tau: f64) -> Self {
        let d = tau / 2.0;
        Self { tau, d, c: 1.0 + d }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Physical inputs of the two-mode atom laser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserParams {
    /// Common mode frequency ω.
    pub omega: f64,
    /// Coupling matrix element Ω.
    pub coupling: f64,
    /// Condensate atom number N_c (only its square root enters).
    pub n_c: f64,
    /// Coherent amplitude modulus |α|.
    pub alpha_mag: f64,
    /// Coherent phase θ in radians.
    pub theta: f64,
}

impl LaserParams {
    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.alpha_mag, self.theta)
    }

    /// Collective coupling Ω√N_c.
    pub fn collective_coupling(&self) -> f64 {
        self.coupling * self.n_c.sqrt()
    }
}

fn check_nonneg(x: f64, field: Field, v: &mut Vec<Violation>) {
    if !x.is_finite() {
        v.push(Violation::NonFinite(field));
    } else if x < 0.0 {
        v.push(Violation::Negative(field));
    }
}

fn check_positive(x: f64, field: Field, v: &mut Vec<Violation>) {
    if !x.is_finite() {
        v.push(Violation::NonFinite(field));
    } else if x <= 0.0 {
        v.push(Violation::NonPositive(field));
    }
}

/// Checks every invariant of the pair and returns it unchanged when all hold.
pub fn validate(
    def: DeformationParams,
    las: LaserParams,
) -> Result<(DeformationParams, LaserParams), ValidationError> {
    let mut v = Vec::new();
    check_nonneg(def.tau, Field::Tau, &mut v);
    check_positive(las.omega, Field::Omega, &mut v);
    check_nonneg(las.coupling, Field::Coupling, &mut v);
    check_positive(las.n_c, Field::CondensateAtoms, &mut v);
    check_nonneg(las.alpha_mag, Field::AlphaMag, &mut v);
    if !las.theta.is_finite() {
        v.push(Violation::NonFinite(Field::Theta));
    }
    if v.is_empty() {
        Ok((def, las))
    } else {
        Err(ValidationError(v))
    }
}

/// The three couplings α₁, α₂, α₃ entering every time-dependent formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedCouplings {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

pub fn derive_couplings(def: &DeformationParams, las: &LaserParams) -> DerivedCouplings {
    let g = las.collective_coupling();
    let sqrt_c = def.c.sqrt();
    let alpha1 = las.coupling * def.d * las.n_c.sqrt() / (2.0 * sqrt_c);
    let alpha2 = las.omega * def.d / 2.0;
    let alpha3 = alpha1 + g * (2.0 + sqrt_c);
    DerivedCouplings {
        alpha1,
        alpha2,
        alpha3,
    }
}

/// Uniform time grid with at least two samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    samples: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, samples: usize) -> Result<Self, ValidationError> {
        let mut v = Vec::new();
        check_nonneg(t_start, Field::TStart, &mut v);
        if !t_end.is_finite() {
            v.push(Violation::NonFinite(Field::TEnd));
        } else if t_start.is_finite() && t_end <= t_start {
            v.push(Violation::EmptyWindow);
        }
        if samples < 2 {
            v.push(Violation::TooFewSamples);
        }
        if v.is_empty() {
            Ok(Self {
                t_start,
                t_end,
                samples,
            })
        } else {
            Err(ValidationError(v))
        }
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / (self.samples - 1) as f64
    }

    /// The i-th grid point; the last index returns `t_end` exactly.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.samples {
            self.t_end
        } else {
            self.t_start + self.step() * i as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.samples).map(|i| self.point(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn laser(coupling: f64) -> LaserParams {
        LaserParams {
            omega: 1.0,
            coupling,
            n_c: 1e5,
            alpha_mag: 0.5,
            theta: 0.0,
        }
    }

    #[test]
    fn couplings_undeformed() {
        let c = derive_couplings(&DeformationParams::undeformed(), &laser(0.1));
        assert_eq!(c.alpha1, 0.0);
        assert_eq!(c.alpha2, 0.0);
        assert_relative_eq!(c.alpha3, 3.0 * 0.1 * 1e5f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(c.alpha3, 94.8683298, epsilon = 1e-7);
    }

    #[test]
    fn couplings_fig1_sets() {
        // values from direct arithmetic in the golden script
        let c = derive_couplings(&DeformationParams::from_d(0.1).unwrap(), &laser(0.1));
        assert_relative_eq!(c.alpha1, 1.507556722888818, max_relative = 1e-14);
        assert_relative_eq!(c.alpha2, 0.05, max_relative = 1e-15);
        assert_relative_eq!(c.alpha3, 97.91935782981042, max_relative = 1e-14);

        let c = derive_couplings(&DeformationParams::from_d(0.4).unwrap(), &laser(0.1));
        assert_relative_eq!(c.alpha1, 5.345224838248488, max_relative = 1e-14);
        assert_relative_eq!(c.alpha2, 0.2, max_relative = 1e-15);
        assert_relative_eq!(c.alpha3, 106.0073519093555, max_relative = 1e-14);
    }

    #[test]
    fn validate_accepts_fig1_params() {
        let def = DeformationParams::new(0.2).unwrap();
        assert!(validate(def, laser(0.1)).is_ok());
    }

    #[test]
    fn validate_reports_every_violation() {
        let las = LaserParams {
            omega: 0.0,
            coupling: -1.0,
            n_c: f64::NAN,
            alpha_mag: -0.5,
            theta: 0.0,
        };
        let err = validate(DeformationParams::undeformed(), las).unwrap_err();
        assert_eq!(
            err.0,
            vec![
                Violation::NonPositive(Field::Omega),
                Violation::Negative(Field::Coupling),
                Violation::NonFinite(Field::CondensateAtoms),
                Violation::Negative(Field::AlphaMag),
            ]
        );
    }

    #[test]
    fn negative_tau_rejected() {
        let err = DeformationParams::new(-0.1).unwrap_err();
        assert_eq!(err.0, vec![Violation::Negative(Field::Tau)]);
    }

    #[test]
    fn deformation_relations_exact() {
        let p = DeformationParams::new(0.8).unwrap();
        assert_eq!(p.d(), 0.4);
        assert_eq!(p.c(), 1.4);
    }

    #[test]
    fn grid_endpoints_and_rejections() {
        let g = TimeGrid::new(0.0, 1.0, 3).unwrap();
        assert_eq!(g.points(), vec![0.0, 0.5, 1.0]);
        assert!(TimeGrid::new(0.0, 0.0, 2).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(-1.0, 1.0, 5).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn tau_d_round_trip(tau in 0.0f64..10.0) {
                let a = DeformationParams::new(tau).unwrap();
                let b = DeformationParams::from_d(a.d()).unwrap();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn couplings_increase_with_d(d in 1e-3f64..2.0, step in 1e-3f64..0.5) {
                let las = laser(0.1);
                let lo = derive_couplings(&DeformationParams::from_d(d).unwrap(), &las);
                let hi = derive_couplings(&DeformationParams::from_d(d + step).unwrap(), &las);
                prop_assert!(hi.alpha1 > lo.alpha1);
                prop_assert!(hi.alpha2 > lo.alpha2);
            }

            #[test]
            fn alpha3_minus_alpha1(tau in 0.0f64..4.0, coupling in 0.0f64..1.0, nc in 1.0f64..1e6) {
                let def = DeformationParams::new(tau).unwrap();
                let las = LaserParams { omega: 1.0, coupling, n_c: nc, alpha_mag: 1.0, theta: 0.0 };
                let c = derive_couplings(&def, &las);
                let expect = coupling * nc.sqrt() * (2.0 + def.c().sqrt());
                prop_assert!((c.alpha3 - c.alpha1 - expect).abs() <= 1e-12 * expect.max(1.0));
            }
        }
    }
}
