//! Minimal-length deformed atom laser.
//!
//! The radiation field of a two-mode atom laser is replaced by an f-deformed
//! oscillator with `f(n) = sqrt(c + d n)`. This crate provides
//!
//! * [`params`]: model parameters and the derived couplings α₁, α₂, α₃,
//! * [`oscillator`]: the deformed ladder algebra on Fock vectors,
//! * [`closed_form`]: the analytic quantum statistics (⟨a⟩, ⟨a†a⟩,
//!   ⟨(a†a)²⟩, ⟨a²⟩, Mandel Q, quadrature squeezing S₁/S₂),
//! * [`oracle`]: truncated Fock-space evaluations used as ground truth and
//!   the report comparing them with the closed forms.

pub mod closed_form;
pub mod error;
pub mod model;
pub mod oracle;
pub mod oscillator;
pub mod params;

pub use closed_form::{FidelityOptions, LambdaSign, ThetaModel, ThetaPhaseCoeffs};
pub use error::{Error, Result, TruncationError};
pub use model::{AtomLaser, ObservableRow, ObservableSeries, PathTag, SeriesMeta};
pub use params::{DeformationParams, DerivedCouplings, LaserParams, TimeGrid, ValidationError};
