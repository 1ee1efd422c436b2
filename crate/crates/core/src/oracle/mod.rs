//! Truncated Fock-space ground truth for the closed-form observables.
//!
//! Two independent routes: the polariton oracle evaluates the diagonal
//! polariton solution on an explicit two-mode state, and the exact path
//! evolves the deformed two-mode Hamiltonian without the polariton
//! approximation.

pub mod compare;
pub mod exact;
pub mod polariton;
pub mod truncation;

pub use compare::{
    compare_paths, compare_series, DiscrepancyReport, ObservableDeviation, PathComparison,
};
pub use exact::{
    exact_evolve, exact_hamiltonian_blocks, exact_observables, exact_series, AtomFieldState,
    ExactEvolver,
};
pub use polariton::{
    build_coherent_two_mode, field_commutator, polariton_conserved, polariton_observables,
    polariton_series, TwoModeState,
};
pub use truncation::{default_cutoff, TruncationPolicy};
