//! Polariton-path oracle.
//!
//! The initial coherent state is expanded in the (M, N) polariton number
//! basis and the field operator
//!
//! ```text
//! a(t) = (1/√2) [ M e^{−iΘ_M t} + N e^{−iΘ_N t} ]
//! ```
//!
//! is applied to it factor by factor, right to left. M, N, M† and N† act as
//! the truncated boson matrices would; the phase factors are diagonal since
//! Θ_M and Θ_N depend on the two number operators only. Expectations of
//! operator products are taken by applying each factor in written order, so
//! no closed-form scalar expression is reused.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::closed_form::{ThetaModel, ThetaPhaseCoeffs};
use crate::error::{Result, TruncationError};
use crate::model::{AtomLaser, ObservableRow, ObservableSeries, PathTag, SeriesMeta};
use crate::oracle::truncation::{bivariate_tail, DEFAULT_TAIL_TOLERANCE};
use crate::oscillator::DEFAULT_LEAK_TOLERANCE;
use crate::params::TimeGrid;

/// Truncated two-mode state, coefficients indexed by (m, n) row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    nmax: usize,
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl TwoModeState {
    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn dim(&self) -> usize {
        self.nmax + 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Probability mass excluded by the cutoff.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.coeffs[m * self.dim() + n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }

    fn zeroed_like(&self) -> Self {
        Self {
            nmax: self.nmax,
            coeffs: vec![Complex64::new(0.0, 0.0); self.coeffs.len()],
            tail_bound: self.tail_bound,
        }
    }

    fn inner(&self, other: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Coherent product state |μ⟩⊗|ν⟩ truncated at `nmax` per mode, with the
/// default 1e-12 bound on the excluded probability.
pub fn build_coherent_two_mode(
    mu: Complex64,
    nu: Complex64,
    nmax: usize,
) -> std::result::Result<TwoModeState, TruncationError> {
    build_coherent_two_mode_with_tolerance(mu, nu, nmax, DEFAULT_TAIL_TOLERANCE)
}

pub fn build_coherent_two_mode_with_tolerance(
    mu: Complex64,
    nu: Complex64,
    nmax: usize,
    tol: f64,
) -> std::result::Result<TwoModeState, TruncationError> {
    assert!(nmax >= 1, "nmax must be at least 1");
    let tail_bound = bivariate_tail(mu.norm_sqr(), nu.norm_sqr(), nmax);
    if tail_bound > tol {
        return Err(TruncationError::Insufficient {
            cutoff: nmax,
            tail_bound,
            tolerance: tol,
        });
    }
    let vm = coherent_amplitudes(mu, nmax);
    let vn = coherent_amplitudes(nu, nmax);
    let coeffs = vm
        .iter()
        .flat_map(|a| vn.iter().map(move |b| a * b))
        .collect();
    Ok(TwoModeState {
        nmax,
        coeffs,
        tail_bound,
    })
}

fn coherent_amplitudes(z: Complex64, nmax: usize) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(nmax + 1);
    let mut c = Complex64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
    v.push(c);
    for k in 1..=nmax {
        c = c * z / (k as f64).sqrt();
        v.push(c);
    }
    v
}

/// Initial state with both polariton modes coherent at α/√2.
pub fn initial_polariton_state(
    model: &AtomLaser,
    nmax: usize,
) -> std::result::Result<TwoModeState, TruncationError> {
    let half = model.las.alpha() / std::f64::consts::SQRT_2;
    build_coherent_two_mode(half, half, nmax)
}

#[derive(Clone, Copy)]
enum Mode {
    M,
    N,
}

/// The two-mode operator actions the oracle composes at one instant.
struct Ops {
    /// e^{−iΘ_M t} and e^{−iΘ_N t} on the (m, n) grid.
    phase_m: Vec<Complex64>,
    phase_n: Vec<Complex64>,
    leak_tol: f64,
}

impl Ops {
    fn new(coeffs: &ThetaPhaseCoeffs, t: f64, dim: usize) -> Self {
        let table = |theta: &dyn Fn(usize, usize) -> f64| {
            (0..dim * dim)
                .map(|i| Complex64::cis(-theta(i / dim, i % dim) * t))
                .collect()
        };
        Self {
            phase_m: table(&|m, n| coeffs.theta_m(m, n)),
            phase_n: table(&|m, n| coeffs.theta_n(m, n)),
            leak_tol: DEFAULT_LEAK_TOLERANCE,
        }
    }

    fn lower(&self, psi: &TwoModeState, mode: Mode) -> TwoModeState {
        let d = psi.dim();
        let mut out = psi.zeroed_like();
        for m in 0..d {
            for n in 0..d {
                let (src, k) = match mode {
                    Mode::M if m + 1 < d => ((m + 1) * d + n, m + 1),
                    Mode::N if n + 1 < d => (m * d + n + 1, n + 1),
                    _ => continue,
                };
                out.coeffs[m * d + n] = psi.coeffs[src] * (k as f64).sqrt();
            }
        }
        out
    }

    fn raise(
        &self,
        psi: &TwoModeState,
        mode: Mode,
    ) -> std::result::Result<TwoModeState, TruncationError> {
        let d = psi.dim();
        let top = (0..d)
            .map(|j| match mode {
                Mode::M => psi.coeffs[(d - 1) * d + j].norm(),
                Mode::N => psi.coeffs[j * d + d - 1].norm(),
            })
            .fold(0.0, f64::max);
        if top > self.leak_tol {
            return Err(TruncationError::Leak {
                level: d - 1,
                amplitude: top,
                tolerance: self.leak_tol,
            });
        }
        let mut out = psi.zeroed_like();
        for m in 0..d {
            for n in 0..d {
                let (dst, k) = match mode {
                    Mode::M if m + 1 < d => ((m + 1) * d + n, m + 1),
                    Mode::N if n + 1 < d => (m * d + n + 1, n + 1),
                    _ => continue,
                };
                out.coeffs[dst] = psi.coeffs[m * d + n] * (k as f64).sqrt();
            }
        }
        Ok(out)
    }

    /// Multiplies by e^{∓iΘt}; `adjoint` selects the conjugate phase.
    fn phase(&self, psi: &TwoModeState, mode: Mode, adjoint: bool) -> TwoModeState {
        let table = match mode {
            Mode::M => &self.phase_m,
            Mode::N => &self.phase_n,
        };
        let mut out = psi.clone();
        for (c, p) in out.coeffs.iter_mut().zip(table) {
            *c *= if adjoint { p.conj() } else { *p };
        }
        out
    }

    /// M(t)ψ = M e^{−iΘ_M t} ψ (or the N analogue).
    fn evolved_lower(&self, psi: &TwoModeState, mode: Mode) -> TwoModeState {
        self.lower(&self.phase(psi, mode, false), mode)
    }

    /// M(t)†ψ = e^{+iΘ_M t} M† ψ.
    fn evolved_raise(
        &self,
        psi: &TwoModeState,
        mode: Mode,
    ) -> std::result::Result<TwoModeState, TruncationError> {
        Ok(self.phase(&self.raise(psi, mode)?, mode, true))
    }

    fn field(&self, psi: &TwoModeState) -> TwoModeState {
        combine(
            &self.evolved_lower(psi, Mode::M),
            &self.evolved_lower(psi, Mode::N),
        )
    }

    fn field_dagger(
        &self,
        psi: &TwoModeState,
    ) -> std::result::Result<TwoModeState, TruncationError> {
        Ok(combine(
            &self.evolved_raise(psi, Mode::M)?,
            &self.evolved_raise(psi, Mode::N)?,
        ))
    }
}

/// (x + y)/√2
fn combine(x: &TwoModeState, y: &TwoModeState) -> TwoModeState {
    let mut out = x.clone();
    for (o, b) in out.coeffs.iter_mut().zip(&y.coeffs) {
        *o = (*o + b) * std::f64::consts::FRAC_1_SQRT_2;
    }
    out
}

/// All observables of a(t) in the fixed initial state.
pub fn polariton_observables(
    state: &TwoModeState,
    t: f64,
    coeffs: &ThetaPhaseCoeffs,
) -> std::result::Result<ObservableRow, TruncationError> {
    let ops = Ops::new(coeffs, t, state.dim());
    let a_psi = ops.field(state);
    let aa_psi = ops.field(&a_psi);
    let n_psi = ops.field_dagger(&a_psi)?;
    let nn_psi = ops.field_dagger(&ops.field(&n_psi))?;

    let a = state.inner(&a_psi);
    let a2 = state.inner(&aa_psi);
    let n = state.inner(&n_psi).re;
    let nn = state.inner(&nn_psi).re;
    Ok(ObservableRow::from_moments(t, a, n, nn, a2))
}

/// Diagnostics that should be time independent: ‖e^{−iΘ_M t}ψ‖²,
/// ⟨M(t)†M(t)⟩ and ⟨N(t)†N(t)⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonConserved {
    pub norm_sqr: f64,
    pub m_number: f64,
    pub n_number: f64,
}

pub fn polariton_conserved(
    state: &TwoModeState,
    t: f64,
    coeffs: &ThetaPhaseCoeffs,
) -> PolaritonConserved {
    let ops = Ops::new(coeffs, t, state.dim());
    PolaritonConserved {
        norm_sqr: ops.phase(state, Mode::M, false).norm_sqr(),
        m_number: ops.evolved_lower(state, Mode::M).norm_sqr(),
        n_number: ops.evolved_lower(state, Mode::N).norm_sqr(),
    }
}

/// ⟨[a(t), a†(t)]⟩; exactly 1 for a bosonic field operator.
pub fn field_commutator(
    state: &TwoModeState,
    t: f64,
    coeffs: &ThetaPhaseCoeffs,
) -> std::result::Result<f64, TruncationError> {
    let ops = Ops::new(coeffs, t, state.dim());
    let a_ad = ops.field(&ops.field_dagger(state)?);
    let ad_a = ops.field_dagger(&ops.field(state))?;
    Ok((state.inner(&a_ad) - state.inner(&ad_a)).re)
}

/// Oracle series over a grid, rows evaluated in parallel and kept in order.
pub fn polariton_series(
    grid: &TimeGrid,
    model: &AtomLaser,
    theta_model: ThetaModel,
    nmax: usize,
) -> Result<ObservableSeries> {
    let state = initial_polariton_state(model, nmax)?;
    let coeffs = ThetaPhaseCoeffs::new(model, theta_model);
    let rows = (0..grid.samples())
        .into_par_iter()
        .map(|i| polariton_observables(&state, grid.point(i), &coeffs))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(ObservableSeries {
        path: PathTag::Oracle,
        grid: *grid,
        model: *model,
        meta: SeriesMeta {
            nmax: Some(nmax),
            tail_bound: Some(state.tail_bound()),
            theta_model: Some(theta_model.to_string()),
            ..Default::default()
        },
        rows,
    })
}
