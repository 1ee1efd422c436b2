//! Exact dynamics of the deformed two-mode Hamiltonian
//!
//! ```text
//! H = ω[(C + D a†a) a†a + b†b] + Ω√N_c [a b† √(C + D a†a) + √(C + D a†a) a† b]
//! ```
//!
//! before any polariton approximation. H conserves K = n_a + n_b, so it is a
//! direct sum of (K+1)×(K+1) real symmetric blocks over |j, K−j⟩ (j photons,
//! K−j untrapped atoms). Each block is diagonalized once and states are
//! propagated exactly through the eigenbasis.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, TruncationError};
use crate::model::{AtomLaser, ObservableRow, ObservableSeries, PathTag, SeriesMeta};
use crate::oracle::truncation::{poisson_tail, DEFAULT_TAIL_TOLERANCE};
use crate::oscillator::f_of_n;
use crate::params::{DeformationParams, LaserParams, TimeGrid};

const HERMITICITY_TOL: f64 = 1e-12;

/// State on the excitation blocks K = 0..=kmax.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomFieldState {
    blocks: Vec<Vec<Complex64>>,
    tail_bound: f64,
}

impl AtomFieldState {
    pub fn kmax(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Amplitudes of block K, indexed by the photon number j.
    pub fn block(&self, k: usize) -> &[Complex64] {
        &self.blocks[k]
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn block_norm_sqr(&self, k: usize) -> f64 {
        self.blocks[k].iter().map(|z| z.norm_sqr()).sum()
    }

    /// ⟨n_a + n_b⟩
    pub fn total_excitation(&self) -> f64 {
        self.blocks
            .iter()
            .enumerate()
            .map(|(k, b)| k as f64 * b.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }
}

/// |α⟩_a ⊗ |0⟩_b truncated at `kmax` excitations.
pub fn initial_exact_state(
    las: &LaserParams,
    kmax: usize,
) -> std::result::Result<AtomFieldState, TruncationError> {
    let alpha = las.alpha();
    let tail_bound = poisson_tail(alpha.norm_sqr(), kmax);
    if tail_bound > DEFAULT_TAIL_TOLERANCE {
        return Err(TruncationError::Insufficient {
            cutoff: kmax,
            tail_bound,
            tolerance: DEFAULT_TAIL_TOLERANCE,
        });
    }
    let mut amp = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    let mut blocks = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        if k > 0 {
            amp = amp * alpha / (k as f64).sqrt();
        }
        let mut b = vec![Complex64::new(0.0, 0.0); k + 1];
        b[k] = amp;
        blocks.push(b);
    }
    Ok(AtomFieldState { blocks, tail_bound })
}

/// One Hermitian (real symmetric) block per total excitation K ≤ kmax.
pub fn exact_hamiltonian_blocks(
    def: &DeformationParams,
    las: &LaserParams,
    kmax: usize,
) -> Vec<DMatrix<f64>> {
    let g = las.collective_coupling();
    (0..=kmax)
        .map(|k| {
            let mut h = DMatrix::<f64>::zeros(k + 1, k + 1);
            for j in 0..=k {
                let jf = j as f64;
                h[(j, j)] = las.omega * ((def.c() + def.d() * jf) * jf + (k - j) as f64);
                if j >= 1 {
                    // ⟨j, K−j| √(C+Da†a) a† b |j−1, K−j+1⟩
                    let x = g * (jf * (k - j + 1) as f64).sqrt() * f_of_n(j, def);
                    h[(j, j - 1)] = x;
                    h[(j - 1, j)] = x;
                }
            }
            let asym = (&h - h.transpose()).amax();
            assert!(asym <= HERMITICITY_TOL, "block {k} not Hermitian: {asym:e}");
            h
        })
        .collect()
}

/// Precomputed eigendecomposition of every block plus the initial state.
pub struct ExactEvolver {
    blocks: Vec<DMatrix<f64>>,
    eigen: Vec<SymmetricEigen<f64, nalgebra::Dyn>>,
    initial: AtomFieldState,
    /// Initial state expressed in each block's eigenbasis.
    initial_eig: Vec<Vec<Complex64>>,
}

impl ExactEvolver {
    pub fn new(model: &AtomLaser, kmax: usize) -> std::result::Result<Self, TruncationError> {
        let initial = initial_exact_state(&model.las, kmax)?;
        let blocks = exact_hamiltonian_blocks(&model.def, &model.las, kmax);
        let eigen: Vec<_> = blocks.iter().map(|h| h.clone().symmetric_eigen()).collect();
        let initial_eig = eigen
            .iter()
            .zip(&initial.blocks)
            .map(|(e, c)| {
                let v = &e.eigenvectors;
                (0..v.ncols())
                    .map(|col| (0..v.nrows()).map(|row| v[(row, col)] * c[row]).sum())
                    .collect()
            })
            .collect();
        Ok(Self {
            blocks,
            eigen,
            initial,
            initial_eig,
        })
    }

    pub fn kmax(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn initial(&self) -> &AtomFieldState {
        &self.initial
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    /// e^{−iHt} applied block by block.
    pub fn evolve(&self, t: f64) -> AtomFieldState {
        let blocks = self
            .eigen
            .iter()
            .zip(&self.initial_eig)
            .map(|(e, c0)| {
                let v = &e.eigenvectors;
                let rotated: Vec<Complex64> = c0
                    .iter()
                    .zip(e.eigenvalues.iter())
                    .map(|(c, &ev)| c * Complex64::cis(-ev * t))
                    .collect();
                (0..v.nrows())
                    .map(|row| (0..v.ncols()).map(|col| v[(row, col)] * rotated[col]).sum())
                    .collect()
            })
            .collect();
        AtomFieldState {
            blocks,
            tail_bound: self.initial.tail_bound,
        }
    }

    /// ⟨H⟩ from the block matrices directly (not via the eigenvalues).
    pub fn energy(&self, state: &AtomFieldState) -> f64 {
        self.blocks
            .iter()
            .zip(&state.blocks)
            .map(|(h, c)| {
                let n = c.len();
                let mut e = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        e += c[i].conj() * h[(i, j)] * c[j];
                    }
                }
                e.re
            })
            .sum()
    }
}

/// Evolves the initial state of `model` to time `t`.
pub fn exact_evolve(
    model: &AtomLaser,
    kmax: usize,
    t: f64,
) -> std::result::Result<AtomFieldState, TruncationError> {
    Ok(ExactEvolver::new(model, kmax)?.evolve(t))
}

/// Field observables of an exact state. ⟨a⟩ and ⟨a²⟩ connect blocks K and
/// K−1, K−2; the number moments are block diagonal.
pub fn exact_observables(t: f64, state: &AtomFieldState) -> ObservableRow {
    let mut a = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n = 0.0;
    let mut nn = 0.0;
    for (k, c) in state.blocks.iter().enumerate() {
        for (j, z) in c.iter().enumerate() {
            let jf = j as f64;
            let p = z.norm_sqr();
            n += jf * p;
            nn += jf * jf * p;
            if j >= 1 {
                // a|j, K−j⟩ = √j |j−1, K−j⟩ in block K−1
                a += state.blocks[k - 1][j - 1].conj() * jf.sqrt() * z;
            }
            if j >= 2 {
                a2 += state.blocks[k - 2][j - 2].conj() * (jf * (jf - 1.0)).sqrt() * z;
            }
        }
    }
    ObservableRow::from_moments(t, a, n, nn, a2)
}

pub fn exact_series(grid: &TimeGrid, model: &AtomLaser, kmax: usize) -> Result<ObservableSeries> {
    let evolver = ExactEvolver::new(model, kmax)?;
    let rows = (0..grid.samples())
        .into_par_iter()
        .map(|i| {
            let t = grid.point(i);
            exact_observables(t, &evolver.evolve(t))
        })
        .collect();
    Ok(ObservableSeries {
        path: PathTag::Exact,
        grid: *grid,
        model: *model,
        meta: SeriesMeta {
            kmax: Some(kmax),
            tail_bound: Some(evolver.initial().tail_bound()),
            ..Default::default()
        },
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::truncation::default_cutoff;

    fn model(d: f64, coupling: f64, alpha_mag: f64, theta: f64) -> AtomLaser {
        AtomLaser::new(
            DeformationParams::from_d(d).unwrap(),
            LaserParams {
                omega: 1.0,
                coupling,
                n_c: 1e5,
                alpha_mag,
                theta,
            },
        )
        .unwrap()
    }

    #[test]
    fn small_blocks() {
        let m = model(0.0, 0.1, 0.5, 0.0);
        let g = m.las.collective_coupling();
        let b = exact_hamiltonian_blocks(&m.def, &m.las, 2);
        assert_eq!(b[0], DMatrix::from_element(1, 1, 0.0));
        assert_eq!(b[1], DMatrix::from_row_slice(2, 2, &[1.0, g, g, 1.0]));
    }

    #[test]
    fn k2_block_deformed() {
        // hand-built from the matrix elements of the deformed Hamiltonian
        let m = model(0.1, 0.1, 0.5, 0.0);
        let g = m.las.collective_coupling();
        let (c, d) = (1.1, 0.1);
        let f1 = (c + d * 1.0f64).sqrt();
        let f2 = (c + d * 2.0f64).sqrt();
        let expect = DMatrix::from_row_slice(
            3,
            3,
            &[
                2.0,
                g * 2f64.sqrt() * f1,
                0.0,
                g * 2f64.sqrt() * f1,
                c + d + 1.0,
                g * 2f64.sqrt() * f2,
                0.0,
                g * 2f64.sqrt() * f2,
                2.0 * (c + 2.0 * d),
            ],
        );
        let b = &exact_hamiltonian_blocks(&m.def, &m.las, 2)[2];
        assert!((b - expect).amax() < 1e-12);
    }

    #[test]
    fn t0_returns_initial() {
        let m = model(0.1, 0.2, 2.0, 0.5);
        let ev = ExactEvolver::new(&m, default_cutoff(4.0)).unwrap();
        let s = ev.evolve(0.0);
        for k in 0..=ev.kmax() {
            for (x, y) in s.block(k).iter().zip(ev.initial().block(k)) {
                assert!((x - y).norm() < 1e-12);
            }
        }
        let r = exact_observables(0.0, &s);
        let alpha = m.las.alpha();
        assert!((r.a - alpha).norm() < 1e-11);
        assert!((r.n - 4.0).abs() < 1e-11);
        assert!((r.nn - 20.0).abs() < 1e-11);
        assert!((r.a2 - alpha * alpha).norm() < 1e-11);
    }

    #[test]
    fn undeformed_full_transfer() {
        let m = model(0.0, 0.1, 0.5, 0.0);
        let g = m.las.collective_coupling();
        let t = std::f64::consts::PI / (2.0 * g);
        let r = exact_observables(t, &exact_evolve(&m, 25, t).unwrap());
        assert!(r.n.abs() < 1e-10);
    }

    #[test]
    fn vacuum_observables() {
        let m = model(0.1, 0.1, 0.0, 0.0);
        let r = exact_observables(0.3, &exact_evolve(&m, 3, 0.3).unwrap());
        assert_eq!(r.n, 0.0);
        assert_eq!(r.a, Complex64::new(0.0, 0.0));
        assert_eq!(r.q, None);
    }

    #[test]
    fn conservation_laws() {
        let m = model(0.1, 0.2, 2.0, 0.5);
        let ev = ExactEvolver::new(&m, default_cutoff(4.0)).unwrap();
        let s0 = ev.initial();
        let (n0, k0, e0) = (s0.norm_sqr(), s0.total_excitation(), ev.energy(s0));
        for i in 1..20 {
            let s = ev.evolve(i as f64 * 0.05);
            assert!((s.norm_sqr() - n0).abs() < 1e-10);
            assert!((s.total_excitation() - k0).abs() < 1e-10);
            assert!((ev.energy(&s) - e0).abs() < 1e-9);
            for k in 0..=ev.kmax() {
                assert!((s.block_norm_sqr(k) - s0.block_norm_sqr(k)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn short_cutoff_rejected() {
        let m = model(0.1, 0.2, 2.0, 0.5);
        assert!(matches!(
            ExactEvolver::new(&m, 8),
            Err(TruncationError::Insufficient { cutoff: 8, .. })
        ));
    }
}
