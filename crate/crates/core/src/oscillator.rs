//! The f-deformed ladder algebra on a truncated Fock space.
//!
//! `A|n⟩ = √n f(n)|n−1⟩` and `A†|n⟩ = √(n+1) f(n+1)|n+1⟩` with
//! `f(n) = √(c + d n)`. Operators act on vectors directly; nothing here
//! materializes a matrix.

use num_complex::Complex64;

use crate::error::TruncationError;
use crate::params::DeformationParams;

/// Default bound on the top coefficient before raising is refused.
pub const DEFAULT_LEAK_TOLERANCE: f64 = 1e-10;

const NORMALIZED_TOL: f64 = 1e-12;

pub fn f_of_n(n: usize, def: &DeformationParams) -> f64 {
    (def.c() + def.d() * n as f64).sqrt()
}

/// Oscillator level `n f²(n)` in units of ħω.
pub fn spectrum_level(n: usize, def: &DeformationParams) -> f64 {
    let n = n as f64;
    n * (def.c() + def.d() * n)
}

/// Superposition of number states `|0⟩..|nmax⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coeffs: Vec<Complex64>,
    normalized: bool,
}

impl FockVector {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a Fock vector needs at least |0>");
        let normalized = (norm_sqr(&coeffs) - 1.0).abs() <= NORMALIZED_TOL;
        Self { coeffs, normalized }
    }

    pub fn zeros(nmax: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); nmax + 1])
    }

    /// The number state `|n⟩` truncated at `nmax`.
    pub fn basis(n: usize, nmax: usize) -> Self {
        assert!(n <= nmax);
        let mut v = vec![Complex64::new(0.0, 0.0); nmax + 1];
        v[n] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn nmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.coeffs)
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn norm_sqr(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies the deformed annihilator `A`. Nothing flows into `nmax`.
pub fn apply_lowering(v: &FockVector, def: &DeformationParams) -> FockVector {
    let mut out = vec![Complex64::new(0.0, 0.0); v.coeffs.len()];
    for n in 1..v.coeffs.len() {
        out[n - 1] = v.coeffs[n] * ((n as f64).sqrt() * f_of_n(n, def));
    }
    FockVector::new(out)
}

/// Applies the deformed creator `A†` with the default leak tolerance.
pub fn apply_raising(
    v: &FockVector,
    def: &DeformationParams,
) -> Result<FockVector, TruncationError> {
    apply_raising_with_tolerance(v, def, DEFAULT_LEAK_TOLERANCE)
}

/// Applies `A†`, refusing when the top coefficient would be pushed out of
/// the truncated space with magnitude above `tol`.
pub fn apply_raising_with_tolerance(
    v: &FockVector,
    def: &DeformationParams,
    tol: f64,
) -> Result<FockVector, TruncationError> {
    let top = v.coeffs[v.nmax()].norm();
    if top > tol {
        return Err(TruncationError::Leak {
            level: v.nmax(),
            amplitude: top,
            tolerance: tol,
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); v.coeffs.len()];
    for n in 0..v.nmax() {
        out[n + 1] = v.coeffs[n] * (((n + 1) as f64).sqrt() * f_of_n(n + 1, def));
    }
    Ok(FockVector::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn d(x: f64) -> DeformationParams {
        DeformationParams::from_d(x).unwrap()
    }

    #[test]
    fn f_values() {
        assert_eq!(f_of_n(0, &DeformationParams::undeformed()), 1.0);
        assert_relative_eq!(f_of_n(1, &d(0.1)), 1.2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(f_of_n(1, &d(0.1)), 1.0954451, epsilon = 1e-7);
        assert_relative_eq!(f_of_n(5, &d(0.4)), 1.8439089, epsilon = 1e-7);
    }

    #[test]
    fn spectrum_values() {
        assert_eq!(spectrum_level(0, &d(0.4)), 0.0);
        assert_eq!(spectrum_level(1, &DeformationParams::undeformed()), 1.0);
        assert_relative_eq!(spectrum_level(3, &d(0.1)), 4.2, max_relative = 1e-15);
    }

    #[test]
    fn lowering_vacuum_is_zero() {
        let out = apply_lowering(&FockVector::basis(0, 4), &d(0.1));
        assert_eq!(out.norm_sqr(), 0.0);
        assert!(!out.is_normalized());
    }

    #[test]
    fn lowering_examples() {
        let out = apply_lowering(&FockVector::basis(1, 4), &d(0.1));
        assert_relative_eq!(out.coeffs()[0].re, 1.2f64.sqrt(), max_relative = 1e-15);

        let out = apply_lowering(&FockVector::basis(3, 4), &d(0.4));
        assert_relative_eq!(
            out.coeffs()[2].re,
            3f64.sqrt() * 2.6f64.sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(out.coeffs()[4], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn raising_examples() {
        let out =
            apply_raising(&FockVector::basis(0, 3), &DeformationParams::undeformed()).unwrap();
        assert_eq!(out, FockVector::basis(1, 3));

        let out = apply_raising(&FockVector::basis(0, 3), &d(0.1)).unwrap();
        assert_relative_eq!(out.coeffs()[1].re, 1.2f64.sqrt(), max_relative = 1e-15);

        let out = apply_raising(&FockVector::basis(2, 3), &d(0.1)).unwrap();
        assert_relative_eq!(
            out.coeffs()[3].re,
            3f64.sqrt() * 1.4f64.sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn raising_top_state_leaks() {
        let err = apply_raising(&FockVector::basis(3, 3), &d(0.1)).unwrap_err();
        assert!(matches!(err, TruncationError::Leak { level: 3, .. }));
        // a loose tolerance lets it through, dropping the top component
        let out = apply_raising_with_tolerance(&FockVector::basis(3, 3), &d(0.1), 2.0).unwrap();
        assert_eq!(out.norm_sqr(), 0.0);
    }

    #[test]
    fn number_operator_matches_spectrum() {
        for &dd in &[0.0, 0.1, 0.4] {
            let def = d(dd);
            for n in 0..30 {
                let v = FockVector::basis(n, 31);
                let av = apply_lowering(&v, &def);
                let ad_a = apply_raising(&av, &def).unwrap();
                let expect = spectrum_level(n, &def);
                assert!((v.inner(&ad_a).re - expect).abs() <= 1e-12 * expect.max(1.0));
            }
        }
    }

    #[test]
    fn commutator_on_basis_states() {
        for &dd in &[0.0, 0.1, 0.4] {
            let def = d(dd);
            for n in 0..30 {
                let v = FockVector::basis(n, 31);
                let aad = apply_lowering(&apply_raising(&v, &def).unwrap(), &def);
                let ada = apply_raising(&apply_lowering(&v, &def), &def).unwrap();
                let comm = aad.coeffs()[n] - ada.coeffs()[n];
                let expect = def.c() + def.d() * (2 * n + 1) as f64;
                assert!((comm.re - expect).abs() <= 1e-12 * expect);
                assert_eq!(comm.im, 0.0);
            }
        }
    }

    #[test]
    fn undeformed_limit_is_standard_boson() {
        let def = DeformationParams::undeformed();
        for n in 0..20 {
            assert_eq!(f_of_n(n, &def), 1.0);
            assert_eq!(spectrum_level(n, &def), n as f64);
        }
    }
}
