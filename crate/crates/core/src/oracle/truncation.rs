//! Fock-space cutoffs and the Poisson mass they exclude.

use serde::{Deserialize, Serialize};

/// Largest excluded probability accepted when building an initial state.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Cutoff `ceil(mean + 10 sqrt(mean + 1) + 20)` for a Poisson distribution.
pub fn default_cutoff(mean: f64) -> usize {
    (mean + 10.0 * (mean + 1.0).sqrt() + 20.0).ceil() as usize
}

/// `P(k > cutoff)` for `k ~ Poisson(mean)`, summed directly over the tail.
pub fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    // log of the first excluded term, e^{-mean} mean^k / k!
    let k0 = cutoff + 1;
    let mut log_term = -mean + k0 as f64 * mean.ln() - ln_factorial(k0);
    let mut total = 0.0;
    let mut k = k0;
    loop {
        let term = log_term.exp();
        total += term;
        k += 1;
        log_term += mean.ln() - (k as f64).ln();
        // terms decay geometrically once k > mean
        if k as f64 > 2.0 * mean + 1.0 && (term == 0.0 || term < total * 1e-17) {
            break;
        }
    }
    total
}

/// Excluded mass of a product of two independent Poisson marginals, each
/// truncated at `cutoff`.
pub fn bivariate_tail(mean_a: f64, mean_b: f64, cutoff: usize) -> f64 {
    let ta = poisson_tail(mean_a, cutoff);
    let tb = poisson_tail(mean_b, cutoff);
    ta + tb - ta * tb
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Cutoff overrides; `None` selects [`default_cutoff`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub nmax: Option<usize>,
    pub kmax: Option<usize>,
}

impl TruncationPolicy {
    /// Per-mode cutoff for the polariton oracle, whose modes each carry |α|²/2.
    pub fn polariton_cutoff(&self, alpha_mag: f64) -> usize {
        self.nmax
            .unwrap_or_else(|| default_cutoff(alpha_mag * alpha_mag / 2.0))
    }

    /// Total-excitation cutoff for the exact path, mean |α|².
    pub fn exact_cutoff(&self, alpha_mag: f64) -> usize {
        self.kmax
            .unwrap_or_else(|| default_cutoff(alpha_mag * alpha_mag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tail_by_complement(mean: f64, cutoff: usize) -> f64 {
        let mut p = (-mean).exp();
        let mut acc = p;
        for k in 1..=cutoff {
            p *= mean / k as f64;
            acc += p;
        }
        1.0 - acc
    }

    #[test]
    fn tail_matches_complement_where_resolvable() {
        for &(mean, cutoff) in &[(2.0, 3), (2.0, 6), (4.0, 8), (0.5, 1), (10.0, 12)] {
            let direct = poisson_tail(mean, cutoff);
            let compl = tail_by_complement(mean, cutoff);
            assert!(
                (direct - compl).abs() < 1e-13,
                "{mean} {cutoff}: {direct} vs {compl}"
            );
        }
    }

    #[test]
    fn default_cutoffs_bound_tail() {
        for &amp in &[0.5f64, 1.0, 2.0, 3.0, 4.0] {
            let mu2 = amp * amp / 2.0;
            let n = default_cutoff(mu2);
            assert!(bivariate_tail(mu2, mu2, n) < 1e-12);
            let k = default_cutoff(amp * amp);
            assert!(poisson_tail(amp * amp, k) < 1e-12);
        }
        assert_eq!(default_cutoff(2.0), 40);
        assert_eq!(default_cutoff(4.0), 47);
    }

    #[test]
    fn vacuum_has_no_tail() {
        assert_eq!(poisson_tail(0.0, 0), 0.0);
        assert_eq!(bivariate_tail(0.0, 0.0, 3), 0.0);
    }
}
