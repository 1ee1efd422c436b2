//! Closed-form quantum statistics of the deformed atom laser.
//!
//! Every expression is evaluated exactly as written in the model's analytic
//! solution, including the pieces known to disagree with a coherent initial
//! state at t = 0 (⟨a²(0)⟩ = (3/4)α², ⟨(a†a)²⟩(0) = |α|⁴). The two knobs in
//! [`FidelityOptions`] expose the suspect ξ-term weight and the sign of α₃
//! inside λ; the defaults reproduce the printed formulas.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{
    mandel, squeezing_pair, AtomLaser, ObservableRow, ObservableSeries, PathTag, SeriesMeta,
};
use crate::params::TimeGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LambdaSign {
    #[default]
    Minus,
    Plus,
}

impl LambdaSign {
    fn factor(self) -> f64 {
        match self {
            LambdaSign::Minus => -1.0,
            LambdaSign::Plus => 1.0,
        }
    }
}

impl fmt::Display for LambdaSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LambdaSign::Minus => "minus",
            LambdaSign::Plus => "plus",
        })
    }
}

impl FromStr for LambdaSign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minus" | "-" => Ok(LambdaSign::Minus),
            "plus" | "+" => Ok(LambdaSign::Plus),
            other => Err(format!(
                "unknown lambda sign `{other}` (expected minus|plus)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityOptions {
    /// Weight of the ξ term in ⟨a²⟩. 1 is as printed; 2 restores ⟨a²(0)⟩ = α².
    pub xi_weight: f64,
    pub lambda_sign: LambdaSign,
}

impl Default for FidelityOptions {
    fn default() -> Self {
        Self {
            xi_weight: 1.0,
            lambda_sign: LambdaSign::Minus,
        }
    }
}

/// How the number-operator coefficients of Θ_N are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ThetaModel {
    /// Θ_N carries (α₂−α₁)N†N + 2α₂M†M, the phase the Heisenberg equation of
    /// the effective polariton Hamiltonian produces. Keeps [a(t), a†(t)] = 1.
    #[default]
    Heisenberg,
    /// Θ_N carries (α₂−α₁)M†M + 2α₂N†N as written in the analytic solution.
    /// The resulting a(t) is not a bosonic operator once α₁, α₂ ≠ 0.
    Printed,
}

impl fmt::Display for ThetaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThetaModel::Heisenberg => "heisenberg",
            ThetaModel::Printed => "printed",
        })
    }
}

impl FromStr for ThetaModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "heisenberg" => Ok(ThetaModel::Heisenberg),
            "printed" => Ok(ThetaModel::Printed),
            other => Err(format!(
                "unknown theta model `{other}` (expected heisenberg|printed)"
            )),
        }
    }
}

/// Θ_M = const_m + mm_m·M†M + nn_m·N†N and likewise for Θ_N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaPhaseCoeffs {
    pub const_m: f64,
    pub mm_m: f64,
    pub nn_m: f64,
    pub const_n: f64,
    pub mm_n: f64,
    pub nn_n: f64,
}

impl ThetaPhaseCoeffs {
    pub fn new(m: &AtomLaser, model: ThetaModel) -> Self {
        match model {
            ThetaModel::Printed => Self::as_printed(m),
            ThetaModel::Heisenberg => Self::heisenberg(m),
        }
    }

    pub fn as_printed(m: &AtomLaser) -> Self {
        let (a1, a2, a3) = (m.cpl.alpha1, m.cpl.alpha2, m.cpl.alpha3);
        let w = m.base_frequency();
        Self {
            const_m: w + a3,
            mm_m: a1 + a2,
            nn_m: 2.0 * a2,
            const_n: w - a3,
            mm_n: a2 - a1,
            nn_n: 2.0 * a2,
        }
    }

    pub fn heisenberg(m: &AtomLaser) -> Self {
        let p = Self::as_printed(m);
        Self {
            mm_n: p.nn_n,
            nn_n: p.mm_n,
            ..p
        }
    }

    /// Θ_M evaluated on |m, n⟩ of the polariton number basis.
    pub fn theta_m(&self, m: usize, n: usize) -> f64 {
        self.const_m + self.mm_m * m as f64 + self.nn_m * n as f64
    }

    pub fn theta_n(&self, m: usize, n: usize) -> f64 {
        self.const_n + self.mm_n * m as f64 + self.nn_n * n as f64
    }
}

/// Envelopes β± and phases δ± of ⟨a(t)⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeTerms {
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
}

/// Envelopes γ±, ξ and phases ε±, λ of ⟨a²(t)⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareFieldTerms {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub xi: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub lambda: f64,
}

pub fn amplitude_terms(t: f64, m: &AtomLaser) -> AmplitudeTerms {
    let (a1, a2, a3) = (m.cpl.alpha1, m.cpl.alpha2, m.cpl.alpha3);
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    let w = m.base_frequency();

    // upper sign: (3α₂ − α₁) and (α₂ + α₁); lower sign swaps both
    let fast_p = (3.0 * a2 - a1) / 2.0 * t;
    let slow_p = (a2 + a1) / 2.0 * t;
    let fast_m = (3.0 * a2 + a1) / 2.0 * t;
    let slow_m = (a2 - a1) / 2.0 * t;

    AmplitudeTerms {
        beta_plus: (amp2 * fast_p.cos() * slow_p.cos()).exp(),
        beta_minus: (amp2 * fast_m.cos() * slow_m.cos()).exp(),
        delta_plus: (w + a3) * t + amp2 * fast_p.sin() * slow_p.cos(),
        delta_minus: (w - a3) * t + amp2 * fast_m.sin() * slow_m.cos(),
    }
}

/// ⟨a(t)⟩ = (α/2) e^{−|α|²} (β₊e^{−iδ₊} + β₋e^{−iδ₋}).
pub fn expval_a(t: f64, m: &AtomLaser) -> Complex64 {
    let k = amplitude_terms(t, m);
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    let sum =
        k.beta_plus * Complex64::cis(-k.delta_plus) + k.beta_minus * Complex64::cis(-k.delta_minus);
    m.las.alpha() / 2.0 * (-amp2).exp() * sum
}

/// The shared oscillating phase 2tα₃ − |α|² sin(α₁t) cos(α₂t).
fn number_phase(t: f64, m: &AtomLaser) -> f64 {
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    2.0 * t * m.cpl.alpha3 - amp2 * (m.cpl.alpha1 * t).sin() * (m.cpl.alpha2 * t).cos()
}

/// ⟨a†(t)a(t)⟩.
pub fn expval_number(t: f64, m: &AtomLaser) -> f64 {
    let (a1, a2) = (m.cpl.alpha1, m.cpl.alpha2);
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    let envelope = (-amp2 * (1.0 - (a1 * t).cos() * (a2 * t).cos())).exp();
    amp2 / 2.0 * (1.0 + envelope * number_phase(t, m).cos())
}

/// ⟨a†(t)a(t)a†(t)a(t)⟩.
pub fn expval_number_sq(t: f64, m: &AtomLaser) -> f64 {
    let (a1, a2) = (m.cpl.alpha1, m.cpl.alpha2);
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    let envelope = (-amp2 * (1.0 - (2.0 * a1 * t).cos() * (2.0 * a2 * t).cos())).exp();
    amp2 * expval_number(t, m) - amp2 * amp2 / 8.0 * (1.0 - envelope * number_phase(t, m).cos())
}

pub fn square_terms(t: f64, m: &AtomLaser, opts: &FidelityOptions) -> SquareFieldTerms {
    let (a1, a2, a3) = (m.cpl.alpha1, m.cpl.alpha2, m.cpl.alpha3);
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    let w = m.base_frequency();
    let s = opts.lambda_sign.factor();

    let gamma =
        |sgn: f64| (amp2 / 2.0 * ((4.0 * a2 * t).cos() + (2.0 * t * (a2 - sgn * a1)).cos())).exp();
    let eps = |sgn: f64| {
        0.5 * (4.0 * t * (w - sgn * a3)
            + amp2 * ((4.0 * t * a2).sin() + (2.0 * t * (a2 - sgn * a1)).sin()))
    };
    let xi = (amp2 / 2.0 * ((2.0 * t * (a1 - 3.0 * a2)).cos() + (2.0 * t * (a1 + 3.0 * a2)).cos()))
        .exp();
    let lambda = 4.0 * t * (w + s * a3)
        - amp2 / 2.0 * ((2.0 * t * (a1 - 3.0 * a2)).sin() - (2.0 * t * (a1 + 3.0 * a2)).sin());

    SquareFieldTerms {
        gamma_plus: gamma(1.0),
        gamma_minus: gamma(-1.0),
        xi,
        eps_plus: eps(1.0),
        eps_minus: eps(-1.0),
        lambda,
    }
}

/// ⟨a(t)²⟩ = (α²/4) e^{−|α|²} (γ₊e^{−iε₊} + γ₋e^{−iε₋} + w·ξe^{−iλ}).
pub fn expval_a_sq(t: f64, m: &AtomLaser, opts: &FidelityOptions) -> Complex64 {
    let k = square_terms(t, m, opts);
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    let alpha = m.las.alpha();
    let sum = k.gamma_plus * Complex64::cis(-k.eps_plus)
        + k.gamma_minus * Complex64::cis(-k.eps_minus)
        + opts.xi_weight * k.xi * Complex64::cis(-k.lambda);
    alpha * alpha / 4.0 * (-amp2).exp() * sum
}

/// Re[⟨a(t)⟩²] in its expanded real form.
pub fn re_expval_a_squared(t: f64, m: &AtomLaser) -> f64 {
    let k = amplitude_terms(t, m);
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    let th2 = 2.0 * m.las.theta;
    amp2 / 4.0
        * (-2.0 * amp2).exp()
        * (2.0 * k.beta_plus * k.beta_minus * (k.delta_plus + k.delta_minus - th2).cos()
            + k.beta_plus * k.beta_plus * (2.0 * k.delta_plus - th2).cos()
            + k.beta_minus * k.beta_minus * (2.0 * k.delta_minus - th2).cos())
}

/// Re[⟨a²(t)⟩] in its expanded real form.
pub fn re_expval_a_sq(t: f64, m: &AtomLaser, opts: &FidelityOptions) -> f64 {
    let k = square_terms(t, m, opts);
    let amp2 = m.las.alpha_mag * m.las.alpha_mag;
    let th2 = 2.0 * m.las.theta;
    amp2 / 4.0
        * (-amp2).exp()
        * (k.gamma_plus * (th2 - k.eps_plus).cos()
            + k.gamma_minus * (th2 - k.eps_minus).cos()
            + opts.xi_weight * k.xi * (th2 - k.lambda).cos())
}

/// Mandel Q from the closed-form moments; `None` when ⟨a†a⟩ is ~0.
pub fn mandel_q(t: f64, m: &AtomLaser) -> Option<f64> {
    mandel(expval_number(t, m), expval_number_sq(t, m))
}

/// Quadrature squeezing parameters (S₁, S₂).
pub fn squeezing_s1_s2(t: f64, m: &AtomLaser, opts: &FidelityOptions) -> (f64, f64) {
    squeezing_pair(
        expval_number(t, m),
        re_expval_a_sq(t, m, opts),
        re_expval_a_squared(t, m),
        expval_a(t, m).norm_sqr(),
    )
}

pub fn row(t: f64, m: &AtomLaser, opts: &FidelityOptions) -> ObservableRow {
    let n = expval_number(t, m);
    let nn = expval_number_sq(t, m);
    let a = expval_a(t, m);
    let (s1, s2) = squeezing_s1_s2(t, m, opts);
    ObservableRow {
        t,
        a,
        n,
        nn,
        a2: expval_a_sq(t, m, opts),
        q: mandel(n, nn),
        s1,
        s2,
    }
}

/// Evaluates every closed-form observable on the grid. Rows are computed in
/// parallel and returned in grid order.
pub fn evaluate_series(grid: &TimeGrid, m: &AtomLaser, opts: &FidelityOptions) -> ObservableSeries {
    let rows = (0..grid.samples())
        .into_par_iter()
        .map(|i| row(grid.point(i), m, opts))
        .collect();
    ObservableSeries {
        path: PathTag::ClosedForm,
        grid: *grid,
        model: *m,
        meta: SeriesMeta {
            xi_weight: Some(opts.xi_weight),
            lambda_sign: Some(opts.lambda_sign.to_string()),
            ..Default::default()
        },
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{DeformationParams, LaserParams};
    use approx::assert_relative_eq;

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

    const XI2: FidelityOptions = FidelityOptions {
        xi_weight: 2.0,
        lambda_sign: LambdaSign::Minus,
    };

    #[test]
    fn amplitude_terms_at_origin() {
        let k = amplitude_terms(0.0, &model(0.1, 0.1, 0.5, 0.0));
        assert_relative_eq!(k.beta_plus, 0.25f64.exp(), max_relative = 1e-15);
        assert_relative_eq!(k.beta_minus, 0.25f64.exp(), max_relative = 1e-15);
        assert_eq!(k.delta_plus, 0.0);
        assert_eq!(k.delta_minus, 0.0);
    }

    #[test]
    fn amplitude_terms_undeformed() {
        let m = model(0.0, 0.1, 0.5, 0.0);
        for &t in &[0.1, 0.37, 1.0] {
            let k = amplitude_terms(t, &m);
            assert_relative_eq!(k.beta_plus, 0.25f64.exp(), max_relative = 1e-15);
            assert_relative_eq!(k.delta_plus, (1.0 + m.cpl.alpha3) * t, max_relative = 1e-14);
            assert_relative_eq!(
                k.delta_minus,
                (1.0 - m.cpl.alpha3) * t,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn t0_values() {
        let m = model(0.1, 0.2, 2.0, 0.5);
        let alpha = m.las.alpha();
        assert!((expval_a(0.0, &m) - alpha).norm() < 1e-12);
        assert!((expval_number(0.0, &m) - 4.0).abs() < 1e-12);
        assert!((expval_number_sq(0.0, &m) - 16.0).abs() < 1e-12);
        let opts = FidelityOptions::default();
        assert!((expval_a_sq(0.0, &m, &opts) - 0.75 * alpha * alpha).norm() < 1e-12);
        assert!((expval_a_sq(0.0, &m, &XI2) - alpha * alpha).norm() < 1e-12);
        assert!((mandel_q(0.0, &m).unwrap() + 1.0).abs() < 1e-12);
        assert!((re_expval_a_squared(0.0, &m) - 4.0 * 1f64.cos()).abs() < 1e-12);
        assert!((re_expval_a_sq(0.0, &m, &opts) - 3.0 * 1f64.cos()).abs() < 1e-12);
        assert!((re_expval_a_sq(0.0, &m, &XI2) - 4.0 * 1f64.cos()).abs() < 1e-12);

        let (s1, s2) = squeezing_s1_s2(0.0, &m, &opts);
        assert_relative_eq!(s1, -1.0806046117362795, max_relative = 1e-12);
        assert_relative_eq!(s2, 1.0806046117362795, max_relative = 1e-12);
        let (s1, s2) = squeezing_s1_s2(0.0, &m, &XI2);
        assert!(s1.abs() < 1e-12 && s2.abs() < 1e-12);
    }

    #[test]
    fn square_terms_at_origin_and_undeformed() {
        let m = model(0.1, 0.2, 2.0, 0.5);
        let k = square_terms(0.0, &m, &FidelityOptions::default());
        let e = 4f64.exp();
        assert_relative_eq!(k.gamma_plus, e, max_relative = 1e-15);
        assert_relative_eq!(k.xi, e, max_relative = 1e-15);
        assert_eq!((k.eps_plus, k.eps_minus, k.lambda), (0.0, 0.0, 0.0));

        let m = model(0.0, 0.2, 2.0, 0.5);
        let k = square_terms(0.3, &m, &FidelityOptions::default());
        assert_relative_eq!(k.gamma_minus, e, max_relative = 1e-15);
        assert_relative_eq!(
            k.eps_plus,
            2.0 * 0.3 * (1.0 - m.cpl.alpha3),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            k.eps_minus,
            2.0 * 0.3 * (1.0 + m.cpl.alpha3),
            max_relative = 1e-14
        );
    }

    #[test]
    fn lambda_sign_plus_flips_alpha3() {
        let m = model(0.1, 0.2, 2.0, 0.5);
        let t = 0.01;
        let minus = square_terms(t, &m, &FidelityOptions::default()).lambda;
        let plus = square_terms(
            t,
            &m,
            &FidelityOptions {
                lambda_sign: LambdaSign::Plus,
                ..Default::default()
            },
        )
        .lambda;
        assert_relative_eq!(plus - minus, 8.0 * t * m.cpl.alpha3, max_relative = 1e-12);
    }

    #[test]
    fn vacuum_input() {
        let m = model(0.1, 0.1, 0.0, 0.0);
        for &t in &[0.0, 0.2, 0.9] {
            assert_eq!(expval_a(t, &m), Complex64::new(0.0, 0.0));
            assert_eq!(expval_number(t, &m), 0.0);
            assert_eq!(expval_number_sq(t, &m), 0.0);
            assert_eq!(mandel_q(t, &m), None);
        }
    }

    #[test]
    fn undeformed_number_is_pure_cosine() {
        let m = model(0.0, 0.1, 0.5, 0.0);
        for i in 0..50 {
            let t = i as f64 * 0.02;
            let expect = 0.25 / 2.0 * (1.0 + (2.0 * m.cpl.alpha3 * t).cos());
            assert!((expval_number(t, &m) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn series_vacuum_has_undefined_q() {
        let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let s = evaluate_series(
            &grid,
            &model(0.1, 0.1, 0.0, 0.0),
            &FidelityOptions::default(),
        );
        assert_eq!(s.rows.len(), 3);
        assert_eq!(s.path, PathTag::ClosedForm);
        for r in &s.rows {
            assert_eq!(r.a, Complex64::new(0.0, 0.0));
            assert_eq!(r.a2, Complex64::new(0.0, 0.0));
            assert_eq!(r.q, None);
        }
    }

    #[test]
    fn printed_theta_invariants() {
        let m = model(0.1, 0.2, 2.0, 0.5);
        let (a1, a2, a3) = (m.cpl.alpha1, m.cpl.alpha2, m.cpl.alpha3);
        let p = ThetaPhaseCoeffs::as_printed(&m);
        assert_eq!(p.mm_m, a1 + a2);
        assert_eq!(p.mm_n, a2 - a1);
        assert_eq!(p.nn_m, 2.0 * a2);
        assert_eq!(p.nn_n, 2.0 * a2);
        assert_relative_eq!(p.const_m - p.const_n, 2.0 * a3, max_relative = 1e-15);

        let h = ThetaPhaseCoeffs::heisenberg(&m);
        assert_eq!(
            (h.const_m, h.mm_m, h.nn_m, h.const_n),
            (p.const_m, p.mm_m, p.nn_m, p.const_n)
        );
        assert_eq!((h.mm_n, h.nn_n), (2.0 * a2, a2 - a1));
    }

    #[test]
    fn lambda_sign_parses() {
        assert_eq!("minus".parse::<LambdaSign>().unwrap(), LambdaSign::Minus);
        assert_eq!("plus".parse::<LambdaSign>().unwrap(), LambdaSign::Plus);
        assert!("up".parse::<LambdaSign>().is_err());
    }
}
