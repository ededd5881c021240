//! Time-dependent master-equation coefficients for a Lorentz-Drude Ohmic bath.
//!
//! With `J(ω) = (ω_c²/π)·ω/(ω²+ω_c²)` and the high-temperature reduction
//! `2N(ω)+1 ≈ 2T̃/ω` the frequency integrals collapse to
//! `∫J(ω)(2T̃/ω)cos(ωs)dω = T̃e^{-s}` and `∫J(ω)sin(ωs)dω = e^{-s}/2`, so the
//! remaining time integrals are elementary. `freq` below is always the
//! oscillator frequency in units of the cut-off, `ω_j/ω_c = 1/x_j`.
//!
//! [`oracle_coefficient`] evaluates the same double integrals by nested
//! quadrature and is what the closed forms are tested against.

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::Serialize;

use crate::numerics::{
    half_period, integrate_fourier, integrate_panelled, FourierWeight, NumericsError, QuadratureResult, Tolerance,
};
use crate::params::{Oscillator, ValidatedConfig};

/// Lorentz-Drude Ohmic spectral density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    pub cutoff: f64,
}

impl Default for SpectralDensity {
    fn default() -> Self {
        Self { cutoff: 1.0 }
    }
}

impl SpectralDensity {
    pub fn eval(&self, omega: f64) -> f64 {
        let wc = self.cutoff;
        wc * wc / PI * omega / (omega * omega + wc * wc)
    }
}

/// `Δ_j(τ)`, the diffusion coefficient multiplying `[X,[X,ρ]]`.
pub fn delta_coeff(tau: f64, freq: f64, alpha: f64, temperature_ratio: f64) -> f64 {
    let decay = (-tau).exp();
    let (s, c) = (freq * tau).sin_cos();
    alpha * alpha * temperature_ratio * (1.0 - decay * (c - freq * s)) / (1.0 + freq * freq)
}

/// `Π_j(τ)`, the anomalous diffusion coefficient multiplying `[X,[P,ρ]]`.
pub fn pi_coeff(tau: f64, freq: f64, alpha: f64, temperature_ratio: f64) -> f64 {
    2.0 * temperature_ratio * gamma_coeff(tau, freq, alpha)
}

/// `γ_j(τ)`, the damping coefficient. Independent of temperature.
pub fn gamma_coeff(tau: f64, freq: f64, alpha: f64) -> f64 {
    let decay = (-tau).exp();
    let (s, c) = (freq * tau).sin_cos();
    0.5 * alpha * alpha * (freq - decay * (freq * c + s)) / (1.0 + freq * freq)
}

/// `Γ_j(τ) = 2∫_0^τ γ_j(u) du`.
pub fn big_gamma(tau: f64, freq: f64, alpha: f64) -> f64 {
    let decay = (-tau).exp();
    let (s, c) = (freq * tau).sin_cos();
    let w2 = 1.0 + freq * freq;
    let transient = 2.0 * freq * (1.0 - decay * c) + (freq * freq - 1.0) * decay * s;
    alpha * alpha / w2 * (freq * tau - transient / w2)
}

/// Large-τ limits `(Δ_∞, Π_∞, γ_∞)`.
pub fn asymptotes(freq: f64, alpha: f64, temperature_ratio: f64) -> (f64, f64, f64) {
    let w2 = 1.0 + freq * freq;
    let a2 = alpha * alpha;
    (
        a2 * temperature_ratio / w2,
        a2 * temperature_ratio * freq / w2,
        0.5 * a2 * freq / w2,
    )
}

/// All four coefficients for one oscillator at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientSet {
    pub tau: f64,
    pub oscillator: Oscillator,
    pub delta: f64,
    pub pi: f64,
    pub gamma: f64,
    pub big_gamma: f64,
}

pub fn coefficient_set(tau: f64, oscillator: Oscillator, config: &ValidatedConfig) -> CoefficientSet {
    let freq = config.omega(oscillator);
    let alpha = config.alpha();
    let t = config.temperature_ratio();
    CoefficientSet {
        tau,
        oscillator,
        delta: delta_coeff(tau, freq, alpha, t),
        pi: pi_coeff(tau, freq, alpha, t),
        gamma: gamma_coeff(tau, freq, alpha),
        big_gamma: big_gamma(tau, freq, alpha),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientKind {
    Delta,
    Pi,
    Gamma,
}

impl CoefficientKind {
    pub const ALL: [CoefficientKind; 3] = [CoefficientKind::Delta, CoefficientKind::Pi, CoefficientKind::Gamma];

    pub fn name(self) -> &'static str {
        match self {
            CoefficientKind::Delta => "delta",
            CoefficientKind::Pi => "pi",
            CoefficientKind::Gamma => "gamma",
        }
    }

    /// Closed-form value for this kind.
    pub fn closed_form(self, tau: f64, freq: f64, alpha: f64, temperature_ratio: f64) -> f64 {
        match self {
            CoefficientKind::Delta => delta_coeff(tau, freq, alpha, temperature_ratio),
            CoefficientKind::Pi => pi_coeff(tau, freq, alpha, temperature_ratio),
            CoefficientKind::Gamma => gamma_coeff(tau, freq, alpha),
        }
    }
}

/// Thermal factor `2N(ω)+1` used inside the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThermalKernel {
    /// `2T̃/ω`.
    HighTemperature,
    /// `coth(ω/2T̃)`.
    FullCoth,
}

/// `J(ω)·[2N(ω)+1] / (2T̃)`, continuous at ω = 0.
fn scaled_thermal_density(omega: f64, kernel: ThermalKernel, temperature_ratio: f64) -> f64 {
    let lorentz = 1.0 / (PI * (1.0 + omega * omega));
    match kernel {
        ThermalKernel::HighTemperature => lorentz,
        ThermalKernel::FullCoth => {
            let x = omega / (2.0 * temperature_ratio);
            // x·coth(x) → 1 + x²/3 as x → 0
            let x_coth = if x < 1e-6 { 1.0 + x * x / 3.0 } else { x / x.tanh() };
            lorentz * x_coth
        }
    }
}

/// Nested-quadrature evaluation of a coefficient's double integral.
///
/// The inner frequency integral runs over `[0, ∞)` per half-period panel of
/// the bath oscillation with an accelerated tail; the outer time integral
/// runs over `[0, τ]` in half-period panels of the oscillator. The error
/// estimate combines the outer estimate with the worst inner estimate.
pub fn oracle_coefficient(
    kind: CoefficientKind,
    tau: f64,
    freq: f64,
    alpha: f64,
    temperature_ratio: f64,
    kernel: ThermalKernel,
) -> Result<QuadratureResult, NumericsError> {
    if tau <= 0.0 {
        return Ok(QuadratureResult::ZERO);
    }
    let inner_tol = Tolerance::absolute(1e-12);
    let outer_tol = Tolerance::absolute(1e-11);
    let failure: RefCell<Option<NumericsError>> = RefCell::new(None);
    let worst_inner = RefCell::new(0.0f64);
    let inner_evals = RefCell::new(0usize);

    // Each kind is prefactor · ∫_0^τ ds w(ωs) · ∫_0^∞ a(ν) v(νs) dν.
    let (prefactor, outer_weight, inner_weight): (f64, fn(f64) -> f64, FourierWeight) = match kind {
        CoefficientKind::Delta => (alpha * alpha * 2.0 * temperature_ratio, f64::cos, FourierWeight::Cos),
        CoefficientKind::Pi => (alpha * alpha * 2.0 * temperature_ratio, f64::sin, FourierWeight::Cos),
        CoefficientKind::Gamma => (alpha * alpha, f64::sin, FourierWeight::Sin),
    };

    let inner = |s: f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        let amplitude = |nu: f64| match kind {
            CoefficientKind::Delta | CoefficientKind::Pi => scaled_thermal_density(nu, kernel, temperature_ratio),
            CoefficientKind::Gamma => SpectralDensity::default().eval(nu),
        };
        match integrate_fourier(amplitude, s, inner_weight, inner_tol) {
            Ok(r) => {
                let mut w = worst_inner.borrow_mut();
                *w = w.max(r.error_estimate);
                *inner_evals.borrow_mut() += r.evaluations;
                r.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };

    let outer = integrate_panelled(
        |s| outer_weight(freq * s) * inner(s),
        0.0,
        tau,
        half_period(freq.max(1.0)),
        outer_tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    let inner_err = worst_inner.into_inner() * tau;
    Ok(QuadratureResult {
        value: prefactor * outer.value,
        error_estimate: prefactor * (outer.error_estimate + inner_err),
        evaluations: outer.evaluations + inner_evals.into_inner(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALPHA: f64 = 0.1;
    const T: f64 = 100.0;

    #[test]
    fn spectral_density_shape() {
        let j = SpectralDensity::default();
        assert_eq!(j.eval(0.0), 0.0);
        assert!(j.eval(0.3) > 0.0 && j.eval(30.0) > 0.0);
        let w = 1e6;
        assert!((j.eval(w) * PI * w - 1.0).abs() < 1e-10);
    }

    #[test]
    fn vanish_at_zero() {
        for freq in [0.01, 0.1, 1.0, 10.0] {
            assert_eq!(delta_coeff(0.0, freq, ALPHA, T), 0.0);
            assert_eq!(pi_coeff(0.0, freq, ALPHA, T), 0.0);
            assert_eq!(gamma_coeff(0.0, freq, ALPHA), 0.0);
            assert!(big_gamma(0.0, freq, ALPHA).abs() < 1e-18);
        }
    }

    #[test]
    fn asymptotic_values() {
        assert!((delta_coeff(30.0, 1.0, ALPHA, T) - 0.5).abs() < 1e-8);
        assert!((pi_coeff(30.0, 1.0, ALPHA, T) - 0.5).abs() < 1e-8);
        assert!((pi_coeff(30.0, 0.01, ALPHA, T) - 0.01 / 1.0001).abs() < 1e-8);
        assert!((gamma_coeff(30.0, 1.0, ALPHA) - 2.5e-3).abs() < 1e-10);
        assert!((gamma_coeff(30.0, 10.0, ALPHA) - 0.05 / 101.0).abs() < 1e-10);
        for freq in [0.01, 0.1, 1.0, 10.0] {
            let (d, p, g) = asymptotes(freq, ALPHA, T);
            assert!((delta_coeff(30.0, freq, ALPHA, T) - d).abs() < 1e-8);
            assert!((pi_coeff(30.0, freq, ALPHA, T) - p).abs() < 1e-8);
            assert!((gamma_coeff(30.0, freq, ALPHA) - g).abs() < 1e-8);
        }
    }

    #[test]
    fn transient_negative_diffusion() {
        let d = delta_coeff(0.486, 10.0, ALPHA, T);
        assert!(d < 0.0);
        assert!((d + 0.0512).abs() < 1e-3, "{d}");
    }

    #[test]
    fn big_gamma_closed_form() {
        let expected = 0.5 * ALPHA * ALPHA * (30.0 - 1.0 + (-30.0f64).exp() * 30.0f64.cos());
        assert!((big_gamma(30.0, 1.0, ALPHA) - expected).abs() < 1e-15);
        assert!((big_gamma(30.0, 1.0, ALPHA) - 0.145).abs() < 1e-6);
        for freq in [0.01, 1.0, 10.0] {
            let slope = big_gamma(30.0, freq, ALPHA) - big_gamma(29.0, freq, ALPHA);
            let (_, _, g) = asymptotes(freq, ALPHA, T);
            assert!((slope - 2.0 * g).abs() < 1e-6);
        }
    }

    #[test]
    fn big_gamma_matches_quadrature_of_gamma() {
        for freq in [0.01, 0.1, 1.0, 10.0] {
            for tau in [0.1, 1.0, 5.0, 10.0] {
                let q = integrate_panelled(
                    |u| 2.0 * gamma_coeff(u, freq, ALPHA),
                    0.0,
                    tau,
                    half_period(freq),
                    Tolerance::absolute(1e-13),
                )
                .unwrap();
                assert!((big_gamma(tau, freq, ALPHA) - q.value).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gamma_ignores_temperature() {
        let base = coefficient_set(
            2.0,
            Oscillator::First,
            &crate::params::validate(
                &crate::params::PhysicalConfig::new(0.5, 0.3, 1.0).with_temperature_ratio(10.0),
                &Default::default(),
            )
            .unwrap(),
        );
        for t in [100.0, 1000.0] {
            let other = coefficient_set(
                2.0,
                Oscillator::First,
                &crate::params::validate(
                    &crate::params::PhysicalConfig::new(0.5, 0.3, 1.0).with_temperature_ratio(t),
                    &Default::default(),
                )
                .unwrap(),
            );
            assert_eq!(base.gamma.to_bits(), other.gamma.to_bits());
            assert_eq!(base.big_gamma.to_bits(), other.big_gamma.to_bits());
        }
    }

    #[test]
    fn continuity() {
        for freq in [0.1, 1.0, 10.0] {
            for tau in [0.0, 0.5, 3.0] {
                let mut last = f64::INFINITY;
                for h in [1e-2, 1e-4, 1e-6] {
                    let jump = (delta_coeff(tau + h, freq, ALPHA, T) - delta_coeff(tau, freq, ALPHA, T)).abs()
                        + (pi_coeff(tau + h, freq, ALPHA, T) - pi_coeff(tau, freq, ALPHA, T)).abs()
                        + (gamma_coeff(tau + h, freq, ALPHA) - gamma_coeff(tau, freq, ALPHA)).abs();
                    assert!(jump < last);
                    last = jump;
                }
                assert!(last < 1e-4);
            }
        }
    }

    #[test]
    fn oracle_zero_time() {
        let r = oracle_coefficient(
            CoefficientKind::Gamma,
            0.0,
            1.0,
            ALPHA,
            T,
            ThermalKernel::HighTemperature,
        )
        .unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn oracle_matches_closed_forms() {
        for kind in CoefficientKind::ALL {
            for (tau, freq) in [(0.486, 10.0), (1.0, 1.0), (2.0, 0.1)] {
                let r = oracle_coefficient(kind, tau, freq, ALPHA, T, ThermalKernel::HighTemperature).unwrap();
                let closed = kind.closed_form(tau, freq, ALPHA, T);
                let diff = (r.value - closed).abs();
                assert!(diff < 1e-8, "{kind:?} tau={tau} freq={freq}: {} vs {closed}", r.value);
                assert!(diff <= 10.0 * r.error_estimate.max(1e-15) || diff < 1e-12);
            }
        }
    }

    #[test]
    fn oracle_long_time_delta() {
        let r = oracle_coefficient(
            CoefficientKind::Delta,
            30.0,
            1.0,
            ALPHA,
            T,
            ThermalKernel::HighTemperature,
        )
        .unwrap();
        let closed = delta_coeff(30.0, 1.0, ALPHA, T);
        assert!(((r.value - closed) / closed).abs() < 1e-7);
    }

    #[test]
    fn full_coth_close_to_high_temperature() {
        let hi = oracle_coefficient(
            CoefficientKind::Delta,
            5.0,
            1.0,
            ALPHA,
            T,
            ThermalKernel::HighTemperature,
        )
        .unwrap()
        .value;
        let full = oracle_coefficient(CoefficientKind::Delta, 5.0, 1.0, ALPHA, T, ThermalKernel::FullCoth)
            .unwrap()
            .value;
        let rel = ((full - hi) / hi).abs();
        assert!(rel < 1e-3, "relative discrepancy {rel}");
        assert!(rel > 0.0);
    }
}
