//! Time-integrated secular coefficients.
//!
//! For oscillator `i` with frequency `ω = 1/x_i`:
//!
//! ```text
//! Δ_Γ(τ)  = ∫_0^τ Δ(s) ds
//! Δ_co(τ) = ∫_0^τ Δ(s) cos[2ω(τ−s)] ds      Δ_si(τ) = ∫_0^τ Δ(s) sin[2ω(τ−s)] ds
//! Π_co(τ) = ∫_0^τ Π(s) cos[2ω(τ−s)] ds      Π_si(τ) = ∫_0^τ Π(s) sin[2ω(τ−s)] ds
//! ```
//!
//! [`secular_set`] integrates from zero at any τ. Along a grid,
//! [`SecularAccumulator`] carries running integrals against `cos 2ωs` and
//! `sin 2ωs` and recombines them with the angle-addition formulas, so a
//! whole trace costs one pass.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::kernels::{delta_coeff, pi_coeff};
use crate::numerics::{half_period, integrate_panelled, NumericsError, Tolerance, DEFAULT_ABS_TOL};
use crate::params::{Oscillator, ValidatedConfig};

/// Per-step tolerance of the accumulator. Small enough that ten thousand
/// steps stay inside [`DEFAULT_ABS_TOL`].
const STEP_ABS_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SecularCoefficient {
    DeltaGamma,
    DeltaCo,
    DeltaSi,
    PiCo,
    PiSi,
}

impl SecularCoefficient {
    pub const ALL: [SecularCoefficient; 5] = [
        SecularCoefficient::DeltaGamma,
        SecularCoefficient::DeltaCo,
        SecularCoefficient::DeltaSi,
        SecularCoefficient::PiCo,
        SecularCoefficient::PiSi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SecularCoefficient::DeltaGamma => "delta_gamma",
            SecularCoefficient::DeltaCo => "delta_co",
            SecularCoefficient::DeltaSi => "delta_si",
            SecularCoefficient::PiCo => "pi_co",
            SecularCoefficient::PiSi => "pi_si",
        }
    }
}

impl fmt::Display for SecularCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("secular coefficient {coefficient} of oscillator {} at tau = {tau}: {source}", .oscillator.index())]
pub struct SecularError {
    pub coefficient: SecularCoefficient,
    pub oscillator: Oscillator,
    pub tau: f64,
    #[source]
    pub source: NumericsError,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecularSet {
    pub tau: f64,
    pub oscillator: Oscillator,
    pub delta_gamma: f64,
    pub delta_co: f64,
    pub delta_si: f64,
    pub pi_co: f64,
    pub pi_si: f64,
}

impl SecularSet {
    pub fn zero(oscillator: Oscillator) -> Self {
        Self {
            tau: 0.0,
            oscillator,
            delta_gamma: 0.0,
            delta_co: 0.0,
            delta_si: 0.0,
            pi_co: 0.0,
            pi_si: 0.0,
        }
    }

    pub fn get(&self, coefficient: SecularCoefficient) -> f64 {
        match coefficient {
            SecularCoefficient::DeltaGamma => self.delta_gamma,
            SecularCoefficient::DeltaCo => self.delta_co,
            SecularCoefficient::DeltaSi => self.delta_si,
            SecularCoefficient::PiCo => self.pi_co,
            SecularCoefficient::PiSi => self.pi_si,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Channel {
    freq: f64,
    alpha: f64,
    temperature_ratio: f64,
}

impl Channel {
    fn new(oscillator: Oscillator, config: &ValidatedConfig) -> Self {
        Self {
            freq: config.omega(oscillator),
            alpha: config.alpha(),
            temperature_ratio: config.temperature_ratio(),
        }
    }

    fn delta(&self, s: f64) -> f64 {
        delta_coeff(s, self.freq, self.alpha, self.temperature_ratio)
    }

    fn pi(&self, s: f64) -> f64 {
        pi_coeff(s, self.freq, self.alpha, self.temperature_ratio)
    }

    /// Longest panel that keeps every integrand within half an oscillation.
    fn max_panel(&self) -> f64 {
        half_period((3.0 * self.freq).max(1.0))
    }
}

/// All five coefficients at `tau`, integrated directly from zero.
pub fn secular_set(tau: f64, oscillator: Oscillator, config: &ValidatedConfig) -> Result<SecularSet, SecularError> {
    secular_set_with_tolerance(tau, oscillator, config, DEFAULT_ABS_TOL)
}

pub fn secular_set_with_tolerance(
    tau: f64,
    oscillator: Oscillator,
    config: &ValidatedConfig,
    abs_tol: f64,
) -> Result<SecularSet, SecularError> {
    let ch = Channel::new(oscillator, config);
    let mut out = SecularSet::zero(oscillator);
    out.tau = tau;
    if tau <= 0.0 {
        return Ok(out);
    }
    let w2 = 2.0 * ch.freq;
    for coefficient in SecularCoefficient::ALL {
        let integrand = |s: f64| match coefficient {
            SecularCoefficient::DeltaGamma => ch.delta(s),
            SecularCoefficient::DeltaCo => ch.delta(s) * (w2 * (tau - s)).cos(),
            SecularCoefficient::DeltaSi => ch.delta(s) * (w2 * (tau - s)).sin(),
            SecularCoefficient::PiCo => ch.pi(s) * (w2 * (tau - s)).cos(),
            SecularCoefficient::PiSi => ch.pi(s) * (w2 * (tau - s)).sin(),
        };
        let value = integrate_panelled(integrand, 0.0, tau, ch.max_panel(), Tolerance::absolute(abs_tol))
            .map_err(|source| SecularError {
                coefficient,
                oscillator,
                tau,
                source,
            })?
            .value;
        match coefficient {
            SecularCoefficient::DeltaGamma => out.delta_gamma = value,
            SecularCoefficient::DeltaCo => out.delta_co = value,
            SecularCoefficient::DeltaSi => out.delta_si = value,
            SecularCoefficient::PiCo => out.pi_co = value,
            SecularCoefficient::PiSi => out.pi_si = value,
        }
    }
    Ok(out)
}

/// Incremental evaluation of [`SecularSet`] along an increasing sequence of times.
#[derive(Debug, Clone)]
pub struct SecularAccumulator {
    channel: Channel,
    oscillator: Oscillator,
    tau: f64,
    // ∫Δ, ∫Δ cos2ωs, ∫Δ sin2ωs, ∫Π cos2ωs, ∫Π sin2ωs
    sums: [f64; 5],
}

impl SecularAccumulator {
    pub fn new(oscillator: Oscillator, config: &ValidatedConfig) -> Self {
        Self {
            channel: Channel::new(oscillator, config),
            oscillator,
            tau: 0.0,
            sums: [0.0; 5],
        }
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Extend the running integrals to `tau` and return the set there.
    /// Times must not decrease.
    pub fn advance_to(&mut self, tau: f64) -> Result<SecularSet, SecularError> {
        assert!(
            tau >= self.tau,
            "accumulator cannot move backwards ({} -> {tau})",
            self.tau
        );
        if tau > self.tau {
            let ch = self.channel;
            let w2 = 2.0 * ch.freq;
            let (a, b) = (self.tau, tau);
            for (k, coefficient) in SecularCoefficient::ALL.into_iter().enumerate() {
                let integrand = |s: f64| match k {
                    0 => ch.delta(s),
                    1 => ch.delta(s) * (w2 * s).cos(),
                    2 => ch.delta(s) * (w2 * s).sin(),
                    3 => ch.pi(s) * (w2 * s).cos(),
                    _ => ch.pi(s) * (w2 * s).sin(),
                };
                let step = integrate_panelled(integrand, a, b, ch.max_panel(), Tolerance::absolute(STEP_ABS_TOL))
                    .map_err(|source| SecularError {
                        coefficient,
                        oscillator: self.oscillator,
                        tau,
                        source,
                    })?;
                self.sums[k] += step.value;
            }
            self.tau = tau;
        }
        Ok(self.current())
    }

    pub fn current(&self) -> SecularSet {
        let (s, c) = (2.0 * self.channel.freq * self.tau).sin_cos();
        let [dg, dc, ds, pc, ps] = self.sums;
        SecularSet {
            tau: self.tau,
            oscillator: self.oscillator,
            delta_gamma: dg,
            delta_co: c * dc + s * ds,
            delta_si: s * dc - c * ds,
            pi_co: c * pc + s * ps,
            pi_si: s * pc - c * ps,
        }
    }
}
