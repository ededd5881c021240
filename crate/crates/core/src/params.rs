//! Physical and numerical configuration.
//!
//! Everything downstream works in dimensionless units with the bath cut-off
//! frequency, ħ and k_B set to one. Times are τ = ω_c t and oscillator
//! frequencies are ω_i/ω_c = 1/x_i.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lower edge of the squeezing band the model was studied in.
pub const STUDIED_SQUEEZING_MIN: f64 = 0.01;
/// Upper edge of the squeezing band the model was studied in.
pub const STUDIED_SQUEEZING_MAX: f64 = 1.0;
/// Below this k_BT/ħω_c the high-temperature closed forms lose accuracy.
pub const HIGH_TEMPERATURE_FLOOR: f64 = 10.0;

/// How the secular coefficients are placed into the local covariance blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecularForm {
    /// Block obtained from the moment equations of the master equation:
    /// the rotating secular part enters x and p with opposite signs.
    #[default]
    Derived,
    /// Both diagonal entries carry `Δ_Γ + Δ_co − Π_si`, off-diagonal
    /// `−Δ_si + Π_co`, exactly as the block is usually printed.
    AsPrinted,
}

impl fmt::Display for SecularForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SecularForm::Derived => f.write_str("derived"),
            SecularForm::AsPrinted => f.write_str("as_printed"),
        }
    }
}

/// Full experiment definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConfig {
    /// Two-mode squeezing parameter `r`.
    pub squeezing: f64,
    /// Resonance parameter `x1 = ω_c/ω_1`.
    pub x1: f64,
    /// Resonance parameter `x2 = ω_c/ω_2`.
    pub x2: f64,
    /// System-bath coupling constant.
    pub alpha: f64,
    /// k_B T / (ħ ω_c).
    pub temperature_ratio: f64,
    pub secular_form: SecularForm,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self {
            squeezing: 1.0,
            x1: 1.0,
            x2: 1.0,
            alpha: 0.1,
            temperature_ratio: 100.0,
            secular_form: SecularForm::Derived,
        }
    }
}

impl PhysicalConfig {
    pub fn new(squeezing: f64, x1: f64, x2: f64) -> Self {
        Self {
            squeezing,
            x1,
            x2,
            ..Self::default()
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_temperature_ratio(mut self, temperature_ratio: f64) -> Self {
        self.temperature_ratio = temperature_ratio;
        self
    }

    pub fn with_secular_form(mut self, form: SecularForm) -> Self {
        self.secular_form = form;
        self
    }
}

/// Sampling window in dimensionless time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub tau_max: f64,
    pub dtau: f64,
    /// Width of the bracket a refined zero crossing is reported to.
    pub refine_tol: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            tau_max: 10.0,
            dtau: 1e-3,
            refine_tol: 1e-8,
        }
    }
}

impl GridConfig {
    pub fn new(tau_max: f64, dtau: f64, refine_tol: f64) -> Self {
        Self {
            tau_max,
            dtau,
            refine_tol,
        }
    }

    /// Number of samples on `[0, tau_max]`, endpoints included.
    pub fn len(&self) -> usize {
        (self.tau_max / self.dtau - 1e-9).ceil() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The sample times. The last point is clamped to `tau_max` when the
    /// step does not divide the window evenly.
    pub fn taus(&self) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|k| (k as f64 * self.dtau).min(self.tau_max)).collect()
    }
}

/// Non-fatal observations made during validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfigWarning {
    SqueezingOutsideStudiedBand { squeezing: f64 },
    LowTemperature { temperature_ratio: f64 },
}

impl fmt::Display for ConfigWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigWarning::SqueezingOutsideStudiedBand { squeezing } => write!(
                f,
                "squeezing r = {squeezing} lies outside the studied band [{STUDIED_SQUEEZING_MIN}, {STUDIED_SQUEEZING_MAX}]"
            ),
            ConfigWarning::LowTemperature { temperature_ratio } => write!(
                f,
                "temperature_ratio = {temperature_ratio} is below {HIGH_TEMPERATURE_FLOOR}; high-temperature kernels are inaccurate"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("`{field}` must be positive, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("`{field}` must be non-negative, got {value}")]
    Negative { field: &'static str, value: f64 },
    #[error("`{field}` must be finite, got {value}")]
    NotFinite { field: &'static str, value: f64 },
    #[error("`dtau` ({dtau}) must be smaller than `tau_max` ({tau_max})")]
    StepTooLarge { dtau: f64, tau_max: f64 },
    #[error("`refine_tol` ({refine_tol}) must be smaller than `dtau` ({dtau})")]
    RefineTolTooLarge { refine_tol: f64, dtau: f64 },
}

/// A configuration that passed [`validate`], with the oscillator frequencies
/// derived in units of the cut-off.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidatedConfig {
    pub physical: PhysicalConfig,
    pub grid: GridConfig,
    /// ω_1/ω_c = 1/x1.
    pub omega1: f64,
    /// ω_2/ω_c = 1/x2.
    pub omega2: f64,
    pub warnings: Vec<ConfigWarning>,
}

impl ValidatedConfig {
    pub fn squeezing(&self) -> f64 {
        self.physical.squeezing
    }

    pub fn alpha(&self) -> f64 {
        self.physical.alpha
    }

    pub fn temperature_ratio(&self) -> f64 {
        self.physical.temperature_ratio
    }

    pub fn omega(&self, oscillator: Oscillator) -> f64 {
        match oscillator {
            Oscillator::First => self.omega1,
            Oscillator::Second => self.omega2,
        }
    }

    /// Same physics with the two oscillators exchanged.
    pub fn swapped(&self) -> ValidatedConfig {
        let mut physical = self.physical;
        std::mem::swap(&mut physical.x1, &mut physical.x2);
        ValidatedConfig {
            physical,
            grid: self.grid,
            omega1: self.omega2,
            omega2: self.omega1,
            warnings: self.warnings.clone(),
        }
    }
}

/// Oscillator index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Oscillator {
    First,
    Second,
}

impl Oscillator {
    pub const BOTH: [Oscillator; 2] = [Oscillator::First, Oscillator::Second];

    pub fn index(self) -> usize {
        match self {
            Oscillator::First => 1,
            Oscillator::Second => 2,
        }
    }

    pub fn from_index(index: usize) -> Option<Self> {
        match index {
            1 => Some(Oscillator::First),
            2 => Some(Oscillator::Second),
            _ => None,
        }
    }
}

fn finite(field: &'static str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::NotFinite { field, value })
    }
}

fn positive(field: &'static str, value: f64) -> Result<f64, ConfigError> {
    if finite(field, value)? > 0.0 {
        Ok(value)
    } else {
        Err(ConfigError::NotPositive { field, value })
    }
}

fn non_negative(field: &'static str, value: f64) -> Result<f64, ConfigError> {
    if finite(field, value)? >= 0.0 {
        Ok(value)
    } else {
        Err(ConfigError::Negative { field, value })
    }
}

/// Check a configuration and derive the oscillator frequencies.
///
/// Warnings are collected into the returned value, never printed.
pub fn validate(config: &PhysicalConfig, grid: &GridConfig) -> Result<ValidatedConfig, ConfigError> {
    non_negative("r", config.squeezing)?;
    let x1 = positive("x1", config.x1)?;
    let x2 = positive("x2", config.x2)?;
    non_negative("alpha", config.alpha)?;
    positive("temperature_ratio", config.temperature_ratio)?;

    let tau_max = positive("tau_max", grid.tau_max)?;
    let dtau = positive("dtau", grid.dtau)?;
    let refine_tol = positive("refine_tol", grid.refine_tol)?;
    if dtau >= tau_max {
        return Err(ConfigError::StepTooLarge { dtau, tau_max });
    }
    if refine_tol >= dtau {
        return Err(ConfigError::RefineTolTooLarge { refine_tol, dtau });
    }

    let mut warnings = Vec::new();
    if !(STUDIED_SQUEEZING_MIN..=STUDIED_SQUEEZING_MAX).contains(&config.squeezing) {
        warnings.push(ConfigWarning::SqueezingOutsideStudiedBand {
            squeezing: config.squeezing,
        });
    }
    if config.temperature_ratio < HIGH_TEMPERATURE_FLOOR {
        warnings.push(ConfigWarning::LowTemperature {
            temperature_ratio: config.temperature_ratio,
        });
    }

    Ok(ValidatedConfig {
        physical: *config,
        grid: *grid,
        omega1: 1.0 / x1,
        omega2: 1.0 / x2,
        warnings,
    })
}
