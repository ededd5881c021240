//! Separability traces, entanglement events and parameter sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::gaussian::{assemble, propagate};
use crate::kernels::big_gamma;
use crate::numerics::refine_root;
use crate::params::{validate, Oscillator, PhysicalConfig, ValidatedConfig};
use crate::secular::{SecularAccumulator, SecularError};
use crate::separability::{simon_separability, symplectic_eigenvalues};

/// Grid values with `|S|` below this and no sign change are reported as touches.
pub const TOUCH_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityTrace {
    pub taus: Vec<f64>,
    pub s_values: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub gamma2: Vec<f64>,
    pub physical: Vec<bool>,
    pub config: ValidatedConfig,
}

impl SeparabilityTrace {
    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }
}

/// `S(τ)` evaluated from scratch, independent of any grid.
pub fn separability_at(config: &ValidatedConfig, tau: f64) -> Result<f64, SecularError> {
    Ok(simon_separability(&propagate(config, tau)?))
}

/// Sample `S(τ)` on the configured grid. The secular integrals are
/// accumulated along the grid, so this is a single pass.
pub fn compute_trace(config: &ValidatedConfig) -> Result<SeparabilityTrace, SecularError> {
    let taus = config.grid.taus();
    let n = taus.len();
    let mut trace = SeparabilityTrace {
        taus: Vec::with_capacity(n),
        s_values: Vec::with_capacity(n),
        gamma1: Vec::with_capacity(n),
        gamma2: Vec::with_capacity(n),
        physical: Vec::with_capacity(n),
        config: config.clone(),
    };
    let mut first = SecularAccumulator::new(Oscillator::First, config);
    let mut second = SecularAccumulator::new(Oscillator::Second, config);
    for tau in taus {
        let s1 = first.advance_to(tau)?;
        let s2 = second.advance_to(tau)?;
        let sigma = assemble(config, tau, &s1, &s2);
        trace.taus.push(tau);
        trace.s_values.push(simon_separability(&sigma));
        trace.gamma1.push(big_gamma(tau, config.omega1, config.alpha()));
        trace.gamma2.push(big_gamma(tau, config.omega2, config.alpha()));
        trace.physical.push(symplectic_eigenvalues(&sigma).physical);
    }
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingKind {
    /// Entangled to separable.
    Death,
    /// Separable to entangled.
    Revival,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub tau: f64,
    pub kind: CrossingKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementEvents {
    /// First death.
    pub tau_dis: Option<f64>,
    pub crossings: Vec<Crossing>,
    /// Grid points where `S` grazes zero without changing sign, plus
    /// sign changes that did not survive re-evaluation.
    pub touches: Vec<f64>,
    pub n_revivals: usize,
    pub survived: bool,
    /// Local extrema of the sampled `S` while entangled, before the final death.
    pub entangled_extrema: usize,
}

fn entangled(s: f64) -> bool {
    s < 0.0
}

/// Event detection on samples `values` of a function `s`, refining every
/// sign change by bisection on `s` itself.
pub fn detect_crossings<F: FnMut(f64) -> f64>(
    taus: &[f64],
    values: &[f64],
    mut s: F,
    refine_tol: f64,
) -> EntanglementEvents {
    assert_eq!(taus.len(), values.len());
    let mut crossings = Vec::new();
    let mut touches = Vec::new();
    // Zero counts as separable; keep the root finder's sign convention in step.
    let mut signed = |t: f64| {
        let v = s(t);
        if v == 0.0 {
            f64::MIN_POSITIVE
        } else {
            v
        }
    };
    // A near-zero sample is ambiguous and inherits the previous state.
    let mut state = Vec::with_capacity(values.len());
    for (i, &v) in values.iter().enumerate() {
        let ambiguous = i > 0 && v.abs() < TOUCH_THRESHOLD;
        state.push(if ambiguous { state[i - 1] } else { entangled(v) });
    }
    let mut anchor = 0;
    for i in 1..taus.len() {
        let (before, after) = (state[i - 1], state[i]);
        if before == after {
            if values[i].abs() < TOUCH_THRESHOLD && state.get(i + 1).is_none_or(|&next| next == after) {
                touches.push(taus[i]);
            }
        } else {
            match refine_root(&mut signed, taus[anchor], taus[i], refine_tol) {
                Ok(tau) => crossings.push(Crossing {
                    tau,
                    kind: if before {
                        CrossingKind::Death
                    } else {
                        CrossingKind::Revival
                    },
                }),
                Err(_) => touches.push(taus[i]),
            }
        }
        if values[i].abs() >= TOUCH_THRESHOLD {
            anchor = i;
        }
    }
    touches.sort_by(f64::total_cmp);

    let tau_dis = crossings.iter().find(|c| c.kind == CrossingKind::Death).map(|c| c.tau);
    let n_revivals = match tau_dis {
        Some(first) => crossings
            .iter()
            .filter(|c| c.kind == CrossingKind::Revival && c.tau > first)
            .count(),
        None => 0,
    };
    let final_death = match crossings.last() {
        Some(c) if c.kind == CrossingKind::Death => c.tau,
        _ => f64::INFINITY,
    };
    let entangled_extrema = (1..values.len().saturating_sub(1))
        .filter(|&i| {
            taus[i] < final_death && state[i] && (values[i] - values[i - 1]) * (values[i + 1] - values[i]) < 0.0
        })
        .count();

    EntanglementEvents {
        tau_dis,
        survived: crossings.is_empty(),
        crossings,
        touches,
        n_revivals,
        entangled_extrema,
    }
}

/// Events of a computed trace, with crossings refined on a fresh evaluation of `S`.
pub fn detect_events(trace: &SeparabilityTrace, refine_tol: f64) -> Result<EntanglementEvents, SecularError> {
    let mut failure = None;
    let events = detect_crossings(
        &trace.taus,
        &trace.s_values,
        |tau| match separability_at(&trace.config, tau) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        refine_tol,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(events),
    }
}

/// Trace plus events with the configured refinement tolerance.
pub fn analyze(config: &ValidatedConfig) -> Result<(SeparabilityTrace, EntanglementEvents), SecularError> {
    let trace = compute_trace(config)?;
    let events = detect_events(&trace, config.grid.refine_tol)?;
    Ok((trace, events))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    X1,
    X2,
    R,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::X1 => "x1",
            SweepAxis::X2 => "x2",
            SweepAxis::R => "r",
        }
    }

    pub fn apply(self, base: &PhysicalConfig, value: f64) -> PhysicalConfig {
        let mut cfg = *base;
        match self {
            SweepAxis::X1 => cfg.x1 = value,
            SweepAxis::X2 => cfg.x2 = value,
            SweepAxis::R => cfg.squeezing = value,
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub events: Option<EntanglementEvents>,
    pub error: Option<String>,
}

fn sweep_row(base: &ValidatedConfig, axis: SweepAxis, value: f64) -> SweepRow {
    let outcome = validate(&axis.apply(&base.physical, value), &base.grid)
        .map_err(|e| e.to_string())
        .and_then(|cfg| analyze(&cfg).map_err(|e| e.to_string()));
    match outcome {
        Ok((_, events)) => SweepRow {
            axis_value: value,
            events: Some(events),
            error: None,
        },
        Err(error) => SweepRow {
            axis_value: value,
            events: None,
            error: Some(error),
        },
    }
}

/// One trace and event analysis per value, rows in the given order.
/// `threads == 0` uses every available core.
pub fn sweep(base: &ValidatedConfig, axis: SweepAxis, values: &[f64], threads: usize) -> Vec<SweepRow> {
    let run = || values.par_iter().map(|&v| sweep_row(base, axis, v)).collect::<Vec<_>>();
    if threads == 0 {
        return run();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(run),
        Err(_) => values.iter().map(|&v| sweep_row(base, axis, v)).collect(),
    }
}
