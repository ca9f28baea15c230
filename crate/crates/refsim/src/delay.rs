//! Time-varying communication-delay profiles and interpolated signal
//! histories.
//!
//! Delays never get differentiated anywhere in the crate: delayed neighbor
//! data enters controllers only through [`HistoryBuffer::sample_delayed`],
//! which is an interpolating read of recorded samples. Discontinuous delay
//! profiles therefore need no special treatment beyond bounds checking.

use crate::error::{ConfigError, SimError};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// Shape of a delay profile T(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DelayKind {
    Constant {
        value: f64,
    },
    /// `base + amplitude * sin(rate * t)`, plus optional additive step
    /// offsets `[(time, delta)]` applied from their times onward
    /// (right-continuous).
    Sinusoidal {
        base: f64,
        amplitude: f64,
        rate: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        jumps: Vec<(f64, f64)>,
    },
    /// Piecewise-constant absolute values `[(time, value)]`; the value at
    /// `t` is the entry with the largest time `<= t` (right-continuous).
    PiecewiseConstant {
        steps: Vec<(f64, f64)>,
    },
}

/// A per-edge delay profile with a hard upper bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayProfile {
    #[serde(flatten)]
    pub kind: DelayKind,
    /// Uniform bound `T_max`; `0 <= T(t) <= T_max` is checked at load by
    /// sampling on the integration grid.
    pub bound: f64,
}

impl DelayProfile {
    pub fn constant(value: f64, bound: f64) -> Self {
        Self {
            kind: DelayKind::Constant { value },
            bound,
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0, 0.0)
    }

    /// Delay value at time `t`. Piecewise-constant pieces are
    /// right-continuous at their jump times.
    pub fn delay_at(&self, t: f64) -> f64 {
        match &self.kind {
            DelayKind::Constant { value } => *value,
            DelayKind::Sinusoidal {
                base,
                amplitude,
                rate,
                jumps,
            } => {
                let mut v = base + amplitude * (rate * t).sin();
                for &(tj, dj) in jumps {
                    if t >= tj {
                        v += dj;
                    }
                }
                v
            }
            DelayKind::PiecewiseConstant { steps } => {
                let mut v = steps.first().map_or(0.0, |&(_, v0)| v0);
                for &(ts, vs) in steps {
                    if t >= ts {
                        v = vs;
                    }
                }
                v
            }
        }
    }

    /// True when the profile has a continuous derivative (no jumps), which
    /// the backstepping baseline needs for its analytic reference
    /// acceleration.
    pub fn is_differentiable(&self) -> bool {
        match &self.kind {
            DelayKind::Constant { .. } => true,
            DelayKind::Sinusoidal { jumps, .. } => jumps.is_empty(),
            DelayKind::PiecewiseConstant { steps } => steps.len() <= 1,
        }
    }

    /// Analytic time derivative for differentiable profiles.
    pub fn derivative_at(&self, t: f64) -> f64 {
        match &self.kind {
            DelayKind::Constant { .. } | DelayKind::PiecewiseConstant { .. } => 0.0,
            DelayKind::Sinusoidal {
                amplitude, rate, ..
            } => amplitude * rate * (rate * t).cos(),
        }
    }

    /// Times at which the profile jumps (for grid alignment at load).
    pub fn jump_times(&self) -> Vec<f64> {
        match &self.kind {
            DelayKind::Constant { .. } => vec![],
            DelayKind::Sinusoidal { jumps, .. } => jumps.iter().map(|&(t, _)| t).collect(),
            DelayKind::PiecewiseConstant { steps } => {
                steps.iter().skip(1).map(|&(t, _)| t).collect()
            }
        }
    }

    /// Sample the profile over `[0, t_end]` with step `h` and reject values
    /// outside `[0, bound]`.
    pub fn validate_range(&self, t_end: f64, h: f64) -> Result<(), ConfigError> {
        let steps = (t_end / h).ceil() as usize;
        for k in 0..=steps {
            let t = k as f64 * h;
            let v = self.delay_at(t);
            if !(0.0..=self.bound).contains(&v) {
                return Err(ConfigError::invalid(format!(
                    "delay profile evaluates to {v} at t = {t}, outside [0, {}]",
                    self.bound
                )));
            }
        }
        Ok(())
    }
}

/// Time-ordered samples of a vector signal with linear interpolation, a
/// retention horizon, and constant-hold pre-history for queries before the
/// first sample.
#[derive(Debug, Clone)]
pub struct HistoryBuffer {
    samples: VecDeque<(f64, DVector<f64>)>,
    horizon: f64,
    initial: DVector<f64>,
    evicted: bool,
}

impl HistoryBuffer {
    /// `initial` is returned for any query before the first recorded sample.
    pub fn new(horizon: f64, initial: DVector<f64>) -> Self {
        Self {
            samples: VecDeque::new(),
            horizon,
            initial,
            evicted: false,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Append a sample; `t` must exceed the previous sample time. Samples
    /// older than `t - horizon` are evicted.
    pub fn record(&mut self, t: f64, x: DVector<f64>) -> Result<(), SimError> {
        if let Some(&(last, _)) = self.samples.back() {
            if t <= last {
                return Err(SimError::NonMonotoneRecord { t, last });
            }
        }
        self.samples.push_back((t, x));
        let cutoff = t - self.horizon;
        while self.samples.len() > 1 && self.samples[1].0 <= cutoff {
            self.samples.pop_front();
            self.evicted = true;
        }
        Ok(())
    }

    /// Value of the signal at `t - delay` by linear interpolation between
    /// the bracketing samples. Queries before the first-ever sample return
    /// the initial value; queries past the newest sample hold its value
    /// (only reachable when the delay is shorter than one integration step).
    pub fn sample_delayed(&self, t: f64, delay: f64) -> Result<DVector<f64>, SimError> {
        let query = t - delay;
        let Some(&(oldest, _)) = self.samples.front() else {
            return Ok(self.initial.clone());
        };
        if query < oldest {
            if self.evicted {
                return Err(SimError::HistoryUnderflow { query, oldest });
            }
            return Ok(self.initial.clone());
        }
        let (newest, newest_val) = self.samples.back().unwrap();
        if query >= *newest {
            return Ok(newest_val.clone());
        }
        // Binary search for the first sample at or after the query time.
        let idx = self
            .samples
            .partition_point(|&(ts, _)| ts <= query);
        let (t0, x0) = &self.samples[idx - 1];
        let (t1, x1) = &self.samples[idx];
        let a = (query - t0) / (t1 - t0);
        Ok(x0 * (1.0 - a) + x1 * a)
    }
}
