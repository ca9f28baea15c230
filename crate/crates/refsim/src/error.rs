//! Error types shared across the crate.

use thiserror::Error;

/// Scenario-configuration rejection, produced while loading or validating.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Invalid(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ConfigError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        ConfigError::Invalid(msg.into())
    }
}

/// Runtime failure of a simulation run.
#[derive(Debug, Error)]
pub enum SimError {
    /// A state component left the representable range.
    #[error("state diverged (non-finite component) at t = {t}")]
    Diverged { t: f64 },
    /// Thrust fell below the configured floor; the linearization is no
    /// longer invertible with acceptable conditioning.
    #[error("agent {agent} thrust {sigma} fell below floor {floor} at t = {t}")]
    ThrustFloor {
        agent: usize,
        t: f64,
        sigma: f64,
        floor: f64,
    },
    /// Estimated Jacobian condition number exceeded the configured cap.
    #[error("estimated Jacobian near-singular (cond = {cond:.3e}) at t = {t}")]
    JacobianSingular { t: f64, cond: f64 },
    /// A delayed lookup asked for data older than the retained horizon.
    #[error("history query at {query} older than retained horizon (oldest {oldest})")]
    HistoryUnderflow { query: f64, oldest: f64 },
    /// Non-monotone recording into a history buffer.
    #[error("history record at {t} is not after the previous sample at {last}")]
    NonMonotoneRecord { t: f64, last: f64 },
    /// Window arguments outside the schedule domain.
    #[error("window [{a}, {b}) is not a valid schedule window")]
    BadWindow { a: f64, b: f64 },
}
