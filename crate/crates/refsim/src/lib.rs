//! Simulation library for adaptive control of networked mechanical systems
//! whose controllers are driven by integrated reference dynamics rather than
//! differentiated reference signals.
//!
//! The library covers:
//!
//! - weighted directed interaction graphs with dwell-time switching schedules
//!   ([`graph`]),
//! - time-varying (possibly discontinuous) communication delays with
//!   interpolated signal histories ([`delay`]),
//! - plant models: generic Lagrangian systems with regressors, a two-link
//!   planar arm, point masses, thrust-propelled vehicles, and spacecraft with
//!   reaction wheels ([`models`]),
//! - reference-dynamics generators of first through arbitrary order, for
//!   consensus, tracking, task-space, attitude, and distributed-tracking
//!   problems ([`refdyn`]),
//! - the matching control and adaptation laws ([`control`]),
//! - fixed-step closed-loop integration with delay histories, switch-time
//!   alignment, Lyapunov monitors, and metric extraction ([`sim`]),
//! - a scenario-config front end and batch CLI ([`config`], [`cli`]).

pub mod cli;
pub mod config;
pub mod control;
pub mod delay;
pub mod error;
pub mod graph;
pub mod models;
pub mod refdyn;
pub mod sim;

pub use error::{ConfigError, SimError};
