//! Downlink coverage probability of a Poisson field of ground base stations
//! serving aerial (drone) and terrestrial users.
//!
//! Two independent routes are provided: [`analytic`] evaluates the exact
//! coverage integrals numerically, [`monte_carlo`] simulates network drops.
//! [`experiments`] sweeps parameters and cross-validates the two.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod analytic;
pub mod channel;
pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod monte_carlo;
pub mod quadrature;
pub mod scenario;
pub mod units;

pub use analytic::{CoverageModel, CoverageResult, Method, QuadratureSpec};
pub use channel::{AntennaPattern, ChannelParams, EnvironmentParams, EnvironmentPreset, LinkGeometry, LinkState};
pub use error::{CoverageError, Result};
pub use monte_carlo::{CoverageEstimate, SimulationSpec, Simulator};
pub use scenario::NetworkScenario;
