//! Numerical toolkit for an optomechanical quantum Otto engine.
//!
//! A driven cavity mode coupled to a mechanical resonator is linearized
//! around its mean field; the two resulting polariton branches serve as the
//! working medium of an Otto cycle driven by sweeping the pump detuning.
//! The crate provides the closed-form polariton spectrum, an exact
//! symplectic (Williamson) treatment of Gaussian thermal states, cycle
//! energetics, operational constraints of a realizable protocol, and a
//! parallel parameter-sweep engine with CSV and heatmap output.
//!
//! All frequencies and rates are angular (rad/s); temperatures are kelvin;
//! energies are joules unless a field name says otherwise.

// Negated comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod cycle;
pub mod error;
pub mod gaussian;
pub mod heatmap;
pub mod model;
pub mod protocol;
pub mod report;
pub mod scenario;
pub mod sweep;

pub use cycle::{CycleConfig, CycleResult};
pub use error::{Error, Result};
pub use gaussian::{BogoliubovTransform, GaussianState, QuadraticForm};
pub use model::{Branch, PolaritonSpectrum, SystemParams};
pub use scenario::Scenario;
pub use sweep::SweepTable;
