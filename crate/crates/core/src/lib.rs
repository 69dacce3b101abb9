//! Simulation core for CSI-free wireless energy transfer to buried sensors.
//!
//! The crate is split along the physical chain a charging link goes through:
//!
//! - [`soil`]: air, refraction and in-soil attenuation plus soil permittivity.
//! - [`channel`]: Rician fading vectors for a uniform linear array.
//! - [`schemes`]: the CSI-free transmission schemes and incident power rules.
//! - [`power`]: budget to transmit power mapping, including the servo motor.
//! - [`placement`]: K-Means and equally-far-from-center beacon placement.
//! - [`engine`]: Monte Carlo orchestration, heatmaps and parameter sweeps.
//!
//! All losses are linear factors and all powers are watts; dBm only shows up
//! through [`units`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod engine;
mod error;
pub mod placement;
pub mod power;
pub mod rng;
pub mod schemes;
pub mod soil;
pub mod units;

pub use error::{Error, Result};

/// A point on the ground plane, meters.
pub type Point = [f64; 2];
