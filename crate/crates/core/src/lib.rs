//! Estimation and inference for current status data observed on a regular time grid.
//!
//! The crate is organized around three layers:
//!
//! - [`isotonic`]: weighted isotonic regression (pool adjacent violators) and
//!   greatest convex minorant primitives, the shared computational kernel;
//! - [`model`]: the observation model itself: grids, binned counts, the
//!   monotone maximum likelihood estimator of the event-time distribution;
//! - [`limits`], [`nuisance`], [`ci`]: Monte Carlo samplers for the estimator's
//!   limit laws, plug-in estimation of the local nuisance parameters, and the
//!   confidence interval constructions built on both.
//!
//! Everything here is `no_std` + `alloc`; IO, file formats, and the simulation
//! harness live in the companion `gridcs` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ci;
pub mod error;
pub mod isotonic;
pub mod limits;
pub mod model;
pub mod normal;
pub mod nuisance;
pub mod rng;

pub use error::{Error, Result};
