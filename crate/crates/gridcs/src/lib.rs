//! Simulation studies and a command line front end for confidence intervals
//! from current status data observed on a regular inspection grid.
//!
//! The numerical core lives in `gridcs-core`; this crate adds everything that
//! needs an operating system: file formats, scenario batteries, parallel
//! Monte Carlo drivers, and the `gridcs` binary.

pub mod cli;
pub mod io;
pub mod sim;
pub mod stats;
