//! Traffic-driven growth of weighted directed graphs.
//!
//! New nodes attach to existing ones with probability proportional to
//! in-strength, and each new link reinforces the traffic on the target's
//! out-links. [`growth`] runs the dynamics on top of the [`sampler`] index,
//! [`analysis`] measures the resulting graphs, [`theory`] holds the
//! mean-field predictions, and [`io`] / [`app`] provide the file formats and
//! command-line workflows.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod app;
pub mod error;
pub mod growth;
pub mod io;
pub mod params;
pub mod sampler;
pub mod theory;
pub mod variates;

pub use error::{Error, Result};
pub use growth::{GrowthState, InvariantReport, StepReport, Trajectory};
pub use params::ModelParams;
pub use sampler::{naive_sample, CumulativeWeightIndex, LinearScanSampler, WeightedSampler};
