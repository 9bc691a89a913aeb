//! Inference-cost analysis primitives.
//!
//! Pure computation over compiled model and GPU datasets: FLOPs
//! scaling-law estimators, GPU efficiency (GFLOPS per Watt) with
//! mixed-precision adaptation, log-linear trend fits, Pareto frontiers,
//! Joules-per-forward-pass estimates and forecasts against human energy
//! baselines.
//!
//! The crate is `no_std` (`alloc` required). File formats, bundled
//! datasets and the command-line front end live in the companion
//! `inferwatt-cli` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod date;
pub mod energy;
pub mod flops;
pub mod forecast;
pub mod hardware;
pub mod records;
pub mod trend;

mod math;

pub use date::CivilDate;
pub use records::{DatasetBundle, Domain, GpuRecord, ModelRecord, ThroughputBenchmark};
pub use trend::TrendFit;
