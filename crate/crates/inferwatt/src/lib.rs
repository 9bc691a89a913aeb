//! Dataset IO, analysis orchestration and report emission for the
//! inference-cost pipeline. The algorithms live in `inferwatt-core`; this
//! crate adds the CSV schemas, the bundled dataset, figure-series files
//! and the `inferwatt` command line.

pub mod analysis;
pub mod fixtures;
pub mod fmt;
pub mod load;
pub mod report;

pub use inferwatt_core as core;
