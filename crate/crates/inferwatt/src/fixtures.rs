//! The bundled dataset: compiled CV and NLP model records, GPU spec
//! entries and inference throughput benchmarks, embedded at build time.
//!
//! Set `INFERWATT_DATA_DIR` to a directory holding `models.csv`,
//! `gpus.csv` and `benchmarks.csv` to override the bundled files.

use std::path::{Path, PathBuf};

use inferwatt_core::records::DatasetBundle;

use crate::load::{load_bundle, load_bundle_from_readers, LoadError};

pub const MODELS_CSV: &str = include_str!("../data/models.csv");
pub const GPUS_CSV: &str = include_str!("../data/gpus.csv");
pub const BENCHMARKS_CSV: &str = include_str!("../data/benchmarks.csv");

/// Environment variable naming an alternative fixture directory.
pub const DATA_DIR_ENV: &str = "INFERWATT_DATA_DIR";

/// Loads the embedded dataset.
pub fn bundled() -> Result<DatasetBundle, Vec<LoadError>> {
    load_bundle_from_readers(
        MODELS_CSV.as_bytes(),
        GPUS_CSV.as_bytes(),
        BENCHMARKS_CSV.as_bytes(),
    )
}

/// Loads from `INFERWATT_DATA_DIR` when set, otherwise the embedded data.
pub fn default_bundle() -> Result<DatasetBundle, Vec<LoadError>> {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => load_from_dir(Path::new(&dir)),
        None => bundled(),
    }
}

pub fn load_from_dir(dir: &Path) -> Result<DatasetBundle, Vec<LoadError>> {
    let path = |name: &str| -> PathBuf { dir.join(name) };
    load_bundle(&path("models.csv"), &path("gpus.csv"), &path("benchmarks.csv"))
}
