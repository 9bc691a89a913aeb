//! Domain record types, bundle validation and filtered views.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::date::CivilDate;

/// Current version of the three-file dataset schema.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Domain {
    Cv,
    Nlp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Architecture {
    Cnn,
    Transformer,
    Hybrid,
}

/// Precision mode of a GPU spec-sheet entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Fp32,
    Fp16,
    Tf32,
    /// FP16 tensor-core math with FP32 accumulation.
    MixedTensor,
}

/// Precision mode of a measured throughput run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BenchPrecision {
    Fp32,
    Tf32,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Deployment {
    Desktop,
    Server,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlopsProvenance {
    Reported,
    ToolMeasured,
    Estimated,
}

/// One published DNN.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelRecord {
    pub name: String,
    pub domain: Domain,
    /// Top-1 accuracy (CV) or GLUE test score (NLP), percent scale. Absent
    /// for compute-only NLP entries.
    pub score: Option<f64>,
    /// Millions of parameters.
    pub params_m: Option<f64>,
    /// GFLOPs for one forward pass, multiply-add pair counted as two ops.
    pub gflops_forward: f64,
    /// Tokens per input; NLP records only.
    pub input_tokens: Option<u32>,
    /// Extra training dataset label; `None` when trained on the benchmark
    /// dataset alone.
    pub extra_data: Option<String>,
    pub release_date: CivilDate,
    pub architecture: Architecture,
    pub flops_provenance: FlopsProvenance,
}

/// One GPU spec-sheet row for a given precision mode.
#[derive(Debug, Clone, PartialEq)]
pub struct GpuRecord {
    pub name: String,
    pub precision: Precision,
    pub tflops_peak: f64,
    pub tdp_watts: f64,
    pub launch_date: CivilDate,
    pub deployment: Deployment,
}

/// One measured inference throughput row.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputBenchmark {
    pub task_domain: Domain,
    pub model_name: String,
    pub framework: String,
    pub batch_size: u32,
    pub gpu_name: String,
    pub precision: BenchPrecision,
    /// Items per second.
    pub throughput: f64,
    /// GPU whose FP32 run is the speed-up baseline for this row.
    pub reference_gpu: String,
}

/// A validated dataset: models, GPUs and throughput benchmarks.
///
/// Immutable once constructed; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub models: Vec<ModelRecord>,
    pub gpus: Vec<GpuRecord>,
    pub benchmarks: Vec<ThroughputBenchmark>,
    pub schema_version: String,
}

impl DatasetBundle {
    pub fn new(
        models: Vec<ModelRecord>,
        gpus: Vec<GpuRecord>,
        benchmarks: Vec<ThroughputBenchmark>,
    ) -> Self {
        DatasetBundle {
            models,
            gpus,
            benchmarks,
            schema_version: String::from(SCHEMA_VERSION),
        }
    }

    pub fn models_in(&self, domain: Domain) -> impl Iterator<Item = &ModelRecord> {
        self.models.iter().filter(move |m| m.domain == domain)
    }

    pub fn gpu(&self, name: &str, precision: Precision) -> Option<&GpuRecord> {
        self.gpus
            .iter()
            .find(|g| g.name == name && g.precision == precision)
    }
}

/// A rule violation found while validating a bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleIssue {
    Invariant { record: String, rule: String },
    DanglingReference { benchmark: String, gpu: String },
}

impl fmt::Display for BundleIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleIssue::Invariant { record, rule } => {
                write!(f, "invariant violation: {record}: {rule}")
            }
            BundleIssue::DanglingReference { benchmark, gpu } => {
                write!(f, "dangling reference: benchmark {benchmark} names unknown GPU {gpu}")
            }
        }
    }
}

impl core::error::Error for BundleIssue {}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Checks every record- and bundle-level invariant. An empty result means
/// the bundle is valid; validation never stops at the first problem.
pub fn validate_bundle(bundle: &DatasetBundle) -> Vec<BundleIssue> {
    let mut issues = Vec::new();
    let invariant = |record: &str, rule: &str| BundleIssue::Invariant {
        record: String::from(record),
        rule: String::from(rule),
    };

    let mut model_names: BTreeSet<(Domain, &str)> = BTreeSet::new();
    for m in &bundle.models {
        if !positive(m.gflops_forward) {
            issues.push(invariant(&m.name, "gflops_forward must be positive"));
        }
        if let Some(p) = m.params_m {
            if !positive(p) {
                issues.push(invariant(&m.name, "params_m must be positive when present"));
            }
        }
        if let Some(s) = m.score {
            if !(s.is_finite() && s > 0.0 && s <= 100.0) {
                issues.push(invariant(&m.name, "score must lie in (0, 100]"));
            }
        }
        match (m.domain, m.input_tokens) {
            (Domain::Nlp, None) => {
                issues.push(invariant(&m.name, "NLP records must carry input_tokens"));
            }
            (Domain::Nlp, Some(0)) => {
                issues.push(invariant(&m.name, "input_tokens must be at least 1"));
            }
            (Domain::Cv, Some(_)) => {
                issues.push(invariant(&m.name, "CV records must not carry input_tokens"));
            }
            _ => {}
        }
        if !model_names.insert((m.domain, m.name.as_str())) {
            issues.push(invariant(&m.name, "duplicate model name within a domain"));
        }
    }

    let mut gpu_keys: BTreeSet<(&str, Precision)> = BTreeSet::new();
    let mut gpu_names: BTreeSet<&str> = BTreeSet::new();
    for g in &bundle.gpus {
        if !positive(g.tflops_peak) {
            issues.push(invariant(&g.name, "tflops_peak must be positive"));
        }
        if !positive(g.tdp_watts) {
            issues.push(invariant(&g.name, "tdp_watts must be positive"));
        }
        if !gpu_keys.insert((g.name.as_str(), g.precision)) {
            issues.push(invariant(&g.name, "duplicate (name, precision) GPU pair"));
        }
        gpu_names.insert(g.name.as_str());
    }

    let mut baseline_groups: BTreeSet<(&str, &str, u32, &str)> = BTreeSet::new();
    for b in &bundle.benchmarks {
        let id = format!("{} {} batch {} on {}", b.model_name, b.framework, b.batch_size, b.gpu_name);
        if !positive(b.throughput) {
            issues.push(invariant(&id, "throughput must be positive"));
        }
        if b.batch_size == 0 {
            issues.push(invariant(&id, "batch_size must be at least 1"));
        }
        for gpu in [&b.gpu_name, &b.reference_gpu] {
            if !gpu_names.contains(gpu.as_str()) {
                issues.push(BundleIssue::DanglingReference {
                    benchmark: id.clone(),
                    gpu: gpu.clone(),
                });
            }
        }
        baseline_groups.insert((
            b.model_name.as_str(),
            b.framework.as_str(),
            b.batch_size,
            b.reference_gpu.as_str(),
        ));
    }
    for (model, framework, batch, reference) in baseline_groups {
        let fp32_rows = bundle
            .benchmarks
            .iter()
            .filter(|b| {
                b.model_name == model
                    && b.framework == framework
                    && b.batch_size == batch
                    && b.reference_gpu == reference
                    && b.precision == BenchPrecision::Fp32
                    && b.gpu_name == reference
            })
            .count();
        if fp32_rows != 1 {
            issues.push(invariant(
                &format!("{model} {framework} batch {batch} (baseline {reference})"),
                "group must contain exactly one FP32 baseline row",
            ));
        }
    }

    issues
}

/// Returns models matching every predicate, ordered by release date
/// ascending with name as the tie-breaker.
///
/// `year_range` is an inclusive calendar-year interval. `extra_data` is a
/// tri-state: `None` keeps everything, `Some(true)` keeps models trained
/// with extra data, `Some(false)` keeps the rest.
pub fn filter_models(
    bundle: &DatasetBundle,
    domain: Domain,
    year_range: Option<(i32, i32)>,
    require_score: bool,
    extra_data: Option<bool>,
) -> Vec<&ModelRecord> {
    let mut out: Vec<&ModelRecord> = bundle
        .models
        .iter()
        .filter(|m| m.domain == domain)
        .filter(|m| {
            year_range.is_none_or(|(lo, hi)| {
                let y = m.release_date.year();
                lo <= y && y <= hi
            })
        })
        .filter(|m| !require_score || m.score.is_some())
        .filter(|m| extra_data.is_none_or(|want| m.extra_data.is_some() == want))
        .collect();
    out.sort_by(|a, b| {
        a.release_date
            .cmp(&b.release_date)
            .then_with(|| a.name.cmp(&b.name))
    });
    out
}

impl FromStr for Domain {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "CV" | "cv" => Ok(Domain::Cv),
            "NLP" | "nlp" => Ok(Domain::Nlp),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Cv => "CV",
            Domain::Nlp => "NLP",
        })
    }
}

impl FromStr for Architecture {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "CNN" => Ok(Architecture::Cnn),
            "Transformer" => Ok(Architecture::Transformer),
            "Hybrid" => Ok(Architecture::Hybrid),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Architecture::Cnn => "CNN",
            Architecture::Transformer => "Transformer",
            Architecture::Hybrid => "Hybrid",
        })
    }
}

impl FromStr for Precision {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "FP32" => Ok(Precision::Fp32),
            "FP16" => Ok(Precision::Fp16),
            "TF32" => Ok(Precision::Tf32),
            "MixedTensor" => Ok(Precision::MixedTensor),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Fp32 => "FP32",
            Precision::Fp16 => "FP16",
            Precision::Tf32 => "TF32",
            Precision::MixedTensor => "MixedTensor",
        })
    }
}

impl FromStr for BenchPrecision {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "FP32" => Ok(BenchPrecision::Fp32),
            "TF32" => Ok(BenchPrecision::Tf32),
            "Mixed" => Ok(BenchPrecision::Mixed),
            _ => Err(()),
        }
    }
}

impl fmt::Display for BenchPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchPrecision::Fp32 => "FP32",
            BenchPrecision::Tf32 => "TF32",
            BenchPrecision::Mixed => "Mixed",
        })
    }
}

impl FromStr for Deployment {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "Desktop" => Ok(Deployment::Desktop),
            "Server" => Ok(Deployment::Server),
            _ => Err(()),
        }
    }
}

impl fmt::Display for Deployment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Deployment::Desktop => "Desktop",
            Deployment::Server => "Server",
        })
    }
}

impl FromStr for FlopsProvenance {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "reported" => Ok(FlopsProvenance::Reported),
            "tool_measured" => Ok(FlopsProvenance::ToolMeasured),
            "estimated" => Ok(FlopsProvenance::Estimated),
            _ => Err(()),
        }
    }
}

impl fmt::Display for FlopsProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlopsProvenance::Reported => "reported",
            FlopsProvenance::ToolMeasured => "tool_measured",
            FlopsProvenance::Estimated => "estimated",
        })
    }
}
