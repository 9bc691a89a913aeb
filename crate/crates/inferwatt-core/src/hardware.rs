//! GPU efficiency (GFLOPS per Watt) and mixed-precision adaptation.
//!
//! Vendor spec sheets quote tensor-core peaks that inference workloads do
//! not reach. Measured throughput benchmarks give per-domain speed-ups
//! over FP32; multiplying a GPU's FP32 peak by the mean speed-up yields
//! "adapted" TFLOPS that track realizable performance, and dividing by
//! TDP gives the efficiency points the energy model regresses over.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::date::CivilDate;
use crate::records::{BenchPrecision, DatasetBundle, Domain, Precision, ThroughputBenchmark};

/// Domain tag of an efficiency point. `Generic` marks plain FP32 spec
/// entries; adapted points are always CV or NLP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointDomain {
    Generic,
    Cv,
    Nlp,
}

/// One (GPU, precision) efficiency sample on the launch-date axis.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyPoint {
    pub gpu_name: String,
    pub domain: PointDomain,
    pub gflops_per_watt: f64,
    pub launch_date: CivilDate,
    pub precision: Precision,
    pub adapted: bool,
    /// Peak or adapted TFLOPS behind the efficiency value.
    pub tflops: f64,
    pub tdp_watts: f64,
}

/// Which FP32 run anchored a speed-up group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedupBaseline {
    OwnFp32,
    V100Fp32,
}

/// Mean measured speed-up of one (GPU, precision, domain) group.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupSummary {
    pub gpu_name: String,
    pub precision: BenchPrecision,
    pub domain: Domain,
    pub mean_speedup: f64,
    pub sample_count: usize,
    pub baseline: SpeedupBaseline,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HardwareError {
    NonPositiveInput,
    /// Benchmark rows belong to different (model, framework, batch) groups.
    GroupMismatch,
    NonFp32Baseline,
    EmptyGroup,
    /// A speed-up group references a GPU with no FP32 spec entry.
    MissingFp32Record(String),
}

impl fmt::Display for HardwareError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HardwareError::NonPositiveInput => write!(f, "inputs must be positive"),
            HardwareError::GroupMismatch => {
                write!(f, "benchmark and baseline must share model, framework and batch")
            }
            HardwareError::NonFp32Baseline => write!(f, "baseline row must be an FP32 run"),
            HardwareError::EmptyGroup => write!(f, "no benchmark rows match the group"),
            HardwareError::MissingFp32Record(gpu) => {
                write!(f, "no FP32 spec entry for reference GPU {gpu}")
            }
        }
    }
}

impl core::error::Error for HardwareError {}

/// Peak efficiency at full utilization: `TFLOPS × 1000 / TDP`, in GFLOPS
/// per Watt (identically GFLOPs per Joule).
pub fn efficiency(tflops: f64, tdp_watts: f64) -> Result<f64, HardwareError> {
    if !(tflops.is_finite() && tflops > 0.0 && tdp_watts.is_finite() && tdp_watts > 0.0) {
        return Err(HardwareError::NonPositiveInput);
    }
    Ok(tflops * 1000.0 / tdp_watts)
}

/// Throughput ratio of a run over its FP32 baseline run.
pub fn benchmark_speedup(
    bench: &ThroughputBenchmark,
    baseline: &ThroughputBenchmark,
) -> Result<f64, HardwareError> {
    if baseline.precision != BenchPrecision::Fp32 {
        return Err(HardwareError::NonFp32Baseline);
    }
    if bench.model_name != baseline.model_name
        || bench.framework != baseline.framework
        || bench.batch_size != baseline.batch_size
    {
        return Err(HardwareError::GroupMismatch);
    }
    Ok(bench.throughput / baseline.throughput)
}

fn fp32_baseline<'a>(
    benchmarks: &'a [ThroughputBenchmark],
    row: &ThroughputBenchmark,
) -> Option<&'a ThroughputBenchmark> {
    benchmarks.iter().find(|b| {
        b.model_name == row.model_name
            && b.framework == row.framework
            && b.batch_size == row.batch_size
            && b.precision == BenchPrecision::Fp32
            && b.gpu_name == row.reference_gpu
    })
}

/// Arithmetic mean of the per-row speed-ups for one (GPU, precision,
/// domain) group. Ratios are summed in sorted order so the result does
/// not depend on row order. Sub-1 ratios are kept as computed.
pub fn aggregate_speedups(
    benchmarks: &[ThroughputBenchmark],
    gpu: &str,
    precision: BenchPrecision,
    domain: Domain,
) -> Result<SpeedupSummary, HardwareError> {
    let mut ratios = Vec::new();
    let mut own_baseline = true;
    for row in benchmarks.iter().filter(|b| {
        b.gpu_name == gpu && b.precision == precision && b.task_domain == domain
    }) {
        let baseline = fp32_baseline(benchmarks, row).ok_or(HardwareError::EmptyGroup)?;
        ratios.push(benchmark_speedup(row, baseline)?);
        own_baseline &= row.reference_gpu == row.gpu_name;
    }
    if ratios.is_empty() {
        return Err(HardwareError::EmptyGroup);
    }
    ratios.sort_by(f64::total_cmp);
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(SpeedupSummary {
        gpu_name: String::from(gpu),
        precision,
        domain,
        mean_speedup: mean,
        sample_count: ratios.len(),
        baseline: if own_baseline {
            SpeedupBaseline::OwnFp32
        } else {
            SpeedupBaseline::V100Fp32
        },
    })
}

/// Adapted TFLOPS: the reference GPU's FP32 peak scaled by the group's
/// mean speed-up. The reference is the GPU itself except where the
/// benchmarks anchored to another GPU's FP32 runs.
pub fn adapted_tflops(fp32_reference_tflops: f64, summary: &SpeedupSummary) -> Result<f64, HardwareError> {
    if !(fp32_reference_tflops.is_finite() && fp32_reference_tflops > 0.0)
        || !(summary.mean_speedup.is_finite() && summary.mean_speedup > 0.0)
    {
        return Err(HardwareError::NonPositiveInput);
    }
    Ok(fp32_reference_tflops * summary.mean_speedup)
}

/// FP32 spec entries whose precision mode does not describe deployed
/// inference practice: the Ampere parts execute TF32 in place of FP32 and
/// the P100 ran FP16 for deep-learning workloads. They are skipped when
/// emitting generic efficiency points.
pub const NON_DEPLOYED_FP32: [&str; 3] = ["Tesla P100", "A100", "A30"];

/// Builds the efficiency table behind the energy model: one generic point
/// per deployed FP32 spec entry plus per-domain adapted points for every
/// (GPU, precision, domain) group in the benchmarks.
///
/// Generic points come first, ordered by launch date then name; adapted
/// CV points follow, then adapted NLP points, each ordered by launch
/// date, name and precision.
pub fn build_adapted_table(bundle: &DatasetBundle) -> Result<Vec<EfficiencyPoint>, HardwareError> {
    let mut generic: Vec<EfficiencyPoint> = Vec::new();
    for g in &bundle.gpus {
        if g.precision != Precision::Fp32 || NON_DEPLOYED_FP32.contains(&g.name.as_str()) {
            continue;
        }
        generic.push(EfficiencyPoint {
            gpu_name: g.name.clone(),
            domain: PointDomain::Generic,
            gflops_per_watt: efficiency(g.tflops_peak, g.tdp_watts)?,
            launch_date: g.launch_date,
            precision: Precision::Fp32,
            adapted: false,
            tflops: g.tflops_peak,
            tdp_watts: g.tdp_watts,
        });
    }
    generic.sort_by(|a, b| {
        (a.launch_date, &a.gpu_name).cmp(&(b.launch_date, &b.gpu_name))
    });

    let mut groups: Vec<(String, BenchPrecision, Domain, String)> = Vec::new();
    for b in &bundle.benchmarks {
        if b.precision == BenchPrecision::Fp32 {
            continue;
        }
        let key = (b.gpu_name.clone(), b.precision, b.task_domain, b.reference_gpu.clone());
        if !groups.contains(&key) {
            groups.push(key);
        }
    }

    let mut adapted: Vec<EfficiencyPoint> = Vec::new();
    for (gpu, precision, domain, reference) in groups {
        let summary = aggregate_speedups(&bundle.benchmarks, &gpu, precision, domain)?;
        let reference_fp32 = bundle
            .gpu(&reference, Precision::Fp32)
            .ok_or_else(|| HardwareError::MissingFp32Record(reference.clone()))?;
        let tflops = adapted_tflops(reference_fp32.tflops_peak, &summary)?;
        // TDP and launch date are the adapted GPU's own, whatever its
        // reference; prefer the FP32 entry, fall back to any spec row.
        let own = bundle.gpu(&gpu, Precision::Fp32).or_else(|| {
            bundle.gpus.iter().find(|g| g.name == gpu)
        });
        let own = own.ok_or_else(|| HardwareError::MissingFp32Record(gpu.clone()))?;
        adapted.push(EfficiencyPoint {
            gpu_name: gpu,
            domain: match domain {
                Domain::Cv => PointDomain::Cv,
                Domain::Nlp => PointDomain::Nlp,
            },
            gflops_per_watt: efficiency(tflops, own.tdp_watts)?,
            launch_date: own.launch_date,
            precision: match precision {
                BenchPrecision::Tf32 => Precision::Tf32,
                _ => Precision::MixedTensor,
            },
            adapted: true,
            tflops,
            tdp_watts: own.tdp_watts,
        });
    }
    adapted.sort_by(|a, b| {
        (a.domain, a.launch_date, &a.gpu_name, a.precision)
            .cmp(&(b.domain, b.launch_date, &b.gpu_name, b.precision))
    });

    generic.extend(adapted);
    Ok(generic)
}
