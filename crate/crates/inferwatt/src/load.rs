//! CSV ingestion and serialization for the three dataset files.
//!
//! Schemas (comma-separated, UTF-8, header row required, empty string
//! means absent):
//!
//! - `models.csv`: `name,domain,score,params_m,gflops,input_tokens,extra_data,release_date,architecture,flops_provenance`
//! - `gpus.csv`: `name,precision,tflops,tdp_w,launch_date,deployment`
//! - `benchmarks.csv`: `task_domain,model,framework,batch,gpu,precision,throughput,reference_gpu`
//!
//! Dates are `DD/MM/YYYY`. Loading is total: the result is either a fully
//! validated bundle or the complete list of problems, never a silent
//! partial parse.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use inferwatt_core::date::CivilDate;
use inferwatt_core::records::{
    validate_bundle, Architecture, BenchPrecision, BundleIssue, DatasetBundle, Deployment, Domain,
    FlopsProvenance, GpuRecord, ModelRecord, Precision, ThroughputBenchmark,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LoadError {
    #[error("{file}: {message}")]
    Io { file: String, message: String },
    #[error("{file}: missing column {column}")]
    MissingColumn { file: String, column: String },
    #[error("{file} row {row}: column {column}: cannot parse {value:?}")]
    UnparseableValue {
        file: String,
        row: usize,
        column: String,
        value: String,
    },
    #[error("invariant violation: {record}: {rule}")]
    InvariantViolation { record: String, rule: String },
    #[error("dangling reference: benchmark {benchmark} names unknown GPU {gpu}")]
    DanglingReference { benchmark: String, gpu: String },
}

const MODEL_COLUMNS: [&str; 10] = [
    "name",
    "domain",
    "score",
    "params_m",
    "gflops",
    "input_tokens",
    "extra_data",
    "release_date",
    "architecture",
    "flops_provenance",
];
const GPU_COLUMNS: [&str; 6] = ["name", "precision", "tflops", "tdp_w", "launch_date", "deployment"];
const BENCH_COLUMNS: [&str; 8] = [
    "task_domain",
    "model",
    "framework",
    "batch",
    "gpu",
    "precision",
    "throughput",
    "reference_gpu",
];

struct Sheet {
    file: String,
    header: Vec<String>,
    rows: Vec<(usize, csv::StringRecord)>,
}

fn read_sheet<R: Read>(file: &str, reader: R, columns: &[&str], errors: &mut Vec<LoadError>) -> Option<Sheet> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let header: Vec<String> = match rdr.headers() {
        Ok(h) => h.iter().map(str::to_string).collect(),
        Err(e) => {
            errors.push(LoadError::Io { file: file.to_string(), message: e.to_string() });
            return None;
        }
    };
    let mut missing = false;
    for col in columns {
        if !header.iter().any(|h| h == col) {
            errors.push(LoadError::MissingColumn { file: file.to_string(), column: col.to_string() });
            missing = true;
        }
    }
    if missing {
        return None;
    }
    let mut rows = Vec::new();
    // Row numbers are 1-based over data rows, matching editor views with
    // the header on line 1.
    for (i, rec) in rdr.records().enumerate() {
        match rec {
            Ok(r) => rows.push((i + 1, r)),
            Err(e) => errors.push(LoadError::Io { file: file.to_string(), message: e.to_string() }),
        }
    }
    Some(Sheet { file: file.to_string(), header, rows })
}

struct Row<'a> {
    sheet: &'a Sheet,
    row: usize,
    record: &'a csv::StringRecord,
}

impl Row<'_> {
    fn raw(&self, column: &str) -> &str {
        let idx = self.sheet.header.iter().position(|h| h == column).unwrap();
        self.record.get(idx).unwrap_or("")
    }

    fn error(&self, column: &str, errors: &mut Vec<LoadError>) {
        errors.push(LoadError::UnparseableValue {
            file: self.sheet.file.clone(),
            row: self.row,
            column: column.to_string(),
            value: self.raw(column).to_string(),
        });
    }

    fn text(&self, column: &str) -> String {
        self.raw(column).to_string()
    }

    fn parse<T: std::str::FromStr>(&self, column: &str, errors: &mut Vec<LoadError>) -> Option<T> {
        match self.raw(column).trim().parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.error(column, errors);
                None
            }
        }
    }

    fn parse_opt<T: std::str::FromStr>(&self, column: &str, errors: &mut Vec<LoadError>) -> Option<Option<T>> {
        let raw = self.raw(column).trim();
        if raw.is_empty() {
            return Some(None);
        }
        match raw.parse() {
            Ok(v) => Some(Some(v)),
            Err(_) => {
                self.error(column, errors);
                None
            }
        }
    }

    fn date(&self, column: &str, errors: &mut Vec<LoadError>) -> Option<CivilDate> {
        match CivilDate::parse_dmy(self.raw(column).trim()) {
            Ok(d) => Some(d),
            Err(_) => {
                self.error(column, errors);
                None
            }
        }
    }
}

fn parse_models(sheet: &Sheet, errors: &mut Vec<LoadError>) -> Vec<ModelRecord> {
    let mut out = Vec::new();
    for (row, record) in &sheet.rows {
        let r = Row { sheet, row: *row, record };
        let name = r.text("name");
        let domain: Option<Domain> = r.parse("domain", errors);
        let score: Option<Option<f64>> = r.parse_opt("score", errors);
        let params: Option<Option<f64>> = r.parse_opt("params_m", errors);
        let gflops: Option<f64> = r.parse("gflops", errors);
        let tokens: Option<Option<u32>> = r.parse_opt("input_tokens", errors);
        let extra = match r.raw("extra_data").trim() {
            "" | "none" => None,
            label => Some(label.to_string()),
        };
        let date = r.date("release_date", errors);
        let arch: Option<Architecture> = r.parse("architecture", errors);
        let provenance: Option<FlopsProvenance> = r.parse("flops_provenance", errors);
        if let (Some(domain), Some(score), Some(params), Some(gflops), Some(tokens), Some(date), Some(arch), Some(provenance)) =
            (domain, score, params, gflops, tokens, date, arch, provenance)
        {
            out.push(ModelRecord {
                name,
                domain,
                score,
                params_m: params,
                gflops_forward: gflops,
                input_tokens: tokens,
                extra_data: extra,
                release_date: date,
                architecture: arch,
                flops_provenance: provenance,
            });
        }
    }
    out
}

fn parse_gpus(sheet: &Sheet, errors: &mut Vec<LoadError>) -> Vec<GpuRecord> {
    let mut out = Vec::new();
    for (row, record) in &sheet.rows {
        let r = Row { sheet, row: *row, record };
        let name = r.text("name");
        let precision: Option<Precision> = r.parse("precision", errors);
        let tflops: Option<f64> = r.parse("tflops", errors);
        let tdp: Option<f64> = r.parse("tdp_w", errors);
        let date = r.date("launch_date", errors);
        let deployment: Option<Deployment> = r.parse("deployment", errors);
        if let (Some(precision), Some(tflops), Some(tdp), Some(date), Some(deployment)) =
            (precision, tflops, tdp, date, deployment)
        {
            out.push(GpuRecord {
                name,
                precision,
                tflops_peak: tflops,
                tdp_watts: tdp,
                launch_date: date,
                deployment,
            });
        }
    }
    out
}

fn parse_benchmarks(sheet: &Sheet, errors: &mut Vec<LoadError>) -> Vec<ThroughputBenchmark> {
    let mut out = Vec::new();
    for (row, record) in &sheet.rows {
        let r = Row { sheet, row: *row, record };
        let domain: Option<Domain> = r.parse("task_domain", errors);
        let model = r.text("model");
        let framework = r.text("framework");
        let batch: Option<u32> = r.parse("batch", errors);
        let gpu = r.text("gpu");
        let precision: Option<BenchPrecision> = r.parse("precision", errors);
        let throughput: Option<f64> = r.parse("throughput", errors);
        let reference = r.text("reference_gpu");
        if let (Some(domain), Some(batch), Some(precision), Some(throughput)) =
            (domain, batch, precision, throughput)
        {
            out.push(ThroughputBenchmark {
                task_domain: domain,
                model_name: model,
                framework,
                batch_size: batch,
                gpu_name: gpu,
                precision,
                throughput,
                reference_gpu: reference,
            });
        }
    }
    out
}

fn issue_to_error(issue: BundleIssue) -> LoadError {
    match issue {
        BundleIssue::Invariant { record, rule } => LoadError::InvariantViolation { record, rule },
        BundleIssue::DanglingReference { benchmark, gpu } => {
            LoadError::DanglingReference { benchmark, gpu }
        }
    }
}

/// Loads and validates a bundle from three readers. Returns either a
/// valid bundle or every problem found.
pub fn load_bundle_from_readers<M: Read, G: Read, B: Read>(
    models: M,
    gpus: G,
    benchmarks: B,
) -> Result<DatasetBundle, Vec<LoadError>> {
    let mut errors = Vec::new();
    let model_sheet = read_sheet("models.csv", models, &MODEL_COLUMNS, &mut errors);
    let gpu_sheet = read_sheet("gpus.csv", gpus, &GPU_COLUMNS, &mut errors);
    let bench_sheet = read_sheet("benchmarks.csv", benchmarks, &BENCH_COLUMNS, &mut errors);

    let models = model_sheet.map(|s| parse_models(&s, &mut errors)).unwrap_or_default();
    let gpus = gpu_sheet.map(|s| parse_gpus(&s, &mut errors)).unwrap_or_default();
    let benchmarks = bench_sheet.map(|s| parse_benchmarks(&s, &mut errors)).unwrap_or_default();

    let bundle = DatasetBundle::new(models, gpus, benchmarks);
    if errors.is_empty() {
        errors.extend(validate_bundle(&bundle).into_iter().map(issue_to_error));
    }
    if errors.is_empty() {
        Ok(bundle)
    } else {
        Err(errors)
    }
}

fn open(path: &Path, errors: &mut Vec<LoadError>) -> Option<File> {
    match File::open(path) {
        Ok(f) => Some(f),
        Err(e) => {
            errors.push(LoadError::Io {
                file: path.display().to_string(),
                message: e.to_string(),
            });
            None
        }
    }
}

/// Loads and validates a bundle from the three dataset files.
pub fn load_bundle(
    models_path: &Path,
    gpus_path: &Path,
    benchmarks_path: &Path,
) -> Result<DatasetBundle, Vec<LoadError>> {
    let mut errors = Vec::new();
    let m = open(models_path, &mut errors);
    let g = open(gpus_path, &mut errors);
    let b = open(benchmarks_path, &mut errors);
    match (m, g, b) {
        (Some(m), Some(g), Some(b)) => load_bundle_from_readers(m, g, b),
        _ => Err(errors),
    }
}

fn opt_str<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Serializes a bundle back to the three CSV schemas. Reloading the
/// output yields a field-by-field identical bundle.
pub fn write_bundle(
    bundle: &DatasetBundle,
    models_path: &Path,
    gpus_path: &Path,
    benchmarks_path: &Path,
) -> std::io::Result<()> {
    write_file(models_path, &models_csv(bundle))?;
    write_file(gpus_path, &gpus_csv(bundle))?;
    write_file(benchmarks_path, &benchmarks_csv(bundle))
}

fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut f = File::create(path)?;
    f.write_all(contents.as_bytes())
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn models_csv(bundle: &DatasetBundle) -> String {
    let mut out = String::new();
    out.push_str(&MODEL_COLUMNS.join(","));
    out.push('\n');
    for m in &bundle.models {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&m.name),
            m.domain,
            opt_str(&m.score),
            opt_str(&m.params_m),
            m.gflops_forward,
            opt_str(&m.input_tokens),
            csv_field(m.extra_data.as_deref().unwrap_or("none")),
            m.release_date,
            m.architecture,
            m.flops_provenance,
        );
    }
    out
}

pub fn gpus_csv(bundle: &DatasetBundle) -> String {
    let mut out = String::new();
    out.push_str(&GPU_COLUMNS.join(","));
    out.push('\n');
    for g in &bundle.gpus {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_field(&g.name),
            g.precision,
            g.tflops_peak,
            g.tdp_watts,
            g.launch_date,
            g.deployment,
        );
    }
    out
}

pub fn benchmarks_csv(bundle: &DatasetBundle) -> String {
    let mut out = String::new();
    out.push_str(&BENCH_COLUMNS.join(","));
    out.push('\n');
    for b in &bundle.benchmarks {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            b.task_domain,
            csv_field(&b.model_name),
            csv_field(&b.framework),
            b.batch_size,
            csv_field(&b.gpu_name),
            b.precision,
            b.throughput,
            csv_field(&b.reference_gpu),
        );
    }
    out
}
