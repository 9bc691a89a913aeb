//! Behavior of the `inferwatt` binary: exit codes, report layout,
//! determinism and the estimation subcommand.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inferwatt"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_dataset(dir: &Path, models: &str, gpus: &str, benchmarks: &str) -> [String; 6] {
    let m = dir.join("models.csv");
    let g = dir.join("gpus.csv");
    let b = dir.join("benchmarks.csv");
    fs::write(&m, models).unwrap();
    fs::write(&g, gpus).unwrap();
    fs::write(&b, benchmarks).unwrap();
    [
        "--models".into(),
        m.display().to_string(),
        "--gpus".into(),
        g.display().to_string(),
        "--benchmarks".into(),
        b.display().to_string(),
    ]
}

const EMPTY_MODELS: &str =
    "name,domain,score,params_m,gflops,input_tokens,extra_data,release_date,architecture,flops_provenance\n";
const EMPTY_GPUS: &str = "name,precision,tflops,tdp_w,launch_date,deployment\n";
const EMPTY_BENCH: &str = "task_domain,model,framework,batch,gpu,precision,throughput,reference_gpu\n";

#[test]
fn validate_bundled_dataset_exits_zero() {
    let out = run(&["validate"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("113 models"));
}

#[test]
fn validate_reports_invariant_violation_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let models = "name,domain,score,params_m,gflops,input_tokens,extra_data,release_date,architecture,flops_provenance\n\
        Bad,CV,50,,-3.0,,none,01/01/2020,CNN,reported\n";
    let args = write_dataset(dir.path(), models, EMPTY_GPUS, EMPTY_BENCH);
    let args: Vec<&str> = args.iter().map(String::as_str).chain(["validate"]).collect();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("invariant violation"));
    assert!(err.contains("Bad"));
}

#[test]
fn validate_names_missing_columns() {
    let dir = tempfile::tempdir().unwrap();
    let gpus = "name,precision,tflops,launch_date,deployment\n"; // tdp_w missing
    let args = write_dataset(dir.path(), EMPTY_MODELS, gpus, EMPTY_BENCH);
    let args: Vec<&str> = args.iter().map(String::as_str).chain(["validate"]).collect();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing column tdp_w"));
}

#[test]
fn report_emits_expected_figure_files() {
    let dir = tempfile::tempdir().unwrap();
    let cv_dir = dir.path().join("cv");
    let out = run(&["report", "--domain", "cv", "--out", cv_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mut names: Vec<String> = fs::read_dir(&cv_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "cv_gflops_vs_date.ndjson",
            "cv_joules_vs_baselines.ndjson",
            "cv_joules_vs_date.ndjson",
            "cv_joules_vs_score.ndjson",
            "cv_params_vs_gflops.ndjson",
            "cv_score_vs_date.ndjson",
            "cv_score_vs_gflops.ndjson",
            "summary_cv.txt",
        ]
    );

    let nlp_dir = dir.path().join("nlp");
    let out = run(&["report", "--domain", "nlp", "--out", nlp_dir.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(fs::read_dir(&nlp_dir).unwrap().count(), 6); // 5 figures + summary
}

#[test]
fn consecutive_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out_dir in [&a, &b] {
        let out = run(&["report", "--domain", "cv", "--out", out_dir.to_str().unwrap()]);
        assert!(out.status.success());
    }
    for entry in fs::read_dir(&a).unwrap() {
        let name = entry.unwrap().file_name();
        let left = fs::read(a.join(&name)).unwrap();
        let right = fs::read(b.join(&name)).unwrap();
        assert_eq!(left, right, "{name:?} differs");
    }
}

#[test]
fn empty_valid_bundle_reports_zero_records() {
    let dir = tempfile::tempdir().unwrap();
    let args = write_dataset(dir.path(), EMPTY_MODELS, EMPTY_GPUS, EMPTY_BENCH);
    let out_dir = dir.path().join("report");
    let mut all: Vec<&str> = args.iter().map(String::as_str).collect();
    all.extend(["report", "--domain", "cv", "--out", out_dir.to_str().unwrap()]);
    let out = run(&all);
    assert!(out.status.success(), "{}", stderr(&out));
    let names: Vec<String> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(names, ["summary_cv.txt"]);
    let summary = fs::read_to_string(out_dir.join("summary_cv.txt")).unwrap();
    assert!(summary.contains("zero records"));
}

fn printed_estimate(out: &Output) -> f64 {
    stdout(out)
        .lines()
        .find_map(|l| l.strip_prefix("estimate: "))
        .and_then(|l| l.strip_suffix(" gflops"))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn estimate_flops_compound_and_resolution() {
    let out = run(&["estimate-flops", "--base", "74", "--d", "1.7097", "--w", "2.15", "--r", "1.3334"]);
    assert!(out.status.success());
    let value = printed_estimate(&out);
    assert!((value - 1040.0).abs() / 1040.0 <= 0.01, "{value}");

    let out = run(&["estimate-flops", "--base", "2859.9", "--res", "384:518", "--exponent", "2.015046"]);
    assert!(out.status.success());
    let value = printed_estimate(&out);
    assert!((value - 5270.0).abs() / 5270.0 <= 0.01, "{value}");

    let out = run(&["estimate-flops", "--base", "5", "--d", "1", "--w", "1", "--r", "1"]);
    assert!(stdout(&out).contains("estimate: 5.0 gflops"));

    // Doubling convention applies to the base value; the unrounded line
    // keeps full precision below the one-decimal display threshold.
    let out = run(&["estimate-flops", "--base", "0.71", "--convention", "madd-pair", "--d", "1", "--w", "1", "--r", "1"]);
    assert!(stdout(&out).contains("estimate: 1.4 gflops"));
    assert!(stdout(&out).contains("unrounded: 1.42"));
}

#[test]
fn fit_on_empty_domain_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let args = write_dataset(dir.path(), EMPTY_MODELS, EMPTY_GPUS, EMPTY_BENCH);
    let mut all: Vec<&str> = args.iter().map(String::as_str).collect();
    all.extend(["fit", "--domain", "cv"]);
    let out = run(&all);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn data_dir_env_overrides_bundled_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let models = "name,domain,score,params_m,gflops,input_tokens,extra_data,release_date,architecture,flops_provenance\n\
        Solo,CV,50,,1.0,,none,01/01/2020,CNN,reported\n";
    write_dataset(dir.path(), models, EMPTY_GPUS, EMPTY_BENCH);
    let out = bin()
        .env("INFERWATT_DATA_DIR", dir.path())
        .arg("validate")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("1 models"));
}

#[test]
fn gpu_table_lists_adapted_rows() {
    let out = run(&["gpu-table"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 37); // header + 36 rows
    assert!(text.contains("For CNN,Tesla V100,Mixed,35.71,300,27/03/2018,119.03"));
    assert!(text.contains("For NLP,A100,Mixed,73.29,400,14/04/2020,183.23"));
}

#[test]
fn energy_prints_per_token_view_for_nlp() {
    let out = run(&["energy", "--domain", "nlp"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().count() >= 19);
    assert!(text.contains("joules_per_token="));
}
