//! Acceptance suite: one test per numbered criterion, each printing a
//! pass line (run with `--nocapture` to see them). Every tolerance is
//! pinned here, next to the values it guards.

use std::time::Instant;

use inferwatt::analysis::{analyze, CorrelationConvention, DEFAULT_KCAL_PER_DAY, DEFAULT_KWH_PER_YEAR};
use inferwatt::fixtures;
use inferwatt::report::write_report;
use inferwatt_core::flops::{
    compound_scale_flops, resolution_exponent, resolution_scale_flops, scale_with_exponent,
    ScaleFactors,
};
use inferwatt_core::forecast::{external_baseline, somatic_baseline};
use inferwatt_core::hardware::{adapted_tflops, aggregate_speedups, build_adapted_table, efficiency};
use inferwatt_core::records::{filter_models, BenchPrecision, Domain};
use inferwatt_core::trend::{
    best_per_year, compute_equivalents, log_linear_fit, pareto_frontier, FrontierPoint,
    SubsetLabel, YearMetric,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn pass(line: &str) {
    println!("[PASS] {line}");
}

// ---------------------------------------------------------------------
// Criterion 1: scaling estimators reproduce the dataset's estimated
// forward-pass costs within 1% relative error.
// ---------------------------------------------------------------------
#[test]
fn criterion_1_flops_scaling_golden_values() {
    let within = |computed: f64, stored: f64, label: &str| {
        let rel = (computed - stored).abs() / stored;
        assert!(rel <= 0.01, "{label}: {computed} vs {stored} (rel {rel:.4})");
    };

    let b7_to_l2 = ScaleFactors::new(5.3 / 3.1, 4.3 / 2.0, 800.0 / 600.0).unwrap();
    within(compound_scale_flops(74.0, &b7_to_l2).unwrap(), 1040.0, "NoisyStudent-L2");

    let no_resolution = ScaleFactors::new(5.3 / 3.1, 4.3 / 2.0, 1.0).unwrap();
    within(compound_scale_flops(74.0, &no_resolution).unwrap(), 585.0, "FixEfficientNet-L2");

    within(resolution_scale_flops(74.0, 600.0, 632.0).unwrap(), 82.0, "FixEfficientNet-B7");
    within(resolution_scale_flops(0.78, 224.0, 320.0).unwrap(), 1.6, "FixEfficientNet-B0");

    // The transformer estimate extrapolates with the exponent measured
    // from its two published resolutions (2.015, quadratic within the
    // 0.1 gate); snapping to exactly 2 misses the stored 5270 by 1.25%.
    let exponent = resolution_exponent(965.3, 2859.9, 224.0, 384.0).unwrap();
    assert!(inferwatt_core::flops::exponent_is_quadratic(exponent));
    within(
        scale_with_exponent(2859.9, 384.0, 518.0, exponent).unwrap(),
        5270.0,
        "ViT-G/14",
    );

    pass("criterion 1: five scaling golden values within 1%");
}

// ---------------------------------------------------------------------
// Criterion 2: mean speed-ups reproduce the eight published summary
// ratios within +-0.01.
// ---------------------------------------------------------------------
#[test]
fn criterion_2_speedup_table_reproduction() {
    let bundle = fixtures::bundled().unwrap();
    let cases = [
        ("Tesla V100", BenchPrecision::Mixed, Domain::Cv, 2.27),
        ("Tesla V100", BenchPrecision::Mixed, Domain::Nlp, 2.64),
        ("A100", BenchPrecision::Tf32, Domain::Cv, 1.75),
        ("A100", BenchPrecision::Tf32, Domain::Nlp, 3.56),
        ("A100", BenchPrecision::Mixed, Domain::Cv, 3.33),
        ("A100", BenchPrecision::Mixed, Domain::Nlp, 4.67),
        ("T4", BenchPrecision::Mixed, Domain::Cv, 2.70),
        ("T4", BenchPrecision::Mixed, Domain::Nlp, 3.16),
    ];
    for (gpu, precision, domain, published) in cases {
        let summary = aggregate_speedups(&bundle.benchmarks, gpu, precision, domain).unwrap();
        assert!(
            (summary.mean_speedup - published).abs() <= 0.01,
            "{gpu} {precision:?} {domain:?}: {} vs {published}",
            summary.mean_speedup
        );
    }
    pass("criterion 2: eight mean speed-ups within +-0.01");
}

// ---------------------------------------------------------------------
// Criterion 3: adapted TFLOPS within +-0.05 and the GFLOPS/Watt columns
// of both GPU tables within +-0.01.
// ---------------------------------------------------------------------

/// GFLOPS/Watt column of the theoretical spec table, row for row.
const THEORETICAL_EFF: [(&str, &str, f64); 48] = [
    ("GeForce GTX 580", "FP32", 6.48),
    ("GeForce GTX 590", "FP32", 6.82),
    ("GeForce GTX 680", "FP32", 15.85),
    ("GeForce GTX 690", "FP32", 18.73),
    ("GeForce GTX 780", "FP32", 16.62),
    ("GeForce GTX 780 TI", "FP32", 21.38),
    ("GeForce GTX Titan Black", "FP32", 22.58),
    ("GeForce GTX Titan Z", "FP32", 21.66),
    ("GeForce GTX 980", "FP32", 30.19),
    ("GeForce GTX 980 Ti", "FP32", 24.24),
    ("GeForce GTX TITAN X", "FP32", 26.76),
    ("GeForce GTX 1080", "FP32", 49.29),
    ("GeForce GTX 1080 Ti", "FP32", 45.36),
    ("TITAN X Pascal", "FP32", 43.88),
    ("TITAN XP", "FP32", 48.6),
    ("GeForce RTX 2080", "FP32", 46.84),
    ("GeForce RTX 2080 Ti", "FP32", 53.8),
    ("Nvidia Titan RTX", "FP32", 58.26),
    ("GeForce RTX 3080", "FP32", 93.13),
    ("GeForce RTX 3090", "FP32", 101.71),
    ("GeForce RTX 2080", "FP16", 93.67),
    ("GeForce RTX 2080 Ti", "FP16", 107.6),
    ("Nvidia Titan RTX", "FP16", 116.5),
    ("GeForce RTX 3080", "FP16", 93.13),
    ("GeForce RTX 3090", "FP16", 101.71),
    ("GeForce RTX 2080", "MixedTensor", 187.44),
    ("GeForce RTX 2080 Ti", "MixedTensor", 227.6),
    ("Nvidia Titan RTX", "MixedTensor", 466.07),
    ("GeForce RTX 3080", "MixedTensor", 185.94),
    ("GeForce RTX 3090", "MixedTensor", 202.86),
    ("Tesla K10", "FP32", 20.36),
    ("Tesla K20x", "FP32", 16.74),
    ("Tesla K40", "FP32", 21.45),
    ("Tesla K80", "FP32", 27.4),
    ("Tesla M40", "FP32", 27.36),
    ("Tesla M60", "FP32", 32.17),
    ("Tesla P100", "FP16", 70.67),
    ("Tesla V100", "FP16", 104.67),
    ("A100", "FP16", 195.0),
    ("Tesla P100", "FP32", 35.33),
    ("Tesla V100", "FP32", 52.33),
    ("A100", "FP32", 48.75),
    ("A30", "FP32", 62.42),
    ("Tesla V100", "MixedTensor", 416.67),
    ("A100", "MixedTensor", 780.0),
    ("A30", "MixedTensor", 1000.0),
    ("T4", "FP32", 115.71),
    ("T4", "MixedTensor", 928.57),
];

/// Five rows of the theoretical table print an efficiency derived from
/// pre-rounding TFLOPS figures, so it disagrees with the row's own
/// printed inputs by up to 0.026. The analysis table reprints these rows
/// consistently with the printed inputs; those reprints are the
/// expectations here. (Printed values kept for the record.)
const THEORETICAL_ERRATA: [(&str, f64); 5] = [
    ("GeForce GTX 780", 16.64),        // printed 16.62
    ("GeForce GTX 780 TI", 21.40),     // printed 21.38
    ("GeForce GTX Titan Black", 22.60), // printed 22.58
    ("GeForce GTX 1080", 49.28),       // printed 49.29
    ("Tesla K20x", 16.77),             // printed 16.74
];

/// The analysis table: adapted kind, GPU, precision, TFLOPS, GFLOPS/Watt.
const ADAPTED_TABLE: [(&str, &str, &str, f64, f64); 36] = [
    ("No", "GeForce GTX 580", "FP32", 1.58, 6.48),
    ("No", "GeForce GTX 590", "FP32", 2.49, 6.82),
    ("No", "GeForce GTX 680", "FP32", 3.09, 15.85),
    ("No", "GeForce GTX 690", "FP32", 5.62, 18.73),
    ("No", "Tesla K10", "FP32", 4.58, 20.36),
    ("No", "Tesla K20x", "FP32", 3.94, 16.77),
    ("No", "GeForce GTX 780", "FP32", 4.16, 16.64),
    ("No", "Tesla K40", "FP32", 5.04, 21.45),
    ("No", "GeForce GTX 780 TI", "FP32", 5.35, 21.4),
    ("No", "GeForce GTX Titan Black", "FP32", 5.65, 22.6),
    ("No", "GeForce GTX Titan Z", "FP32", 8.12, 21.65),
    ("No", "GeForce GTX 980", "FP32", 4.98, 30.18),
    ("No", "Tesla K80", "FP32", 8.22, 27.4),
    ("No", "GeForce GTX TITAN X", "FP32", 6.69, 26.76),
    ("No", "GeForce GTX 980 Ti", "FP32", 6.06, 24.24),
    ("No", "Tesla M60", "FP32", 9.65, 32.17),
    ("No", "Tesla M40", "FP32", 6.84, 27.36),
    ("No", "GeForce GTX 1080", "FP32", 8.87, 49.28),
    ("No", "TITAN X Pascal", "FP32", 10.97, 43.88),
    ("No", "GeForce GTX 1080 Ti", "FP32", 11.34, 45.36),
    ("No", "TITAN XP", "FP32", 12.15, 48.6),
    ("No", "Tesla V100", "FP32", 15.7, 52.33),
    ("No", "T4", "FP32", 8.1, 115.71),
    ("No", "GeForce RTX 2080", "FP32", 10.07, 46.84),
    ("No", "GeForce RTX 2080 Ti", "FP32", 13.45, 53.8),
    ("No", "Nvidia Titan RTX", "FP32", 16.31, 58.25),
    ("No", "GeForce RTX 3080", "FP32", 29.8, 93.13),
    ("No", "GeForce RTX 3090", "FP32", 35.6, 101.71),
    ("For CNN", "Tesla V100", "Mixed", 35.71, 119.03),
    ("For CNN", "T4", "Mixed", 21.85, 312.15),
    ("For CNN", "A100", "TF32", 27.41, 68.52),
    ("For CNN", "A100", "Mixed", 52.35, 130.88),
    ("For NLP", "Tesla V100", "Mixed", 41.44, 138.13),
    ("For NLP", "T4", "Mixed", 25.58, 365.46),
    ("For NLP", "A100", "TF32", 55.85, 139.64),
    ("For NLP", "A100", "Mixed", 73.29, 183.23),
];

#[test]
fn criterion_3_gpu_table_reproduction() {
    let bundle = fixtures::bundled().unwrap();

    // (a) Theoretical table: efficiency of each spec row within +-0.01 of
    // its printed GFLOPS/Watt (errata rows against their consistent reprint).
    assert_eq!(bundle.gpus.len(), THEORETICAL_EFF.len());
    for (gpu, (name, precision, printed)) in bundle.gpus.iter().zip(THEORETICAL_EFF) {
        assert_eq!(gpu.name, name);
        assert_eq!(gpu.precision.to_string(), precision);
        let computed = efficiency(gpu.tflops_peak, gpu.tdp_watts).unwrap();
        let expected = THEORETICAL_ERRATA
            .iter()
            .find(|(n, _)| *n == name && precision == "FP32")
            .map(|&(_, corrected)| corrected)
            .unwrap_or(printed);
        assert!(
            (computed - expected).abs() <= 0.01 + 1e-12,
            "{name} {precision}: {computed} vs {expected}"
        );
    }

    // (b) Full adapted table out of the pipeline: 36 rows, TFLOPS within
    // +-0.05, GFLOPS/Watt within +-0.01.
    let table = build_adapted_table(&bundle).unwrap();
    assert_eq!(table.len(), ADAPTED_TABLE.len());
    for (point, (kind, name, _precision, tflops, eff)) in table.iter().zip(ADAPTED_TABLE) {
        assert_eq!(point.gpu_name, name, "row order");
        assert_eq!(point.adapted, kind != "No");
        assert!(
            (point.tflops - tflops).abs() <= 0.05,
            "{kind} {name}: tflops {} vs {tflops}",
            point.tflops
        );
        assert!(
            (point.gflops_per_watt - eff).abs() <= 0.01 + 1e-12,
            "{kind} {name}: {} vs {eff}",
            point.gflops_per_watt
        );
    }

    // (c) The two spotlighted adapted examples, via adapted_tflops directly.
    let v100_cv = aggregate_speedups(&bundle.benchmarks, "Tesla V100", BenchPrecision::Mixed, Domain::Cv).unwrap();
    assert!((adapted_tflops(15.70, &v100_cv).unwrap() - 35.71).abs() <= 0.05);
    let t4_cv = aggregate_speedups(&bundle.benchmarks, "T4", BenchPrecision::Mixed, Domain::Cv).unwrap();
    assert!((adapted_tflops(8.10, &t4_cv).unwrap() - 21.85).abs() <= 0.05);

    pass("criterion 3: eight adapted TFLOPS within +-0.05, 84 GFLOPS/Watt values within +-0.01 (5 documented errata rows checked against their consistent reprint)");
}

// ---------------------------------------------------------------------
// Criterion 4: human energy baselines in their published ranges.
// ---------------------------------------------------------------------
#[test]
fn criterion_4_baseline_ranges() {
    let somatic = somatic_baseline(DEFAULT_KCAL_PER_DAY).unwrap().joules_per_second;
    assert!((95.0..=100.0).contains(&somatic), "somatic {somatic}");
    let external = external_baseline(DEFAULT_KWH_PER_YEAR).unwrap().joules_per_second;
    assert!((9000.0..=10_500.0).contains(&external), "external {external}");
    pass("criterion 4: somatic in [95,100] J/s, external in [9000,10500] J/s");
}

// ---------------------------------------------------------------------
// Criterion 5: trend-direction properties.
// ---------------------------------------------------------------------
#[test]
fn criterion_5_trend_direction_properties() {
    let bundle = fixtures::bundled().unwrap();
    for domain in [Domain::Cv, Domain::Nlp] {
        let analysis = analyze(&bundle, domain).unwrap();

        // (a) Frontier GFLOPs fit: positive slope, r^2 >= 0.7.
        let frontier = analysis.gflops_frontier_fit.as_ref().unwrap();
        assert!(frontier.slope > 0.0, "{domain:?} slope {}", frontier.slope);
        assert!(frontier.r_squared >= 0.7, "{domain:?} r2 {}", frontier.r_squared);

        // (b) All-models Joules slope strictly below the frontier's.
        let j_frontier = analysis.joules_frontier_fit.as_ref().unwrap();
        let j_all = analysis.joules_all_fit.as_ref().unwrap();
        assert!(
            j_all.slope < j_frontier.slope,
            "{domain:?}: all {} vs frontier {}",
            j_all.slope,
            j_frontier.slope
        );

        // (c) Same-subset slope identity: slope_J = slope_F - slope_E.
        let slope_e = analysis.efficiency_fit.as_ref().unwrap().slope;
        let gap = (j_frontier.slope - (frontier.slope - slope_e)).abs();
        assert!(gap <= 1e-9, "{domain:?} identity gap {gap}");
    }
    pass("criterion 5: frontier fits positive with r2>=0.7; all<frontier joules slopes; slope identity to 1e-9");
}

// ---------------------------------------------------------------------
// Criterion 6: oracle equivalence for the fit and the Pareto extraction.
// ---------------------------------------------------------------------

/// Closed-form normal equations on a shifted time axis (independent
/// algebraic route from the implementation's centered sums).
fn normal_equations_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let shift = 2015.0;
    let n = points.len() as f64;
    let (mut st, mut stt, mut sy, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for &(t, v) in points {
        let t = t - shift;
        let y = v.log10();
        st += t;
        stt += t * t;
        sy += y;
        sty += t * y;
    }
    let denom = n * stt - st * st;
    let slope = (n * sty - st * sy) / denom;
    let intercept_shifted = (sy - slope * st) / n;
    let intercept = intercept_shifted - slope * shift;
    let mean_y = sy / n;
    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for &(t, v) in points {
        let y = v.log10();
        let fitted = intercept + slope * t;
        ss_res += (y - fitted) * (y - fitted);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, intercept, r2)
}

#[test]
fn criterion_6_oracle_equivalence() {
    let mut rng = StdRng::seed_from_u64(20_210_914);

    // 100 random synthetic series vs the normal-equations oracle.
    for _ in 0..100 {
        let n = rng.random_range(3..60);
        let slope: f64 = rng.random_range(-1.0..1.5);
        let level: f64 = rng.random_range(-2.0..6.0);
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let t: f64 = rng.random_range(2010.0..2022.0);
                let noise: f64 = rng.random_range(-0.3..0.3);
                (t, 10f64.powf(level + slope * (t - 2015.0) + noise))
            })
            .collect();
        match log_linear_fit(&points, "synthetic", SubsetLabel::All) {
            Ok(fit) => {
                let (s, i, r2) = normal_equations_fit(&points);
                assert!((fit.slope - s).abs() <= 1e-9, "slope {} vs {s}", fit.slope);
                assert!(
                    (fit.intercept - i).abs() <= 1e-9 * (1.0 + i.abs()),
                    "intercept {} vs {i}",
                    fit.intercept
                );
                assert!((fit.r_squared - r2).abs() <= 1e-9);
            }
            Err(e) => panic!("fit failed on valid series: {e}"),
        }
    }

    // Pareto vs the O(n^2) dominance oracle: full CV dataset plus 100
    // random point sets of up to 200 points.
    let brute_force = |points: &[FrontierPoint]| -> Vec<String> {
        let mut keep: Vec<&FrontierPoint> = points
            .iter()
            .filter(|p| {
                !points
                    .iter()
                    .any(|q| q.x <= p.x && q.y >= p.y && (q.x < p.x || q.y > p.y))
            })
            .collect();
        keep.sort_by(|a, b| {
            a.x.total_cmp(&b.x)
                .then_with(|| b.y.total_cmp(&a.y))
                .then_with(|| a.model_name.cmp(&b.model_name))
        });
        keep.iter().map(|p| p.model_name.clone()).collect()
    };

    let bundle = fixtures::bundled().unwrap();
    let cv_points: Vec<FrontierPoint> = bundle
        .models_in(Domain::Cv)
        .filter_map(|m| {
            m.score.map(|score| FrontierPoint {
                model_name: m.name.clone(),
                x: m.gflops_forward,
                y: score,
                date: m.release_date,
            })
        })
        .collect();
    let got: Vec<String> = pareto_frontier(&cv_points).iter().map(|p| p.model_name.clone()).collect();
    assert_eq!(got, brute_force(&cv_points));

    for _ in 0..100 {
        let n = rng.random_range(1..=200);
        let points: Vec<FrontierPoint> = (0..n)
            .map(|i| FrontierPoint {
                model_name: format!("p{i:03}"),
                // Coarse grid so duplicate coordinates actually occur.
                x: f64::from(rng.random_range(1..40)),
                y: f64::from(rng.random_range(1..40)),
                date: inferwatt_core::CivilDate::new(2020, 1, 1).unwrap(),
            })
            .collect();
        let got: Vec<String> = pareto_frontier(&points).iter().map(|p| p.model_name.clone()).collect();
        assert_eq!(got, brute_force(&points));
    }

    pass("criterion 6: fit matches normal-equations oracle to 1e-9 on 100 series; pareto matches brute force on CV data and 100 random sets");
}

// ---------------------------------------------------------------------
// Criterion 7: frontier and equivalence queries.
// ---------------------------------------------------------------------
#[test]
fn criterion_7_frontier_and_table_queries() {
    let bundle = fixtures::bundled().unwrap();
    let cv = filter_models(&bundle, Domain::Cv, None, false, None);
    let best = best_per_year(&cv, YearMetric::Score);
    let y2012 = best.iter().find(|m| m.release_date.year() == 2012).unwrap();
    assert_eq!(y2012.name, "AlexNet");
    let y2021 = best.iter().find(|m| m.release_date.year() == 2021).unwrap();
    assert_eq!(y2021.score, Some(90.45));

    // The published equivalence table spans 1.14..3.00 GFLOPs around the
    // 1.42 anchor, a spread of -20%..+111%; +-120% covers it.
    let eq = compute_equivalents(&cv, 1.42, 1.2);
    for name in [
        "AlexNet",
        "ZFNet",
        "GoogleLeNet",
        "MobileNet",
        "MobileNetV2 1.4",
        "EfficientNet-B1",
        "NoisyStudent-B1",
    ] {
        assert!(eq.iter().any(|m| m.name == name), "missing {name}");
    }
    pass("criterion 7: best-per-year endpoints and the cost-equivalence table recovered");
}

// ---------------------------------------------------------------------
// Criterion 8: correlation reproduction and the recorded convention.
// ---------------------------------------------------------------------
#[test]
fn criterion_8_correlation_reproduction() {
    let bundle = fixtures::bundled().unwrap();
    let analysis = analyze(&bundle, Domain::Cv).unwrap();
    let c = analysis.correlations.as_ref().unwrap();
    // Raw params vs GFLOPs reproduces both published coefficients.
    assert!(
        (c.transformer_raw - 0.994).abs() <= 0.02,
        "transformer raw {}",
        c.transformer_raw
    );
    assert!((c.cnn_raw - 0.772).abs() <= 0.05, "cnn raw {}", c.cnn_raw);
    assert_eq!(c.reproducing_convention, Some(CorrelationConvention::Raw));
    // The convention lands in the written report.
    let summary = inferwatt::report::summary_text(&analysis);
    assert!(summary.contains("convention reproducing the reference values"));
    assert!(summary.contains(": raw"));
    pass("criterion 8: transformer 0.994 +-0.02 and CNN 0.772 +-0.05 under the raw convention, recorded in the report");
}

// ---------------------------------------------------------------------
// Criterion 9: report determinism and suite runtime.
// ---------------------------------------------------------------------
#[test]
fn criterion_9_determinism_and_runtime() {
    let started = Instant::now();
    let bundle = fixtures::bundled().unwrap();
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for domain in [Domain::Cv, Domain::Nlp] {
        let analysis = analyze(&bundle, domain).unwrap();
        let first = write_report(&analysis, dir_a.path()).unwrap();
        let second = write_report(&analysis, dir_b.path()).unwrap();
        assert_eq!(first.len(), second.len());
        for (a, b) in first.iter().zip(&second) {
            assert_eq!(a.file_name(), b.file_name());
            let bytes_a = std::fs::read(a).unwrap();
            let bytes_b = std::fs::read(b).unwrap();
            assert_eq!(bytes_a, bytes_b, "{} differs between runs", a.display());
        }
    }
    // CV emits 7 figures + summary; NLP 5 + summary.
    assert_eq!(std::fs::read_dir(dir_a.path()).unwrap().count(), 14);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "reports took {elapsed:?}");
    pass("criterion 9: byte-identical consecutive reports, well under the time budget");
}
