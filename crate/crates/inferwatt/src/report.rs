//! Figure-series files and the human-readable summary.
//!
//! Each reproduced figure becomes one newline-delimited JSON file: a
//! metadata line (axes, fitted lines) followed by one line per point.
//! Output is byte-deterministic: fixed orders, floats through
//! [`crate::fmt::sig6`].

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use inferwatt_core::hardware::{EfficiencyPoint, PointDomain};
use inferwatt_core::records::{Domain, Precision};
use inferwatt_core::trend::{doubling_time, TrendFit};

use crate::analysis::DomainAnalysis;
use crate::fmt::{round2, sig6};

#[derive(Debug, Clone, PartialEq)]
pub struct Axes {
    pub x_label: String,
    pub y_label: String,
    pub x_log: bool,
    pub y_log: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub x: f64,
    pub y: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    pub label: String,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl FitSummary {
    pub fn from_fit(label: &str, fit: &TrendFit) -> Self {
        FitSummary {
            label: label.to_string(),
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            n_points: fit.n_points,
        }
    }

    /// A constant power level shown as a zero-slope line.
    pub fn horizontal(label: &str, value: f64) -> Self {
        FitSummary {
            label: label.to_string(),
            slope: 0.0,
            intercept: value.log10(),
            r_squared: 1.0,
            n_points: 0,
        }
    }
}

/// The data behind one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSeries {
    pub figure_id: String,
    pub axes: Axes,
    pub points: Vec<SeriesPoint>,
    pub fits: Vec<FitSummary>,
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

impl FigureSeries {
    /// Newline-delimited JSON: metadata line, then one line per point.
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        let fits: Vec<String> = self
            .fits
            .iter()
            .map(|f| {
                format!(
                    "{{\"label\":\"{}\",\"slope\":{},\"intercept\":{},\"r_squared\":{},\"n_points\":{}}}",
                    json_escape(&f.label),
                    sig6(f.slope),
                    sig6(f.intercept),
                    sig6(f.r_squared),
                    f.n_points
                )
            })
            .collect();
        out.push_str(&format!(
            "{{\"figure_id\":\"{}\",\"x_label\":\"{}\",\"y_label\":\"{}\",\"x_log\":{},\"y_log\":{},\"fits\":[{}]}}\n",
            json_escape(&self.figure_id),
            json_escape(&self.axes.x_label),
            json_escape(&self.axes.y_label),
            self.axes.x_log,
            self.axes.y_log,
            fits.join(",")
        ));
        for p in &self.points {
            out.push_str(&format!(
                "{{\"x\":{},\"y\":{},\"label\":\"{}\"}}\n",
                sig6(p.x),
                sig6(p.y),
                json_escape(&p.label)
            ));
        }
        out
    }

    /// Log-scaled axes only ever carry positive values.
    pub fn log_axes_positive(&self) -> bool {
        self.points.iter().all(|p| {
            (!self.axes.x_log || p.x > 0.0) && (!self.axes.y_log || p.y > 0.0)
        })
    }
}

fn axes(x: &str, y: &str, x_log: bool, y_log: bool) -> Axes {
    Axes {
        x_label: x.to_string(),
        y_label: y.to_string(),
        x_log,
        y_log,
    }
}

fn domain_tag(domain: Domain) -> &'static str {
    match domain {
        Domain::Cv => "cv",
        Domain::Nlp => "nlp",
    }
}

fn score_label(domain: Domain) -> &'static str {
    match domain {
        Domain::Cv => "top1_accuracy_pct",
        Domain::Nlp => "glue_score",
    }
}

/// Builds every figure the domain's data supports. Figures with no points
/// are omitted.
pub fn build_figures(analysis: &DomainAnalysis) -> Vec<FigureSeries> {
    let tag = domain_tag(analysis.domain);
    let score = score_label(analysis.domain);
    let mut figures = Vec::new();
    let mut push = |fig: FigureSeries| {
        if !fig.points.is_empty() {
            debug_assert!(fig.log_axes_positive(), "{}", fig.figure_id);
            figures.push(fig);
        }
    };

    let name_label = |m: &inferwatt_core::records::ModelRecord| -> String {
        match m.input_tokens {
            Some(tokens) => format!("{} [{} tok]", m.name, tokens),
            None => m.name.clone(),
        }
    };

    if analysis.domain == Domain::Cv {
        push(FigureSeries {
            figure_id: format!("{tag}_params_vs_gflops"),
            axes: axes("params_m", "gflops_forward", true, true),
            points: analysis
                .models
                .iter()
                .filter_map(|m| {
                    m.params_m.map(|p| SeriesPoint {
                        x: p,
                        y: m.gflops_forward,
                        label: m.name.clone(),
                    })
                })
                .collect(),
            fits: Vec::new(),
        });
        push(FigureSeries {
            figure_id: format!("{tag}_score_vs_date"),
            axes: axes("release_year", score, false, false),
            points: analysis
                .models
                .iter()
                .filter_map(|m| {
                    m.score.map(|s| SeriesPoint {
                        x: m.release_date.fractional_year(),
                        y: s,
                        label: m.name.clone(),
                    })
                })
                .collect(),
            fits: Vec::new(),
        });
    }

    let mut trend_fits = Vec::new();
    if let Some(f) = &analysis.gflops_frontier_fit {
        trend_fits.push(FitSummary::from_fit("frontier", f));
    }
    if let Some(f) = &analysis.gflops_all_fit {
        trend_fits.push(FitSummary::from_fit("all", f));
    }
    push(FigureSeries {
        figure_id: format!("{tag}_gflops_vs_date"),
        axes: axes("release_year", "gflops_forward", false, true),
        points: analysis
            .models
            .iter()
            .map(|m| SeriesPoint {
                x: m.release_date.fractional_year(),
                y: m.gflops_forward,
                label: name_label(m),
            })
            .collect(),
        fits: trend_fits,
    });

    push(FigureSeries {
        figure_id: format!("{tag}_score_vs_gflops"),
        axes: axes("gflops_forward", score, true, false),
        points: analysis
            .models
            .iter()
            .filter_map(|m| {
                m.score.map(|s| SeriesPoint {
                    x: m.gflops_forward,
                    y: s,
                    label: m.name.clone(),
                })
            })
            .collect(),
        fits: Vec::new(),
    });

    let joules_points: Vec<SeriesPoint> = analysis
        .models
        .iter()
        .zip(&analysis.estimates)
        .map(|(m, e)| SeriesPoint {
            x: m.release_date.fractional_year(),
            y: e.joules,
            label: name_label(m),
        })
        .collect();
    let mut joules_fits = Vec::new();
    if let Some(f) = &analysis.joules_frontier_fit {
        joules_fits.push(FitSummary::from_fit("frontier", f));
    }
    if let Some(f) = &analysis.joules_all_fit {
        joules_fits.push(FitSummary::from_fit("all", f));
    }
    push(FigureSeries {
        figure_id: format!("{tag}_joules_vs_date"),
        axes: axes("release_year", "joules_per_forward_pass", false, true),
        points: joules_points.clone(),
        fits: joules_fits.clone(),
    });

    push(FigureSeries {
        figure_id: format!("{tag}_joules_vs_score"),
        axes: axes("joules_per_forward_pass", score, true, false),
        points: analysis
            .models
            .iter()
            .zip(&analysis.estimates)
            .filter_map(|(m, e)| {
                m.score.map(|s| SeriesPoint {
                    x: e.joules,
                    y: s,
                    label: m.name.clone(),
                })
            })
            .collect(),
        fits: Vec::new(),
    });

    let mut baseline_fits = joules_fits;
    baseline_fits.push(FitSummary::horizontal(
        "somatic_baseline",
        inferwatt_core::forecast::somatic_baseline(crate::analysis::DEFAULT_KCAL_PER_DAY)
            .expect("positive constant")
            .joules_per_second,
    ));
    baseline_fits.push(FitSummary::horizontal(
        "external_baseline",
        inferwatt_core::forecast::external_baseline(crate::analysis::DEFAULT_KWH_PER_YEAR)
            .expect("positive constant")
            .joules_per_second,
    ));
    push(FigureSeries {
        figure_id: format!("{tag}_joules_vs_baselines"),
        axes: axes("release_year", "joules_per_forward_pass", false, true),
        points: joules_points,
        fits: baseline_fits,
    });

    figures
}

fn table_precision(p: Precision) -> &'static str {
    match p {
        Precision::Fp32 => "FP32",
        Precision::Fp16 => "FP16",
        Precision::Tf32 => "TF32",
        Precision::MixedTensor => "Mixed",
    }
}

fn adapted_kind(p: &EfficiencyPoint) -> &'static str {
    match p.domain {
        PointDomain::Generic => "No",
        PointDomain::Cv => "For CNN",
        PointDomain::Nlp => "For NLP",
    }
}

/// The adapted efficiency table as CSV, columns mirroring the compiled
/// GPU throughput and power table. TFLOPS and GFLOPS/Watt are displayed
/// at two decimals; underlying values stay unrounded in memory.
pub fn gpu_table_csv(points: &[EfficiencyPoint]) -> String {
    let mut out = String::from("adapted,gpu,precision,tflops,watts,launch_date,gflops_per_watt\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{:.2},{},{},{:.2}\n",
            adapted_kind(p),
            p.gpu_name,
            table_precision(p.precision),
            round2(p.tflops),
            p.tdp_watts,
            p.launch_date,
            round2(p.gflops_per_watt),
        ));
    }
    out
}

fn fit_line(out: &mut String, label: &str, fit: &Option<TrendFit>) {
    match fit {
        Some(f) => {
            let doubling = doubling_time(f)
                .map(|d| format!(" doubling_time_years={}", sig6(d)))
                .unwrap_or_default();
            out.push_str(&format!(
                "{label}: slope={} intercept={} r2={} n={}{}\n",
                sig6(f.slope),
                sig6(f.intercept),
                sig6(f.r_squared),
                f.n_points,
                doubling
            ));
        }
        None => out.push_str(&format!("{label}: insufficient data\n")),
    }
}

/// Plain-text summary of one domain's analysis.
pub fn summary_text(analysis: &DomainAnalysis) -> String {
    let mut out = String::new();
    let domain = analysis.domain;
    out.push_str(&format!(
        "domain: {domain}\nmodels: {} ({} scored)\n",
        analysis.models.len(),
        analysis.models.iter().filter(|m| m.score.is_some()).count()
    ));
    if analysis.models.is_empty() {
        out.push_str("zero records; nothing to analyze\n");
        return out;
    }

    out.push_str("\n[trend fits] log10(metric) per fractional year\n");
    fit_line(&mut out, "gflops frontier", &analysis.gflops_frontier_fit);
    fit_line(&mut out, "gflops all", &analysis.gflops_all_fit);
    fit_line(&mut out, "joules frontier", &analysis.joules_frontier_fit);
    fit_line(&mut out, "joules all", &analysis.joules_all_fit);
    fit_line(&mut out, "efficiency", &analysis.efficiency_fit);
    fit_line(
        &mut out,
        &format!("efficiency (without {} adapted points)", crate::analysis::OUTLIER_GPU),
        &analysis.efficiency_fit_no_outlier,
    );

    out.push_str(&format!("\n[frontier subset] {} models\n", analysis.frontier.len()));
    for m in &analysis.frontier {
        out.push_str(&format!(
            "{} {} gflops={}{}\n",
            m.release_date,
            m.name,
            sig6(m.gflops_forward),
            m.score.map(|s| format!(" score={}", sig6(s))).unwrap_or_default()
        ));
    }

    out.push_str(&format!("\n[pareto frontier] {} members (gflops, score)\n", analysis.pareto.len()));
    for p in &analysis.pareto {
        out.push_str(&format!("{} gflops={} score={}\n", p.model_name, sig6(p.x), sig6(p.y)));
    }

    if !analysis.equivalents.is_empty() {
        let anchor = &analysis.models[0];
        out.push_str(&format!(
            "\n[cost equivalents] within +-{}% of {} ({} gflops)\n",
            sig6(crate::analysis::EQUIVALENCE_TOLERANCE * 100.0),
            anchor.name,
            sig6(anchor.gflops_forward)
        ));
        for m in &analysis.equivalents {
            out.push_str(&format!(
                "{} {} gflops={}{}\n",
                m.release_date.year(),
                m.name,
                sig6(m.gflops_forward),
                m.score.map(|s| format!(" score={}", sig6(s))).unwrap_or_default()
            ));
        }
    }

    if let Some(c) = &analysis.correlations {
        out.push_str("\n[params vs gflops correlations]\n");
        out.push_str(&format!(
            "cnn raw={} loglog={}\ntransformer raw={} loglog={}\n",
            sig6(c.cnn_raw),
            sig6(c.cnn_loglog),
            sig6(c.transformer_raw),
            sig6(c.transformer_loglog)
        ));
        match c.reproducing_convention {
            Some(conv) => out.push_str(&format!(
                "convention reproducing the reference values ({}/{}): {conv}\n",
                sig6(crate::analysis::REFERENCE_CORRELATION_CNN),
                sig6(crate::analysis::REFERENCE_CORRELATION_TRANSFORMER)
            )),
            None => out.push_str("no convention reproduces the reference values\n"),
        }
    }

    out.push_str("\n[adapted gpu table]\n");
    out.push_str(&gpu_table_csv(&analysis.efficiency_points));

    out.push_str("\n[mean joules per year] (arithmetic, geometric)\n");
    for y in &analysis.yearly_joules {
        out.push_str(&format!(
            "{} arithmetic={} geometric={} n={}\n",
            y.year,
            sig6(y.arithmetic_mean),
            sig6(y.geometric_mean),
            y.count
        ));
    }

    out.push_str("\n[baseline crossings]\n");
    for c in &analysis.crossings {
        out.push_str(&format!(
            "{} joules fit vs {} ({} J/s): year={} date={}{}\n",
            c.subset,
            c.baseline,
            sig6(c.baseline_joules_per_second),
            sig6(c.fractional_year),
            c.date,
            if c.already_past { " (already crossed)" } else { "" }
        ));
    }

    out
}

/// Writes the figure files and summary for one domain into `out_dir`.
/// Returns the paths written, figures first.
pub fn write_report(analysis: &DomainAnalysis, out_dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for figure in build_figures(analysis) {
        let path = out_dir.join(format!("{}.ndjson", figure.figure_id));
        fs::write(&path, figure.to_ndjson())?;
        written.push(path);
    }
    let summary_path = out_dir.join(format!("summary_{}.txt", domain_tag(analysis.domain)));
    fs::write(&summary_path, summary_text(analysis))?;
    written.push(summary_path);
    Ok(written)
}
