//! End-to-end analysis pipelines over a validated bundle: frontier
//! subsets, trend fits, energy estimates, Pareto membership, correlation
//! conventions and baseline crossings, per domain.

use inferwatt_core::date::CivilDate;
use inferwatt_core::energy::{annotate_energy, efficiency_trend, EnergyError, EnergyEstimate};
use inferwatt_core::forecast::{
    crossing_date, external_baseline, somatic_baseline, Baseline, BaselineKind,
};
use inferwatt_core::hardware::{build_adapted_table, EfficiencyPoint, HardwareError};
use inferwatt_core::records::{filter_models, Architecture, DatasetBundle, Domain, ModelRecord};
use inferwatt_core::trend::{
    best_per_year, log_linear_fit, most_demanding_frontier, pareto_frontier, pearson_correlation,
    FrontierPoint, SubsetLabel, TrendFit, YearMetric,
};

/// Somatic baseline input: dietary intake per person-day.
pub const DEFAULT_KCAL_PER_DAY: f64 = 2000.0;
/// External baseline input: total per-capita energy use per year.
pub const DEFAULT_KWH_PER_YEAR: f64 = 79_897.0;

/// Relative half-width of the cost-equivalence query. ±120% spans the
/// compiled equivalence table around its anchor model.
pub const EQUIVALENCE_TOLERANCE: f64 = 1.2;

/// Adapted points of this GPU sit far above the efficiency trend (an
/// inference-specialized part); the sensitivity fit drops them.
pub const OUTLIER_GPU: &str = "T4";

/// Correlation anchors reported with the compiled dataset, and the
/// tolerance for deciding which convention reproduces them.
pub const REFERENCE_CORRELATION_TRANSFORMER: f64 = 0.994;
pub const REFERENCE_CORRELATION_CNN: f64 = 0.772;
pub const CORRELATION_TOLERANCE_TRANSFORMER: f64 = 0.02;
pub const CORRELATION_TOLERANCE_CNN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationConvention {
    Raw,
    LogLog,
}

impl std::fmt::Display for CorrelationConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CorrelationConvention::Raw => "raw",
            CorrelationConvention::LogLog => "log-log",
        })
    }
}

/// Pearson correlations of (params, GFLOPs) per architecture subset under
/// both conventions, with the convention that reproduces the reference
/// values, when one does.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub cnn_raw: f64,
    pub cnn_loglog: f64,
    pub transformer_raw: f64,
    pub transformer_loglog: f64,
    pub reproducing_convention: Option<CorrelationConvention>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct YearlyJoules {
    pub year: i32,
    pub arithmetic_mean: f64,
    pub geometric_mean: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub subset: SubsetLabel,
    pub baseline: BaselineKind,
    pub baseline_joules_per_second: f64,
    pub fractional_year: f64,
    pub date: CivilDate,
    /// Crossing precedes the newest release in the domain.
    pub already_past: bool,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Hardware(#[from] HardwareError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
}

/// Everything one domain's report needs.
#[derive(Debug, Clone)]
pub struct DomainAnalysis {
    pub domain: Domain,
    /// Domain subset, release order.
    pub models: Vec<ModelRecord>,
    /// Frontier subset: best score per year (CV), most demanding at
    /// release (NLP, where scores are sparse).
    pub frontier: Vec<ModelRecord>,
    pub gflops_frontier_fit: Option<TrendFit>,
    pub gflops_all_fit: Option<TrendFit>,
    /// Full efficiency table: generic points plus both domains' adapted points.
    pub efficiency_points: Vec<EfficiencyPoint>,
    pub efficiency_fit: Option<TrendFit>,
    /// Same fit without the outlier GPU's adapted points.
    pub efficiency_fit_no_outlier: Option<TrendFit>,
    /// One estimate per model, same order as `models`.
    pub estimates: Vec<EnergyEstimate>,
    pub joules_frontier_fit: Option<TrendFit>,
    pub joules_all_fit: Option<TrendFit>,
    /// Pareto frontier in (GFLOPs, score) space over scored models.
    pub pareto: Vec<FrontierPoint>,
    /// Models with forward-pass cost near the anchor (earliest) model's.
    pub equivalents: Vec<ModelRecord>,
    pub correlations: Option<CorrelationReport>,
    pub yearly_joules: Vec<YearlyJoules>,
    pub crossings: Vec<CrossingReport>,
}

/// Frontier subset used for the dashed trend lines: per-year best score
/// where scores are dense (CV); the running compute maximum where most
/// records carry no score (NLP).
pub fn frontier_subset<'a>(models: &[&'a ModelRecord], domain: Domain) -> Vec<&'a ModelRecord> {
    match domain {
        Domain::Cv => best_per_year(models, YearMetric::Score),
        Domain::Nlp => most_demanding_frontier(models),
    }
}

fn gflops_points(models: &[&ModelRecord]) -> Vec<(f64, f64)> {
    models
        .iter()
        .map(|m| (m.release_date.fractional_year(), m.gflops_forward))
        .collect()
}

fn correlation_report(models: &[&ModelRecord]) -> Option<CorrelationReport> {
    let subset = |arch: Architecture| -> (Vec<f64>, Vec<f64>) {
        models
            .iter()
            .filter(|m| m.architecture == arch && m.params_m.is_some())
            .map(|m| (m.params_m.unwrap(), m.gflops_forward))
            .unzip()
    };
    let (cnn_p, cnn_g) = subset(Architecture::Cnn);
    let (tr_p, tr_g) = subset(Architecture::Transformer);
    let logs = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| x.log10()).collect() };
    let report = CorrelationReport {
        cnn_raw: pearson_correlation(&cnn_p, &cnn_g).ok()?,
        cnn_loglog: pearson_correlation(&logs(&cnn_p), &logs(&cnn_g)).ok()?,
        transformer_raw: pearson_correlation(&tr_p, &tr_g).ok()?,
        transformer_loglog: pearson_correlation(&logs(&tr_p), &logs(&tr_g)).ok()?,
        reproducing_convention: None,
    };
    let matches = |cnn: f64, tr: f64| {
        (tr - REFERENCE_CORRELATION_TRANSFORMER).abs() <= CORRELATION_TOLERANCE_TRANSFORMER
            && (cnn - REFERENCE_CORRELATION_CNN).abs() <= CORRELATION_TOLERANCE_CNN
    };
    let convention = if matches(report.cnn_raw, report.transformer_raw) {
        Some(CorrelationConvention::Raw)
    } else if matches(report.cnn_loglog, report.transformer_loglog) {
        Some(CorrelationConvention::LogLog)
    } else {
        None
    };
    Some(CorrelationReport {
        reproducing_convention: convention,
        ..report
    })
}

fn yearly_joules(models: &[ModelRecord], estimates: &[EnergyEstimate]) -> Vec<YearlyJoules> {
    let mut by_year: std::collections::BTreeMap<i32, Vec<f64>> = std::collections::BTreeMap::new();
    for (m, e) in models.iter().zip(estimates) {
        by_year.entry(m.release_date.year()).or_default().push(e.joules);
    }
    by_year
        .into_iter()
        .map(|(year, joules)| {
            let n = joules.len() as f64;
            let arithmetic = joules.iter().sum::<f64>() / n;
            let geometric = 10f64.powf(joules.iter().map(|j| j.log10()).sum::<f64>() / n);
            YearlyJoules {
                year,
                arithmetic_mean: arithmetic,
                geometric_mean: geometric,
                count: joules.len(),
            }
        })
        .collect()
}

fn crossings_for(
    fit: &TrendFit,
    subset: SubsetLabel,
    baselines: &[Baseline],
    newest_release: Option<f64>,
) -> Vec<CrossingReport> {
    baselines
        .iter()
        .filter_map(|b| {
            let crossing = crossing_date(fit, b).ok()?;
            Some(CrossingReport {
                subset,
                baseline: b.kind,
                baseline_joules_per_second: b.joules_per_second,
                fractional_year: crossing.fractional_year,
                date: crossing.date,
                already_past: newest_release.is_some_and(|t| crossing.fractional_year < t),
            })
        })
        .collect()
}

/// Runs the full pipeline for one domain. Empty domains produce empty
/// collections and absent fits rather than errors.
pub fn analyze(bundle: &DatasetBundle, domain: Domain) -> Result<DomainAnalysis, AnalysisError> {
    let model_refs = filter_models(bundle, domain, None, false, None);
    let models: Vec<ModelRecord> = model_refs.iter().map(|m| (*m).clone()).collect();
    let frontier_refs = frontier_subset(&model_refs, domain);
    let frontier: Vec<ModelRecord> = frontier_refs.iter().map(|m| (*m).clone()).collect();

    let gflops_frontier_fit =
        log_linear_fit(&gflops_points(&frontier_refs), "gflops", SubsetLabel::Frontier).ok();
    let gflops_all_fit = log_linear_fit(&gflops_points(&model_refs), "gflops", SubsetLabel::All).ok();

    let efficiency_points = build_adapted_table(bundle)?;
    let efficiency_fit = efficiency_trend(&efficiency_points, domain).ok();
    let without_outlier: Vec<EfficiencyPoint> = efficiency_points
        .iter()
        .filter(|p| !(p.adapted && p.gpu_name == OUTLIER_GPU))
        .cloned()
        .collect();
    let efficiency_fit_no_outlier = efficiency_trend(&without_outlier, domain).ok();

    let (estimates, joules_frontier_fit, joules_all_fit) = match &efficiency_fit {
        Some(fit) => {
            let estimates = annotate_energy(&model_refs, fit, fit)?;
            let frontier_estimates = annotate_energy(&frontier_refs, fit, fit)?;
            let joules_points = |ms: &[&ModelRecord], es: &[EnergyEstimate]| -> Vec<(f64, f64)> {
                ms.iter()
                    .zip(es)
                    .map(|(m, e)| (m.release_date.fractional_year(), e.joules))
                    .collect()
            };
            let frontier_fit = log_linear_fit(
                &joules_points(&frontier_refs, &frontier_estimates),
                "joules",
                SubsetLabel::Frontier,
            )
            .ok();
            let all_fit =
                log_linear_fit(&joules_points(&model_refs, &estimates), "joules", SubsetLabel::All).ok();
            (estimates, frontier_fit, all_fit)
        }
        None => (Vec::new(), None, None),
    };

    let scored_points: Vec<FrontierPoint> = model_refs
        .iter()
        .filter_map(|m| {
            m.score.map(|score| FrontierPoint {
                model_name: m.name.clone(),
                x: m.gflops_forward,
                y: score,
                date: m.release_date,
            })
        })
        .collect();
    let pareto = if scored_points.is_empty() {
        Vec::new()
    } else {
        pareto_frontier(&scored_points)
    };

    let equivalents: Vec<ModelRecord> = match domain {
        Domain::Cv => model_refs
            .first()
            .map(|anchor| {
                inferwatt_core::trend::compute_equivalents(
                    &model_refs,
                    anchor.gflops_forward,
                    EQUIVALENCE_TOLERANCE,
                )
                .into_iter()
                .cloned()
                .collect()
            })
            .unwrap_or_default(),
        Domain::Nlp => Vec::new(),
    };

    let correlations = match domain {
        Domain::Cv => correlation_report(&model_refs),
        Domain::Nlp => None,
    };

    let yearly = yearly_joules(&models, &estimates);

    let baselines = [
        somatic_baseline(DEFAULT_KCAL_PER_DAY).expect("positive constant"),
        external_baseline(DEFAULT_KWH_PER_YEAR).expect("positive constant"),
    ];
    let newest = model_refs
        .iter()
        .map(|m| m.release_date.fractional_year())
        .fold(None, |acc: Option<f64>, t| Some(acc.map_or(t, |a| a.max(t))));
    let mut crossings = Vec::new();
    if let Some(fit) = &joules_frontier_fit {
        crossings.extend(crossings_for(fit, SubsetLabel::Frontier, &baselines, newest));
    }
    if let Some(fit) = &joules_all_fit {
        crossings.extend(crossings_for(fit, SubsetLabel::All, &baselines, newest));
    }

    Ok(DomainAnalysis {
        domain,
        models,
        frontier,
        gflops_frontier_fit,
        gflops_all_fit,
        efficiency_points,
        efficiency_fit,
        efficiency_fit_no_outlier,
        estimates,
        joules_frontier_fit,
        joules_all_fit,
        pareto,
        equivalents,
        correlations,
        yearly_joules: yearly,
        crossings,
    })
}
