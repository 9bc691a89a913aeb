//! Exponential (log-linear) trend fitting, frontier extraction,
//! correlations and equivalence queries over the model records.
//!
//! Metrics that grow exponentially plot as lines on a log axis, so every
//! fit here is ordinary least squares of `log10(metric)` against the
//! fractional-year date. Slopes are per year.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::date::CivilDate;
use crate::math;
use crate::records::ModelRecord;

/// Subset a fit was computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetLabel {
    Frontier,
    All,
}

impl fmt::Display for SubsetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubsetLabel::Frontier => "frontier",
            SubsetLabel::All => "all",
        })
    }
}

/// Parameters of a log-linear regression of a metric against time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendFit {
    /// Change of log10(metric) per fractional year.
    pub slope: f64,
    /// log10(metric) extrapolated to year zero.
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub metric_label: String,
    pub subset_label: SubsetLabel,
}

/// One (cost, performance) sample for Pareto extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierPoint {
    pub model_name: String,
    /// Cost metric: GFLOPs or Joules.
    pub x: f64,
    /// Performance metric: score.
    pub y: f64,
    pub date: CivilDate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendError {
    TooFewPoints,
    NonPositiveValue,
    DegenerateDates,
    NonPositiveSlope,
    LengthMismatch,
    ZeroVariance,
}

impl fmt::Display for TrendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrendError::TooFewPoints => write!(f, "need at least two points"),
            TrendError::NonPositiveValue => write!(f, "log-scale values must be positive"),
            TrendError::DegenerateDates => write!(f, "need at least two distinct dates"),
            TrendError::NonPositiveSlope => write!(f, "slope must be positive"),
            TrendError::LengthMismatch => write!(f, "input collections differ in length"),
            TrendError::ZeroVariance => write!(f, "inputs have zero variance"),
        }
    }
}

impl core::error::Error for TrendError {}

/// Ordinary least squares of `log10(value)` against fractional-year
/// dates. Computed with centered sums; `r_squared` is 1 when the values
/// are all equal (a horizontal line fits them exactly).
pub fn log_linear_fit(
    points: &[(f64, f64)],
    metric_label: &str,
    subset_label: SubsetLabel,
) -> Result<TrendFit, TrendError> {
    if points.len() < 2 {
        return Err(TrendError::TooFewPoints);
    }
    if points.iter().any(|&(_, v)| !(v.is_finite() && v > 0.0)) {
        return Err(TrendError::NonPositiveValue);
    }
    let n = points.len() as f64;
    let mean_t = points.iter().map(|&(t, _)| t).sum::<f64>() / n;
    let logs: Vec<f64> = points.iter().map(|&(_, v)| math::log10(v)).collect();
    let mean_y = logs.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&(t, _), &y) in points.iter().zip(&logs) {
        let dt = t - mean_t;
        let dy = y - mean_y;
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(TrendError::DegenerateDates);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_t;
    let mut ss_res = 0.0;
    for (&(t, _), &y) in points.iter().zip(&logs) {
        let r = y - (intercept + slope * t);
        ss_res += r * r;
    }
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(TrendFit {
        slope,
        intercept,
        r_squared: r_squared.clamp(0.0, 1.0),
        n_points: points.len(),
        metric_label: String::from(metric_label),
        subset_label,
    })
}

/// Fitted metric value at a fractional-year date.
pub fn predict(fit: &TrendFit, fractional_year: f64) -> f64 {
    math::exp10(fit.intercept + fit.slope * fractional_year)
}

/// Years for the fitted metric to double: `log10(2) / slope`.
pub fn doubling_time(fit: &TrendFit) -> Result<f64, TrendError> {
    if fit.slope.is_nan() || fit.slope <= 0.0 {
        return Err(TrendError::NonPositiveSlope);
    }
    Ok(math::log10(2.0) / fit.slope)
}

/// Metric used to pick the per-year best record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YearMetric {
    /// Highest score; scoreless records are skipped. Ties go to the lower
    /// forward-pass cost, then the lexicographically smaller name.
    Score,
    /// Highest forward-pass GFLOPs. Ties go to the smaller name.
    Gflops,
}

/// The best record of each calendar year present, ordered by year.
pub fn best_per_year<'a>(models: &[&'a ModelRecord], metric: YearMetric) -> Vec<&'a ModelRecord> {
    let mut by_year: alloc::collections::BTreeMap<i32, &ModelRecord> =
        alloc::collections::BTreeMap::new();
    for m in models {
        let year = m.release_date.year();
        match metric {
            YearMetric::Score => {
                let Some(score) = m.score else { continue };
                let replace = match by_year.get(&year) {
                    None => true,
                    Some(cur) => {
                        let cur_score = cur.score.unwrap_or(f64::NEG_INFINITY);
                        score > cur_score
                            || (score == cur_score
                                && (m.gflops_forward, m.name.as_str())
                                    < (cur.gflops_forward, cur.name.as_str()))
                    }
                };
                if replace {
                    by_year.insert(year, m);
                }
            }
            YearMetric::Gflops => {
                let replace = match by_year.get(&year) {
                    None => true,
                    Some(cur) => {
                        m.gflops_forward > cur.gflops_forward
                            || (m.gflops_forward == cur.gflops_forward && m.name < cur.name)
                    }
                };
                if replace {
                    by_year.insert(year, m);
                }
            }
        }
    }
    by_year.into_values().collect()
}

/// Records that were the most compute-demanding released so far: the
/// running maximum of forward-pass GFLOPs in release order.
pub fn most_demanding_frontier<'a>(models: &[&'a ModelRecord]) -> Vec<&'a ModelRecord> {
    let mut sorted: Vec<&ModelRecord> = models.to_vec();
    sorted.sort_by(|a, b| {
        (a.release_date, &a.name).cmp(&(b.release_date, &b.name))
    });
    let mut out = Vec::new();
    let mut best = 0.0;
    for m in sorted {
        if m.gflops_forward > best {
            best = m.gflops_forward;
            out.push(m);
        }
    }
    out
}

/// Points not strictly dominated, sorted by cost ascending.
///
/// `p` dominates `q` when `p.x <= q.x` and `p.y >= q.y` with at least one
/// strict inequality. Duplicate coordinates survive together.
pub fn pareto_frontier(points: &[FrontierPoint]) -> Vec<FrontierPoint> {
    let mut sorted: Vec<&FrontierPoint> = points.iter().collect();
    sorted.sort_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then_with(|| b.y.total_cmp(&a.y))
            .then_with(|| a.model_name.cmp(&b.model_name))
    });
    let mut out: Vec<FrontierPoint> = Vec::new();
    let mut best_y_before = f64::NEG_INFINITY;
    let mut i = 0;
    while i < sorted.len() {
        // One run of equal x at a time; within the run only a strictly
        // higher y dominates.
        let mut j = i;
        while j < sorted.len() && sorted[j].x == sorted[i].x {
            j += 1;
        }
        let group_best = sorted[i].y;
        for p in &sorted[i..j] {
            if p.y > best_y_before && p.y >= group_best {
                out.push((*p).clone());
            }
        }
        best_y_before = best_y_before.max(group_best);
        i = j;
    }
    out
}

/// Pearson product-moment correlation.
pub fn pearson_correlation(xs: &[f64], ys: &[f64]) -> Result<f64, TrendError> {
    if xs.len() != ys.len() {
        return Err(TrendError::LengthMismatch);
    }
    if xs.len() < 2 {
        return Err(TrendError::ZeroVariance);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(TrendError::ZeroVariance);
    }
    Ok(sxy / math::sqrt(sxx * syy))
}

/// Models whose forward-pass cost lies within `reference · [1 - tolerance,
/// 1 + tolerance]`, ordered by release date.
pub fn compute_equivalents<'a>(
    models: &[&'a ModelRecord],
    reference_gflops: f64,
    tolerance: f64,
) -> Vec<&'a ModelRecord> {
    let mut out: Vec<&ModelRecord> = models
        .iter()
        .copied()
        .filter(|m| math::abs(m.gflops_forward - reference_gflops) <= tolerance * reference_gflops)
        .collect();
    out.sort_by(|a, b| {
        (a.release_date, &a.name).cmp(&(b.release_date, &b.name))
    });
    out
}
