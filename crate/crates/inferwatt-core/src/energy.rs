//! Joules per forward pass from release-date-matched hardware efficiency.
//!
//! GFLOPS per Watt is identically GFLOPs per Joule, so dividing a model's
//! forward-pass GFLOPs by the efficiency fitted at its release date gives
//! the energy of one inference.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::date::CivilDate;
use crate::hardware::{EfficiencyPoint, PointDomain};
use crate::math;
use crate::records::{Domain, ModelRecord};
use crate::trend::{log_linear_fit, predict, SubsetLabel, TrendError, TrendFit};

/// Release dates outside this fractional-year window make the fitted
/// efficiency an extrapolation, flagged in the estimate's provenance.
pub const EFFICIENCY_WINDOW: (f64, f64) = (2010.0, 2022.0);

/// Where an estimate's efficiency value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfficiencySource {
    /// Fitted efficiency trend evaluated at the release date (default).
    TrendFit { extrapolated: bool },
    /// Efficiency of the launch-date-nearest GPU point (sensitivity mode).
    NearestGpu,
    /// Caller-supplied efficiency.
    Explicit,
}

/// Joules for one forward pass of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub model_name: String,
    pub joules: f64,
    pub efficiency_used: f64,
    pub efficiency_date: CivilDate,
    pub efficiency_source: EfficiencySource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyError {
    NonPositiveInput,
    /// No efficiency point available for the requested domain.
    NoPoints,
}

impl fmt::Display for EnergyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyError::NonPositiveInput => write!(f, "inputs must be positive"),
            EnergyError::NoPoints => write!(f, "no efficiency points for the domain"),
        }
    }
}

impl core::error::Error for EnergyError {}

/// Log-linear fit of efficiency against launch date over the generic
/// FP32 points plus the domain's adapted points.
pub fn efficiency_trend(points: &[EfficiencyPoint], domain: Domain) -> Result<TrendFit, TrendError> {
    let wanted = match domain {
        Domain::Cv => PointDomain::Cv,
        Domain::Nlp => PointDomain::Nlp,
    };
    let samples: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.domain == PointDomain::Generic || p.domain == wanted)
        .map(|p| (p.launch_date.fractional_year(), p.gflops_per_watt))
        .collect();
    log_linear_fit(&samples, "gflops_per_watt", SubsetLabel::All)
}

/// Fitted GFLOPS per Watt at a fractional-year date.
pub fn efficiency_at(fit: &TrendFit, fractional_year: f64) -> f64 {
    predict(fit, fractional_year)
}

pub fn is_extrapolated(fractional_year: f64) -> bool {
    fractional_year < EFFICIENCY_WINDOW.0 || fractional_year > EFFICIENCY_WINDOW.1
}

/// Joules for one forward pass: `GFLOPs / (GFLOPs per Joule)`.
pub fn energy_per_inference(gflops_forward: f64, efficiency: f64) -> Result<f64, EnergyError> {
    if !(gflops_forward.is_finite() && gflops_forward > 0.0)
        || !(efficiency.is_finite() && efficiency > 0.0)
    {
        return Err(EnergyError::NonPositiveInput);
    }
    Ok(gflops_forward / efficiency)
}

/// Energy estimates for every model, using its domain's fitted efficiency
/// trend evaluated at the release date. Output preserves input order.
pub fn annotate_energy(
    models: &[&ModelRecord],
    cv_fit: &TrendFit,
    nlp_fit: &TrendFit,
) -> Result<Vec<EnergyEstimate>, EnergyError> {
    models
        .iter()
        .map(|m| {
            let fit = match m.domain {
                Domain::Cv => cv_fit,
                Domain::Nlp => nlp_fit,
            };
            let t = m.release_date.fractional_year();
            let eff = efficiency_at(fit, t);
            Ok(EnergyEstimate {
                model_name: m.name.clone(),
                joules: energy_per_inference(m.gflops_forward, eff)?,
                efficiency_used: eff,
                efficiency_date: m.release_date,
                efficiency_source: EfficiencySource::TrendFit {
                    extrapolated: is_extrapolated(t),
                },
            })
        })
        .collect()
}

/// Sensitivity variant: each model uses the efficiency of the point whose
/// launch date is nearest its release date (generic points plus the
/// model's domain), instead of the fitted trend.
pub fn annotate_energy_nearest(
    models: &[&ModelRecord],
    points: &[EfficiencyPoint],
) -> Result<Vec<EnergyEstimate>, EnergyError> {
    models
        .iter()
        .map(|m| {
            let wanted = match m.domain {
                Domain::Cv => PointDomain::Cv,
                Domain::Nlp => PointDomain::Nlp,
            };
            let release = m.release_date.days_since_epoch();
            let nearest = points
                .iter()
                .filter(|p| p.domain == PointDomain::Generic || p.domain == wanted)
                .min_by_key(|p| {
                    let gap = (p.launch_date.days_since_epoch() - release).abs();
                    (gap, p.launch_date, p.gpu_name.clone())
                })
                .ok_or(EnergyError::NoPoints)?;
            Ok(EnergyEstimate {
                model_name: m.name.clone(),
                joules: energy_per_inference(m.gflops_forward, nearest.gflops_per_watt)?,
                efficiency_used: nearest.gflops_per_watt,
                efficiency_date: nearest.launch_date,
                efficiency_source: EfficiencySource::NearestGpu,
            })
        })
        .collect()
}

/// Per-token energy view for NLP reporting; whole-input Joules otherwise.
pub fn joules_per_token(estimate: &EnergyEstimate, input_tokens: Option<u32>) -> f64 {
    match input_tokens {
        Some(tokens) if tokens > 0 => estimate.joules / f64::from(tokens),
        _ => estimate.joules,
    }
}

/// Checks the unit round trip `joules × efficiency = GFLOPs`.
pub fn round_trips(estimate: &EnergyEstimate, gflops_forward: f64) -> bool {
    let recovered = estimate.joules * estimate.efficiency_used;
    math::abs(recovered - gflops_forward) <= 1e-9 * gflops_forward
}
