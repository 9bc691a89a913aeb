//! Human energy baselines, trend crossings and per-capita scenarios.

use core::fmt;

use crate::date::CivilDate;
use crate::math;
use crate::trend::TrendFit;

/// Dietary kilocalorie, in Joules.
pub const JOULES_PER_KILOCALORIE: f64 = 4184.0;
pub const SECONDS_PER_DAY: f64 = 86_400.0;
pub const JOULES_PER_KILOWATT_HOUR: f64 = 3.6e6;
/// Julian year (365.25 days), matching the fractional-year axis.
pub const SECONDS_PER_JULIAN_YEAR: f64 = 31_557_600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    /// Human metabolic power from daily dietary intake.
    Somatic,
    /// Per-capita total energy use (electricity, transport, heating).
    External,
    Custom,
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineKind::Somatic => "somatic",
            BaselineKind::External => "external",
            BaselineKind::Custom => "custom",
        })
    }
}

/// A constant power level to compare Joules-per-inference trends against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baseline {
    pub kind: BaselineKind,
    pub joules_per_second: f64,
}

/// A per-capita inference-rate hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub inferences_per_capita_per_second: f64,
    pub population: u64,
}

impl Scenario {
    pub fn new(inferences_per_capita_per_second: f64, population: u64) -> Result<Self, ForecastError> {
        if !(inferences_per_capita_per_second.is_finite() && inferences_per_capita_per_second >= 0.0)
            || population == 0
        {
            return Err(ForecastError::NonPositiveInput);
        }
        Ok(Scenario {
            inferences_per_capita_per_second,
            population,
        })
    }
}

/// Where a fitted trend reaches a baseline power level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub fractional_year: f64,
    pub date: CivilDate,
}

/// Per-capita and aggregate power of a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerDraw {
    pub per_capita_watts: f64,
    pub aggregate_watts: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForecastError {
    NonPositiveInput,
    /// A flat trend never crosses the baseline.
    ZeroSlope,
}

impl fmt::Display for ForecastError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForecastError::NonPositiveInput => write!(f, "inputs must be positive"),
            ForecastError::ZeroSlope => write!(f, "a zero-slope trend never crosses a baseline"),
        }
    }
}

impl core::error::Error for ForecastError {}

/// Metabolic power from daily intake: `kcal · 4184 J/kcal / 86400 s`.
pub fn somatic_baseline(kcal_per_day: f64) -> Result<Baseline, ForecastError> {
    if !(kcal_per_day.is_finite() && kcal_per_day > 0.0) {
        return Err(ForecastError::NonPositiveInput);
    }
    Ok(Baseline {
        kind: BaselineKind::Somatic,
        joules_per_second: kcal_per_day * JOULES_PER_KILOCALORIE / SECONDS_PER_DAY,
    })
}

/// Total-consumption power from annual use: `kWh · 3.6 MJ / Julian year`.
pub fn external_baseline(kwh_per_year: f64) -> Result<Baseline, ForecastError> {
    if !(kwh_per_year.is_finite() && kwh_per_year > 0.0) {
        return Err(ForecastError::NonPositiveInput);
    }
    Ok(Baseline {
        kind: BaselineKind::External,
        joules_per_second: kwh_per_year * JOULES_PER_KILOWATT_HOUR / SECONDS_PER_JULIAN_YEAR,
    })
}

pub fn custom_baseline(joules_per_second: f64) -> Result<Baseline, ForecastError> {
    if !(joules_per_second.is_finite() && joules_per_second > 0.0) {
        return Err(ForecastError::NonPositiveInput);
    }
    Ok(Baseline {
        kind: BaselineKind::Custom,
        joules_per_second,
    })
}

/// Date where the fitted trend equals the baseline power:
/// `t = (log10(baseline) - intercept) / slope`. May lie in the past.
pub fn crossing_date(fit: &TrendFit, baseline: &Baseline) -> Result<Crossing, ForecastError> {
    if fit.slope == 0.0 || !fit.slope.is_finite() {
        return Err(ForecastError::ZeroSlope);
    }
    let year = (math::log10(baseline.joules_per_second) - fit.intercept) / fit.slope;
    Ok(Crossing {
        fractional_year: year,
        date: CivilDate::from_fractional_year(year),
    })
}

/// Continuous per-capita power of a scenario, with the aggregate across
/// the population alongside.
pub fn percapita_power(joules_per_inference: f64, scenario: &Scenario) -> Result<PowerDraw, ForecastError> {
    if !(joules_per_inference.is_finite() && joules_per_inference > 0.0) {
        return Err(ForecastError::NonPositiveInput);
    }
    let per_capita = joules_per_inference * scenario.inferences_per_capita_per_second;
    Ok(PowerDraw {
        per_capita_watts: per_capita,
        aggregate_watts: per_capita * scenario.population as f64,
    })
}
