//! FLOPs-counting convention normalization and the compound/resolution
//! scaling estimators used to fill in unreported forward-pass costs.
//!
//! Internally one fused multiply-add counts as two operations. Sources
//! that count a multiply-add pair as a single operation are doubled at
//! ingestion via [`normalize_flops`].

use core::fmt;

use crate::math;

/// How a source counted floating-point operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlopsConvention {
    /// A multiply-add pair counted as one operation (common in CV papers).
    MaddPairAsOne,
    /// Every mathematical operation counted individually (common in NLP).
    OpAsOne,
}

/// Per-dimension ratios between a scaled network and its base variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactors {
    pub depth_ratio: f64,
    pub width_ratio: f64,
    pub resolution_ratio: f64,
}

impl ScaleFactors {
    pub fn new(depth_ratio: f64, width_ratio: f64, resolution_ratio: f64) -> Result<Self, FlopsError> {
        for v in [depth_ratio, width_ratio, resolution_ratio] {
            if !(v.is_finite() && v > 0.0) {
                return Err(FlopsError::NonPositiveInput);
            }
        }
        Ok(ScaleFactors {
            depth_ratio,
            width_ratio,
            resolution_ratio,
        })
    }

    pub fn identity() -> Self {
        ScaleFactors {
            depth_ratio: 1.0,
            width_ratio: 1.0,
            resolution_ratio: 1.0,
        }
    }
}

/// Architecture coefficients of one network variant: width and depth
/// multipliers plus the test-time input resolution (pixels per side).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchSpec {
    pub width_coeff: f64,
    pub depth_coeff: f64,
    pub test_resolution: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlopsError {
    NonPositiveInput,
    ZeroBase,
    DegenerateResolutions,
}

impl fmt::Display for FlopsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlopsError::NonPositiveInput => write!(f, "inputs must be positive and finite"),
            FlopsError::ZeroBase => write!(f, "base architecture coefficients must be positive"),
            FlopsError::DegenerateResolutions => write!(f, "resolutions must differ"),
        }
    }
}

impl core::error::Error for FlopsError {}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Converts a printed GFLOPs figure to the internal convention (one
/// multiply-add pair = two operations). Doubles `MaddPairAsOne` values,
/// passes `OpAsOne` values through.
pub fn normalize_flops(reported: f64, convention: FlopsConvention) -> Result<f64, FlopsError> {
    if !positive(reported) {
        return Err(FlopsError::NonPositiveInput);
    }
    Ok(match convention {
        FlopsConvention::MaddPairAsOne => 2.0 * reported,
        FlopsConvention::OpAsOne => reported,
    })
}

/// Component-wise ratios `target / base` of two architecture specs.
pub fn scale_factors(base: &ArchSpec, target: &ArchSpec) -> Result<ScaleFactors, FlopsError> {
    if !(positive(base.depth_coeff) && positive(base.width_coeff) && positive(base.test_resolution)) {
        return Err(FlopsError::ZeroBase);
    }
    if !(positive(target.depth_coeff) && positive(target.width_coeff) && positive(target.test_resolution)) {
        return Err(FlopsError::NonPositiveInput);
    }
    Ok(ScaleFactors {
        depth_ratio: target.depth_coeff / base.depth_coeff,
        width_ratio: target.width_coeff / base.width_coeff,
        resolution_ratio: target.test_resolution / base.test_resolution,
    })
}

/// Compound scaling: FLOPs grow with depth linearly and with width and
/// resolution quadratically, so the estimate is
/// `base · d_ratio · w_ratio² · r_ratio²`.
pub fn compound_scale_flops(base_gflops: f64, factors: &ScaleFactors) -> Result<f64, FlopsError> {
    if !positive(base_gflops) {
        return Err(FlopsError::NonPositiveInput);
    }
    ScaleFactors::new(factors.depth_ratio, factors.width_ratio, factors.resolution_ratio)?;
    Ok(base_gflops
        * factors.depth_ratio
        * factors.width_ratio
        * factors.width_ratio
        * factors.resolution_ratio
        * factors.resolution_ratio)
}

/// Quadratic resolution scaling: `base · (target_res / base_res)²`.
///
/// Callers extrapolating should first confirm [`resolution_exponent`] is
/// close to 2 (see [`exponent_is_quadratic`]); [`scale_with_exponent`]
/// keeps the measured exponent instead of snapping it to 2.
pub fn resolution_scale_flops(base_gflops: f64, base_res: f64, target_res: f64) -> Result<f64, FlopsError> {
    scale_with_exponent(base_gflops, base_res, target_res, 2.0)
}

/// Empirical growth exponent of FLOPs with resolution from two measured
/// (resolution, FLOPs) pairs: `ln(f_b/f_a) / ln(r_b/r_a)`.
pub fn resolution_exponent(flops_a: f64, flops_b: f64, res_a: f64, res_b: f64) -> Result<f64, FlopsError> {
    if !(positive(flops_a) && positive(flops_b) && positive(res_a) && positive(res_b)) {
        return Err(FlopsError::NonPositiveInput);
    }
    if res_a == res_b {
        return Err(FlopsError::DegenerateResolutions);
    }
    Ok(math::ln(flops_b / flops_a) / math::ln(res_b / res_a))
}

/// Power-law resolution scaling: `base · (target_res / base_res)^exponent`.
pub fn scale_with_exponent(
    base_gflops: f64,
    base_res: f64,
    target_res: f64,
    exponent: f64,
) -> Result<f64, FlopsError> {
    if !(positive(base_gflops) && positive(base_res) && positive(target_res)) || !exponent.is_finite() {
        return Err(FlopsError::NonPositiveInput);
    }
    Ok(base_gflops * math::powf(target_res / base_res, exponent))
}

/// Acceptable deviation of a measured resolution exponent from 2 before
/// quadratic extrapolation is considered untrustworthy.
pub const QUADRATIC_EXPONENT_TOLERANCE: f64 = 0.1;

pub fn exponent_is_quadratic(exponent: f64) -> bool {
    math::abs(exponent - 2.0) <= QUADRATIC_EXPONENT_TOLERANCE
}
