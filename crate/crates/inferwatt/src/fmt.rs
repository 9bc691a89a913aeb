//! Deterministic float formatting for report files.
//!
//! Series and summary files must be byte-identical across runs, so every
//! float goes through [`sig6`]: six significant digits, `printf %g`-style
//! choice between fixed and scientific notation, trailing zeros trimmed.

/// Formats with `digits` significant digits, trimming trailing zeros.
pub fn sig(value: f64, digits: usize) -> String {
    assert!(digits > 0);
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let exponent = value.abs().log10().floor() as i32;
    // %g switches to scientific below 1e-4 and at/above 10^digits.
    if exponent < -4 || exponent >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, value);
        trim_scientific(&s)
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        let s = format!("{value:.decimals$}");
        trim_fixed(&s)
    }
}

/// Six significant digits, the report-wide precision.
pub fn sig6(value: f64) -> String {
    sig(value, 6)
}

fn trim_fixed(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn trim_scientific(s: &str) -> String {
    match s.split_once('e') {
        Some((mantissa, exp)) => format!("{}e{}", trim_fixed(mantissa), exp),
        None => s.to_string(),
    }
}

/// Two decimals with ties away from zero, for table display.
pub fn round2(value: f64) -> f64 {
    (value * 100.0).round() / 100.0
}

/// Display convention for scaling estimates: whole numbers from
/// 10 GFLOPs up, one decimal below.
pub fn display_gflops(value: f64) -> String {
    if value >= 10.0 {
        format!("{value:.0}")
    } else {
        format!("{value:.1}")
    }
}
