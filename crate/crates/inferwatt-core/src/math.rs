//! Thin wrappers over `libm` so the crate stays `no_std` and float results
//! do not depend on the platform's C library.

pub(crate) fn log10(x: f64) -> f64 {
    libm::log10(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

/// 10^x, the inverse of [`log10`].
pub(crate) fn exp10(x: f64) -> f64 {
    libm::pow(10.0, x)
}

pub(crate) fn powf(base: f64, exponent: f64) -> f64 {
    libm::pow(base, exponent)
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}
