//! Thin wrappers over `libm` so the same code builds with and without `std`
//! and produces identical bits on every platform.

pub(crate) use libm::{cos, exp, expm1, fabs as abs, lgamma, log, log1p, pow, sin, sqrt, tgamma};

pub(crate) const PI: f64 = core::f64::consts::PI;

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// `ln n!`.
#[inline]
pub(crate) fn ln_factorial(n: u32) -> f64 {
    lgamma(f64::from(n) + 1.0)
}

/// `ln C(n, k)`.
#[inline]
pub(crate) fn ln_binomial(n: u32, k: u32) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Gamma function ratio `Γ(a) / Γ(b)` evaluated through log-gamma.
#[inline]
pub(crate) fn gamma_ratio(a: f64, b: f64) -> f64 {
    exp(lgamma(a) - lgamma(b))
}
