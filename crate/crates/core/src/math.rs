//! Thin wrappers over `libm` so the kernel builds without `std`.

pub use core::f64::consts::{PI, TAU};

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn cbrt(x: f64) -> f64 {
    libm::cbrt(x)
}

#[inline]
pub fn log1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Reduces an angle into `[0, 2π)`. A full turn maps back onto zero exactly,
/// so periodic parametrizations close without rounding gaps.
#[inline]
pub fn wrap_angle(t: f64) -> f64 {
    let turns = floor(t / TAU);
    if turns == 0.0 {
        t
    } else {
        t - TAU * turns
    }
}
