// Float helpers that work without std.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn powi(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn lgamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `floor(x)` that treats values within a relative 1e-9 below an integer as
/// that integer, so that a level such as `0.7 * 10` lands on 7.
pub(crate) fn robust_floor(x: f64) -> f64 {
    floor(x + 1e-9 * abs(x).max(1.0))
}

/// `ceil(x)` with the same snapping as [`robust_floor`].
pub(crate) fn robust_ceil(x: f64) -> f64 {
    ceil(x - 1e-9 * abs(x).max(1.0))
}
