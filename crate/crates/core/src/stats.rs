//! Small descriptive statistics used across the crate.

use alloc::vec::Vec;

use crate::math;

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (divisor `n - 1`); `NaN` for fewer than two values.
pub fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let mu = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - mu) * (x - mu)).sum();
    math::sqrt(ss / (n - 1) as f64)
}

/// 1-based rank of the empirical `eta` quantile among `n` sorted values:
/// `ceil(eta * n)`, clamped to `1..=n`.
pub fn quantile_rank(eta: f64, n: usize) -> usize {
    let r = math::robust_ceil(eta * n as f64);
    (r.max(1.0) as usize).min(n)
}

/// Smallest value whose empirical CDF is at least `eta`.
///
/// `sorted` must be ascending and nonempty.
pub fn sorted_quantile(sorted: &[f64], eta: f64) -> f64 {
    sorted[quantile_rank(eta, sorted.len()) - 1]
}

/// Empirical `eta` quantile of unsorted data.
pub fn quantile(xs: &[f64], eta: f64) -> f64 {
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    sorted_quantile(&v, eta)
}

/// Coefficient of determination of the least-squares line of `y` on `x`.
pub fn r_squared(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy * sxy / (sxx * syy)
}
