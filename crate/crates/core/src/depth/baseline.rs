//! Averaging depths used as comparison baselines.

use super::{DepthError, DepthIndex};
use crate::FunctionalSample;

/// Weighted mean of the pointwise depth profile.
///
/// Uses the same strict-inequality pointwise depth as ED, which differs from
/// the Fraiman–Muniz convention only at ties.
pub fn integrated_depth(sample: &FunctionalSample, g: &[f64]) -> Result<f64, DepthError> {
    sample.check_query(g)?;
    Ok(integrated_with(&DepthIndex::new(sample), g))
}

pub(super) fn integrated_with(index: &DepthIndex<'_>, g: &[f64]) -> f64 {
    let sample = index.sample();
    let n = sample.n() as f64;
    let profile = index.profile_unchecked(g);
    profile
        .numerators()
        .iter()
        .enumerate()
        .map(|(j, &k)| sample.weight(j) * (k as f64 / n))
        .sum()
}

/// Modified band depth over all unordered pairs of sample functions.
///
/// At each grid point the pairs whose closed band `[min, max]` contains `g`
/// are all pairs except those lying entirely strictly below or strictly
/// above it, which gives `C(n,2) - C(below,2) - C(above,2)` without
/// enumerating pairs.
pub fn modified_band_depth(sample: &FunctionalSample, g: &[f64]) -> Result<f64, DepthError> {
    sample.check_query(g)?;
    modified_band_with(&DepthIndex::new(sample), g)
}

pub(super) fn modified_band_with(index: &DepthIndex<'_>, g: &[f64]) -> Result<f64, DepthError> {
    let sample = index.sample();
    let n = sample.n();
    if n < 2 {
        return Err(DepthError::TooFewFunctions { n, min: 2 });
    }
    let pairs = choose2(n) as f64;
    let mut acc = 0.0;
    for (j, &v) in g.iter().enumerate() {
        let (below, above) = index.counts_at(j, v);
        let inside = choose2(n) - choose2(below) - choose2(above);
        acc += sample.weight(j) * (inside as f64 / pairs);
    }
    Ok(acc)
}

fn choose2(k: usize) -> u64 {
    let k = k as u64;
    k * k.saturating_sub(1) / 2
}
