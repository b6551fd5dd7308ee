//! Functional boxplots and fence-based outlier detection.
//!
//! The box is the hull of the deepest `ceil(n/2)` functions. Fences sit 1.5
//! box-widths beyond it at each grid point, and any function crossing a
//! fence at one or more grid points is flagged.

use alloc::vec::Vec;

use crate::depth::{DepthError, DepthMethod};
use crate::region::Envelope;
use crate::FunctionalSample;

/// Fence inflation factor, in units of the box's pointwise range.
pub const FENCE_FACTOR: f64 = 1.5;

#[derive(Debug, thiserror::Error)]
pub enum BoxplotError {
    #[error(transparent)]
    Depth(#[from] DepthError),
    #[error("functional boxplot needs at least 4 functions, sample has {0}")]
    TooFewFunctions(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FBoxplot {
    pub method: DepthMethod,
    /// Deepest function; the smallest index among equally deep ones.
    pub median: usize,
    pub boxed: Envelope,
    pub fence_lower: Vec<f64>,
    pub fence_upper: Vec<f64>,
    /// Ascending indices of functions crossing a fence somewhere.
    pub outliers: Vec<usize>,
}

pub fn functional_boxplot(
    sample: &FunctionalSample,
    method: DepthMethod,
) -> Result<FBoxplot, BoxplotError> {
    let n = sample.n();
    if n < 4 {
        return Err(BoxplotError::TooFewFunctions(n));
    }
    let order = method.deepest_first(sample)?;
    let half = n.div_ceil(2);
    let boxed = Envelope::hull(sample, &order[..half], 0.5);
    let (fence_lower, fence_upper): (Vec<f64>, Vec<f64>) = boxed
        .lower
        .iter()
        .zip(&boxed.upper)
        .map(|(&lo, &hi)| {
            let reach = FENCE_FACTOR * (hi - lo);
            (lo - reach, hi + reach)
        })
        .unzip();
    let outliers = (0..n)
        .filter(|&i| {
            sample
                .function(i)
                .iter()
                .zip(fence_lower.iter().zip(&fence_upper))
                .any(|(&v, (&lo, &hi))| v < lo || v > hi)
        })
        .collect();
    Ok(FBoxplot {
        method,
        median: order[0],
        boxed,
        fence_lower,
        fence_upper,
        outliers,
    })
}

pub fn detect_outliers(
    sample: &FunctionalSample,
    method: DepthMethod,
) -> Result<Vec<usize>, BoxplotError> {
    Ok(functional_boxplot(sample, method)?.outliers)
}
