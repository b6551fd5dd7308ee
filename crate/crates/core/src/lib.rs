//! Extremal depth (ED) for functional data.
//!
//! Functions are observed on a shared grid in `[0, 1]`. Each function is
//! mapped to its pointwise depth profile, the profile is summarized by its
//! depth CDF, and depth CDFs are ordered by comparing their left tails. The
//! crate builds on that ordering:
//!
//! * [`depth`]: pointwise depth, exact level counts, the ED comparator, ranks
//!   and medians, plus the integrated (ID) and modified band (MBD) baselines.
//! * [`region`]: ED central regions, pointwise quantile regions, coverage and
//!   the width-vs-sd diagnostic.
//! * [`boxplot`]: functional boxplots and fence-based outlier flags.
//! * [`sim`]: Gaussian-process simulation models and the outlier benchmark.
//! * [`bands`]: residual-bootstrap simultaneous confidence bands for linear
//!   basis regression, with Scheffé and sup-norm comparisons.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! drivers and the command-line tool live in the companion crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bands;
pub mod boxplot;
pub mod depth;
mod frac;
mod linalg;
mod math;
pub mod region;
pub mod rng;
mod sample;
pub mod sim;
pub mod stats;

pub use frac::Frac;
pub use sample::{
    normalize_grid, uniform_grid, FunctionalSample, GridWeights, QueryFunction, SampleError,
    Violation,
};
