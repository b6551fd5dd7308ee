//! Simulation models for functional outlier detection.
//!
//! All models start from `X_i(t) = 4t + e_i(t)` with `e_i` a zero-mean
//! Gaussian process with covariance `exp(-|t - s|)`. Contaminated functions
//! (`c_i ~ Bernoulli(p)`) are shifted by `sigma_i K` with a random sign:
//!
//! | model | contamination                                         |
//! |-------|-------------------------------------------------------|
//! | 1     | none                                                  |
//! | 2     | shift on the whole domain                             |
//! | 3     | shift for `t >= T_i`, `T_i ~ U[0, 1]`                 |
//! | 4     | shift on `[T_i, T_i + l]`, `T_i ~ U[0, 1 - l]`         |
//! | 5     | path replaced by `4t + e~_i`, cov `k exp(-|t-s|^mu)` |
//!
//! Base paths, contamination labels and model-5 replacement paths come from
//! three separate substreams of the seed, so models 1-4 built from one seed
//! share their base paths and models 2-5 share their labels.

mod bench;
mod gp;

use alloc::vec::Vec;

use rand::Rng;

use crate::rng;
use crate::sample::uniform_grid;
use crate::FunctionalSample;

pub use bench::{
    aggregate_benchmark, outlier_metrics, replicate_metrics, replicate_seed, run_benchmark,
    BenchmarkError, BenchmarkReport, BenchmarkRow, Metric, OutlierMetrics,
};
pub use gp::{gp_sample, GpError, GpSampler, PowerExponential};

const STREAM_BASE: u64 = 0;
const STREAM_LABELS: u64 = 1;
const STREAM_SHAPE: u64 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    /// Model number, 1 to 5.
    pub model: u8,
    pub n: usize,
    pub m: usize,
    /// Contamination probability.
    pub p: f64,
    /// Contamination magnitude.
    pub magnitude: f64,
    /// Peak width for model 4.
    pub peak_width: f64,
    /// Model 5 covariance scale `k`.
    pub cov_scale: f64,
    /// Model 5 covariance exponent `mu`.
    pub cov_exponent: f64,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(model: u8, seed: u64) -> Self {
        ModelSpec {
            model,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        let bad = |what: &'static str| Err(GenerateError::InvalidSpec(what));
        if !(1..=5).contains(&self.model) {
            return Err(GenerateError::UnknownModel(self.model));
        }
        if self.n == 0 || self.m == 0 {
            return bad("n and m must be positive");
        }
        if !(0.0..=1.0).contains(&self.p) {
            return bad("p must lie in [0, 1]");
        }
        if !(self.magnitude.is_finite() && self.magnitude >= 0.0) {
            return bad("magnitude must be finite and nonnegative");
        }
        if !(self.peak_width > 0.0 && self.peak_width < 1.0) {
            return bad("peak width must lie in (0, 1)");
        }
        if !(self.cov_scale > 0.0 && self.cov_scale.is_finite()) {
            return bad("covariance scale must be positive");
        }
        if !(self.cov_exponent > 0.0 && self.cov_exponent <= 2.0) {
            return bad("covariance exponent must lie in (0, 2]");
        }
        Ok(())
    }
}

impl Default for ModelSpec {
    /// `n = 100` functions on 50 grid points, `p = 0.1`, `K = 6`, `l = 0.08`,
    /// `k = 8`, `mu = 0.1`.
    fn default() -> Self {
        ModelSpec {
            model: 1,
            n: 100,
            m: 50,
            p: 0.1,
            magnitude: 6.0,
            peak_width: 0.08,
            cov_scale: 8.0,
            cov_exponent: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenerateError {
    #[error("unknown model {0} (expected 1-5)")]
    UnknownModel(u8),
    #[error("invalid model spec: {0}")]
    InvalidSpec(&'static str),
    #[error(transparent)]
    Gp(#[from] GpError),
}

/// Where and in which direction a function was shifted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftWindow {
    /// `+1` or `-1`.
    pub sign: f64,
    pub start: f64,
    pub end: f64,
}

impl ShiftWindow {
    pub fn covers(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledSample {
    pub sample: FunctionalSample,
    pub is_outlier: Vec<bool>,
    /// Shift applied to each function (models 2-4 only).
    pub shifts: Vec<Option<ShiftWindow>>,
}

impl LabeledSample {
    pub fn outlier_indices(&self) -> Vec<usize> {
        (0..self.is_outlier.len())
            .filter(|&i| self.is_outlier[i])
            .collect()
    }
}

struct Label {
    contaminated: bool,
    sign: f64,
    onset: f64,
}

pub fn generate_model(spec: &ModelSpec) -> Result<LabeledSample, GenerateError> {
    spec.validate()?;
    let grid = uniform_grid(spec.m);
    let trend: Vec<f64> = grid.iter().map(|t| 4.0 * t).collect();
    let base = GpSampler::new(&grid, &trend, |s, t| PowerExponential::UNIT.eval(s, t))?;

    let mut base_rng = rng::substream(spec.seed, &[STREAM_BASE]);
    let mut rows: Vec<Vec<f64>> = (0..spec.n).map(|_| base.draw(&mut base_rng)).collect();

    let mut label_rng = rng::substream(spec.seed, &[STREAM_LABELS]);
    let labels: Vec<Label> = (0..spec.n)
        .map(|_| {
            let contaminated = label_rng.random::<f64>() < spec.p;
            let sign = if label_rng.random::<bool>() {
                1.0
            } else {
                -1.0
            };
            let onset = label_rng.random::<f64>();
            Label {
                contaminated,
                sign,
                onset,
            }
        })
        .collect();

    let mut shifts = alloc::vec![None; spec.n];
    let mut is_outlier = alloc::vec![false; spec.n];
    if spec.model >= 2 {
        for (i, l) in labels.iter().enumerate() {
            is_outlier[i] = l.contaminated;
        }
    }
    match spec.model {
        2..=4 => {
            for (i, l) in labels.iter().enumerate().filter(|(_, l)| l.contaminated) {
                let window = match spec.model {
                    2 => ShiftWindow {
                        sign: l.sign,
                        start: 0.0,
                        end: 1.0,
                    },
                    3 => ShiftWindow {
                        sign: l.sign,
                        start: l.onset,
                        end: 1.0,
                    },
                    _ => {
                        let start = l.onset * (1.0 - spec.peak_width);
                        ShiftWindow {
                            sign: l.sign,
                            start,
                            end: start + spec.peak_width,
                        }
                    }
                };
                for (v, &t) in rows[i].iter_mut().zip(&grid) {
                    if window.covers(t) {
                        *v += window.sign * spec.magnitude;
                    }
                }
                shifts[i] = Some(window);
            }
        }
        5 => {
            let shape = PowerExponential {
                scale: spec.cov_scale,
                exponent: spec.cov_exponent,
            };
            let replacement = GpSampler::new(&grid, &trend, |s, t| shape.eval(s, t))?;
            let mut shape_rng = rng::substream(spec.seed, &[STREAM_SHAPE]);
            for (i, _) in labels.iter().enumerate().filter(|(_, l)| l.contaminated) {
                rows[i] = replacement.draw(&mut shape_rng);
            }
        }
        _ => {}
    }
    let sample = FunctionalSample::new(grid, rows).map_err(GpError::from)?;
    Ok(LabeledSample {
        sample,
        is_outlier,
        shifts,
    })
}
