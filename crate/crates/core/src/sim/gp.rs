//! Gaussian-process paths on a grid.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg;
use crate::math;
use crate::rng;
use crate::{FunctionalSample, SampleError};

/// Diagonal jitter levels tried after a failed factorization, as multiples
/// of `trace / m`.
const JITTER_STEPS: [f64; 3] = [1e-10, 1e-8, 1e-6];

#[derive(Debug, thiserror::Error)]
pub enum GpError {
    #[error("covariance matrix is not positive definite even with jitter {jitter:e}")]
    NotPositiveDefinite { jitter: f64 },
    #[error("mean has {len} values, grid has {m}")]
    MeanLength { len: usize, m: usize },
    #[error("covariance has a non-finite entry at ({row}, {col})")]
    NonFiniteCovariance { row: usize, col: usize },
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// `k * exp(-|t - s|^mu)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerExponential {
    pub scale: f64,
    pub exponent: f64,
}

impl PowerExponential {
    pub const UNIT: PowerExponential = PowerExponential {
        scale: 1.0,
        exponent: 1.0,
    };

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        self.scale * math::exp(-math::powf(math::abs(t - s), self.exponent))
    }
}

/// Draws paths `mean + L z` where `L L'` is the gridded covariance.
#[derive(Clone, Debug)]
pub struct GpSampler {
    mean: Vec<f64>,
    // Row-major lower factor; `None` for an identically zero covariance.
    factor: Option<Vec<f64>>,
    /// Diagonal jitter that was needed (0 when none).
    pub jitter: f64,
}

impl GpSampler {
    pub fn new(grid: &[f64], mean: &[f64], cov: impl Fn(f64, f64) -> f64) -> Result<Self, GpError> {
        let m = grid.len();
        if mean.len() != m {
            return Err(GpError::MeanLength { len: mean.len(), m });
        }
        let mut c = alloc::vec![0.0; m * m];
        for (i, &s) in grid.iter().enumerate() {
            for (j, &t) in grid.iter().enumerate() {
                let v = cov(s, t);
                if !v.is_finite() {
                    return Err(GpError::NonFiniteCovariance { row: i, col: j });
                }
                c[i * m + j] = v;
            }
        }
        let trace: f64 = (0..m).map(|i| c[i * m + i]).sum();
        if c.iter().all(|&v| v == 0.0) {
            return Ok(GpSampler {
                mean: mean.to_vec(),
                factor: None,
                jitter: 0.0,
            });
        }
        if let Some(l) = linalg::cholesky(&c, m) {
            return Ok(GpSampler {
                mean: mean.to_vec(),
                factor: Some(l),
                jitter: 0.0,
            });
        }
        let mut jitter = 0.0;
        for step in JITTER_STEPS {
            jitter = step * trace / m as f64;
            let mut cj = c.clone();
            for i in 0..m {
                cj[i * m + i] += jitter;
            }
            if let Some(l) = linalg::cholesky(&cj, m) {
                return Ok(GpSampler {
                    mean: mean.to_vec(),
                    factor: Some(l),
                    jitter,
                });
            }
        }
        Err(GpError::NotPositiveDefinite { jitter })
    }

    pub fn m(&self) -> usize {
        self.mean.len()
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let m = self.m();
        let Some(l) = &self.factor else {
            return self.mean.clone();
        };
        let z: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        (0..m)
            .map(|i| {
                let row = &l[i * m..i * m + i + 1];
                self.mean[i] + row.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect()
    }
}

/// `n` independent paths on `grid`, reproducible from `seed`.
pub fn gp_sample(
    grid: &[f64],
    mean: &[f64],
    cov: impl Fn(f64, f64) -> f64,
    n: usize,
    seed: u64,
) -> Result<FunctionalSample, GpError> {
    let sampler = GpSampler::new(grid, mean, cov)?;
    let mut rng = rng::substream(seed, &[]);
    let rows = (0..n).map(|_| sampler.draw(&mut rng)).collect();
    Ok(FunctionalSample::new(grid.to_vec(), rows)?)
}
