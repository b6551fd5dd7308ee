//! Simultaneous confidence bands for linear-basis regression.
//!
//! The residual bootstrap turns a least-squares fit into a sample of
//! normalized functions `m*_j(x) = (mu*_j(x) - mu_hat(x)) / s*_j`. The ED band
//! is `mu_hat + s_hat * [f*_L, f*_U]` where `[f*_L, f*_U]` is the ED central
//! region of that sample. Scheffe and sup-norm (K) bands are provided for
//! comparison, along with the level/power experiment.

mod experiment;
mod fdist;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::linalg::Qr;
use crate::math;
use crate::region::{central_region, RegionError};
use crate::rng;
use crate::sample::normalize_grid;
use crate::stats;
use crate::{FunctionalSample, SampleError};

pub use experiment::{
    aggregate_experiment, experiment_replicate, level_power_experiment, p_k, replicate_bands,
    ExperimentConfig, ExperimentRow, ReplicateOutcome, Target,
};
pub use fdist::{beta_inc, f_cdf, f_quantile};

/// Consecutive degenerate resamples tolerated before the bootstrap gives up.
pub const MAX_DEGENERATE_RESAMPLES: usize = 100;

/// Relative size below which a residual standard error counts as zero.
const DEGENERATE_SCALE: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum BandError {
    #[error("need more observations ({n}) than coefficients ({p})")]
    TooFewObservations { n: usize, p: usize },
    #[error("x and y lengths differ ({x} vs {y})")]
    LengthMismatch { x: usize, y: usize },
    #[error("non-finite observation at index {0}")]
    NonFinite(usize),
    #[error("design matrix is rank deficient")]
    RankDeficient,
    #[error("bootstrap needs at least 2 resamples, got {0}")]
    TooFewResamples(usize),
    #[error("at least one replicate is required")]
    NoReplicates,
    #[error("evaluation grid is empty or not strictly increasing")]
    BadEvalGrid,
    #[error("{failures} consecutive bootstrap refits had zero residual scale")]
    Degenerate { failures: usize },
    #[error("alpha {0} outside [0, 1)")]
    InvalidAlpha(f64),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// A fixed set of basis functions `phi_1(x), ..., phi_p(x)`.
pub trait Basis: fmt::Debug + Send + Sync {
    fn dim(&self) -> usize;
    /// Writes the `dim()` basis values at `x` into `out`.
    fn eval(&self, x: f64, out: &mut [f64]);
}

/// `1, x, ..., x^degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub degree: usize,
}

impl Basis for Polynomial {
    fn dim(&self) -> usize {
        self.degree + 1
    }

    fn eval(&self, x: f64, out: &mut [f64]) {
        let mut v = 1.0;
        for o in out.iter_mut().take(self.degree + 1) {
            *o = v;
            v *= x;
        }
    }
}

fn basis_row(basis: &dyn Basis, x: f64) -> Vec<f64> {
    let mut h = alloc::vec![0.0; basis.dim()];
    basis.eval(x, &mut h);
    h
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Ordinary least-squares fit on a basis.
#[derive(Clone, Debug)]
pub struct FitResult {
    pub basis: Arc<dyn Basis>,
    pub x: Vec<f64>,
    pub theta_hat: Vec<f64>,
    /// `sqrt(RSS / (n - p))`.
    pub s_hat: f64,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    qr: Qr,
    // Scale of y, for deciding when a residual scale is zero.
    y_norm: f64,
}

impl FitResult {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Number of coefficients.
    pub fn p(&self) -> usize {
        self.theta_hat.len()
    }

    /// Residual degrees of freedom `n - p`.
    pub fn df(&self) -> usize {
        self.n() - self.p()
    }

    pub fn mu_hat(&self, x: f64) -> f64 {
        dot(&basis_row(self.basis.as_ref(), x), &self.theta_hat)
    }

    /// `sqrt(h(x)' (X'X)^{-1} h(x))`.
    pub fn leverage(&self, x: f64) -> f64 {
        self.qr.leverage_norm(&basis_row(self.basis.as_ref(), x))
    }

    /// Whether the residuals vanish (up to rounding).
    pub fn is_exact(&self) -> bool {
        self.s_hat <= DEGENERATE_SCALE * self.y_norm
    }
}

pub fn fit_basis(basis: Arc<dyn Basis>, x: &[f64], y: &[f64]) -> Result<FitResult, BandError> {
    let (n, p) = (x.len(), basis.dim());
    if y.len() != n {
        return Err(BandError::LengthMismatch { x: n, y: y.len() });
    }
    if n <= p {
        return Err(BandError::TooFewObservations { n, p });
    }
    if let Some(i) = (0..n).find(|&i| !(x[i].is_finite() && y[i].is_finite())) {
        return Err(BandError::NonFinite(i));
    }
    let rows: Vec<f64> = x
        .iter()
        .flat_map(|&xi| basis_row(basis.as_ref(), xi))
        .collect();
    let qr = Qr::new(&rows, n, p).ok_or(BandError::RankDeficient)?;
    let (theta_hat, rss) = qr.solve(y);
    let fitted: Vec<f64> = (0..n)
        .map(|i| dot(&rows[i * p..(i + 1) * p], &theta_hat))
        .collect();
    let residuals = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    Ok(FitResult {
        basis,
        x: x.to_vec(),
        theta_hat,
        s_hat: math::sqrt(rss / (n - p) as f64),
        fitted,
        residuals,
        qr,
        y_norm: math::sqrt(dot(y, y)),
    })
}

/// Least-squares polynomial of degree `q`.
pub fn fit_poly(x: &[f64], y: &[f64], q: usize) -> Result<FitResult, BandError> {
    fit_basis(Arc::new(Polynomial { degree: q }), x, y)
}

/// `points` equally spaced values on `[0, 1]`.
pub fn eval_grid(points: usize) -> Vec<f64> {
    crate::uniform_grid(points)
}

/// Normalized bootstrap functions on an evaluation grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PivotalSample {
    pub eval_grid: Vec<f64>,
    /// `functions[j][k] = m*_j(eval_grid[k])`.
    pub functions: Vec<Vec<f64>>,
    /// Degenerate resamples that were redrawn.
    pub redraws: usize,
}

impl PivotalSample {
    pub fn b(&self) -> usize {
        self.functions.len()
    }

    /// The pivots as functional data on the grid rescaled to `[0, 1]`.
    pub fn to_sample(&self) -> Result<FunctionalSample, SampleError> {
        let mut grid = self.eval_grid.clone();
        normalize_grid(&mut grid);
        FunctionalSample::new(grid, self.functions.clone())
    }
}

fn check_eval_grid(grid: &[f64]) -> Result<(), BandError> {
    let ok = !grid.is_empty()
        && grid.iter().all(|v| v.is_finite())
        && grid.windows(2).all(|w| w[0] < w[1]);
    ok.then_some(()).ok_or(BandError::BadEvalGrid)
}

/// Residual bootstrap with `b` resamples. Resample `j` draws from its own
/// substream of `seed`, so any subset of resamples can be recomputed alone.
///
/// The refit on `y* = fitted + e*` differs from `theta_hat` by the
/// least-squares coefficients of `e*` alone, which is what is computed.
pub fn residual_bootstrap(
    fit: &FitResult,
    b: usize,
    eval_grid: &[f64],
    seed: u64,
) -> Result<PivotalSample, BandError> {
    if b < 2 {
        return Err(BandError::TooFewResamples(b));
    }
    check_eval_grid(eval_grid)?;
    let basis_at: Vec<Vec<f64>> = eval_grid
        .iter()
        .map(|&x| basis_row(fit.basis.as_ref(), x))
        .collect();
    let n = fit.n();
    let df = fit.df() as f64;
    let floor = DEGENERATE_SCALE * fit.y_norm;
    let mut functions = Vec::with_capacity(b);
    let mut redraws = 0;
    let mut resampled = alloc::vec![0.0; n];
    for j in 0..b {
        let mut rng = rng::substream(seed, &[j as u64]);
        let mut failures = 0;
        let (delta, s_star) = loop {
            for e in resampled.iter_mut() {
                *e = fit.residuals[rng.random_range(0..n)];
            }
            let (delta, rss) = fit.qr.solve(&resampled);
            let s_star = math::sqrt(rss / df);
            if s_star > floor {
                break (delta, s_star);
            }
            failures += 1;
            redraws += 1;
            if failures >= MAX_DEGENERATE_RESAMPLES {
                return Err(BandError::Degenerate { failures });
            }
        };
        functions.push(basis_at.iter().map(|h| dot(h, &delta) / s_star).collect());
    }
    Ok(PivotalSample {
        eval_grid: eval_grid.to_vec(),
        functions,
        redraws,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandMethod {
    Ed,
    Scheffe,
    K,
}

impl BandMethod {
    pub const ALL: [BandMethod; 3] = [BandMethod::Scheffe, BandMethod::K, BandMethod::Ed];

    pub fn name(self) -> &'static str {
        match self {
            BandMethod::Ed => "ED",
            BandMethod::Scheffe => "Scheffe",
            BandMethod::K => "K",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Band {
    pub method: BandMethod,
    /// Nominal coverage `1 - alpha`.
    pub level: f64,
    pub eval_grid: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub mu_hat: Vec<f64>,
}

impl Band {
    /// Whether `f` lies within the band at every evaluation point.
    pub fn contains(&self, f: impl Fn(f64) -> f64) -> bool {
        self.eval_grid
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&x, (&lo, &hi))| {
                let v = f(x);
                lo <= v && v <= hi
            })
    }

    pub fn half_width(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| 0.5 * (u - l))
            .collect()
    }
}

fn check_alpha(alpha: f64) -> Result<(), BandError> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(BandError::InvalidAlpha(alpha))
    }
}

fn scaled_band(
    fit: &FitResult,
    method: BandMethod,
    alpha: f64,
    eval_grid: &[f64],
    lo: impl Fn(usize) -> f64,
    hi: impl Fn(usize) -> f64,
) -> Band {
    let mu_hat: Vec<f64> = eval_grid.iter().map(|&x| fit.mu_hat(x)).collect();
    Band {
        method,
        level: 1.0 - alpha,
        eval_grid: eval_grid.to_vec(),
        lower: (0..mu_hat.len())
            .map(|k| mu_hat[k] + fit.s_hat * lo(k))
            .collect(),
        upper: (0..mu_hat.len())
            .map(|k| mu_hat[k] + fit.s_hat * hi(k))
            .collect(),
        mu_hat,
    }
}

/// ED band from the ED central region of the pivots at level `alpha`.
pub fn ed_band(fit: &FitResult, piv: &PivotalSample, alpha: f64) -> Result<Band, BandError> {
    check_alpha(alpha)?;
    let env = central_region(&piv.to_sample()?, alpha)?;
    Ok(scaled_band(
        fit,
        BandMethod::Ed,
        alpha,
        &piv.eval_grid,
        |k| env.lower[k],
        |k| env.upper[k],
    ))
}

/// `mu_hat(x) +- sqrt(p F_{p, n-p}(1 - alpha)) s_hat |h(x)|_{(X'X)^-1}`.
pub fn scheffe_band(fit: &FitResult, alpha: f64, eval_grid: &[f64]) -> Result<Band, BandError> {
    check_eval_grid(eval_grid)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(BandError::InvalidAlpha(alpha));
    }
    let p = fit.p() as f64;
    let crit = math::sqrt(p * f_quantile(1.0 - alpha, p, fit.df() as f64));
    let reach: Vec<f64> = eval_grid.iter().map(|&x| crit * fit.leverage(x)).collect();
    Ok(scaled_band(
        fit,
        BandMethod::Scheffe,
        alpha,
        eval_grid,
        |k| -reach[k],
        |k| reach[k],
    ))
}

/// Sup-norm statistics `K*_j = max_x |m*_j(x)|`.
pub fn sup_statistics(piv: &PivotalSample) -> Vec<f64> {
    piv.functions
        .iter()
        .map(|f| f.iter().fold(0.0f64, |a, v| a.max(math::abs(*v))))
        .collect()
}

/// Constant half-width `s_hat * c`, `c` the `1 - alpha` quantile of the
/// sup-norm statistics.
pub fn k_band(fit: &FitResult, piv: &PivotalSample, alpha: f64) -> Result<Band, BandError> {
    check_alpha(alpha)?;
    if piv.functions.is_empty() {
        return Err(BandError::TooFewResamples(0));
    }
    let c = stats::quantile(&sup_statistics(piv), 1.0 - alpha);
    Ok(scaled_band(
        fit,
        BandMethod::K,
        alpha,
        &piv.eval_grid,
        |_| -c,
        |_| c,
    ))
}
