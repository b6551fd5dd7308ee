//! Level and power of 90% bands for a degree-5 polynomial mean.
//!
//! Each replicate draws `x_i ~ U[0, 1]` and `y_i = P_5(x_i) + sd * z_i`,
//! fits the polynomial, builds every band once, and records for the truth
//! and each alternative whether the band fails to contain it somewhere on
//! the evaluation grid.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::math;
use crate::rng;

use super::{
    ed_band, eval_grid, fit_poly, k_band, residual_bootstrap, scheffe_band, Band, BandError,
    BandMethod,
};

/// `C_k sign(x - 1/2) |x - 1/2|^k` with `C_k = (k + 1) 2^k`, so that
/// `|P_k|` integrates to one on `[0, 1]`.
pub fn p_k(k: u32, x: f64) -> f64 {
    let c = (k + 1) as f64 * math::powi(2.0, k);
    let d = x - 0.5;
    let s = if d > 0.0 {
        1.0
    } else if d < 0.0 {
        -1.0
    } else {
        0.0
    };
    c * s * math::powi(math::abs(d), k)
}

/// Mean functions whose exclusion from the band is counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// The true mean `P_5`; its rejection rate is the level.
    Truth,
    P4,
    P6,
    /// `0.2 + P_5`.
    Shift,
    /// `0.2 + 0.2x + P_5`.
    LinearShift,
    /// `0.2 sign(x - 1/2) + P_5`.
    StepShift,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::Truth,
        Target::P4,
        Target::P6,
        Target::Shift,
        Target::LinearShift,
        Target::StepShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Truth => "P5",
            Target::P4 => "P4",
            Target::P6 => "P6",
            Target::Shift => "0.2+P5",
            Target::LinearShift => "0.2+0.2x+P5",
            Target::StepShift => "0.2sign(x-0.5)+P5",
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        let p5 = p_k(5, x);
        match self {
            Target::Truth => p5,
            Target::P4 => p_k(4, x),
            Target::P6 => p_k(6, x),
            Target::Shift => 0.2 + p5,
            Target::LinearShift => 0.2 + 0.2 * x + p5,
            Target::StepShift => 0.2 * p_k(0, x) + p5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub degree: usize,
    pub sd: f64,
    pub bootstrap: usize,
    pub replicates: u64,
    pub alpha: f64,
    pub eval_points: usize,
    pub targets: Vec<Target>,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 100,
            degree: 5,
            sd: 5.0,
            bootstrap: 2000,
            replicates: 200,
            alpha: 0.1,
            eval_points: 201,
            targets: Target::ALL.to_vec(),
            seed: 0,
        }
    }
}

/// Rejections in one replicate: `rejected[t][k]` for `targets[t]` and
/// `BandMethod::ALL[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicateOutcome {
    pub rejected: Vec<[bool; 3]>,
}

/// Data and bands for replicate `r`.
pub fn replicate_bands(config: &ExperimentConfig, r: u64) -> Result<[Band; 3], BandError> {
    let mut data_rng = rng::substream(config.seed, &[r, 0]);
    let x: Vec<f64> = (0..config.n).map(|_| data_rng.random::<f64>()).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let z: f64 = data_rng.sample(StandardNormal);
            p_k(5, xi) + config.sd * z
        })
        .collect();
    let fit = fit_poly(&x, &y, config.degree)?;
    let grid = eval_grid(config.eval_points);
    let piv = residual_bootstrap(
        &fit,
        config.bootstrap,
        &grid,
        rng::derive_seed(config.seed, &[r, 1]),
    )?;
    let [a, b, c] = BandMethod::ALL.map(|method| match method {
        BandMethod::Scheffe => scheffe_band(&fit, config.alpha, &grid),
        BandMethod::K => k_band(&fit, &piv, config.alpha),
        BandMethod::Ed => ed_band(&fit, &piv, config.alpha),
    });
    Ok([a?, b?, c?])
}

pub fn experiment_replicate(
    config: &ExperimentConfig,
    r: u64,
) -> Result<ReplicateOutcome, BandError> {
    let bands = replicate_bands(config, r)?;
    let rejected = config
        .targets
        .iter()
        .map(|&t| bands.each_ref().map(|b| !b.contains(|x| t.eval(x))))
        .collect();
    Ok(ReplicateOutcome { rejected })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub target: Target,
    pub method: BandMethod,
    /// Fraction of replicates in which the band missed the target.
    pub rate: f64,
    pub replicates: usize,
}

pub fn aggregate_experiment(
    config: &ExperimentConfig,
    outcomes: &[ReplicateOutcome],
) -> Vec<ExperimentRow> {
    let mut rows = Vec::new();
    for (t, &target) in config.targets.iter().enumerate() {
        for (k, &method) in BandMethod::ALL.iter().enumerate() {
            let hits = outcomes.iter().filter(|o| o.rejected[t][k]).count();
            rows.push(ExperimentRow {
                target,
                method,
                rate: hits as f64 / outcomes.len() as f64,
                replicates: outcomes.len(),
            });
        }
    }
    rows
}

/// Sequential run of all replicates.
pub fn level_power_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>, BandError> {
    if config.replicates == 0 {
        return Err(BandError::NoReplicates);
    }
    let outcomes = (0..config.replicates)
        .map(|r| experiment_replicate(config, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(aggregate_experiment(config, &outcomes))
}
