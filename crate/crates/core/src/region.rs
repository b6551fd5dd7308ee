//! Central regions, pointwise quantile regions and their coverage.
//!
//! An ED central region at level `alpha` is the band between the pointwise
//! minimum and maximum of every sample function whose ED exceeds `alpha`.

use alloc::vec::Vec;

use crate::depth::{rank_sample, DepthError, DepthMethod, Ranking};
use crate::math;
use crate::stats;
use crate::{Frac, FunctionalSample};

#[derive(Debug, thiserror::Error)]
pub enum RegionError {
    #[error(transparent)]
    Depth(#[from] DepthError),
    #[error("level {level} outside {range}")]
    InvalidLevel { level: f64, range: &'static str },
    #[error("no function has ED above {alpha} (max ED is {max_ed})")]
    EmptyRegion { alpha: f64, max_ed: Frac },
    #[error("need at least {min} functions, sample has {n}")]
    TooFewFunctions { n: usize, min: usize },
    #[error("envelope has {len} points, grid has {m}")]
    Misaligned { len: usize, m: usize },
}

/// Lower and upper boundary functions of a region plus the functions that
/// define it.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Sample indices, ascending.
    pub members: Vec<usize>,
    /// The `alpha` (central regions) or `gamma` (pointwise regions) used.
    pub level: f64,
}

impl Envelope {
    /// Pointwise min/max over `members` (which must be nonempty).
    pub fn hull(sample: &FunctionalSample, members: &[usize], level: f64) -> Envelope {
        let m = sample.m();
        let mut lower = alloc::vec![f64::INFINITY; m];
        let mut upper = alloc::vec![f64::NEG_INFINITY; m];
        for &i in members {
            for (j, &v) in sample.function(i).iter().enumerate() {
                lower[j] = lower[j].min(v);
                upper[j] = upper[j].max(v);
            }
        }
        let mut members = members.to_vec();
        members.sort_unstable();
        Envelope {
            lower,
            upper,
            members,
            level,
        }
    }

    pub fn width(&self) -> Vec<f64> {
        self.upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| u - l)
            .collect()
    }

    /// Whether `f` lies inside the band at every grid point.
    pub fn contains(&self, f: &[f64]) -> bool {
        f.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }
}

/// Number of functions excluded at level `alpha`: `floor(alpha * n)`.
pub(crate) fn excluded_count(alpha: f64, n: usize) -> u64 {
    math::robust_floor(alpha * n as f64) as u64
}

/// ED central region: hull of all functions with ED strictly above `alpha`.
pub fn central_region(sample: &FunctionalSample, alpha: f64) -> Result<Envelope, RegionError> {
    central_region_from_ranking(sample, &rank_sample(sample), alpha)
}

/// [`central_region`] reusing a ranking of the same sample.
pub fn central_region_from_ranking(
    sample: &FunctionalSample,
    ranking: &Ranking,
    alpha: f64,
) -> Result<Envelope, RegionError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(RegionError::InvalidLevel {
            level: alpha,
            range: "[0, 1)",
        });
    }
    let n = sample.n();
    // k/n > alpha  <=>  k > floor(alpha n) for integer k.
    let cut = excluded_count(alpha, n);
    let members: Vec<usize> = (0..n).filter(|&i| ranking.ed[i].num > cut).collect();
    if members.is_empty() {
        let max_ed = ranking.ed.iter().max().copied().unwrap_or(Frac::new(0, 1));
        return Err(RegionError::EmptyRegion { alpha, max_ed });
    }
    Ok(Envelope::hull(sample, &members, alpha))
}

/// Hull of the deepest `ceil((1 - alpha) n)` functions under `method`,
/// with equal depths broken by index.
///
/// For ED without ties this is the same set as [`central_region`].
pub fn deepest_region(
    sample: &FunctionalSample,
    method: DepthMethod,
    alpha: f64,
) -> Result<Envelope, RegionError> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(RegionError::InvalidLevel {
            level: alpha,
            range: "[0, 1)",
        });
    }
    let n = sample.n();
    let keep = n - excluded_count(alpha, n) as usize;
    let order = method.deepest_first(sample)?;
    Ok(Envelope::hull(sample, &order[..keep.max(1)], alpha))
}

/// Band between the pointwise `gamma/2` and `1 - gamma/2` empirical
/// quantiles (order statistic at rank `ceil(eta n)`).
pub fn pointwise_region(sample: &FunctionalSample, gamma: f64) -> Result<Envelope, RegionError> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(RegionError::InvalidLevel {
            level: gamma,
            range: "(0, 1)",
        });
    }
    let n = sample.n();
    if n < 2 {
        return Err(RegionError::TooFewFunctions { n, min: 2 });
    }
    let m = sample.m();
    let mut lower = Vec::with_capacity(m);
    let mut upper = Vec::with_capacity(m);
    let mut col = Vec::with_capacity(n);
    for j in 0..m {
        col.clear();
        col.extend(sample.functions().map(|f| f[j]));
        col.sort_unstable_by(f64::total_cmp);
        lower.push(stats::sorted_quantile(&col, gamma / 2.0));
        upper.push(stats::sorted_quantile(&col, 1.0 - gamma / 2.0));
    }
    let mut env = Envelope {
        lower,
        upper,
        members: Vec::new(),
        level: gamma,
    };
    env.members = contained(sample, &env);
    Ok(env)
}

/// Indices of sample functions inside `env` everywhere.
pub fn contained(sample: &FunctionalSample, env: &Envelope) -> Vec<usize> {
    (0..sample.n())
        .filter(|&i| env.contains(sample.function(i)))
        .collect()
}

/// Fraction of sample functions lying inside `env` at every grid point.
pub fn coverage(sample: &FunctionalSample, env: &Envelope) -> Result<f64, RegionError> {
    check_aligned(sample, env)?;
    Ok(contained(sample, env).len() as f64 / sample.n() as f64)
}

fn check_aligned(sample: &FunctionalSample, env: &Envelope) -> Result<(), RegionError> {
    let m = sample.m();
    for len in [env.lower.len(), env.upper.len()] {
        if len != m {
            return Err(RegionError::Misaligned { len, m });
        }
    }
    Ok(())
}

/// One grid point of the width-vs-spread diagnostic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WidthRow {
    pub t: f64,
    pub width: f64,
    pub sd: f64,
}

/// Envelope width and pointwise sample sd (divisor `n - 1`) at each grid point.
pub fn width_diagnostic(
    sample: &FunctionalSample,
    env: &Envelope,
) -> Result<Vec<WidthRow>, RegionError> {
    check_aligned(sample, env)?;
    let n = sample.n();
    if n < 2 {
        return Err(RegionError::TooFewFunctions { n, min: 2 });
    }
    let mut col = Vec::with_capacity(n);
    Ok((0..sample.m())
        .map(|j| {
            col.clear();
            col.extend(sample.functions().map(|f| f[j]));
            WidthRow {
                t: sample.grid()[j],
                width: env.upper[j] - env.lower[j],
                sd: stats::sample_sd(&col),
            }
        })
        .collect())
}

/// R² of the least-squares line of width on sd.
pub fn width_sd_r_squared(rows: &[WidthRow]) -> f64 {
    let sd: Vec<f64> = rows.iter().map(|r| r.sd).collect();
    let width: Vec<f64> = rows.iter().map(|r| r.width).collect();
    stats::r_squared(&sd, &width)
}

/// ED central region closest to a pointwise region, by contained sets.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionMatch {
    pub alpha: Frac,
    /// Size of the symmetric difference between the two contained sets.
    pub symmetric_difference: usize,
}

/// Searches `alpha` over `{0, 1/n, ..., (n-1)/n}` for the ED central region
/// whose contained functions best agree with those of `pointwise`.
pub fn match_pointwise_region(
    sample: &FunctionalSample,
    ranking: &Ranking,
    pointwise: &Envelope,
) -> RegionMatch {
    let n = sample.n();
    let target = contained(sample, pointwise);
    let mut in_target = alloc::vec![false; n];
    for &i in &target {
        in_target[i] = true;
    }
    let mut best = RegionMatch {
        alpha: Frac::new(0, n as u64),
        symmetric_difference: usize::MAX,
    };
    for k in 0..n as u64 {
        let members: Vec<usize> = (0..n).filter(|&i| ranking.ed[i].num > k).collect();
        if members.is_empty() {
            break;
        }
        let env = Envelope::hull(sample, &members, k as f64 / n as f64);
        let diff = (0..n)
            .filter(|&i| env.contains(sample.function(i)) != in_target[i])
            .count();
        if diff < best.symmetric_difference {
            best = RegionMatch {
                alpha: Frac::new(k, n as u64),
                symmetric_difference: diff,
            };
        }
    }
    best
}
