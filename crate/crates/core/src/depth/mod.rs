//! Pointwise depth, depth CDFs and the extremal depth ordering.
//!
//! For a sample of `n` functions the pointwise depth of `g` at a grid point
//! is `1 - |#below - #above| / n`, with ties counted in neither set. It only
//! takes the values `k / n`, so a depth CDF is fully described by the mass of
//! grid points sitting at each of the `n + 1` levels ([`LevelCounts`]).
//! Two functions are ordered by scanning their depth CDFs upward from level
//! zero: at the first level where the cumulative masses differ, the function
//! with more mass is the more extreme one. Every comparison is done on
//! integers.
//!
//! For samples (as opposed to continuous processes) the sequence-based
//! tie-breaking rule for depth CDFs reduces to this finite scan: the CDFs are
//! step functions with at most `n + 1` jumps, so the infimum where they
//! differ is always attained at a level and the ordering is decided there.

mod baseline;

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::sample::{FunctionalSample, SampleError};
use crate::Frac;

pub use baseline::{integrated_depth, modified_band_depth};

#[derive(Debug, thiserror::Error)]
pub enum DepthError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("grid index {index} out of range for {m} grid points")]
    GridIndex { index: usize, m: usize },
    #[error("level counts are not comparable (n = {left_n} vs {right_n}, total mass {left_total} vs {right_total})")]
    Incomparable {
        left_n: usize,
        right_n: usize,
        left_total: u128,
        right_total: u128,
    },
    #[error("need at least {min} functions, sample has {n}")]
    TooFewFunctions { n: usize, min: usize },
}

/// Depth of one function at every grid point, as numerators over `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthProfile {
    n: usize,
    numerators: Vec<u32>,
}

impl DepthProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `numerators()[j] = k` means depth `k / n` at grid point `j`.
    pub fn numerators(&self) -> &[u32] {
        &self.numerators
    }

    pub fn level(&self, j: usize) -> Frac {
        Frac::new(self.numerators[j] as u64, self.n as u64)
    }

    pub fn levels(&self) -> impl Iterator<Item = Frac> + '_ {
        (0..self.numerators.len()).map(|j| self.level(j))
    }

    /// Smallest pointwise depth over the grid.
    pub fn min_level(&self) -> Frac {
        let k = self.numerators.iter().copied().min().unwrap_or(0);
        Frac::new(k as u64, self.n as u64)
    }
}

/// Exact depth CDF: the grid mass at each depth level `k / n`.
///
/// Masses are integer counts of grid points under uniform weights (total
/// `m`), or integer multiples of `2^-116` under explicit weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCounts {
    n: usize,
    // (level numerator, mass) for levels with nonzero mass, ascending.
    steps: Vec<(u32, u128)>,
    total: u128,
}

impl LevelCounts {
    /// Builds level counts from a dense per-level mass vector of length `n + 1`.
    pub fn from_counts(counts: &[u128]) -> Self {
        assert!(!counts.is_empty(), "level counts need at least one level");
        let steps: Vec<(u32, u128)> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k as u32, c))
            .collect();
        let total = counts.iter().sum();
        LevelCounts {
            n: counts.len() - 1,
            steps,
            total,
        }
    }

    fn from_profile(profile: &DepthProfile, masses: &[u128], total: u128) -> Self {
        let mut dense = alloc::vec![0u128; profile.n + 1];
        for (&k, &w) in profile.numerators.iter().zip(masses) {
            dense[k as usize] += w;
        }
        let mut lc = Self::from_counts(&dense);
        lc.total = total;
        lc
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    /// Dense masses, `counts()[k]` = mass at depth exactly `k / n`.
    pub fn counts(&self) -> Vec<u128> {
        let mut dense = alloc::vec![0u128; self.n + 1];
        for &(k, c) in &self.steps {
            dense[k as usize] = c;
        }
        dense
    }

    /// Cumulative mass at depth `<= k / n`.
    pub fn cdf(&self, k: usize) -> u128 {
        self.steps
            .iter()
            .take_while(|(level, _)| *level as usize <= k)
            .map(|(_, c)| c)
            .sum()
    }

    /// Smallest level carrying mass.
    pub fn min_level(&self) -> Option<Frac> {
        self.steps
            .first()
            .map(|&(k, _)| Frac::new(k as u64, self.n as u64))
    }
}

/// Outcome of comparing two functions under the extremal ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Extremality {
    /// The first function is more extreme (less deep) than the second.
    MoreExtreme,
    /// The first function is deeper than the second.
    LessExtreme,
    /// Identical depth CDFs.
    Equivalent,
}

impl Extremality {
    pub fn reverse(self) -> Self {
        match self {
            Extremality::MoreExtreme => Extremality::LessExtreme,
            Extremality::LessExtreme => Extremality::MoreExtreme,
            Extremality::Equivalent => Extremality::Equivalent,
        }
    }

    /// Ordering that sorts the most extreme function first.
    pub fn to_ordering(self) -> Ordering {
        match self {
            Extremality::MoreExtreme => Ordering::Less,
            Extremality::LessExtreme => Ordering::Greater,
            Extremality::Equivalent => Ordering::Equal,
        }
    }
}

/// Compares two depth CDFs, left tail first.
pub fn ed_compare(a: &LevelCounts, b: &LevelCounts) -> Result<Extremality, DepthError> {
    if a.n != b.n || a.total != b.total {
        return Err(DepthError::Incomparable {
            left_n: a.n,
            right_n: b.n,
            left_total: a.total,
            right_total: b.total,
        });
    }
    Ok(compare_levels(a, b))
}

// Walks the union of the two step sets; the cumulative masses can only
// change at a step, so checking after each one finds the first difference.
fn compare_levels(a: &LevelCounts, b: &LevelCounts) -> Extremality {
    let (mut i, mut j) = (0, 0);
    let (mut ca, mut cb) = (0u128, 0u128);
    while i < a.steps.len() || j < b.steps.len() {
        let la = a.steps.get(i).map_or(u32::MAX, |s| s.0);
        let lb = b.steps.get(j).map_or(u32::MAX, |s| s.0);
        let level = la.min(lb);
        if la == level {
            ca += a.steps[i].1;
            i += 1;
        }
        if lb == level {
            cb += b.steps[j].1;
            j += 1;
        }
        match ca.cmp(&cb) {
            Ordering::Greater => return Extremality::MoreExtreme,
            Ordering::Less => return Extremality::LessExtreme,
            Ordering::Equal => {}
        }
    }
    Extremality::Equivalent
}

/// Per-column sorted values of a sample, for `O(log n)` depth lookups.
///
/// Build once per sample and share across queries.
#[derive(Clone, Debug)]
pub struct DepthIndex<'a> {
    sample: &'a FunctionalSample,
    columns: Vec<Vec<f64>>,
    masses: Vec<u128>,
    total: u128,
}

impl<'a> DepthIndex<'a> {
    pub fn new(sample: &'a FunctionalSample) -> Self {
        let m = sample.m();
        let columns = (0..m)
            .map(|j| {
                let mut col: Vec<f64> = sample.functions().map(|f| f[j]).collect();
                col.sort_unstable_by(f64::total_cmp);
                col
            })
            .collect();
        let (masses, total) = sample.weights().exact_masses(m);
        DepthIndex {
            sample,
            columns,
            masses,
            total,
        }
    }

    pub fn sample(&self) -> &'a FunctionalSample {
        self.sample
    }

    /// Number of sample values strictly below and strictly above `v` at `j`.
    pub fn counts_at(&self, j: usize, v: f64) -> (usize, usize) {
        let col = &self.columns[j];
        let below = col.partition_point(|&x| x < v);
        let not_above = col.partition_point(|&x| x <= v);
        (below, col.len() - not_above)
    }

    fn numerator_at(&self, j: usize, v: f64) -> u32 {
        let (below, above) = self.counts_at(j, v);
        (self.sample.n() - below.abs_diff(above)) as u32
    }

    /// Caller guarantees `g` is aligned.
    pub(crate) fn profile_unchecked(&self, g: &[f64]) -> DepthProfile {
        DepthProfile {
            n: self.sample.n(),
            numerators: g
                .iter()
                .enumerate()
                .map(|(j, &v)| self.numerator_at(j, v))
                .collect(),
        }
    }

    pub fn profile(&self, g: &[f64]) -> Result<DepthProfile, DepthError> {
        self.sample.check_query(g)?;
        Ok(self.profile_unchecked(g))
    }

    pub fn level_counts_of(&self, profile: &DepthProfile) -> LevelCounts {
        LevelCounts::from_profile(profile, &self.masses, self.total)
    }

    pub fn level_counts(&self, g: &[f64]) -> Result<LevelCounts, DepthError> {
        Ok(self.level_counts_of(&self.profile(g)?))
    }

    /// Level counts of every sample member, by index.
    pub fn member_level_counts(&self) -> Vec<LevelCounts> {
        self.sample
            .functions()
            .map(|f| self.level_counts_of(&self.profile_unchecked(f)))
            .collect()
    }

    /// ED of an arbitrary aligned function against precomputed member counts.
    pub fn extremal_depth_with(
        &self,
        g: &[f64],
        members: &[LevelCounts],
    ) -> Result<Frac, DepthError> {
        let lc = self.level_counts(g)?;
        let weakly_below = members
            .iter()
            .filter(|f| compare_levels(&lc, f) != Extremality::MoreExtreme)
            .count();
        Ok(Frac::new(weakly_below as u64, self.sample.n() as u64))
    }

    pub fn mass_of(&self, j: usize) -> u128 {
        self.masses[j]
    }

    pub fn total_mass(&self) -> u128 {
        self.total
    }
}

/// Depth of `g` at grid point `j`.
pub fn pointwise_depth(sample: &FunctionalSample, g: &[f64], j: usize) -> Result<Frac, DepthError> {
    sample.check_query(g)?;
    if j >= sample.m() {
        return Err(DepthError::GridIndex {
            index: j,
            m: sample.m(),
        });
    }
    let v = g[j];
    let below = sample.functions().filter(|f| f[j] < v).count();
    let above = sample.functions().filter(|f| f[j] > v).count();
    let k = sample.n() - below.abs_diff(above);
    Ok(Frac::new(k as u64, sample.n() as u64))
}

pub fn depth_profile(sample: &FunctionalSample, g: &[f64]) -> Result<DepthProfile, DepthError> {
    DepthIndex::new(sample).profile(g)
}

pub fn level_counts(sample: &FunctionalSample, g: &[f64]) -> Result<LevelCounts, DepthError> {
    DepthIndex::new(sample).level_counts(g)
}

/// Fraction of sample functions that `g` weakly dominates in depth.
pub fn extremal_depth(sample: &FunctionalSample, g: &[f64]) -> Result<Frac, DepthError> {
    let index = DepthIndex::new(sample);
    let members = index.member_level_counts();
    index.extremal_depth_with(g, &members)
}

/// Sample functions ordered from most extreme to deepest, with their EDs.
#[derive(Clone, Debug)]
pub struct Ranking {
    /// Sample indices, most extreme first; equivalent functions by index.
    pub order: Vec<usize>,
    /// ED of each function, indexed like the sample.
    pub ed: Vec<Frac>,
    /// Depth CDF of each function, indexed like the sample.
    pub levels: Vec<LevelCounts>,
}

impl Ranking {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Indices sharing the maximal ED, ascending.
    pub fn medians(&self) -> Vec<usize> {
        let Some(best) = self.ed.iter().max().copied() else {
            return Vec::new();
        };
        (0..self.ed.len()).filter(|&i| self.ed[i] == best).collect()
    }

    /// Indices from deepest to most extreme; equal ED broken by index.
    pub fn deepest_first(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.ed.len()).collect();
        idx.sort_by(|&a, &b| self.ed[b].cmp(&self.ed[a]).then(a.cmp(&b)));
        idx
    }
}

pub fn rank_sample(sample: &FunctionalSample) -> Ranking {
    let index = DepthIndex::new(sample);
    rank_level_counts(index.member_level_counts())
}

/// Ranks functions given their depth CDFs (all with the same `n` and mass).
pub fn rank_level_counts(levels: Vec<LevelCounts>) -> Ranking {
    let n = levels.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        compare_levels(&levels[a], &levels[b])
            .to_ordering()
            .then(a.cmp(&b))
    });
    let mut ed = alloc::vec![Frac::new(0, n.max(1) as u64); n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && compare_levels(&levels[order[start]], &levels[order[end]]) == Extremality::Equivalent
        {
            end += 1;
        }
        for &i in &order[start..end] {
            ed[i] = Frac::new(end as u64, n as u64);
        }
        start = end;
    }
    Ranking { order, ed, levels }
}

/// Deepest function(s) under ED, ascending by index.
pub fn ed_median(sample: &FunctionalSample) -> Vec<usize> {
    rank_sample(sample).medians()
}

/// Depth notion used to order functions in regions and boxplots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DepthMethod {
    Extremal,
    Integrated,
    ModifiedBand,
}

impl DepthMethod {
    pub const ALL: [DepthMethod; 3] = [
        DepthMethod::Extremal,
        DepthMethod::Integrated,
        DepthMethod::ModifiedBand,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            DepthMethod::Extremal => "ED",
            DepthMethod::Integrated => "ID",
            DepthMethod::ModifiedBand => "MBD",
        }
    }

    /// Sample indices from deepest to least deep, equal depths by index.
    pub fn deepest_first(self, sample: &FunctionalSample) -> Result<Vec<usize>, DepthError> {
        match self {
            DepthMethod::Extremal => Ok(rank_sample(sample).deepest_first()),
            DepthMethod::Integrated | DepthMethod::ModifiedBand => {
                let depths = self.member_scores(sample)?;
                let mut idx: Vec<usize> = (0..sample.n()).collect();
                idx.sort_by(|&a, &b| depths[b].total_cmp(&depths[a]).then(a.cmp(&b)));
                Ok(idx)
            }
        }
    }

    /// Depth of every member as a float (ED as `k / n`).
    pub fn member_scores(self, sample: &FunctionalSample) -> Result<Vec<f64>, DepthError> {
        let index = DepthIndex::new(sample);
        match self {
            DepthMethod::Extremal => {
                Ok(rank_sample(sample).ed.iter().map(|f| f.to_f64()).collect())
            }
            DepthMethod::Integrated => Ok(sample
                .functions()
                .map(|f| baseline::integrated_with(&index, f))
                .collect()),
            DepthMethod::ModifiedBand => sample
                .functions()
                .map(|f| baseline::modified_band_with(&index, f))
                .collect(),
        }
    }
}
