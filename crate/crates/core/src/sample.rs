//! Functional sample data model and validation.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use crate::math;

/// Tolerance on the sum of explicit grid weights.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

/// Explicit weights are held exactly as integer multiples of `2^-116`.
const WEIGHT_UNIT_EXP: i32 = 116;

/// Grid-point weight measure used when integrating over the domain.
#[derive(Clone, Debug, PartialEq)]
pub enum GridWeights {
    /// Every grid point carries `1/m`.
    Uniform,
    /// One nonnegative weight per grid point, summing to one.
    Custom(Vec<f64>),
}

impl GridWeights {
    /// Weight of grid point `j` as a float.
    pub fn weight(&self, j: usize, m: usize) -> f64 {
        match self {
            GridWeights::Uniform => 1.0 / m as f64,
            GridWeights::Custom(w) => w[j],
        }
    }

    /// Exact integer masses and their total.
    ///
    /// Uniform weights count grid points (total `m`). Explicit weights are
    /// converted to integer units of `2^-116`, which is exact for every
    /// weight the validator accepts.
    pub(crate) fn exact_masses(&self, m: usize) -> (Vec<u128>, u128) {
        match self {
            GridWeights::Uniform => (alloc::vec![1; m], m as u128),
            GridWeights::Custom(w) => {
                let units: Vec<u128> = w
                    .iter()
                    .map(|&x| weight_units(x).expect("weights validated"))
                    .collect();
                let total = units.iter().sum();
                (units, total)
            }
        }
    }
}

fn weight_units(w: f64) -> Option<u128> {
    if !(w >= 0.0) || !w.is_finite() {
        return None;
    }
    let scaled = libm::ldexp(w, WEIGHT_UNIT_EXP);
    if libm::trunc(scaled) != scaled {
        return None;
    }
    Some(scaled as u128)
}

/// One broken invariant of a [`FunctionalSample`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    EmptyGrid,
    NoFunctions,
    RaggedRow {
        function: usize,
        len: usize,
        expected: usize,
    },
    NonFiniteValue {
        function: usize,
        point: usize,
    },
    NonFiniteGrid {
        point: usize,
    },
    GridNotIncreasing {
        point: usize,
    },
    GridOutOfRange {
        point: usize,
        value: f64,
    },
    WeightsLength {
        len: usize,
        expected: usize,
    },
    InvalidWeight {
        point: usize,
        value: f64,
    },
    WeightsSum {
        sum: f64,
    },
    LabelsLength {
        len: usize,
        expected: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyGrid => write!(f, "grid is empty"),
            Violation::NoFunctions => write!(f, "sample has no functions"),
            Violation::RaggedRow {
                function,
                len,
                expected,
            } => write!(
                f,
                "function {function} has {len} values, expected {expected}"
            ),
            Violation::NonFiniteValue { function, point } => {
                write!(f, "non-finite value at function {function}, point {point}")
            }
            Violation::NonFiniteGrid { point } => {
                write!(f, "non-finite grid value at point {point}")
            }
            Violation::GridNotIncreasing { point } => {
                write!(f, "grid not strictly increasing at point {point}")
            }
            Violation::GridOutOfRange { point, value } => {
                write!(f, "grid point {point} = {value} outside [0, 1]")
            }
            Violation::WeightsLength { len, expected } => {
                write!(f, "{len} weights for {expected} grid points")
            }
            Violation::InvalidWeight { point, value } => write!(
                f,
                "weight {value} at point {point} is negative, non-finite or below 2^-64 resolution"
            ),
            Violation::WeightsSum { sum } => write!(f, "weights sum ≠ 1 (sum = {sum})"),
            Violation::LabelsLength { len, expected } => {
                write!(f, "{len} labels for {expected} functions")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SampleError {
    #[error("invalid functional sample: {}", first(.0))]
    Invalid(Vec<Violation>),
    #[error("query has {len} values, grid has {expected}")]
    QueryLength { len: usize, expected: usize },
    #[error("query value at point {point} is not finite")]
    QueryNonFinite { point: usize },
}

fn first(v: &[Violation]) -> String {
    use core::fmt::Write;
    let mut s = String::new();
    if let Some(x) = v.first() {
        let _ = write!(s, "{x}");
    }
    if v.len() > 1 {
        let _ = write!(s, " (and {} more)", v.len() - 1);
    }
    s
}

/// `n` functions evaluated on a shared grid of `m` points in `[0, 1]`.
///
/// Immutable once constructed; all depth operations borrow it.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalSample {
    grid: Vec<f64>,
    values: Vec<Vec<f64>>,
    weights: GridWeights,
    labels: Option<Vec<String>>,
}

impl FunctionalSample {
    /// Validated constructor with uniform weights.
    pub fn new(grid: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self, SampleError> {
        Self::from_raw(grid, values, GridWeights::Uniform, None).checked()
    }

    /// Functions on an equally spaced grid of `m` points covering `[0, 1]`.
    pub fn on_uniform_grid(values: Vec<Vec<f64>>) -> Result<Self, SampleError> {
        let m = values.first().map_or(0, Vec::len);
        Self::new(uniform_grid(m), values)
    }

    /// Unvalidated constructor; pair with [`FunctionalSample::validate`].
    pub fn from_raw(
        grid: Vec<f64>,
        values: Vec<Vec<f64>>,
        weights: GridWeights,
        labels: Option<Vec<String>>,
    ) -> Self {
        FunctionalSample {
            grid,
            values,
            weights,
            labels,
        }
    }

    /// Returns `self` if [`validate`](Self::validate) finds nothing.
    pub fn checked(self) -> Result<Self, SampleError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(SampleError::Invalid(v))
        }
    }

    pub fn with_weights(mut self, weights: GridWeights) -> Result<Self, SampleError> {
        self.weights = weights;
        self.checked()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, SampleError> {
        self.labels = Some(labels);
        self.checked()
    }

    /// Every invariant violation; empty iff the sample is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let m = self.grid.len();
        if m == 0 {
            out.push(Violation::EmptyGrid);
        }
        if self.values.is_empty() {
            out.push(Violation::NoFunctions);
        }
        for (j, &t) in self.grid.iter().enumerate() {
            if !t.is_finite() {
                out.push(Violation::NonFiniteGrid { point: j });
                continue;
            }
            if !(0.0..=1.0).contains(&t) {
                out.push(Violation::GridOutOfRange { point: j, value: t });
            }
            if j > 0 && !(t > self.grid[j - 1]) {
                out.push(Violation::GridNotIncreasing { point: j });
            }
        }
        for (i, row) in self.values.iter().enumerate() {
            if row.len() != m {
                out.push(Violation::RaggedRow {
                    function: i,
                    len: row.len(),
                    expected: m,
                });
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    out.push(Violation::NonFiniteValue {
                        function: i,
                        point: j,
                    });
                }
            }
        }
        if let GridWeights::Custom(w) = &self.weights {
            if w.len() != m {
                out.push(Violation::WeightsLength {
                    len: w.len(),
                    expected: m,
                });
            }
            for (j, &x) in w.iter().enumerate() {
                if weight_units(x).is_none() {
                    out.push(Violation::InvalidWeight { point: j, value: x });
                }
            }
            let sum: f64 = w.iter().sum();
            if !(math::abs(sum - 1.0) <= WEIGHT_SUM_TOLERANCE) {
                out.push(Violation::WeightsSum { sum });
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.values.len() {
                out.push(Violation::LabelsLength {
                    len: labels.len(),
                    expected: self.values.len(),
                });
            }
        }
        out
    }

    /// Number of functions `n`.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Number of grid points `m`.
    pub fn m(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn function(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    pub fn functions(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.iter().map(Vec::as_slice)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn weights(&self) -> &GridWeights {
        &self.weights
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of function `i`, falling back to `f{i+1}`.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => alloc::format!("f{}", i + 1),
        }
    }

    pub(crate) fn weight(&self, j: usize) -> f64 {
        self.weights.weight(j, self.m())
    }

    /// Checks that `g` is aligned to this sample's grid.
    pub fn check_query(&self, g: &[f64]) -> Result<(), SampleError> {
        if g.len() != self.m() {
            return Err(SampleError::QueryLength {
                len: g.len(),
                expected: self.m(),
            });
        }
        if let Some(point) = g.iter().position(|v| !v.is_finite()) {
            return Err(SampleError::QueryNonFinite { point });
        }
        Ok(())
    }

    /// The sample restricted to the given function indices, in that order.
    pub fn subset(&self, indices: &[usize]) -> FunctionalSample {
        FunctionalSample {
            grid: self.grid.clone(),
            values: indices.iter().map(|&i| self.values[i].clone()).collect(),
            weights: self.weights.clone(),
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    /// Applies `f(j, value)` to every entry.
    pub fn map_values(&self, mut f: impl FnMut(usize, f64) -> f64) -> FunctionalSample {
        let values = self
            .values
            .iter()
            .map(|row| row.iter().enumerate().map(|(j, &v)| f(j, v)).collect())
            .collect();
        FunctionalSample {
            values,
            ..self.clone()
        }
    }
}

/// `m` equally spaced points from 0 to 1 (a single point sits at 0).
pub fn uniform_grid(m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => alloc::vec![0.0],
        _ => (0..m).map(|j| j as f64 / (m - 1) as f64).collect(),
    }
}

/// Affinely maps an increasing grid onto `[0, 1]` when any point lies
/// outside it. Returns whether the grid was changed.
///
/// Depth only sees the weight measure, so the rescaling leaves every depth
/// value unchanged.
pub fn normalize_grid(grid: &mut [f64]) -> bool {
    if grid.iter().all(|t| (0.0..=1.0).contains(t)) {
        return false;
    }
    let (lo, hi) = match (grid.first(), grid.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return false,
    };
    if grid.len() == 1 {
        grid[0] = 0.0;
        return true;
    }
    let span = hi - lo;
    for t in grid.iter_mut() {
        *t = ((*t - lo) / span).clamp(0.0, 1.0);
    }
    true
}

/// A function aligned to a sample grid, possibly not a sample member.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryFunction(Vec<f64>);

impl QueryFunction {
    pub fn aligned(sample: &FunctionalSample, values: Vec<f64>) -> Result<Self, SampleError> {
        sample.check_query(&values)?;
        Ok(QueryFunction(values))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for QueryFunction {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}
