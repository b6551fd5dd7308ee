//! Outlier-detection benchmark over the simulation models.

use alloc::vec::Vec;

use crate::boxplot::{detect_outliers, BoxplotError};
use crate::depth::DepthMethod;
use crate::rng;
use crate::stats;

use super::{generate_model, GenerateError, ModelSpec};

#[derive(Debug, thiserror::Error)]
pub enum BenchmarkError {
    #[error("at least one replicate is required")]
    NoReplicates,
    #[error("model {model}, replicate {replicate}: {source}")]
    Generate {
        model: u8,
        replicate: u64,
        source: GenerateError,
    },
    #[error("model {model}, replicate {replicate}: {source}")]
    Detect {
        model: u8,
        replicate: u64,
        source: BoxplotError,
    },
}

/// Detection rates in percent. `pc` is missing when there are no true
/// outliers, `pf` when every function is an outlier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutlierMetrics {
    pub pc: Option<f64>,
    pub pf: Option<f64>,
}

/// `detected` holds function indices; duplicates are ignored.
pub fn outlier_metrics(truth: &[bool], detected: &[usize]) -> OutlierMetrics {
    let n = truth.len();
    let mut flagged = alloc::vec![false; n];
    for &i in detected {
        if i < n {
            flagged[i] = true;
        }
    }
    let outliers = truth.iter().filter(|&&t| t).count();
    let hits = (0..n).filter(|&i| truth[i] && flagged[i]).count();
    let false_alarms = (0..n).filter(|&i| !truth[i] && flagged[i]).count();
    let pct = |num: usize, den: usize| (den > 0).then(|| 100.0 * num as f64 / den as f64);
    OutlierMetrics {
        pc: pct(hits, outliers),
        pf: pct(false_alarms, n - outliers),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    Pc,
    Pf,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Pc => "pc",
            Metric::Pf => "pf",
        }
    }

    fn pick(self, m: &OutlierMetrics) -> Option<f64> {
        match self {
            Metric::Pc => m.pc,
            Metric::Pf => m.pf,
        }
    }
}

/// Seed of the data set for one replicate of one model.
pub fn replicate_seed(master: u64, replicate: u64, model: u8) -> u64 {
    rng::derive_seed(master, &[replicate, model as u64])
}

/// Generates one replicate of `spec` (its own seed is ignored) and scores
/// each method on it.
pub fn replicate_metrics(
    spec: &ModelSpec,
    methods: &[DepthMethod],
    master: u64,
    replicate: u64,
) -> Result<Vec<OutlierMetrics>, BenchmarkError> {
    let spec = ModelSpec {
        seed: replicate_seed(master, replicate, spec.model),
        ..spec.clone()
    };
    let data = generate_model(&spec).map_err(|source| BenchmarkError::Generate {
        model: spec.model,
        replicate,
        source,
    })?;
    methods
        .iter()
        .map(|&method| {
            let detected =
                detect_outliers(&data.sample, method).map_err(|source| BenchmarkError::Detect {
                    model: spec.model,
                    replicate,
                    source,
                })?;
            Ok(outlier_metrics(&data.is_outlier, &detected))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRow {
    pub model: u8,
    pub method: DepthMethod,
    pub metric: Metric,
    /// Mean over replicates where the metric is defined.
    pub mean: Option<f64>,
    /// Standard deviation across those replicates.
    pub sd: Option<f64>,
    /// Number of replicates the metric was defined on.
    pub replicates: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkReport {
    pub fn get(&self, model: u8, method: DepthMethod, metric: Metric) -> Option<&BenchmarkRow> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.method == method && r.metric == metric)
    }
}

/// Builds the report from per-replicate results. `results[s][r][k]` is
/// replicate `r` of `specs[s]` scored by `methods[k]`.
pub fn aggregate_benchmark(
    specs: &[ModelSpec],
    methods: &[DepthMethod],
    results: &[Vec<Vec<OutlierMetrics>>],
) -> BenchmarkReport {
    let mut rows = Vec::new();
    for (spec, reps) in specs.iter().zip(results) {
        for (k, &method) in methods.iter().enumerate() {
            for metric in [Metric::Pc, Metric::Pf] {
                let vals: Vec<f64> = reps.iter().filter_map(|r| metric.pick(&r[k])).collect();
                let sd = stats::sample_sd(&vals);
                rows.push(BenchmarkRow {
                    model: spec.model,
                    method,
                    metric,
                    mean: (!vals.is_empty()).then(|| stats::mean(&vals)),
                    sd: (!sd.is_nan()).then_some(sd),
                    replicates: vals.len(),
                });
            }
        }
    }
    BenchmarkReport { rows }
}

/// Sequential benchmark. Replicate data depends only on
/// `(master, replicate, model)`.
pub fn run_benchmark(
    specs: &[ModelSpec],
    methods: &[DepthMethod],
    replicates: u64,
    master: u64,
) -> Result<BenchmarkReport, BenchmarkError> {
    if replicates == 0 {
        return Err(BenchmarkError::NoReplicates);
    }
    let mut results = Vec::with_capacity(specs.len());
    for spec in specs {
        let reps = (0..replicates)
            .map(|r| replicate_metrics(spec, methods, master, r))
            .collect::<Result<Vec<_>, _>>()?;
        results.push(reps);
    }
    Ok(aggregate_benchmark(specs, methods, &results))
}
