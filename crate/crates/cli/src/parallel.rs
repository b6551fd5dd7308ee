//! Rayon drivers for the Monte-Carlo workloads.
//!
//! Each task depends only on its own seed, and results are collected in
//! task order before aggregation, so output does not depend on the number of
//! worker threads.

use rayon::prelude::*;

use extremal_depth::bands::{
    aggregate_experiment, experiment_replicate, BandError, ExperimentConfig, ExperimentRow,
};
use extremal_depth::depth::DepthMethod;
use extremal_depth::sim::{
    aggregate_benchmark, generate_model, replicate_metrics, replicate_seed, BenchmarkError,
    BenchmarkReport, GenerateError, LabeledSample, ModelSpec,
};

/// Parallel counterpart of `run_benchmark`, over all (model, replicate) pairs.
pub fn bench_table1(
    specs: &[ModelSpec],
    methods: &[DepthMethod],
    replicates: u64,
    master: u64,
) -> Result<BenchmarkReport, BenchmarkError> {
    if replicates == 0 {
        return Err(BenchmarkError::NoReplicates);
    }
    let tasks: Vec<(usize, u64)> = (0..specs.len())
        .flat_map(|s| (0..replicates).map(move |r| (s, r)))
        .collect();
    let flat = tasks
        .par_iter()
        .map(|&(s, r)| replicate_metrics(&specs[s], methods, master, r))
        .collect::<Result<Vec<_>, _>>()?;
    let per_spec = replicates as usize;
    let results: Vec<Vec<_>> = flat.chunks(per_spec).map(<[_]>::to_vec).collect();
    Ok(aggregate_benchmark(specs, methods, &results))
}

/// Parallel counterpart of `level_power_experiment`.
pub fn bench_table2(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>, BandError> {
    if config.replicates == 0 {
        return Err(BandError::NoReplicates);
    }
    let outcomes = (0..config.replicates)
        .into_par_iter()
        .map(|r| experiment_replicate(config, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(aggregate_experiment(config, &outcomes))
}

/// Replicate data sets of one model, seeded as in the benchmark.
pub fn simulate(
    spec: &ModelSpec,
    replicates: u64,
    master: u64,
) -> Result<Vec<(u64, LabeledSample)>, GenerateError> {
    (0..replicates)
        .into_par_iter()
        .map(|r| {
            let seed = replicate_seed(master, r, spec.model);
            let data = generate_model(&ModelSpec {
                seed,
                ..spec.clone()
            })?;
            Ok((seed, data))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use extremal_depth::sim::run_benchmark;

    #[test]
    fn matches_sequential_benchmark() {
        let specs: Vec<ModelSpec> = [1, 4]
            .into_iter()
            .map(|m| ModelSpec {
                n: 30,
                m: 20,
                ..ModelSpec::new(m, 0)
            })
            .collect();
        let methods = DepthMethod::ALL;
        let seq = run_benchmark(&specs, &methods, 4, 3).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let par = pool
            .install(|| bench_table1(&specs, &methods, 4, 3))
            .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn matches_sequential_experiment() {
        let config = ExperimentConfig {
            bootstrap: 30,
            replicates: 4,
            eval_points: 11,
            ..ExperimentConfig::default()
        };
        let seq = extremal_depth::bands::level_power_experiment(&config).unwrap();
        assert_eq!(bench_table2(&config).unwrap(), seq);
    }
}
