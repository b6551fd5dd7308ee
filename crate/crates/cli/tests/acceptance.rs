//! Acceptance report: one PASS/FAIL line per criterion, then a non-zero exit
//! if any criterion failed.

#[path = "../../core/tests/support/naive.rs"]
mod naive;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use extremal_depth::bands::{BandMethod, ExperimentConfig, ExperimentRow, Target};
use extremal_depth::depth::{
    ed_compare, rank_level_counts, rank_sample, DepthIndex, DepthMethod, Extremality, LevelCounts,
};
use extremal_depth::region::{
    central_region, contained, coverage, deepest_region, width_diagnostic, width_sd_r_squared,
};
use extremal_depth::sim::{gp_sample, Metric, ModelSpec, PowerExponential};
use extremal_depth::{rng, stats, uniform_grid, Frac, FunctionalSample};
use rand::Rng;

use edepth::parallel;

struct Report {
    failed: Vec<u32>,
}

impl Report {
    fn line(&mut self, id: u32, ok: bool, what: &str, detail: String, started: Instant) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {id}: {what}: {detail} [{:.1}s]",
            started.elapsed().as_secs_f64()
        );
        if !ok {
            self.failed.push(id);
        }
    }
}

fn gaussian(n: usize, m: usize, seed: u64) -> FunctionalSample {
    let grid = uniform_grid(m);
    gp_sample(
        &grid,
        &vec![0.0; m],
        |s, t| PowerExponential::UNIT.eval(s, t),
        n,
        seed,
    )
    .unwrap()
}

fn random_rows(r: &mut impl Rng, n: usize, m: usize, tied: bool) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..m)
                .map(|_| {
                    if tied {
                        r.random_range(0..4) as f64
                    } else {
                        r.random::<f64>() * 10.0 - 5.0
                    }
                })
                .collect()
        })
        .collect()
}

// Depth CDF rows of the eight-function illustration in twentieths, at levels
// 1/8, 3/8, 5/8, 7/8.
fn eight_function_example(report: &mut Report) {
    let t = Instant::now();
    let phi: [[u128; 4]; 8] = [
        [12, 12, 14, 20],
        [0, 20, 20, 20],
        [0, 0, 16, 20],
        [8, 8, 10, 20],
        [5, 10, 12, 20],
        [0, 0, 8, 20],
        [0, 10, 20, 20],
        [15, 20, 20, 20],
    ];
    let levels: Vec<LevelCounts> = phi
        .iter()
        .map(|row| {
            let mut dense = vec![0u128; 9];
            let mut prev = 0;
            for (slot, &cum) in row.iter().enumerate() {
                dense[2 * slot + 1] = cum - prev;
                prev = cum;
            }
            LevelCounts::from_counts(&dense)
        })
        .collect();
    let r = rank_level_counts(levels);
    let order: Vec<String> = r.order.iter().map(|i| format!("f{}", i + 1)).collect();
    let ok = r.order == [7, 0, 3, 4, 1, 6, 2, 5]
        && r.order
            .iter()
            .enumerate()
            .all(|(pos, &i)| r.ed[i] == Frac::new(pos as u64 + 1, 8));
    report.line(
        1,
        ok,
        "eight-function ordering and ED = 1/8..8/8",
        order.join(" < "),
        t,
    );
}

fn oracle(report: &mut Report) {
    let t = Instant::now();
    let mut r = rng::substream(99, &[]);
    let cases = 1200;
    let mut mismatches = 0;
    for case in 0..cases {
        let n = r.random_range(1..=8);
        let m = r.random_range(1..=6);
        let rows = random_rows(&mut r, n, m, case % 2 == 0);
        let sample = FunctionalSample::on_uniform_grid(rows.clone()).unwrap();
        let ranking = rank_sample(&sample);
        let ones = vec![1; m];
        let ed = naive::ed_all(&rows, &ones);
        let index = DepthIndex::new(&sample);
        let profiles_ok = rows.iter().all(|g| {
            let want: Vec<u32> = naive::profile(&rows, g).iter().map(|&d| d as u32).collect();
            index.profile(g).unwrap().numerators() == &want[..]
        });
        let ed_ok = (0..n).all(|i| ranking.ed[i] == Frac::new(ed[i], n as u64));
        if !(profiles_ok && ed_ok && ranking.order == naive::order(&rows, &ones)) {
            mismatches += 1;
        }
    }
    report.line(
        2,
        mismatches == 0,
        "optimized depth/rank equals direct recount",
        format!("{mismatches} mismatches in {cases} samples"),
        t,
    );
}

fn at_least_as_extreme(a: &LevelCounts, b: &LevelCounts) -> bool {
    ed_compare(a, b).unwrap() != Extremality::LessExtreme
}

fn comparator_laws(report: &mut Report) {
    let t = Instant::now();
    let mut r = rng::substream(5, &[]);
    let (mut triples, mut pairs, mut failures) = (0usize, 0usize, 0usize);
    while triples < 10_000 {
        let rows = random_rows(&mut r, 8, 6, triples % 2 == 0);
        let sample = FunctionalSample::on_uniform_grid(rows).unwrap();
        let l = DepthIndex::new(&sample).member_level_counts();
        for a in &l {
            for b in &l {
                pairs += 1;
                if ed_compare(a, b).unwrap() != ed_compare(b, a).unwrap().reverse() {
                    failures += 1;
                }
                for c in &l {
                    triples += 1;
                    if at_least_as_extreme(a, b)
                        && at_least_as_extreme(b, c)
                        && !at_least_as_extreme(a, c)
                    {
                        failures += 1;
                    }
                }
            }
        }
    }
    let maps = 500;
    let mut map_failures = 0;
    for k in 0..maps {
        let (n, m) = (r.random_range(3..=12), r.random_range(1..=8));
        let rows = random_rows(&mut r, n, m, k % 2 == 0);
        let sample = FunctionalSample::on_uniform_grid(rows).unwrap();
        let coef: Vec<(f64, f64, f64)> = (0..m)
            .map(|_| {
                (
                    r.random_range(0.1..3.0),
                    r.random_range(0.0..1.0),
                    r.random_range(-4.0..4.0),
                )
            })
            .collect();
        let mapped = sample.map_values(|j, v| {
            let (a, b, c) = coef[j];
            a * v + b * v * v * v + c
        });
        let (x, y) = (rank_sample(&sample), rank_sample(&mapped));
        if x.order != y.order || x.ed != y.ed {
            map_failures += 1;
        }
    }
    report.line(
        3,
        failures == 0 && map_failures == 0,
        "transitivity, antisymmetry, monotone invariance",
        format!(
            "{failures} law failures over {triples} triples / {pairs} pairs; \
             {map_failures} ranking changes under {maps} increasing maps"
        ),
        t,
    );
}

fn sandwich(report: &mut Report) {
    let t = Instant::now();
    let mut r = rng::substream(6, &[]);
    let cases = 500;
    let mut failures = 0;
    for case in 0..cases {
        let n = r.random_range(2..=10);
        let m = r.random_range(1..=8);
        let rows = random_rows(&mut r, n, m, case % 2 == 0);
        let sample = FunctionalSample::on_uniform_grid(rows.clone()).unwrap();
        let other = random_rows(&mut r, 1, m, case % 2 == 0).remove(0);
        let a = &rows[r.random_range(0..n)];
        let f1: Vec<f64> = a.iter().zip(&other).map(|(x, y)| x.min(*y)).collect();
        let f2: Vec<f64> = a.iter().zip(&other).map(|(x, y)| x.max(*y)).collect();
        let g: Vec<f64> = f1
            .iter()
            .zip(&f2)
            .map(|(lo, hi)| match r.random_range(0..3) {
                0 => *lo,
                1 => *hi,
                _ => lo + r.random::<f64>() * (hi - lo),
            })
            .collect();
        let index = DepthIndex::new(&sample);
        let (p1, p2, pg) = (
            index.profile(&f1).unwrap(),
            index.profile(&f2).unwrap(),
            index.profile(&g).unwrap(),
        );
        let bad = (0..m).any(|j| pg.numerators()[j] < p1.numerators()[j].min(p2.numerators()[j]));
        if bad {
            failures += 1;
        }
    }
    report.line(
        4,
        failures == 0,
        "sandwich inequality",
        format!("{failures} failures in {cases} constructions"),
        t,
    );
}

fn coverage_exactness(report: &mut Report) {
    let t = Instant::now();
    let reps = 200;
    let mut below = 0;
    let mut exact = [0usize; 2];
    let alphas = [0.1, 0.5];
    for seed in 0..reps {
        let s = gaussian(100, 50, 10_000 + seed);
        for (k, &alpha) in alphas.iter().enumerate() {
            let env = central_region(&s, alpha).unwrap();
            if coverage(&s, &env).unwrap() < 1.0 - alpha {
                below += 1;
            }
            let keep = 100 - (alpha * 100.0f64).floor() as usize;
            if env.members.len() == keep && contained(&s, &env).len() == keep {
                exact[k] += 1;
            }
        }
    }
    let ok = below == 0 && exact.iter().all(|&e| e * 100 >= 99 * reps as usize);
    report.line(
        5,
        ok,
        "central-region coverage exactness",
        format!(
            "{below} replicates below 1-alpha; exact membership {}/{reps} (alpha 0.1), \
             {}/{reps} (alpha 0.5)",
            exact[0], exact[1]
        ),
        t,
    );
}

fn table_one(report: &mut Report) {
    let t = Instant::now();
    let specs: Vec<ModelSpec> = (1..=5).map(|m| ModelSpec::new(m, 7)).collect();
    let rep = parallel::bench_table1(&specs, &DepthMethod::ALL, 100, 7).unwrap();
    let pc = |model, method| rep.get(model, method, Metric::Pc).unwrap().mean.unwrap();
    let checks = [
        (2, DepthMethod::Extremal, 98.52, 3.0),
        (3, DepthMethod::Extremal, 86.43, 6.0),
        (4, DepthMethod::Extremal, 84.42, 6.0),
        (4, DepthMethod::Integrated, 41.06, 8.0),
        (4, DepthMethod::ModifiedBand, 45.94, 8.0),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (model, method, target, tol) in checks {
        let v = pc(model, method);
        ok &= within(v, target, tol);
        parts.push(format!(
            "M{model} {} pc {v:.2} (want {target}±{tol})",
            method.short_name()
        ));
    }
    let worst_pf = (1..=5)
        .filter_map(|model| {
            rep.get(model, DepthMethod::Extremal, Metric::Pf)
                .unwrap()
                .mean
        })
        .fold(0.0f64, f64::max);
    ok &= worst_pf <= 0.2;
    parts.push(format!("max ED pf {worst_pf:.3} (want <= 0.2)"));
    report.line(6, ok, "outlier benchmark, 100 replicates, n=100, m=50", parts.join("; "), t);
}

// Closed interval; rates are k/200 so the ends must not be lost to rounding.
fn within(v: f64, target: f64, tol: f64) -> bool {
    (v - target).abs() <= tol + 1e-12
}

fn rate(rows: &[ExperimentRow], target: Target, method: BandMethod) -> f64 {
    rows.iter()
        .find(|r| r.target == target && r.method == method)
        .unwrap()
        .rate
}

fn table_two(report: &mut Report) {
    let t = Instant::now();
    let config = ExperimentConfig {
        bootstrap: 1000,
        replicates: 200,
        seed: 11,
        ..ExperimentConfig::default()
    };
    let rows = parallel::bench_table2(&config).unwrap();
    let ed = rate(&rows, Target::Truth, BandMethod::Ed);
    let k = rate(&rows, Target::Truth, BandMethod::K);
    let sch = rate(&rows, Target::Truth, BandMethod::Scheffe);
    let ed_pow = rate(&rows, Target::LinearShift, BandMethod::Ed);
    let k_pow = rate(&rows, Target::LinearShift, BandMethod::K);
    let checks = [
        (
            within(ed, 0.10, 0.04),
            format!("ED level {ed:.3} (want 0.10±0.04)"),
        ),
        (
            within(k, 0.10, 0.04),
            format!("K level {k:.3} (want 0.10±0.04)"),
        ),
        (
            sch <= 0.04 + 1e-12,
            format!("Scheffe level {sch:.3} (want <= 0.04)"),
        ),
        (
            ed_pow - k_pow >= 0.15 - 1e-12,
            format!("0.2+0.2x+P5 power ED {ed_pow:.3} vs K {k_pow:.3} (want gap >= 0.15)"),
        ),
    ];
    let ok = checks.iter().all(|c| c.0);
    let detail: Vec<String> = checks
        .iter()
        .map(|(pass, s)| format!("{}{s}", if *pass { "" } else { "x " }))
        .collect();
    report.line(7, ok, "band level and power, 200 replicates, B=1000", detail.join("; "), t);
    let t = Instant::now();
    let full_b = ExperimentConfig {
        bootstrap: 2000,
        ..config
    };
    let rows = parallel::bench_table2(&full_b).unwrap();
    println!(
        "INFO criterion 7 (not gated): B=2000, 200 replicates: ED level {:.3}, K level {:.3}, \
         Scheffe level {:.3} [{:.1}s]",
        rate(&rows, Target::Truth, BandMethod::Ed),
        rate(&rows, Target::Truth, BandMethod::K),
        rate(&rows, Target::Truth, BandMethod::Scheffe),
        t.elapsed().as_secs_f64()
    );
}

fn width_proportionality(report: &mut Report) {
    let t = Instant::now();
    let m = 50;
    let grid = uniform_grid(m);
    let sigma: Vec<f64> = grid.iter().map(|t| 0.5 + 2.0 * t * t).collect();
    let mut r2: [Vec<f64>; 3] = Default::default();
    for seed in 0..20 {
        let s = gaussian(200, m, 20_000 + seed).map_values(|j, v| sigma[j] * v);
        for (k, method) in DepthMethod::ALL.into_iter().enumerate() {
            let env = match method {
                DepthMethod::Extremal => central_region(&s, 0.5).unwrap(),
                _ => deepest_region(&s, method, 0.5).unwrap(),
            };
            r2[k].push(width_sd_r_squared(&width_diagnostic(&s, &env).unwrap()));
        }
    }
    let med: Vec<f64> = r2.iter().map(|v| stats::quantile(v, 0.5)).collect();
    report.line(
        8,
        med[0] > 0.9,
        "ED 50% width vs pointwise sd",
        format!(
            "median R^2 ED {:.3} (want > 0.9); ID {:.3}, MBD {:.3} (not gated)",
            med[0], med[1], med[2]
        ),
        t,
    );
}

fn run_cli(args: &[&str], threads: usize, dir: &Path, name: &str) -> Vec<u8> {
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_edepth"))
        .args(args)
        .arg("--threads")
        .arg(threads.to_string())
        .arg("--output")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "{args:?}");
    std::fs::read(out).unwrap()
}

fn simulate_dir(threads: usize, dir: &Path) -> Vec<(String, Vec<u8>)> {
    let out = dir.join(format!("sim{threads}"));
    let status = Command::new(env!("CARGO_BIN_EXE_edepth"))
        .args([
            "simulate",
            "--model",
            "4",
            "--replicates",
            "6",
            "--seed",
            "3",
            "--out-dir",
        ])
        .arg(&out)
        .arg("--threads")
        .arg(threads.to_string())
        .status()
        .unwrap();
    assert!(status.success());
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn reproducibility(report: &mut Report) {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let jobs: [(&str, &[&str]); 3] = [
        (
            "table1",
            &["bench-table1", "--replicates", "20", "--seed", "7"],
        ),
        (
            "table2",
            &[
                "bench-table2",
                "--replicates",
                "12",
                "--bootstrap",
                "200",
                "--seed",
                "11",
            ],
        ),
        (
            "bands",
            &[
                "bands",
                "--seed",
                "5",
                "--bootstrap",
                "300",
                "--format",
                "json",
            ],
        ),
    ];
    let mut differing = Vec::new();
    for (name, args) in jobs {
        let reference = run_cli(args, 1, dir.path(), &format!("{name}-1a"));
        for (k, threads) in [1, 2, 8].into_iter().enumerate() {
            let again = run_cli(args, threads, dir.path(), &format!("{name}-{threads}-{k}"));
            if again != reference {
                differing.push(format!("{name} at {threads} threads"));
            }
        }
    }
    let sims = simulate_dir(1, dir.path());
    for threads in [1, 4] {
        if simulate_dir(threads, dir.path()) != sims {
            differing.push(format!("simulate at {threads} threads"));
        }
    }
    report.line(
        9,
        differing.is_empty(),
        "byte-identical re-runs across thread counts",
        if differing.is_empty() {
            "bench-table1, bench-table2 and bands at 1/2/8 threads, simulate at 1/4 threads".into()
        } else {
            format!("differs: {}", differing.join(", "))
        },
        t,
    );
}

fn main() {
    let mut report = Report { failed: Vec::new() };
    eight_function_example(&mut report);
    oracle(&mut report);
    comparator_laws(&mut report);
    sandwich(&mut report);
    coverage_exactness(&mut report);
    table_one(&mut report);
    table_two(&mut report);
    width_proportionality(&mut report);
    reproducibility(&mut report);
    if report.failed.is_empty() {
        println!("acceptance: all 9 criteria passed");
    } else {
        println!("acceptance: failed criteria {:?}", report.failed);
        std::process::exit(1);
    }
}
