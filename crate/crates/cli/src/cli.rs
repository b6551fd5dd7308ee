//! Argument parsing and subcommand dispatch for `edepth`.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use extremal_depth::bands::{
    ed_band, eval_grid, fit_poly, k_band, replicate_bands, residual_bootstrap, scheffe_band, Band,
    BandMethod, ExperimentConfig,
};
use extremal_depth::boxplot::functional_boxplot;
use extremal_depth::depth::{rank_sample, DepthMethod};
use extremal_depth::region::{
    central_region_from_ranking, deepest_region, pointwise_region, width_diagnostic, Envelope,
};
use extremal_depth::rng;
use extremal_depth::sim::ModelSpec;
use extremal_depth::FunctionalSample;

use crate::export::{self, Format};
use crate::io as csvio;
use crate::parallel;
use crate::plotdata::PlotWriter;

#[derive(Debug, Parser)]
#[command(name = "edepth", version, about = "Extremal depth for functional data")]
pub struct Cli {
    /// Worker threads for Monte-Carlo runs (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Log more detail to stderr (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-function ED, ID, MBD and minimum pointwise depth.
    Depth {
        #[command(flatten)]
        input: Input,
        /// Include each depth profile (JSON only).
        #[arg(long)]
        profile: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Functions ordered from the ED median outwards.
    Rank {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Central region with level 1 - alpha.
    Region {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.5, value_parser = level_half_open)]
        alpha: f64,
        /// Depth ordering; ID and MBD keep the deepest ceil((1 - alpha) n) functions.
        #[arg(long, value_enum, default_value_t = MethodArg::Ed)]
        method: MethodArg,
        /// Also write `t,width,sd` rows to this file.
        #[arg(long)]
        diagnostic: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Band between the pointwise gamma/2 and 1 - gamma/2 quantiles.
    PointwiseRegion {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = level_open)]
        gamma: f64,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Functional boxplot: box, fences and flagged functions.
    Boxplot {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = MethodArg::Ed)]
        method: MethodArg,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Functions outside the boxplot fences.
    Outliers {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = MethodArg::Ed)]
        method: MethodArg,
        #[command(flatten)]
        out: Output,
    },
    /// Writes simulated samples and their outlier labels.
    Simulate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        model: u8,
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        m: usize,
        /// Contamination probability.
        #[arg(long, default_value_t = 0.1, value_parser = probability)]
        p: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Simultaneous confidence band for a polynomial regression.
    Bands {
        /// CSV with `x` and `y` columns. Without it, data are simulated
        /// around the degree-5 test polynomial.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[arg(long, default_value_t = 0.1, value_parser = level_open)]
        alpha: f64,
        #[arg(long = "bootstrap", default_value_t = 1000)]
        bootstrap: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 201)]
        eval_points: usize,
        #[arg(long, value_enum, default_value_t = BandArg::Ed)]
        method: BandArg,
        /// Size of simulated data.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Noise sd of simulated data.
        #[arg(long, default_value_t = 5.0)]
        sd: f64,
        #[command(flatten)]
        out: Output,
        #[command(flatten)]
        plot: Plot,
    },
    /// Outlier detection rates over the simulation models.
    BenchTable1 {
        #[arg(long, default_value_t = 100)]
        replicates: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2, 3, 4, 5],
              value_parser = clap::value_parser!(u8).range(1..=5))]
        models: Vec<u8>,
        #[command(flatten)]
        out: Output,
    },
    /// Level and power of the ED, Scheffé and K bands.
    BenchTable2 {
        #[arg(long, default_value_t = 200)]
        replicates: u64,
        #[arg(long = "bootstrap", default_value_t = 1000)]
        bootstrap: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[arg(long, default_value_t = 5.0)]
        sd: f64,
        #[arg(long, default_value_t = 0.1, value_parser = level_open)]
        alpha: f64,
        #[arg(long, default_value_t = 201)]
        eval_points: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct Input {
    /// Sample CSV: `t,<name1>,...` with one row per grid point.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Result file (default: stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Plot {
    /// Directory for plot-data CSV layers.
    #[arg(long)]
    pub plot_dir: Option<PathBuf>,
    /// File stem of the layers (default: the subcommand name).
    #[arg(long)]
    pub plot_stem: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Ed,
    Id,
    Mbd,
}

impl From<MethodArg> for DepthMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Ed => DepthMethod::Extremal,
            MethodArg::Id => DepthMethod::Integrated,
            MethodArg::Mbd => DepthMethod::ModifiedBand,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BandArg {
    Ed,
    Scheffe,
    K,
}

impl From<BandArg> for BandMethod {
    fn from(m: BandArg) -> Self {
        match m {
            BandArg::Ed => BandMethod::Ed,
            BandArg::Scheffe => BandMethod::Scheffe,
            BandArg::K => BandMethod::K,
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| e.to_string())
}

fn level_half_open(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if (0.0..1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1)"))
    }
}

fn level_open(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not in (0, 1)"))
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [0, 1]"))
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Depth { .. } => "depth",
            Command::Rank { .. } => "rank",
            Command::Region { .. } => "region",
            Command::PointwiseRegion { .. } => "pointwise-region",
            Command::Boxplot { .. } => "boxplot",
            Command::Outliers { .. } => "outliers",
            Command::Simulate { .. } => "simulate",
            Command::Bands { .. } => "bands",
            Command::BenchTable1 { .. } => "bench-table1",
            Command::BenchTable2 { .. } => "bench-table2",
        }
    }
}

/// Runs one parsed command. Any error is a data or IO error.
pub fn run(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .context("cannot start worker threads")?;
    pool.install(|| dispatch(cli.command))
}

fn dispatch(command: Command) -> Result<()> {
    let name = command.name();
    match command {
        Command::Depth {
            input,
            profile,
            out,
        } => {
            let sample = load(&input)?;
            let records = export::depth_records(&sample, profile)?;
            emit(&out, &input.input, None, |w| {
                export::write_depths(w, &records, out.format)
            })
        }
        Command::Rank { input, out, plot } => {
            let sample = load(&input)?;
            let ranking = rank_sample(&sample);
            emit(&out, &input.input, None, |w| {
                export::write_ranking(w, &sample, &ranking, out.format)
            })?;
            if let Some(mut pw) = plot_writer(&plot, name)? {
                let medians = ranking.medians();
                let min_ed = ranking.ed.iter().min().copied();
                pw.curves(&sample, |i| {
                    if medians.contains(&i) {
                        "median"
                    } else if Some(ranking.ed[i]) == min_ed {
                        "extreme"
                    } else {
                        "curve"
                    }
                })?;
            }
            Ok(())
        }
        Command::Region {
            input,
            alpha,
            method,
            diagnostic,
            out,
            plot,
        } => {
            let sample = load(&input)?;
            let env = match DepthMethod::from(method) {
                DepthMethod::Extremal => {
                    central_region_from_ranking(&sample, &rank_sample(&sample), alpha)?
                }
                other => deepest_region(&sample, other, alpha)?,
            };
            if let Some(path) = diagnostic {
                guard_input(&path, &input.input)?;
                let rows = width_diagnostic(&sample, &env)?;
                write_file(&path, |w| export::write_diagnostic(w, &rows))?;
            }
            emit_envelope(&sample, &env, &input, &out, &plot, name)
        }
        Command::PointwiseRegion {
            input,
            gamma,
            out,
            plot,
        } => {
            let sample = load(&input)?;
            let env = pointwise_region(&sample, gamma)?;
            emit_envelope(&sample, &env, &input, &out, &plot, name)
        }
        Command::Boxplot {
            input,
            method,
            out,
            plot,
        } => {
            let sample = load(&input)?;
            let bp = functional_boxplot(&sample, method.into())?;
            emit(&out, &input.input, None, |w| {
                export::write_boxplot(w, &sample, &bp, out.format)
            })?;
            if let Some(mut pw) = plot_writer(&plot, name)? {
                pw.boxplot(&sample, &bp)?;
            }
            Ok(())
        }
        Command::Outliers { input, method, out } => {
            let sample = load(&input)?;
            let method = DepthMethod::from(method);
            let bp = functional_boxplot(&sample, method)?;
            emit(&out, &input.input, None, |w| {
                export::write_outliers(w, &sample, method, &bp.outliers, out.format)
            })
        }
        Command::Simulate {
            model,
            replicates,
            seed,
            n,
            m,
            p,
            out_dir,
        } => {
            let spec = ModelSpec {
                n,
                m,
                p,
                ..ModelSpec::new(model, seed)
            };
            spec.validate()?;
            let data = parallel::simulate(&spec, replicates, seed)?;
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("cannot create {}", out_dir.display()))?;
            for (r, (rep_seed, labeled)) in data.iter().enumerate() {
                let stem = format!("model{model}_rep{r}");
                write_file(&out_dir.join(format!("{stem}.csv")), |w| {
                    writeln!(w, "# seed: {seed}")?;
                    writeln!(w, "# replicate seed: {rep_seed}")?;
                    csvio::save_sample(w, &labeled.sample)
                })?;
                write_file(&out_dir.join(format!("{stem}.labels.csv")), |w| {
                    writeln!(w, "# seed: {seed}")?;
                    let mut cw = csv::Writer::from_writer(w);
                    cw.write_record(["label", "is_outlier", "sign", "start", "end"])?;
                    for i in 0..labeled.sample.n() {
                        let window = labeled.shifts[i];
                        let field = |f: fn(&extremal_depth::sim::ShiftWindow) -> f64| {
                            window
                                .as_ref()
                                .map(|w| f(w).to_string())
                                .unwrap_or_default()
                        };
                        cw.write_record([
                            labeled.sample.label(i),
                            labeled.is_outlier[i].to_string(),
                            field(|w| w.sign),
                            field(|w| w.start),
                            field(|w| w.end),
                        ])?;
                    }
                    cw.flush()
                })?;
            }
            log::info!("wrote {} replicate(s) to {}", data.len(), out_dir.display());
            Ok(())
        }
        Command::Bands {
            input,
            degree,
            alpha,
            bootstrap,
            seed,
            eval_points,
            method,
            n,
            sd,
            out,
            plot,
        } => {
            let all = match &input {
                Some(path) => {
                    let (x, y) = csvio::load_xy_path(path)?;
                    let fit = fit_poly(&x, &y, degree)?;
                    let grid = eval_grid(eval_points);
                    let piv = residual_bootstrap(
                        &fit,
                        bootstrap,
                        &grid,
                        rng::derive_seed(seed, &[0, 1]),
                    )?;
                    if piv.redraws > 0 {
                        log::warn!("{} degenerate resamples were redrawn", piv.redraws);
                    }
                    [
                        scheffe_band(&fit, alpha, &grid)?,
                        k_band(&fit, &piv, alpha)?,
                        ed_band(&fit, &piv, alpha)?,
                    ]
                }
                None => {
                    let config = ExperimentConfig {
                        n,
                        degree,
                        sd,
                        bootstrap,
                        replicates: 1,
                        alpha,
                        eval_points,
                        seed,
                        ..ExperimentConfig::default()
                    };
                    replicate_bands(&config, 0)?
                }
            };
            let pick = |m: BandMethod| -> &Band { all.iter().find(|b| b.method == m).unwrap() };
            let chosen = pick(method.into());
            let guard = input.as_deref().unwrap_or(Path::new(""));
            emit(&out, guard, Some(seed), |w| {
                export::write_band(w, chosen, out.format)
            })?;
            if let Some(mut pw) = plot_writer(&plot, name)? {
                let ordered: Vec<Band> = [BandMethod::Ed, BandMethod::Scheffe, BandMethod::K]
                    .into_iter()
                    .map(|m| pick(m).clone())
                    .collect();
                pw.bands(&ordered)?;
            }
            Ok(())
        }
        Command::BenchTable1 {
            replicates,
            seed,
            n,
            m,
            models,
            out,
        } => {
            let specs: Vec<ModelSpec> = models
                .iter()
                .map(|&model| ModelSpec {
                    n,
                    m,
                    ..ModelSpec::new(model, seed)
                })
                .collect();
            for spec in &specs {
                spec.validate()?;
            }
            let report = parallel::bench_table1(&specs, &DepthMethod::ALL, replicates, seed)?;
            emit(&out, Path::new(""), Some(seed), |w| {
                export::write_report(w, &report, out.format)
            })
        }
        Command::BenchTable2 {
            replicates,
            bootstrap,
            seed,
            n,
            degree,
            sd,
            alpha,
            eval_points,
            out,
        } => {
            let config = ExperimentConfig {
                n,
                degree,
                sd,
                bootstrap,
                replicates,
                alpha,
                eval_points,
                seed,
                ..ExperimentConfig::default()
            };
            let rows = parallel::bench_table2(&config)?;
            emit(&out, Path::new(""), Some(seed), |w| {
                export::write_experiment(w, &rows, out.format)
            })
        }
    }
}

fn load(input: &Input) -> Result<FunctionalSample> {
    Ok(csvio::load_sample_path(&input.input)?)
}

fn emit_envelope(
    sample: &FunctionalSample,
    env: &Envelope,
    input: &Input,
    out: &Output,
    plot: &Plot,
    name: &str,
) -> Result<()> {
    emit(out, &input.input, None, |w| {
        export::write_envelope(w, sample, env, out.format)
    })?;
    if let Some(mut pw) = plot_writer(plot, name)? {
        pw.envelope("envelope", sample.grid(), env)?;
        pw.curves(sample, |i| {
            if env.members.contains(&i) {
                "member"
            } else {
                "curve"
            }
        })?;
    }
    Ok(())
}

fn plot_writer(plot: &Plot, name: &str) -> Result<Option<PlotWriter>> {
    let Some(dir) = &plot.plot_dir else {
        return Ok(None);
    };
    let stem = plot.plot_stem.as_deref().unwrap_or(name);
    Ok(Some(PlotWriter::new(dir, stem)?))
}

fn guard_input(output: &Path, input: &Path) -> Result<()> {
    if let (Ok(a), Ok(b)) = (output.canonicalize(), input.canonicalize()) {
        if a == b {
            bail!("refusing to overwrite the input file {}", input.display());
        }
    }
    Ok(())
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(file);
    body(&mut w)
        .and_then(|_| w.flush())
        .with_context(|| format!("cannot write {}", path.display()))
}

/// Writes a result to `--output` or stdout. Seeded results carry the seed:
/// a `# seed: N` line before CSV, a `{seed, result}` wrapper around JSON.
fn emit(
    out: &Output,
    input: &Path,
    seed: Option<u64>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<()> {
    let mut buf = Vec::new();
    match (seed, out.format) {
        (Some(seed), Format::Json) => {
            body(&mut buf)?;
            let result: serde_json::Value = serde_json::from_slice(&buf)?;
            buf.clear();
            serde_json::to_writer_pretty(
                &mut buf,
                &serde_json::json!({ "seed": seed, "result": result }),
            )?;
            buf.push(b'\n');
        }
        (Some(seed), Format::Csv) => {
            writeln!(buf, "# seed: {seed}")?;
            body(&mut buf)?;
        }
        (None, _) => body(&mut buf)?,
    }
    match &out.output {
        Some(path) => {
            guard_input(path, input)?;
            write_file(path, |w| w.write_all(&buf))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(&buf)?;
            lock.flush()?;
            Ok(())
        }
    }
}
