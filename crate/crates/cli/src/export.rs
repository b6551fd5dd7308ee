//! Machine-readable result files (CSV and JSON).

use std::io::{self, Write};

use serde::Serialize;

use extremal_depth::bands::{Band, ExperimentRow};
use extremal_depth::boxplot::FBoxplot;
use extremal_depth::depth::{rank_sample, DepthError, DepthIndex, DepthMethod, Ranking};
use extremal_depth::region::{Envelope, WidthRow};
use extremal_depth::sim::BenchmarkReport;
use extremal_depth::{Frac, FunctionalSample};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Exact rational as `{num, den}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl From<Frac> for Rational {
    fn from(f: Frac) -> Self {
        Rational {
            num: f.num,
            den: f.den,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthRecord {
    pub label: String,
    pub ed: Rational,
    pub id: f64,
    /// Missing for a single-function sample.
    pub mbd: Option<f64>,
    pub d_min: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<Rational>>,
}

/// ED, ID, MBD and minimum pointwise depth of every member.
pub fn depth_records(
    sample: &FunctionalSample,
    with_profile: bool,
) -> Result<Vec<DepthRecord>, DepthError> {
    let ranking = rank_sample(sample);
    let id = DepthMethod::Integrated.member_scores(sample)?;
    let mbd = if sample.n() >= 2 {
        Some(DepthMethod::ModifiedBand.member_scores(sample)?)
    } else {
        None
    };
    let index = DepthIndex::new(sample);
    (0..sample.n())
        .map(|i| {
            let profile = index.profile(sample.function(i))?;
            Ok(DepthRecord {
                label: sample.label(i),
                ed: ranking.ed[i].into(),
                id: id[i],
                mbd: mbd.as_ref().map(|v| v[i]),
                d_min: profile.min_level().into(),
                profile: with_profile.then(|| profile.levels().map(Rational::from).collect()),
            })
        })
        .collect()
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

fn json(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn frac_text(r: Rational) -> String {
    format!("{}/{}", r.num, r.den)
}

fn opt_text(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_depths(
    out: &mut dyn Write,
    records: &[DepthRecord],
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Json => json(out, &records),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["label", "ed", "id", "mbd", "d_min"])?;
            for r in records {
                w.write_record([
                    r.label.clone(),
                    frac_text(r.ed),
                    r.id.to_string(),
                    opt_text(r.mbd),
                    frac_text(r.d_min),
                ])?;
            }
            w.flush()
        }
    }
}

#[derive(Serialize)]
struct RankEntry {
    rank: usize,
    index: usize,
    label: String,
    ed: Rational,
}

/// Functions from deepest (rank 1) to most extreme.
pub fn write_ranking(
    out: &mut dyn Write,
    sample: &FunctionalSample,
    ranking: &Ranking,
    format: Format,
) -> io::Result<()> {
    let entries: Vec<RankEntry> = ranking
        .deepest_first()
        .into_iter()
        .enumerate()
        .map(|(k, i)| RankEntry {
            rank: k + 1,
            index: i,
            label: sample.label(i),
            ed: ranking.ed[i].into(),
        })
        .collect();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                medians: Vec<String>,
                ranking: Vec<RankEntry>,
            }
            let medians = ranking.medians().iter().map(|&i| sample.label(i)).collect();
            json(
                out,
                &Doc {
                    medians,
                    ranking: entries,
                },
            )
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["rank", "index", "label", "ed"])?;
            for e in entries {
                w.write_record([
                    e.rank.to_string(),
                    e.index.to_string(),
                    e.label,
                    frac_text(e.ed),
                ])?;
            }
            w.flush()
        }
    }
}

/// `t,lower,upper` rows.
pub fn write_envelope_csv(out: &mut dyn Write, grid: &[f64], env: &Envelope) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["t", "lower", "upper"])?;
    for (j, t) in grid.iter().enumerate() {
        w.write_record([
            t.to_string(),
            env.lower[j].to_string(),
            env.upper[j].to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_envelope(
    out: &mut dyn Write,
    sample: &FunctionalSample,
    env: &Envelope,
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Csv => write_envelope_csv(out, sample.grid(), env),
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                level: f64,
                t: &'a [f64],
                lower: &'a [f64],
                upper: &'a [f64],
                members: &'a [usize],
                member_labels: Vec<String>,
            }
            json(
                out,
                &Doc {
                    level: env.level,
                    t: sample.grid(),
                    lower: &env.lower,
                    upper: &env.upper,
                    members: &env.members,
                    member_labels: env.members.iter().map(|&i| sample.label(i)).collect(),
                },
            )
        }
    }
}

/// `t,width,sd` rows.
pub fn write_diagnostic(out: &mut dyn Write, rows: &[WidthRow]) -> io::Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["t", "width", "sd"])?;
    for r in rows {
        w.write_record([r.t.to_string(), r.width.to_string(), r.sd.to_string()])?;
    }
    w.flush()
}

pub fn write_boxplot(
    out: &mut dyn Write,
    sample: &FunctionalSample,
    bp: &FBoxplot,
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct BoxPart<'a> {
                t: &'a [f64],
                lower: &'a [f64],
                upper: &'a [f64],
            }
            #[derive(Serialize)]
            struct Fences<'a> {
                lower: &'a [f64],
                upper: &'a [f64],
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                method: &'static str,
                median: usize,
                #[serde(rename = "box")]
                boxed: BoxPart<'a>,
                fences: Fences<'a>,
                outliers: &'a [usize],
                outlier_labels: Vec<String>,
            }
            json(
                out,
                &Doc {
                    method: bp.method.short_name(),
                    median: bp.median,
                    boxed: BoxPart {
                        t: sample.grid(),
                        lower: &bp.boxed.lower,
                        upper: &bp.boxed.upper,
                    },
                    fences: Fences {
                        lower: &bp.fence_lower,
                        upper: &bp.fence_upper,
                    },
                    outliers: &bp.outliers,
                    outlier_labels: bp.outliers.iter().map(|&i| sample.label(i)).collect(),
                },
            )
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["t", "box_lower", "box_upper", "fence_lower", "fence_upper"])?;
            for (j, t) in sample.grid().iter().enumerate() {
                w.write_record([
                    t.to_string(),
                    bp.boxed.lower[j].to_string(),
                    bp.boxed.upper[j].to_string(),
                    bp.fence_lower[j].to_string(),
                    bp.fence_upper[j].to_string(),
                ])?;
            }
            w.flush()
        }
    }
}

pub fn write_outliers(
    out: &mut dyn Write,
    sample: &FunctionalSample,
    method: DepthMethod,
    outliers: &[usize],
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Entry {
                index: usize,
                label: String,
            }
            #[derive(Serialize)]
            struct Doc {
                method: &'static str,
                outliers: Vec<Entry>,
            }
            let outliers = outliers
                .iter()
                .map(|&i| Entry {
                    index: i,
                    label: sample.label(i),
                })
                .collect();
            json(
                out,
                &Doc {
                    method: method.short_name(),
                    outliers,
                },
            )
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["index", "label"])?;
            for &i in outliers {
                w.write_record([i.to_string(), sample.label(i)])?;
            }
            w.flush()
        }
    }
}

/// `x,lower,upper,mu_hat` rows.
pub fn write_band(out: &mut dyn Write, band: &Band, format: Format) -> io::Result<()> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                method: &'static str,
                level: f64,
                x: &'a [f64],
                lower: &'a [f64],
                upper: &'a [f64],
                mu_hat: &'a [f64],
            }
            json(
                out,
                &Doc {
                    method: band.method.name(),
                    level: band.level,
                    x: &band.eval_grid,
                    lower: &band.lower,
                    upper: &band.upper,
                    mu_hat: &band.mu_hat,
                },
            )
        }
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["x", "lower", "upper", "mu_hat"])?;
            for k in 0..band.eval_grid.len() {
                w.write_record([
                    band.eval_grid[k].to_string(),
                    band.lower[k].to_string(),
                    band.upper[k].to_string(),
                    band.mu_hat[k].to_string(),
                ])?;
            }
            w.flush()
        }
    }
}

/// Report rows; the `se` column holds the SD across replicates.
pub fn write_report(
    out: &mut dyn Write,
    report: &BenchmarkReport,
    format: Format,
) -> io::Result<()> {
    #[derive(Serialize)]
    struct Row {
        model: u8,
        method: &'static str,
        metric: &'static str,
        mean: Option<f64>,
        se: Option<f64>,
        replicates: usize,
    }
    let rows: Vec<Row> = report
        .rows
        .iter()
        .map(|r| Row {
            model: r.model,
            method: r.method.short_name(),
            metric: r.metric.name(),
            mean: r.mean,
            se: r.sd,
            replicates: r.replicates,
        })
        .collect();
    match format {
        Format::Json => json(out, &rows),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["model", "method", "metric", "mean", "se", "replicates"])?;
            for r in rows {
                w.write_record([
                    r.model.to_string(),
                    r.method.to_owned(),
                    r.metric.to_owned(),
                    opt_text(r.mean),
                    opt_text(r.se),
                    r.replicates.to_string(),
                ])?;
            }
            w.flush()
        }
    }
}

pub fn write_experiment(
    out: &mut dyn Write,
    rows: &[ExperimentRow],
    format: Format,
) -> io::Result<()> {
    #[derive(Serialize)]
    struct Row {
        truth_or_alt: &'static str,
        method: &'static str,
        rate: f64,
        replicates: usize,
    }
    let rows: Vec<Row> = rows
        .iter()
        .map(|r| Row {
            truth_or_alt: r.target.name(),
            method: r.method.name(),
            rate: r.rate,
            replicates: r.replicates,
        })
        .collect();
    match format {
        Format::Json => json(out, &rows),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["truth_or_alt", "method", "rate", "replicates"])?;
            for r in rows {
                w.write_record([
                    r.truth_or_alt.to_owned(),
                    r.method.to_owned(),
                    r.rate.to_string(),
                    r.replicates.to_string(),
                ])?;
            }
            w.flush()
        }
    }
}
