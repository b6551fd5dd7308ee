//! CSV reading and writing of functional samples and regression data.
//!
//! Sample files have a header `t,<name1>,...,<nameN>` and one row per grid
//! point. A column named exactly `__weight` carries grid weights. Lines
//! starting with `#` are comments.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use extremal_depth::{normalize_grid, FunctionalSample, GridWeights, SampleError, Violation};

pub const WEIGHT_COLUMN: &str = "__weight";

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot open {path}")]
    Open {
        path: String,
        source: std::io::Error,
    },
    #[error("input is empty")]
    Empty,
    #[error("header needs a grid column and at least one function column")]
    NoFunctions,
    #[error("row {row}: expected {expected} cells, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {column} ({name}): empty cell")]
    Blank {
        row: usize,
        column: usize,
        name: String,
    },
    #[error("row {row}, column {column} ({name}): cannot parse {text:?} as a number")]
    NotNumeric {
        row: usize,
        column: usize,
        name: String,
        text: String,
    },
    #[error("row {row}: {violation}")]
    AtRow { row: usize, violation: Violation },
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

struct Table {
    header: Vec<String>,
    // (1-based file line, cells)
    rows: Vec<(usize, Vec<f64>)>,
}

fn read_table(source: impl Read) -> Result<Table, LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = reader.records();
    let header: Vec<String> = match records.next() {
        None => return Err(LoadError::Empty),
        Some(r) => r?.iter().map(str::to_owned).collect(),
    };
    let mut rows = Vec::new();
    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != header.len() {
            return Err(LoadError::Ragged {
                row: line,
                expected: header.len(),
                found: record.len(),
            });
        }
        let mut cells = Vec::with_capacity(record.len());
        for (c, text) in record.iter().enumerate() {
            let cell_err = |blank: bool| {
                let (column, name) = (c + 1, header[c].clone());
                if blank {
                    LoadError::Blank {
                        row: line,
                        column,
                        name,
                    }
                } else {
                    LoadError::NotNumeric {
                        row: line,
                        column,
                        name,
                        text: text.to_owned(),
                    }
                }
            };
            if text.is_empty() {
                return Err(cell_err(true));
            }
            cells.push(text.parse::<f64>().map_err(|_| cell_err(false))?);
        }
        rows.push((line, cells));
    }
    if rows.is_empty() {
        return Err(LoadError::Empty);
    }
    Ok(Table { header, rows })
}

/// Parses and validates a sample. Grids outside `[0, 1]` are rescaled onto
/// it with a warning.
pub fn load_sample(source: impl Read) -> Result<FunctionalSample, LoadError> {
    let table = read_table(source)?;
    let weight_col = table.header.iter().position(|h| h == WEIGHT_COLUMN);
    let fn_cols: Vec<usize> = (1..table.header.len())
        .filter(|&c| Some(c) != weight_col)
        .collect();
    if fn_cols.is_empty() {
        return Err(LoadError::NoFunctions);
    }
    let line_of = |point: usize| table.rows[point].0;
    let mut grid: Vec<f64> = table.rows.iter().map(|(_, r)| r[0]).collect();
    // Grid problems are reported against the file rows.
    for point in 0..grid.len() {
        if !grid[point].is_finite() {
            return Err(LoadError::AtRow {
                row: line_of(point),
                violation: Violation::NonFiniteGrid { point },
            });
        }
        if point > 0 && grid[point] <= grid[point - 1] {
            return Err(LoadError::AtRow {
                row: line_of(point),
                violation: Violation::GridNotIncreasing { point },
            });
        }
    }
    if normalize_grid(&mut grid) {
        log::warn!("grid lies outside [0, 1]; rescaled affinely onto [0, 1]");
    }
    let values: Vec<Vec<f64>> = fn_cols
        .iter()
        .map(|&c| table.rows.iter().map(|(_, r)| r[c]).collect())
        .collect();
    let labels = fn_cols.iter().map(|&c| table.header[c].clone()).collect();
    let weights = match weight_col {
        Some(c) => GridWeights::Custom(table.rows.iter().map(|(_, r)| r[c]).collect()),
        None => GridWeights::Uniform,
    };
    Ok(FunctionalSample::from_raw(grid, values, weights, Some(labels)).checked()?)
}

pub fn load_sample_path(path: &Path) -> Result<FunctionalSample, LoadError> {
    load_sample(BufReader::new(open(path)?))
}

fn open(path: &Path) -> Result<File, LoadError> {
    File::open(path).map_err(|source| LoadError::Open {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the sample in the format [`load_sample`] reads. Values use the
/// shortest decimal form that parses back to the same `f64`.
pub fn save_sample(mut out: impl Write, sample: &FunctionalSample) -> std::io::Result<()> {
    let mut header = vec!["t".to_owned()];
    header.extend((0..sample.n()).map(|i| sample.label(i)));
    let custom = match sample.weights() {
        GridWeights::Custom(w) => Some(w),
        GridWeights::Uniform => None,
    };
    if custom.is_some() {
        header.push(WEIGHT_COLUMN.to_owned());
    }
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(&header)?;
    for j in 0..sample.m() {
        let mut row = vec![sample.grid()[j].to_string()];
        row.extend((0..sample.n()).map(|i| sample.value(i, j).to_string()));
        if let Some(weights) = custom {
            row.push(weights[j].to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Regression data: the `x` and `y` columns of a CSV with a header.
pub fn load_xy(source: impl Read) -> Result<(Vec<f64>, Vec<f64>), LoadError> {
    let table = read_table(source)?;
    let col = |name: &str| {
        table
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| LoadError::MissingColumn(name.to_owned()))
    };
    let (cx, cy) = (col("x")?, col("y")?);
    Ok(table.rows.iter().map(|(_, r)| (r[cx], r[cy])).unzip())
}

pub fn load_xy_path(path: &Path) -> Result<(Vec<f64>, Vec<f64>), LoadError> {
    load_xy(BufReader::new(open(path)?))
}
