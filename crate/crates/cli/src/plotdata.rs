//! Tidy CSV layers for external plotting, named `<stem>.<layer>.csv`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use extremal_depth::bands::Band;
use extremal_depth::boxplot::FBoxplot;
use extremal_depth::region::Envelope;
use extremal_depth::FunctionalSample;

use crate::export;

#[derive(Debug, thiserror::Error)]
#[error("cannot write plot data to {path}: {source}")]
pub struct PlotError {
    path: String,
    source: std::io::Error,
}

pub struct PlotWriter {
    dir: PathBuf,
    stem: String,
    written: Vec<PathBuf>,
}

impl PlotWriter {
    pub fn new(dir: &Path, stem: &str) -> Result<Self, PlotError> {
        fs::create_dir_all(dir).map_err(|source| PlotError {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(PlotWriter {
            dir: dir.to_path_buf(),
            stem: stem.to_owned(),
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn layer(
        &mut self,
        name: &str,
        body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
    ) -> Result<(), PlotError> {
        let path = self.dir.join(format!("{}.{}.csv", self.stem, name));
        let err = |source| PlotError {
            path: path.display().to_string(),
            source,
        };
        let mut out = BufWriter::new(File::create(&path).map_err(err)?);
        body(&mut out).and_then(|_| out.flush()).map_err(err)?;
        self.written.push(path);
        Ok(())
    }

    /// Long-format curves `label,t,value,role`. `role(i)` tags function `i`.
    pub fn curves(
        &mut self,
        sample: &FunctionalSample,
        role: impl Fn(usize) -> &'static str,
    ) -> Result<(), PlotError> {
        self.curve_layer("curves", sample, &(0..sample.n()).collect::<Vec<_>>(), role)
    }

    fn curve_layer(
        &mut self,
        name: &str,
        sample: &FunctionalSample,
        which: &[usize],
        role: impl Fn(usize) -> &'static str,
    ) -> Result<(), PlotError> {
        self.layer(name, |out| {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["label", "t", "value", "role"])?;
            for &i in which {
                let label = sample.label(i);
                for (j, t) in sample.grid().iter().enumerate() {
                    w.write_record([
                        label.as_str(),
                        &t.to_string(),
                        &sample.value(i, j).to_string(),
                        role(i),
                    ])?;
                }
            }
            w.flush()
        })
    }

    pub fn envelope(&mut self, name: &str, grid: &[f64], env: &Envelope) -> Result<(), PlotError> {
        self.layer(name, |out| export::write_envelope_csv(out, grid, env))
    }

    /// Layers `curves`, `box`, `fences` and `outliers`.
    pub fn boxplot(&mut self, sample: &FunctionalSample, bp: &FBoxplot) -> Result<(), PlotError> {
        let role = |i: usize| {
            if i == bp.median {
                "median"
            } else if bp.outliers.contains(&i) {
                "outlier"
            } else if bp.boxed.members.contains(&i) {
                "box"
            } else {
                "curve"
            }
        };
        self.curves(sample, role)?;
        self.envelope("box", sample.grid(), &bp.boxed)?;
        let fences = Envelope {
            lower: bp.fence_lower.clone(),
            upper: bp.fence_upper.clone(),
            members: Vec::new(),
            level: bp.boxed.level,
        };
        self.envelope("fences", sample.grid(), &fences)?;
        self.curve_layer("outliers", sample, &bp.outliers, |_| "outlier")
    }

    /// One `bands` layer with every method side by side; `bands` must share
    /// one evaluation grid and fit.
    pub fn bands(&mut self, bands: &[Band]) -> Result<(), PlotError> {
        self.layer("bands", |out| {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["x".to_owned(), "mu_hat".to_owned()];
            for b in bands {
                let name = b.method.name().to_lowercase();
                header.push(format!("{name}_lo"));
                header.push(format!("{name}_hi"));
            }
            w.write_record(&header)?;
            let Some(first) = bands.first() else {
                return w.flush();
            };
            for k in 0..first.eval_grid.len() {
                let mut row = vec![first.eval_grid[k].to_string(), first.mu_hat[k].to_string()];
                for b in bands {
                    row.push(b.lower[k].to_string());
                    row.push(b.upper[k].to_string());
                }
                w.write_record(&row)?;
            }
            w.flush()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use extremal_depth::boxplot::functional_boxplot;
    use extremal_depth::depth::DepthMethod;

    #[test]
    fn boxplot_writes_four_layers() {
        let rows = vec![
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![-0.2, 3.0],
            vec![1.2, -0.2],
        ];
        let s = FunctionalSample::on_uniform_grid(rows).unwrap();
        let bp = functional_boxplot(&s, DepthMethod::Extremal).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let mut w = PlotWriter::new(dir.path(), "fig").unwrap();
        w.boxplot(&s, &bp).unwrap();
        let names: Vec<String> = w
            .written()
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(
            names,
            [
                "fig.curves.csv",
                "fig.box.csv",
                "fig.fences.csv",
                "fig.outliers.csv"
            ]
        );
        let fences = fs::read_to_string(dir.path().join("fig.fences.csv")).unwrap();
        assert_eq!(fences, "t,lower,upper\n0,-1.5,2.5\n1,-1.5,2.5\n");
        let outliers = fs::read_to_string(dir.path().join("fig.outliers.csv")).unwrap();
        assert_eq!(outliers.lines().count(), 3);
    }
}
