//! CSV and JSON output formats, and all-or-nothing writes into an output
//! directory.
//!
//! Floats are written as `{:.16e}` (17 significant digits), which
//! round-trips every finite `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::Serialize;

use crate::ensemble::{
    chi_distribution, ChiDistribution, ChiStats, DegreeScan, EdgeRemovalScan, EnsembleConfig,
    EnsembleResult, Histogram, SizeScan,
};
use crate::error::{Error, Result};
use crate::spectral::Spectrum;
use crate::transport::{MatrixSeries, ScalarSeries};

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with a header row and one row per index of equally long columns.
pub fn columns_csv(header: &[&str], columns: &[&[f64]]) -> Result<String> {
    if header.len() != columns.len() {
        return Err(Error::param("header and column counts differ"));
    }
    let rows = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != rows) {
        return Err(Error::param("columns have different lengths"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..rows {
        for (c, col) in columns.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            out.push_str(&format_float(col[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// `t,mean_pbar,mean_pibar`.
pub fn ensemble_series_csv(result: &EnsembleResult) -> String {
    columns_csv(
        &["t", "mean_pbar", "mean_pibar"],
        &[result.grid.points(), &result.mean_pbar, &result.mean_pibar],
    )
    .expect("ensemble series columns share the grid length")
}

/// `k,j,<name>` for every entry, row-major.
pub fn matrix_csv(matrix: &Array2<f64>, name: &str) -> String {
    let mut out = format!("k,j,{name}\n");
    for ((k, j), &x) in matrix.indexed_iter() {
        let _ = writeln!(out, "{k},{j},{}", format_float(x));
    }
    out
}

pub fn chi_csv(chi: &Array2<f64>) -> String {
    matrix_csv(chi, "chi")
}

fn histogram_rows(out: &mut String, part: &str, h: &Histogram) {
    let _ = writeln!(out, "{part},-inf,{},{}", format_float(h.lo), h.underflow);
    for (i, &c) in h.counts.iter().enumerate() {
        let lo = h.lo + i as f64 * h.bin_width();
        let hi = if i + 1 == h.counts.len() {
            h.hi
        } else {
            lo + h.bin_width()
        };
        let _ = writeln!(out, "{part},{},{},{c}", format_float(lo), format_float(hi));
    }
    let _ = writeln!(out, "{part},{},inf,{}", format_float(h.hi), h.overflow);
}

/// `part,lo,hi,count`; the first and last row of each part hold the
/// under- and overflow counts.
pub fn chi_hist_csv(d: &ChiDistribution) -> String {
    let mut out = String::from("part,lo,hi,count\n");
    histogram_rows(&mut out, "offdiag", &d.offdiag);
    histogram_rows(&mut out, "diag", &d.diag);
    out
}

pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, &e) in s.eigenvalues().iter().enumerate() {
        let _ = writeln!(out, "{i},{}", format_float(e));
    }
    out
}

/// Eigenvector matrix row-major: row `k` holds component `k` of every
/// eigenvector, column `i` is eigenvector `i`.
pub fn vectors_csv(s: &Spectrum) -> String {
    let q = s.eigenvectors();
    let header: Vec<String> = (0..q.ncols()).map(|i| format!("q{i}")).collect();
    let mut out = header.join(",");
    out.push('\n');
    for row in q.rows() {
        let cells: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `t,value`.
pub fn scalar_series_csv(series: &ScalarSeries) -> String {
    columns_csv(&["t", "value"], &[series.grid.points(), &series.values])
        .expect("series values match the grid")
}

/// `t,k,j,value`.
pub fn matrix_series_csv(series: &MatrixSeries) -> String {
    let mut out = String::from("t,k,j,value\n");
    for (&t, m) in series.grid.points().iter().zip(&series.values) {
        let ts = format_float(t);
        for ((k, j), &x) in m.indexed_iter() {
            let _ = writeln!(out, "{ts},{k},{j},{}", format_float(x));
        }
    }
    out
}

/// `k,er_mean,er_std,config_mean,config_std`.
pub fn degree_scan_csv(scan: &DegreeScan) -> String {
    model_pair_csv(
        "k",
        scan.rows.iter().map(|r| (r.parameter, &r.er, &r.config)),
    )
}

/// `n,er_mean,er_std,config_mean,config_std`.
pub fn size_scan_csv(scan: &SizeScan) -> String {
    model_pair_csv(
        "n",
        scan.rows.iter().map(|r| (r.parameter, &r.er, &r.config)),
    )
}

fn model_pair_csv<'a>(
    name: &str,
    rows: impl Iterator<Item = (f64, &'a ChiStats, &'a ChiStats)>,
) -> String {
    let mut out = format!("{name},er_mean,er_std,config_mean,config_std\n");
    for (p, er, cfg) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p as u64,
            format_float(er.mean),
            format_float(er.std),
            format_float(cfg.mean),
            format_float(cfg.std)
        );
    }
    out
}

/// `m,mean,std`.
pub fn edge_removal_csv(scan: &EdgeRemovalScan) -> String {
    let mut out = String::from("m,mean,std\n");
    for r in &scan.rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            r.m,
            format_float(r.stats.mean),
            format_float(r.stats.std)
        );
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// `series.csv`, `chi.csv`, `chi_hist.csv` and `manifest.json` for one ensemble run.
pub fn ensemble_outputs(cfg: &EnsembleConfig, result: &EnsembleResult) -> Result<OutputSet> {
    let h = cfg.histogram;
    let dist = chi_distribution(&result.mean_chi, h.bins, h.offdiag_range, h.diag_range)?;
    let mut set = OutputSet::new();
    set.add("series.csv", ensemble_series_csv(result));
    set.add("chi.csv", chi_csv(&result.mean_chi));
    set.add("chi_hist.csv", chi_hist_csv(&dist));
    set.add("manifest.json", to_json(&result.manifest)?);
    Ok(set)
}

/// Header and numeric rows of a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Table> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty CSV".into()))?
            .split(',')
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|cell| {
                    cell.trim().parse::<f64>().map_err(|_| {
                        Error::Parse(format!("row {}: `{cell}` is not a number", i + 2))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != header.len() {
                return Err(Error::Parse(format!(
                    "row {} has {} cells, header has {}",
                    i + 2,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Table { header, rows })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let c = self.header.iter().position(|h| h == name).ok_or_else(|| {
            Error::Parse(format!("no column `{name}` in [{}]", self.header.join(",")))
        })?;
        Ok(self.rows.iter().map(|r| r[c]).collect())
    }

    /// `(first column, named column)` pairs; `None` picks the second column.
    pub fn series(&self, column: Option<&str>) -> Result<Vec<(f64, f64)>> {
        if self.header.len() < 2 {
            return Err(Error::Parse("series CSV needs at least two columns".into()));
        }
        let ys = match column {
            Some(name) => self.column(name)?,
            None => self.rows.iter().map(|r| r[1]).collect(),
        };
        Ok(self.rows.iter().map(|r| r[0]).zip(ys).collect())
    }
}

/// Named files destined for one directory, written all-or-nothing.
#[derive(Debug, Clone, Default)]
pub struct OutputSet {
    files: Vec<(String, String)>,
}

impl OutputSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, contents: impl Into<String>) {
        self.files.push((name.into(), contents.into()));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.as_str())
    }

    /// Writes every file to a temporary name inside `dir`, then renames
    /// them into place. On failure the temporaries are removed.
    pub fn commit(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        for (name, _) in &self.files {
            let plain = Path::new(name)
                .file_name()
                .map(|f| f == name.as_str())
                .unwrap_or(false);
            if !plain || name.starts_with('.') {
                return Err(Error::param(format!(
                    "output name `{name}` must be a plain file name"
                )));
            }
        }
        fs::create_dir_all(dir)?;
        let pid = std::process::id();
        let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(self.files.len());
        let result = (|| -> Result<()> {
            for (name, contents) in &self.files {
                let tmp = dir.join(format!(".{name}.tmp{pid}"));
                staged.push((tmp.clone(), dir.join(name)));
                fs::write(&tmp, contents)?;
            }
            Ok(())
        })();
        if let Err(e) = result {
            for (tmp, _) in &staged {
                let _ = fs::remove_file(tmp);
            }
            return Err(e);
        }
        let mut done = Vec::with_capacity(staged.len());
        for (i, (tmp, dest)) in staged.iter().enumerate() {
            if let Err(e) = fs::rename(tmp, dest) {
                for (t, _) in &staged[i..] {
                    let _ = fs::remove_file(t);
                }
                return Err(e.into());
            }
            done.push(dest.clone());
        }
        Ok(done)
    }
}

/// Writes a single file atomically via a temporary sibling.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::param(format!("`{}` is not a file path", path.display())))?;
    let mut set = OutputSet::new();
    set.add(name, contents);
    set.commit(&dir).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [
            0.0,
            -0.0,
            1.0 / 3.0,
            1e-300,
            5e-324,
            f64::MAX,
            0.9802,
            -2.5e17,
        ] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn table_parse() {
        let t = Table::parse("t,a,b\n1,2,3\n4,5,6\n").unwrap();
        assert_eq!(t.column("b").unwrap(), vec![3.0, 6.0]);
        assert_eq!(t.series(None).unwrap(), vec![(1.0, 2.0), (4.0, 5.0)]);
        assert_eq!(t.series(Some("b")).unwrap(), vec![(1.0, 3.0), (4.0, 6.0)]);
        assert!(t.column("c").is_err());
        assert!(Table::parse("t,a\n1\n").is_err());
        assert!(Table::parse("t,a\n1,x\n").is_err());
        assert!(Table::parse("").is_err());
    }

    #[test]
    fn columns_checked() {
        assert!(columns_csv(&["a"], &[&[1.0], &[2.0]]).is_err());
        assert!(columns_csv(&["a", "b"], &[&[1.0], &[2.0, 3.0]]).is_err());
        assert_eq!(
            columns_csv(&["a", "b"], &[&[1.0], &[2.0]]).unwrap(),
            "a,b\n1.0000000000000000e0,2.0000000000000000e0\n"
        );
    }

    #[test]
    fn commit_writes_everything() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("nested");
        let mut set = OutputSet::new();
        set.add("a.csv", "x\n");
        set.add("manifest.json", "{}\n");
        let paths = set.commit(&out).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(fs::read_to_string(out.join("a.csv")).unwrap(), "x\n");
        let names: Vec<_> = fs::read_dir(&out)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names.len(), 2);
    }

    #[test]
    fn commit_rejects_paths_and_cleans_up() {
        let dir = tempfile::tempdir().unwrap();
        let mut set = OutputSet::new();
        set.add("../escape.csv", "x");
        assert!(set.commit(dir.path()).is_err());
        let mut set = OutputSet::new();
        set.add("sub/a.csv", "x");
        assert!(set.commit(dir.path()).is_err());

        // A directory squatting on the second temporary name makes the
        // write fail after the first file is staged.
        let pid = std::process::id();
        fs::create_dir(dir.path().join(format!(".b.csv.tmp{pid}"))).unwrap();
        let mut set = OutputSet::new();
        set.add("a.csv", "x");
        set.add("b.csv", "y");
        assert!(set.commit(dir.path()).is_err());
        assert!(!dir.path().join("a.csv").exists());
        assert!(!dir.path().join(format!(".a.csv.tmp{pid}")).exists());
    }

    #[test]
    fn single_file_atomic() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.edges");
        write_atomic(&p, "# n=2\n0 1\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "# n=2\n0 1\n");
        assert!(write_atomic(&dir.path().join(".hidden"), "x").is_err());
    }
}
