//! Ensemble averages over independent graph realizations and the
//! parameter scans built on them.
//!
//! Realizations are independent work units. They may run on any number of
//! workers, but every reduction happens afterwards in ascending realization
//! index, so results are bit-identical for any worker count.

use std::time::Instant;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_line, LineFit};
use crate::generate::{ConnectivityPolicy, GraphModel, CONFIG_RETRY_CAP, CONNECTED_RESAMPLE_CAP};
use crate::rng::{derive_seed, RNG_ALGORITHM, RNG_VERSION, SEED_DERIVATION};
use crate::spectral::{self, DEGENERACY_REL_TOL, MAX_SWEEPS, OFFDIAG_REL_TOL};
use crate::transport::{self, GridSpec, TimeGrid};

/// Realizations handed to the worker pool at once.
const CHUNK: usize = 32;

pub const DEFAULT_REALIZATIONS: usize = 100;
pub const DEFAULT_BINS: usize = 50;
pub const DEFAULT_OFFDIAG_RANGE: (f64, f64) = (0.005, 0.015);
pub const DEFAULT_DIAG_RANGE: (f64, f64) = (0.02, 0.1);
/// Window of removed-edge counts used for the exponential fit.
pub const DEFAULT_REMOVAL_WINDOW: (f64, f64) = (0.0, 200.0);

fn default_realizations() -> usize {
    DEFAULT_REALIZATIONS
}

fn default_grid() -> GridSpec {
    GridSpec::PLATEAU
}

fn default_degeneracy_tol() -> f64 {
    DEGENERACY_REL_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub bins: usize,
    pub offdiag_range: (f64, f64),
    pub diag_range: (f64, f64),
}

impl Default for HistogramSpec {
    fn default() -> Self {
        HistogramSpec {
            bins: DEFAULT_BINS,
            offdiag_range: DEFAULT_OFFDIAG_RANGE,
            diag_range: DEFAULT_DIAG_RANGE,
        }
    }
}

/// Everything needed to reproduce an ensemble run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub model: GraphModel,
    /// Master seed; realization `r` uses `derive_seed(seed, r)`.
    pub seed: u64,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default = "default_grid")]
    pub grid: GridSpec,
    /// Degeneracy tolerance relative to `max(1, E_max)` of each spectrum.
    #[serde(default = "default_degeneracy_tol")]
    pub degeneracy_tol: f64,
    #[serde(default)]
    pub connectivity: ConnectivityPolicy,
    #[serde(default)]
    pub histogram: HistogramSpec,
}

impl EnsembleConfig {
    pub fn new(model: GraphModel, seed: u64, realizations: usize) -> Self {
        EnsembleConfig {
            model,
            seed,
            realizations,
            grid: default_grid(),
            degeneracy_tol: default_degeneracy_tol(),
            connectivity: ConnectivityPolicy::None,
            histogram: HistogramSpec::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        if self.realizations == 0 {
            return Err(Error::param("realizations must be at least 1"));
        }
        if !(self.degeneracy_tol > 0.0 && self.degeneracy_tol.is_finite()) {
            return Err(Error::param(format!(
                "degeneracy_tol must be positive, got {}",
                self.degeneracy_tol
            )));
        }
        self.grid.build()?;
        Histogram::new(self.histogram.offdiag_range, self.histogram.bins)?;
        Histogram::new(self.histogram.diag_range, self.histogram.bins)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RngInfo {
    pub algorithm: String,
    pub version: String,
    pub seed_derivation: String,
}

impl Default for RngInfo {
    fn default() -> Self {
        RngInfo {
            algorithm: RNG_ALGORITHM.into(),
            version: RNG_VERSION.into(),
            seed_derivation: SEED_DERIVATION.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub degeneracy_rel: f64,
    pub jacobi_offdiag_rel: f64,
    pub jacobi_max_sweeps: usize,
    pub config_retry_cap: u64,
    pub connected_resample_cap: u64,
}

impl Tolerances {
    fn with_degeneracy(degeneracy_rel: f64) -> Self {
        Tolerances {
            degeneracy_rel,
            jacobi_offdiag_rel: OFFDIAG_REL_TOL,
            jacobi_max_sweeps: MAX_SWEEPS,
            config_retry_cap: CONFIG_RETRY_CAP,
            connected_resample_cap: CONNECTED_RESAMPLE_CAP,
        }
    }
}

/// Provenance for one run. `command` plus `config` is enough to rerun it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact: String,
    pub artifact_version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub master_seed: u64,
    pub rng: RngInfo,
    pub tolerances: Tolerances,
    /// Seeds actually used, in evaluation order.
    pub derived_seeds: Vec<u64>,
    /// Disconnected draws discarded per realization (same order).
    pub resample_counts: Vec<u64>,
    pub workers: usize,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config: serde_json::Value,
        master_seed: u64,
        degeneracy_rel: f64,
    ) -> Self {
        RunManifest {
            artifact: "qwalk".into(),
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            master_seed,
            rng: RngInfo::default(),
            tolerances: Tolerances::with_degeneracy(degeneracy_rel),
            derived_seeds: Vec::new(),
            resample_counts: Vec::new(),
            workers: rayon::current_num_threads(),
            wall_clock_seconds: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub grid: TimeGrid,
    /// `⟨p̄(t)⟩` over the grid.
    pub mean_pbar: Vec<f64>,
    /// `⟨π̄(t)⟩` over the grid.
    pub mean_pibar: Vec<f64>,
    /// Element-wise mean of the per-realization `χ` matrices. Node labels
    /// are arbitrary in every realization, so off-diagonal entries average
    /// out to a near-uniform field.
    pub mean_chi: Array2<f64>,
    pub mean_chi_bar: f64,
    pub per_realization_chi_bar: Vec<f64>,
    pub manifest: RunManifest,
}

impl EnsembleResult {
    /// Mean and standard deviation of `⟨π̄(t)⟩` over the last quarter of the grid.
    pub fn quantum_plateau(&self) -> (f64, f64) {
        transport::plateau(&transport::ScalarSeries {
            grid: self.grid.clone(),
            kind: transport::SeriesKind::Quantum,
            values: self.mean_pibar.clone(),
        })
    }
}

struct RealizationOutput {
    seed: u64,
    resamples: u64,
    pbar: Vec<f64>,
    pibar: Vec<f64>,
    chi: Array2<f64>,
    chi_bar: f64,
}

fn spectrum_for(
    model: &GraphModel,
    seed: u64,
    policy: ConnectivityPolicy,
    degeneracy_rel: f64,
) -> Result<(spectral::Spectrum, u64)> {
    let sampled = model.sample(seed, policy)?;
    let spectrum = spectral::eigendecompose(&spectral::laplacian(&sampled.graph))?;
    let tol = degeneracy_rel
        * spectrum
            .eigenvalues()
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(1.0);
    Ok((spectrum.with_degeneracy_tol(tol), sampled.resamples))
}

fn run_realization(
    cfg: &EnsembleConfig,
    grid: &TimeGrid,
    index: usize,
) -> Result<RealizationOutput> {
    let seed = derive_seed(cfg.seed, index as u64);
    let (spectrum, resamples) =
        spectrum_for(&cfg.model, seed, cfg.connectivity, cfg.degeneracy_tol)?;
    let pbar = transport::avg_return_classical(&spectrum, grid).values;
    let pibar = transport::avg_return_quantum(&spectrum, grid).values;
    let lt = transport::long_time_average(&spectrum);
    Ok(RealizationOutput {
        seed,
        resamples,
        pbar,
        pibar,
        chi: lt.chi,
        chi_bar: lt.chi_bar,
    })
}

/// Runs `f(0..count)` on the current rayon pool in chunks and feeds the
/// results to `sink` in index order.
fn ordered_map<T, F, S>(count: usize, f: F, mut sink: S) -> Result<()>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
    S: FnMut(usize, T),
{
    let mut start = 0;
    while start < count {
        let end = (start + CHUNK).min(count);
        let chunk: Vec<Result<T>> = (start..end).into_par_iter().map(&f).collect();
        for (offset, item) in chunk.into_iter().enumerate() {
            let index = start + offset;
            let value = item.map_err(|e| Error::Realization {
                index,
                source: Box::new(e),
            })?;
            sink(index, value);
        }
        start = end;
    }
    Ok(())
}

/// Runs `f` on a dedicated pool of `workers` threads (`None`: rayon default).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::param("worker count must be at least 1")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::param(format!("cannot build worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleResult> {
    cfg.validate()?;
    let started = Instant::now();
    let grid = cfg.grid.build()?;
    let n = cfg.model.node_count();
    let r = cfg.realizations;

    let mut sum_pbar = vec![0.0; grid.len()];
    let mut sum_pibar = vec![0.0; grid.len()];
    let mut sum_chi = Array2::<f64>::zeros((n, n));
    let mut chi_bars = Vec::with_capacity(r);
    let mut manifest = RunManifest::new(
        "ensemble",
        serde_json::to_value(cfg)?,
        cfg.seed,
        cfg.degeneracy_tol,
    );

    ordered_map(
        r,
        |index| run_realization(cfg, &grid, index),
        |_, out| {
            for (acc, v) in sum_pbar.iter_mut().zip(&out.pbar) {
                *acc += v;
            }
            for (acc, v) in sum_pibar.iter_mut().zip(&out.pibar) {
                *acc += v;
            }
            sum_chi += &out.chi;
            chi_bars.push(out.chi_bar);
            manifest.derived_seeds.push(out.seed);
            manifest.resample_counts.push(out.resamples);
        },
    )?;

    let rf = r as f64;
    let mean_chi_bar = chi_bars.iter().sum::<f64>() / rf;
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    Ok(EnsembleResult {
        grid,
        mean_pbar: sum_pbar.into_iter().map(|s| s / rf).collect(),
        mean_pibar: sum_pibar.into_iter().map(|s| s / rf).collect(),
        mean_chi: sum_chi / rf,
        mean_chi_bar,
        per_realization_chi_bar: chi_bars,
        manifest,
    })
}

/// Fixed-width histogram with explicit under- and overflow counts, so the
/// total always equals the number of samples added.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub fn new(range: (f64, f64), bins: usize) -> Result<Self> {
        let (lo, hi) = range;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::param(format!(
                "histogram range [{lo}, {hi}] is empty"
            )));
        }
        if bins == 0 {
            return Err(Error::param("histogram needs at least one bin"));
        }
        Ok(Histogram {
            lo,
            hi,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn add(&mut self, x: f64) {
        if x < self.lo {
            self.underflow += 1;
        } else if x > self.hi {
            self.overflow += 1;
        } else {
            let bins = self.counts.len();
            let i = (((x - self.lo) / (self.hi - self.lo)) * bins as f64) as usize;
            self.counts[i.min(bins - 1)] += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.bin_width()
    }

    /// Centre of the fullest in-range bin (first on ties).
    pub fn peak_center(&self) -> Option<f64> {
        let (i, &c) = self
            .counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
        (c > 0).then(|| self.bin_center(i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiDistribution {
    /// `⟨χ_kj⟩`, `k ≠ j`.
    pub offdiag: Histogram,
    /// `⟨χ_jj⟩`.
    pub diag: Histogram,
}

pub fn chi_distribution(
    mean_chi: &Array2<f64>,
    bins: usize,
    offdiag_range: (f64, f64),
    diag_range: (f64, f64),
) -> Result<ChiDistribution> {
    let mut offdiag = Histogram::new(offdiag_range, bins)?;
    let mut diag = Histogram::new(diag_range, bins)?;
    for ((k, j), &x) in mean_chi.indexed_iter() {
        if k == j {
            diag.add(x);
        } else {
            offdiag.add(x);
        }
    }
    Ok(ChiDistribution { offdiag, diag })
}

/// Sample statistics of `χ̄` over realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiStats {
    pub mean: f64,
    pub std: f64,
    pub per_realization: Vec<f64>,
}

impl ChiStats {
    fn from_values(values: Vec<f64>) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        ChiStats {
            mean,
            std,
            per_realization: values,
        }
    }
}

/// `⟨χ̄⟩` over `realizations` draws of `model`, seeded from `seed`.
/// Only the diagonal of `χ` is formed, in O(N²) per realization.
pub fn chi_bar_ensemble(
    model: &GraphModel,
    seed: u64,
    realizations: usize,
    manifest: &mut RunManifest,
) -> Result<ChiStats> {
    model.validate()?;
    if realizations == 0 {
        return Err(Error::param("realizations must be at least 1"));
    }
    let degeneracy_rel = manifest.tolerances.degeneracy_rel;
    let mut values = Vec::with_capacity(realizations);
    ordered_map(
        realizations,
        |index| {
            let s = derive_seed(seed, index as u64);
            let (spectrum, resamples) =
                spectrum_for(model, s, ConnectivityPolicy::None, degeneracy_rel)?;
            Ok((s, resamples, transport::long_time_chi_bar(&spectrum)))
        },
        |_, (s, resamples, chi_bar)| {
            values.push(chi_bar);
            manifest.derived_seeds.push(s);
            manifest.resample_counts.push(resamples);
        },
    )?;
    Ok(ChiStats::from_values(values))
}

/// Master seed for scan point `point` and model family `family`.
pub fn scan_point_seed(master: u64, point: usize, family: u64) -> u64 {
    derive_seed(derive_seed(master, point as u64), family)
}

const FAMILY_ER: u64 = 0;
const FAMILY_CONFIG: u64 = 1;
const FAMILY_REMOVAL: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelPair {
    pub parameter: f64,
    pub er: ChiStats,
    pub config: ChiStats,
}

/// Parameters of a scan as recorded in its manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scan", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScanConfig {
    Degree {
        n: usize,
        degrees: Vec<usize>,
        realizations: usize,
        seed: u64,
    },
    Size {
        sizes: Vec<usize>,
        degree: usize,
        realizations: usize,
        seed: u64,
        window: Option<(f64, f64)>,
    },
    EdgeRemoval {
        n: usize,
        m_values: Vec<usize>,
        realizations: usize,
        seed: u64,
        window: (f64, f64),
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeScan {
    pub n: usize,
    pub rows: Vec<ModelPair>,
    pub manifest: RunManifest,
}

/// `⟨χ̄⟩` against degree for ER (`p = k/(N-1)`) and k-regular graphs.
pub fn scan_chi_vs_degree(
    n: usize,
    degrees: &[usize],
    realizations: usize,
    seed: u64,
) -> Result<DegreeScan> {
    if degrees.is_empty() {
        return Err(Error::param("degree list is empty"));
    }
    let er_of = |k: usize| GraphModel::Er {
        n,
        p: k as f64 / (n as f64 - 1.0),
    };
    for &k in degrees {
        er_of(k).validate()?;
        GraphModel::Config { n, k }.validate()?;
    }
    let started = Instant::now();
    let config = serde_json::to_value(ScanConfig::Degree {
        n,
        degrees: degrees.to_vec(),
        realizations,
        seed,
    })?;
    let mut manifest = RunManifest::new("scan", config, seed, DEGENERACY_REL_TOL);
    let mut rows = Vec::with_capacity(degrees.len());
    for (i, &k) in degrees.iter().enumerate() {
        let er = chi_bar_ensemble(
            &er_of(k),
            scan_point_seed(seed, i, FAMILY_ER),
            realizations,
            &mut manifest,
        )?;
        let config = chi_bar_ensemble(
            &GraphModel::Config { n, k },
            scan_point_seed(seed, i, FAMILY_CONFIG),
            realizations,
            &mut manifest,
        )?;
        rows.push(ModelPair {
            parameter: k as f64,
            er,
            config,
        });
    }
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    Ok(DegreeScan { n, rows, manifest })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeScan {
    pub degree: usize,
    pub rows: Vec<ModelPair>,
    /// Fit of `ln⟨χ̄⟩` against `ln N`; the slope is the scaling exponent.
    pub er_fit: LineFit,
    pub config_fit: LineFit,
    pub window: (f64, f64),
    pub manifest: RunManifest,
}

/// `⟨χ̄⟩` against network size at fixed degree, with log-log fits over
/// the sizes inside `window` (`None`: all sizes).
pub fn scan_chi_vs_size(
    sizes: &[usize],
    degree: usize,
    realizations: usize,
    seed: u64,
    window: Option<(f64, f64)>,
) -> Result<SizeScan> {
    if sizes.len() < 2 {
        return Err(Error::param("size scan needs at least two sizes"));
    }
    for &n in sizes {
        if n <= degree {
            return Err(Error::param(format!(
                "size {n} must exceed the degree {degree}"
            )));
        }
        GraphModel::Config { n, k: degree }.validate()?;
    }
    let started = Instant::now();
    let config = serde_json::to_value(ScanConfig::Size {
        sizes: sizes.to_vec(),
        degree,
        realizations,
        seed,
        window,
    })?;
    let mut manifest = RunManifest::new("scan", config, seed, DEGENERACY_REL_TOL);
    let mut rows = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let er_model = GraphModel::Er {
            n,
            p: degree as f64 / (n as f64 - 1.0),
        };
        let er = chi_bar_ensemble(
            &er_model,
            scan_point_seed(seed, i, FAMILY_ER),
            realizations,
            &mut manifest,
        )?;
        let config = chi_bar_ensemble(
            &GraphModel::Config { n, k: degree },
            scan_point_seed(seed, i, FAMILY_CONFIG),
            realizations,
            &mut manifest,
        )?;
        rows.push(ModelPair {
            parameter: n as f64,
            er,
            config,
        });
    }
    let lo = sizes.iter().copied().min().unwrap_or(0) as f64;
    let hi = sizes.iter().copied().max().unwrap_or(0) as f64;
    let window = window.unwrap_or((lo, hi));
    let inside: Vec<&ModelPair> = rows
        .iter()
        .filter(|r| r.parameter >= window.0 && r.parameter <= window.1)
        .collect();
    let xs: Vec<f64> = inside.iter().map(|r| r.parameter.ln()).collect();
    let er_fit = fit_line(
        &xs,
        &inside.iter().map(|r| r.er.mean.ln()).collect::<Vec<_>>(),
    )?;
    let config_fit = fit_line(
        &xs,
        &inside
            .iter()
            .map(|r| r.config.mean.ln())
            .collect::<Vec<_>>(),
    )?;
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    Ok(SizeScan {
        degree,
        rows,
        er_fit,
        config_fit,
        window,
        manifest,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFit {
    /// Decay rate `β` in `⟨χ̄⟩ ≈ c·e^{-βm}`.
    pub beta: f64,
    pub prefactor: f64,
    pub window: (f64, f64),
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovalRow {
    pub m: usize,
    pub stats: ChiStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRemovalScan {
    pub n: usize,
    pub rows: Vec<RemovalRow>,
    pub fit: ExponentialFit,
    pub manifest: RunManifest,
}

/// `⟨χ̄⟩` on complete graphs with `m` random edges removed, with an
/// exponential fit over the `m` values inside `window`.
pub fn edge_removal_scan(
    n: usize,
    m_values: &[usize],
    realizations: usize,
    seed: u64,
    window: (f64, f64),
) -> Result<EdgeRemovalScan> {
    if m_values.is_empty() {
        return Err(Error::param("m list is empty"));
    }
    for &m in m_values {
        GraphModel::CompleteMinusM { n, m }.validate()?;
    }
    let started = Instant::now();
    let config = serde_json::to_value(ScanConfig::EdgeRemoval {
        n,
        m_values: m_values.to_vec(),
        realizations,
        seed,
        window,
    })?;
    let mut manifest = RunManifest::new("scan", config, seed, DEGENERACY_REL_TOL);
    let mut rows = Vec::with_capacity(m_values.len());
    for (i, &m) in m_values.iter().enumerate() {
        let stats = chi_bar_ensemble(
            &GraphModel::CompleteMinusM { n, m },
            scan_point_seed(seed, i, FAMILY_REMOVAL),
            realizations,
            &mut manifest,
        )?;
        rows.push(RemovalRow { m, stats });
    }
    let inside: Vec<&RemovalRow> = rows
        .iter()
        .filter(|r| (r.m as f64) >= window.0 && (r.m as f64) <= window.1)
        .collect();
    let xs: Vec<f64> = inside.iter().map(|r| r.m as f64).collect();
    let ys: Vec<f64> = inside.iter().map(|r| r.stats.mean.ln()).collect();
    let line = fit_line(&xs, &ys)?;
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    Ok(EdgeRemovalScan {
        n,
        rows,
        fit: ExponentialFit {
            beta: -line.slope,
            prefactor: line.intercept.exp(),
            window,
            residual: line.rms_residual,
        },
        manifest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_binning() {
        let mut h = Histogram::new((0.0, 1.0), 4).unwrap();
        for x in [-0.1, 0.0, 0.1, 0.25, 0.6, 1.0, 1.5] {
            h.add(x);
        }
        assert_eq!(h.counts, vec![2, 1, 1, 1]);
        assert_eq!((h.underflow, h.overflow), (1, 1));
        assert_eq!(h.total(), 7);
        assert_eq!(h.peak_center(), Some(0.125));
        assert!(Histogram::new((1.0, 1.0), 4).is_err());
        assert!(Histogram::new((0.0, 1.0), 0).is_err());
    }

    #[test]
    fn single_realization_is_exact() {
        let cfg = EnsembleConfig {
            grid: GridSpec::Linear {
                tmax: 2.0,
                step: 0.5,
            },
            ..EnsembleConfig::new(GraphModel::Er { n: 20, p: 0.3 }, 5, 1)
        };
        let result = run_ensemble(&cfg).unwrap();
        let seed = derive_seed(5, 0);
        let g = cfg
            .model
            .sample(seed, ConnectivityPolicy::None)
            .unwrap()
            .graph;
        let s = spectral::eigendecompose(&spectral::laplacian(&g)).unwrap();
        let grid = cfg.grid.build().unwrap();
        assert_eq!(
            result.mean_pbar,
            transport::avg_return_classical(&s, &grid).values
        );
        assert_eq!(
            result.mean_pibar,
            transport::avg_return_quantum(&s, &grid).values
        );
        let lt = transport::long_time_average(&s);
        assert_eq!(result.mean_chi, lt.chi);
        assert_eq!(result.mean_chi_bar, lt.chi_bar);
        assert_eq!(result.manifest.derived_seeds, vec![seed]);
    }

    #[test]
    fn mean_consistency() {
        let cfg = EnsembleConfig {
            grid: GridSpec::Linear {
                tmax: 1.0,
                step: 0.5,
            },
            ..EnsembleConfig::new(GraphModel::Config { n: 30, k: 4 }, 9, 7)
        };
        let r = run_ensemble(&cfg).unwrap();
        let trace = r.mean_chi.diag().sum() / 30.0;
        assert!((trace - r.mean_chi_bar).abs() < 1e-12);
        for col in r.mean_chi.columns() {
            assert!((col.sum() - 1.0).abs() < 1e-8);
        }
        assert!(r.per_realization_chi_bar.iter().all(|&c| c >= 1.0 / 30.0));
        assert_eq!(r.per_realization_chi_bar.len(), 7);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = EnsembleConfig::new(GraphModel::Er { n: 20, p: 0.3 }, 5, 0);
        assert!(run_ensemble(&cfg).is_err());
        cfg.realizations = 2;
        cfg.histogram.diag_range = (0.1, 0.1);
        assert!(run_ensemble(&cfg).is_err());
        assert!(scan_chi_vs_size(&[40, 60], 50, 2, 1, None).is_err());
        assert!(edge_removal_scan(5, &[11], 2, 1, (0.0, 10.0)).is_err());
    }

    #[test]
    fn realization_errors_carry_the_index() {
        let err = chi_bar_ensemble(
            &GraphModel::Er { n: 10, p: 0.5 },
            1,
            0,
            &mut RunManifest::new("t", serde_json::Value::Null, 1, 1e-8),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
        let mut hit = None;
        let res = ordered_map(
            5,
            |i| {
                if i == 3 {
                    Err(Error::param("boom"))
                } else {
                    Ok(i)
                }
            },
            |i, _| hit = Some(i),
        );
        match res {
            Err(Error::Realization { index, .. }) => assert_eq!(index, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(hit, Some(2));
    }

    #[test]
    fn complete_graph_distribution() {
        let s = spectral::eigendecompose(&spectral::laplacian(
            &crate::generate::generate_complete(100).unwrap(),
        ))
        .unwrap();
        let lt = transport::long_time_average(&s);
        let d = chi_distribution(&lt.chi, 50, (0.0, 0.01), (0.95, 1.0)).unwrap();
        assert_eq!(d.offdiag.total(), 100 * 99);
        assert_eq!(d.diag.total(), 100);
        let nonzero: Vec<usize> = (0..50).filter(|&i| d.diag.counts[i] > 0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(d.diag.counts[nonzero[0]], 100);
        let c = d.diag.bin_center(nonzero[0]);
        assert!((c - 0.9802).abs() <= d.diag.bin_width() / 2.0);
        assert!(chi_distribution(&lt.chi, 50, (0.2, 0.1), (0.0, 1.0)).is_err());
    }

    #[test]
    fn config_json_defaults() {
        let cfg: EnsembleConfig =
            serde_json::from_str(r#"{"model":{"model":"er","n":100,"p":0.101},"seed":7}"#).unwrap();
        assert_eq!(cfg.realizations, 100);
        assert_eq!(cfg.grid, GridSpec::PLATEAU);
        assert_eq!(cfg.histogram, HistogramSpec::default());
        assert!(serde_json::from_str::<EnsembleConfig>(
            r#"{"model":{"model":"er","n":10,"p":0.5},"seed":1,"bogus":1}"#
        )
        .is_err());
    }
}
