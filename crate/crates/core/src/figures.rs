//! One pipeline per standard figure, with its parameters fixed.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::continuum::{compare_efficiency, EfficiencyReport, DEFAULT_WINDOW};
use crate::ensemble::{
    chi_distribution, edge_removal_scan, run_ensemble, scan_chi_vs_degree, scan_chi_vs_size,
    EnsembleConfig, EnsembleResult, RunManifest, DEFAULT_REMOVAL_WINDOW,
};
use crate::error::{Error, Result};
use crate::generate::GraphModel;
use crate::io::{self, OutputSet};
use crate::rng::derive_seed;
use crate::spectral::DEGENERACY_REL_TOL;
use crate::transport::{GridSpec, TimeGrid};

pub const DEFAULT_FIGURE_SEED: u64 = 20080101;

const N: usize = 100;
const R: usize = 100;
const SIZE_SCAN_R: usize = 50;
const DEGREES: [usize; 3] = [10, 20, 30];
const SCAN_DEGREES: [usize; 10] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 99];
const SCAN_SIZES: [usize; 6] = [60, 80, 100, 150, 200, 300];
const SIZE_SCAN_DEGREE: usize = 50;
const REMOVED_EDGES: [usize; 16] = [
    0, 25, 50, 75, 100, 125, 150, 175, 200, 300, 400, 600, 800, 1000, 1500, 2000,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig2c,
    Fig3,
    Fig4,
    Fig5a,
    Fig5b,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig2c,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
            FigureId::Fig2c => "fig2c",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5a => "fig5a",
            FigureId::Fig5b => "fig5b",
            FigureId::Fig6 => "fig6",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::param(format!("unknown figure `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Er,
    Config,
}

impl Family {
    fn model(self, k: usize) -> GraphModel {
        match self {
            Family::Er => GraphModel::Er {
                n: N,
                p: k as f64 / (N as f64 - 1.0),
            },
            Family::Config => GraphModel::Config { n: N, k },
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Family::Er => "er",
            Family::Config => "config",
        }
    }
}

fn merge(into: &mut RunManifest, from: &RunManifest) {
    into.derived_seeds.extend_from_slice(&from.derived_seeds);
    into.resample_counts
        .extend_from_slice(&from.resample_counts);
}

/// The six N=100, R=100 ensembles shared by the finite-network figures.
/// Point `i` of family `f` uses master seed `derive_seed(seed, 2i + f)`.
fn finite_ensembles(
    seed: u64,
    families: &[Family],
    manifest: &mut RunManifest,
) -> Result<Vec<(Family, usize, EnsembleConfig, EnsembleResult)>> {
    let mut out = Vec::new();
    for &family in families {
        for (i, &k) in DEGREES.iter().enumerate() {
            let offset = match family {
                Family::Er => 0,
                Family::Config => 1,
            };
            let cfg = EnsembleConfig {
                grid: GridSpec::PLATEAU,
                ..EnsembleConfig::new(family.model(k), derive_seed(seed, 2 * i as u64 + offset), R)
            };
            let result = run_ensemble(&cfg)?;
            merge(manifest, &result.manifest);
            out.push((family, k, cfg, result));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct EfficiencySummary {
    kbar: f64,
    window: (f64, f64),
    classical: crate::continuum::PowerLawFit,
    classical_decay: crate::continuum::DecayKind,
    classical_exponential_rate: f64,
    maxima: crate::continuum::PowerLawFit,
    classical_below_amplitude_from: Option<f64>,
    verdict: crate::continuum::Efficiency,
}

impl EfficiencySummary {
    fn of(r: &EfficiencyReport) -> Self {
        EfficiencySummary {
            kbar: r.density.kbar,
            window: r.window,
            classical: r.classical_decay.power_law,
            classical_decay: r.classical_decay.kind,
            classical_exponential_rate: -r.classical_decay.exponential.slope,
            maxima: r.maxima_fit,
            classical_below_amplitude_from: r.classical_below_amplitude_from,
            verdict: r.verdict,
        }
    }
}

fn efficiency(kbar: f64) -> Result<EfficiencyReport> {
    compare_efficiency(kbar, &GridSpec::POWER_LAW.build()?, DEFAULT_WINDOW)
}

fn maxima_csv(points: &[(f64, f64)]) -> String {
    let ts: Vec<f64> = points.iter().map(|p| p.0).collect();
    let vs: Vec<f64> = points.iter().map(|p| p.1).collect();
    io::columns_csv(&["t", "value"], &[&ts, &vs]).expect("equal lengths")
}

/// Log-grid and dense linear-grid series plus maxima for one mean degree.
fn efficiency_files(set: &mut OutputSet, r: &EfficiencyReport, suffix: &str) -> Result<()> {
    let grid: &TimeGrid = &r.classical.grid;
    set.add(
        format!("series{suffix}.csv"),
        io::columns_csv(
            &["t", "classical", "amplitude"],
            &[grid.points(), &r.classical.values, &r.amplitude.values],
        )?,
    );
    set.add(
        format!("dense{suffix}.csv"),
        io::columns_csv(
            &["t", "classical", "amplitude"],
            &[
                r.dense_classical.grid.points(),
                &r.dense_classical.values,
                &r.dense_amplitude.values,
            ],
        )?,
    );
    set.add(format!("maxima{suffix}.csv"), maxima_csv(&r.maxima));
    Ok(())
}

/// Computes every output file of a figure. Nothing is written to disk.
pub fn reproduce_figure(id: FigureId, seed: u64) -> Result<OutputSet> {
    let started = Instant::now();
    let mut manifest = RunManifest::new(
        "figure",
        json!({ "figure": id.as_str(), "seed": seed }),
        seed,
        DEGENERACY_REL_TOL,
    );
    let mut set = OutputSet::new();
    match id {
        FigureId::Fig1a | FigureId::Fig1b => {
            let family = if id == FigureId::Fig1a {
                Family::Er
            } else {
                Family::Config
            };
            for (_, k, _, r) in finite_ensembles(seed, &[family], &mut manifest)? {
                set.add(format!("series_k{k}.csv"), io::ensemble_series_csv(&r));
            }
        }
        FigureId::Fig2a | FigureId::Fig2b => {
            let kbar = if id == FigureId::Fig2a { 4.0 } else { 9.0 };
            let r = efficiency(kbar)?;
            efficiency_files(&mut set, &r, "")?;
            set.add("fit.json", io::to_json(&EfficiencySummary::of(&r))?);
        }
        FigureId::Fig2c => {
            let mut fits = Vec::new();
            for kbar in [16.0, 64.0] {
                let r = efficiency(kbar)?;
                efficiency_files(&mut set, &r, &format!("_k{kbar}"))?;
                fits.push(EfficiencySummary::of(&r));
            }
            set.add("fit.json", io::to_json(&fits)?);
        }
        FigureId::Fig3 | FigureId::Fig4 => {
            for (family, k, cfg, r) in
                finite_ensembles(seed, &[Family::Er, Family::Config], &mut manifest)?
            {
                let name = format!("{}_k{k}", family.tag());
                if id == FigureId::Fig3 {
                    set.add(format!("chi_{name}.csv"), io::chi_csv(&r.mean_chi));
                } else {
                    let h = cfg.histogram;
                    let d = chi_distribution(&r.mean_chi, h.bins, h.offdiag_range, h.diag_range)?;
                    set.add(format!("chi_hist_{name}.csv"), io::chi_hist_csv(&d));
                }
            }
        }
        FigureId::Fig5a => {
            let scan = scan_chi_vs_degree(N, &SCAN_DEGREES, R, seed)?;
            merge(&mut manifest, &scan.manifest);
            set.add("scan.csv", io::degree_scan_csv(&scan));
        }
        FigureId::Fig5b => {
            let scan = scan_chi_vs_size(&SCAN_SIZES, SIZE_SCAN_DEGREE, SIZE_SCAN_R, seed, None)?;
            merge(&mut manifest, &scan.manifest);
            set.add("scan.csv", io::size_scan_csv(&scan));
            set.add(
                "fit.json",
                io::to_json(
                    &json!({ "window": scan.window, "er": scan.er_fit, "config": scan.config_fit }),
                )?,
            );
        }
        FigureId::Fig6 => {
            let scan = edge_removal_scan(N, &REMOVED_EDGES, R, seed, DEFAULT_REMOVAL_WINDOW)?;
            merge(&mut manifest, &scan.manifest);
            set.add("scan.csv", io::edge_removal_csv(&scan));
            set.add("fit.json", io::to_json(&scan.fit)?);
        }
    }
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    set.add("manifest.json", io::to_json(&manifest)?);
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.as_str().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig7".parse::<FigureId>().is_err());
    }

    #[test]
    fn fig2a_files() {
        let set = reproduce_figure(FigureId::Fig2a, 1).unwrap();
        let names: Vec<&str> = set.names().collect();
        assert_eq!(
            names,
            [
                "series.csv",
                "dense.csv",
                "maxima.csv",
                "fit.json",
                "manifest.json"
            ]
        );
        assert!(set
            .get("series.csv")
            .unwrap()
            .starts_with("t,classical,amplitude\n"));
        let fit: serde_json::Value = serde_json::from_str(set.get("fit.json").unwrap()).unwrap();
        assert!((fit["maxima"]["exponent"].as_f64().unwrap() + 3.0).abs() < 0.1);
    }
}
