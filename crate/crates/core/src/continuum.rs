//! Infinite-network limit: return probabilities averaged against the
//! semicircle spectral density, and the power-law analysis of their decay.
//!
//! Integrals against the semicircle are done with the substitution
//! `E = k̄ + 2σ cos θ`, which turns `∫ f(E) ρ(E) dE` into
//! `(2/π) ∫₀^π f(k̄ + 2σ cos θ) sin²θ dθ`. Gauss–Chebyshev quadrature of
//! the second kind integrates exactly against that weight, so the only
//! error left is the polynomial approximation of `f`, which for
//! `e^{-tE}` and `e^{-itE}` is negligible once the node count exceeds a
//! few times `2σt`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_line, LineFit};
use crate::transport::{ScalarSeries, SeriesKind, TimeGrid};

pub const MIN_NODES: usize = 2048;
pub const CLASSICAL_REL_TOL: f64 = 1e-8;
pub const AMPLITUDE_REL_TOL: f64 = 1e-6;
/// Default fit window for both the classical decay and the amplitude maxima.
pub const DEFAULT_WINDOW: (f64, f64) = (10.0, 100.0);
/// A power law is rejected when its log-log RMS residual exceeds this.
pub const POWER_LAW_MAX_RESIDUAL: f64 = 0.1;
/// An exponential is accepted when the semi-log RMS residual, relative to
/// the span of `ln p̄` across the window, stays below this.
pub const EXPONENTIAL_MAX_RELATIVE_RESIDUAL: f64 = 0.02;

/// Semicircle density of width `σ` centred on the mean degree `k̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemicircleDensity {
    pub kbar: f64,
    pub sigma: f64,
}

impl SemicircleDensity {
    /// Sparse-network form, `σ² = k̄`.
    pub fn sparse(kbar: f64) -> Result<Self> {
        if !(kbar > 0.0 && kbar.is_finite()) {
            return Err(Error::param(format!("kbar must be positive, got {kbar}")));
        }
        Ok(SemicircleDensity {
            kbar,
            sigma: kbar.sqrt(),
        })
    }

    /// ER form, `k̄ = p(N-1)` and `σ = √(Np(1-p))`.
    pub fn erdos_renyi(n: usize, p: f64) -> Result<Self> {
        if n < 2 || !(p > 0.0 && p < 1.0) {
            return Err(Error::param(format!(
                "ER semicircle needs n >= 2 and 0 < p < 1 (n={n}, p={p})"
            )));
        }
        Ok(SemicircleDensity {
            kbar: p * (n - 1) as f64,
            sigma: (n as f64 * p * (1.0 - p)).sqrt(),
        })
    }

    pub fn with_sigma(kbar: f64, sigma: f64) -> Result<Self> {
        if !(kbar > 0.0 && sigma > 0.0 && kbar.is_finite() && sigma.is_finite()) {
            return Err(Error::param(format!(
                "semicircle needs kbar > 0 and sigma > 0 (kbar={kbar}, sigma={sigma})"
            )));
        }
        Ok(SemicircleDensity { kbar, sigma })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.kbar - 2.0 * self.sigma, self.kbar + 2.0 * self.sigma)
    }

    pub fn density(&self, e: f64) -> f64 {
        let d = e - self.kbar;
        let r2 = 4.0 * self.sigma * self.sigma;
        if d * d >= r2 {
            return 0.0;
        }
        (r2 - d * d).sqrt() / (2.0 * std::f64::consts::PI * self.sigma * self.sigma)
    }

    pub fn cdf(&self, e: f64) -> f64 {
        let u = ((e - self.kbar) / (2.0 * self.sigma)).clamp(-1.0, 1.0);
        0.5 + (u * (1.0 - u * u).sqrt() + u.asin()) / std::f64::consts::PI
    }

    /// Spacing of successive maxima of `|ᾱ(t)|²`, `2π / (4σ)`.
    pub fn oscillation_period(&self) -> f64 {
        std::f64::consts::PI / (2.0 * self.sigma)
    }
}

/// `ρ(E)` in the sparse form, `σ² = k̄`.
pub fn semicircle_density(kbar: f64, e: f64) -> Result<f64> {
    Ok(SemicircleDensity::sparse(kbar)?.density(e))
}

/// Gauss–Chebyshev (second kind) rule mapped onto a semicircle. Node
/// counts are always `2^j - 1`, so the odd-indexed nodes of one rule form
/// the next coarser rule and give a free error estimate.
#[derive(Debug, Clone)]
pub struct SemicircleQuadrature {
    energies: Vec<f64>,
    weights: Vec<f64>,
}

impl SemicircleQuadrature {
    pub fn new(density: &SemicircleDensity, nodes: usize) -> Result<Self> {
        if nodes < 3 || !(nodes + 1).is_power_of_two() {
            return Err(Error::param(format!(
                "quadrature node count must be 2^j - 1 >= 3, got {nodes}"
            )));
        }
        let h = std::f64::consts::PI / (nodes + 1) as f64;
        let scale = 2.0 / (nodes + 1) as f64;
        let (energies, weights) = (1..=nodes)
            .map(|i| {
                let theta = i as f64 * h;
                let s = theta.sin();
                (
                    density.kbar + 2.0 * density.sigma * theta.cos(),
                    scale * s * s,
                )
            })
            .unzip();
        Ok(SemicircleQuadrature { energies, weights })
    }

    /// Smallest rule with at least `max(2048, ceil(8σ·t_max))` nodes.
    pub fn for_horizon(density: &SemicircleDensity, t_max: f64) -> Result<Self> {
        Self::new(density, node_count(density.sigma, t_max))
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.energies
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| w * f(e))
            .sum()
    }

    /// Fine and coarse (every other node) estimates of `∫ f ρ dE`.
    fn integrate_pair<T>(&self, f: impl Fn(f64) -> T) -> (T, T)
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    {
        let mut fine = T::default();
        let mut coarse = T::default();
        for (i, (&e, &w)) in self.energies.iter().zip(&self.weights).enumerate() {
            let v = f(e) * w;
            fine = fine + v;
            // Node i (0-based) is θ = (i+1)h; odd i are the coarse nodes.
            if i % 2 == 1 {
                coarse = coarse + v * 2.0;
            }
        }
        (fine, coarse)
    }
}

pub fn node_count(sigma: f64, t_max: f64) -> usize {
    let needed = MIN_NODES.max((8.0 * sigma * t_max).ceil() as usize);
    (needed + 1).next_power_of_two() - 1
}

/// `p̄(t) = ∫ e^{-tE} ρ(E) dE` over the grid.
pub fn continuum_classical(density: &SemicircleDensity, grid: &TimeGrid) -> Result<ScalarSeries> {
    let quad = SemicircleQuadrature::for_horizon(density, grid.t_max())?;
    continuum_classical_with(density, &quad, grid)
}

pub fn continuum_classical_with(
    density: &SemicircleDensity,
    quad: &SemicircleQuadrature,
    grid: &TimeGrid,
) -> Result<ScalarSeries> {
    let (lo, _) = density.support();
    let values = grid
        .points()
        .par_iter()
        .map(|&t| {
            // Factor out the slowest-decaying exponential so the sum itself
            // neither underflows nor overflows.
            let (fine, coarse) = quad.integrate_pair(|e| (-t * (e - lo)).exp());
            let error = (fine - coarse).abs();
            let value = (-t * lo).exp() * fine;
            if error > CLASSICAL_REL_TOL * fine.abs() {
                return Err(Error::Quadrature {
                    t,
                    estimate: value,
                    error: error * (-t * lo).exp(),
                });
            }
            Ok(value)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScalarSeries {
        grid: grid.clone(),
        kind: SeriesKind::Classical,
        values,
    })
}

/// `(t, ln p̄(t))` over the grid. Stays finite where `p̄` itself
/// underflows, which happens early for large mean degree.
pub fn continuum_log_classical_with(
    density: &SemicircleDensity,
    quad: &SemicircleQuadrature,
    grid: &TimeGrid,
) -> Result<Vec<(f64, f64)>> {
    let (lo, _) = density.support();
    grid.points()
        .par_iter()
        .map(|&t| {
            let (fine, coarse) = quad.integrate_pair(|e| (-t * (e - lo)).exp());
            if (fine - coarse).abs() > CLASSICAL_REL_TOL * fine.abs() {
                return Err(Error::Quadrature {
                    t,
                    estimate: (-t * lo).exp() * fine,
                    error: (fine - coarse).abs() * (-t * lo).exp(),
                });
            }
            Ok((t, fine.ln() - t * lo))
        })
        .collect()
}

#[derive(Clone, Copy, Default)]
struct C(Complex64);

impl std::ops::Add for C {
    type Output = C;
    fn add(self, o: C) -> C {
        C(self.0 + o.0)
    }
}

impl std::ops::Mul<f64> for C {
    type Output = C;
    fn mul(self, w: f64) -> C {
        C(self.0 * w)
    }
}

/// `|ᾱ(t)|² = |∫ e^{-itE} ρ(E) dE|²` over the grid.
pub fn continuum_amplitude(density: &SemicircleDensity, grid: &TimeGrid) -> Result<ScalarSeries> {
    let quad = SemicircleQuadrature::for_horizon(density, grid.t_max())?;
    continuum_amplitude_with(&quad, grid)
}

pub fn continuum_amplitude_with(
    quad: &SemicircleQuadrature,
    grid: &TimeGrid,
) -> Result<ScalarSeries> {
    let values = grid
        .points()
        .par_iter()
        .map(|&t| {
            let (fine, coarse) = quad.integrate_pair(|e| C(Complex64::from_polar(1.0, -t * e)));
            let error = (fine.0 - coarse.0).norm();
            let modulus = fine.0.norm();
            if error > AMPLITUDE_REL_TOL * modulus + 1e-13 {
                return Err(Error::Quadrature {
                    t,
                    estimate: modulus * modulus,
                    error,
                });
            }
            Ok(fine.0.norm_sqr())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ScalarSeries {
        grid: grid.clone(),
        kind: SeriesKind::QuantumAmplitudeBound,
        values,
    })
}

/// Interior grid points whose value is strictly above both neighbours.
///
/// When `period` is given the grid must sample it with at least ten
/// points; coarser grids are rejected because their maxima are aliased.
pub fn extract_local_maxima(series: &ScalarSeries, period: Option<f64>) -> Result<Vec<(f64, f64)>> {
    if let Some(period) = period {
        let step = series.grid.max_step();
        if step > period / 10.0 {
            return Err(Error::param(format!(
                "grid step {step:.4} under-resolves the oscillation period {period:.4}; \
                 need a step of at most {:.4} (10 points per period)",
                period / 10.0
            )));
        }
    }
    let t = series.grid.points();
    let v = &series.values;
    Ok((1..v.len().saturating_sub(1))
        .filter(|&i| v[i] > v[i - 1] && v[i] > v[i + 1])
        .map(|i| (t[i], v[i]))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub window: (f64, f64),
    /// RMS residual of the fit in (ln t, ln value).
    pub residual: f64,
    pub points: usize,
}

impl PowerLawFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.prefactor * t.powf(self.exponent)
    }
}

fn window_points(points: &[(f64, f64)], window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::param(format!("fit window [{lo}, {hi}] is empty")));
    }
    let inside: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(t, _)| t >= lo && t <= hi)
        .collect();
    if inside.len() < 5 {
        return Err(Error::param(format!(
            "need at least 5 points in [{lo}, {hi}], found {}",
            inside.len()
        )));
    }
    if let Some(&(t, _)) = inside.iter().find(|&&(t, _)| !(t > 0.0)) {
        return Err(Error::param(format!("fits need positive t; got {t}")));
    }
    Ok(inside)
}

fn log_values(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    points
        .iter()
        .map(|&(t, v)| {
            if v > 0.0 {
                Ok((t, v.ln()))
            } else {
                Err(Error::param(format!(
                    "power-law fit needs positive values; got ({t}, {v})"
                )))
            }
        })
        .collect()
}

/// Least-squares line through `(ln t, ln value)` for the points in `window`.
pub fn fit_power_law(points: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    fit_log_power_law(&log_values(&window_points(points, window)?)?, window)
}

/// As [`fit_power_law`], for points already given as `(t, ln value)`.
pub fn fit_log_power_law(log_points: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let inside = window_points(log_points, window)?;
    let xs: Vec<f64> = inside.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = inside.iter().map(|p| p.1).collect();
    let line = fit_line(&xs, &ys)?;
    Ok(PowerLawFit {
        exponent: line.slope,
        prefactor: line.intercept.exp(),
        window,
        residual: line.rms_residual,
        points: inside.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayKind {
    PowerLaw,
    Exponential,
    Unclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayClassification {
    pub kind: DecayKind,
    pub power_law: PowerLawFit,
    /// Fit of `ln value` against `t`.
    pub exponential: LineFit,
    /// `exponential.rms_residual` divided by the span of `ln value`.
    pub exponential_relative_residual: f64,
}

/// Power law when the log-log fit is tight; exponential when the log-log
/// fit is poor but `ln value` is close to linear in `t`.
pub fn classify_decay(points: &[(f64, f64)], window: (f64, f64)) -> Result<DecayClassification> {
    classify_log_decay(&log_values(&window_points(points, window)?)?, window)
}

/// As [`classify_decay`], for points already given as `(t, ln value)`.
pub fn classify_log_decay(
    log_points: &[(f64, f64)],
    window: (f64, f64),
) -> Result<DecayClassification> {
    let power_law = fit_log_power_law(log_points, window)?;
    let inside = window_points(log_points, window)?;
    let xs: Vec<f64> = inside.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = inside.iter().map(|p| p.1).collect();
    let exponential = fit_line(&xs, &ys)?;
    let span = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let relative = if span > 0.0 {
        exponential.rms_residual / span
    } else {
        f64::INFINITY
    };
    let kind = if power_law.residual <= POWER_LAW_MAX_RESIDUAL {
        DecayKind::PowerLaw
    } else if relative < EXPONENTIAL_MAX_RELATIVE_RESIDUAL {
        DecayKind::Exponential
    } else {
        DecayKind::Unclassified
    };
    Ok(DecayClassification {
        kind,
        power_law,
        exponential,
        exponential_relative_residual: relative,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Efficiency {
    /// Quantum return probability (maxima envelope) decays faster.
    Quantum,
    /// Classical return probability decays faster.
    Classical,
}

/// Classical vs quantum decay in the continuum limit for one mean degree.
#[derive(Debug, Clone)]
pub struct EfficiencyReport {
    pub density: SemicircleDensity,
    pub window: (f64, f64),
    /// `p̄(t)` on the caller's grid.
    pub classical: ScalarSeries,
    /// `|ᾱ(t)|²` on the caller's grid.
    pub amplitude: ScalarSeries,
    /// `p̄(t)` and `|ᾱ(t)|²` on a linear grid resolving the oscillations,
    /// spanning `[0, window.1]`.
    pub dense_classical: ScalarSeries,
    pub dense_amplitude: ScalarSeries,
    pub maxima: Vec<(f64, f64)>,
    pub maxima_fit: PowerLawFit,
    pub classical_decay: DecayClassification,
    /// Earliest dense-grid time from which `p̄(t) < |ᾱ(t)|²` holds through
    /// the end of the window.
    pub classical_below_amplitude_from: Option<f64>,
    pub verdict: Efficiency,
}

impl EfficiencyReport {
    /// Fitted maxima envelope `c·t^γ`.
    pub fn envelope(&self, t: f64) -> f64 {
        self.maxima_fit.eval(t)
    }
}

pub fn compare_efficiency(
    kbar: f64,
    grid: &TimeGrid,
    window: (f64, f64),
) -> Result<EfficiencyReport> {
    let density = SemicircleDensity::sparse(kbar)?;
    let step = density.oscillation_period() / 20.0;
    let dense_grid = TimeGrid::linear(window.1, step)?;
    let quad = SemicircleQuadrature::for_horizon(&density, grid.t_max())?;
    let dense_quad = SemicircleQuadrature::for_horizon(&density, dense_grid.t_max())?;

    let classical = continuum_classical_with(&density, &quad, grid)?;
    let amplitude = continuum_amplitude_with(&quad, grid)?;
    let dense_classical = continuum_classical_with(&density, &dense_quad, &dense_grid)?;
    let dense_amplitude = continuum_amplitude_with(&dense_quad, &dense_grid)?;

    let maxima = extract_local_maxima(&dense_amplitude, Some(density.oscillation_period()))?;
    let maxima_fit = fit_power_law(&maxima, window)?;
    let log_classical = continuum_log_classical_with(&density, &quad, grid)?;
    let classical_decay = classify_log_decay(&log_classical, window)?;

    let mut below_from = None;
    for (i, (&p, &a)) in dense_classical
        .values
        .iter()
        .zip(&dense_amplitude.values)
        .enumerate()
        .rev()
    {
        if p < a {
            below_from = Some(dense_grid.points()[i]);
        } else {
            break;
        }
    }

    let t_end = window.1;
    let classical_end = dense_classical.values.last().copied().unwrap_or(0.0);
    let verdict = if classical_decay.kind == DecayKind::Exponential
        || classical_end < maxima_fit.eval(t_end)
    {
        Efficiency::Classical
    } else if maxima_fit.exponent < classical_decay.power_law.exponent {
        Efficiency::Quantum
    } else {
        Efficiency::Classical
    };

    Ok(EfficiencyReport {
        density,
        window,
        classical,
        amplitude,
        dense_classical,
        dense_amplitude,
        maxima,
        maxima_fit,
        classical_decay,
        classical_below_amplitude_from: below_from,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn density_values() {
        assert!((semicircle_density(4.0, 4.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((semicircle_density(4.0, 4.0).unwrap() - 0.159155).abs() < 1e-6);
        assert_eq!(semicircle_density(4.0, 9.0).unwrap(), 0.0);
        assert_eq!(semicircle_density(4.0, -0.5).unwrap(), 0.0);
        assert!(semicircle_density(0.0, 1.0).is_err());
    }

    #[test]
    fn density_normalization() {
        for kbar in [0.5, 4.0, 9.0, 16.0, 64.0] {
            let d = SemicircleDensity::sparse(kbar).unwrap();
            let q = SemicircleQuadrature::new(&d, 4095).unwrap();
            assert!((q.integrate(|_| 1.0) - 1.0).abs() < 1e-12);
            // Independent check: composite Simpson on the raw density.
            let (lo, hi) = d.support();
            let m = 200_000;
            let h = (hi - lo) / m as f64;
            let mut s = d.density(lo) + d.density(hi);
            for i in 1..m {
                s += d.density(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            assert!((s * h / 3.0 - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn cdf_endpoints() {
        let d = SemicircleDensity::sparse(16.0).unwrap();
        assert_eq!(d.cdf(0.0), 0.0);
        assert!((d.cdf(16.0) - 0.5).abs() < 1e-15);
        assert_eq!(d.cdf(30.0), 1.0);
    }

    #[test]
    fn er_density_parameters() {
        let d = SemicircleDensity::erdos_renyi(2000, 16.0 / 1999.0).unwrap();
        assert!((d.kbar - 16.0).abs() < 1e-12);
        assert!(
            (d.sigma * d.sigma - 2000.0 * (16.0 / 1999.0) * (1.0 - 16.0 / 1999.0)).abs() < 1e-9
        );
    }

    #[test]
    fn node_counts_are_nested_sizes() {
        assert_eq!(node_count(2.0, 100.0), 4095);
        assert_eq!(node_count(2.0, 1000.0), 16383);
        assert!(SemicircleQuadrature::new(&SemicircleDensity::sparse(4.0).unwrap(), 1000).is_err());
    }

    #[test]
    fn time_zero_is_one() {
        let d = SemicircleDensity::sparse(4.0).unwrap();
        let grid = TimeGrid::from_points(vec![0.0]).unwrap();
        assert!((continuum_classical(&d, &grid).unwrap().values[0] - 1.0).abs() < 1e-14);
        assert!((continuum_amplitude(&d, &grid).unwrap().values[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn classical_monotone_and_bounded() {
        // t_max keeps e^{-t·E_min} above the f64 underflow threshold.
        for (kbar, t_max) in [(4.0, 1e3), (9.0, 1e2), (30.0, 10.0)] {
            let d = SemicircleDensity::sparse(kbar).unwrap();
            let s =
                continuum_classical(&d, &TimeGrid::logarithmic(1e-2, t_max, 300).unwrap()).unwrap();
            assert!(s.values.windows(2).all(|w| w[1] <= w[0]));
            assert!(s.values.iter().all(|&v| v > 0.0 && v <= 1.0));
        }
    }

    #[test]
    fn under_resolved_quadrature_is_reported() {
        let d = SemicircleDensity::sparse(4.0).unwrap();
        let q = SemicircleQuadrature::new(&d, 63).unwrap();
        let grid = TimeGrid::from_points(vec![50.0]).unwrap();
        assert!(matches!(
            continuum_amplitude_with(&q, &grid),
            Err(Error::Quadrature { .. })
        ));
    }

    #[test]
    fn maxima_of_cos_squared() {
        let grid = TimeGrid::linear(10.0, 0.1).unwrap();
        let values = grid.points().iter().map(|t| t.cos().powi(2)).collect();
        let s = ScalarSeries {
            grid,
            kind: SeriesKind::Quantum,
            values,
        };
        let maxima = extract_local_maxima(&s, Some(PI)).unwrap();
        assert_eq!(maxima.len(), 3);
        for ((t, v), k) in maxima.iter().zip(1..) {
            assert!((t - k as f64 * PI).abs() <= 0.05 + 1e-12);
            assert!(*v > 0.99);
        }
        assert!(extract_local_maxima(&s, Some(0.5)).is_err());
    }

    #[test]
    fn monotone_series_has_no_maxima() {
        let grid = TimeGrid::linear(5.0, 0.1).unwrap();
        let values = grid.points().iter().map(|t| (-t).exp()).collect();
        let s = ScalarSeries {
            grid,
            kind: SeriesKind::Classical,
            values,
        };
        assert!(extract_local_maxima(&s, None).unwrap().is_empty());
    }

    #[test]
    fn exact_power_law_fit() {
        let pts: Vec<(f64, f64)> = (0..50)
            .map(|i| {
                let t = 10.0 * 1.05f64.powi(i);
                (t, 3.0 * t.powf(-3.0))
            })
            .collect();
        let f = fit_power_law(&pts, (10.0, 100.0)).unwrap();
        assert!((f.exponent + 3.0).abs() < 1e-6);
        assert!((f.prefactor - 3.0).abs() < 1e-6);
        assert!(fit_power_law(&pts[..4], (10.0, 100.0)).is_err());
        assert!(fit_power_law(&[(10.0, 0.0); 6], (1.0, 100.0)).is_err());
    }
}
