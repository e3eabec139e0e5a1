//! Classical and quantum transport observables on a single graph.
//!
//! Everything here is evaluated from a [`Spectrum`] of the Laplacian `A`
//! (which doubles as the Hamiltonian at unit coupling):
//!
//! * classical transition matrix `P(t) = e^{-tA}`,
//! * quantum amplitudes `U(t) = e^{-itA}` and probabilities `|U_kj(t)|²`,
//! * node averages of both return probabilities,
//! * the eigenvalue-only lower bound `|ᾱ(t)|²` with `ᾱ(t) = (1/N) Σ e^{-itE_n}`,
//! * the long-time average `χ_kj` of the quantum transition probability.

use ndarray::{Array1, Array2, Axis, Zip};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::Spectrum;

/// How a time grid was laid out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "spacing", rename_all = "kebab-case")]
pub enum GridSpec {
    /// `0, step, 2·step, …` up to and including `tmax` (within rounding).
    Linear { tmax: f64, step: f64 },
    /// `points` values evenly spaced in `ln t` over `[tmin, tmax]`.
    Log { tmin: f64, tmax: f64, points: usize },
}

impl GridSpec {
    /// Linear grid `[0, 20]`, step 0.05, used for plateau plots.
    pub const PLATEAU: GridSpec = GridSpec::Linear {
        tmax: 20.0,
        step: 0.05,
    };
    /// Log grid `1e-2 … 1e3`, 600 points, used for power-law plots.
    pub const POWER_LAW: GridSpec = GridSpec::Log {
        tmin: 1e-2,
        tmax: 1e3,
        points: 600,
    };

    pub fn build(&self) -> Result<TimeGrid> {
        match *self {
            GridSpec::Linear { tmax, step } => TimeGrid::linear(tmax, step),
            GridSpec::Log { tmin, tmax, points } => TimeGrid::logarithmic(tmin, tmax, points),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Uniform { step: f64 },
    Logarithmic { ratio: f64 },
    Irregular,
}

/// Strictly ascending, nonnegative sample times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    points: Vec<f64>,
    spacing: Spacing,
}

impl TimeGrid {
    pub fn linear(tmax: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) || !(tmax >= 0.0 && tmax.is_finite()) {
            return Err(Error::param(format!(
                "linear grid needs tmax >= 0 and step > 0 (tmax={tmax}, step={step})"
            )));
        }
        let count = (tmax / step + 1e-9).floor() as usize + 1;
        let points = (0..count).map(|i| i as f64 * step).collect();
        Ok(TimeGrid {
            points,
            spacing: Spacing::Uniform { step },
        })
    }

    /// Linear grid over `[t0, t1]` with the given step.
    pub fn linear_between(t0: f64, t1: f64, step: f64) -> Result<Self> {
        if !(t0 >= 0.0 && t1 > t0 && step > 0.0) {
            return Err(Error::param(format!(
                "linear grid needs 0 <= t0 < t1 and step > 0 (t0={t0}, t1={t1}, step={step})"
            )));
        }
        let count = ((t1 - t0) / step + 1e-9).floor() as usize + 1;
        let points = (0..count).map(|i| t0 + i as f64 * step).collect();
        Ok(TimeGrid {
            points,
            spacing: Spacing::Uniform { step },
        })
    }

    pub fn logarithmic(tmin: f64, tmax: f64, count: usize) -> Result<Self> {
        if !(tmin > 0.0 && tmax > tmin && tmax.is_finite()) || count < 2 {
            return Err(Error::param(format!(
                "log grid needs 0 < tmin < tmax and at least 2 points (tmin={tmin}, tmax={tmax}, points={count})"
            )));
        }
        let (l0, l1) = (tmin.ln(), tmax.ln());
        let h = (l1 - l0) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| (l0 + i as f64 * h).exp()).collect();
        points[0] = tmin;
        points[count - 1] = tmax;
        Ok(TimeGrid {
            points,
            spacing: Spacing::Logarithmic { ratio: h.exp() },
        })
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::param("time grid is empty"));
        }
        if points.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::param(
                "time grid contains a negative or non-finite time",
            ));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("time grid must be strictly ascending"));
        }
        Ok(TimeGrid {
            points,
            spacing: Spacing::Irregular,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.points.last().expect("grids are never empty")
    }

    pub fn max_step(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    Classical,
    Quantum,
    /// `|ᾱ(t)|²`, the eigenvalue-only lower bound on the averaged quantum
    /// return probability.
    QuantumAmplitudeBound,
}

/// One scalar per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries {
    pub grid: TimeGrid,
    pub kind: SeriesKind,
    pub values: Vec<f64>,
}

impl ScalarSeries {
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid
            .points()
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }
}

/// One N×N matrix per grid point; entry `[k, j]` is the probability of
/// going from node `j` to node `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries {
    pub grid: TimeGrid,
    pub kind: SeriesKind,
    pub values: Vec<Array2<f64>>,
}

fn weighted_outer(q: &Array2<f64>, weights: &Array1<f64>) -> Array2<f64> {
    let scaled = q * &weights.view().insert_axis(Axis(0));
    scaled.dot(&q.t())
}

/// `p_kj(t) = Σ_n e^{-tE_n} ⟨k|q_n⟩⟨q_n|j⟩` at every grid time.
pub fn classical_transition(s: &Spectrum, grid: &TimeGrid) -> MatrixSeries {
    let q = s.eigenvectors();
    let e = Array1::from(s.eigenvalues().to_vec());
    let values = grid
        .points()
        .par_iter()
        .map(|&t| weighted_outer(q, &e.mapv(|en| (-t * en).exp())))
        .collect();
    MatrixSeries {
        grid: grid.clone(),
        kind: SeriesKind::Classical,
        values,
    }
}

/// Complex amplitudes `α_kj(t) = Σ_n e^{-itE_n} ⟨k|q_n⟩⟨q_n|j⟩` as
/// (real, imaginary) matrices.
pub fn quantum_amplitudes(s: &Spectrum, t: f64) -> (Array2<f64>, Array2<f64>) {
    let q = s.eigenvectors();
    let e = Array1::from(s.eigenvalues().to_vec());
    let re = weighted_outer(q, &e.mapv(|en| (t * en).cos()));
    let im = weighted_outer(q, &e.mapv(|en| -(t * en).sin()));
    (re, im)
}

/// `π_kj(t) = |α_kj(t)|²` at every grid time.
pub fn quantum_transition(s: &Spectrum, grid: &TimeGrid) -> MatrixSeries {
    let values = grid
        .points()
        .par_iter()
        .map(|&t| {
            let (re, im) = quantum_amplitudes(s, t);
            let mut out = re;
            Zip::from(&mut out)
                .and(&im)
                .for_each(|r, &i| *r = *r * *r + i * i);
            out
        })
        .collect();
    MatrixSeries {
        grid: grid.clone(),
        kind: SeriesKind::Quantum,
        values,
    }
}

/// `p̄(t) = (1/N) Σ_n e^{-tE_n}`, from eigenvalues alone.
pub fn avg_return_classical(s: &Spectrum, grid: &TimeGrid) -> ScalarSeries {
    avg_return_classical_from_eigenvalues(s.eigenvalues(), grid)
}

pub fn avg_return_classical_from_eigenvalues(eigenvalues: &[f64], grid: &TimeGrid) -> ScalarSeries {
    let n = eigenvalues.len() as f64;
    let values = grid
        .points()
        .iter()
        .map(|&t| eigenvalues.iter().map(|&e| (-t * e).exp()).sum::<f64>() / n)
        .collect();
    ScalarSeries {
        grid: grid.clone(),
        kind: SeriesKind::Classical,
        values,
    }
}

/// `π̄(t) = (1/N) Σ_j |α_jj(t)|²` with `α_jj(t) = Σ_n e^{-itE_n} |⟨j|q_n⟩|²`.
pub fn avg_return_quantum(s: &Spectrum, grid: &TimeGrid) -> ScalarSeries {
    let n = s.dim();
    let weights = s.eigenvectors().mapv(|x| x * x);
    let e = s.eigenvalues();
    let values = grid
        .points()
        .par_iter()
        .map(|&t| {
            let cos = Array1::from_iter(e.iter().map(|&en| (t * en).cos()));
            let sin = Array1::from_iter(e.iter().map(|&en| (t * en).sin()));
            let re = weights.dot(&cos);
            let im = weights.dot(&sin);
            re.iter()
                .zip(im.iter())
                .map(|(r, i)| r * r + i * i)
                .sum::<f64>()
                / n as f64
        })
        .collect();
    ScalarSeries {
        grid: grid.clone(),
        kind: SeriesKind::Quantum,
        values,
    }
}

/// `|ᾱ(t)|² = |(1/N) Σ_n e^{-itE_n}|²`.
pub fn avg_amplitude_bound(s: &Spectrum, grid: &TimeGrid) -> ScalarSeries {
    avg_amplitude_bound_from_eigenvalues(s.eigenvalues(), grid)
}

pub fn avg_amplitude_bound_from_eigenvalues(eigenvalues: &[f64], grid: &TimeGrid) -> ScalarSeries {
    let n = eigenvalues.len() as f64;
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            let (re, im) = eigenvalues.iter().fold((0.0, 0.0), |(re, im), &e| {
                (re + (t * e).cos(), im + (t * e).sin())
            });
            (re * re + im * im) / (n * n)
        })
        .collect();
    ScalarSeries {
        grid: grid.clone(),
        kind: SeriesKind::QuantumAmplitudeBound,
        values,
    }
}

/// Long-time averaged quantum transition probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct LongTimeMatrix {
    pub chi: Array2<f64>,
    /// `Σ_j χ_jj / N`.
    pub chi_bar: f64,
}

impl LongTimeMatrix {
    pub fn dim(&self) -> usize {
        self.chi.nrows()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.chi.diag().to_vec()
    }
}

/// `χ_kj = Σ_C (Σ_{n∈C} ⟨k|q_n⟩⟨q_n|j⟩)²` over the spectrum's degeneracy
/// classes `C`; the time average kills every cross term between distinct
/// eigenvalues.
pub fn long_time_average(s: &Spectrum) -> LongTimeMatrix {
    let n = s.dim();
    let q = s.eigenvectors();
    let mut singles = Vec::new();
    let mut chi = Array2::<f64>::zeros((n, n));
    for class in s.degeneracy_classes() {
        if class.len() == 1 {
            singles.push(class.start);
            continue;
        }
        let block = q.slice(ndarray::s![.., class.clone()]);
        let proj = block.dot(&block.t());
        Zip::from(&mut chi).and(&proj).for_each(|c, &p| *c += p * p);
    }
    if !singles.is_empty() {
        // Non-degenerate levels contribute w_n w_nᵀ with w_n = q_n ∘ q_n.
        let w = q.select(Axis(1), &singles).mapv(|x| x * x);
        chi += &w.dot(&w.t());
    }
    let chi_bar = chi.diag().sum() / n as f64;
    LongTimeMatrix { chi, chi_bar }
}

/// `χ̄` alone, in O(N²): `(1/N) Σ_j Σ_C (Σ_{n∈C} ⟨j|q_n⟩²)²`.
pub fn long_time_chi_bar(s: &Spectrum) -> f64 {
    let n = s.dim();
    let q = s.eigenvectors();
    let mut total = 0.0;
    for j in 0..n {
        let row = q.row(j);
        for class in s.degeneracy_classes() {
            let weight: f64 = row
                .slice(ndarray::s![class.clone()])
                .iter()
                .map(|x| x * x)
                .sum();
            total += weight * weight;
        }
    }
    total / n as f64
}

/// Mean and sample standard deviation of the last quarter of a series.
pub fn plateau(series: &ScalarSeries) -> (f64, f64) {
    let len = series.values.len();
    let start = len - (len / 4).max(1);
    let tail = &series.values[start..];
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let var = if tail.len() > 1 {
        tail.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (tail.len() - 1) as f64
    } else {
        0.0
    };
    (mean, var.sqrt())
}
