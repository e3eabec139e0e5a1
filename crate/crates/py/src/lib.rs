//! Python bindings: graphs, spectra, single-graph observables, ensembles
//! and continuum-limit series.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qwalk_core::continuum::{self, SemicircleDensity};
use qwalk_core::ensemble::{self, EnsembleConfig};
use qwalk_core::spectral::{self, DEGENERACY_REL_TOL};
use qwalk_core::transport::{self, TimeGrid};
use qwalk_core::{ConnectivityPolicy, GraphModel};

fn to_py(e: qwalk_core::Error) -> PyErr {
    if e.is_io() {
        PyOSError::new_err(e.to_string())
    } else if e.is_numerical() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn rows(a: &ndarray::Array2<f64>) -> Vec<Vec<f64>> {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn grid(times: Vec<f64>) -> PyResult<TimeGrid> {
    TimeGrid::from_points(times).map_err(to_py)
}

/// Undirected simple graph on nodes `0..n`.
#[pyclass(name = "Graph", module = "qwalk", frozen)]
struct PyGraph {
    inner: qwalk_core::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = qwalk_core::Graph::from_edges(n, edges).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    /// Draws a graph: `model` is one of er, config, complete-minus-m,
    /// complete, cycle.
    #[staticmethod]
    #[pyo3(signature = (model, n, p=None, k=None, m=None, seed=0, require_connected=false))]
    #[allow(clippy::too_many_arguments)]
    fn generate(
        model: &str,
        n: usize,
        p: Option<f64>,
        k: Option<usize>,
        m: Option<usize>,
        seed: u64,
        require_connected: bool,
    ) -> PyResult<Self> {
        let missing = |name: &str| PyValueError::new_err(format!("model `{model}` needs `{name}`"));
        let model = match model {
            "er" => GraphModel::Er {
                n,
                p: p.ok_or_else(|| missing("p"))?,
            },
            "config" => GraphModel::Config {
                n,
                k: k.ok_or_else(|| missing("k"))?,
            },
            "complete-minus-m" => GraphModel::CompleteMinusM {
                n,
                m: m.ok_or_else(|| missing("m"))?,
            },
            "complete" => GraphModel::Complete { n },
            "cycle" => GraphModel::Cycle { n },
            other => return Err(PyValueError::new_err(format!("unknown model `{other}`"))),
        };
        let policy = if require_connected {
            ConnectivityPolicy::RequireConnected
        } else {
            ConnectivityPolicy::None
        };
        let sampled = model.sample(seed, policy).map_err(to_py)?;
        Ok(PyGraph {
            inner: sampled.graph,
        })
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        let inner = qwalk_core::Graph::parse_edge_list(text).map_err(to_py)?;
        Ok(PyGraph { inner })
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn laplacian(&self) -> Vec<Vec<f64>> {
        rows(spectral::laplacian(&self.inner).matrix())
    }

    fn spectrum(&self, py: Python<'_>) -> PyResult<PySpectrum> {
        let g = &self.inner;
        let inner = py
            .detach(|| spectral::eigendecompose(&spectral::laplacian(g)))
            .map_err(to_py)?;
        Ok(PySpectrum { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, edges={})",
            self.inner.node_count(),
            self.inner.edge_count()
        )
    }
}

/// Laplacian eigendecomposition with eigenvalue degeneracy classes.
#[pyclass(name = "Spectrum", module = "qwalk", frozen)]
struct PySpectrum {
    inner: spectral::Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().to_vec()
    }

    /// Rows of the eigenvector matrix; column `i` is eigenvector `i`.
    #[getter]
    fn eigenvectors(&self) -> Vec<Vec<f64>> {
        rows(self.inner.eigenvectors())
    }

    #[getter]
    fn degeneracy_classes(&self) -> Vec<(usize, usize)> {
        self.inner
            .degeneracy_classes()
            .iter()
            .map(|r| (r.start, r.end))
            .collect()
    }

    fn avg_return_classical(&self, times: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(transport::avg_return_classical(&self.inner, &grid(times)?).values)
    }

    fn avg_return_quantum(&self, times: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(transport::avg_return_quantum(&self.inner, &grid(times)?).values)
    }

    fn amplitude_bound(&self, times: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(transport::avg_amplitude_bound(&self.inner, &grid(times)?).values)
    }

    fn classical_transition(&self, t: f64) -> PyResult<Vec<Vec<f64>>> {
        let s = transport::classical_transition(&self.inner, &grid(vec![t])?);
        Ok(rows(&s.values[0]))
    }

    fn quantum_transition(&self, t: f64) -> PyResult<Vec<Vec<f64>>> {
        let s = transport::quantum_transition(&self.inner, &grid(vec![t])?);
        Ok(rows(&s.values[0]))
    }

    /// `(chi, chi_bar)`: long-time averaged transition probabilities and
    /// the mean of their diagonal.
    #[pyo3(signature = (degeneracy_tol=DEGENERACY_REL_TOL))]
    fn long_time(&self, degeneracy_tol: f64) -> PyResult<(Vec<Vec<f64>>, f64)> {
        if !(degeneracy_tol > 0.0) {
            return Err(PyValueError::new_err("degeneracy_tol must be positive"));
        }
        let tol = degeneracy_tol
            * self
                .inner
                .eigenvalues()
                .last()
                .copied()
                .unwrap_or(0.0)
                .max(1.0);
        let lt = transport::long_time_average(&self.inner.clone().with_degeneracy_tol(tol));
        Ok((rows(&lt.chi), lt.chi_bar))
    }

    fn __len__(&self) -> usize {
        self.inner.dim()
    }
}

/// Runs an ensemble from a JSON configuration string. Returns a dict with
/// `t`, `mean_pbar`, `mean_pibar`, `mean_chi`, `mean_chi_bar`,
/// `per_realization_chi_bar` and `manifest` (JSON text).
#[pyfunction]
#[pyo3(signature = (config, workers=None))]
fn run_ensemble<'py>(
    py: Python<'py>,
    config: &str,
    workers: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg: EnsembleConfig =
        serde_json::from_str(config).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let result = py
        .detach(|| ensemble::with_workers(workers, || ensemble::run_ensemble(&cfg)).and_then(|r| r))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("t", result.grid.points().to_vec())?;
    d.set_item("mean_pbar", &result.mean_pbar)?;
    d.set_item("mean_pibar", &result.mean_pibar)?;
    d.set_item("mean_chi", rows(&result.mean_chi))?;
    d.set_item("mean_chi_bar", result.mean_chi_bar)?;
    d.set_item("per_realization_chi_bar", &result.per_realization_chi_bar)?;
    let manifest = serde_json::to_string(&result.manifest)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    d.set_item("manifest", manifest)?;
    Ok(d)
}

#[pyfunction]
fn semicircle_density(kbar: f64, e: f64) -> PyResult<f64> {
    continuum::semicircle_density(kbar, e).map_err(to_py)
}

/// Continuum-limit classical return probability at each time.
#[pyfunction]
fn continuum_classical(py: Python<'_>, kbar: f64, times: Vec<f64>) -> PyResult<Vec<f64>> {
    let density = SemicircleDensity::sparse(kbar).map_err(to_py)?;
    let g = grid(times)?;
    py.detach(|| continuum::continuum_classical(&density, &g))
        .map(|s| s.values)
        .map_err(to_py)
}

/// Continuum-limit `|ᾱ(t)|²` at each time.
#[pyfunction]
fn continuum_amplitude(py: Python<'_>, kbar: f64, times: Vec<f64>) -> PyResult<Vec<f64>> {
    let density = SemicircleDensity::sparse(kbar).map_err(to_py)?;
    let g = grid(times)?;
    py.detach(|| continuum::continuum_amplitude(&density, &g))
        .map(|s| s.values)
        .map_err(to_py)
}

/// Least-squares power law over `lo <= t <= hi`; returns a dict with
/// `exponent`, `prefactor`, `residual`, `points`.
#[pyfunction]
#[pyo3(signature = (times, values, lo=10.0, hi=100.0, maxima=false))]
fn fit_power_law<'py>(
    py: Python<'py>,
    times: Vec<f64>,
    values: Vec<f64>,
    lo: f64,
    hi: f64,
    maxima: bool,
) -> PyResult<Bound<'py, PyDict>> {
    if times.len() != values.len() {
        return Err(PyValueError::new_err("times and values differ in length"));
    }
    let mut points: Vec<(f64, f64)> = times.iter().copied().zip(values.iter().copied()).collect();
    if maxima {
        let series = transport::ScalarSeries {
            grid: grid(times)?,
            kind: transport::SeriesKind::Quantum,
            values,
        };
        points = continuum::extract_local_maxima(&series, None).map_err(to_py)?;
    }
    let f = continuum::fit_power_law(&points, (lo, hi)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("exponent", f.exponent)?;
    d.set_item("prefactor", f.prefactor)?;
    d.set_item("residual", f.residual)?;
    d.set_item("points", f.points)?;
    Ok(d)
}

#[pymodule]
fn qwalk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(run_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(semicircle_density, m)?)?;
    m.add_function(wrap_pyfunction!(continuum_classical, m)?)?;
    m.add_function(wrap_pyfunction!(continuum_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
