//! Python bindings: Young functions, grid functions, the norm engines,
//! dilation checks, the Zak transform and the full verification run.

use std::path::Path;

use num_complex::Complex64;
use orlicz_core::amalgam::{self, AmalgamConfig, AmalgamMode};
use orlicz_core::cli::{run_suite, RunConfig, Report};
use orlicz_core::gridfn::{self, BoxNd, Descriptor};
use orlicz_core::young::{self, Catalog};
use orlicz_core::{dilation, orlicz, zak as zk, Error, ExtNonneg};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn ext(x: ExtNonneg) -> f64 {
    x.to_f64()
}

/// Round-trips a serializable value through Python's json module.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "YoungFunction", module = "orlicz_lab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyYoung {
    inner: young::YoungFunction,
}

#[pymethods]
impl PyYoung {
    /// A catalog name such as `p2` or `phi_b`, or `power:<p>`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Catalog::standard().resolve(spec).map(|inner| PyYoung { inner }).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn __call__(&self, x: f64) -> f64 {
        ext(self.inner.eval(x))
    }

    fn inverse(&self, y: f64) -> PyResult<f64> {
        young::pseudo_inverse(&self.inner, y).map_err(err)
    }

    fn conjugate(&self, y: f64) -> f64 {
        ext(young::conjugate(&self.inner, y))
    }

    /// The declared catalog partner, or the numerical conjugate.
    fn partner(&self) -> PyYoung {
        let inner = Catalog::standard()
            .conjugate_of(self.inner.name())
            .unwrap_or_else(|| young::YoungFunction::numerical_conjugate(&self.inner));
        PyYoung { inner }
    }

    fn flags<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.flags())
    }

    fn __repr__(&self) -> String {
        format!("YoungFunction('{}')", self.inner.name())
    }
}

#[pyclass(name = "GridFunction", module = "orlicz_lab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrid {
    inner: gridfn::GridFunction,
}

#[pymethods]
impl PyGrid {
    /// Samples a named profile (`box01`, `gaussian`, `box:a:b`, ...) on `[a, b)`
    /// with `n` cells.
    #[staticmethod]
    fn sample(descriptor: &str, a: f64, b: f64, n: usize) -> PyResult<Self> {
        let d = Descriptor::parse(descriptor).map_err(err)?;
        gridfn::GridFunction::sample(&d, &BoxNd::interval(a, b), n).map(|inner| PyGrid { inner }).map_err(err)
    }

    /// Samples a named profile on its natural support.
    #[staticmethod]
    #[pyo3(signature = (descriptor, per_unit = 256))]
    fn natural(descriptor: &str, per_unit: usize) -> PyResult<Self> {
        let d = Descriptor::parse(descriptor).map_err(err)?;
        gridfn::GridFunction::sample_natural(&d, per_unit).map(|inner| PyGrid { inner }).map_err(err)
    }

    /// Step function with cell values `values` on `[origin, origin + len·spacing)`.
    #[staticmethod]
    fn from_samples(origin: f64, spacing: f64, values: Vec<Complex64>) -> PyResult<Self> {
        let n = values.len();
        gridfn::GridFunction::from_samples(vec![origin], vec![spacing], vec![n], values)
            .map(|inner| PyGrid { inner })
            .map_err(err)
    }

    #[getter]
    fn shape(&self) -> Vec<usize> {
        self.inner.shape().to_vec()
    }

    #[getter]
    fn origin(&self) -> Vec<f64> {
        self.inner.origin().to_vec()
    }

    #[getter]
    fn spacing(&self) -> Vec<f64> {
        self.inner.spacing().to_vec()
    }

    fn samples(&self) -> Vec<Complex64> {
        self.inner.samples().to_vec()
    }

    fn dilate(&self, lam: f64) -> PyResult<PyGrid> {
        self.inner.dilate(lam).map(|inner| PyGrid { inner }).map_err(err)
    }

    fn translate(&self, y: f64) -> PyResult<PyGrid> {
        self.inner.translate(y).map(|inner| PyGrid { inner }).map_err(err)
    }

    fn modulate(&self, xi: f64) -> PyResult<PyGrid> {
        self.inner.modulate(xi).map(|inner| PyGrid { inner }).map_err(err)
    }

    fn restrict(&self, a: f64, b: f64) -> PyResult<PyGrid> {
        self.inner.restrict(&BoxNd::interval(a, b)).map(|inner| PyGrid { inner }).map_err(err)
    }

    fn __add__(&self, other: &PyGrid) -> PyResult<PyGrid> {
        self.inner.add(&other.inner).map(|inner| PyGrid { inner }).map_err(err)
    }

    fn __mul__(&self, c: Complex64) -> PyGrid {
        PyGrid { inner: self.inner.scaled(c) }
    }

    fn __repr__(&self) -> String {
        format!("GridFunction(origin={:?}, spacing={:?}, shape={:?})", self.inner.origin(), self.inner.spacing(), self.inner.shape())
    }
}

#[pyclass(name = "ZakField", module = "orlicz_lab", frozen)]
struct PyZak {
    inner: zk::ZakField,
}

#[pymethods]
impl PyZak {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    /// Row-major `n×n` values, rows indexed by `t`.
    fn values(&self) -> Vec<Vec<Complex64>> {
        self.inner.values.chunks(self.inner.n).map(|r| r.to_vec()).collect()
    }

    fn modulus<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &zk::modulus_analysis(&self.inner))
    }

    #[pyo3(signature = (m = 1, n_shift = 1))]
    fn residuals<'py>(&self, py: Python<'py>, m: i64, n_shift: i64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &zk::identities_residual(&self.inner, m, n_shift))
    }
}

/// Catalog rows with flags.
#[pyfunction]
fn catalog(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &Catalog::standard().rows())
}

/// `inf{k : ∫Φ(|f|/k) ≤ target}`.
#[pyfunction]
#[pyo3(signature = (f, phi, target = 1.0))]
fn luxemburg(f: &PyGrid, phi: &PyYoung, target: f64) -> PyResult<f64> {
    if !(target > 0.0) {
        return Err(PyValueError::new_err("target must be positive"));
    }
    Ok(ext(orlicz::luxemburg(&f.inner, &phi.inner, target).value))
}

#[pyfunction]
fn amemiya(f: &PyGrid, phi: &PyYoung) -> f64 {
    ext(orlicz::amemiya(&f.inner, &phi.inner))
}

#[pyfunction]
fn seq_luxemburg(a: Vec<f64>, phi: &PyYoung) -> f64 {
    ext(orlicz::seq_luxemburg(&a, &phi.inner).value)
}

/// Continuous and discrete amalgam norms and their ratio.
#[pyfunction]
#[pyo3(signature = (f, phi1, phi2, x_resolution = 64))]
fn amalgam_norm<'py>(py: Python<'py>, f: &PyGrid, phi1: &PyYoung, phi2: &PyYoung, x_resolution: usize) -> PyResult<Bound<'py, PyAny>> {
    let cfg = AmalgamConfig { x_resolution, ..AmalgamConfig::default() };
    let n = amalgam::amalgam_norm(&f.inner, &phi1.inner, &phi2.inner, AmalgamMode::Both, &cfg).map_err(err)?;
    to_py(py, &n)
}

#[pyfunction]
fn discrete_norm(f: &PyGrid, phi1: &PyYoung, phi2: &PyYoung) -> PyResult<f64> {
    amalgam::discrete_norm(&f.inner, &phi1.inner, &phi2.inner).map(ext).map_err(err)
}

/// The exact-constant dilation lemma at one λ, as a record dict.
#[pyfunction]
fn verify_lemma<'py>(py: Python<'py>, f: &PyGrid, phi1: &PyYoung, phi2: &PyYoung, lam: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &dilation::verify_lemma(&f.inner, &phi1.inner, &phi2.inner, lam).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (f, phi1, phi2, per_octave = 2))]
fn verify_main<'py>(py: Python<'py>, f: &PyGrid, phi1: &PyYoung, phi2: &PyYoung, per_octave: usize) -> PyResult<Bound<'py, PyAny>> {
    let grid = dilation::dyadic_grid(per_octave);
    to_py(py, &dilation::verify_main(&f.inner, &phi1.inner, &phi2.inner, &grid).map_err(err)?)
}

/// Dilation sweep of the `W(L^p, L^q)` norm; `p`, `q` may be `inf`.
#[pyfunction]
#[pyo3(signature = (p, q, f, per_octave = 4))]
fn lebesgue_scan<'py>(py: Python<'py>, p: f64, q: f64, f: &PyGrid, per_octave: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &dilation::lebesgue_scan(p, q, &f.inner, &dilation::dyadic_grid(per_octave)).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (f, k = 32, n = 128))]
fn zak(f: &PyGrid, k: usize, n: usize) -> PyResult<PyZak> {
    zk::zak(&f.inner, k, n).map(|inner| PyZak { inner }).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (f, phi, k = 32, n = 128))]
fn zak_norm_bound<'py>(py: Python<'py>, f: &PyGrid, phi: &PyYoung, k: usize, n: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &zk::norm_bound_check(&f.inner, &phi.inner, k, n).map_err(err)?)
}

/// Runs the full suite; writes the report files when `out` is given and
/// returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (config = None, out = None))]
fn verify<'py>(py: Python<'py>, config: Option<&str>, out: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = match config {
        Some(p) => RunConfig::load(Path::new(p)).map_err(err)?,
        None => RunConfig::default(),
    };
    let suite = run_suite(&cfg, &Catalog::standard()).map_err(err)?;
    let report = Report::new(cfg.hash(), suite.records);
    if let Some(dir) = out {
        orlicz_core::cli::emit(&report, &suite.plot, Path::new(dir), &cfg.output.formats).map_err(err)?;
    }
    to_py(py, &report)
}

#[pymodule]
fn orlicz_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyYoung>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyZak>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(luxemburg, m)?)?;
    m.add_function(wrap_pyfunction!(amemiya, m)?)?;
    m.add_function(wrap_pyfunction!(seq_luxemburg, m)?)?;
    m.add_function(wrap_pyfunction!(amalgam_norm, m)?)?;
    m.add_function(wrap_pyfunction!(discrete_norm, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(verify_main, m)?)?;
    m.add_function(wrap_pyfunction!(lebesgue_scan, m)?)?;
    m.add_function(wrap_pyfunction!(zak, m)?)?;
    m.add_function(wrap_pyfunction!(zak_norm_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
