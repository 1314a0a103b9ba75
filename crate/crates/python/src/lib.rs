//! Python module `hellinger_geom`: measures, Gaussians, distances, geodesics,
//! Fisher matrices and the verification suites.

use hellinger_core::families::gaussian::integrate_geodesic;
use hellinger_core::families::{
    self as fam, gaussian_fr_bvp, BvpOptions, ExponentialFamily, GaussianGridFamily, GaussianParams, PoissonFamily,
};
use hellinger_core::fisher_rao::{self as fr, default_step, fisher_matrix_fd, ConePoint, ParametricFamily};
use hellinger_core::hellinger as he;
use hellinger_core::measure::tv_norm_diff;
use hellinger_core::verify::{run_suite, Suite};
use hellinger_core::{DiscreteMeasure, Error, GridMeasure, Label, ScaleConfig};
use nalgebra::{DMatrix, DVector};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyString, PyTuple};

create_exception!(hellinger_geom, HellingerError, PyValueError, "Invalid input or violated precondition.");
create_exception!(hellinger_geom, NoConvergenceError, PyRuntimeError, "An iterative solver did not converge.");

fn err(e: Error) -> PyErr {
    match e {
        Error::NoConvergence { .. } => NoConvergenceError::new_err(e.to_string()),
        _ => HellingerError::new_err(e.to_string()),
    }
}

fn scale(sigma: f64) -> PyResult<ScaleConfig> {
    ScaleConfig::new(sigma).map_err(err)
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// An atom label: an int, a str or a tuple of labels.
#[derive(FromPyObject)]
enum PyLabel {
    Int(i64),
    Str(String),
    Tuple(Vec<PyLabel>),
}

impl From<PyLabel> for Label {
    fn from(l: PyLabel) -> Self {
        match l {
            PyLabel::Int(i) => Label::Int(i),
            PyLabel::Str(s) => Label::Str(s),
            PyLabel::Tuple(t) => Label::Tuple(t.into_iter().map(Label::from).collect()),
        }
    }
}

fn label_to_py<'py>(py: Python<'py>, l: &Label) -> PyResult<Bound<'py, PyAny>> {
    Ok(match l {
        Label::Int(i) => i.into_pyobject(py)?.into_any(),
        Label::Str(s) => PyString::new(py, s).into_any(),
        Label::Tuple(t) => {
            let items = t.iter().map(|x| label_to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyTuple::new(py, items)?.into_any()
        }
    })
}

/// A finite measure, discrete or on a regular grid.
#[pyclass(name = "Measure", module = "hellinger_geom", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMeasure(hellinger_core::Measure);

#[pymethods]
impl PyMeasure {
    #[staticmethod]
    fn discrete(support: Vec<PyLabel>, weights: Vec<f64>) -> PyResult<Self> {
        let support = support.into_iter().map(Label::from).collect();
        Ok(Self(DiscreteMeasure::new(support, weights).map_err(err)?.into()))
    }

    #[staticmethod]
    fn grid(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>, density: Vec<f64>) -> PyResult<Self> {
        Ok(Self(GridMeasure::new(origin, spacing, shape, density).map_err(err)?.into()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        hellinger_core::Measure::from_json(text)
            .map(Self)
            .map_err(|e| HellingerError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn total_mass(&self) -> f64 {
        self.0.total_mass()
    }

    #[getter]
    fn is_discrete(&self) -> bool {
        self.0.as_discrete().is_some()
    }

    /// `(label, mass)` pairs of a discrete measure, sorted by label.
    fn atoms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Bound<'py, PyAny>, f64)>> {
        let d = self
            .0
            .as_discrete()
            .ok_or_else(|| HellingerError::new_err("grid measures have no atoms"))?;
        d.atoms().iter().map(|(l, w)| Ok((label_to_py(py, l)?, *w))).collect()
    }

    /// Row-major density values of a grid measure.
    fn density(&self) -> PyResult<Vec<f64>> {
        self.0
            .as_grid()
            .map(|g| g.density().to_vec())
            .ok_or_else(|| HellingerError::new_err("discrete measures have no density"))
    }

    fn scaled(&self, r: f64) -> PyResult<Self> {
        self.0.scaled(r).map(Self).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Measure({})", self.0.to_json())
    }
}

/// A nondegenerate Gaussian `N(mean, cov)`.
#[pyclass(name = "Gaussian", module = "hellinger_geom", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGaussian(GaussianParams);

#[pymethods]
impl PyGaussian {
    #[new]
    fn new(mean: Vec<f64>, cov: Vec<Vec<f64>>) -> PyResult<Self> {
        let d = mean.len();
        if cov.len() != d || cov.iter().any(|r| r.len() != d) {
            return Err(HellingerError::new_err(format!("covariance must be {d} x {d}")));
        }
        let cov = DMatrix::from_row_iterator(d, d, cov.into_iter().flatten());
        GaussianParams::new(DVector::from_vec(mean), cov).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        GaussianParams::from_json(text)
            .map(Self)
            .map_err(|e| HellingerError::new_err(e.to_string()))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn mean(&self) -> Vec<f64> {
        self.0.mean().iter().copied().collect()
    }

    #[getter]
    fn cov(&self) -> Vec<Vec<f64>> {
        rows(self.0.cov())
    }

    fn __repr__(&self) -> String {
        format!("Gaussian({})", self.0.to_json())
    }
}

#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn hellinger_distance(a: &PyMeasure, b: &PyMeasure, sigma: f64) -> PyResult<f64> {
    he::hellinger_distance(&a.0, &b.0, &scale(sigma)?).map_err(err)
}

#[pyfunction]
fn hellinger_affinity(a: &PyMeasure, b: &PyMeasure) -> PyResult<PyMeasure> {
    he::hellinger_affinity(&a.0, &b.0).map(PyMeasure).map_err(err)
}

#[pyfunction]
fn tv_distance(a: &PyMeasure, b: &PyMeasure) -> PyResult<f64> {
    tv_norm_diff(&a.0, &b.0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, s))]
fn hellinger_geodesic(a: &PyMeasure, b: &PyMeasure, s: f64) -> PyResult<PyMeasure> {
    he::hellinger_geodesic(&a.0, &b.0, s).map(PyMeasure).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, s, sigma = 1.0))]
fn geodesic_mass(a: &PyMeasure, b: &PyMeasure, s: f64, sigma: f64) -> PyResult<f64> {
    he::geodesic_mass(&a.0, &b.0, s, &scale(sigma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn bhattacharyya_distance(a: &PyMeasure, b: &PyMeasure, sigma: f64) -> PyResult<f64> {
    fr::bhattacharyya_distance(&a.0, &b.0, &scale(sigma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, s, sigma = 1.0))]
fn spherical_geodesic(a: &PyMeasure, b: &PyMeasure, s: f64, sigma: f64) -> PyResult<PyMeasure> {
    fr::spherical_geodesic(&a.0, &b.0, s, &scale(sigma)?)
        .map(PyMeasure)
        .map_err(err)
}

/// Fisher-Rao distance on the cone over probability measures.
#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn cone_distance(a: &PyMeasure, b: &PyMeasure, sigma: f64) -> PyResult<f64> {
    let cfg = scale(sigma)?;
    let (c0, c1) = (ConePoint::from_measure(&a.0).map_err(err)?, ConePoint::from_measure(&b.0).map_err(err)?);
    let base = fr::bhattacharyya_distance(c0.base(), c1.base(), &cfg).map_err(err)?;
    Ok(fr::cone_distance(&c0, &c1, base, &cfg))
}

#[pyfunction]
#[pyo3(signature = (a, b, s, sigma = 1.0))]
fn cone_geodesic(a: &PyMeasure, b: &PyMeasure, s: f64, sigma: f64) -> PyResult<PyMeasure> {
    let cfg = scale(sigma)?;
    let (c0, c1) = (ConePoint::from_measure(&a.0).map_err(err)?, ConePoint::from_measure(&b.0).map_err(err)?);
    let base = fr::bhattacharyya_distance(c0.base(), c1.base(), &cfg).map_err(err)?;
    fr::cone_geodesic(&c0, &c1, |z| fr::spherical_geodesic(c0.base(), c1.base(), z, &cfg), base, s, &cfg)
        .map(PyMeasure)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn poisson_fr(a: Vec<f64>, b: Vec<f64>, sigma: f64) -> PyResult<f64> {
    fam::poisson_fr(&a, &b, &scale(sigma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn poisson_hellinger(a: Vec<f64>, b: Vec<f64>, sigma: f64) -> PyResult<f64> {
    fam::poisson_hellinger(&a, &b, &scale(sigma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn exp_fr(a: Vec<f64>, b: Vec<f64>, sigma: f64) -> PyResult<f64> {
    fam::exp_fr(&a, &b, &scale(sigma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn exp_hellinger(a: Vec<f64>, b: Vec<f64>, sigma: f64) -> PyResult<f64> {
    fam::exp_hellinger(&a, &b, &scale(sigma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn gaussian_hellinger(a: &PyGaussian, b: &PyGaussian, sigma: f64) -> PyResult<f64> {
    fam::gaussian_hellinger(&a.0, &b.0, &scale(sigma)?).map_err(err)
}

/// Returns `(distance, method)`.
#[pyfunction]
#[pyo3(signature = (a, b, sigma = 1.0))]
fn gaussian_fr(a: &PyGaussian, b: &PyGaussian, sigma: f64) -> PyResult<(f64, &'static str)> {
    let (d, method) = fam::gaussian_fr(&a.0, &b.0, &scale(sigma)?).map_err(err)?;
    Ok((d, method.describe()))
}

/// `samples + 1` Gaussians at `s = k / samples` along the shooting geodesic.
#[pyfunction]
#[pyo3(signature = (a, b, samples = 10, sigma = 1.0))]
fn gaussian_geodesic(a: &PyGaussian, b: &PyGaussian, samples: usize, sigma: f64) -> PyResult<Vec<(f64, PyGaussian)>> {
    if samples == 0 {
        return Err(HellingerError::new_err("samples must be at least 1"));
    }
    let sol = gaussian_fr_bvp(&a.0, &b.0, &scale(sigma)?, &BvpOptions::default()).map_err(err)?;
    let per = 1000usize.div_ceil(samples);
    let path = integrate_geodesic(&a.0, &sol.initial_dual, samples * per).map_err(err)?;
    (0..=samples)
        .map(|k| {
            let g = match k {
                0 => a.0.clone(),
                k if k == samples => b.0.clone(),
                k => path[k * per].params().map_err(err)?,
            };
            Ok((k as f64 / samples as f64, PyGaussian(g)))
        })
        .collect()
}

fn fisher_pair(
    family: &dyn ParametricFamily,
    p: &[f64],
    eps: Option<f64>,
    cfg: &ScaleConfig,
) -> PyResult<(Option<Vec<Vec<f64>>>, Vec<Vec<f64>>)> {
    let eps = eps.unwrap_or_else(|| default_step(p));
    let closed = family.closed_form_metric(p, cfg).as_ref().map(rows);
    let fd = fisher_matrix_fd(family, p, eps, cfg).map_err(err)?;
    Ok((closed, rows(&fd)))
}

/// `(closed_form, finite_difference)` metric matrices for `family` in
/// `{"poisson", "exp", "gauss"}`. `at` is a parameter list, or a Gaussian
/// for `"gauss"`, whose parameters are the mean followed by the variances.
#[pyfunction]
#[pyo3(signature = (family, at, sigma = 1.0, eps = None))]
fn fisher_matrix(
    family: &str,
    at: &Bound<'_, PyAny>,
    sigma: f64,
    eps: Option<f64>,
) -> PyResult<(Option<Vec<Vec<f64>>>, Vec<Vec<f64>>)> {
    let cfg = scale(sigma)?;
    match family {
        "poisson" => {
            let p: Vec<f64> = at.extract()?;
            fisher_pair(&PoissonFamily::new(p.len()), &p, eps, &cfg)
        }
        "exp" => {
            let p: Vec<f64> = at.extract()?;
            fisher_pair(&ExponentialFamily::new(p.len()), &p, eps, &cfg)
        }
        "gauss" => {
            let g = at.cast::<PyGaussian>()?.get().0.clone();
            let grid = GaussianGridFamily::covering(&[&g]).map_err(err)?;
            fisher_pair(&grid, &grid.params_to_vec(&g), eps, &cfg)
        }
        other => Err(HellingerError::new_err(format!(
            "unknown family '{other}' (expected poisson, exp or gauss)"
        ))),
    }
}

/// Runs a seeded suite and returns `(passed, report)`.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = 0))]
fn verify(py: Python<'_>, suite: &str, seed: u64) -> PyResult<(bool, String)> {
    let suite: Suite = suite.parse().map_err(|e: hellinger_core::verify::UnknownSuite| HellingerError::new_err(e.to_string()))?;
    let report = py.detach(|| run_suite(suite, seed));
    Ok((report.passed(), report.to_string()))
}

#[pymodule]
fn hellinger_geom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("HellingerError", py.get_type::<HellingerError>())?;
    m.add("NoConvergenceError", py.get_type::<NoConvergenceError>())?;
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyGaussian>()?;
    m.add_function(wrap_pyfunction!(hellinger_distance, m)?)?;
    m.add_function(wrap_pyfunction!(hellinger_affinity, m)?)?;
    m.add_function(wrap_pyfunction!(tv_distance, m)?)?;
    m.add_function(wrap_pyfunction!(hellinger_geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic_mass, m)?)?;
    m.add_function(wrap_pyfunction!(bhattacharyya_distance, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(cone_distance, m)?)?;
    m.add_function(wrap_pyfunction!(cone_geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_fr, m)?)?;
    m.add_function(wrap_pyfunction!(poisson_hellinger, m)?)?;
    m.add_function(wrap_pyfunction!(exp_fr, m)?)?;
    m.add_function(wrap_pyfunction!(exp_hellinger, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_hellinger, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_fr, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
