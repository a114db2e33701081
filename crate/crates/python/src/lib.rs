//! Python bindings for the cavity-array simulator.
//!
//! Matrices and traces come back as nested lists (`[row][column]`); wrap
//! them with `numpy.asarray` as needed.

use ::cavity_array as ca;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: ca::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_initial(n: usize, initial: &str) -> PyResult<ca::SingleExcitationState> {
    let bad = || {
        PyValueError::new_err(format!(
            "initial '{initial}': expected atom:<site> or photon:<site>"
        ))
    };
    let (kind, site) = initial.split_once(':').ok_or_else(bad)?;
    let kind = match kind {
        "atom" => ca::Excitation::Atom,
        "photon" => ca::Excitation::Photon,
        _ => return Err(bad()),
    };
    let site = site.parse().map_err(|_| bad())?;
    ca::SingleExcitationState::localized(n, kind, site).map_err(py_err)
}

fn to_rows(nrows: usize, ncols: usize, at: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
    (0..nrows)
        .map(|i| (0..ncols).map(|j| at(i, j)).collect())
        .collect()
}

/// Array size, staggering and atom-field parameters.
#[pyclass(
    name = "ArrayParams",
    module = "cavity_array",
    frozen,
    skip_from_py_object
)]
#[derive(Clone, Copy)]
struct PyArrayParams {
    inner: ca::ArrayParams,
}

#[pymethods]
impl PyArrayParams {
    #[new]
    #[pyo3(signature = (n_cavities, eta, kappa=1.0, omega_f=0.0, delta=0.0, coupling_j=0.0))]
    fn new(
        n_cavities: usize,
        eta: f64,
        kappa: f64,
        omega_f: f64,
        delta: f64,
        coupling_j: f64,
    ) -> PyResult<Self> {
        ca::ArrayParams::new(n_cavities, eta, kappa, omega_f, delta, coupling_j)
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    #[getter]
    fn n_cavities(&self) -> usize {
        self.inner.n_cavities()
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta()
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.inner.kappa()
    }

    #[getter]
    fn omega_f(&self) -> f64 {
        self.inner.omega_f()
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta()
    }

    #[getter]
    fn coupling_j(&self) -> f64 {
        self.inner.coupling_j()
    }

    #[getter]
    fn omega_a(&self) -> f64 {
        self.inner.omega_a()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "ArrayParams(n_cavities={}, eta={}, kappa={}, omega_f={}, delta={}, coupling_j={})",
            p.n_cavities(),
            p.eta(),
            p.kappa(),
            p.omega_f(),
            p.delta(),
            p.coupling_j()
        )
    }
}

/// One photonic normal mode.
#[pyclass(name = "NormalMode", module = "cavity_array", frozen, get_all)]
struct PyNormalMode {
    label: String,
    wavevector: Option<f64>,
    epsilon: Option<f64>,
    theta: Option<f64>,
    frequency: f64,
    amplitudes: Vec<f64>,
}

#[pymethods]
impl PyNormalMode {
    fn __repr__(&self) -> String {
        format!(
            "NormalMode(label='{}', frequency={})",
            self.label, self.frequency
        )
    }
}

/// Per-site probabilities, `p_field[t][site]`, plus totals per time.
#[pyclass(name = "EvolutionTrace", module = "cavity_array", frozen, get_all)]
struct PyTrace {
    times: Vec<f64>,
    p_field: Vec<Vec<f64>>,
    p_atom: Vec<Vec<f64>>,
    total_field: Vec<f64>,
    total_atom: Vec<f64>,
}

impl From<ca::EvolutionTrace> for PyTrace {
    fn from(t: ca::EvolutionTrace) -> Self {
        let pf = &t.p_field;
        let pa = &t.p_atom;
        Self {
            p_field: to_rows(pf.nrows(), pf.ncols(), |i, j| pf[(i, j)]),
            p_atom: to_rows(pa.nrows(), pa.ncols(), |i, j| pa[(i, j)]),
            times: t.times,
            total_field: t.total_field,
            total_atom: t.total_atom,
        }
    }
}

#[pyfunction]
fn tau(eta: f64) -> PyResult<f64> {
    ca::tau(eta).map_err(py_err)
}

#[pyfunction]
fn epsilon_k(kappa: f64, eta: f64, k: f64) -> f64 {
    ca::epsilon_k(kappa, eta, k)
}

#[pyfunction]
fn theta_k(kappa: f64, eta: f64, k: f64) -> PyResult<f64> {
    ca::theta_k(kappa, eta, k).map_err(py_err)
}

#[pyfunction]
fn localization_length(eta: f64) -> PyResult<f64> {
    ca::localization_length(eta).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (j, delta=0.0))]
fn rabi(j: f64, delta: f64) -> f64 {
    ca::rabi(j, delta)
}

/// `(ratio, ok)` for the strong-hopping regime check.
#[pyfunction]
fn regime_validity(params: &PyArrayParams) -> (f64, bool) {
    let r = ca::regime_validity(&params.inner);
    (r.ratio, r.ok)
}

/// Bound mode first, then band modes ordered by `m` and branch.
#[pyfunction]
fn full_spectrum(params: &PyArrayParams) -> PyResult<Vec<PyNormalMode>> {
    let table = ca::full_spectrum(&params.inner).map_err(py_err)?;
    Ok(table
        .modes()
        .iter()
        .map(|m| PyNormalMode {
            label: m.label.to_string(),
            wavevector: m.wavevector,
            epsilon: m.epsilon,
            theta: m.theta,
            frequency: m.frequency,
            amplitudes: m.amplitudes.clone(),
        })
        .collect())
}

#[pyfunction]
fn gap(params: &PyArrayParams) -> PyResult<(f64, f64)> {
    let g = ca::gap(&params.inner).map_err(py_err)?;
    Ok((g.width, g.thermo_bound))
}

#[pyfunction]
fn hopping_matrix(params: &PyArrayParams) -> Vec<Vec<f64>> {
    let h = ca::build_hopping_matrix(&params.inner).entries;
    to_rows(h.nrows(), h.ncols(), |i, j| h[(i, j)])
}

/// `2N x 2N` Hamiltonian, photons first then atoms.
#[pyfunction]
fn full_matrix(params: &PyArrayParams) -> Vec<Vec<f64>> {
    let h = ca::build_full_matrix(&params.inner).entries;
    to_rows(h.nrows(), h.ncols(), |i, j| h[(i, j)])
}

/// Exact propagation of `initial` ("atom:<site>" or "photon:<site>").
#[pyfunction]
fn evolve_exact(
    py: Python<'_>,
    params: &PyArrayParams,
    initial: &str,
    times: Vec<f64>,
) -> PyResult<PyTrace> {
    let p = params.inner;
    let init = parse_initial(p.n_cavities(), initial)?;
    let trace = py
        .detach(|| ca::exact_trace(&p, &init, &times))
        .map_err(py_err)?;
    Ok(trace.into())
}

/// Reduced bound-pair dynamics of `initial`.
#[pyfunction]
fn evolve_effective(
    py: Python<'_>,
    params: &PyArrayParams,
    initial: &str,
    times: Vec<f64>,
) -> PyResult<PyTrace> {
    let p = params.inner;
    let init = parse_initial(p.n_cavities(), initial)?;
    let trace = py
        .detach(|| {
            let model = ca::EffectiveModel::new(&p)?;
            ca::evolve_effective(&model, &init, &times)
        })
        .map_err(py_err)?;
    Ok(trace.into())
}

/// Square of the bound-mode amplitude on site 1.
#[pyfunction]
fn n_script(params: &PyArrayParams) -> PyResult<f64> {
    Ok(ca::EffectiveModel::new(&params.inner)
        .map_err(py_err)?
        .n_script())
}

/// Identity residuals as JSON, at `params` or over the default grid.
#[pyfunction]
#[pyo3(signature = (params=None))]
fn verify(py: Python<'_>, params: Option<&PyArrayParams>) -> PyResult<(String, bool)> {
    let p = params.map(|p| p.inner);
    let report = py
        .detach(|| match p {
            Some(p) => ca::identities::verify_point(&p),
            None => ca::identities::verify_default_grid(),
        })
        .map_err(py_err)?;
    let json = serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((json, report.all_pass()))
}

#[pymodule]
fn cavity_array(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyArrayParams>()?;
    m.add_class::<PyNormalMode>()?;
    m.add_class::<PyTrace>()?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_k, m)?)?;
    m.add_function(wrap_pyfunction!(theta_k, m)?)?;
    m.add_function(wrap_pyfunction!(localization_length, m)?)?;
    m.add_function(wrap_pyfunction!(rabi, m)?)?;
    m.add_function(wrap_pyfunction!(regime_validity, m)?)?;
    m.add_function(wrap_pyfunction!(full_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(gap, m)?)?;
    m.add_function(wrap_pyfunction!(hopping_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(full_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_exact, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_effective, m)?)?;
    m.add_function(wrap_pyfunction!(n_script, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
