//! Python bindings. Rationals cross the boundary as `"num/den"` strings so
//! nothing is rounded on the way in.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use schilling_core::cli::{bisect_root, THRESHOLDS};
use schilling_core::exactq::{self, Rational, SeedIndex};
use schilling_core::prover::{self, Budget, ProverError, ReplayOptions, Seed};
use schilling_core::spectral;
use schilling_core::zeroset::{self, Interval};

create_exception!(pyschilling, DerivationError, PyException);
create_exception!(pyschilling, RegimeError, DerivationError);
create_exception!(pyschilling, StepFailure, DerivationError);

fn rational(s: &str) -> PyResult<Rational> {
    s.parse()
        .map_err(|e: exactq::ExactError| PyValueError::new_err(e.to_string()))
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn prover_err(e: ProverError) -> PyErr {
    match e {
        ProverError::Regime(_) | ProverError::HalfGuardViolated => {
            RegimeError::new_err(e.to_string())
        }
        ProverError::StepFailure { .. } | ProverError::GoalNotReached => {
            StepFailure::new_err(e.to_string())
        }
        other => DerivationError::new_err(other.to_string()),
    }
}

fn seed(n: &str, eps: i8) -> PyResult<Seed> {
    let n: SeedIndex = n.parse().map_err(value_err)?;
    Ok(Seed { n, epsilon: eps })
}

/// Regime tag of `q`: CASE_I, CASE_II, ABOVE_THRESHOLD or INVALID.
#[pyfunction]
fn regime(q: &str) -> PyResult<String> {
    Ok(exactq::classify_regime(&rational(q)?).tag.to_string())
}

/// Closed-form endpoints used by the derivation, as exact strings.
#[pyfunction]
fn profile<'py>(py: Python<'py>, q: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = exactq::derived_quantities(&rational(q)?).map_err(value_err)?;
    let d = PyDict::new(py);
    for (k, v) in [
        ("q", &p.q),
        ("Q", &p.big_q),
        ("1-Q", &p.one_minus_big_q),
        ("qQ", &p.q_big_q),
        ("q(2-Q)", &p.q_two_minus_big_q),
        ("q^2(2-Q)", &p.q2_two_minus_big_q),
        ("q-q^2(2-Q)", &p.q_minus_q2_two_minus_big_q),
        ("q+q^2Q", &p.q_plus_q2_big_q),
        ("1-qQ", &p.one_minus_q_big_q),
        ("1-q(2-Q)", &p.one_minus_q_two_minus_big_q),
    ] {
        d.set_item(k, v.to_string())?;
    }
    Ok(d)
}

/// Evaluates a named side condition (e.g. "INEQ12") exactly at `q`.
#[pyfunction]
fn check_inequality(name: &str, q: &str) -> PyResult<bool> {
    exactq::check_named_inequality(name, &rational(q)?).map_err(value_err)
}

/// `(label, polynomial, decimal approximation)` for the three thresholds.
#[pyfunction]
fn thresholds() -> Vec<(String, String, f64)> {
    THRESHOLDS
        .iter()
        .map(|(label, poly, _, coeffs)| {
            (
                label.to_string(),
                poly.to_string(),
                bisect_root(coeffs, 0.0, 1.0, 1e-12),
            )
        })
        .collect()
}

/// Finite union of intervals and points with exact rational endpoints.
#[pyclass(name = "ZeroSet", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyZeroSet(zeroset::ZeroSet);

#[pymethods]
impl PyZeroSet {
    #[new]
    fn empty() -> Self {
        PyZeroSet(zeroset::ZeroSet::empty())
    }

    #[staticmethod]
    fn real_line() -> Self {
        PyZeroSet(zeroset::ZeroSet::real_line())
    }

    /// Interval between `a` and `b` with the given end types.
    #[staticmethod]
    #[pyo3(signature = (a, b, lo_closed = true, hi_closed = true))]
    fn interval(a: &str, b: &str, lo_closed: bool, hi_closed: bool) -> PyResult<Self> {
        let (a, b) = (rational(a)?, rational(b)?);
        let lo = if lo_closed {
            zeroset::EndPoint::closed(a)
        } else {
            zeroset::EndPoint::open(a)
        };
        let hi = if hi_closed {
            zeroset::EndPoint::closed(b)
        } else {
            zeroset::EndPoint::open(b)
        };
        Ok(PyZeroSet(zeroset::ZeroSet::from_interval(
            Interval::new(lo, hi).map_err(value_err)?,
        )))
    }

    #[staticmethod]
    fn point(a: &str) -> PyResult<Self> {
        Ok(PyZeroSet(zeroset::ZeroSet::from_pieces([rational(a)?])))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyZeroSet).map_err(value_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("zero sets serialize")
    }

    fn union(&self, other: &PyZeroSet) -> Self {
        PyZeroSet(self.0.union(&other.0))
    }

    fn intersect(&self, other: &PyZeroSet) -> Self {
        PyZeroSet(self.0.intersect(&other.0))
    }

    fn translate(&self, t: &str) -> PyResult<Self> {
        Ok(PyZeroSet(self.0.translate(&rational(t)?)))
    }

    fn scale(&self, s: &str) -> PyResult<Self> {
        self.0
            .scale(&rational(s)?)
            .map(PyZeroSet)
            .map_err(value_err)
    }

    fn mirror(&self) -> Self {
        PyZeroSet(self.0.mirror())
    }

    fn symmetrize(&self) -> Self {
        PyZeroSet(self.0.symmetrize())
    }

    fn contains(&self, x: &str) -> PyResult<bool> {
        Ok(self.0.contains_point(&rational(x)?))
    }

    fn contains_set(&self, other: &PyZeroSet) -> bool {
        self.0.contains_set(&other.0)
    }

    fn goal_reached(&self, q: &str) -> PyResult<bool> {
        Ok(self.0.goal_reached(&rational(q)?))
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn piece_count(&self) -> usize {
        self.0.piece_count()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ZeroSet({})", self.0)
    }
}

/// Step-by-step record of a derivation.
#[pyclass(name = "Certificate", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate(prover::Certificate);

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        prover::Certificate::from_json(text)
            .map(PyCertificate)
            .map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn q(&self) -> String {
        self.0.q.to_string()
    }

    #[getter]
    fn regime(&self) -> String {
        self.0.regime.tag.to_string()
    }

    #[getter]
    fn verdict(&self) -> String {
        self.0.verdict.to_string()
    }

    #[getter]
    fn step_count(&self) -> usize {
        self.0.step_count()
    }

    #[getter]
    fn rules(&self) -> Vec<String> {
        self.0.steps.iter().map(|s| s.rule.to_string()).collect()
    }

    #[getter]
    fn final_set(&self) -> PyZeroSet {
        PyZeroSet(self.0.final_set.clone())
    }

    /// `(ok, failing step or None, reason or None)`.
    fn verify(&self) -> (bool, Option<usize>, Option<String>) {
        let v = prover::verify_certificate(&self.0);
        match v.failure {
            None => (true, None, None),
            Some((step, why)) => (false, step, Some(why)),
        }
    }
}

/// Replays the hand derivation for `q`.
#[pyfunction]
#[pyo3(signature = (q, seed_n = "0", seed_eps = 1, override_regime = false))]
fn certify(q: &str, seed_n: &str, seed_eps: i8, override_regime: bool) -> PyResult<PyCertificate> {
    prover::replay_paper_proof(
        &rational(q)?,
        seed(seed_n, seed_eps)?,
        ReplayOptions { override_regime },
    )
    .map(PyCertificate)
    .map_err(prover_err)
}

/// Runs the rules to a fixpoint. Returns a dict with `status`, `passes`,
/// `goal_pass`, `set` and `certificate`.
#[pyfunction]
#[pyo3(signature = (q, passes = 64, max_intervals = 4096, seed_n = "0", seed_eps = 1))]
fn saturate<'py>(
    py: Python<'py>,
    q: &str,
    passes: usize,
    max_intervals: usize,
    seed_n: &str,
    seed_eps: i8,
) -> PyResult<Bound<'py, PyDict>> {
    let q = rational(q)?;
    let seed = seed(seed_n, seed_eps)?;
    let out = py
        .detach(|| prover::saturate(&q, seed, Budget::new(passes, max_intervals)))
        .map_err(prover_err)?;
    let d = PyDict::new(py);
    d.set_item("status", out.status.to_string())?;
    d.set_item("passes", out.passes)?;
    d.set_item("goal_pass", out.goal_pass)?;
    d.set_item("set", PyZeroSet(out.set))?;
    d.set_item("certificate", PyCertificate(out.certificate))?;
    Ok(d)
}

/// Parses and re-checks a certificate given as JSON text.
#[pyfunction]
fn verify(text: &str) -> PyResult<(bool, Option<usize>, Option<String>)> {
    Ok(PyCertificate::from_json(text)?.verify())
}

fn grid_function(q: f64, values: Vec<f64>) -> PyResult<spectral::GridFunction> {
    let grid = spectral::Grid::new(q, values.len()).map_err(value_err)?;
    spectral::GridFunction::new(grid, values).map_err(value_err)
}

/// Grid points of the `n`-point uniform grid over `[-Q, Q]`.
#[pyfunction]
fn grid_points(q: f64, n: usize) -> PyResult<Vec<f64>> {
    Ok(spectral::Grid::new(q, n)
        .map_err(value_err)?
        .points()
        .to_vec())
}

/// `T` applied to samples on the uniform grid.
#[pyfunction]
fn apply_operator(q: f64, values: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(spectral::apply_operator(&grid_function(q, values)?).into_values())
}

#[pyfunction]
fn residual(q: f64, values: Vec<f64>) -> PyResult<f64> {
    Ok(spectral::residual(&grid_function(q, values)?))
}

#[pyfunction]
fn lemma2_check(
    q: f64,
    values: Vec<f64>,
    m: u32,
    n: u32,
    eps: i8,
    samples: usize,
) -> PyResult<f64> {
    spectral::lemma2_check(&grid_function(q, values)?, m, n, eps, samples).map_err(value_err)
}

/// `(dev0, devQ)`.
#[pyfunction]
fn remark2_check(q: f64, values: Vec<f64>) -> PyResult<(f64, f64)> {
    let d = spectral::remark2_check(&grid_function(q, values)?);
    Ok((d.dev0, d.dev_q))
}

/// Power iteration and residual search on the `n`-point grid.
#[pyfunction]
#[pyo3(signature = (q, n, iters = 200, seed = 0, tol = 1e-10, max_power_iters = 10_000))]
fn spectral_probe<'py>(
    py: Python<'py>,
    q: f64,
    n: usize,
    iters: usize,
    seed: u64,
    tol: f64,
    max_power_iters: usize,
) -> PyResult<Bound<'py, PyDict>> {
    if iters == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(PyValueError::new_err("iters must be positive and tol > 0"));
    }
    let grid = spectral::Grid::new(q, n).map_err(value_err)?;
    let (power, search) = py.detach(|| {
        let a = spectral::assemble_matrix(&grid);
        (
            spectral::power_iteration(&a, tol, max_power_iters, seed),
            spectral::min_residual_search(&grid, iters, seed),
        )
    });
    let d = PyDict::new(py);
    d.set_item("points", grid.points().to_vec())?;
    d.set_item("lambda", power.lambda)?;
    d.set_item("converged", power.converged)?;
    d.set_item("iterations", power.iterations)?;
    d.set_item("eigenvector", power.v.into_values())?;
    d.set_item("r", search.r)?;
    d.set_item("candidate", search.f.into_values())?;
    d.set_item("history", search.history)?;
    Ok(d)
}

#[pymodule]
fn pyschilling(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("DerivationError", py.get_type::<DerivationError>())?;
    m.add("RegimeError", py.get_type::<RegimeError>())?;
    m.add("StepFailure", py.get_type::<StepFailure>())?;
    m.add_class::<PyZeroSet>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(regime, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(check_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(saturate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(grid_points, m)?)?;
    m.add_function(wrap_pyfunction!(apply_operator, m)?)?;
    m.add_function(wrap_pyfunction!(residual, m)?)?;
    m.add_function(wrap_pyfunction!(lemma2_check, m)?)?;
    m.add_function(wrap_pyfunction!(remark2_check, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_probe, m)?)?;
    Ok(())
}
