//! Python bindings. Structured results come back as plain dicts and lists
//! with the same shape as the CLI's JSON output.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use ::protoalg::equiv::{check_equivalence, check_isomorphism, SimOptions, DEFAULT_ISO_BUDGET, DEFAULT_MAP_BUDGET};
use ::protoalg::exec::{self, Record, StepKind, DEFAULT_MAX_STEPS};
use ::protoalg::frontend::generate::{self, SizeParams};
use ::protoalg::frontend::pretty::{write_alphabet, write_process};
use ::protoalg::frontend::{document_of, fixtures, load_proto_algorithm, parse, pretty, selftest};
use ::protoalg::interp::Value;
use ::protoalg::prove;
use ::protoalg::translate::graph_to_process;

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn step_kind(kind: &str) -> PyResult<StepKind> {
    match kind {
        "algorithmic" => Ok(StepKind::Algorithmic),
        "computational" => Ok(StepKind::Computational),
        other => Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
    }
}

/// A validated proto-algorithm: alphabet, algorithm graph and interpretation.
#[pyclass(frozen, skip_from_py_object, module = "protoalg")]
#[derive(Clone)]
struct ProtoAlgorithm {
    inner: exec::ProtoAlgorithm,
}

#[pymethods]
impl ProtoAlgorithm {
    /// Parse `.palg` source text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        load_proto_algorithm(text).map(|inner| ProtoAlgorithm { inner }).map_err(value_err)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(value_err)?;
        Self::parse(&text)
    }

    /// One of the bundled fixtures, e.g. `"cd"` or `"swap_a"`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        fixtures::by_name(name)
            .map(|inner| ProtoAlgorithm { inner })
            .ok_or_else(|| PyKeyError::new_err(name.to_string()))
    }

    #[staticmethod]
    fn fixture_names() -> Vec<&'static str> {
        fixtures::ALL.iter().map(|(n, _)| *n).collect()
    }

    fn input_values(&self) -> Vec<Vec<i64>> {
        self.inner.input_values().iter().map(|v| v.components().to_vec()).collect()
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.vertex_names().to_vec()
    }

    #[pyo3(signature = (input, max_steps = DEFAULT_MAX_STEPS, trace = false))]
    fn run(&self, py: Python<'_>, input: Vec<i64>, max_steps: usize, trace: bool) -> PyResult<Py<PyAny>> {
        let record = if trace { Record::BOTH } else { Record::NONE };
        let r = self.inner.run(&Value::new(input), max_steps, record).map_err(value_err)?;
        to_py(py, &r)
    }

    /// Algorithmic step from a state given as a dict like the trace entries.
    fn astep(&self, py: Python<'_>, state: Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        let text: String = py.import("json")?.call_method1("dumps", (state,))?.extract()?;
        let s: exec::State = serde_json::from_str(&text).map_err(value_err)?;
        to_py(py, &self.inner.astep(&s).map_err(value_err)?)
    }

    fn to_palg(&self) -> String {
        pretty(&document_of(&self.inner))
    }

    /// The process specification, as a document with ALPHABET and PROCESS.
    fn to_process(&self) -> String {
        let mut out = String::new();
        write_alphabet(&mut out, self.inner.alphabet());
        out.push('\n');
        write_process(&mut out, &graph_to_process(self.inner.graph()));
        out
    }

    fn cross_validate_steps(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &prove::cross_validate_steps(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "<ProtoAlgorithm root={} vertices={}>",
            self.inner.graph().graph().root(),
            self.inner.vertex_names().len()
        )
    }
}

/// Diagnostics for `.palg` text; empty when it parses.
#[pyfunction]
fn diagnostics(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    match parse(text) {
        Ok(_) => to_py(py, &Vec::<()>::new()),
        Err(diags) => {
            let rows: Vec<_> = diags
                .iter()
                .map(|d| serde_json::json!({ "line": d.line, "column": d.column, "code": format!("{:?}", d.code), "message": d.message }))
                .collect();
            to_py(py, &rows)
        }
    }
}

#[pyfunction]
#[pyo3(signature = (a, b, budget = DEFAULT_ISO_BUDGET))]
fn isomorphism(py: Python<'_>, a: &ProtoAlgorithm, b: &ProtoAlgorithm, budget: u64) -> PyResult<Py<PyAny>> {
    let v = py.detach(|| check_isomorphism(&a.inner, &b.inner, budget));
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (a, b, kind = "algorithmic", budget = DEFAULT_MAP_BUDGET, max_steps = DEFAULT_MAX_STEPS))]
fn equivalence(
    py: Python<'_>,
    a: &ProtoAlgorithm,
    b: &ProtoAlgorithm,
    kind: &str,
    budget: u64,
    max_steps: usize,
) -> PyResult<Py<PyAny>> {
    let kind = step_kind(kind)?;
    let opts = SimOptions { bound: max_steps, budget };
    let v = py.detach(|| check_equivalence(&a.inner, &b.inner, kind, opts)).map_err(value_err)?;
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (a, b, bound = 10_000))]
fn prove_aeqv(py: Python<'_>, a: &ProtoAlgorithm, b: &ProtoAlgorithm, bound: usize) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| prove::prove_aeqv(&a.inner, &b.inner, None, bound)).map_err(value_err)?;
    to_py(py, &r)
}

/// A random proto-algorithm and its variants, keyed by tag.
#[pyfunction]
fn generate_random(seed: u64) -> (ProtoAlgorithm, Vec<(&'static str, ProtoAlgorithm)>) {
    let g = generate::generate_random(seed, &SizeParams::default());
    let variants = g.variants.into_iter().map(|v| (v.tag.name(), ProtoAlgorithm { inner: v.algorithm })).collect();
    (ProtoAlgorithm { inner: g.base }, variants)
}

#[pyfunction(name = "selftest")]
#[pyo3(signature = (seed = 0, count = 20))]
fn run_selftest(py: Python<'_>, seed: u64, count: usize) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| selftest::selftest(seed, count, &SizeParams::default()));
    to_py(py, &r)
}

#[pymodule]
fn protoalg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ProtoAlgorithm>()?;
    m.add_function(wrap_pyfunction!(diagnostics, m)?)?;
    m.add_function(wrap_pyfunction!(isomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(prove_aeqv, m)?)?;
    m.add_function(wrap_pyfunction!(generate_random, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
