//! Python bindings for `orbgrand-core`.
//!
//! Patterns cross the boundary as sorted lists of 0-based indices in
//! sorted-reliability space; bit vectors as lists of 0/1 integers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use orbgrand_core::channel::SoftVector;
use orbgrand_core::code::CodeChecker;
use orbgrand_core::decoder::decode as core_decode;
use orbgrand_core::pattern::{self, ErrorPattern, UpoOrdering};
use orbgrand_core::sim::{self, SimConfig};
use orbgrand_core::{ilwo, lwo, GrandError, Schedule};

fn py_err(e: GrandError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_lists(ps: Vec<ErrorPattern>) -> Vec<Vec<usize>> {
    ps.into_iter().map(|p| p.support().to_vec()).collect()
}

fn parse_schedule(name: &str) -> PyResult<Schedule> {
    name.parse().map_err(py_err)
}

#[pyfunction]
fn logistic_weight(support: Vec<usize>) -> u64 {
    pattern::logistic_weight(&support)
}

#[pyfunction]
fn improved_logistic_weight(support: Vec<usize>) -> u64 {
    pattern::improved_logistic_weight(&support)
}

/// "le", "gt" or "incomparable".
#[pyfunction]
fn upo_compare(n: usize, a: Vec<usize>, b: Vec<usize>) -> PyResult<&'static str> {
    let a = ErrorPattern::new(n, a).map_err(py_err)?;
    let b = ErrorPattern::new(n, b).map_err(py_err)?;
    Ok(match a.upo_compare(&b).map_err(py_err)? {
        UpoOrdering::LessOrEqual => "le",
        UpoOrdering::Greater => "gt",
        UpoOrdering::Incomparable => "incomparable",
    })
}

#[pyfunction]
fn max_integer_partition(n: usize, weight: u64) -> PyResult<Vec<usize>> {
    Ok(lwo::max_integer_partition(n, weight).map_err(py_err)?.support().to_vec())
}

#[pyfunction]
fn is_last(n: usize, support: Vec<usize>) -> PyResult<bool> {
    Ok(lwo::is_last(&ErrorPattern::new(n, support).map_err(py_err)?))
}

#[pyfunction]
#[pyo3(signature = (n, q, h_max=None))]
fn lwo_sequence(n: usize, q: usize, h_max: Option<usize>) -> Vec<Vec<usize>> {
    to_lists(lwo::lwo_sequence(n, q, h_max))
}

#[pyfunction]
#[pyo3(signature = (n, q, h_max=None))]
fn ilwo_sequence(n: usize, q: usize, h_max: Option<usize>) -> Vec<Vec<usize>> {
    to_lists(ilwo::ilwo_sequence(n, q, h_max))
}

#[pyfunction]
fn approx_sequence(n: usize, q: usize) -> Vec<Vec<usize>> {
    to_lists(ilwo::approx_sequence(n, q))
}

/// Patterns of iLW exactly `dw` produced by the approximate generator.
#[pyfunction]
fn approx_next_weight(n: usize, dw: u64) -> Vec<Vec<usize>> {
    to_lists(ilwo::approx_next_weight(n, dw))
}

/// Returns `{"duplicates": [(first, repeat)], "violations": [(earlier, later)]}`
/// with 1-based positions.
#[pyfunction]
fn verify_schedule<'py>(py: Python<'py>, n: usize, patterns: Vec<Vec<usize>>) -> PyResult<Bound<'py, PyDict>> {
    let ps = patterns
        .into_iter()
        .map(|s| ErrorPattern::new(n, s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(py_err)?;
    let r = sim::verify_schedule(&ps);
    let d = PyDict::new(py);
    d.set_item("duplicates", r.duplicates)?;
    d.set_item("violations", r.violations)?;
    Ok(d)
}

#[pyclass(frozen)]
struct Code {
    inner: orbgrand_core::Code,
}

#[pymethods]
impl Code {
    /// `bch127`, `polar128`, or a path to a code config file.
    #[new]
    #[pyo3(signature = (name_or_path="bch127"))]
    fn new(name_or_path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: orbgrand_core::Code::load(name_or_path).map_err(py_err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn encode(&self, msg: Vec<u8>) -> PyResult<Vec<u8>> {
        self.inner.encode(&msg).map_err(py_err)
    }

    fn is_codeword(&self, word: Vec<u8>) -> bool {
        self.inner.is_codeword(&word)
    }

    fn __repr__(&self) -> String {
        format!("Code({:?}, n={}, k={})", self.inner.name(), self.inner.n(), self.inner.k())
    }
}

/// Decode channel LLRs (positive favours bit 0).
#[pyfunction]
#[pyo3(signature = (llrs, code, schedule="ilwo", q_max=1000, h_max=None))]
fn decode<'py>(
    py: Python<'py>,
    llrs: Vec<f64>,
    code: &Code,
    schedule: &str,
    q_max: u64,
    h_max: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let generator = parse_schedule(schedule)?.generator(code.inner.n(), h_max).map_err(py_err)?;
    let out = core_decode(&SoftVector(llrs), &code.inner, generator, q_max, None).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("decoded", out.is_decoded())?;
    d.set_item("codeword", out.codeword)?;
    d.set_item("queries", out.queries_used)?;
    d.set_item("pattern_hw", out.pattern_hw)?;
    Ok(d)
}

/// BLER simulation; one dict per Eb/N0 value.
#[pyfunction]
#[pyo3(signature = (
    code, schedule, ebn0, q_max=1000, h_max=None, min_errors=100, max_blocks=1_000_000,
    seed=1, workers=1, paired=true
))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    code: &Code,
    schedule: &str,
    ebn0: Vec<f64>,
    q_max: u64,
    h_max: Option<usize>,
    min_errors: u64,
    max_blocks: u64,
    seed: u64,
    workers: usize,
    paired: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = SimConfig {
        schedule: parse_schedule(schedule)?,
        ebn0_list: ebn0,
        q_max,
        h_max,
        min_block_errors: min_errors,
        max_blocks,
        seed,
        workers,
        paired_noise: paired,
    };
    let results = py.detach(|| sim::run_bler(&code.inner, &cfg)).map_err(py_err)?;
    results
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("ebn0_db", r.ebn0_db)?;
            d.set_item("blocks", r.blocks)?;
            d.set_item("block_errors", r.block_errors)?;
            d.set_item("undetected", r.undetected_errors)?;
            d.set_item("bler", r.bler)?;
            d.set_item("mean_queries", r.mean_queries)?;
            d.set_item("max_queries", r.max_queries)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn orbgrand(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Code>()?;
    m.add_function(wrap_pyfunction!(logistic_weight, m)?)?;
    m.add_function(wrap_pyfunction!(improved_logistic_weight, m)?)?;
    m.add_function(wrap_pyfunction!(upo_compare, m)?)?;
    m.add_function(wrap_pyfunction!(max_integer_partition, m)?)?;
    m.add_function(wrap_pyfunction!(is_last, m)?)?;
    m.add_function(wrap_pyfunction!(lwo_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(ilwo_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(approx_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(approx_next_weight, m)?)?;
    m.add_function(wrap_pyfunction!(verify_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add("CSV_HEADER", sim::CSV_HEADER)?;
    Ok(())
}
