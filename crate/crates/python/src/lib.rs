//! Python bindings. Series and automorphisms are passed as strings in the
//! command-line syntax together with a ring descriptor; ring elements come
//! back as strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use laurentcc_core::aut::AutElement;
use laurentcc_core::cocycles::{probe_conjecture, Cocycle, ProbeConfig};
use laurentcc_core::lie::{lie_bott as lie_bott_value, lie_det as lie_det_value, virasoro_pairing, Derivation};
use laurentcc_core::parse::parse_series;
use laurentcc_core::precision::Precision;
use laurentcc_core::report::VerificationReport;
use laurentcc_core::rings::Ring;
use laurentcc_core::series::LaurentSeries;
use laurentcc_core::suites::{self, Criterion, SuiteConfig};
use laurentcc_core::symbol::SymbolStrategy;
use laurentcc_core::Error;

fn py_err(e: Error) -> PyErr {
    if e.is_internal() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn ring(desc: &str) -> PyResult<Ring> {
    Ring::parse(desc).map_err(py_err)
}

fn series(text: &str, r: &Ring) -> PyResult<LaurentSeries> {
    parse_series(text, r).map_err(py_err)
}

fn aut(text: &str, r: &Ring) -> PyResult<AutElement> {
    AutElement::new(series(text, r)?).map_err(py_err)
}

fn strategy(name: Option<&str>) -> PyResult<SymbolStrategy> {
    name.map_or(Ok(SymbolStrategy::default()), |s| s.parse().map_err(py_err))
}

fn precision(n: i64, stability: bool) -> Precision {
    Precision { terms: n, stability, guard: 0 }
}

fn report_dict(py: Python<'_>, report: &VerificationReport) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (report.to_json(),))?.unbind())
}

/// Normal form of a series over the ring `ring_desc`.
#[pyfunction]
#[pyo3(signature = (text, ring_desc = "Q"))]
fn normalize(text: &str, ring_desc: &str) -> PyResult<String> {
    Ok(series(text, &ring(ring_desc)?)?.to_string())
}

/// Contou-Carrere symbol `CC(f, g)`.
#[pyfunction]
#[pyo3(signature = (f, g, ring_desc = "Q", strategy_name = None))]
fn cc(f: &str, g: &str, ring_desc: &str, strategy_name: Option<&str>) -> PyResult<String> {
    let r = ring(ring_desc)?;
    let v = laurentcc_core::symbol::cc(&series(f, &r)?, &series(g, &r)?, strategy(strategy_name)?).map_err(py_err)?;
    Ok(v.to_string())
}

fn cocycle(which: Cocycle, f: &str, g: &str, ring_desc: &str, n: i64, stability: bool) -> PyResult<String> {
    let r = ring(ring_desc)?;
    let v =
        which.eval(&aut(f, &r)?, &aut(g, &r)?, SymbolStrategy::default(), precision(n, stability)).map_err(py_err)?;
    Ok(v.to_string())
}

/// Formal Bott-Thurston cocycle `B(f, g)`.
#[pyfunction]
#[pyo3(signature = (f, g, ring_desc = "Q", precision = 32, stability = true))]
fn bott(f: &str, g: &str, ring_desc: &str, precision: i64, stability: bool) -> PyResult<String> {
    cocycle(Cocycle::BottThurston, f, g, ring_desc, precision, stability)
}

/// Determinantal cocycle `D(f, g)`.
#[pyfunction]
#[pyo3(signature = (f, g, ring_desc = "Q", precision = 32, stability = true))]
fn det(f: &str, g: &str, ring_desc: &str, precision: i64, stability: bool) -> PyResult<String> {
    cocycle(Cocycle::Determinant, f, g, ring_desc, precision, stability)
}

fn derivations(g1: &str, g2: &str, ring_desc: &str) -> PyResult<(Derivation, Derivation)> {
    let r = ring(ring_desc)?;
    Ok((Derivation::new(series(g1, &r)?), Derivation::new(series(g2, &r)?)))
}

/// Lie cocycle of `B` on `g1 d/dt, g2 d/dt`.
#[pyfunction]
#[pyo3(signature = (g1, g2, ring_desc = "Q"))]
fn lie_bott(g1: &str, g2: &str, ring_desc: &str) -> PyResult<String> {
    let (a, b) = derivations(g1, g2, ring_desc)?;
    Ok(lie_bott_value(&a, &b).map_err(py_err)?.to_string())
}

/// Lie cocycle of `D` on `g1 d/dt, g2 d/dt`.
#[pyfunction]
#[pyo3(signature = (g1, g2, ring_desc = "Q"))]
fn lie_det(g1: &str, g2: &str, ring_desc: &str) -> PyResult<String> {
    let (a, b) = derivations(g1, g2, ring_desc)?;
    Ok(lie_det_value(&a, &b).map_err(py_err)?.to_string())
}

/// Closed form of a Lie cocycle (`"bott"` or `"det"`) on `(L_m, L_n)`.
#[pyfunction]
#[pyo3(signature = (m, n, which = "bott"))]
fn virasoro(m: i64, n: i64, which: &str) -> PyResult<String> {
    let which: Cocycle = which.parse().map_err(py_err)?;
    Ok(virasoro_pairing(m, n, which).to_string())
}

/// Runs the verification suites and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (criteria = None, seed = 0))]
fn selftest(py: Python<'_>, criteria: Option<Vec<usize>>, seed: u64) -> PyResult<Py<PyAny>> {
    let chosen = match criteria {
        None => Criterion::ALL.to_vec(),
        Some(ks) => ks
            .into_iter()
            .map(|k| {
                Criterion::ALL
                    .get(k.wrapping_sub(1))
                    .copied()
                    .ok_or_else(|| PyValueError::new_err(format!("criterion {k} is not between 1 and 11")))
            })
            .collect::<PyResult<_>>()?,
    };
    let cfg = SuiteConfig { seed, ..Default::default() };
    let report = py.detach(|| suites::selftest(&cfg, &chosen));
    report_dict(py, &report)
}

/// Samples `D^12 / B` ratios and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (trials = 100, seed = 0))]
fn probe(py: Python<'_>, trials: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let cfg = ProbeConfig { trials, seed, ..Default::default() };
    let report = py.detach(|| probe_conjecture(&cfg));
    report_dict(py, &report)
}

#[pymodule]
pub fn laurentcc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(cc, m)?)?;
    m.add_function(wrap_pyfunction!(bott, m)?)?;
    m.add_function(wrap_pyfunction!(det, m)?)?;
    m.add_function(wrap_pyfunction!(lie_bott, m)?)?;
    m.add_function(wrap_pyfunction!(lie_det, m)?)?;
    m.add_function(wrap_pyfunction!(virasoro, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    Ok(())
}
