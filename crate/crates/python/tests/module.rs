use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module<T>(f: impl FnOnce(&Bound<'_, PyModule>) -> PyResult<T>) -> T {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "laurentcc").unwrap();
        laurentcc::laurentcc(&m).unwrap();
        f(&m).unwrap()
    })
}

fn call(m: &Bound<'_, PyModule>, name: &str, args: &[&str]) -> PyResult<String> {
    let args = pyo3::types::PyTuple::new(m.py(), args)?;
    m.getattr(name)?.call1(args)?.extract()
}

#[test]
fn worked_example() {
    with_module(|m| {
        assert_eq!(call(m, "bott", &["t + e*t^-1", "t + t^2", "Q[e;2]"])?, "1 + 4*e");
        assert_eq!(call(m, "det", &["t + t^2", "t + e*t^-1", "Q[e;2]"])?, "1 - e");
        assert_eq!(call(m, "cc", &["t", "t"])?, "-1");
        Ok(())
    });
}

#[test]
fn errors_become_value_errors() {
    with_module(|m| {
        let err = call(m, "cc", &["t + q", "t"]).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(m.py()), "{err}");
        let err = call(m, "bott", &["t^2", "t"]).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(m.py()), "{err}");
        Ok(())
    });
}

#[test]
fn reports_are_dicts() {
    with_module(|m| {
        let report = m.getattr("selftest")?.call1((vec![1usize],))?;
        assert_eq!(report.get_item("status")?.extract::<String>()?, "pass");
        Ok(())
    });
}
