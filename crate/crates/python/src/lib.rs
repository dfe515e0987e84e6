//! Python module `wakimoto`: realizations built from TOML run configurations.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use wakimoto_core::cli::{build_json, build_latex, run_verify, Pipeline, RunConfig, VerifyPlan, ALL_CHECKS};
use wakimoto_core::currents::{render, Style};
use wakimoto_core::exactnum::{parse_q, q_to_string};
use wakimoto_core::fockcheck::VerifyOptions;
use wakimoto_core::twistor::SplitConvention;
use wakimoto_core::WakiError;

fn py_err(e: WakiError) -> PyErr {
    match e {
        WakiError::Config { .. } | WakiError::Incompatible(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn split_of(s: Option<&str>, default: SplitConvention) -> PyResult<SplitConvention> {
    match s {
        None => Ok(default),
        Some(s) => wakimoto_core::cli::parse_split(s).map_err(PyValueError::new_err),
    }
}

/// A free-field realization at a fixed level.
#[pyclass(unsendable)]
struct Realization {
    pipeline: Pipeline,
    inner: wakimoto_core::currents::Realization,
}

#[pymethods]
impl Realization {
    /// Builds from TOML text; `level` (e.g. `"5/7"`) overrides the configured one.
    #[new]
    #[pyo3(signature = (config, level=None))]
    fn new(config: &str, level: Option<&str>) -> PyResult<Self> {
        let cfg = RunConfig::from_toml(config, "<python>").map_err(py_err)?;
        let pipeline = Pipeline::new(cfg).map_err(py_err)?;
        let k = match level {
            Some(l) => parse_q(l).map_err(py_err)?,
            None => pipeline.config.level.to_q("level").map_err(py_err)?,
        };
        let inner = pipeline.realization(&k).map_err(py_err)?;
        Ok(Realization { pipeline, inner })
    }

    /// Reads the configuration from a file.
    #[staticmethod]
    #[pyo3(signature = (path, level=None))]
    fn from_file(path: &str, level: Option<&str>) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Realization::new(&text, level)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Order `N` of the automorphism.
    #[getter]
    fn order(&self) -> u32 {
        self.inner.graded.n
    }

    #[getter]
    fn level(&self) -> String {
        q_to_string(self.inner.level())
    }

    #[getter]
    fn y(&self) -> String {
        q_to_string(self.inner.y())
    }

    fn currents(&self) -> PyResult<Vec<String>> {
        let nv = self.inner.n_alpha();
        Ok(self.inner.currents().map_err(py_err)?.iter().map(|e| render(e, nv, Style::Plain)).collect())
    }

    #[pyo3(signature = (split=None))]
    fn twisted_currents(&self, split: Option<&str>) -> PyResult<Vec<String>> {
        let s = split_of(split, SplitConvention::Standard)?;
        let nv = self.inner.n_alpha();
        Ok(self.inner.twisted_currents(s).map_err(py_err)?.iter().map(|e| render(e, nv, Style::Plain)).collect())
    }

    /// Correction polynomials `Theta_a` as text.
    #[pyo3(signature = (split=None))]
    fn theta(&self, split: Option<&str>) -> PyResult<Vec<String>> {
        let s = split_of(split, SplitConvention::Standard)?;
        Ok(self.inner.theta(s).iter().map(|p| p.to_string()).collect())
    }

    /// The `build` output as a JSON string.
    #[pyo3(signature = (split=None))]
    fn to_json(&self, split: Option<&str>) -> PyResult<String> {
        let s = split_of(split, self.pipeline.config.split().map_err(py_err)?)?;
        let v = build_json(&self.pipeline.config.display_name(), &self.inner, s).map_err(py_err)?;
        serde_json::to_string_pretty(&v).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[pyo3(signature = (split=None))]
    fn to_latex(&self, split: Option<&str>) -> PyResult<String> {
        let s = split_of(split, self.pipeline.config.split().map_err(py_err)?)?;
        build_latex(&self.inner, s).map_err(py_err)
    }

    /// Runs the checks at this realization's level and returns the report as JSON.
    #[pyo3(signature = (modes=(-1, 1), cutoff=2, samples=2, checks=None))]
    fn verify(&self, modes: (i64, i64), cutoff: i64, samples: usize, checks: Option<Vec<String>>) -> PyResult<String> {
        let plan = VerifyPlan {
            levels: vec![self.inner.level().clone()],
            split: self.pipeline.config.split().map_err(py_err)?,
            checks: checks.unwrap_or_else(|| ALL_CHECKS.iter().map(|s| s.to_string()).collect()),
            options: VerifyOptions { modes, cutoff, samples, ..VerifyOptions::default() },
            mutation: None,
            timings: false,
        };
        let rep = run_verify(&self.pipeline, &plan).map_err(py_err)?;
        serde_json::to_string_pretty(&rep).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("Realization({}, dim={}, N={}, K={})", self.pipeline.config.display_name(), self.dim(), self.order(), self.level())
    }
}

#[pymodule]
fn wakimoto(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Realization>()?;
    Ok(())
}
