//! Python bindings: distributions, order statistics, characteristic functions,
//! identity verification and the goodness-of-fit diagnostic.

use logshift::cf::{self, CfGrid};
use logshift::diagnostics::{self, GofConfig, GofResult};
use logshift::distributions::{Distribution, OrderStatistic};
use logshift::identity::{self, IdentitySpec, VerificationConfig, VerificationReport};
use logshift::two_sample::TwoSampleTest;
use logshift::{special, Error, RngStream};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Pole { .. }
        | Error::Overflow
        | Error::Convergence { .. }
        | Error::Truncation { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A parent distribution, built from a selector such as `"normal,mu=0,sigma=1.8138"`.
#[pyclass(name = "Distribution", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyDistribution {
    inner: Distribution,
}

#[pymethods]
impl PyDistribution {
    #[new]
    #[pyo3(signature = (spec = "logistic"))]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self {
            inner: spec.parse().map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn variance_matched_normal() -> Self {
        Self {
            inner: Distribution::variance_matched_normal(),
        }
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family()
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x)
    }

    fn sf(&self, x: f64) -> f64 {
        self.inner.sf(x)
    }

    fn pdf(&self, x: f64) -> f64 {
        self.inner.pdf(x)
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        self.inner.quantile(p).map_err(to_py)
    }

    #[pyo3(signature = (count, seed = 0))]
    fn sample(&self, py: Python<'_>, count: usize, seed: u64) -> Vec<f64> {
        let d = self.inner;
        py.detach(|| d.sample(&mut RngStream::new(seed), count))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Distribution({:?})", self.inner.to_string())
    }
}

/// The k-th smallest of n draws from a parent.
#[pyclass(name = "OrderStatistic", frozen)]
pub struct PyOrderStatistic {
    inner: OrderStatistic,
}

#[pymethods]
impl PyOrderStatistic {
    #[new]
    #[pyo3(signature = (n, k, parent = None))]
    fn new(n: u32, k: u32, parent: Option<PyRef<'_, PyDistribution>>) -> PyResult<Self> {
        let parent = parent.map_or(Distribution::STANDARD_LOGISTIC, |p| p.inner);
        Ok(Self {
            inner: OrderStatistic::new(parent, n, k).map_err(to_py)?,
        })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k
    }

    #[getter]
    fn parent(&self) -> PyDistribution {
        PyDistribution {
            inner: self.inner.parent,
        }
    }

    fn pdf(&self, x: f64) -> f64 {
        self.inner.pdf(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf(x)
    }

    /// Closed-form CF for logistic and exponential parents.
    fn cf(&self, t: f64) -> PyResult<Complex64> {
        cf::exact_order_stat_cf(&self.inner, t).map_err(to_py)
    }

    #[pyo3(signature = (t, tol = 1e-10))]
    fn numerical_cf(&self, t: f64, tol: f64) -> PyResult<Complex64> {
        cf::numerical_cf(&self.inner, t, tol).map_err(to_py)
    }

    #[pyo3(signature = (count, seed = 0))]
    fn sample(&self, py: Python<'_>, count: usize, seed: u64) -> Vec<f64> {
        let s = self.inner;
        py.detach(|| s.sample(&mut RngStream::new(seed), count))
    }

    fn __repr__(&self) -> String {
        format!(
            "OrderStatistic(n={}, k={}, parent={})",
            self.inner.n, self.inner.k, self.inner.parent
        )
    }
}

/// One distributional identity `lhs =d rhs`.
#[pyclass(name = "Identity", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyIdentity {
    inner: IdentitySpec,
}

#[pymethods]
impl PyIdentity {
    #[getter]
    fn label(&self) -> &str {
        &self.inner.label
    }

    #[getter]
    fn lhs(&self) -> String {
        self.inner.lhs.to_string()
    }

    #[getter]
    fn rhs(&self) -> String {
        self.inner.rhs.to_string()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    fn with_parent(&self, parent: PyRef<'_, PyDistribution>) -> Self {
        Self {
            inner: self.inner.reparented(parent.inner),
        }
    }

    /// `(lhs CF, rhs CF)` at `t`; logistic and exponential parents only.
    fn cf(&self, t: f64) -> PyResult<(Complex64, Complex64)> {
        Ok((
            identity::exact_cf_side(&self.inner.lhs, t).map_err(to_py)?,
            identity::exact_cf_side(&self.inner.rhs, t).map_err(to_py)?,
        ))
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Identity({:?})", self.inner.label)
    }
}

#[pyclass(name = "VerificationReport", frozen)]
pub struct PyVerificationReport {
    inner: VerificationReport,
}

#[pymethods]
impl PyVerificationReport {
    #[getter]
    fn verdict(&self) -> String {
        self.inner.verdict.to_string()
    }

    #[getter]
    fn cf_max_abs_diff(&self) -> Option<f64> {
        self.inner.cf_max_abs_diff
    }

    #[getter]
    fn ks_statistic(&self) -> f64 {
        self.inner.ks_statistic
    }

    #[getter]
    fn ks_p_value(&self) -> f64 {
        self.inner.ks_p_value
    }

    #[getter]
    fn cvm_p_value(&self) -> Option<f64> {
        self.inner.cvm_p_value
    }

    #[getter]
    fn p_value(&self) -> f64 {
        self.inner.p_value()
    }

    #[getter]
    fn sample_size(&self) -> usize {
        self.inner.sample_size
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn identity(&self) -> PyIdentity {
        PyIdentity {
            inner: self.inner.identity.clone(),
        }
    }

    fn summary(&self) -> String {
        self.inner.summary()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("VerificationReport({})", self.inner.summary())
    }
}

#[pyclass(name = "GofResult", frozen)]
pub struct PyGofResult {
    inner: GofResult,
}

#[pymethods]
impl PyGofResult {
    #[getter]
    fn statistic(&self) -> f64 {
        self.inner.statistic
    }

    #[getter]
    fn p_value(&self) -> f64 {
        self.inner.p_value
    }

    #[getter]
    fn null_replicates(&self) -> usize {
        self.inner.null_replicates
    }

    #[getter]
    fn identity_used(&self) -> &str {
        &self.inner.identity_used
    }

    #[getter]
    fn sample_size(&self) -> usize {
        self.inner.sample_size
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "GofResult(statistic={}, p_value={}, identity_used={:?})",
            self.inner.statistic, self.inner.p_value, self.inner.identity_used
        )
    }
}

#[pyfunction]
fn complex_gamma(z: Complex64) -> PyResult<Complex64> {
    special::complex_gamma(z).map_err(to_py)
}

#[pyfunction]
fn logistic_cf(t: f64) -> Complex64 {
    special::logistic_cf(t)
}

#[pyfunction]
fn logistic_order_stat_cf(n: u32, k: u32, t: f64) -> PyResult<Complex64> {
    cf::logistic_order_stat_cf(n, k, t).map_err(to_py)
}

/// m-th CDF derivative of the logistic order statistic at x, from its CF.
#[pyfunction]
#[pyo3(signature = (n, k, x, m = 1, spacing = cf::DEFAULT_INVERSION_SPACING))]
fn invert_cf(n: u32, k: u32, x: f64, m: u32, spacing: f64) -> PyResult<f64> {
    let grid = CfGrid::for_inversion(n, k, m, spacing).map_err(to_py)?;
    Ok(cf::cf_invert_derivative(&grid, m, x).map_err(to_py)?.value)
}

/// Identities matching a selector such as `"lemma1i:k=2,m=4,n=5"`.
#[pyfunction]
#[pyo3(signature = (selector, parent = None))]
fn identities(
    selector: &str,
    parent: Option<PyRef<'_, PyDistribution>>,
) -> PyResult<Vec<PyIdentity>> {
    let sel = identity::parse_selector(selector).map_err(to_py)?;
    let parent = parent.map(|p| p.inner);
    Ok(sel
        .identities
        .into_iter()
        .map(|id| PyIdentity {
            inner: parent.map_or(id.clone(), |p| id.reparented(p)),
        })
        .collect())
}

#[pyfunction]
#[pyo3(signature = (max_n = 6))]
fn catalog(max_n: u32) -> Vec<PyIdentity> {
    identity::catalog(max_n)
        .into_iter()
        .map(|inner| PyIdentity { inner })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (identity, sample_size = 1_000_000, alpha = 0.01, seed = 0, test = "ks"))]
fn verify(
    py: Python<'_>,
    identity: PyRef<'_, PyIdentity>,
    sample_size: usize,
    alpha: f64,
    seed: u64,
    test: &str,
) -> PyResult<PyVerificationReport> {
    let test = match test {
        "ks" => TwoSampleTest::Ks,
        "cvm" => TwoSampleTest::Cvm,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown test {other:?}; use 'ks' or 'cvm'"
            )))
        }
    };
    let config = VerificationConfig {
        sample_size,
        alpha,
        seed,
        test,
        ..Default::default()
    };
    let id = identity.inner.clone();
    let inner = py
        .detach(|| identity::verify(&id, &config))
        .map_err(to_py)?;
    Ok(PyVerificationReport { inner })
}

#[pyfunction]
fn w_functional(parent: PyRef<'_, PyDistribution>, x: f64) -> PyResult<f64> {
    diagnostics::w_functional(&parent.inner, x).map_err(to_py)
}

#[pyfunction]
fn adjacent_functional_residual(
    parent: PyRef<'_, PyDistribution>,
    n: u32,
    k: u32,
    x: f64,
) -> PyResult<f64> {
    diagnostics::adjacent_functional_residual(&parent.inner, n, k, x).map_err(to_py)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (data, n = 3, k = 2, null_replicates = 199, rounds = 10, seed = 0, center_median = false))]
fn gof_test(
    py: Python<'_>,
    data: Vec<f64>,
    n: u32,
    k: u32,
    null_replicates: usize,
    rounds: usize,
    seed: u64,
    center_median: bool,
) -> PyResult<PyGofResult> {
    let config = GofConfig {
        n,
        k,
        null_replicates,
        reconstruction_rounds: rounds,
        seed,
        center_median,
    };
    let inner = py
        .detach(|| diagnostics::gof_test(&data, &config))
        .map_err(to_py)?;
    Ok(PyGofResult { inner })
}

#[pymodule]
fn logshift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", logshift::VERSION)?;
    m.add_class::<PyDistribution>()?;
    m.add_class::<PyOrderStatistic>()?;
    m.add_class::<PyIdentity>()?;
    m.add_class::<PyVerificationReport>()?;
    m.add_class::<PyGofResult>()?;
    m.add_function(wrap_pyfunction!(complex_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(logistic_cf, m)?)?;
    m.add_function(wrap_pyfunction!(logistic_order_stat_cf, m)?)?;
    m.add_function(wrap_pyfunction!(invert_cf, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(w_functional, m)?)?;
    m.add_function(wrap_pyfunction!(adjacent_functional_residual, m)?)?;
    m.add_function(wrap_pyfunction!(gof_test, m)?)?;
    Ok(())
}
