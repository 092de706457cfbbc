use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use partop::metric::{cauchy_limit, d_metric, rho, rho_star, CauchyOutcome, MetricKind};
use partop::pbij::{enumerate_all, symmetric_inverse_order};
use partop::quotient::{lift, project, Embedding};
use partop::sequence::SequenceSpec;
use partop::topo::{member, metric_convergence_agrees, separate, OpenSetExpr, TopologyKind};
use partop::verify::{self, Bounds, Suite};
use partop::{Dyadic, GroundSet, Permutation};

create_exception!(partop, PartopError, PyValueError);

fn err(e: partop::Error) -> PyErr {
    PartopError::new_err(e.to_string())
}

fn ground(n: Option<u32>) -> GroundSet {
    n.map_or(GroundSet::Naturals, GroundSet::Finite)
}

fn fraction<'py>(py: Python<'py>, d: &Dyadic) -> PyResult<Bound<'py, PyAny>> {
    let num = py.eval(&std::ffi::CString::new(d.numerator().to_string())?, None, None)?;
    let den = py.eval(&std::ffi::CString::new(format!("2**{}", d.exponent()))?, None, None)?;
    py.import("fractions")?.getattr("Fraction")?.call1((num, den))
}

/// A partial bijection of {0..n-1}, or of N when `n` is omitted.
#[pyclass(name = "PartialBijection", frozen, eq, hash, module = "partop", skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPartialBijection(partop::PartialBijection);

#[pymethods]
impl PyPartialBijection {
    #[new]
    #[pyo3(signature = (literal, n=None))]
    fn new(literal: &str, n: Option<u32>) -> PyResult<Self> {
        partop::PartialBijection::parse(literal, ground(n))
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (pairs, n=None))]
    fn from_pairs(pairs: Vec<(u32, u32)>, n: Option<u32>) -> PyResult<Self> {
        partop::PartialBijection::finite(ground(n), pairs)
            .map(Self)
            .map_err(err)
    }

    fn compose(&self, other: &Self) -> PyResult<Self> {
        self.0.compose(&other.0).map(Self).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn dom(&self) -> String {
        self.0.dom().to_string()
    }

    fn im(&self) -> String {
        self.0.im().to_string()
    }

    fn __call__(&self, x: u32) -> Option<u32> {
        self.0.eval(x)
    }

    fn restricts(&self, other: &Self) -> PyResult<bool> {
        self.0.restricts(&other.0).map_err(err)
    }

    fn is_idempotent(&self) -> bool {
        self.0.is_idempotent()
    }

    fn pairs(&self) -> Vec<(u32, u32)> {
        self.0.pairs().to_vec()
    }

    /// Membership in an open set such as `v(0,1) & w1(2) | w2(3)`.
    fn member(&self, open_set: &str) -> PyResult<bool> {
        let expr: OpenSetExpr = open_set.parse().map_err(err)?;
        member(&self.0, &expr).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        match self.0.ground() {
            GroundSet::Finite(n) => format!("PartialBijection('{}', n={n})", self.0),
            GroundSet::Naturals => format!("PartialBijection('{}')", self.0),
        }
    }
}

/// |I(n)|.
#[pyfunction]
fn order(n: u32) -> u64 {
    symmetric_inverse_order(n)
}

#[pyfunction]
fn enumerate(n: u32) -> PyResult<Vec<PyPartialBijection>> {
    Ok(enumerate_all(n)
        .map_err(err)?
        .into_iter()
        .map(PyPartialBijection)
        .collect())
}

#[pyfunction]
#[pyo3(signature = (f, g, metric="rho"))]
fn distance<'py>(
    py: Python<'py>,
    f: &PyPartialBijection,
    g: &PyPartialBijection,
    metric: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let m = match metric.parse::<MetricKind>().map_err(err)? {
        MetricKind::Rho => rho,
        MetricKind::RhoStar => rho_star,
        MetricKind::DMetric => d_metric,
        MetricKind::Eta => return Err(PartopError::new_err("eta compares sets; use evaluate(\"eta(...)\")")),
    };
    fraction(py, &m(&f.0, &g.0).map_err(err)?)
}

/// Evaluates an expression and returns its printed value.
#[pyfunction]
#[pyo3(signature = (expression, n=None))]
fn evaluate(expression: &str, n: Option<u32>) -> PyResult<String> {
    partop::expr::evaluate(expression, ground(n))
        .map(|v| v.to_string())
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (f, g, topology="taupp"))]
fn separate_pair(f: &PyPartialBijection, g: &PyPartialBijection, topology: &str) -> PyResult<String> {
    let kind: TopologyKind = topology.parse().map_err(err)?;
    let w = separate(&f.0, &g.0, kind).map_err(err)?;
    if !w.certify(&f.0, &g.0).map_err(err)? {
        return Err(PartopError::new_err("witness failed certification"));
    }
    Ok(w.to_string())
}

/// The restriction of a permutation of {0..len-1} to X = {0..x_size-1}.
#[pyfunction]
fn project_perm(images: Vec<u32>, x_size: u32) -> PyResult<PyPartialBijection> {
    let p = Permutation::new(images).map_err(err)?;
    let e = Embedding::new(x_size, p.len()).map_err(err)?;
    project(&p, &e).map(PyPartialBijection).map_err(err)
}

#[pyfunction]
fn lift_element(g: &PyPartialBijection, y_size: u32) -> PyResult<Vec<u32>> {
    let Some(x) = g.0.ground().size() else {
        return Err(PartopError::new_err("lift needs an element of a finite I(X)"));
    };
    let e = Embedding::new(x, y_size).map_err(err)?;
    Ok(lift(&g.0, &e).map_err(err)?.images().to_vec())
}

/// Runs suites and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (suite="all", n=None, y_size=None, x_size=None))]
fn run_verify(
    py: Python<'_>,
    suite: &str,
    n: Option<u32>,
    y_size: Option<u32>,
    x_size: Option<u32>,
) -> PyResult<String> {
    let suites = Suite::parse_selection(suite).map_err(err)?;
    let bounds = Bounds { n, y_size, x_size };
    py.detach(|| verify::run(&suites, &bounds))
        .map(|r| r.to_json())
        .map_err(err)
}

/// Verdict of a sequence spec (JSON text) against `target` under `metric`
/// and its paired topology. Without a target the Cauchy limit is used.
#[pyfunction]
#[pyo3(signature = (spec_json, metric="d", target=None))]
fn converge(spec_json: &str, metric: &str, target: Option<&PyPartialBijection>) -> PyResult<(bool, String, String)> {
    let seq = SequenceSpec::from_json(spec_json).map_err(err)?;
    let metric: MetricKind = metric.parse().map_err(err)?;
    let f = match target {
        Some(t) => t.0.clone(),
        None => match cauchy_limit(&seq, metric).map_err(err)? {
            CauchyOutcome::Limit(l) => l,
            CauchyOutcome::NotCauchy(_) => partop::PartialBijection::empty(GroundSet::Naturals),
        },
    };
    let a = metric_convergence_agrees(&seq, &f, metric).map_err(err)?;
    Ok((a.agrees, a.topological.to_string(), a.metric_verdict.to_string()))
}

#[pymodule]
#[pyo3(name = "partop")]
fn partop_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPartialBijection>()?;
    m.add("PartopError", m.py().get_type::<PartopError>())?;
    m.add_function(wrap_pyfunction!(order, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(separate_pair, m)?)?;
    m.add_function(wrap_pyfunction!(project_perm, m)?)?;
    m.add_function(wrap_pyfunction!(lift_element, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    m.add_function(wrap_pyfunction!(converge, m)?)?;
    Ok(())
}
