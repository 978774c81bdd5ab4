//! Python bindings: states, mode products, the twisted module, Zhu membership,
//! boundary constraints and the catalog runner.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use voa::boundary::{derive_constraints, standard_relations, GenericVectorSpec};
use voa::catalog::{self, eval_text, parse_catalog, render_report, run_suite, ReportFormat, RunOptions, Value};
use voa::exactalg::{fmt_rat, g_poly, parse_rat, PolyQ, UniPoly, Var};
use voa::fock::{Half, State};
use voa::twisted::{c_coeffs, twisted_n_product};
use voa::vertex::{apply_mode, eval_commutator, n_product};
use voa::zhu::{default_max_weight, o_span_with, SpanFamily};

create_exception!(voa_py, VoaError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    VoaError::new_err(e.to_string())
}

fn half(n: &str) -> PyResult<Half> {
    Half::parse(n).ok_or_else(|| err(format!("mode index '{n}' is not an integer or half-integer")))
}

/// An exact vector of M(1), M(1,lam) or the twisted module.
#[pyclass(name = "State", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyState {
    inner: State,
}

#[pymethods]
impl PyState {
    /// Parses catalog notation, e.g. `S(1,2;1,1)`, `omega`, `h(1,-2) exp(lam)`, `vactw`.
    #[staticmethod]
    #[pyo3(signature = (text, rank=4))]
    fn parse(text: &str, rank: usize) -> PyResult<PyState> {
        match eval_text(text, rank).map_err(err)? {
            Value::State(s) => Ok(PyState { inner: s }),
            v => Err(err(format!("'{text}' is a {}, not a state", v.kind_name()))),
        }
    }

    /// The vacuum of the rank-`rank` Fock space.
    #[staticmethod]
    fn vac(rank: usize) -> PyState {
        PyState { inner: State::vac(rank) }
    }

    /// The twisted-module vacuum.
    #[staticmethod]
    fn vac_tw(rank: usize) -> PyState {
        PyState { inner: State::vac_tw(rank) }
    }

    /// e^lam with symbolic lam_1..lam_rank.
    #[staticmethod]
    fn exp_lam(rank: usize) -> PyState {
        PyState { inner: State::exp_lam(rank) }
    }

    fn theta(&self) -> PyResult<PyState> {
        Ok(PyState { inner: self.inner.theta().map_err(err)? })
    }

    /// L(0)-weight of a homogeneous state, as a polynomial string.
    fn weight(&self) -> PyResult<String> {
        Ok(self.inner.weight().map_err(err)?.to_string())
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Scales by a rational given as text, e.g. "-3/4".
    fn scale(&self, c: &str) -> PyResult<PyState> {
        let c = parse_rat(c).ok_or_else(|| err(format!("'{c}' is not a rational")))?;
        Ok(PyState { inner: self.inner.scale_rat(&c) })
    }

    /// Terms as (coefficient, monomial) strings.
    fn terms(&self) -> Vec<(String, String)> {
        self.inner
            .terms()
            .map(|(m, c)| {
                let one = State::monomial(self.inner.module().clone(), m.clone(), PolyQ::one());
                (c.to_string(), one.to_string())
            })
            .collect()
    }

    fn __add__(&self, other: &PyState) -> PyResult<PyState> {
        Ok(PyState { inner: self.inner.checked_add(&other.inner).map_err(err)? })
    }

    fn __sub__(&self, other: &PyState) -> PyResult<PyState> {
        let neg = other.inner.scale_rat(&parse_rat("-1").expect("literal"));
        Ok(PyState { inner: self.inner.checked_add(&neg).map_err(err)? })
    }

    fn __eq__(&self, other: &PyState) -> bool {
        self.inner == other.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("State({})", self.inner)
    }
}

/// The n-th product a_n b.
#[pyfunction]
fn product(a: &PyState, n: i64, b: &PyState) -> PyResult<PyState> {
    Ok(PyState { inner: n_product(&a.inner, n, &b.inner).map_err(err)? })
}

/// a_n s on any module; `n` is a string so half-integers like "1/2" can be given.
#[pyfunction]
fn mode(a: &PyState, n: &str, s: &PyState) -> PyResult<PyState> {
    Ok(PyState { inner: apply_mode(&a.inner, half(n)?, &s.inner).map_err(err)? })
}

/// u_n s on the twisted module.
#[pyfunction]
fn twisted_product(u: &PyState, n: &str, s: &PyState) -> PyResult<PyState> {
    Ok(PyState { inner: twisted_n_product(&u.inner, half(n)?, &s.inner).map_err(err)? })
}

/// [a_i, b_j] s through the commutator formula.
#[pyfunction]
fn commutator(a: &PyState, i: i64, b: &PyState, j: i64, s: &PyState) -> PyResult<PyState> {
    Ok(PyState { inner: eval_commutator(&a.inner, i, &b.inner, j, &s.inner).map_err(err)? })
}

/// Coefficients c_mn with m + n <= max_total, as {(m, n): "p/q"}.
#[pyfunction]
fn cmn(py: Python<'_>, max_total: u32) -> PyResult<Bound<'_, PyDict>> {
    let d = PyDict::new(py);
    for ((m, n), c) in c_coeffs(max_total).entries {
        d.set_item((m, n), fmt_rat(&c))?;
    }
    Ok(d)
}

/// Last nonzero pseudo-remainder of two polynomials in `var`, up to a scalar.
#[pyfunction]
fn gpoly(a: &str, b: &str, var: &str) -> PyResult<String> {
    let x = Var::new(var);
    let pa = PolyQ::parse(a).map_err(err)?;
    let pb = PolyQ::parse(b).map_err(err)?;
    Ok(g_poly(&UniPoly::from_poly(&pa, x), &UniPoly::from_poly(&pb, x)).map_err(err)?.to_poly().to_string())
}

/// Whether `v` lies in O(V) at the given weight bound, with the certificate size.
#[pyfunction]
#[pyo3(signature = (v, weight_bound, rank=1))]
fn zhu_member(v: &PyState, weight_bound: i64, rank: usize) -> PyResult<(bool, usize)> {
    let cap = default_max_weight(rank).max(weight_bound);
    let span = o_span_with(rank, weight_bound, None, cap, SpanFamily::default()).map_err(err)?;
    let m = span.member(&v.inner).map_err(err)?;
    Ok((m.member, m.certificate.len()))
}

/// Coefficients of the boundary words for one of the four relations (s11-3, s11-4-1, ...).
#[pyfunction]
#[pyo3(signature = (relation, eps=None))]
fn boundary_constraints(relation: &str, eps: Option<i64>) -> PyResult<Vec<(String, String)>> {
    let key = relation.replace('_', "-");
    let rels = standard_relations();
    let rel = rels.iter().find(|(n, _)| *n == key).ok_or_else(|| err(format!("unknown relation '{relation}'")))?;
    let mut spec = GenericVectorSpec::symbolic();
    if let Some(e) = eps {
        spec = spec.with_eps(PolyQ::int(e));
    }
    let set = derive_constraints(std::slice::from_ref(rel), &spec).map_err(err)?;
    Ok(set.words.iter().zip(&set.equations[0].coeffs).map(|(w, c)| (w.to_string(), c.to_string())).collect())
}

/// Runs a catalog suite and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (suite="all", rank=4, weight_bound=None, catalog_text=None))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    rank: usize,
    weight_bound: Option<i64>,
    catalog_text: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let cat = match catalog_text {
        Some(t) => parse_catalog(t).map_err(err)?,
        None => catalog::standard(),
    };
    let opts = RunOptions { rank, max_weight: weight_bound, assignment: None };
    let report = run_suite(&cat, suite, &opts).map_err(err)?;
    py.import("json")?.call_method1("loads", (render_report(&report, ReportFormat::Json),))
}

#[pymodule]
fn voa_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("VoaError", m.py().get_type::<VoaError>())?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(product, m)?)?;
    m.add_function(wrap_pyfunction!(mode, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_product, m)?)?;
    m.add_function(wrap_pyfunction!(commutator, m)?)?;
    m.add_function(wrap_pyfunction!(cmn, m)?)?;
    m.add_function(wrap_pyfunction!(gpoly, m)?)?;
    m.add_function(wrap_pyfunction!(zhu_member, m)?)?;
    m.add_function(wrap_pyfunction!(boundary_constraints, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
