//! Python bindings: function parsing and evaluation, the functional and
//! its two-interval difference, the Stieltjes identity routes, the
//! closed-form bounds, and the analysis helpers. Build as a `cdylib`
//! and import the resulting shared object as `cheb_py`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cheb_core::analyze;
use cheb_core::bounds::{self, BoundParams};
use cheb_core::func::FunctionSpec;
use cheb_core::functional::{self, IdentityRoute, IntervalConfig};
use cheb_core::quad::QuadResult;
use cheb_core::verify::{self, RunConfig};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn config(a: f64, u: f64, v: f64, b: f64, nested: bool) -> PyResult<IntervalConfig> {
    if nested {
        IntervalConfig::nested(a, u, v, b).map_err(err)
    } else {
        IntervalConfig::overlap(a, u, v, b).map_err(err)
    }
}

fn route_from(name: &str) -> PyResult<IdentityRoute> {
    match name.to_ascii_lowercase().as_str() {
        "cerone" => Ok(IdentityRoute::Cerone),
        "dragomir" => Ok(IdentityRoute::Dragomir),
        other => Err(PyValueError::new_err(format!(
            "unknown identity route '{other}' (expected 'cerone' or 'dragomir')"
        ))),
    }
}

/// A parsed function of one variable on a fixed domain.
#[pyclass(module = "cheb_py", skip_from_py_object)]
#[derive(Clone)]
struct Function {
    inner: FunctionSpec,
}

#[pymethods]
impl Function {
    #[new]
    fn new(source: &str, lo: f64, hi: f64) -> PyResult<Self> {
        let inner = FunctionSpec::parse(source, (lo, hi)).map_err(err)?;
        Ok(Function { inner })
    }

    /// Evaluate at `x`; `x` must lie in the domain.
    fn __call__(&self, x: f64) -> PyResult<f64> {
        self.inner.eval(x).map_err(err)
    }

    fn eval(&self, x: f64) -> PyResult<f64> {
        self.inner.eval(x).map_err(err)
    }

    /// The symbolic derivative on the same domain.
    fn derivative(&self) -> PyResult<Function> {
        Ok(Function {
            inner: self.inner.derivative_spec().map_err(err)?,
        })
    }

    #[getter]
    fn source(&self) -> String {
        self.inner.source().to_string()
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        self.inner.domain()
    }

    fn __repr__(&self) -> String {
        let (lo, hi) = self.inner.domain();
        format!("Function({:?}, domain=[{lo}, {hi}])", self.inner.source())
    }
}

/// A quadrature result: the estimate, its error budget, and the number
/// of integrand evaluations spent.
#[pyclass(module = "cheb_py", skip_from_py_object)]
#[derive(Clone, Copy)]
struct Quad {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    err_est: f64,
    #[pyo3(get)]
    evals: u64,
}

impl From<QuadResult> for Quad {
    fn from(r: QuadResult) -> Self {
        Quad {
            value: r.value,
            err_est: r.err_est,
            evals: r.evals,
        }
    }
}

#[pymethods]
impl Quad {
    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        format!(
            "Quad(value={:?}, err_est={:.3e}, evals={})",
            self.value, self.err_est, self.evals
        )
    }
}

/// The two functional values of an interval configuration and their
/// absolute difference.
#[pyclass(module = "cheb_py")]
struct Difference {
    #[pyo3(get)]
    left: Quad,
    #[pyo3(get)]
    right: Quad,
    #[pyo3(get)]
    diff_abs: f64,
    #[pyo3(get)]
    err_est: f64,
}

#[pymethods]
impl Difference {
    fn __repr__(&self) -> String {
        format!(
            "Difference(diff_abs={:?}, err_est={:.3e})",
            self.diff_abs, self.err_est
        )
    }
}

/// An evaluated closed-form right-hand side.
#[pyclass(module = "cheb_py")]
struct BoundValue {
    #[pyo3(get)]
    theorem: String,
    #[pyo3(get)]
    rhs: f64,
    /// Constants consumed, in evaluation order.
    #[pyo3(get)]
    inputs: Vec<(String, f64)>,
    /// False when a checked hypothesis failed; `rhs` is then reported
    /// but not certified.
    #[pyo3(get)]
    preconditions_ok: bool,
    #[pyo3(get)]
    notes: Vec<String>,
}

#[pymethods]
impl BoundValue {
    fn __repr__(&self) -> String {
        format!(
            "BoundValue(theorem={:?}, rhs={:?}, preconditions_ok={})",
            self.theorem, self.rhs, self.preconditions_ok
        )
    }
}

/// `T_lo^hi(f, g)`: the mean of the product minus the product of the
/// means, by adaptive quadrature at tolerance `tol`.
#[pyfunction]
#[pyo3(signature = (f, g, lo, hi, tol = 1e-9))]
fn chebyshev(f: &Function, g: &Function, lo: f64, hi: f64, tol: f64) -> PyResult<Quad> {
    functional::chebyshev_functional(&f.inner, &g.inner, lo, hi, tol)
        .map(Quad::from)
        .map_err(err)
}

/// The same functional through a Stieltjes identity route (`"cerone"`
/// or `"dragomir"`); step integrators reduce to exact jump sums.
#[pyfunction]
#[pyo3(signature = (f, g, lo, hi, route = "cerone", tol = 1e-9))]
fn chebyshev_identity(
    f: &Function,
    g: &Function,
    lo: f64,
    hi: f64,
    route: &str,
    tol: f64,
) -> PyResult<Quad> {
    functional::chebyshev_via_identity(&f.inner, &g.inner, lo, hi, route_from(route)?, tol)
        .map(Quad::from)
        .map_err(err)
}

/// `|T_left − T_right|` for the configuration `(a, u, v, b)`: the
/// overlapping pair `[a,v]` vs `[u,b]`, or `[u,v]` vs `[a,b]` when
/// `nested` is set.
#[pyfunction]
#[pyo3(signature = (f, g, a, u, v, b, nested = false, tol = 1e-9))]
#[allow(clippy::too_many_arguments)]
fn functional_difference(
    f: &Function,
    g: &Function,
    a: f64,
    u: f64,
    v: f64,
    b: f64,
    nested: bool,
    tol: f64,
) -> PyResult<Difference> {
    let cfg = config(a, u, v, b, nested)?;
    let d = functional::functional_difference(&f.inner, &g.inner, &cfg, tol).map_err(err)?;
    Ok(Difference {
        left: d.t_left.into(),
        right: d.t_right.into(),
        diff_abs: d.diff_abs,
        err_est: d.err_est,
    })
}

/// The kernel `Ψ_g(t) = (t−α)∫_t^β g − (β−t)∫_α^t g` on `[α, β]`.
#[pyfunction]
#[pyo3(signature = (g, t, alpha, beta, tol = 1e-9))]
fn psi(g: &Function, t: f64, alpha: f64, beta: f64, tol: f64) -> PyResult<Quad> {
    functional::psi(&g.inner, t, alpha, beta, tol)
        .map(Quad::from)
        .map_err(err)
}

/// Difference of the means of `f` over `[a,b]` and over `[c,d]`.
#[pyfunction]
#[pyo3(signature = (f, a, b, c, d, tol = 1e-9))]
fn mean_difference(f: &Function, a: f64, b: f64, c: f64, d: f64, tol: f64) -> PyResult<Quad> {
    functional::mean_difference(&f.inner, a, b, c, d, tol)
        .map(Quad::from)
        .map_err(err)
}

/// Full-interval pre-Grüss chain `(level1, level2, err_est)` where
/// `level1 = √T(f,f)·√T(g,g)` and `level2` is its AM–GM coarsening.
#[pyfunction]
#[pyo3(signature = (f, g, a, b, tol = 1e-9))]
fn pre_gruss(f: &Function, g: &Function, a: f64, b: f64, tol: f64) -> PyResult<(f64, f64, f64)> {
    let pg = bounds::pre_gruss_bound(&f.inner, &g.inner, a, b, tol).map_err(err)?;
    Ok((pg.level1, pg.level2, pg.err_est))
}

/// Two-interval pre-Grüss chain `(level1, level2, err_est)` for the
/// configuration `(a, u, v, b)`.
#[pyfunction]
#[pyo3(signature = (f, g, a, u, v, b, nested = false, tol = 1e-9))]
#[allow(clippy::too_many_arguments)]
fn generalized_pre_gruss(
    f: &Function,
    g: &Function,
    a: f64,
    u: f64,
    v: f64,
    b: f64,
    nested: bool,
    tol: f64,
) -> PyResult<(f64, f64, f64)> {
    let cfg = config(a, u, v, b, nested)?;
    let pg = bounds::generalized_pre_gruss(&f.inner, &g.inner, &cfg, tol).map_err(err)?;
    Ok((pg.level1, pg.level2, pg.err_est))
}

/// Euler Beta function `B(x, y)`.
#[pyfunction]
fn beta(x: f64, y: f64) -> f64 {
    analyze::beta(x, y)
}

/// `‖f‖_p` over `[lo, hi]` (`p = inf` for the sup norm).
#[pyfunction]
#[pyo3(signature = (f, lo, hi, p, tol = 1e-9))]
fn lp_norm(f: &Function, lo: f64, hi: f64, p: f64, tol: f64) -> PyResult<f64> {
    analyze::lp_norm(&f.inner, lo, hi, p, tol).map_err(err)
}

/// `sup |f|` over `[lo, hi]`.
#[pyfunction]
fn sup_norm(f: &Function, lo: f64, hi: f64) -> PyResult<f64> {
    analyze::sup_norm(&f.inner, lo, hi).map_err(err)
}

/// Total variation of `f` over `[lo, hi]` as `(value, exact)`; `exact`
/// is true when computed from declared monotonicity cuts.
#[pyfunction]
fn total_variation(f: &Function, lo: f64, hi: f64) -> PyResult<(f64, bool)> {
    let v = analyze::total_variation(&f.inner, lo, hi).map_err(err)?;
    Ok((v.value, v.exact))
}

/// Evaluate a closed-form bound by theorem id on the configuration
/// `(a, u, v, b)`, passing whichever class constants the theorem
/// consumes as keyword arguments.
#[pyfunction]
#[pyo3(signature = (
    id, a, u, v, b, nested = false, *,
    variation = None, lipschitz = None, holder_h = None, p = None, q = None,
    alpha = None, beta = None, g_inf = None, g_p = None, g_1 = None,
    f_inf = None, f_p = None, f_1 = None, f_2 = None, g_2 = None,
    f_alpha = None, f_range = None, g_range = None, g_at = None,
    g_mid = None, f_values = None,
))]
#[allow(clippy::too_many_arguments)]
fn evaluate_bound(
    id: &str,
    a: f64,
    u: f64,
    v: f64,
    b: f64,
    nested: bool,
    variation: Option<f64>,
    lipschitz: Option<f64>,
    holder_h: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    g_inf: Option<f64>,
    g_p: Option<f64>,
    g_1: Option<f64>,
    f_inf: Option<f64>,
    f_p: Option<f64>,
    f_1: Option<f64>,
    f_2: Option<f64>,
    g_2: Option<f64>,
    f_alpha: Option<f64>,
    f_range: Option<(f64, f64)>,
    g_range: Option<(f64, f64)>,
    g_at: Option<(f64, f64, f64, f64)>,
    g_mid: Option<f64>,
    f_values: Option<(f64, f64, f64)>,
) -> PyResult<BoundValue> {
    let cfg = config(a, u, v, b, nested)?;
    let params = BoundParams {
        variation,
        lipschitz,
        holder_h,
        p,
        q,
        alpha,
        beta,
        g_inf,
        g_p,
        g_1,
        f_inf,
        f_p,
        f_1,
        f_2,
        g_2,
        f_alpha,
        f_range,
        g_range,
        g_at,
        g_mid,
        f_values,
    };
    let r = bounds::evaluate_bound(id, &cfg, &params).map_err(err)?;
    Ok(BoundValue {
        theorem: r.theorem,
        rhs: r.rhs,
        inputs: r.inputs,
        preconditions_ok: r.preconditions_ok,
        notes: r.notes,
    })
}

/// Run a verification sweep and return
/// `(records, certified, violations)`.
#[pyfunction]
#[pyo3(signature = (seed = 42, entries = 200, cfgs_per_entry = 20, nested = false))]
fn sweep_counts(
    seed: u64,
    entries: usize,
    cfgs_per_entry: usize,
    nested: bool,
) -> PyResult<(usize, usize, usize)> {
    let rc = RunConfig {
        seed,
        entries,
        cfgs_per_entry,
        nested,
        ..Default::default()
    };
    let outcome = verify::sweep(&rc).map_err(err)?;
    let certified = outcome.records.iter().filter(|r| r.hypothesis_ok).count();
    Ok((outcome.records.len(), certified, outcome.violations))
}

#[pymodule]
fn cheb_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Function>()?;
    m.add_class::<Quad>()?;
    m.add_class::<Difference>()?;
    m.add_class::<BoundValue>()?;
    m.add_function(wrap_pyfunction!(chebyshev, m)?)?;
    m.add_function(wrap_pyfunction!(chebyshev_identity, m)?)?;
    m.add_function(wrap_pyfunction!(functional_difference, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(mean_difference, m)?)?;
    m.add_function(wrap_pyfunction!(pre_gruss, m)?)?;
    m.add_function(wrap_pyfunction!(generalized_pre_gruss, m)?)?;
    m.add_function(wrap_pyfunction!(beta, m)?)?;
    m.add_function(wrap_pyfunction!(lp_norm, m)?)?;
    m.add_function(wrap_pyfunction!(sup_norm, m)?)?;
    m.add_function(wrap_pyfunction!(total_variation, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_bound, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_counts, m)?)?;
    m.add("THEOREM_IDS", bounds::THEOREM_IDS.to_vec())?;
    Ok(())
}
