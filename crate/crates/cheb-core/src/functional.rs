//! The Čebyšev functional, the difference of two overlapping functionals,
//! and the Stieltjes identities that re-derive them.
//!
//! All quantities carry propagated error estimates from the underlying
//! adaptive quadrature, so callers can certify inequalities up to stated
//! numerical noise.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget_from_env;
use crate::expr::Expr;
use crate::func::{FuncError, FunctionSpec};
use crate::quad::{integrate, integrate_spec, QuadError, QuadResult};

/// Errors from functional-level computations.
#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error("interval [{0}, {1}] must be nondegenerate and inside the domain of both functions")]
    BadInterval(f64, f64),
    #[error("point t = {0} must lie in [{1}, {2}]")]
    BadPoint(f64, f64, f64),
    #[error("interval config must satisfy a <= u <= v <= b with a < b, got a={a} u={u} v={v} b={b}")]
    BadConfig { a: f64, u: f64, v: f64, b: f64 },
    #[error(
        "'{0}' is neither absolutely continuous nor a pure step function; \
         the Stieltjes identities support only those integrator classes"
    )]
    UnsupportedIntegrator(String),
    #[error("step integrator jumps exactly at the interval endpoint {0}")]
    JumpAtEndpoint(f64),
    #[error("self-functional T(f,f) = {0} is negative beyond quadrature noise {1:e}")]
    NegativeSelfFunctional(f64, f64),
}

/// How the two subintervals of a config relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMode {
    /// `[a,v]` and `[u,b]` overlap on `[u,v]`.
    #[default]
    Overlap,
    /// `[u,v]` sits inside `[a,b]`; formulas use the a↔u swap.
    Nested,
}

/// An interval configuration `a ≤ u ≤ v ≤ b`.
///
/// In `Overlap` mode the two functionals live on `[a,v]` and `[u,b]`; in
/// `Nested` mode on `[u,v]` and `[a,b]`. `u = v` is allowed (the collapsed
/// corollary case); the full interval must be nondegenerate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalConfig {
    pub a: f64,
    pub u: f64,
    pub v: f64,
    pub b: f64,
    #[serde(default)]
    pub mode: IntervalMode,
}

impl IntervalConfig {
    pub fn new(a: f64, u: f64, v: f64, b: f64, mode: IntervalMode) -> Result<Self, FunctionalError> {
        let ordered = a <= u && u <= v && v <= b && a < b;
        let finite = a.is_finite() && u.is_finite() && v.is_finite() && b.is_finite();
        if !ordered || !finite {
            return Err(FunctionalError::BadConfig { a, u, v, b });
        }
        Ok(IntervalConfig { a, u, v, b, mode })
    }

    pub fn overlap(a: f64, u: f64, v: f64, b: f64) -> Result<Self, FunctionalError> {
        Self::new(a, u, v, b, IntervalMode::Overlap)
    }

    pub fn nested(a: f64, u: f64, v: f64, b: f64) -> Result<Self, FunctionalError> {
        Self::new(a, u, v, b, IntervalMode::Nested)
    }

    /// The two intervals carrying the left and right functionals.
    pub fn sides(&self) -> ((f64, f64), (f64, f64)) {
        match self.mode {
            IntervalMode::Overlap => ((self.a, self.v), (self.u, self.b)),
            IntervalMode::Nested => ((self.u, self.v), (self.a, self.b)),
        }
    }

    /// Endpoint variables after the mode mapping: `Nested` swaps the roles
    /// of `a` and `u`, which turns the bound lengths `(v−a, b−u)` into
    /// `(v−u, b−a)`, the lengths the nested-interval forms carry.
    pub fn effective(&self) -> (f64, f64, f64, f64) {
        match self.mode {
            IntervalMode::Overlap => (self.a, self.u, self.v, self.b),
            IntervalMode::Nested => (self.u, self.a, self.v, self.b),
        }
    }
}

/// The two functional values and their absolute difference.
#[derive(Debug, Clone, Copy)]
pub struct TwoFunctionalDiff {
    /// `T` over the left interval (`[a,v]`, or `[u,v]` when nested).
    pub t_left: QuadResult,
    /// `T` over the right interval (`[u,b]`, or `[a,b]` when nested).
    pub t_right: QuadResult,
    /// `|t_left − t_right|`.
    pub diff_abs: f64,
    /// Combined error estimate for `diff_abs`.
    pub err_est: f64,
}

/// Which printed identity to use in [`chebyshev_via_identity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityRoute {
    /// Kernel `(t−a)·∫_t^b g − (b−t)·∫_a^t g`.
    Cerone,
    /// Kernel `(t−a)·∫_a^b g − (b−a)·∫_a^t g`.
    Dragomir,
}

fn check_interval(
    f: &FunctionSpec,
    g: &FunctionSpec,
    lo: f64,
    hi: f64,
) -> Result<(), FunctionalError> {
    let (flo, fhi) = f.domain();
    let (glo, ghi) = g.domain();
    let eps = 1e-12 * (hi.abs().max(lo.abs()).max(1.0));
    if !(lo < hi) || lo < flo - eps || hi > fhi + eps || lo < glo - eps || hi > ghi + eps {
        return Err(FunctionalError::BadInterval(lo, hi));
    }
    Ok(())
}

/// Rough magnitude of `f − f(mid)` over `[lo, hi]`, for tolerance scaling.
fn sample_scale(f: &FunctionSpec, shift: f64, lo: f64, hi: f64) -> f64 {
    let mut m = 0.0f64;
    for i in 0..=32 {
        let t = lo + (hi - lo) * i as f64 / 32.0;
        m = m.max((f.eval_raw(t) - shift).abs());
    }
    for bp in f.breakpoints_in(lo, hi) {
        m = m.max((f.eval_raw(bp) - shift).abs());
    }
    m
}

/// Compute `T(f,g)` over `[lo, hi]`:
/// `1/(hi−lo) ∫ fg − (1/(hi−lo) ∫ f)(1/(hi−lo) ∫ g)`.
///
/// Both functions are internally shifted by their midpoint values (which
/// leaves `T` unchanged) to reduce cancellation, and the three integrals
/// get a third of the tolerance each.
pub fn chebyshev_functional(
    f: &FunctionSpec,
    g: &FunctionSpec,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<QuadResult, FunctionalError> {
    check_interval(f, g, lo, hi)?;
    let budget = budget_from_env();
    let w = hi - lo;
    let mid = 0.5 * (lo + hi);
    let cf = f.eval_raw(mid);
    let cg = g.eval_raw(mid);
    let sf = sample_scale(f, cf, lo, hi).max(1e-30);
    let sg = sample_scale(g, cg, lo, hi).max(1e-30);

    let mut bps = f.breakpoints_in(lo, hi);
    bps.extend(g.breakpoints_in(lo, hi));
    bps.sort_by(f64::total_cmp);
    bps.dedup();

    let tol_fg = tol * w / 3.0;
    let tol_f = tol * w / (3.0 * sg.max(1.0));
    let tol_g = tol * w / (3.0 * sf.max(1.0));

    let i_fg = integrate(
        |t| (f.eval_raw(t) - cf) * (g.eval_raw(t) - cg),
        lo,
        hi,
        tol_fg,
        budget,
        &bps,
    )?;
    let i_f = integrate(|t| f.eval_raw(t) - cf, lo, hi, tol_f, budget, &bps)?;
    let i_g = integrate(|t| g.eval_raw(t) - cg, lo, hi, tol_g, budget, &bps)?;

    let value = i_fg.value / w - (i_f.value / w) * (i_g.value / w);
    let err_est = i_fg.err_est / w
        + (i_f.value.abs() * i_g.err_est + i_g.value.abs() * i_f.err_est
            + i_f.err_est * i_g.err_est)
            / (w * w);
    Ok(QuadResult {
        value,
        err_est,
        evals: i_fg.evals + i_f.evals + i_g.evals,
    })
}

/// `T(f,f)`, clamped to zero within quadrature noise. Negative beyond
/// noise is an error: the self-functional is a variance and cannot be
/// negative.
pub fn self_functional(
    f: &FunctionSpec,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<QuadResult, FunctionalError> {
    let r = chebyshev_functional(f, f, lo, hi, tol)?;
    if r.value < -(r.err_est + 1e-12) {
        return Err(FunctionalError::NegativeSelfFunctional(r.value, r.err_est));
    }
    Ok(QuadResult {
        value: r.value.max(0.0),
        ..r
    })
}

/// `|T_left(f,g) − T_right(f,g)|` for an interval config, each side at
/// half the tolerance.
pub fn functional_difference(
    f: &FunctionSpec,
    g: &FunctionSpec,
    cfg: &IntervalConfig,
    tol: f64,
) -> Result<TwoFunctionalDiff, FunctionalError> {
    let ((llo, lhi), (rlo, rhi)) = cfg.sides();
    if !(llo < lhi) || !(rlo < rhi) {
        return Err(FunctionalError::BadConfig {
            a: cfg.a,
            u: cfg.u,
            v: cfg.v,
            b: cfg.b,
        });
    }
    let t_left = chebyshev_functional(f, g, llo, lhi, tol / 2.0)?;
    let t_right = chebyshev_functional(f, g, rlo, rhi, tol / 2.0)?;
    Ok(TwoFunctionalDiff {
        t_left,
        t_right,
        diff_abs: (t_left.value - t_right.value).abs(),
        err_est: t_left.err_est + t_right.err_est,
    })
}

/// The kernel transform `Ψ_g(t; α, β) = ∫_α^t g − (t−α)/(β−α) ∫_α^β g`.
pub fn psi(
    g: &FunctionSpec,
    t: f64,
    alpha: f64,
    beta: f64,
    tol: f64,
) -> Result<QuadResult, FunctionalError> {
    check_interval(g, g, alpha, beta)?;
    if t < alpha || t > beta {
        return Err(FunctionalError::BadPoint(t, alpha, beta));
    }
    let budget = budget_from_env();
    let head = integrate_spec(g, alpha, t, tol / 2.0, budget)?;
    let full = integrate_spec(g, alpha, beta, tol / 2.0, budget)?;
    let frac = (t - alpha) / (beta - alpha);
    Ok(QuadResult {
        value: head.value - frac * full.value,
        err_est: head.err_est + frac * full.err_est,
        evals: head.evals + full.evals,
    })
}

/// `1/(b−a) ∫_a^b f − 1/(d−c) ∫_c^d f` for `[c,d] ⊆ [a,b]`.
pub fn mean_difference(
    f: &FunctionSpec,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    tol: f64,
) -> Result<QuadResult, FunctionalError> {
    check_interval(f, f, a, b)?;
    if !(c < d) || c < a - 1e-12 || d > b + 1e-12 {
        return Err(FunctionalError::BadInterval(c, d));
    }
    let budget = budget_from_env();
    let outer = integrate_spec(f, a, b, tol * (b - a) / 2.0, budget)?;
    let inner = integrate_spec(f, c, d, tol * (d - c) / 2.0, budget)?;
    Ok(QuadResult {
        value: outer.value / (b - a) - inner.value / (d - c),
        err_est: outer.err_est / (b - a) + inner.err_est / (d - c),
        evals: outer.evals + inner.evals,
    })
}

/// Recompute `T(f,g)` over `[lo, hi]` through a Stieltjes identity:
///
/// ```text
/// T = 1/(hi−lo)² ∫ k(t) df(t)
/// ```
///
/// with the Cerone kernel `k(t) = (t−lo)∫_t^hi g − (hi−t)∫_lo^t g` or the
/// Dragomir kernel `k(t) = (t−lo)∫_lo^hi g − (hi−lo)∫_lo^t g`. The two are
/// algebraically equal but integrate `g` along different routes, so they
/// serve as independent cross-checks of [`chebyshev_functional`].
///
/// `df` is handled for two integrator classes: absolutely continuous `f`
/// (the outer integral becomes `∫ k f′ dt`) and pure step `f` (the
/// integral collapses to `Σ k(tᵢ)·jumpᵢ` over interior jumps).
pub fn chebyshev_via_identity(
    f: &FunctionSpec,
    g: &FunctionSpec,
    lo: f64,
    hi: f64,
    route: IdentityRoute,
    tol: f64,
) -> Result<QuadResult, FunctionalError> {
    check_interval(f, g, lo, hi)?;
    let budget = budget_from_env();
    let w = hi - lo;

    // inner integrals of g, each resolved to inner_tol
    let g_scale = sample_scale(g, 0.0, lo, hi).max(1.0);

    if f.is_step() {
        let jumps: Vec<(f64, f64)> = f
            .jumps()
            .iter()
            .copied()
            .filter(|&(t, _)| t >= lo && t <= hi)
            .collect();
        let edge_eps = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
        for &(t, _) in &jumps {
            if (t - lo).abs() < edge_eps || (t - hi).abs() < edge_eps {
                return Err(FunctionalError::JumpAtEndpoint(t));
            }
        }
        let jump_mass: f64 = jumps.iter().map(|&(_, j)| j.abs()).sum();
        if jump_mass == 0.0 {
            return Ok(QuadResult::ZERO);
        }
        // |δT| ≤ (1/w²)·Σ |δk(tᵢ)|·|Jᵢ| and |δk| ≤ w·δ_inner
        let inner_tol = tol * w / (2.0 * jump_mass);
        let mut value = 0.0;
        let mut err = 0.0;
        let mut evals = 0;
        for &(t, jump) in &jumps {
            let (k, k_err, k_evals) = kernel(g, t, lo, hi, route, inner_tol, budget)?;
            value += k * jump;
            err += k_err * jump.abs();
            evals += k_evals;
        }
        return Ok(QuadResult {
            value: value / (w * w),
            err_est: err / (w * w),
            evals,
        });
    }

    if f.is_continuous() {
        let deriv = match f.deriv() {
            Some(d) => d.clone(),
            None => f.expr().differentiate().map_err(FuncError::from)?,
        };
        // rough ∫|f′| for the inner tolerance split
        let mut v_est = 0.0;
        for i in 0..64 {
            let t = lo + w * (i as f64 + 0.5) / 64.0;
            v_est += deriv.eval(t).abs() * w / 64.0;
        }
        let v_est = v_est.max(1.0);
        let inner_tol = (tol * w / (4.0 * v_est)).max(1e-15 * g_scale);
        let outer_tol = tol * w * w / 2.0;

        let mut bps = f.breakpoints_in(lo, hi);
        bps.extend(g.breakpoints_in(lo, hi));
        bps.sort_by(f64::total_cmp);
        bps.dedup();

        let inner_evals = std::cell::Cell::new(0u64);
        let inner_err_max = std::cell::Cell::new(0.0f64);
        let outer = integrate(
            |t| {
                let (k, k_err, k_evals) =
                    kernel(g, t, lo, hi, route, inner_tol, budget).unwrap_or((f64::NAN, 0.0, 0));
                inner_evals.set(inner_evals.get() + k_evals);
                if k_err > inner_err_max.get() {
                    inner_err_max.set(k_err);
                }
                k * deriv.eval(t)
            },
            lo,
            hi,
            outer_tol,
            budget,
            &bps,
        )?;
        // propagated inner error: ∫ |δk·f′| ≤ δk_max · ∫|f′|
        let err_est = outer.err_est / (w * w) + inner_err_max.get() * v_est / (w * w);
        return Ok(QuadResult {
            value: outer.value / (w * w),
            err_est,
            evals: outer.evals + inner_evals.get(),
        });
    }

    Err(FunctionalError::UnsupportedIntegrator(
        f.source().to_string(),
    ))
}

/// Evaluate the identity kernel at `t`, returning `(value, err, evals)`.
fn kernel(
    g: &FunctionSpec,
    t: f64,
    lo: f64,
    hi: f64,
    route: IdentityRoute,
    inner_tol: f64,
    budget: u64,
) -> Result<(f64, f64, u64), QuadError> {
    match route {
        IdentityRoute::Cerone => {
            let tail = integrate_spec(g, t, hi, inner_tol / 2.0, budget)?;
            let head = integrate_spec(g, lo, t, inner_tol / 2.0, budget)?;
            let value = (t - lo) * tail.value - (hi - t) * head.value;
            let err = (t - lo) * tail.err_est + (hi - t) * head.err_est;
            Ok((value, err, tail.evals + head.evals))
        }
        IdentityRoute::Dragomir => {
            let full = integrate_spec(g, lo, hi, inner_tol / 2.0, budget)?;
            let head = integrate_spec(g, lo, t, inner_tol / 2.0, budget)?;
            let value = (t - lo) * full.value - (hi - lo) * head.value;
            let err = (t - lo) * full.err_est + (hi - lo) * head.err_est;
            Ok((value, err, full.evals + head.evals))
        }
    }
}

/// Convenience: evaluate the derivative expression if attached, else
/// differentiate on the fly (used by identity-based routines).
pub fn derivative_expr(f: &FunctionSpec) -> Result<Expr, FunctionalError> {
    match f.deriv() {
        Some(d) => Ok(d.clone()),
        None => Ok(f.expr().differentiate().map_err(FuncError::from)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(src: &str, lo: f64, hi: f64) -> FunctionSpec {
        FunctionSpec::parse(src, (lo, hi)).unwrap()
    }

    #[test]
    fn functional_matches_antiderivative_arithmetic() {
        let x = spec("x", 0.0, 1.0);
        let x2 = spec("x^2", 0.0, 1.0);
        // means over [0,1]: x ↦ 1/2, x² ↦ 1/3, x³ ↦ 1/4, x⁴ ↦ 1/5
        let t = chebyshev_functional(&x, &x, 0.0, 1.0, 1e-12).unwrap();
        assert!((t.value - (1.0 / 3.0 - 0.25)).abs() < 1e-12);
        let t = chebyshev_functional(&x, &x2, 0.0, 1.0, 1e-12).unwrap();
        assert!((t.value - (0.25 - 0.5 / 3.0)).abs() < 1e-12);
        let t = chebyshev_functional(&x2, &x2, 0.0, 1.0, 1e-12).unwrap();
        assert!((t.value - (0.2 - 1.0 / 9.0)).abs() < 1e-12);
    }

    #[test]
    fn functional_is_shift_invariant_and_symmetric() {
        let f = spec("sin(x)", 0.0, 2.0);
        let g = spec("exp(x)", 0.0, 2.0);
        let t_fg = chebyshev_functional(&f, &g, 0.0, 2.0, 1e-11).unwrap();
        let t_gf = chebyshev_functional(&g, &f, 0.0, 2.0, 1e-11).unwrap();
        assert!((t_fg.value - t_gf.value).abs() < 2e-11);

        let g_shift = spec("exp(x)+7", 0.0, 2.0);
        let t_shift = chebyshev_functional(&f, &g_shift, 0.0, 2.0, 1e-11).unwrap();
        assert!((t_fg.value - t_shift.value).abs() < 2e-11);
    }

    #[test]
    fn psi_matches_closed_form() {
        // Ψ_x(t; 0, 1) = t²/2 − t/2 = −t(1−t)/2
        let g = spec("x", 0.0, 1.0);
        let r = psi(&g, 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - (-0.125)).abs() < 1e-12);
        let r = psi(&g, 0.25, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - (-0.09375)).abs() < 1e-12);
        // endpoints vanish
        let r = psi(&g, 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn mean_difference_matches_closed_form() {
        // f = x: mean over [0,1] is 1/2, over [0, 1/2] is 1/4
        let f = spec("x", 0.0, 1.0);
        let r = mean_difference(&f, 0.0, 1.0, 0.0, 0.5, 1e-12).unwrap();
        assert!((r.value - 0.25).abs() < 1e-12);
        assert!(mean_difference(&f, 0.0, 1.0, 0.2, 0.2, 1e-12).is_err());
    }

    #[test]
    fn identity_routes_agree_with_direct_value() {
        let f = spec("x^2", 0.0, 1.0);
        let g = spec("sin(x)", 0.0, 1.0);
        let direct = chebyshev_functional(&f, &g, 0.0, 1.0, 1e-11).unwrap();
        for route in [IdentityRoute::Cerone, IdentityRoute::Dragomir] {
            let via = chebyshev_via_identity(&f, &g, 0.0, 1.0, route, 1e-9).unwrap();
            let slack = direct.err_est + via.err_est + 1e-9;
            assert!(
                (via.value - direct.value).abs() <= slack,
                "route {route:?}: {} vs {} (slack {slack:e})",
                via.value,
                direct.value
            );
        }
    }

    #[test]
    fn identity_handles_step_integrator() {
        // f = sign(x − 1/2) jumps by 2 at 1/2; with g = x the kernel value
        // is 1/8, so T = 2·(1/8) = 1/4.
        let f = spec("sign(x-0.5)", 0.0, 1.0);
        let g = spec("x", 0.0, 1.0);
        for route in [IdentityRoute::Cerone, IdentityRoute::Dragomir] {
            let via = chebyshev_via_identity(&f, &g, 0.0, 1.0, route, 1e-11).unwrap();
            assert!(
                (via.value - 0.25).abs() < 1e-10,
                "route {route:?}: {}",
                via.value
            );
        }
        let direct = chebyshev_functional(&f, &g, 0.0, 1.0, 1e-12).unwrap();
        assert!((direct.value - 0.25).abs() < 1e-11);
    }

    #[test]
    fn identity_rejects_mixed_integrators() {
        // jump plus a genuine slope: neither AC nor pure step
        let f = spec("x+sign(x-0.5)", 0.0, 1.0);
        let g = spec("x", 0.0, 1.0);
        assert!(matches!(
            chebyshev_via_identity(&f, &g, 0.0, 1.0, IdentityRoute::Cerone, 1e-9),
            Err(FunctionalError::UnsupportedIntegrator(_))
        ));
    }

    #[test]
    fn functional_difference_reports_both_sides() {
        let f = spec("x", 0.0, 1.0);
        let g = spec("x", 0.0, 1.0);
        let cfg = IntervalConfig::overlap(0.0, 0.25, 0.75, 1.0).unwrap();
        let d = functional_difference(&f, &g, &cfg, 1e-12).unwrap();
        // T(x,x) over [α,β] = (β−α)²/12
        assert!((d.t_left.value - 0.75 * 0.75 / 12.0).abs() < 1e-12);
        assert!((d.t_right.value - 0.75 * 0.75 / 12.0).abs() < 1e-12);
        assert!(d.diff_abs < 1e-12);

        let nested = IntervalConfig::nested(0.0, 0.25, 0.75, 1.0).unwrap();
        let d = functional_difference(&f, &g, &nested, 1e-12).unwrap();
        assert!((d.t_left.value - 0.25 / 12.0).abs() < 1e-12);
        assert!((d.t_right.value - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(IntervalConfig::overlap(0.0, 0.5, 0.25, 1.0).is_err());
        assert!(IntervalConfig::overlap(0.5, 0.25, 0.75, 1.0).is_err());
        assert!(IntervalConfig::overlap(0.0, 0.25, 0.25, 1.0).is_ok());
        let cfg = IntervalConfig::overlap(0.0, 0.25, 0.25, 1.0).unwrap();
        assert!(functional_difference(
            &spec("x", 0.0, 1.0),
            &spec("x", 0.0, 1.0),
            &cfg,
            1e-10
        )
        .is_ok());
    }

    #[test]
    fn self_functional_clamps_noise() {
        let c = spec("1", 0.0, 1.0);
        let r = self_functional(&c, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
