//! Function models: a parsed expression together with its domain, detected
//! breakpoints, optional symbolic derivative and declared class constants.
//!
//! A [`FunctionSpec`] is the unit every other module consumes: quadrature
//! splits at its breakpoints, the Stieltjes identities dispatch on whether
//! it is absolutely continuous or a pure step function, and the bound
//! evaluators read its [`ClassConstants`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{DiffError, Expr, ParseError};

/// Number of subintervals in the construction-time sample grid.
const SAMPLE_GRID: usize = 1024;

/// Errors from building or evaluating a function model.
#[derive(Debug, Clone, Error)]
pub enum FuncError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Diff(#[from] DiffError),
    #[error("invalid domain [{0}, {1}]: endpoints must be finite with lo < hi")]
    InvalidDomain(f64, f64),
    #[error("'{source_text}' is not finite at x = {x}")]
    NonFinite { source_text: String, x: f64 },
    #[error("x = {0} lies outside the domain [{1}, {2}]")]
    OutsideDomain(f64, f64, f64),
    #[error(
        "symbolic derivative disagrees with central differences at x = {x}: \
         symbolic {symbolic}, numeric {numeric}"
    )]
    DerivativeMismatch { x: f64, symbolic: f64, numeric: f64 },
    #[error("declared range [{m}, {big_m}] violated: f({x}) = {fx}")]
    RangeViolated { m: f64, big_m: f64, x: f64, fx: f64 },
    #[error("declared monotone nondecreasing, but f({x0}) = {y0} > f({x1}) = {y1}")]
    NotMonotone { x0: f64, y0: f64, x1: f64, y1: f64 },
}

/// Declared analytic constants for a function on its domain.
///
/// These are inputs the bound evaluators trust; the verification layer
/// cross-checks them against sampled estimates. Derivative norms are keyed
/// by exponent, with `f64::INFINITY` for the sup norm.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassConstants {
    /// Total variation of `f` over the domain.
    pub total_variation: Option<f64>,
    /// Lipschitz constant of `f`.
    pub lipschitz: Option<f64>,
    /// Hölder `(order, constant)` with order in (0, 1].
    pub holder: Option<(f64, f64)>,
    /// Norms `‖f′‖_p` over the whole domain, as `(p, value)` pairs.
    pub deriv_norms: Vec<(f64, f64)>,
    /// `f` is nondecreasing on the domain.
    pub monotone_nondecreasing: bool,
    /// Bounds `m ≤ f ≤ M` on the domain.
    pub range: Option<(f64, f64)>,
}

impl ClassConstants {
    /// Look up `‖f′‖_p`; exponents match within 1e-12 (`INFINITY` exactly).
    pub fn deriv_norm(&self, p: f64) -> Option<f64> {
        self.deriv_norms
            .iter()
            .find(|(q, _)| {
                if p.is_infinite() || q.is_infinite() {
                    p == *q
                } else {
                    (p - q).abs() <= 1e-12 * p.abs().max(1.0)
                }
            })
            .map(|&(_, v)| v)
    }

    /// Insert or replace `‖f′‖_p = value`.
    pub fn set_deriv_norm(&mut self, p: f64, value: f64) {
        if let Some(slot) = self.deriv_norms.iter_mut().find(|(q, _)| *q == p) {
            slot.1 = value;
        } else {
            self.deriv_norms.push((p, value));
            self.deriv_norms
                .sort_by(|(a, _), (b, _)| a.total_cmp(b));
        }
    }
}

/// A function of one variable on a fixed domain.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    expr: Expr,
    source: String,
    domain: (f64, f64),
    deriv: Option<Expr>,
    breakpoints: Vec<f64>,
    unlocated_kinks: bool,
    unlocated_jumps: bool,
    /// Interior jump discontinuities as `(location, f(t+) − f(t−))`.
    jumps: Vec<(f64, f64)>,
    piecewise_constant: bool,
    /// Optional declared cut points between which `f` is monotone
    /// (enables exact total variation).
    monotone_cuts: Option<Vec<f64>>,
    /// Declared class constants.
    pub constants: ClassConstants,
}

impl FunctionSpec {
    /// Parse `source` and build a model on `domain`, sampling a 1024-point
    /// grid plus all breakpoints to screen for domain faults.
    pub fn parse(source: &str, domain: (f64, f64)) -> Result<Self, FuncError> {
        let expr = Expr::parse(source)?;
        Self::from_expr(expr, domain)
    }

    /// Build a model from an already-constructed tree.
    pub fn from_expr(expr: Expr, domain: (f64, f64)) -> Result<Self, FuncError> {
        let (lo, hi) = domain;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(FuncError::InvalidDomain(lo, hi));
        }
        let scan = expr.scan_breakpoints(lo, hi);
        let source = expr.to_string();
        let mut spec = FunctionSpec {
            expr,
            source,
            domain,
            deriv: None,
            breakpoints: scan.points,
            unlocated_kinks: scan.unlocated_kinks,
            unlocated_jumps: scan.unlocated_jumps,
            jumps: Vec::new(),
            piecewise_constant: false,
            monotone_cuts: None,
            constants: ClassConstants::default(),
        };
        spec.piecewise_constant =
            is_piecewise_constant(&spec.expr) && !spec.unlocated_kinks && !spec.unlocated_jumps;
        spec.detect_jumps();
        for t in spec.sample_points() {
            let v = spec.expr.eval(t);
            if !v.is_finite() {
                return Err(FuncError::NonFinite {
                    source_text: spec.source.clone(),
                    x: t,
                });
            }
        }
        Ok(spec)
    }

    /// Construction-time sample set: uniform grid, breakpoints, and the
    /// midpoints of the pieces between them.
    fn sample_points(&self) -> Vec<f64> {
        let (lo, hi) = self.domain;
        let mut pts: Vec<f64> = (0..=SAMPLE_GRID)
            .map(|i| lo + (hi - lo) * i as f64 / SAMPLE_GRID as f64)
            .collect();
        pts.extend_from_slice(&self.breakpoints);
        let mut edges = vec![lo];
        edges.extend_from_slice(&self.breakpoints);
        edges.push(hi);
        for w in edges.windows(2) {
            pts.push(0.5 * (w[0] + w[1]));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Identify which breakpoints are genuine jump discontinuities.
    ///
    /// For piecewise-constant trees the one-sided limits are read off the
    /// midpoints of the adjacent pieces, which is exact. Otherwise a small
    /// symmetric offset classifies the breakpoint; those magnitudes are
    /// diagnostic only (such functions are rejected as Stieltjes
    /// integrators anyway).
    fn detect_jumps(&mut self) {
        let (lo, hi) = self.domain;
        let mut edges = vec![lo];
        edges.extend_from_slice(&self.breakpoints);
        edges.push(hi);
        let mut jumps = Vec::new();
        for i in 1..edges.len() - 1 {
            let t = edges[i];
            let (left, right) = if self.piecewise_constant {
                (
                    self.expr.eval(0.5 * (edges[i - 1] + t)),
                    self.expr.eval(0.5 * (t + edges[i + 1])),
                )
            } else {
                let d = (hi - lo) * 1e-8;
                (self.expr.eval(t - d), self.expr.eval(t + d))
            };
            let jump = right - left;
            let scale = 1.0 + left.abs() + right.abs();
            if jump.abs() > 1e-7 * scale {
                jumps.push((t, jump));
            }
        }
        self.jumps = jumps;
    }

    /// Attach the symbolic derivative, validating it against central
    /// differences at interior points away from breakpoints.
    pub fn attach_derivative(&mut self) -> Result<(), FuncError> {
        let deriv = self.expr.differentiate()?;
        let (lo, hi) = self.domain;
        let width = hi - lo;
        let h = width * 1e-6;
        'points: for i in 1..64 {
            let t = lo + width * i as f64 / 64.0;
            for &bp in &self.breakpoints {
                if (t - bp).abs() < width * 1e-3 {
                    continue 'points;
                }
            }
            let symbolic = deriv.eval(t);
            let numeric = (self.expr.eval(t + h) - self.expr.eval(t - h)) / (2.0 * h);
            if (symbolic - numeric).abs() > 1e-6 * (1.0 + symbolic.abs()) {
                return Err(FuncError::DerivativeMismatch {
                    x: t,
                    symbolic,
                    numeric,
                });
            }
        }
        self.deriv = Some(deriv);
        Ok(())
    }

    /// Declare class constants, spot-checking range and monotonicity
    /// declarations against the sample grid.
    pub fn with_constants(mut self, constants: ClassConstants) -> Result<Self, FuncError> {
        let pts = self.sample_points();
        if let Some((m, big_m)) = constants.range {
            let slack = 1e-9 * (1.0 + big_m.abs().max(m.abs()));
            for &t in &pts {
                let v = self.expr.eval(t);
                if v < m - slack || v > big_m + slack {
                    return Err(FuncError::RangeViolated {
                        m,
                        big_m,
                        x: t,
                        fx: v,
                    });
                }
            }
        }
        if constants.monotone_nondecreasing {
            let mut prev: Option<(f64, f64)> = None;
            for &t in &pts {
                let v = self.expr.eval(t);
                if let Some((x0, y0)) = prev {
                    if v < y0 - 1e-9 * (1.0 + y0.abs()) {
                        return Err(FuncError::NotMonotone {
                            x0,
                            y0,
                            x1: t,
                            y1: v,
                        });
                    }
                }
                prev = Some((t, v));
            }
        }
        self.constants = constants;
        Ok(self)
    }

    /// Declare cut points between which the function is monotone.
    pub fn set_monotone_cuts(&mut self, cuts: Vec<f64>) {
        self.monotone_cuts = Some(cuts);
    }

    /// Evaluate at `t`, rejecting points outside the domain.
    pub fn eval(&self, t: f64) -> Result<f64, FuncError> {
        let (lo, hi) = self.domain;
        if t < lo || t > hi {
            return Err(FuncError::OutsideDomain(t, lo, hi));
        }
        Ok(self.expr.eval(t))
    }

    /// Evaluate without the domain check (quadrature-internal fast path).
    #[inline]
    pub fn eval_raw(&self, t: f64) -> f64 {
        self.expr.eval(t)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Symbolic derivative, if attached.
    pub fn deriv(&self) -> Option<&Expr> {
        self.deriv.as_ref()
    }

    /// Interior breakpoints (kinks and jumps), sorted.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Breakpoints restricted to an open subinterval.
    pub fn breakpoints_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.breakpoints
            .iter()
            .copied()
            .filter(|&t| t > lo && t < hi)
            .collect()
    }

    /// Interior jump discontinuities as `(location, f(t+) − f(t−))`.
    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    /// Declared monotone cut points, if any.
    pub fn monotone_cuts(&self) -> Option<&[f64]> {
        self.monotone_cuts.as_deref()
    }

    /// True for piecewise-constant functions with located breakpoints:
    /// valid pure-step Stieltjes integrators.
    pub fn is_step(&self) -> bool {
        self.piecewise_constant
    }

    /// Continuous on the domain with no unlocatable jumps; such functions
    /// (with a derivative attached) are valid absolutely continuous
    /// Stieltjes integrators.
    pub fn is_continuous(&self) -> bool {
        self.jumps.is_empty() && !self.unlocated_jumps
    }

    /// Build a model of the attached derivative on the same domain.
    pub fn derivative_spec(&self) -> Result<FunctionSpec, FuncError> {
        let deriv = match &self.deriv {
            Some(d) => d.clone(),
            None => self.expr.differentiate()?,
        };
        FunctionSpec::from_expr(deriv, self.domain)
    }
}

/// Structural check: the tree is constant between located breakpoints.
fn is_piecewise_constant(e: &Expr) -> bool {
    use crate::expr::UnaryFn;
    match e {
        Expr::Num(_) => true,
        Expr::Var => false,
        Expr::Neg(inner) => is_piecewise_constant(inner),
        Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) | Expr::Pow(l, r) => {
            is_piecewise_constant(l) && is_piecewise_constant(r)
        }
        Expr::Call(UnaryFn::Sign, arg) => arg.as_affine().is_some() || is_piecewise_constant(arg),
        Expr::Call(_, arg) => is_piecewise_constant(arg),
        Expr::Piecewise { branches, otherwise } => {
            branches.iter().all(|b| is_piecewise_constant(&b.body))
                && is_piecewise_constant(otherwise)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_evaluates() {
        let f = FunctionSpec::parse("x^2", (0.0, 1.0)).unwrap();
        assert_eq!(f.eval(0.5).unwrap(), 0.25);
        assert!(f.eval(1.5).is_err());
        assert!(f.is_continuous());
        assert!(!f.is_step());
    }

    #[test]
    fn rejects_domain_faults() {
        // log is negative-argument-undefined on part of the domain
        assert!(FunctionSpec::parse("log(x-0.5)", (0.0, 1.0)).is_err());
        assert!(FunctionSpec::parse("x", (1.0, 0.0)).is_err());
        assert!(FunctionSpec::parse("1/x", (-1.0, 1.0)).is_err());
        // fine once the domain avoids the fault
        assert!(FunctionSpec::parse("log(x-0.5)", (0.6, 1.0)).is_ok());
    }

    #[test]
    fn classifies_step_functions() {
        let f = FunctionSpec::parse("sign(x-0.5)", (0.0, 1.0)).unwrap();
        assert!(f.is_step());
        assert!(!f.is_continuous());
        assert_eq!(f.jumps(), &[(0.5, 2.0)]);

        let g = FunctionSpec::parse("0.5*sign(x-0.25)-sign(x-0.75)+2", (0.0, 1.0)).unwrap();
        assert!(g.is_step());
        assert_eq!(g.jumps().len(), 2);
        assert_eq!(g.jumps()[0], (0.25, 1.0));
        assert_eq!(g.jumps()[1], (0.75, -2.0));

        // kinks are breakpoints but not jumps
        let h = FunctionSpec::parse("abs(x-0.5)", (0.0, 1.0)).unwrap();
        assert!(!h.is_step());
        assert!(h.is_continuous());
        assert_eq!(h.breakpoints(), &[0.5]);
        assert!(h.jumps().is_empty());
    }

    #[test]
    fn classifies_discontinuous_piecewise() {
        let f = FunctionSpec::parse("piecewise((x<0.5, 0), 1)", (0.0, 1.0)).unwrap();
        assert!(f.is_step());
        assert_eq!(f.jumps(), &[(0.5, 1.0)]);
        // continuous piecewise join: breakpoint, no jump
        let g = FunctionSpec::parse("piecewise((x<0.5, x), 1-x)", (0.0, 1.0)).unwrap();
        assert!(!g.is_step());
        assert!(g.is_continuous());
        assert_eq!(g.breakpoints(), &[0.5]);
    }

    #[test]
    fn attaches_and_checks_derivative() {
        let mut f = FunctionSpec::parse("x^2*sin(x)", (0.0, 2.0)).unwrap();
        f.attach_derivative().unwrap();
        let d = f.deriv().unwrap();
        assert!((d.eval(1.0) - (2.0 * 1.0f64.sin() + 1.0f64.cos())).abs() < 1e-12);
    }

    #[test]
    fn validates_declared_constants() {
        let f = FunctionSpec::parse("x", (0.0, 1.0)).unwrap();
        let ok = ClassConstants {
            range: Some((0.0, 1.0)),
            monotone_nondecreasing: true,
            ..Default::default()
        };
        assert!(f.clone().with_constants(ok).is_ok());

        let bad_range = ClassConstants {
            range: Some((0.0, 0.5)),
            ..Default::default()
        };
        assert!(matches!(
            f.clone().with_constants(bad_range),
            Err(FuncError::RangeViolated { .. })
        ));

        let g = FunctionSpec::parse("-(x^2)+x", (0.0, 1.0)).unwrap();
        let bad_mono = ClassConstants {
            monotone_nondecreasing: true,
            ..Default::default()
        };
        assert!(matches!(
            g.with_constants(bad_mono),
            Err(FuncError::NotMonotone { .. })
        ));
    }

    #[test]
    fn norm_lookup_matches_exponents() {
        let mut c = ClassConstants::default();
        c.set_deriv_norm(2.0, 1.5);
        c.set_deriv_norm(f64::INFINITY, 3.0);
        assert_eq!(c.deriv_norm(2.0), Some(1.5));
        assert_eq!(c.deriv_norm(2.0 + 1e-13), Some(1.5));
        assert_eq!(c.deriv_norm(f64::INFINITY), Some(3.0));
        assert_eq!(c.deriv_norm(3.0), None);
    }

    #[test]
    fn derivative_spec_of_kinked_function() {
        let mut f = FunctionSpec::parse("abs(x-0.5)", (0.0, 1.0)).unwrap();
        f.attach_derivative().unwrap();
        let df = f.derivative_spec().unwrap();
        assert!(df.is_step());
        assert_eq!(df.eval(0.25).unwrap(), -1.0);
        assert_eq!(df.eval(0.75).unwrap(), 1.0);
    }
}
