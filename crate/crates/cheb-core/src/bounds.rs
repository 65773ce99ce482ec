//! Closed-form right-hand sides: every published bound on `T_a^b(f,g)`
//! and on the two-functional difference `|T_a^v − T_u^b|`, evaluated from
//! declared class constants and interval geometry.
//!
//! Evaluators keep the bracketed "average plus half-difference" forms as
//! printed (with a debug assertion that each bracket equals the max it
//! encodes) so the constants stay traceable. Four published displays are
//! replaced by the forms their own proofs and midpoint corollaries
//! support: the Lipschitz-integrator bound uses (L/12)·[(v−a)²+(b−u)²]
//! (and its Beta-weighted L_p analogue); the Lipschitz–Hölder bound
//! carries the factor 2 needed for consistency with its p = 1 midpoint
//! value L_fL_g(b−a)²/24; the two-absolutely-continuous sup-norm case
//! carries length exponent 1+1/β; and the L_p mean-difference bound uses
//! the exact Hölder constant ‖K‖_q of its kernel. Each replacement is
//! motivated at the evaluator it affects.

use serde::Serialize;
use thiserror::Error;

use crate::analyze::beta;
use crate::func::FunctionSpec;
use crate::functional::{self, FunctionalError, IntervalConfig, IntervalMode};
use crate::quad::QuadResult;

/// Errors from bound evaluation.
#[derive(Debug, Error)]
pub enum BoundError {
    #[error("unknown theorem id '{0}'")]
    UnknownTheorem(String),
    #[error("theorem '{0}' needs function values, not constants; use `eval` or `verify`")]
    NotConstantBased(String),
    #[error("missing constant: {0}")]
    MissingConstant(&'static str),
    #[error("constant {0} = {1} must be nonnegative")]
    NegativeConstant(&'static str, f64),
    #[error("Hölder order p = {0} must lie in (0, 1]")]
    BadOrder(f64),
    #[error("exponents p = {0}, q = {1} must be conjugate (> 1, 1/p + 1/q = 1)")]
    NonConjugate(f64, f64),
    #[error("degenerate configuration: {0}")]
    DegenerateConfig(String),
}

/// A conjugate exponent pair `p, q > 1` with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
}

impl ExponentPair {
    pub fn new(p: f64, q: f64) -> Result<Self, BoundError> {
        if !(p > 1.0) || !(q > 1.0) || (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
            return Err(BoundError::NonConjugate(p, q));
        }
        Ok(ExponentPair { p, q })
    }

    /// Build from `p` alone, deriving `q = p/(p−1)`.
    pub fn from_p(p: f64) -> Result<Self, BoundError> {
        if !(p > 1.0) {
            return Err(BoundError::NonConjugate(p, f64::NAN));
        }
        Ok(ExponentPair { p, q: p / (p - 1.0) })
    }
}

/// Which Lebesgue norm of the integrand's derivative a case consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormCase {
    Linf,
    Lp,
    L1,
}

impl NormCase {
    pub fn name(self) -> &'static str {
        match self {
            NormCase::Linf => "Linf",
            NormCase::Lp => "Lp",
            NormCase::L1 => "L1",
        }
    }
}

/// An evaluated right-hand side.
#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    /// Stable theorem/case identifier, e.g. `"thm4.5.1/Linf"`.
    pub theorem: String,
    /// The bound value; nonnegative for admissible inputs.
    pub rhs: f64,
    /// Constants consumed, in evaluation order.
    pub inputs: Vec<(String, f64)>,
    /// False when a checked hypothesis failed; the value is then
    /// reported but not certified.
    pub preconditions_ok: bool,
    /// Hypothesis-check outcomes and caveats.
    pub notes: Vec<String>,
}

impl BoundResult {
    fn new(theorem: impl Into<String>, rhs: f64) -> Self {
        BoundResult {
            theorem: theorem.into(),
            rhs,
            inputs: Vec::new(),
            preconditions_ok: true,
            notes: Vec::new(),
        }
    }

    fn with(mut self, name: &str, value: f64) -> Self {
        self.inputs.push((name.to_string(), value));
        self
    }

    fn flag(mut self, note: impl Into<String>) -> Self {
        self.preconditions_ok = false;
        self.notes.push(note.into());
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn nonneg(name: &'static str, v: f64) -> Result<f64, BoundError> {
    if v < 0.0 || v.is_nan() {
        return Err(BoundError::NegativeConstant(name, v));
    }
    Ok(v)
}

/// The printed "average plus half-difference" form of `max(x, y)`.
fn bracket_max(x: f64, y: f64) -> f64 {
    let br = 0.5 * (x + y) + 0.5 * (y - x).abs();
    debug_assert!(
        (br - x.max(y)).abs() <= 1e-12 * (1.0 + br.abs()),
        "bracket {br} != max({x}, {y})"
    );
    br
}

// ---------------------------------------------------------------------
// Full-interval bounds
// ---------------------------------------------------------------------

/// Cases of the classical full-interval theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalCase {
    /// `(b−a)²/12 · ‖f′‖_∞ ‖g′‖_∞`
    Chebyshev,
    /// `¼ (M₁−m₁)(M₂−m₂)`
    Gruss,
    /// `((b−a)/π²) ‖f′‖₂ ‖g′‖₂`
    Lupas,
    /// `⅛ (b−a)(M−m) ‖g′‖_∞`
    Ostrowski,
}

/// Constants feeding the classical cases.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassicalInputs {
    pub f_deriv_inf: Option<f64>,
    pub g_deriv_inf: Option<f64>,
    pub f_deriv_2: Option<f64>,
    pub g_deriv_2: Option<f64>,
    /// range of `f`: (m₁, M₁) — also (m, M) for the Ostrowski-type case
    pub f_range: Option<(f64, f64)>,
    /// range of `g`: (m₂, M₂)
    pub g_range: Option<(f64, f64)>,
}

/// One classical full-interval bound on `|T_a^b(f,g)|`.
pub fn classical_bound(
    case: ClassicalCase,
    a: f64,
    b: f64,
    k: &ClassicalInputs,
) -> Result<BoundResult, BoundError> {
    let w = b - a;
    match case {
        ClassicalCase::Chebyshev => {
            let nf = nonneg(
                "f_deriv_inf",
                k.f_deriv_inf.ok_or(BoundError::MissingConstant("‖f′‖_∞"))?,
            )?;
            let ng = nonneg(
                "g_deriv_inf",
                k.g_deriv_inf.ok_or(BoundError::MissingConstant("‖g′‖_∞"))?,
            )?;
            Ok(BoundResult::new("thm1/chebyshev", w * w / 12.0 * nf * ng)
                .with("f_deriv_inf", nf)
                .with("g_deriv_inf", ng))
        }
        ClassicalCase::Gruss => {
            let (m1, big_m1) = k.f_range.ok_or(BoundError::MissingConstant("m₁, M₁"))?;
            let (m2, big_m2) = k.g_range.ok_or(BoundError::MissingConstant("m₂, M₂"))?;
            let r1 = nonneg("M1 - m1", big_m1 - m1)?;
            let r2 = nonneg("M2 - m2", big_m2 - m2)?;
            Ok(BoundResult::new("thm1/gruss", 0.25 * r1 * r2)
                .with("m1", m1)
                .with("M1", big_m1)
                .with("m2", m2)
                .with("M2", big_m2))
        }
        ClassicalCase::Lupas => {
            let nf = nonneg(
                "f_deriv_2",
                k.f_deriv_2.ok_or(BoundError::MissingConstant("‖f′‖₂"))?,
            )?;
            let ng = nonneg(
                "g_deriv_2",
                k.g_deriv_2.ok_or(BoundError::MissingConstant("‖g′‖₂"))?,
            )?;
            let rhs = w / (std::f64::consts::PI * std::f64::consts::PI) * nf * ng;
            Ok(BoundResult::new("thm1/lupas", rhs)
                .with("f_deriv_2", nf)
                .with("g_deriv_2", ng))
        }
        ClassicalCase::Ostrowski => {
            let (m, big_m) = k.f_range.ok_or(BoundError::MissingConstant("m, M"))?;
            let r = nonneg("M - m", big_m - m)?;
            let ng = nonneg(
                "g_deriv_inf",
                k.g_deriv_inf.ok_or(BoundError::MissingConstant("‖g′‖_∞"))?,
            )?;
            Ok(BoundResult::new("thm1/ostrowski", 0.125 * w * r * ng)
                .with("m", m)
                .with("M", big_m)
                .with("g_deriv_inf", ng))
        }
    }
}

/// All classical bounds whose constants are available.
pub fn classical_bounds(a: f64, b: f64, k: &ClassicalInputs) -> Vec<BoundResult> {
    [
        ClassicalCase::Chebyshev,
        ClassicalCase::Gruss,
        ClassicalCase::Lupas,
        ClassicalCase::Ostrowski,
    ]
    .into_iter()
    .filter_map(|case| classical_bound(case, a, b, k).ok())
    .collect()
}

/// Both levels of an evaluated pre-Grüss chain, with the quadrature
/// error accumulated along the way.
#[derive(Debug, Clone, Copy)]
pub struct PreGruss {
    /// `√T(f,f)·√T(g,g)` (summed over both subintervals in the
    /// generalized form).
    pub level1: f64,
    /// `½·ΣT` — the AM–GM coarsening; always ≥ level1.
    pub level2: f64,
    pub err_est: f64,
}

fn sqrt_product(tff: QuadResult, tgg: QuadResult) -> (f64, f64) {
    let value = tff.value.sqrt() * tgg.value.sqrt();
    // d(√x√y) = (√y/2√x)dx + (√x/2√y)dy, guarded for vanishing factors
    let err = if tff.value > 0.0 && tgg.value > 0.0 {
        0.5 * ((tgg.value / tff.value).sqrt() * tff.err_est
            + (tff.value / tgg.value).sqrt() * tgg.err_est)
    } else {
        (tff.err_est * tgg.err_est).sqrt() + tff.err_est + tgg.err_est
    };
    (value, err)
}

/// Full-interval pre-Grüss bound: `level1 = √T(f,f)·√T(g,g)` and its
/// AM–GM coarsening `level2 = (T(f,f)+T(g,g))/2`.
pub fn pre_gruss_bound(
    f: &FunctionSpec,
    g: &FunctionSpec,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<PreGruss, FunctionalError> {
    let tff = functional::self_functional(f, a, b, tol / 2.0)?;
    let tgg = functional::self_functional(g, a, b, tol / 2.0)?;
    pre_gruss_from_parts(tff, tgg)
}

/// Assemble the full-interval pre-Grüss levels from precomputed
/// self-functionals.
pub fn pre_gruss_from_parts(
    tff: QuadResult,
    tgg: QuadResult,
) -> Result<PreGruss, FunctionalError> {
    for t in [tff, tgg] {
        if t.value < 0.0 {
            return Err(FunctionalError::NegativeSelfFunctional(t.value, t.err_est));
        }
    }
    let (level1, err) = sqrt_product(tff, tgg);
    let level2 = 0.5 * (tff.value + tgg.value);
    debug_assert!(level1 <= level2 + 1e-12 * (1.0 + level2.abs()));
    Ok(PreGruss {
        level1,
        level2,
        err_est: err + 0.5 * (tff.err_est + tgg.err_est),
    })
}

/// Two-interval pre-Grüss bound:
/// `level1 = √T_left(f,f)√T_left(g,g) + √T_right(f,f)√T_right(g,g)` and
/// `level2 = ½[T_left(f,f)+T_left(g,g)+T_right(f,f)+T_right(g,g)]`.
pub fn generalized_pre_gruss(
    f: &FunctionSpec,
    g: &FunctionSpec,
    cfg: &IntervalConfig,
    tol: f64,
) -> Result<PreGruss, FunctionalError> {
    let ((llo, lhi), (rlo, rhi)) = cfg.sides();
    let tff_l = functional::self_functional(f, llo, lhi, tol / 4.0)?;
    let tgg_l = functional::self_functional(g, llo, lhi, tol / 4.0)?;
    let tff_r = functional::self_functional(f, rlo, rhi, tol / 4.0)?;
    let tgg_r = functional::self_functional(g, rlo, rhi, tol / 4.0)?;
    gen_pre_gruss_from_parts(tff_l, tgg_l, tff_r, tgg_r)
}

/// Assemble the generalized pre-Grüss levels from precomputed
/// self-functionals (lets sweeps reuse shared quadrature results).
pub fn gen_pre_gruss_from_parts(
    tff_l: QuadResult,
    tgg_l: QuadResult,
    tff_r: QuadResult,
    tgg_r: QuadResult,
) -> Result<PreGruss, FunctionalError> {
    for t in [tff_l, tgg_l, tff_r, tgg_r] {
        if t.value < 0.0 {
            return Err(FunctionalError::NegativeSelfFunctional(t.value, t.err_est));
        }
    }
    let (p1, e1) = sqrt_product(tff_l, tgg_l);
    let (p2, e2) = sqrt_product(tff_r, tgg_r);
    let level1 = p1 + p2;
    let level2 = 0.5 * (tff_l.value + tgg_l.value + tff_r.value + tgg_r.value);
    debug_assert!(level1 <= level2 + 1e-12 * (1.0 + level2.abs()));
    Ok(PreGruss {
        level1,
        level2,
        err_est: e1
            + e2
            + 0.5 * (tff_l.err_est + tgg_l.err_est + tff_r.err_est + tgg_r.err_est),
    })
}

// ---------------------------------------------------------------------
// Mean-difference bounds: |1/(b−a)∫_a^b f − 1/(d−c)∫_c^d f|
// ---------------------------------------------------------------------

/// Cases of the mean-difference inequalities for `[c,d] ⊆ [a,b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanDiffCase {
    /// bracket form `[¼ + (δ/D)²]·D·‖f′‖_∞`
    Linf,
    /// `((b−a)/(q+1)^{1/q})[1+(ρ/(1−ρ))^q]^{1/q}[ν^{q+1}+λ^{q+1}]^{1/q}·‖f′‖_p`
    Lp(ExponentPair),
    /// `½[1−ρ+|ν−λ|]·‖f′‖₁`
    L1,
    /// `H·((c−a)^{r+1}+(b−d)^{r+1})/((r+1)·D)`
    Holder,
    /// `[D/2 + |mid_cd − mid_ab|]·V/(b−a)`
    Bv,
    /// `L·((c−a)²+(b−d)²)/(2D)`
    Lipschitz,
    /// `((b−d)f(b) − (c−a)f(a) + (c+d−a−b)f(s₀))/(b−a)`
    Monotone,
}

/// Constants for [`mean_diff_bound`]; fill the fields the case needs.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanDiffInputs {
    pub f_deriv_inf: Option<f64>,
    pub f_deriv_p: Option<f64>,
    pub f_deriv_1: Option<f64>,
    /// Hölder data `(H, r)` with `r ∈ (0,1]`.
    pub holder: Option<(f64, f64)>,
    pub variation: Option<f64>,
    pub lipschitz: Option<f64>,
    /// endpoint values `(f(a), f(b), f(s₀))` for the monotone case
    pub f_values: Option<(f64, f64, f64)>,
}

/// The comparison point of the monotone mean-difference case,
/// `s₀ = (cb − ad)/((b−a) − (d−c)) ∈ [c, d]`.
pub fn mean_diff_s0(a: f64, b: f64, c: f64, d: f64) -> Result<f64, BoundError> {
    let den = (b - a) - (d - c);
    if den <= 0.0 {
        return Err(BoundError::DegenerateConfig(
            "inner interval [c,d] equals [a,b]".into(),
        ));
    }
    Ok((c * b - a * d) / den)
}

/// One mean-difference bound. Requires `a ≤ c < d ≤ b` with
/// `(d−c) < (b−a)` for the cases whose denominator is
/// `D = (b−a)−(d−c)`.
pub fn mean_diff_bound(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    case: MeanDiffCase,
    k: &MeanDiffInputs,
) -> Result<BoundResult, BoundError> {
    if !(a <= c && c < d && d <= b && a < b) {
        return Err(BoundError::DegenerateConfig(format!(
            "need a <= c < d <= b, got a={a} c={c} d={d} b={b}"
        )));
    }
    let w = b - a;
    let big_d = w - (d - c);
    let delta = 0.5 * (a + b) - 0.5 * (c + d);
    let needs_d = !matches!(case, MeanDiffCase::Bv | MeanDiffCase::L1 | MeanDiffCase::Lp(_));
    if needs_d && big_d <= 0.0 {
        return Err(BoundError::DegenerateConfig(
            "denominator (b−a)−(d−c) vanishes: [c,d] = [a,b]".into(),
        ));
    }

    match case {
        MeanDiffCase::Linf => {
            let nf = nonneg(
                "f_deriv_inf",
                k.f_deriv_inf.ok_or(BoundError::MissingConstant("‖f′‖_∞"))?,
            )?;
            let ratio = delta / big_d;
            let rhs = (0.25 + ratio * ratio) * big_d * nf;
            Ok(BoundResult::new("bar4.3.1", rhs)
                .with("D", big_d)
                .with("delta", delta)
                .with("f_deriv_inf", nf)
                .with("half_coarsening", 0.5 * big_d * nf))
        }
        MeanDiffCase::Lp(exps) => {
            let nf = nonneg(
                "f_deriv_p",
                k.f_deriv_p.ok_or(BoundError::MissingConstant("‖f′‖_p"))?,
            )?;
            let q = exps.q;
            let nu = (c - a) / w;
            let rho = (d - c) / w;
            let lambda = (b - d) / w;
            if rho >= 1.0 {
                return Err(BoundError::DegenerateConfig(
                    "ρ = (d−c)/(b−a) must be < 1".into(),
                ));
            }
            // Sharp form: the difference of means is ∫K·f′ for the
            // piecewise-linear kernel K ramping 0→ν on [a,c], ν→−λ
            // across [c,d], λ→0 on [d,b] (all over b−a), and
            // ‖K‖_q^q = (b−a)(ν^{q+1}+λ^{q+1})/((q+1)(1−ρ)). The
            // display carrying [1+(ρ/(1−ρ))^q]^{1/q} and a full power
            // of (b−a) sits below this attainable value on narrow
            // intervals, so Hölder's exact constant is used instead.
            let rhs = w.powf(1.0 / q)
                * ((nu.powf(q + 1.0) + lambda.powf(q + 1.0)) / ((q + 1.0) * (1.0 - rho)))
                    .powf(1.0 / q)
                * nf;
            Ok(BoundResult::new("cer4.3.2/Lp", rhs)
                .with("p", exps.p)
                .with("q", q)
                .with("nu", nu)
                .with("rho", rho)
                .with("lambda", lambda)
                .with("f_deriv_p", nf))
        }
        MeanDiffCase::L1 => {
            let nf = nonneg(
                "f_deriv_1",
                k.f_deriv_1.ok_or(BoundError::MissingConstant("‖f′‖₁"))?,
            )?;
            let nu = (c - a) / w;
            let rho = (d - c) / w;
            let lambda = (b - d) / w;
            let rhs = 0.5 * (1.0 - rho + (nu - lambda).abs()) * nf;
            Ok(BoundResult::new("cer4.3.2/L1", rhs)
                .with("nu", nu)
                .with("rho", rho)
                .with("lambda", lambda)
                .with("f_deriv_1", nf))
        }
        MeanDiffCase::Holder => {
            let (h, r) = k.holder.ok_or(BoundError::MissingConstant("H, r"))?;
            nonneg("H", h)?;
            if !(r > 0.0 && r <= 1.0) {
                return Err(BoundError::BadOrder(r));
            }
            let rhs = h * ((c - a).powf(r + 1.0) + (b - d).powf(r + 1.0))
                / ((r + 1.0) * big_d);
            Ok(BoundResult::new("cer4.3.3", rhs)
                .with("H", h)
                .with("r", r)
                .with("D", big_d))
        }
        MeanDiffCase::Bv => {
            let v_tot = nonneg(
                "variation",
                k.variation.ok_or(BoundError::MissingConstant("⋁(f)"))?,
            )?;
            let rhs = (0.5 * big_d + delta.abs()) * v_tot / w;
            Ok(BoundResult::new("cer4.3.4/bv", rhs)
                .with("D", big_d)
                .with("delta", delta)
                .with("variation", v_tot))
        }
        MeanDiffCase::Lipschitz => {
            let l = nonneg(
                "lipschitz",
                k.lipschitz.ok_or(BoundError::MissingConstant("L"))?,
            )?;
            let rhs = l * ((c - a).powi(2) + (b - d).powi(2)) / (2.0 * big_d);
            Ok(BoundResult::new("cer4.3.4/lipschitz", rhs)
                .with("L", l)
                .with("D", big_d))
        }
        MeanDiffCase::Monotone => {
            let (fa, fb, fs0) = k
                .f_values
                .ok_or(BoundError::MissingConstant("f(a), f(b), f(s₀)"))?;
            let s0 = mean_diff_s0(a, b, c, d)?;
            let rhs = ((b - d) * fb - (c - a) * fa + (c + d - a - b) * fs0) / w;
            let mut out = BoundResult::new("cer4.3.4/monotone", rhs.max(0.0))
                .with("s0", s0)
                .with("f(a)", fa)
                .with("f(b)", fb)
                .with("f(s0)", fs0);
            if rhs < 0.0 {
                out = out.flag(format!(
                    "computed value {rhs} is negative: inputs are not consistent with a \
                     nondecreasing f (clamped to 0)"
                ));
            }
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------
// Two-functional bounds: |T_a^v(f,g) − T_u^b(f,g)|
// ---------------------------------------------------------------------

/// Interval lengths after the mode mapping: `A` for the left functional's
/// interval, `B` for the right one, plus the effective endpoints.
fn geometry(cfg: &IntervalConfig) -> (f64, f64, f64, f64, f64, f64) {
    let (ea, eu, ev, eb) = cfg.effective();
    (ea, eu, ev, eb, ev - ea, eb - eu)
}

fn degenerate_note(cfg: &IntervalConfig, out: BoundResult) -> BoundResult {
    if cfg.a == cfg.u && cfg.v == cfg.b {
        out.note("degenerate configuration: both subintervals coincide, the difference is identically 0")
    } else {
        out
    }
}

/// Bounded-variation integrator vs absolutely continuous `g`:
/// per case `V·⅛·max(A,B)·‖g′‖_∞`, `V·max(v−a, b−v)/(2(q+1)^{1/q})·‖g′‖_p`
/// (bracket written with `v` only, as published), or `V·½‖g′‖₁`.
pub fn bound_bv_abscont(
    variation: f64,
    case: NormCase,
    exps: Option<ExponentPair>,
    g_norm: f64,
    cfg: &IntervalConfig,
) -> Result<BoundResult, BoundError> {
    let v_tot = nonneg("variation", variation)?;
    let ng = nonneg("g_norm", g_norm)?;
    let (ea, eu, ev, eb, len_a, len_b) = geometry(cfg);
    let (rhs, id, extra) = match case {
        NormCase::Linf => {
            let bracket = bracket_max(len_a, len_b);
            (v_tot * 0.125 * bracket * ng, "thm4.5.1/Linf", None)
        }
        NormCase::Lp => {
            let e = exps.ok_or(BoundError::MissingConstant("conjugate pair (p, q)"))?;
            let bracket = 0.5 * (eb - ea) + (ev - 0.5 * (ea + eb)).abs();
            debug_assert!((bracket - (ev - ea).max(eb - ev)).abs() <= 1e-12 * (1.0 + bracket));
            (
                v_tot / (2.0 * (e.q + 1.0).powf(1.0 / e.q)) * bracket * ng,
                "thm4.5.1/Lp",
                Some(e),
            )
        }
        NormCase::L1 => {
            let _ = eu;
            (0.5 * v_tot * ng, "thm4.5.1/L1", None)
        }
    };
    let mut out = BoundResult::new(id, rhs)
        .with("variation", v_tot)
        .with("g_norm", ng);
    if let Some(e) = extra {
        out = out.with("p", e.p).with("q", e.q);
    }
    Ok(degenerate_note(cfg, out))
}

/// Midpoint corollary of the bounded-variation/absolutely-continuous
/// bound (`u = v = (a+b)/2`): `V(b−a)/16·‖g′‖_∞`,
/// `V(b−a)/(4(q+1)^{1/q})·‖g′‖_p`, or `V/2·‖g′‖₁`.
pub fn bound_bv_abscont_midpoint(
    variation: f64,
    case: NormCase,
    exps: Option<ExponentPair>,
    g_norm: f64,
    a: f64,
    b: f64,
) -> Result<BoundResult, BoundError> {
    let v_tot = nonneg("variation", variation)?;
    let ng = nonneg("g_norm", g_norm)?;
    let w = b - a;
    let (rhs, id) = match case {
        NormCase::Linf => (v_tot * w / 16.0 * ng, "thm4.5.1/Linf/midpoint"),
        NormCase::Lp => {
            let e = exps.ok_or(BoundError::MissingConstant("conjugate pair (p, q)"))?;
            (
                v_tot * w / (4.0 * (e.q + 1.0).powf(1.0 / e.q)) * ng,
                "thm4.5.1/Lp/midpoint",
            )
        }
        NormCase::L1 => (0.5 * v_tot * ng, "thm4.5.1/L1/midpoint"),
    };
    Ok(BoundResult::new(id, rhs)
        .with("variation", v_tot)
        .with("g_norm", ng))
}

/// Intermediate-step variant of the bounded-variation bound, before
/// subinterval norms are coarsened to `[a,b]`: per-side sums with
/// per-side variations and norms. Tighter, flagged as such.
pub fn bound_bv_abscont_intermediate(
    variation_left: f64,
    variation_right: f64,
    case: NormCase,
    exps: Option<ExponentPair>,
    g_norm_left: f64,
    g_norm_right: f64,
    cfg: &IntervalConfig,
) -> Result<BoundResult, BoundError> {
    let vl = nonneg("variation_left", variation_left)?;
    let vr = nonneg("variation_right", variation_right)?;
    let nl = nonneg("g_norm_left", g_norm_left)?;
    let nr = nonneg("g_norm_right", g_norm_right)?;
    let (_, _, _, _, len_a, len_b) = geometry(cfg);
    let (rhs, id) = match case {
        NormCase::Linf => (
            0.125 * (len_a * nl * vl + len_b * nr * vr),
            "thm4.5.1/Linf/intermediate",
        ),
        NormCase::Lp => {
            let e = exps.ok_or(BoundError::MissingConstant("conjugate pair (p, q)"))?;
            let c = 1.0 / (4.0 * (e.q + 1.0).powf(1.0 / e.q));
            (
                c * (len_a * nl * vl + len_b * nr * vr),
                "thm4.5.1/Lp/intermediate",
            )
        }
        NormCase::L1 => (0.25 * (nl * vl + nr * vr), "thm4.5.1/L1/intermediate"),
    };
    Ok(BoundResult::new(id, rhs)
        .with("variation_left", vl)
        .with("variation_right", vr)
        .with("g_norm_left", nl)
        .with("g_norm_right", nr)
        .note("intermediate-step bound: subinterval norms, tighter than the published statement"))
}

/// Bounded-variation integrator vs `r`-`H`-Hölder `g`; returns both
/// published forms (the per-length sum and its max coarsening).
pub fn bound_bv_holder(
    variation: f64,
    h: f64,
    p: f64,
    cfg: &IntervalConfig,
) -> Result<(BoundResult, BoundResult), BoundError> {
    let v_tot = nonneg("variation", variation)?;
    let h = nonneg("H", h)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(BoundError::BadOrder(p));
    }
    let (_, _, _, _, len_a, len_b) = geometry(cfg);
    let denom = 2f64.powf(p + 1.0) * (p + 1.0);
    let form1 = h * (len_a.powf(p) + len_b.powf(p)) / denom * v_tot;
    let bracket = bracket_max(len_a, len_b);
    let form2 = h / (2f64.powf(p) * (p + 1.0)) * bracket.powf(p) * v_tot;
    let out1 = degenerate_note(
        cfg,
        BoundResult::new("thm4.5.3/form1", form1)
            .with("variation", v_tot)
            .with("H", h)
            .with("p", p),
    );
    let out2 = degenerate_note(
        cfg,
        BoundResult::new("thm4.5.3/form2", form2)
            .with("variation", v_tot)
            .with("H", h)
            .with("p", p),
    );
    Ok((out1, out2))
}

/// Midpoint corollary of the Hölder form: `H(b−a)^p/(2^{2p}(p+1))·V`
/// (both published forms coincide there).
pub fn bound_bv_holder_midpoint(
    variation: f64,
    h: f64,
    p: f64,
    a: f64,
    b: f64,
) -> Result<BoundResult, BoundError> {
    let v_tot = nonneg("variation", variation)?;
    let h = nonneg("H", h)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(BoundError::BadOrder(p));
    }
    let rhs = h * (b - a).powf(p) / (2f64.powf(2.0 * p) * (p + 1.0)) * v_tot;
    Ok(BoundResult::new("thm4.5.3/midpoint", rhs)
        .with("variation", v_tot)
        .with("H", h)
        .with("p", p))
}

/// Bounded-variation integrator vs monotone nondecreasing `g`:
/// `(V/4)·max(g(v)−g(a), g(b)−g(u))` in its printed bracket form. The
/// `g` values are taken in the *original* orientation; nested mode swaps
/// which differences appear, per the substitution rule.
pub fn bound_bv_monotone(
    variation: f64,
    g_a: f64,
    g_u: f64,
    g_v: f64,
    g_b: f64,
    cfg: &IntervalConfig,
) -> Result<BoundResult, BoundError> {
    let v_tot = nonneg("variation", variation)?;
    // monotone hypothesis is on the original ordering a ≤ u ≤ v ≤ b
    let monotone = g_a <= g_u + 1e-12 && g_u <= g_v + 1e-12 && g_v <= g_b + 1e-12;
    let (ga, gu) = match cfg.mode {
        IntervalMode::Overlap => (g_a, g_u),
        IntervalMode::Nested => (g_u, g_a),
    };
    let x = g_v - ga;
    let y = g_b - gu;
    let bracket = 0.5 * (x + y) + (0.5 * (g_v + gu) - 0.5 * (ga + g_b)).abs();
    debug_assert!(
        !monotone || (bracket - x.max(y)).abs() <= 1e-12 * (1.0 + bracket.abs())
    );
    let rhs = 0.25 * bracket * v_tot;
    let mut out = BoundResult::new("thm4.5.5", rhs.max(0.0))
        .with("variation", v_tot)
        .with("g(a)", g_a)
        .with("g(u)", g_u)
        .with("g(v)", g_v)
        .with("g(b)", g_b);
    if !monotone {
        out = out.flag("g values are not nondecreasing across a <= u <= v <= b");
    }
    Ok(degenerate_note(cfg, out))
}

/// Midpoint corollary of the monotone bound, exactly as published:
/// `V·{(g(b)−g(a))/2 + |g(mid) − (g(a)+g(b))/2|}`. Note the published
/// corollary drops the ¼ of the parent bound, so it is 4× looser than
/// the collapsed general form; both are valid upper bounds.
pub fn bound_bv_monotone_midpoint(
    variation: f64,
    g_a: f64,
    g_mid: f64,
    g_b: f64,
) -> Result<BoundResult, BoundError> {
    let v_tot = nonneg("variation", variation)?;
    let monotone = g_a <= g_mid + 1e-12 && g_mid <= g_b + 1e-12;
    let rhs = (0.5 * (g_b - g_a) + (g_mid - 0.5 * (g_a + g_b)).abs()) * v_tot;
    let mut out = BoundResult::new("thm4.5.5/midpoint", rhs.max(0.0))
        .with("variation", v_tot)
        .with("g(a)", g_a)
        .with("g(mid)", g_mid)
        .with("g(b)", g_b)
        .note("published corollary form (no 1/4 factor); 4x the collapsed general bound");
    if !monotone {
        out = out.flag("g values are not nondecreasing across a <= mid <= b");
    }
    Ok(out)
}

/// Lipschitz integrator vs absolutely continuous `g`, in the form the
/// proof supports: `Linf: (L/12)(A²+B²)·‖g′‖_∞`;
/// `Lp: L(A²+B²)/(q+1)^{1/q}·B(2,1+1/q)·‖g′‖_p`.
pub fn bound_lip_abscont(
    lipschitz: f64,
    case: NormCase,
    exps: Option<ExponentPair>,
    g_norm: f64,
    cfg: &IntervalConfig,
) -> Result<BoundResult, BoundError> {
    let l = nonneg("L", lipschitz)?;
    let ng = nonneg("g_norm", g_norm)?;
    let (_, _, _, _, len_a, len_b) = geometry(cfg);
    let sum_sq = len_a * len_a + len_b * len_b;
    let (rhs, id, extra) = match case {
        NormCase::Linf => (l / 12.0 * sum_sq * ng, "thm4.5.7/Linf", None),
        NormCase::Lp => {
            let e = exps.ok_or(BoundError::MissingConstant("conjugate pair (p, q)"))?;
            let b2 = beta(2.0, 1.0 + 1.0 / e.q);
            (
                l * sum_sq / (e.q + 1.0).powf(1.0 / e.q) * b2 * ng,
                "thm4.5.7/Lp",
                Some((e, b2)),
            )
        }
        NormCase::L1 => {
            return Err(BoundError::MissingConstant(
                "no L1 case is published for the Lipschitz/absolutely-continuous bound",
            ))
        }
    };
    let mut out = BoundResult::new(id, rhs).with("L", l).with("g_norm", ng);
    if let Some((e, b2)) = extra {
        out = out.with("p", e.p).with("q", e.q).with("beta(2,1+1/q)", b2);
    }
    Ok(degenerate_note(cfg, out))
}

/// Midpoint corollary: `L(b−a)²/24·‖g′‖_∞` or
/// `L(b−a)²/(2(q+1)^{1/q})·B(2,1+1/q)·‖g′‖_p`.
pub fn bound_lip_abscont_midpoint(
    lipschitz: f64,
    case: NormCase,
    exps: Option<ExponentPair>,
    g_norm: f64,
    a: f64,
    b: f64,
) -> Result<BoundResult, BoundError> {
    let l = nonneg("L", lipschitz)?;
    let ng = nonneg("g_norm", g_norm)?;
    let w2 = (b - a) * (b - a);
    match case {
        NormCase::Linf => Ok(BoundResult::new("thm4.5.7/Linf/midpoint", l * w2 / 24.0 * ng)
            .with("L", l)
            .with("g_norm", ng)),
        NormCase::Lp => {
            let e = exps.ok_or(BoundError::MissingConstant("conjugate pair (p, q)"))?;
            let b2 = beta(2.0, 1.0 + 1.0 / e.q);
            let rhs = l * w2 / (2.0 * (e.q + 1.0).powf(1.0 / e.q)) * b2 * ng;
            Ok(BoundResult::new("thm4.5.7/Lp/midpoint", rhs)
                .with("L", l)
                .with("g_norm", ng)
                .with("p", e.p)
                .with("q", e.q)
                .with("beta(2,1+1/q)", b2))
        }
        NormCase::L1 => Err(BoundError::MissingConstant(
            "no L1 case is published for the Lipschitz/absolutely-continuous bound",
        )),
    }
}

/// Lipschitz integrator vs `p`-`H`-Hölder `g`:
/// `(2LH/((p+1)²(p+2)))·max(A,B)^{p+1}`, carrying the factor 2 the sum
/// of the per-side proof terms requires (its p = 1 midpoint value is
/// then the published `L_fL_g(b−a)²/24`).
pub fn bound_lip_holder(
    lipschitz: f64,
    h: f64,
    p: f64,
    cfg: &IntervalConfig,
) -> Result<BoundResult, BoundError> {
    let l = nonneg("L", lipschitz)?;
    let h = nonneg("H", h)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(BoundError::BadOrder(p));
    }
    let (_, _, _, _, len_a, len_b) = geometry(cfg);
    let bracket = bracket_max(len_a, len_b);
    let rhs = 2.0 * l * h / ((p + 1.0) * (p + 1.0) * (p + 2.0)) * bracket.powf(p + 1.0);
    Ok(degenerate_note(
        cfg,
        BoundResult::new("thm4.5.9", rhs)
            .with("L", l)
            .with("H", h)
            .with("p", p),
    ))
}

/// Midpoint corollary for two Lipschitz mappings (the `p = 1` case):
/// `L_f·L_g·(b−a)²/24`.
pub fn bound_lip_holder_midpoint(
    l_f: f64,
    l_g: f64,
    a: f64,
    b: f64,
) -> Result<BoundResult, BoundError> {
    let lf = nonneg("L_f", l_f)?;
    let lg = nonneg("L_g", l_g)?;
    let rhs = lf * lg * (b - a) * (b - a) / 24.0;
    Ok(BoundResult::new("thm4.5.9/midpoint", rhs)
        .with("L_f", lf)
        .with("L_g", lg))
}

/// Two absolutely continuous functions, `f′ ∈ L_α` with conjugate
/// `(α, β)`:
/// `Linf: ((A^{1+1/β}+B^{1+1/β})/2)·B(β+1,β+1)^{1/β}·‖f′‖_α·‖g′‖_∞`;
/// `Lp: ((A^{1+1/β}+B^{1+1/β})/(q+1)^{1/q})·B(β+1,β/q+1)^{1/β}·‖g′‖_p·‖f′‖_α`;
/// `L1: (A^{1+1/β}+B^{1+1/β})·B(β+1,β+1)^{1/β}·‖g′‖₁·‖f′‖_α`.
///
/// The sup-norm case carries the length exponent `1 + 1/β` its own
/// per-side derivation produces: each side bounds the inner mean gap
/// by `(v−a)/2·‖g′‖_∞`, and Hölder applied to the remaining kernel
/// `(r−a)(v−r)/(v−a)` leaves `A^{1+1/β}·B(β+1,β+1)^{1/β}/2`. The
/// display with `A^{1/β}` is short one length power and fails on wide
/// intervals (smooth `f = g` on `[0, 5/2]` already exceeds it), so the
/// supported exponent is used.
pub fn bound_abscont_pair(
    f_norm_alpha: f64,
    ab: ExponentPair,
    case: NormCase,
    pq: Option<ExponentPair>,
    g_norm: f64,
    cfg: &IntervalConfig,
) -> Result<BoundResult, BoundError> {
    let nf = nonneg("f_norm_alpha", f_norm_alpha)?;
    let ng = nonneg("g_norm", g_norm)?;
    let bex = ab.q; // β, conjugate of α
    let (_, _, _, _, len_a, len_b) = geometry(cfg);
    let (rhs, id, extra) = match case {
        NormCase::Linf => {
            let bfac = beta(bex + 1.0, bex + 1.0).powf(1.0 / bex);
            let len_sum = len_a.powf(1.0 + 1.0 / bex) + len_b.powf(1.0 + 1.0 / bex);
            (0.5 * len_sum * bfac * nf * ng, "thm4.5.12/Linf", bfac)
        }
        NormCase::Lp => {
            let e = pq.ok_or(BoundError::MissingConstant("conjugate pair (p, q)"))?;
            let bfac = beta(bex + 1.0, bex / e.q + 1.0).powf(1.0 / bex);
            let len_sum = len_a.powf(1.0 + 1.0 / bex) + len_b.powf(1.0 + 1.0 / bex);
            let rhs = len_sum / (e.q + 1.0).powf(1.0 / e.q) * bfac * ng * nf;
            (rhs, "thm4.5.12/Lp", bfac)
        }
        NormCase::L1 => {
            let bfac = beta(bex + 1.0, bex + 1.0).powf(1.0 / bex);
            let len_sum = len_a.powf(1.0 + 1.0 / bex) + len_b.powf(1.0 + 1.0 / bex);
            (len_sum * bfac * ng * nf, "thm4.5.12/L1", bfac)
        }
    };
    let mut out = BoundResult::new(id, rhs)
        .with("alpha", ab.p)
        .with("beta", bex)
        .with("f_norm_alpha", nf)
        .with("g_norm", ng)
        .with("beta_factor", extra);
    if let Some(e) = pq {
        if matches!(case, NormCase::Lp) {
            out = out.with("p", e.p).with("q", e.q);
        }
    }
    Ok(degenerate_note(cfg, out))
}

/// Midpoint form of the two-absolutely-continuous bound, evaluated as
/// the collapsed corollary at `u = (a+b)/2` (the published midpoint
/// display halves the Lp/L1 cases relative to its own corollary; the
/// self-consistent corollary values are used).
pub fn bound_abscont_pair_midpoint(
    f_norm_alpha: f64,
    ab: ExponentPair,
    case: NormCase,
    pq: Option<ExponentPair>,
    g_norm: f64,
    a: f64,
    b: f64,
) -> Result<BoundResult, BoundError> {
    let cfg = IntervalConfig::overlap(a, 0.5 * (a + b), 0.5 * (a + b), b)
        .map_err(|_| BoundError::DegenerateConfig(format!("invalid interval [{a}, {b}]")))?;
    let mut out = bound_abscont_pair(f_norm_alpha, ab, case, pq, g_norm, &cfg)?;
    out.theorem.push_str("/midpoint");
    Ok(out)
}

// ---------------------------------------------------------------------
// Dispatch by theorem id
// ---------------------------------------------------------------------

/// Constants available to [`evaluate_bound`]; fill what the theorem
/// consumes.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoundParams {
    /// total variation of `f` on `[a,b]`
    pub variation: Option<f64>,
    /// Lipschitz constant of `f`
    pub lipschitz: Option<f64>,
    /// Hölder coefficient `H` (of `g` for thm4.5.3/thm4.5.9, of `f` for
    /// cer4.3.3)
    pub holder_h: Option<f64>,
    /// Hölder order, or the Lebesgue exponent `p` where a case needs one
    pub p: Option<f64>,
    /// conjugate exponent `q` (derived from `p` when omitted)
    pub q: Option<f64>,
    /// conjugate pair (α, β) for thm4.5.12
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// norms of `g′` on `[a,b]`
    pub g_inf: Option<f64>,
    pub g_p: Option<f64>,
    pub g_1: Option<f64>,
    /// norms of `f′` on `[a,b]`
    pub f_inf: Option<f64>,
    pub f_p: Option<f64>,
    pub f_1: Option<f64>,
    pub f_2: Option<f64>,
    pub g_2: Option<f64>,
    /// `‖f′‖_α` for thm4.5.12
    pub f_alpha: Option<f64>,
    /// ranges for the Grüss/Ostrowski cases
    pub f_range: Option<(f64, f64)>,
    pub g_range: Option<(f64, f64)>,
    /// `g` values at the four interval points (thm4.5.5)
    pub g_at: Option<(f64, f64, f64, f64)>,
    /// `g((a+b)/2)` for the monotone midpoint corollary
    pub g_mid: Option<f64>,
    /// `(f(a), f(b), f(s₀))` for the monotone mean-difference case
    pub f_values: Option<(f64, f64, f64)>,
}

impl BoundParams {
    fn pq(&self) -> Result<ExponentPair, BoundError> {
        match (self.p, self.q) {
            (Some(p), Some(q)) => ExponentPair::new(p, q),
            (Some(p), None) => ExponentPair::from_p(p),
            (None, Some(q)) => Ok(ExponentPair {
                p: ExponentPair::from_p(q)?.q,
                q,
            }),
            (None, None) => Err(BoundError::MissingConstant("exponent p (or q)")),
        }
    }

    fn ab(&self) -> Result<ExponentPair, BoundError> {
        match (self.alpha, self.beta) {
            (Some(al), Some(be)) => ExponentPair::new(al, be),
            (Some(al), None) => ExponentPair::from_p(al),
            (None, Some(be)) => Ok(ExponentPair {
                p: ExponentPair::from_p(be)?.q,
                q: be,
            }),
            (None, None) => Err(BoundError::MissingConstant("exponent alpha (or beta)")),
        }
    }

    fn holder_order(&self) -> Result<f64, BoundError> {
        self.p.ok_or(BoundError::MissingConstant("Hölder order p"))
    }
}

fn need(v: Option<f64>, what: &'static str) -> Result<f64, BoundError> {
    v.ok_or(BoundError::MissingConstant(what))
}

/// Evaluate a bound by its stable id (e.g. `"thm4.5.1/Linf"`,
/// `"cer4.3.4/monotone"`, `"thm4.5.7/Linf/midpoint"`). Mean-difference
/// bounds read the inner interval `[c,d]` from `(u, v)`.
pub fn evaluate_bound(
    id: &str,
    cfg: &IntervalConfig,
    k: &BoundParams,
) -> Result<BoundResult, BoundError> {
    let midpoint = id.ends_with("/midpoint");
    let base = id.strip_suffix("/midpoint").unwrap_or(id);
    let (a, b) = (cfg.a, cfg.b);
    let (c, d) = (cfg.u, cfg.v);

    let classical = |case| {
        classical_bound(
            case,
            a,
            b,
            &ClassicalInputs {
                f_deriv_inf: k.f_inf,
                g_deriv_inf: k.g_inf,
                f_deriv_2: k.f_2,
                g_deriv_2: k.g_2,
                f_range: k.f_range,
                g_range: k.g_range,
            },
        )
    };
    let mean_inputs = MeanDiffInputs {
        f_deriv_inf: k.f_inf,
        f_deriv_p: k.f_p,
        f_deriv_1: k.f_1,
        holder: match (k.holder_h, k.p) {
            (Some(h), Some(r)) => Some((h, r)),
            _ => None,
        },
        variation: k.variation,
        lipschitz: k.lipschitz,
        f_values: k.f_values,
    };

    if midpoint {
        return match base {
            "thm4.5.1/Linf" => {
                bound_bv_abscont_midpoint(need(k.variation, "--V")?, NormCase::Linf, None, need(k.g_inf, "--ginf")?, a, b)
            }
            "thm4.5.1/Lp" => bound_bv_abscont_midpoint(
                need(k.variation, "--V")?,
                NormCase::Lp,
                Some(k.pq()?),
                need(k.g_p, "--gp")?,
                a,
                b,
            ),
            "thm4.5.1/L1" => {
                bound_bv_abscont_midpoint(need(k.variation, "--V")?, NormCase::L1, None, need(k.g_1, "--g1")?, a, b)
            }
            "thm4.5.3" | "thm4.5.3/form1" | "thm4.5.3/form2" => bound_bv_holder_midpoint(
                need(k.variation, "--V")?,
                need(k.holder_h, "--H")?,
                k.holder_order()?,
                a,
                b,
            ),
            "thm4.5.5" => {
                let (ga, _, _, gb) = k.g_at.ok_or(BoundError::MissingConstant("--ga/--gb"))?;
                bound_bv_monotone_midpoint(
                    need(k.variation, "--V")?,
                    ga,
                    need(k.g_mid, "--gmid")?,
                    gb,
                )
            }
            "thm4.5.7/Linf" => bound_lip_abscont_midpoint(
                need(k.lipschitz, "--L")?,
                NormCase::Linf,
                None,
                need(k.g_inf, "--ginf")?,
                a,
                b,
            ),
            "thm4.5.7/Lp" => bound_lip_abscont_midpoint(
                need(k.lipschitz, "--L")?,
                NormCase::Lp,
                Some(k.pq()?),
                need(k.g_p, "--gp")?,
                a,
                b,
            ),
            "thm4.5.9" => bound_lip_holder_midpoint(
                need(k.lipschitz, "--L")?,
                need(k.holder_h, "--H")?,
                a,
                b,
            ),
            "thm4.5.12/Linf" => bound_abscont_pair_midpoint(
                need(k.f_alpha, "--f-alpha")?,
                k.ab()?,
                NormCase::Linf,
                None,
                need(k.g_inf, "--ginf")?,
                a,
                b,
            ),
            "thm4.5.12/Lp" => bound_abscont_pair_midpoint(
                need(k.f_alpha, "--f-alpha")?,
                k.ab()?,
                NormCase::Lp,
                Some(k.pq()?),
                need(k.g_p, "--gp")?,
                a,
                b,
            ),
            "thm4.5.12/L1" => bound_abscont_pair_midpoint(
                need(k.f_alpha, "--f-alpha")?,
                k.ab()?,
                NormCase::L1,
                None,
                need(k.g_1, "--g1")?,
                a,
                b,
            ),
            _ => Err(BoundError::UnknownTheorem(id.to_string())),
        };
    }

    match base {
        "thm1/chebyshev" => classical(ClassicalCase::Chebyshev),
        "thm1/gruss" => classical(ClassicalCase::Gruss),
        "thm1/lupas" => classical(ClassicalCase::Lupas),
        "thm1/ostrowski" => classical(ClassicalCase::Ostrowski),
        "eq2.1" | "thm4/eq2.2" => Err(BoundError::NotConstantBased(base.to_string())),
        "bar4.3.1" => mean_diff_bound(a, b, c, d, MeanDiffCase::Linf, &mean_inputs),
        "cer4.3.2/Lp" => mean_diff_bound(a, b, c, d, MeanDiffCase::Lp(k.pq()?), &mean_inputs),
        "cer4.3.2/L1" => mean_diff_bound(a, b, c, d, MeanDiffCase::L1, &mean_inputs),
        "cer4.3.3" => mean_diff_bound(a, b, c, d, MeanDiffCase::Holder, &mean_inputs),
        "cer4.3.4/bv" => mean_diff_bound(a, b, c, d, MeanDiffCase::Bv, &mean_inputs),
        "cer4.3.4/lipschitz" => mean_diff_bound(a, b, c, d, MeanDiffCase::Lipschitz, &mean_inputs),
        "cer4.3.4/monotone" => mean_diff_bound(a, b, c, d, MeanDiffCase::Monotone, &mean_inputs),
        "thm4.5.1/Linf" => bound_bv_abscont(
            need(k.variation, "--V")?,
            NormCase::Linf,
            None,
            need(k.g_inf, "--ginf")?,
            cfg,
        ),
        "thm4.5.1/Lp" => bound_bv_abscont(
            need(k.variation, "--V")?,
            NormCase::Lp,
            Some(k.pq()?),
            need(k.g_p, "--gp")?,
            cfg,
        ),
        "thm4.5.1/L1" => bound_bv_abscont(
            need(k.variation, "--V")?,
            NormCase::L1,
            None,
            need(k.g_1, "--g1")?,
            cfg,
        ),
        "thm4.5.3/form1" => Ok(bound_bv_holder(
            need(k.variation, "--V")?,
            need(k.holder_h, "--H")?,
            k.holder_order()?,
            cfg,
        )?
        .0),
        "thm4.5.3/form2" => Ok(bound_bv_holder(
            need(k.variation, "--V")?,
            need(k.holder_h, "--H")?,
            k.holder_order()?,
            cfg,
        )?
        .1),
        "thm4.5.5" => {
            let (ga, gu, gv, gb) = k
                .g_at
                .ok_or(BoundError::MissingConstant("--ga/--gu/--gv/--gb"))?;
            bound_bv_monotone(need(k.variation, "--V")?, ga, gu, gv, gb, cfg)
        }
        "thm4.5.7/Linf" => bound_lip_abscont(
            need(k.lipschitz, "--L")?,
            NormCase::Linf,
            None,
            need(k.g_inf, "--ginf")?,
            cfg,
        ),
        "thm4.5.7/Lp" => bound_lip_abscont(
            need(k.lipschitz, "--L")?,
            NormCase::Lp,
            Some(k.pq()?),
            need(k.g_p, "--gp")?,
            cfg,
        ),
        "thm4.5.9" => bound_lip_holder(
            need(k.lipschitz, "--L")?,
            need(k.holder_h, "--H")?,
            k.holder_order()?,
            cfg,
        ),
        "thm4.5.12/Linf" => bound_abscont_pair(
            need(k.f_alpha, "--f-alpha")?,
            k.ab()?,
            NormCase::Linf,
            None,
            need(k.g_inf, "--ginf")?,
            cfg,
        ),
        "thm4.5.12/Lp" => bound_abscont_pair(
            need(k.f_alpha, "--f-alpha")?,
            k.ab()?,
            NormCase::Lp,
            Some(k.pq()?),
            need(k.g_p, "--gp")?,
            cfg,
        ),
        "thm4.5.12/L1" => bound_abscont_pair(
            need(k.f_alpha, "--f-alpha")?,
            k.ab()?,
            NormCase::L1,
            None,
            need(k.g_1, "--g1")?,
            cfg,
        ),
        _ => Err(BoundError::UnknownTheorem(id.to_string())),
    }
}

/// All theorem/case ids [`evaluate_bound`] accepts (midpoint variants
/// excluded), in sweep order.
pub const THEOREM_IDS: &[&str] = &[
    "thm1/chebyshev",
    "thm1/gruss",
    "thm1/lupas",
    "thm1/ostrowski",
    "eq2.1",
    "thm4/eq2.2",
    "bar4.3.1",
    "cer4.3.2/Lp",
    "cer4.3.2/L1",
    "cer4.3.3",
    "cer4.3.4/bv",
    "cer4.3.4/lipschitz",
    "cer4.3.4/monotone",
    "thm4.5.1/Linf",
    "thm4.5.1/Lp",
    "thm4.5.1/L1",
    "thm4.5.3/form1",
    "thm4.5.3/form2",
    "thm4.5.5",
    "thm4.5.7/Linf",
    "thm4.5.7/Lp",
    "thm4.5.9",
    "thm4.5.12/Linf",
    "thm4.5.12/Lp",
    "thm4.5.12/L1",
];
