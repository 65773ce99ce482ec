//! Randomized empirical verification: generate corpora of function pairs
//! with declared class constants, sweep interval configurations, compare
//! each computed left-hand side against every applicable closed-form
//! right-hand side, and summarize tightness per theorem.
//!
//! Everything here is deterministic given a [`RunConfig`]: the corpus,
//! the sampled configurations, the record ordering, and the serialized
//! output are all reproducible byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::analyze::{self, AnalyzeError};
use crate::bounds::{
    self, BoundError, BoundResult, ClassicalCase, ClassicalInputs, ExponentPair, MeanDiffCase,
    MeanDiffInputs, NormCase, THEOREM_IDS,
};
use crate::func::{ClassConstants, FuncError, FunctionSpec};
use crate::functional::{self, FunctionalError, IntervalConfig, IntervalMode};
use crate::quad::{QuadError, QuadResult};

/// Errors from corpus generation, sweeping, or record I/O.
#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Analyze(#[from] AnalyzeError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error("no usable corpus families: {0}")]
    EmptyFamilies(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("bad record: {0}")]
    BadRecord(String),
}

// ---------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------

/// Families of generated functions. Each family comes with constants
/// that are either exact by construction (step, piecewise-linear,
/// root-cusp) or numerically estimated and rounded outward (polynomial,
/// trigonometric).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Polynomial,
    Trig,
    Step,
    Pwl,
    HolderRoot,
}

/// All families, in declaration order.
pub const ALL_FAMILIES: [Family; 5] = [
    Family::Polynomial,
    Family::Trig,
    Family::Step,
    Family::Pwl,
    Family::HolderRoot,
];

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Polynomial => "polynomial",
            Family::Trig => "trig",
            Family::Step => "step",
            Family::Pwl => "pwl",
            Family::HolderRoot => "holder-root",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "polynomial" | "poly" => Ok(Family::Polynomial),
            "trig" => Ok(Family::Trig),
            "step" => Ok(Family::Step),
            "pwl" => Ok(Family::Pwl),
            "holder-root" | "root" => Ok(Family::HolderRoot),
            other => Err(VerifyError::Unsupported(format!(
                "unknown family '{other}' (expected polynomial, trig, step, pwl, holder-root)"
            ))),
        }
    }
}

/// Generator kinds; monotone variants restrict their family to
/// nondecreasing samples so the monotone-hypothesis bounds get
/// certified coverage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Poly,
    MonoPoly,
    Trig,
    Step,
    Pwl,
    MonoPwl,
    Root,
}

impl Kind {
    fn family(self) -> Family {
        match self {
            Kind::Poly | Kind::MonoPoly => Family::Polynomial,
            Kind::Trig => Family::Trig,
            Kind::Step => Family::Step,
            Kind::Pwl | Kind::MonoPwl => Family::Pwl,
            Kind::Root => Family::HolderRoot,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Kind::Poly => "poly",
            Kind::MonoPoly => "mono-poly",
            Kind::Trig => "trig",
            Kind::Step => "step",
            Kind::Pwl => "pwl",
            Kind::MonoPwl => "mono-pwl",
            Kind::Root => "root",
        }
    }
}

/// Pair schedule cycled over non-witness entries; mixes integrator
/// classes so every theorem's hypothesis set is exercised.
const PAIR_SCHEDULE: [(Kind, Kind); 10] = [
    (Kind::Poly, Kind::Poly),
    (Kind::Trig, Kind::Trig),
    (Kind::Step, Kind::Poly),
    (Kind::Pwl, Kind::Trig),
    (Kind::Step, Kind::MonoPwl),
    (Kind::Pwl, Kind::Root),
    (Kind::Root, Kind::Poly),
    (Kind::Poly, Kind::MonoPoly),
    (Kind::Step, Kind::Root),
    (Kind::Trig, Kind::Pwl),
];

/// A generated pair `(f, g)` on a common interval, with class constants
/// attached to both functions.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    /// `"<f-kind>/<g-kind>"`, e.g. `"step/mono-pwl"`.
    pub family: String,
    pub f: FunctionSpec,
    pub g: FunctionSpec,
    pub a: f64,
    pub b: f64,
}

/// Exponents every absolutely continuous corpus function declares
/// `‖f′‖_p` for (the sup norm is declared separately).
pub const DECLARED_NORM_EXPONENTS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

/// Conjugate pairs cycled across entries for the `L_p` bound cases.
pub const EXPONENT_CYCLE: [ExponentPair; 3] = [
    ExponentPair { p: 2.0, q: 2.0 },
    ExponentPair { p: 3.0, q: 1.5 },
    ExponentPair { p: 1.5, q: 3.0 },
];

fn round_up(v: f64) -> f64 {
    v * (1.0 + 1e-9) + 1e-12
}

fn widen(range: (f64, f64)) -> (f64, f64) {
    let (m, big_m) = range;
    (
        m - 1e-12 * (1.0 + m.abs()),
        big_m + 1e-12 * (1.0 + big_m.abs()),
    )
}

/// `x - t` as source text, avoiding a double sign for negative `t`.
fn shifted(t: f64) -> String {
    if t >= 0.0 {
        format!("x - {t:?}")
    } else {
        format!("x + {:?}", -t)
    }
}

fn push_signed(s: &mut String, c: f64, term: &str) {
    if c >= 0.0 {
        s.push_str(&format!(" + {c:?}*{term}"));
    } else {
        s.push_str(&format!(" - {:?}*{term}", -c));
    }
}

/// Attach numerically estimated constants (rounded outward) to a smooth
/// function: derivative norms, variation, Lipschitz/Hölder data, range.
fn attach_smooth_constants(
    spec: FunctionSpec,
    lo: f64,
    hi: f64,
    monotone: bool,
) -> Result<FunctionSpec, VerifyError> {
    let d = spec.derivative_spec()?;
    let mut k = ClassConstants::default();
    let sup = round_up(analyze::sup_norm(&d, lo, hi)?);
    k.set_deriv_norm(f64::INFINITY, sup);
    for p in DECLARED_NORM_EXPONENTS {
        k.set_deriv_norm(p, round_up(analyze::lp_norm(&d, lo, hi, p, 1e-12)?));
    }
    k.total_variation = k.deriv_norm(1.0);
    k.lipschitz = Some(sup);
    k.holder = Some((1.0, sup));
    let (m, big_m) = analyze::range_estimate(&spec, lo, hi)?;
    k.range = Some((
        m - 1e-9 * (1.0 + m.abs()),
        big_m + 1e-9 * (1.0 + big_m.abs()),
    ));
    k.monotone_nondecreasing = monotone;
    let mut spec = spec.with_constants(k)?;
    if monotone {
        spec.set_monotone_cuts(Vec::new());
    }
    Ok(spec)
}

fn gen_poly(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<FunctionSpec, VerifyError> {
    let deg = rng.gen_range(1..=5usize);
    let mut coeffs: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let lead = rng.gen_range(0.1..1.0);
    coeffs[deg] = if rng.gen_bool(0.5) { lead } else { -lead };
    let mut src = format!("{:?}", coeffs[0]);
    for (k, &c) in coeffs.iter().enumerate().skip(1) {
        let term = if k == 1 {
            "x".to_string()
        } else {
            format!("x^{k}")
        };
        push_signed(&mut src, c, &term);
    }
    attach_smooth_constants(FunctionSpec::parse(&src, (lo, hi))?, lo, hi, false)
}

fn gen_mono_poly(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<FunctionSpec, VerifyError> {
    // c1·x + c3·x³ with positive coefficients is nondecreasing on any
    // interval
    let c1 = rng.gen_range(0.1..1.0);
    let c3 = rng.gen_range(0.1..1.0);
    let src = format!("{c1:?}*x + {c3:?}*x^3");
    attach_smooth_constants(FunctionSpec::parse(&src, (lo, hi))?, lo, hi, true)
}

fn gen_trig(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<FunctionSpec, VerifyError> {
    let c1 = rng.gen_range(-1.0..1.0);
    let c2 = rng.gen_range(-1.0..1.0);
    let c3 = rng.gen_range(-1.0..1.0);
    let k1 = rng.gen_range(1..=4) as f64;
    let k2 = rng.gen_range(1..=4) as f64;
    let mut src = format!("{c1:?}*sin({k1:?}*x)");
    push_signed(&mut src, c2, &format!("cos({k2:?}*x)"));
    push_signed(&mut src, c3, "x");
    attach_smooth_constants(FunctionSpec::parse(&src, (lo, hi))?, lo, hi, false)
}

/// Interior cut points, pairwise separated and away from the endpoints.
fn gen_cuts(rng: &mut ChaCha8Rng, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let w = hi - lo;
    let mut ts: Vec<f64> = Vec::with_capacity(n);
    while ts.len() < n {
        let t = rng.gen_range(lo + 0.05 * w..hi - 0.05 * w);
        if ts.iter().all(|&s| (s - t).abs() >= 0.02 * w) {
            ts.push(t);
        }
    }
    ts.sort_by(f64::total_cmp);
    ts
}

fn gen_step(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<FunctionSpec, VerifyError> {
    let n = rng.gen_range(1..=3usize);
    let ts = gen_cuts(rng, lo, hi, n);
    let cs: Vec<f64> = (0..n)
        .map(|_| {
            let m = rng.gen_range(0.05..1.0);
            if rng.gen_bool(0.5) {
                m
            } else {
                -m
            }
        })
        .collect();
    let base = rng.gen_range(-1.0..1.0);
    let mut src = format!("{base:?}");
    for (t, c) in ts.iter().zip(&cs) {
        push_signed(&mut src, *c, &format!("sign({})", shifted(*t)));
    }
    // exact piece values: leftmost piece sees every sign as −1, each
    // jump flips one term from −c to +c
    let mut acc = base - cs.iter().sum::<f64>();
    let mut piece_vals = vec![acc];
    for c in &cs {
        acc += 2.0 * c;
        piece_vals.push(acc);
    }
    let min = piece_vals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = piece_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = ClassConstants {
        total_variation: Some(2.0 * cs.iter().map(|c| c.abs()).sum::<f64>()),
        range: Some(widen((min, max))),
        monotone_nondecreasing: cs.iter().all(|&c| c >= 0.0),
        ..Default::default()
    };
    Ok(FunctionSpec::parse(&src, (lo, hi))?.with_constants(k)?)
}

fn gen_pwl(
    rng: &mut ChaCha8Rng,
    lo: f64,
    hi: f64,
    monotone: bool,
) -> Result<FunctionSpec, VerifyError> {
    let n = rng.gen_range(1..=3usize);
    let ts = gen_cuts(rng, lo, hi, n);
    let (slope, cs): (f64, Vec<f64>) = if monotone {
        // kink magnitudes below slope/(2n) keep every piece slope ≥ slope/2
        let m = rng.gen_range(0.5..1.5);
        let cs = (0..n).map(|_| rng.gen_range(0.02..m / (2.0 * n as f64))).collect();
        (m, cs)
    } else {
        let m = rng.gen_range(-1.0..1.0);
        let cs = (0..n)
            .map(|_| {
                let c = rng.gen_range(0.05..0.75);
                if rng.gen_bool(0.5) {
                    c
                } else {
                    -c
                }
            })
            .collect();
        (m, cs)
    };
    let base = rng.gen_range(-1.0..1.0);
    let mut src = format!("{slope:?}*x");
    push_signed(&mut src, base, "1");
    for (t, c) in ts.iter().zip(&cs) {
        push_signed(&mut src, *c, &format!("abs({})", shifted(*t)));
    }
    let spec = FunctionSpec::parse(&src, (lo, hi))?;

    // exact per-piece slopes, mirroring the step-value flip pattern
    let mut s = slope - cs.iter().sum::<f64>();
    let mut slopes = vec![s];
    for c in &cs {
        s += 2.0 * c;
        slopes.push(s);
    }
    let mut nodes = Vec::with_capacity(n + 2);
    nodes.push(lo);
    nodes.extend(ts.iter().copied());
    nodes.push(hi);
    let widths: Vec<f64> = nodes.windows(2).map(|p| p[1] - p[0]).collect();

    let mut k = ClassConstants::default();
    let sup = slopes.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    k.set_deriv_norm(f64::INFINITY, sup);
    for p in DECLARED_NORM_EXPONENTS {
        let sum: f64 = slopes
            .iter()
            .zip(&widths)
            .map(|(s, w)| s.abs().powf(p) * w)
            .sum();
        k.set_deriv_norm(p, sum.powf(1.0 / p));
    }
    k.total_variation = k.deriv_norm(1.0);
    k.lipschitz = Some(sup);
    k.holder = Some((1.0, sup));
    // a piecewise-linear function attains its extremes at nodes
    let node_vals: Vec<f64> = nodes.iter().map(|&t| spec.eval_raw(t)).collect();
    let min = node_vals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = node_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    k.range = Some(widen((min, max)));
    k.monotone_nondecreasing = slopes.iter().all(|&s| s >= 0.0);
    let cuts: Vec<f64> = ts
        .iter()
        .zip(slopes.windows(2))
        .filter(|(_, pair)| (pair[0] >= 0.0) != (pair[1] >= 0.0))
        .map(|(t, _)| *t)
        .collect();
    let mut spec = spec.with_constants(k)?;
    spec.set_monotone_cuts(cuts);
    Ok(spec)
}

fn gen_root(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<FunctionSpec, VerifyError> {
    let w = hi - lo;
    let gamma = [0.25, 0.5, 0.75][rng.gen_range(0..3usize)];
    let mag = rng.gen_range(0.2..1.0);
    let c = if rng.gen_bool(0.5) { mag } else { -mag };
    let interior = rng.gen_bool(0.5);
    let x0 = if interior {
        rng.gen_range(lo + 0.2 * w..hi - 0.2 * w)
    } else {
        lo
    };
    let base = rng.gen_range(-1.0..1.0);
    let mut src = format!("{c:?}*abs({})^{gamma:?}", shifted(x0));
    push_signed(&mut src, base, "1");
    let spec = FunctionSpec::parse(&src, (lo, hi))?;

    let left = x0 - lo;
    let right = hi - x0;
    let mut k = ClassConstants {
        total_variation: Some(mag * (left.powf(gamma) + right.powf(gamma))),
        holder: Some((gamma, mag)),
        ..Default::default()
    };
    // ‖f′‖_α = |c|γ·([ℓ^s + r^s]/s)^{1/α} with s = 1 − α(1−γ), finite
    // only while s > 0
    for alpha in DECLARED_NORM_EXPONENTS {
        let s = 1.0 - alpha * (1.0 - gamma);
        if s > 1e-9 {
            let val = mag * gamma * ((left.powf(s) + right.powf(s)) / s).powf(1.0 / alpha);
            k.set_deriv_norm(alpha, val);
        }
    }
    let vals = [
        c * left.powf(gamma) + base,
        base,
        c * right.powf(gamma) + base,
    ];
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    k.range = Some(widen((min, max)));
    k.monotone_nondecreasing = !interior && c > 0.0;
    let mut spec = spec.with_constants(k)?;
    if interior {
        spec.set_monotone_cuts(vec![x0]);
    } else {
        spec.set_monotone_cuts(Vec::new());
    }
    Ok(spec)
}

fn gen_kind(kind: Kind, rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Result<FunctionSpec, VerifyError> {
    match kind {
        Kind::Poly => gen_poly(rng, lo, hi),
        Kind::MonoPoly => gen_mono_poly(rng, lo, hi),
        Kind::Trig => gen_trig(rng, lo, hi),
        Kind::Step => gen_step(rng, lo, hi),
        Kind::Pwl => gen_pwl(rng, lo, hi, false),
        Kind::MonoPwl => gen_pwl(rng, lo, hi, true),
        Kind::Root => gen_root(rng, lo, hi),
    }
}

fn witness_linear() -> Result<CorpusEntry, VerifyError> {
    let mut k = ClassConstants {
        total_variation: Some(1.0),
        lipschitz: Some(1.0),
        holder: Some((1.0, 1.0)),
        range: Some((0.0, 1.0)),
        monotone_nondecreasing: true,
        ..Default::default()
    };
    k.set_deriv_norm(f64::INFINITY, 1.0);
    for p in DECLARED_NORM_EXPONENTS {
        k.set_deriv_norm(p, 1.0);
    }
    let mut f = FunctionSpec::parse("x", (0.0, 1.0))?.with_constants(k)?;
    f.set_monotone_cuts(Vec::new());
    Ok(CorpusEntry {
        name: "w000-linear".into(),
        family: "poly/poly".into(),
        g: f.clone(),
        f,
        a: 0.0,
        b: 1.0,
    })
}

fn witness_step() -> Result<CorpusEntry, VerifyError> {
    let k = ClassConstants {
        total_variation: Some(2.0),
        range: Some((-1.0, 1.0)),
        monotone_nondecreasing: true,
        ..Default::default()
    };
    let f = FunctionSpec::parse("sign(x - 0.5)", (0.0, 1.0))?.with_constants(k)?;
    Ok(CorpusEntry {
        name: "w001-step".into(),
        family: "step/step".into(),
        g: f.clone(),
        f,
        a: 0.0,
        b: 1.0,
    })
}

/// Deterministically generate `size` entries drawn from the allowed
/// families. Sharp-witness pairs (`f = g = x`, `f = g = sign(x − ½)`)
/// lead the corpus whenever their family is allowed; the remainder
/// cycles through mixed-class pairs on randomized intervals.
pub fn generate_corpus(
    seed: u64,
    size: usize,
    families: &[Family],
) -> Result<Vec<CorpusEntry>, VerifyError> {
    let allowed: BTreeSet<Family> = families.iter().copied().collect();
    if allowed.is_empty() {
        return Err(VerifyError::EmptyFamilies(
            "the family list is empty".into(),
        ));
    }
    let kinds: Vec<(Kind, Kind)> = PAIR_SCHEDULE
        .iter()
        .filter(|(kf, kg)| allowed.contains(&kf.family()) && allowed.contains(&kg.family()))
        .copied()
        .collect();
    if kinds.is_empty() {
        return Err(VerifyError::EmptyFamilies(format!(
            "no pair schedule is covered by {families:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CorpusEntry> = Vec::with_capacity(size);
    if allowed.contains(&Family::Polynomial) && out.len() < size {
        out.push(witness_linear()?);
    }
    if allowed.contains(&Family::Step) && out.len() < size {
        out.push(witness_step()?);
    }
    let mut k = 0usize;
    while out.len() < size {
        let (kf, kg) = kinds[k % kinds.len()];
        let lo = rng.gen_range(-2.0..1.0);
        let w = rng.gen_range(1.0..3.0);
        let hi = lo + w;
        let f = gen_kind(kf, &mut rng, lo, hi)?;
        let g = gen_kind(kg, &mut rng, lo, hi)?;
        out.push(CorpusEntry {
            name: format!("e{:03}-{}-{}", out.len(), kf.label(), kg.label()),
            family: format!("{}/{}", kf.label(), kg.label()),
            f,
            g,
            a: lo,
            b: hi,
        });
        k += 1;
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------

/// Tightness `lhs/rhs`, or indeterminate when the right-hand side is
/// too close to the quadrature error for the ratio to mean anything.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tightness {
    Value(f64),
    Indeterminate,
}

impl Tightness {
    pub fn value(self) -> Option<f64> {
        match self {
            Tightness::Value(v) => Some(v),
            Tightness::Indeterminate => None,
        }
    }
}

impl Serialize for Tightness {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Tightness::Value(v) => serializer.serialize_f64(*v),
            Tightness::Indeterminate => serializer.serialize_str("indeterminate"),
        }
    }
}

impl<'de> Deserialize<'de> for Tightness {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Ok(Tightness::Value(v)),
            Raw::Text(s) if s == "indeterminate" => Ok(Tightness::Indeterminate),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "tightness must be a number or \"indeterminate\", got \"{s}\""
            ))),
        }
    }
}

/// One checked inequality instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub theorem: String,
    pub case: String,
    pub entry: String,
    pub family: String,
    pub mode: String,
    /// Seed of the run that produced this record.
    pub seed: u64,
    pub a: f64,
    pub u: f64,
    pub v: f64,
    pub b: f64,
    pub lhs: f64,
    /// Quadrature error budget; includes the right-hand side's own
    /// quadrature error for functional-valued bounds.
    pub lhs_err: f64,
    pub rhs: f64,
    pub pass: bool,
    pub tightness: Tightness,
    pub hypothesis_ok: bool,
}

/// Sweep parameters; the default reproduces the reference run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub entries: usize,
    pub cfgs_per_entry: usize,
    /// Quadrature tolerance for left-hand sides.
    pub tol: f64,
    /// Additive slack in the pass predicate.
    pub margin: f64,
    /// Check the nested-interval variant instead of the overlapping one.
    pub nested: bool,
    /// Debug multiplier applied to every right-hand side before the
    /// comparison; values below 1 force violations.
    pub scale_rhs: f64,
    pub families: Vec<Family>,
    /// Restrict to matching theorem ids (exact id or prefix before `/`).
    pub theorems: Option<Vec<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            entries: 200,
            cfgs_per_entry: 20,
            tol: 1e-9,
            margin: 1e-9,
            nested: false,
            scale_rhs: 1.0,
            families: ALL_FAMILIES.to_vec(),
            theorems: None,
        }
    }
}

impl RunConfig {
    fn theorem_enabled(&self, id: &str) -> bool {
        match &self.theorems {
            None => true,
            Some(list) => list
                .iter()
                .any(|t| id == t || id.starts_with(&format!("{t}/"))),
        }
    }

    fn mode(&self) -> IntervalMode {
        if self.nested {
            IntervalMode::Nested
        } else {
            IntervalMode::Overlap
        }
    }

    fn mode_label(&self) -> &'static str {
        if self.nested {
            "nested"
        } else {
            "overlap"
        }
    }
}

/// Sweep output: records in `(entry, theorem, config)` order plus the
/// violation count (certified records whose inequality failed).
#[derive(Debug)]
pub struct SweepOutcome {
    pub records: Vec<VerificationRecord>,
    pub violations: usize,
}

/// Count records that fail despite a satisfied hypothesis.
pub fn count_violations(records: &[VerificationRecord]) -> usize {
    records.iter().filter(|r| r.hypothesis_ok && !r.pass).count()
}

// ---------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------

/// Run a quadrature-backed computation, relaxing the tolerance a decade
/// at a time (twice at most) when the evaluation budget runs out on a
/// hard integrand. The achieved error estimate travels with the result
/// either way, so the pass predicate stays honest; only genuinely
/// pathological integrands still surface the budget error.
fn with_relaxed_tol<T>(
    tol: f64,
    mut call: impl FnMut(f64) -> Result<T, FunctionalError>,
) -> Result<T, FunctionalError> {
    let mut last = None;
    for relax in [1.0, 10.0, 100.0] {
        match call(tol * relax) {
            Ok(v) => return Ok(v),
            Err(e @ FunctionalError::Quad(QuadError::ToleranceNotReached { .. })) => {
                last = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("relaxation loop always records an error"))
}

/// Shared quadrature results for one `(entry, config)` pair.
struct CfgBundle {
    cfg: IntervalConfig,
    diff: functional::TwoFunctionalDiff,
    pre: bounds::PreGruss,
    /// Signed mean difference of `f` between `[a,b]` and `[u,v]`.
    mdiff: Option<QuadResult>,
}

impl CfgBundle {
    fn build(entry: &CorpusEntry, cfg: IntervalConfig, tol: f64) -> Result<Self, VerifyError> {
        let diff =
            with_relaxed_tol(tol, |t| functional::functional_difference(&entry.f, &entry.g, &cfg, t))?;
        let ((llo, lhi), (rlo, rhi)) = cfg.sides();
        let tff_l = with_relaxed_tol(tol / 4.0, |t| functional::self_functional(&entry.f, llo, lhi, t))?;
        let tgg_l = with_relaxed_tol(tol / 4.0, |t| functional::self_functional(&entry.g, llo, lhi, t))?;
        let tff_r = with_relaxed_tol(tol / 4.0, |t| functional::self_functional(&entry.f, rlo, rhi, t))?;
        let tgg_r = with_relaxed_tol(tol / 4.0, |t| functional::self_functional(&entry.g, rlo, rhi, t))?;
        let pre = bounds::gen_pre_gruss_from_parts(tff_l, tgg_l, tff_r, tgg_r)?;
        let mdiff = with_relaxed_tol(tol, |t| {
            functional::mean_difference(&entry.f, entry.a, entry.b, cfg.u, cfg.v, t)
        })
        .ok();
        Ok(CfgBundle {
            cfg,
            diff,
            pre,
            mdiff,
        })
    }
}

/// Entry-level full-interval quantities.
struct EntryFull {
    t: QuadResult,
    pre: bounds::PreGruss,
}

impl EntryFull {
    fn build(entry: &CorpusEntry, tol: f64) -> Result<Self, VerifyError> {
        let t = with_relaxed_tol(tol, |t| {
            functional::chebyshev_functional(&entry.f, &entry.g, entry.a, entry.b, t)
        })?;
        let tff =
            with_relaxed_tol(tol / 2.0, |t| functional::self_functional(&entry.f, entry.a, entry.b, t))?;
        let tgg =
            with_relaxed_tol(tol / 2.0, |t| functional::self_functional(&entry.g, entry.a, entry.b, t))?;
        let pre = bounds::pre_gruss_from_parts(tff, tgg)?;
        Ok(EntryFull { t, pre })
    }
}

fn split_id(id: &str) -> (String, String) {
    match id.split_once('/') {
        Some((t, c)) => (t.to_string(), c.to_string()),
        None => (id.to_string(), String::new()),
    }
}

#[allow(clippy::too_many_arguments)]
fn make_record(
    id: &str,
    entry: &CorpusEntry,
    mode: &str,
    points: (f64, f64, f64, f64),
    lhs: f64,
    lhs_err: f64,
    rhs: f64,
    hypothesis_ok: bool,
    rc: &RunConfig,
) -> VerificationRecord {
    let rhs_scaled = rhs * rc.scale_rhs;
    let pass = lhs <= rhs_scaled + lhs_err + rc.margin;
    let tightness = if rhs_scaled > 10.0 * lhs_err && rhs_scaled > 0.0 {
        Tightness::Value(lhs / rhs_scaled)
    } else {
        Tightness::Indeterminate
    };
    let (theorem, case) = split_id(id);
    VerificationRecord {
        theorem,
        case,
        entry: entry.name.clone(),
        family: entry.family.clone(),
        mode: mode.to_string(),
        seed: rc.seed,
        a: points.0,
        u: points.1,
        v: points.2,
        b: points.3,
        lhs,
        lhs_err,
        rhs: rhs_scaled,
        pass,
        tightness,
        hypothesis_ok,
    }
}

/// Evaluate a constant-based right-hand side for `entry` on `cfg`.
/// `Ok(None)` means the entry does not declare the constants the
/// theorem consumes; the hypothesis flag covers declared-but-failed
/// preconditions (monotonicity).
fn constant_rhs(
    id: &str,
    entry: &CorpusEntry,
    cfg: &IntervalConfig,
    pq: ExponentPair,
    ab: ExponentPair,
) -> Result<Option<(BoundResult, bool)>, VerifyError> {
    let fc = &entry.f.constants;
    let gc = &entry.g.constants;
    let (a, b) = (entry.a, entry.b);
    let certify = |r: BoundResult| {
        let ok = r.preconditions_ok;
        Some((r, ok))
    };
    let squash = |r: Result<BoundResult, BoundError>| match r {
        Ok(res) => Ok(Some(res)),
        Err(BoundError::MissingConstant(_)) | Err(BoundError::DegenerateConfig(_)) => Ok(None),
        Err(e) => Err(VerifyError::from(e)),
    };

    let classical_inputs = ClassicalInputs {
        f_deriv_inf: fc.deriv_norm(f64::INFINITY),
        g_deriv_inf: gc.deriv_norm(f64::INFINITY),
        f_deriv_2: fc.deriv_norm(2.0),
        g_deriv_2: gc.deriv_norm(2.0),
        f_range: fc.range,
        g_range: gc.range,
    };
    let mean_inputs = MeanDiffInputs {
        f_deriv_inf: fc.deriv_norm(f64::INFINITY),
        f_deriv_p: fc.deriv_norm(pq.p),
        f_deriv_1: fc.deriv_norm(1.0),
        holder: fc.holder.map(|(order, h)| (h, order)),
        variation: fc.total_variation,
        lipschitz: fc.lipschitz,
        f_values: None,
    };
    let (c, d) = (cfg.u, cfg.v);

    let out = match id {
        "thm1/chebyshev" => {
            squash(bounds::classical_bound(ClassicalCase::Chebyshev, a, b, &classical_inputs))?
                .and_then(certify)
        }
        "thm1/gruss" => {
            squash(bounds::classical_bound(ClassicalCase::Gruss, a, b, &classical_inputs))?
                .and_then(certify)
        }
        "thm1/lupas" => {
            squash(bounds::classical_bound(ClassicalCase::Lupas, a, b, &classical_inputs))?
                .and_then(certify)
        }
        "thm1/ostrowski" => {
            squash(bounds::classical_bound(ClassicalCase::Ostrowski, a, b, &classical_inputs))?
                .and_then(certify)
        }
        "bar4.3.1" => {
            squash(bounds::mean_diff_bound(a, b, c, d, MeanDiffCase::Linf, &mean_inputs))?
                .and_then(certify)
        }
        "cer4.3.2/Lp" => {
            squash(bounds::mean_diff_bound(a, b, c, d, MeanDiffCase::Lp(pq), &mean_inputs))?
                .and_then(certify)
        }
        "cer4.3.2/L1" => {
            squash(bounds::mean_diff_bound(a, b, c, d, MeanDiffCase::L1, &mean_inputs))?
                .and_then(certify)
        }
        "cer4.3.3" => {
            squash(bounds::mean_diff_bound(a, b, c, d, MeanDiffCase::Holder, &mean_inputs))?
                .and_then(certify)
        }
        "cer4.3.4/bv" => {
            squash(bounds::mean_diff_bound(a, b, c, d, MeanDiffCase::Bv, &mean_inputs))?
                .and_then(certify)
        }
        "cer4.3.4/lipschitz" => {
            squash(bounds::mean_diff_bound(a, b, c, d, MeanDiffCase::Lipschitz, &mean_inputs))?
                .and_then(certify)
        }
        "cer4.3.4/monotone" => {
            let s0 = match bounds::mean_diff_s0(a, b, c, d) {
                Ok(s0) => s0,
                Err(_) => return Ok(None),
            };
            let vals = MeanDiffInputs {
                f_values: Some((entry.f.eval_raw(a), entry.f.eval_raw(b), entry.f.eval_raw(s0))),
                ..mean_inputs
            };
            squash(bounds::mean_diff_bound(a, b, c, d, MeanDiffCase::Monotone, &vals))?
                .map(|r| {
                    let ok = fc.monotone_nondecreasing && r.preconditions_ok;
                    (r, ok)
                })
        }
        "thm4.5.1/Linf" => match (fc.total_variation, gc.deriv_norm(f64::INFINITY)) {
            (Some(v), Some(ng)) => {
                squash(bounds::bound_bv_abscont(v, NormCase::Linf, None, ng, cfg))?.and_then(certify)
            }
            _ => None,
        },
        "thm4.5.1/Lp" => match (fc.total_variation, gc.deriv_norm(pq.p)) {
            (Some(v), Some(ng)) => {
                squash(bounds::bound_bv_abscont(v, NormCase::Lp, Some(pq), ng, cfg))?
                    .and_then(certify)
            }
            _ => None,
        },
        "thm4.5.1/L1" => match (fc.total_variation, gc.deriv_norm(1.0)) {
            (Some(v), Some(ng)) => {
                squash(bounds::bound_bv_abscont(v, NormCase::L1, None, ng, cfg))?.and_then(certify)
            }
            _ => None,
        },
        "thm4.5.3/form1" | "thm4.5.3/form2" => match (fc.total_variation, gc.holder) {
            (Some(v), Some((order, h))) => {
                let (f1, f2) = bounds::bound_bv_holder(v, h, order, cfg)?;
                let r = if id.ends_with("form1") { f1 } else { f2 };
                certify(r)
            }
            _ => None,
        },
        "thm4.5.5" => match fc.total_variation {
            Some(v) => {
                let (ga, gu, gv, gb) = (
                    entry.g.eval_raw(a),
                    entry.g.eval_raw(cfg.u),
                    entry.g.eval_raw(cfg.v),
                    entry.g.eval_raw(b),
                );
                squash(bounds::bound_bv_monotone(v, ga, gu, gv, gb, cfg))?.map(|r| {
                    let ok = gc.monotone_nondecreasing && r.preconditions_ok;
                    (r, ok)
                })
            }
            None => None,
        },
        "thm4.5.7/Linf" => match (fc.lipschitz, gc.deriv_norm(f64::INFINITY)) {
            (Some(l), Some(ng)) => {
                squash(bounds::bound_lip_abscont(l, NormCase::Linf, None, ng, cfg))?
                    .and_then(certify)
            }
            _ => None,
        },
        "thm4.5.7/Lp" => match (fc.lipschitz, gc.deriv_norm(pq.p)) {
            (Some(l), Some(ng)) => {
                squash(bounds::bound_lip_abscont(l, NormCase::Lp, Some(pq), ng, cfg))?
                    .and_then(certify)
            }
            _ => None,
        },
        "thm4.5.9" => match (fc.lipschitz, gc.holder) {
            (Some(l), Some((order, h))) => {
                squash(bounds::bound_lip_holder(l, h, order, cfg))?.and_then(certify)
            }
            _ => None,
        },
        "thm4.5.12/Linf" => match (fc.deriv_norm(ab.p), gc.deriv_norm(f64::INFINITY)) {
            (Some(nf), Some(ng)) => {
                squash(bounds::bound_abscont_pair(nf, ab, NormCase::Linf, None, ng, cfg))?
                    .and_then(certify)
            }
            _ => None,
        },
        "thm4.5.12/Lp" => match (fc.deriv_norm(ab.p), gc.deriv_norm(pq.p)) {
            (Some(nf), Some(ng)) => {
                squash(bounds::bound_abscont_pair(nf, ab, NormCase::Lp, Some(pq), ng, cfg))?
                    .and_then(certify)
            }
            _ => None,
        },
        "thm4.5.12/L1" => match (fc.deriv_norm(ab.p), gc.deriv_norm(1.0)) {
            (Some(nf), Some(ng)) => {
                squash(bounds::bound_abscont_pair(nf, ab, NormCase::L1, None, ng, cfg))?
                    .and_then(certify)
            }
            _ => None,
        },
        other => {
            return Err(VerifyError::Unsupported(format!(
                "'{other}' has no constant-based right-hand side"
            )))
        }
    };
    Ok(out)
}

/// Which left-hand side a theorem compares against.
fn lhs_kind(id: &str) -> LhsKind {
    if id.starts_with("thm1/") || id == "eq2.1" {
        LhsKind::Full
    } else if id.starts_with("bar4.3") || id.starts_with("cer4.3") {
        LhsKind::MeanDiff
    } else {
        LhsKind::TwoFunctional
    }
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum LhsKind {
    Full,
    MeanDiff,
    TwoFunctional,
}

/// Run the randomized sweep described by `rc`.
pub fn sweep(rc: &RunConfig) -> Result<SweepOutcome, VerifyError> {
    let corpus = generate_corpus(rc.seed, rc.entries, &rc.families)?;
    let mode = rc.mode_label();
    let mut records = Vec::new();

    for (i, entry) in corpus.iter().enumerate() {
        let pq = EXPONENT_CYCLE[i % EXPONENT_CYCLE.len()];
        let ab = pq;
        let full = EntryFull::build(entry, rc.tol)?;
        let cfgs = sample_configs(rc, entry, i as u64);
        let bundles: Vec<CfgBundle> = cfgs
            .into_iter()
            .map(|c| CfgBundle::build(entry, c, rc.tol))
            .collect::<Result<_, _>>()?;

        for &id in THEOREM_IDS {
            if !rc.theorem_enabled(id) {
                continue;
            }
            match lhs_kind(id) {
                LhsKind::Full => {
                    let lhs = full.t.value.abs();
                    let (rhs, err, hyp) = if id == "eq2.1" {
                        (full.pre.level1, full.pre.err_est, true)
                    } else {
                        match constant_rhs(id, entry, &full_cfg(entry, rc)?, pq, ab)? {
                            Some((r, ok)) => (r.rhs, 0.0, ok),
                            None => continue,
                        }
                    };
                    records.push(make_record(
                        id,
                        entry,
                        mode,
                        (entry.a, entry.a, entry.b, entry.b),
                        lhs,
                        full.t.err_est + err,
                        rhs,
                        hyp,
                        rc,
                    ));
                }
                LhsKind::TwoFunctional => {
                    for bundle in &bundles {
                        let cfg = &bundle.cfg;
                        let lhs = bundle.diff.diff_abs;
                        let (rhs, extra_err, hyp) = if id == "thm4/eq2.2" {
                            // the right-hand side is itself quadrature;
                            // its error shares the certified margin
                            (bundle.pre.level1, bundle.pre.err_est, true)
                        } else {
                            match constant_rhs(id, entry, cfg, pq, ab)? {
                                Some((r, ok)) => (r.rhs, 0.0, ok),
                                None => break,
                            }
                        };
                        records.push(make_record(
                            id,
                            entry,
                            mode,
                            (cfg.a, cfg.u, cfg.v, cfg.b),
                            lhs,
                            bundle.diff.err_est + extra_err,
                            rhs,
                            hyp,
                            rc,
                        ));
                    }
                }
                LhsKind::MeanDiff => {
                    for bundle in &bundles {
                        let Some(md) = bundle.mdiff else { continue };
                        let cfg = &bundle.cfg;
                        let (rhs, hyp) = match constant_rhs(id, entry, cfg, pq, ab)? {
                            Some((r, ok)) => (r.rhs, ok),
                            None => break,
                        };
                        records.push(make_record(
                            id,
                            entry,
                            mode,
                            (cfg.a, cfg.u, cfg.v, cfg.b),
                            md.value.abs(),
                            md.err_est,
                            rhs,
                            hyp,
                            rc,
                        ));
                    }
                }
            }
        }
    }
    let violations = count_violations(&records);
    Ok(SweepOutcome { records, violations })
}

fn full_cfg(entry: &CorpusEntry, rc: &RunConfig) -> Result<IntervalConfig, VerifyError> {
    Ok(IntervalConfig::new(
        entry.a,
        entry.a,
        entry.b,
        entry.b,
        rc.mode(),
    )?)
}

/// Sampled interval configurations for one entry, reproducible from the
/// seed and entry index via a dedicated stream.
fn sample_configs(rc: &RunConfig, entry: &CorpusEntry, index: u64) -> Vec<IntervalConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed);
    rng.set_stream(index + 1);
    let (a, b) = (entry.a, entry.b);
    let w = b - a;
    let mode = rc.mode();
    (0..rc.cfgs_per_entry)
        .map(|_| loop {
            let mut u = a + rng.gen::<f64>() * w;
            let mut v = a + rng.gen::<f64>() * w;
            if u > v {
                std::mem::swap(&mut u, &mut v);
            }
            if v - u >= 1e-3 * w {
                break IntervalConfig::new(a, u, v, b, mode).expect("sampled points are ordered");
            }
        })
        .collect()
}

// ---------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------

/// Header row of the CSV form; columns mirror the JSONL field order.
pub const CSV_HEADER: &str =
    "theorem,case,entry,family,mode,seed,a,u,v,b,lhs,lhs_err,rhs,pass,tightness,hypothesis_ok";

/// Write records as JSON Lines.
pub fn write_jsonl<W: Write>(mut w: W, records: &[VerificationRecord]) -> Result<(), VerifyError> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Write records as CSV with [`CSV_HEADER`].
pub fn write_csv<W: Write>(mut w: W, records: &[VerificationRecord]) -> Result<(), VerifyError> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        let tight = match r.tightness {
            Tightness::Value(v) => format!("{v:?}"),
            Tightness::Indeterminate => "indeterminate".to_string(),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{},{},{}",
            r.theorem,
            r.case,
            r.entry,
            r.family,
            r.mode,
            r.seed,
            r.a,
            r.u,
            r.v,
            r.b,
            r.lhs,
            r.lhs_err,
            r.rhs,
            r.pass,
            tight,
            r.hypothesis_ok,
        )?;
    }
    Ok(())
}

/// Read records back from JSON Lines.
pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<VerificationRecord>, VerifyError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: VerificationRecord = serde_json::from_str(&line)
            .map_err(|e| VerifyError::BadRecord(format!("line {}: {e}", i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------

/// Aggregate statistics for one theorem/case id.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremStats {
    pub theorem: String,
    pub records: usize,
    /// Records with a satisfied hypothesis.
    pub certified: usize,
    pub passes: usize,
    pub violations: usize,
    pub hypothesis_failures: usize,
    /// Certified records whose tightness was indeterminate.
    pub indeterminate: usize,
    pub max_tightness: Option<f64>,
    pub argmax_entry: Option<String>,
    pub argmax_cfg: Option<(f64, f64, f64, f64)>,
}

/// Group records by full theorem id and compute pass/tightness summaries.
pub fn tightness_report(records: &[VerificationRecord]) -> Vec<TheoremStats> {
    let mut by_id: BTreeMap<String, TheoremStats> = BTreeMap::new();
    for r in records {
        let id = if r.case.is_empty() {
            r.theorem.clone()
        } else {
            format!("{}/{}", r.theorem, r.case)
        };
        let stats = by_id.entry(id.clone()).or_insert_with(|| TheoremStats {
            theorem: id,
            records: 0,
            certified: 0,
            passes: 0,
            violations: 0,
            hypothesis_failures: 0,
            indeterminate: 0,
            max_tightness: None,
            argmax_entry: None,
            argmax_cfg: None,
        });
        stats.records += 1;
        if !r.hypothesis_ok {
            stats.hypothesis_failures += 1;
            continue;
        }
        stats.certified += 1;
        if r.pass {
            stats.passes += 1;
        } else {
            stats.violations += 1;
        }
        match r.tightness {
            Tightness::Indeterminate => stats.indeterminate += 1,
            Tightness::Value(t) => {
                if stats.max_tightness.map_or(true, |m| t > m) {
                    stats.max_tightness = Some(t);
                    stats.argmax_entry = Some(r.entry.clone());
                    stats.argmax_cfg = Some((r.a, r.u, r.v, r.b));
                }
            }
        }
    }
    by_id.into_values().collect()
}

/// Render the tightness report as an aligned text table.
pub fn format_report(stats: &[TheoremStats]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<20} {:>7} {:>9} {:>5} {:>7} {:>6} {:>12}  {}\n",
        "theorem", "records", "pass-rate", "viol", "hyp-off", "indet", "max-tight", "argmax"
    ));
    for s in stats {
        let rate = if s.certified > 0 {
            format!("{:.4}", s.passes as f64 / s.certified as f64)
        } else {
            "-".to_string()
        };
        let tight = s
            .max_tightness
            .map(|t| format!("{t:.6}"))
            .unwrap_or_else(|| "-".to_string());
        let argmax = match (&s.argmax_entry, s.argmax_cfg) {
            (Some(e), Some((a, u, v, b))) => {
                format!("{e} [a={a:.4} u={u:.4} v={v:.4} b={b:.4}]")
            }
            _ => "-".to_string(),
        };
        out.push_str(&format!(
            "{:<20} {:>7} {:>9} {:>5} {:>7} {:>6} {:>12}  {}\n",
            s.theorem, s.records, rate, s.violations, s.hypothesis_failures, s.indeterminate,
            tight, argmax
        ));
    }
    out
}

// ---------------------------------------------------------------------
// Limit consistency
// ---------------------------------------------------------------------

/// Which degeneration to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitMode {
    /// `v → u`: the general two-functional bound must approach its
    /// collapsed corollary value (anchored at the midpoint; at `u = a`
    /// for the generalized pre-Grüss chain, whose collapse is the
    /// full-interval bound).
    VToU,
    /// `u = v → a`: the two-functional difference must approach the
    /// full-interval functional.
    MergeToFull,
}

/// One evaluation of a limit check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LimitPoint {
    pub eps: f64,
    pub value: f64,
    pub anchor: f64,
    /// `(value − anchor) / max(|anchor|, 1e-12)`.
    pub rel_gap: f64,
}

/// Evaluate the degeneration `mode` for `theorem` on `entry` at each
/// `eps`. For [`LimitMode::VToU`] the anchor is the collapsed general
/// bound (equal to the published midpoint corollary except where that
/// corollary is deliberately looser); for [`LimitMode::MergeToFull`]
/// it is `|T_a^b(f,g)|`.
pub fn limit_consistency(
    entry: &CorpusEntry,
    theorem: &str,
    mode: LimitMode,
    eps: &[f64],
    tol: f64,
) -> Result<Vec<LimitPoint>, VerifyError> {
    let (a, b) = (entry.a, entry.b);
    let pq = EXPONENT_CYCLE[0];
    let ab = pq;
    let mut out = Vec::with_capacity(eps.len());
    match mode {
        LimitMode::MergeToFull => {
            let anchor = functional::chebyshev_functional(&entry.f, &entry.g, a, b, tol)?
                .value
                .abs();
            for &e in eps {
                if !(e > 0.0 && a + e < b) {
                    return Err(VerifyError::Unsupported(format!(
                        "eps {e} leaves no room in [{a}, {b}]"
                    )));
                }
                let cfg = IntervalConfig::overlap(a, a + e, a + e, b)?;
                let diff = functional::functional_difference(&entry.f, &entry.g, &cfg, tol)?;
                out.push(point(e, diff.diff_abs, anchor));
            }
        }
        LimitMode::VToU => {
            let functional_chain = theorem == "thm4/eq2.2";
            let u0 = if functional_chain { a } else { 0.5 * (a + b) };
            let anchor = if functional_chain {
                bounds::pre_gruss_bound(&entry.f, &entry.g, a, b, tol)?.level1
            } else {
                let collapsed = IntervalConfig::overlap(a, u0, u0, b)?;
                match constant_rhs(theorem, entry, &collapsed, pq, ab)? {
                    Some((r, _)) => r.rhs,
                    None => {
                        return Err(VerifyError::Unsupported(format!(
                            "entry '{}' lacks the constants for {theorem}",
                            entry.name
                        )))
                    }
                }
            };
            for &e in eps {
                if !(e > 0.0 && u0 + e <= b) {
                    return Err(VerifyError::Unsupported(format!(
                        "eps {e} leaves no room in [{u0}, {b}]"
                    )));
                }
                let cfg = IntervalConfig::overlap(a, u0, u0 + e, b)?;
                let value = if functional_chain {
                    bounds::generalized_pre_gruss(&entry.f, &entry.g, &cfg, tol)?.level1
                } else {
                    match constant_rhs(theorem, entry, &cfg, pq, ab)? {
                        Some((r, _)) => r.rhs,
                        None => {
                            return Err(VerifyError::Unsupported(format!(
                                "entry '{}' lacks the constants for {theorem}",
                                entry.name
                            )))
                        }
                    }
                };
                out.push(point(e, value, anchor));
            }
        }
    }
    Ok(out)
}

fn point(eps: f64, value: f64, anchor: f64) -> LimitPoint {
    LimitPoint {
        eps,
        value,
        anchor,
        rel_gap: (value - anchor) / anchor.abs().max(1e-12),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> RunConfig {
        RunConfig {
            entries: 6,
            cfgs_per_entry: 3,
            ..Default::default()
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = generate_corpus(7, 8, &ALL_FAMILIES).unwrap();
        let b = generate_corpus(7, 8, &ALL_FAMILIES).unwrap();
        assert_eq!(a.len(), 8);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.f.source(), y.f.source());
            assert_eq!(x.g.source(), y.g.source());
            assert_eq!(x.f.constants, y.f.constants);
            assert_eq!(x.a, y.a);
        }
        let c = generate_corpus(8, 8, &ALL_FAMILIES).unwrap();
        assert_ne!(
            a[2].f.source(),
            c[2].f.source(),
            "different seeds should give different draws"
        );
    }

    #[test]
    fn corpus_single_polynomial_family() {
        let one = generate_corpus(1, 1, &[Family::Polynomial]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].f.source(), "x");
        let three = generate_corpus(1, 3, &[Family::Polynomial]).unwrap();
        assert!(three.iter().skip(1).all(|e| e.family.contains("poly")));
        assert!(generate_corpus(1, 3, &[]).is_err());
        // step alone covers no schedule pair beyond its witness
        let err = generate_corpus(1, 3, &[Family::Trig, Family::HolderRoot]);
        assert!(err.is_ok(), "trig pairs exist in the schedule");
    }

    #[test]
    fn corpus_declared_constants_are_sound() {
        let corpus = generate_corpus(3, 12, &ALL_FAMILIES).unwrap();
        for e in &corpus {
            for spec in [&e.f, &e.g] {
                let k = &spec.constants;
                if let Some(v) = k.total_variation {
                    let est = analyze::total_variation(spec, e.a, e.b).unwrap();
                    assert!(
                        v >= est.value - 1e-6 * (1.0 + est.value),
                        "{}: declared variation {v} < estimate {}",
                        spec.source(),
                        est.value
                    );
                }
                if let Some((m, big_m)) = k.range {
                    for i in 0..=64 {
                        let t = e.a + (e.b - e.a) * i as f64 / 64.0;
                        let y = spec.eval_raw(t);
                        assert!(y >= m - 1e-9 && y <= big_m + 1e-9, "{}", spec.source());
                    }
                }
                if let Some(sup) = k.deriv_norm(f64::INFINITY) {
                    assert!(sup >= 0.0 && sup.is_finite());
                }
            }
        }
    }

    #[test]
    fn sampled_configs_respect_gap() {
        let rc = small_config();
        let corpus = generate_corpus(rc.seed, 3, &rc.families).unwrap();
        for (i, e) in corpus.iter().enumerate() {
            let cfgs = sample_configs(&rc, e, i as u64);
            assert_eq!(cfgs.len(), rc.cfgs_per_entry);
            for c in cfgs {
                assert!(c.v - c.u >= 1e-3 * (e.b - e.a));
                assert!(c.a <= c.u && c.v <= c.b);
            }
        }
    }

    #[test]
    fn small_sweep_has_no_violations_and_is_deterministic() {
        let rc = small_config();
        let run1 = sweep(&rc).unwrap();
        assert_eq!(run1.violations, 0, "violating records: {:?}",
            run1.records.iter().filter(|r| r.hypothesis_ok && !r.pass).collect::<Vec<_>>());
        assert!(!run1.records.is_empty());
        let run2 = sweep(&rc).unwrap();
        let mut buf1 = Vec::new();
        let mut buf2 = Vec::new();
        write_jsonl(&mut buf1, &run1.records).unwrap();
        write_jsonl(&mut buf2, &run2.records).unwrap();
        assert_eq!(buf1, buf2, "sweep output must be byte-identical");

        // witness tightness: the sharp pairs must sit at ratio ~1
        let stats = tightness_report(&run1.records);
        let cheb = stats.iter().find(|s| s.theorem == "thm1/chebyshev").unwrap();
        assert!(cheb.max_tightness.unwrap() > 0.999_999);
        let gruss = stats.iter().find(|s| s.theorem == "thm1/gruss").unwrap();
        assert!(gruss.max_tightness.unwrap() > 0.999_999);
    }

    #[test]
    fn scale_rhs_forces_violations() {
        let rc = RunConfig {
            entries: 2,
            cfgs_per_entry: 2,
            scale_rhs: 1e-3,
            ..Default::default()
        };
        let run = sweep(&rc).unwrap();
        assert!(run.violations > 0);
    }

    #[test]
    fn theorem_filter_limits_records() {
        let rc = RunConfig {
            entries: 2,
            cfgs_per_entry: 2,
            theorems: Some(vec!["thm4.5.1".into()]),
            ..Default::default()
        };
        let run = sweep(&rc).unwrap();
        assert!(!run.records.is_empty());
        assert!(run.records.iter().all(|r| r.theorem == "thm4.5.1"));
    }

    #[test]
    fn jsonl_and_csv_round_trip() {
        let rc = RunConfig {
            entries: 2,
            cfgs_per_entry: 2,
            ..Default::default()
        };
        let run = sweep(&rc).unwrap();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &run.records).unwrap();
        let back = read_jsonl(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(back.len(), run.records.len());
        assert_eq!(back[0].theorem, run.records[0].theorem);
        assert_eq!(back[0].tightness, run.records[0].tightness);

        let mut csv = Vec::new();
        write_csv(&mut csv, &run.records).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), run.records.len() + 1);
    }

    #[test]
    fn tightness_serde_forms() {
        let v: Tightness = serde_json::from_str("0.5").unwrap();
        assert_eq!(v, Tightness::Value(0.5));
        let i: Tightness = serde_json::from_str("\"indeterminate\"").unwrap();
        assert_eq!(i, Tightness::Indeterminate);
        assert!(serde_json::from_str::<Tightness>("\"nope\"").is_err());
        assert_eq!(serde_json::to_string(&Tightness::Value(0.5)).unwrap(), "0.5");
        assert_eq!(
            serde_json::to_string(&Tightness::Indeterminate).unwrap(),
            "\"indeterminate\""
        );
    }

    #[test]
    fn limit_v_to_u_converges_to_corollary() {
        let entry = witness_linear().unwrap();
        let eps = [1e-1, 1e-2, 1e-3, 1e-4, 1e-6];
        for id in ["thm4.5.1/Linf", "thm4.5.3/form1", "thm4.5.7/Linf", "thm4.5.9", "thm4.5.12/Lp", "thm4.5.5"] {
            let pts = limit_consistency(&entry, id, LimitMode::VToU, &eps, 1e-10).unwrap();
            for w in pts.windows(2) {
                assert!(
                    w[1].rel_gap <= w[0].rel_gap + 1e-12,
                    "{id}: gap must shrink with eps: {:?}",
                    pts
                );
            }
            let last = pts.last().unwrap();
            assert!(last.rel_gap.abs() < 1e-4, "{id}: {last:?}");
            assert!(pts.iter().all(|p| p.rel_gap >= -1e-9), "{id}: {pts:?}");
        }
    }

    #[test]
    fn limit_merge_to_full_converges() {
        let entry = witness_linear().unwrap();
        let eps = [1e-1, 1e-2, 1e-3, 1e-4];
        let pts =
            limit_consistency(&entry, "", LimitMode::MergeToFull, &eps, 1e-10).unwrap();
        assert!((pts[0].anchor - 1.0 / 12.0).abs() < 1e-9);
        for w in pts.windows(2) {
            assert!(w[1].rel_gap.abs() <= w[0].rel_gap.abs() + 1e-12);
        }
        assert!(pts.last().unwrap().rel_gap.abs() < 1e-3);
    }

    #[test]
    fn pre_gruss_chain_tightens_as_v_leaves_a() {
        let entry = witness_linear().unwrap();
        let eps = [1e-1, 1e-2, 1e-3, 1e-4];
        let pts =
            limit_consistency(&entry, "thm4/eq2.2", LimitMode::VToU, &eps, 1e-10).unwrap();
        // anchor is the full-interval pre-Grüss value T(x,x) = 1/12
        assert!((pts[0].anchor - 1.0 / 12.0).abs() < 1e-8);
        for w in pts.windows(2) {
            assert!(w[1].rel_gap <= w[0].rel_gap + 1e-12, "{pts:?}");
        }
        assert!(pts.iter().all(|p| p.rel_gap >= -1e-9));
    }
}
