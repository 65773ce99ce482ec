//! Command-line front end: evaluate functionals and closed-form bounds,
//! run verification sweeps, and summarize record files.
//!
//! Exit codes: `0` success with no certified violation, `1` a sweep (or
//! summarized record file) contains certified violations, `2` execution
//! error (parse failure, bad flags, I/O).

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, BoundError, BoundParams};
use crate::func::FunctionSpec;
use crate::functional::{self, IntervalConfig, IntervalMode};
use crate::verify::{self, Family, RunConfig};
use crate::DEFAULT_TOL;

/// Čebyšev functional toolkit: quadrature, closed-form bounds, and
/// randomized verification. Set `CHEB_BUDGET` to override the quadrature
/// evaluation budget.
#[derive(Debug, Parser)]
#[command(name = "cheb", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate T_a^b(f,g), and the two-functional difference when an
    /// interior pair u,v is given
    Eval(EvalArgs),
    /// Evaluate a closed-form bound from declared constants
    Bound(BoundArgs),
    /// Run a randomized verification sweep and write its records
    Verify(VerifyArgs),
    /// Summarize a JSONL record file as a tightness report
    Report(ReportArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    /// Expression for f, e.g. "x^2 - 0.5*x"
    pub f: String,
    /// Expression for g
    pub g: String,
    pub a: f64,
    pub b: f64,
    /// Left subinterval endpoint; with --v, prints |T_a^v − T_u^b|
    #[arg(long)]
    pub u: Option<f64>,
    /// Right subinterval endpoint
    #[arg(long)]
    pub v: Option<f64>,
    /// Quadrature tolerance
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Treat [u,v] and [a,b] as nested intervals
    #[arg(long)]
    pub nested: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BoundArgs {
    /// Theorem id, e.g. thm4.5.1/Linf, cer4.3.4/monotone,
    /// thm4.5.7/Linf/midpoint
    pub theorem: String,
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    /// Defaults to the midpoint of [a,b]
    #[arg(long)]
    pub u: Option<f64>,
    /// Defaults to the midpoint of [a,b]
    #[arg(long)]
    pub v: Option<f64>,
    /// Nested-interval mode (lengths v−u and b−a)
    #[arg(long)]
    pub nested: bool,

    /// Total variation of f on [a,b]
    #[arg(long = "V")]
    pub variation: Option<f64>,
    /// Lipschitz constant of f
    #[arg(long = "L")]
    pub lipschitz: Option<f64>,
    /// Hölder coefficient (of g for thm4.5.3/thm4.5.9, of f for cer4.3.3)
    #[arg(long = "H")]
    pub holder: Option<f64>,
    /// Hölder order for Hölder-type bounds, Lebesgue exponent elsewhere
    #[arg(long)]
    pub p: Option<f64>,
    /// Conjugate of p (derived when omitted)
    #[arg(long)]
    pub q: Option<f64>,
    /// Exponent α with ‖f′‖_α (thm4.5.12)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Conjugate of α (derived when omitted)
    #[arg(long)]
    pub beta: Option<f64>,
    /// ‖g′‖_∞ on [a,b]
    #[arg(long)]
    pub ginf: Option<f64>,
    /// ‖g′‖_p on [a,b]
    #[arg(long)]
    pub gp: Option<f64>,
    /// ‖g′‖₁ on [a,b]
    #[arg(long)]
    pub g1: Option<f64>,
    /// ‖g′‖₂ on [a,b]
    #[arg(long)]
    pub g2: Option<f64>,
    /// ‖f′‖_∞ on [a,b]
    #[arg(long)]
    pub finf: Option<f64>,
    /// ‖f′‖_p on [a,b]
    #[arg(long)]
    pub fp: Option<f64>,
    /// ‖f′‖₁ on [a,b]
    #[arg(long)]
    pub f1: Option<f64>,
    /// ‖f′‖₂ on [a,b]
    #[arg(long)]
    pub f2: Option<f64>,
    /// ‖f′‖_α on [a,b] (thm4.5.12)
    #[arg(long = "f-alpha")]
    pub f_alpha: Option<f64>,
    /// Lower bound of f (Ostrowski-type case)
    #[arg(long)]
    pub m: Option<f64>,
    /// Upper bound of f
    #[arg(long = "M")]
    pub big_m: Option<f64>,
    /// Lower bound of f (Grüss case)
    #[arg(long)]
    pub m1: Option<f64>,
    /// Upper bound of f (Grüss case)
    #[arg(long = "M1")]
    pub big_m1: Option<f64>,
    /// Lower bound of g (Grüss case)
    #[arg(long)]
    pub m2: Option<f64>,
    /// Upper bound of g (Grüss case)
    #[arg(long = "M2")]
    pub big_m2: Option<f64>,
    /// g(a), g(u), g(v), g(b) for the monotone-g bound
    #[arg(long)]
    pub ga: Option<f64>,
    #[arg(long)]
    pub gu: Option<f64>,
    #[arg(long)]
    pub gv: Option<f64>,
    #[arg(long)]
    pub gb: Option<f64>,
    /// g((a+b)/2) for the monotone midpoint corollary
    #[arg(long)]
    pub gmid: Option<f64>,
    /// f(a), f(b), f(s₀) for the monotone mean-difference case
    #[arg(long)]
    pub fa: Option<f64>,
    #[arg(long)]
    pub fb: Option<f64>,
    #[arg(long)]
    pub fs0: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    #[default]
    Jsonl,
    Csv,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON file with RunConfig fields; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Corpus size
    #[arg(long)]
    pub entries: Option<usize>,
    /// Interval configurations per entry
    #[arg(long)]
    pub cfgs: Option<usize>,
    /// Quadrature tolerance for left-hand sides
    #[arg(long)]
    pub tol: Option<f64>,
    /// Record file path
    #[arg(long, default_value = "cheb-records.jsonl")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub format: OutFormat,
    /// Debug: multiply every RHS before comparing (below 1 forces
    /// violations)
    #[arg(long = "scale-rhs")]
    pub scale_rhs: Option<f64>,
    /// Sweep the nested-interval variant
    #[arg(long)]
    pub nested: bool,
    /// Comma-separated families (polynomial, trig, step, pwl, holder-root)
    #[arg(long, value_delimiter = ',')]
    pub families: Option<Vec<String>>,
    /// Comma-separated theorem ids or prefixes (e.g. thm4.5.1,cer4.3.4)
    #[arg(long, value_delimiter = ',')]
    pub theorems: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSONL record file produced by `verify`
    #[arg(long)]
    pub records: PathBuf,
}

/// Parse the process arguments, dispatch, and map errors to exit code 2.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn cmd_eval(args: EvalArgs) -> anyhow::Result<i32> {
    if !(args.a < args.b) {
        bail!("degenerate interval [{}, {}]: need a < b", args.a, args.b);
    }
    let f = FunctionSpec::parse(&args.f, (args.a, args.b))
        .with_context(|| format!("parsing f = {:?}", args.f))?;
    let g = FunctionSpec::parse(&args.g, (args.a, args.b))
        .with_context(|| format!("parsing g = {:?}", args.g))?;
    let t = functional::chebyshev_functional(&f, &g, args.a, args.b, args.tol)?;
    println!(
        "T[{}, {}]({}, {}) = {:?} ± {:.3e}  ({} evals)",
        args.a, args.b, args.f, args.g, t.value, t.err_est, t.evals
    );
    match (args.u, args.v) {
        (Some(u), Some(v)) => {
            let mode = if args.nested {
                IntervalMode::Nested
            } else {
                IntervalMode::Overlap
            };
            let cfg = IntervalConfig::new(args.a, u, v, args.b, mode)?;
            let ((llo, lhi), (rlo, rhi)) = cfg.sides();
            let d = functional::functional_difference(&f, &g, &cfg, args.tol)?;
            println!("T[{llo}, {lhi}] = {:?} ± {:.3e}", d.t_left.value, d.t_left.err_est);
            println!("T[{rlo}, {rhi}] = {:?} ± {:.3e}", d.t_right.value, d.t_right.err_est);
            println!("|difference| = {:?} ± {:.3e}", d.diff_abs, d.err_est);
        }
        (None, None) => {}
        _ => bail!("--u and --v must be given together"),
    }
    Ok(0)
}

fn cmd_bound(args: BoundArgs) -> anyhow::Result<i32> {
    if !(args.a < args.b) {
        bail!("degenerate interval [{}, {}]: need a < b", args.a, args.b);
    }
    let mid = 0.5 * (args.a + args.b);
    let u = args.u.unwrap_or(mid);
    let v = args.v.unwrap_or(mid);
    let mode = if args.nested {
        IntervalMode::Nested
    } else {
        IntervalMode::Overlap
    };
    let cfg = IntervalConfig::new(args.a, u, v, args.b, mode)?;

    let f_range = match (args.m1, args.big_m1, args.m, args.big_m) {
        (Some(m), Some(mm), _, _) => Some((m, mm)),
        (_, _, Some(m), Some(mm)) => Some((m, mm)),
        _ => None,
    };
    let g_range = match (args.m2, args.big_m2) {
        (Some(m), Some(mm)) => Some((m, mm)),
        _ => None,
    };
    let g_at = match (args.ga, args.gu, args.gv, args.gb) {
        (Some(ga), Some(gu), Some(gv), Some(gb)) => Some((ga, gu, gv, gb)),
        // the midpoint corollary only consumes the endpoint values
        (Some(ga), None, None, Some(gb)) => Some((ga, ga, gb, gb)),
        _ => None,
    };
    let f_values = match (args.fa, args.fb, args.fs0) {
        (Some(fa), Some(fb), Some(fs0)) => Some((fa, fb, fs0)),
        _ => None,
    };
    let params = BoundParams {
        variation: args.variation,
        lipschitz: args.lipschitz,
        holder_h: args.holder,
        p: args.p,
        q: args.q,
        alpha: args.alpha,
        beta: args.beta,
        g_inf: args.ginf,
        g_p: args.gp,
        g_1: args.g1,
        g_2: args.g2,
        f_inf: args.finf,
        f_p: args.fp,
        f_1: args.f1,
        f_2: args.f2,
        f_alpha: args.f_alpha,
        f_range,
        g_range,
        g_at,
        g_mid: args.gmid,
        f_values,
    };
    let res = match bounds::evaluate_bound(&args.theorem, &cfg, &params) {
        Ok(res) => res,
        Err(BoundError::NotConstantBased(id)) => {
            bail!(
                "'{id}' bounds by functional values, not constants; use \
                 `cheb eval` for the functionals or `cheb verify` to check it"
            )
        }
        Err(e) => return Err(e.into()),
    };
    println!("{} = {:?}", res.theorem, res.rhs);
    let inputs = res
        .inputs
        .iter()
        .map(|(k, val)| format!("{k} = {val:?}"))
        .collect::<Vec<_>>()
        .join(", ");
    println!("  inputs: {inputs}");
    println!("  preconditions_ok: {}", res.preconditions_ok);
    for note in &res.notes {
        println!("  note: {note}");
    }
    Ok(0)
}

fn load_config(path: &PathBuf) -> anyhow::Result<RunConfig> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let rc: RunConfig = serde_json::from_reader(BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(rc)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<i32> {
    let mut rc = match &args.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        rc.seed = seed;
    }
    if let Some(entries) = args.entries {
        rc.entries = entries;
    }
    if let Some(cfgs) = args.cfgs {
        rc.cfgs_per_entry = cfgs;
    }
    if let Some(tol) = args.tol {
        rc.tol = tol;
    }
    if let Some(scale) = args.scale_rhs {
        rc.scale_rhs = scale;
    }
    if args.nested {
        rc.nested = true;
    }
    if let Some(families) = &args.families {
        rc.families = families
            .iter()
            .map(|s| s.parse::<Family>())
            .collect::<Result<Vec<_>, _>>()?;
    }
    if let Some(theorems) = &args.theorems {
        rc.theorems = Some(theorems.clone());
    }

    let outcome = verify::sweep(&rc)?;
    let file = File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    match args.format {
        OutFormat::Jsonl => verify::write_jsonl(&mut w, &outcome.records)?,
        OutFormat::Csv => verify::write_csv(&mut w, &outcome.records)?,
    }
    w.flush()?;

    let stats = verify::tightness_report(&outcome.records);
    print!("{}", verify::format_report(&stats));
    println!(
        "{} records ({} certified violations) -> {}",
        outcome.records.len(),
        outcome.violations,
        args.out.display()
    );
    Ok(if outcome.violations == 0 { 0 } else { 1 })
}

fn cmd_report(args: ReportArgs) -> anyhow::Result<i32> {
    let file = File::open(&args.records)
        .with_context(|| format!("opening {}", args.records.display()))?;
    let records = verify::read_jsonl(BufReader::new(file))?;
    if records.is_empty() {
        bail!("{} contains no records", args.records.display());
    }
    let stats = verify::tightness_report(&records);
    print!("{}", verify::format_report(&stats));
    let violations = verify::count_violations(&records);
    println!("{} records ({violations} certified violations)", records.len());
    Ok(if violations == 0 { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_flags_parse() {
        let cli = Cli::try_parse_from([
            "cheb",
            "bound",
            "thm4.5.7/Linf",
            "--L",
            "1",
            "--ginf",
            "1",
            "--a",
            "0",
            "--u",
            "0.5",
            "--v",
            "0.5",
            "--b",
            "1",
        ])
        .unwrap();
        match cli.command {
            Command::Bound(b) => {
                assert_eq!(b.theorem, "thm4.5.7/Linf");
                assert_eq!(b.lipschitz, Some(1.0));
                assert_eq!(b.ginf, Some(1.0));
                assert_eq!(b.u, Some(0.5));
            }
            _ => panic!("expected bound"),
        }
    }

    #[test]
    fn upper_and_lowercase_range_flags_coexist() {
        let cli = Cli::try_parse_from([
            "cheb", "bound", "thm1/gruss", "--a", "0", "--b", "1", "--m1", "-1", "--M1",
            "1", "--m2", "-1", "--M2", "1",
        ])
        .unwrap();
        match cli.command {
            Command::Bound(b) => {
                assert_eq!(b.m1, Some(-1.0));
                assert_eq!(b.big_m1, Some(1.0));
            }
            _ => panic!("expected bound"),
        }
    }

    #[test]
    fn verify_flags_parse_with_lists() {
        let cli = Cli::try_parse_from([
            "cheb",
            "verify",
            "--seed",
            "7",
            "--entries",
            "3",
            "--cfgs",
            "2",
            "--format",
            "csv",
            "--families",
            "polynomial,step",
            "--theorems",
            "thm4.5.1,eq2.1",
            "--scale-rhs",
            "0.5",
        ])
        .unwrap();
        match cli.command {
            Command::Verify(v) => {
                assert_eq!(v.seed, Some(7));
                assert_eq!(v.format, OutFormat::Csv);
                assert_eq!(v.families.as_deref(), Some(&["polynomial".to_string(), "step".to_string()][..]));
                assert_eq!(v.scale_rhs, Some(0.5));
            }
            _ => panic!("expected verify"),
        }
    }

    #[test]
    fn eval_positional_parse() {
        let cli = Cli::try_parse_from(["cheb", "eval", "x", "x^2", "0", "1"]).unwrap();
        match cli.command {
            Command::Eval(e) => {
                assert_eq!(e.f, "x");
                assert_eq!(e.g, "x^2");
                assert_eq!(e.a, 0.0);
                assert_eq!(e.b, 1.0);
                assert!(e.u.is_none());
            }
            _ => panic!("expected eval"),
        }
    }
}
