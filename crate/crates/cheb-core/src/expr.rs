//! Expression trees for real functions of one variable `x`.
//!
//! The surface syntax is a small, fixed grammar:
//!
//! ```text
//! source    := piecewise | expr
//! piecewise := "piecewise" "(" ( "(" cond "," expr ")" "," )+ expr ")"
//! cond      := "x" ("<" | "<=") number
//! expr      := term  (("+" | "-") term)*
//! term      := factor (("*" | "/") factor)*
//! factor    := unary ("^" factor)?
//! unary     := ["-"] atom
//! atom      := number | "x" | fn "(" expr ")" | "(" expr ")"
//! fn        := "sin" | "cos" | "exp" | "log" | "abs" | "sign" | "sqrt"
//! ```
//!
//! Numbers are unsigned decimal literals with an optional fractional part
//! and optional exponent (`2`, `0.5`, `1e-3`). `log` is the natural
//! logarithm and `sign(0) = 0`. Note that the grammar binds `^` tighter
//! than unary minus, so `-x^2` parses as `(-x)^2`.
//!
//! `piecewise` is only allowed as the outermost form. Branch conditions are
//! tested in order; the trailing expression is the fallback.

use std::fmt;

use thiserror::Error;

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sign,
    Sqrt,
}

impl UnaryFn {
    pub fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Log => "log",
            UnaryFn::Abs => "abs",
            UnaryFn::Sign => "sign",
            UnaryFn::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "exp" => UnaryFn::Exp,
            "log" => UnaryFn::Log,
            "abs" => UnaryFn::Abs,
            "sign" => UnaryFn::Sign,
            "sqrt" => UnaryFn::Sqrt,
            _ => return None,
        })
    }

    pub fn apply(self, v: f64) -> f64 {
        match self {
            UnaryFn::Sin => v.sin(),
            UnaryFn::Cos => v.cos(),
            UnaryFn::Exp => v.exp(),
            UnaryFn::Log => v.ln(),
            UnaryFn::Abs => v.abs(),
            UnaryFn::Sign => {
                if v == 0.0 {
                    0.0
                } else if v.is_nan() {
                    f64::NAN
                } else {
                    v.signum()
                }
            }
            UnaryFn::Sqrt => v.sqrt(),
        }
    }
}

/// Comparison operator in a piecewise branch condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
}

/// One piecewise branch: `x < threshold` (or `<=`) guarding an expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub op: CmpOp,
    pub threshold: f64,
    pub body: Expr,
}

/// A parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(UnaryFn, Box<Expr>),
    Piecewise {
        branches: Vec<Branch>,
        otherwise: Box<Expr>,
    },
}

/// Result of scanning an expression for breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointScan {
    /// Interior breakpoint locations, sorted and deduplicated.
    pub points: Vec<f64>,
    /// `abs` with a non-affine argument: continuity holds but kink
    /// locations are unknown.
    pub unlocated_kinks: bool,
    /// `sign` with a non-affine argument: possible jumps at unknown points.
    pub unlocated_jumps: bool,
}

/// Parse failure with a 1-based byte offset into the source.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Why an expression could not be differentiated symbolically.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    /// `abs`/`sign` argument is not affine in `x`, so its breakpoints are
    /// not determinable and the piecewise derivative cannot be formed.
    #[error("cannot differentiate {func}({arg}): argument is not affine in x")]
    NonAffineArg { func: &'static str, arg: String },
    /// `u^v` with both base and exponent depending on `x`.
    #[error("cannot differentiate general power {0}: exponent and base both depend on x")]
    GeneralPower(String),
}

// ---------------------------------------------------------------------------
// Construction helpers (light constant folding keeps derivatives readable).
// ---------------------------------------------------------------------------

pub fn num(v: f64) -> Expr {
    if v < 0.0 {
        Expr::Neg(Box::new(Expr::Num(-v)))
    } else {
        Expr::Num(v)
    }
}

pub fn var() -> Expr {
    Expr::Var
}

pub fn neg(e: Expr) -> Expr {
    match e {
        Expr::Num(v) if v == 0.0 => Expr::Num(0.0),
        Expr::Neg(inner) => *inner,
        e => Expr::Neg(Box::new(e)),
    }
}

pub fn add(l: Expr, r: Expr) -> Expr {
    match (l, r) {
        (Expr::Num(a), Expr::Num(b)) => Expr::Num(a + b),
        (Expr::Num(z), r) if z == 0.0 => r,
        (l, Expr::Num(z)) if z == 0.0 => l,
        (l, Expr::Neg(r)) => sub(l, *r),
        (l, r) => Expr::Add(Box::new(l), Box::new(r)),
    }
}

pub fn sub(l: Expr, r: Expr) -> Expr {
    match (l, r) {
        (Expr::Num(a), Expr::Num(b)) => num(a - b),
        (l, Expr::Num(z)) if z == 0.0 => l,
        (Expr::Num(z), r) if z == 0.0 => neg(r),
        (l, r) => Expr::Sub(Box::new(l), Box::new(r)),
    }
}

pub fn mul(l: Expr, r: Expr) -> Expr {
    match (l, r) {
        (Expr::Num(a), Expr::Num(b)) => num(a * b),
        (Expr::Num(z), _) | (_, Expr::Num(z)) if z == 0.0 => Expr::Num(0.0),
        (Expr::Num(o), r) if o == 1.0 => r,
        (l, Expr::Num(o)) if o == 1.0 => l,
        (l, r) => Expr::Mul(Box::new(l), Box::new(r)),
    }
}

pub fn div(l: Expr, r: Expr) -> Expr {
    match (l, r) {
        (l, Expr::Num(o)) if o == 1.0 => l,
        (Expr::Num(z), r) if z == 0.0 && !matches!(r, Expr::Num(n) if n == 0.0) => Expr::Num(0.0),
        (l, r) => Expr::Div(Box::new(l), Box::new(r)),
    }
}

pub fn pow(base: Expr, exponent: Expr) -> Expr {
    match (&base, &exponent) {
        (_, Expr::Num(o)) if *o == 1.0 => base,
        (_, Expr::Num(z)) if *z == 0.0 => Expr::Num(1.0),
        _ => Expr::Pow(Box::new(base), Box::new(exponent)),
    }
}

pub fn call(f: UnaryFn, arg: Expr) -> Expr {
    Expr::Call(f, Box::new(arg))
}

impl Expr {
    /// Parse source text per the module grammar.
    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        Parser::new(src).parse_source()
    }

    /// Evaluate at `x`. Domain faults (e.g. `log` of a negative number)
    /// surface as NaN; [`crate::func::FunctionSpec`] screens for them at
    /// construction time.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => x,
            Expr::Neg(e) => -e.eval(x),
            Expr::Add(l, r) => l.eval(x) + r.eval(x),
            Expr::Sub(l, r) => l.eval(x) - r.eval(x),
            Expr::Mul(l, r) => l.eval(x) * r.eval(x),
            Expr::Div(l, r) => l.eval(x) / r.eval(x),
            Expr::Pow(l, r) => l.eval(x).powf(r.eval(x)),
            Expr::Call(f, e) => f.apply(e.eval(x)),
            Expr::Piecewise { branches, otherwise } => {
                for br in branches {
                    let hit = match br.op {
                        CmpOp::Lt => x < br.threshold,
                        CmpOp::Le => x <= br.threshold,
                    };
                    if hit {
                        return br.body.eval(x);
                    }
                }
                otherwise.eval(x)
            }
        }
    }

    /// True if the subtree does not reference `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_constant(),
            Expr::Add(l, r)
            | Expr::Sub(l, r)
            | Expr::Mul(l, r)
            | Expr::Div(l, r)
            | Expr::Pow(l, r) => l.is_constant() && r.is_constant(),
            Expr::Piecewise { .. } => false,
        }
    }

    /// Decompose as `slope * x + intercept` if the subtree is affine in `x`.
    pub fn as_affine(&self) -> Option<(f64, f64)> {
        match self {
            Expr::Num(v) => Some((0.0, *v)),
            Expr::Var => Some((1.0, 0.0)),
            Expr::Neg(e) => e.as_affine().map(|(s, i)| (-s, -i)),
            Expr::Add(l, r) => {
                let (ls, li) = l.as_affine()?;
                let (rs, ri) = r.as_affine()?;
                Some((ls + rs, li + ri))
            }
            Expr::Sub(l, r) => {
                let (ls, li) = l.as_affine()?;
                let (rs, ri) = r.as_affine()?;
                Some((ls - rs, li - ri))
            }
            Expr::Mul(l, r) => {
                let (ls, li) = l.as_affine()?;
                let (rs, ri) = r.as_affine()?;
                if ls == 0.0 {
                    Some((li * rs, li * ri))
                } else if rs == 0.0 {
                    Some((ls * ri, li * ri))
                } else {
                    None
                }
            }
            Expr::Div(l, r) => {
                let (ls, li) = l.as_affine()?;
                let (rs, ri) = r.as_affine()?;
                if rs == 0.0 && ri != 0.0 {
                    Some((ls / ri, li / ri))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Symbolic derivative. Powers need a constant exponent or a constant
    /// base; `abs`/`sign` need affine arguments so their breakpoints are
    /// known (the result is then the a.e. derivative).
    pub fn differentiate(&self) -> Result<Expr, DiffError> {
        Ok(match self {
            Expr::Num(_) => Expr::Num(0.0),
            Expr::Var => Expr::Num(1.0),
            Expr::Neg(e) => neg(e.differentiate()?),
            Expr::Add(l, r) => add(l.differentiate()?, r.differentiate()?),
            Expr::Sub(l, r) => sub(l.differentiate()?, r.differentiate()?),
            Expr::Mul(l, r) => add(
                mul(l.differentiate()?, (**r).clone()),
                mul((**l).clone(), r.differentiate()?),
            ),
            Expr::Div(l, r) => div(
                sub(
                    mul(l.differentiate()?, (**r).clone()),
                    mul((**l).clone(), r.differentiate()?),
                ),
                pow((**r).clone(), num(2.0)),
            ),
            Expr::Pow(base, exponent) => {
                if exponent.is_constant() {
                    let c = exponent.eval(0.0);
                    mul(
                        mul(num(c), pow((**base).clone(), num(c - 1.0))),
                        base.differentiate()?,
                    )
                } else if base.is_constant() {
                    let c = base.eval(0.0);
                    mul(
                        mul((*self).clone(), num(c.ln())),
                        exponent.differentiate()?,
                    )
                } else {
                    return Err(DiffError::GeneralPower(self.to_string()));
                }
            }
            Expr::Call(f, arg) => {
                let d_arg = || arg.differentiate();
                match f {
                    UnaryFn::Sin => mul(call(UnaryFn::Cos, (**arg).clone()), d_arg()?),
                    UnaryFn::Cos => neg(mul(call(UnaryFn::Sin, (**arg).clone()), d_arg()?)),
                    UnaryFn::Exp => mul((*self).clone(), d_arg()?),
                    UnaryFn::Log => div(d_arg()?, (**arg).clone()),
                    UnaryFn::Sqrt => div(d_arg()?, mul(num(2.0), (*self).clone())),
                    UnaryFn::Abs => {
                        if arg.as_affine().is_none() {
                            return Err(DiffError::NonAffineArg {
                                func: "abs",
                                arg: arg.to_string(),
                            });
                        }
                        // a.e. derivative; the kink is a declared breakpoint
                        mul(call(UnaryFn::Sign, (**arg).clone()), d_arg()?)
                    }
                    UnaryFn::Sign => {
                        if arg.as_affine().is_none() {
                            return Err(DiffError::NonAffineArg {
                                func: "sign",
                                arg: arg.to_string(),
                            });
                        }
                        // zero a.e.; the jump itself is a declared breakpoint
                        Expr::Num(0.0)
                    }
                }
            }
            Expr::Piecewise { branches, otherwise } => Expr::Piecewise {
                branches: branches
                    .iter()
                    .map(|b| {
                        Ok(Branch {
                            op: b.op,
                            threshold: b.threshold,
                            body: b.body.differentiate()?,
                        })
                    })
                    .collect::<Result<_, DiffError>>()?,
                otherwise: Box::new(otherwise.differentiate()?),
            },
        })
    }

    /// Locations where the function may kink or jump: roots of affine
    /// `abs`/`sign` arguments and piecewise thresholds, restricted to the
    /// open interval. The flag reports `abs`/`sign` nodes whose argument is
    /// not affine, i.e. whose breakpoints could not be located.
    pub fn breakpoints(&self, lo: f64, hi: f64) -> (Vec<f64>, bool) {
        let scan = self.scan_breakpoints(lo, hi);
        (scan.points, scan.unlocated_kinks || scan.unlocated_jumps)
    }

    /// Like [`Expr::breakpoints`] but distinguishes unlocatable kinks
    /// (`abs` of a non-affine argument, which keeps the function continuous)
    /// from unlocatable jumps (`sign` of a non-affine argument).
    pub fn scan_breakpoints(&self, lo: f64, hi: f64) -> BreakpointScan {
        let mut scan = BreakpointScan {
            points: Vec::new(),
            unlocated_kinks: false,
            unlocated_jumps: false,
        };
        self.collect_breakpoints(lo, hi, &mut scan);
        scan.points.sort_by(f64::total_cmp);
        scan.points.dedup();
        scan
    }

    fn collect_breakpoints(&self, lo: f64, hi: f64, scan: &mut BreakpointScan) {
        match self {
            Expr::Num(_) | Expr::Var => {}
            Expr::Neg(e) => e.collect_breakpoints(lo, hi, scan),
            Expr::Add(l, r)
            | Expr::Sub(l, r)
            | Expr::Mul(l, r)
            | Expr::Div(l, r)
            | Expr::Pow(l, r) => {
                l.collect_breakpoints(lo, hi, scan);
                r.collect_breakpoints(lo, hi, scan);
            }
            Expr::Call(f, arg) => {
                if matches!(f, UnaryFn::Abs | UnaryFn::Sign) {
                    match arg.as_affine() {
                        Some((s, i)) if s != 0.0 => {
                            let root = -i / s;
                            if root > lo && root < hi {
                                scan.points.push(root);
                            }
                        }
                        Some(_) => {} // constant argument: no breakpoint
                        None => {
                            if *f == UnaryFn::Sign {
                                scan.unlocated_jumps = true;
                            } else {
                                scan.unlocated_kinks = true;
                            }
                        }
                    }
                }
                arg.collect_breakpoints(lo, hi, scan);
            }
            Expr::Piecewise { branches, otherwise } => {
                for b in branches {
                    if b.threshold > lo && b.threshold < hi {
                        scan.points.push(b.threshold);
                    }
                    b.body.collect_breakpoints(lo, hi, scan);
                }
                otherwise.collect_breakpoints(lo, hi, scan);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Pretty-printing. Output re-parses to a structurally identical tree.
// ---------------------------------------------------------------------------

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Piecewise { branches, otherwise } => {
                write!(f, "piecewise(")?;
                for b in branches {
                    let op = match b.op {
                        CmpOp::Lt => "<",
                        CmpOp::Le => "<=",
                    };
                    write!(f, "(x{}{}, {}), ", op, fmt_num(b.threshold), b.body)?;
                }
                write!(f, "{})", otherwise)
            }
            _ => self.fmt_prec(f, 0),
        }
    }
}

fn fmt_num(v: f64) -> String {
    if v < 0.0 {
        format!("-{}", -v)
    } else {
        format!("{}", v)
    }
}

impl Expr {
    // Precedence: 1 add/sub, 2 mul/div, 3 unary minus, 4 pow, 5 atoms.
    // `prec` is the minimum level printable without parentheses.
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let my_prec = match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        };
        let parens = my_prec < prec;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(v) => write!(f, "{}", v)?,
            Expr::Var => write!(f, "x")?,
            Expr::Neg(e) => {
                write!(f, "-")?;
                // unary applies to an atom; anything looser needs parens
                e.fmt_prec(f, 5)?;
            }
            Expr::Add(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, "+")?;
                r.fmt_prec(f, 2)?; // left-assoc: a-(b+c) keeps parens
            }
            Expr::Sub(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, "-")?;
                r.fmt_prec(f, 2)?;
            }
            Expr::Mul(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, "*")?;
                r.fmt_prec(f, 3)?;
            }
            Expr::Div(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, "/")?;
                r.fmt_prec(f, 3)?;
            }
            Expr::Pow(l, r) => {
                // base must sit at unary level; exponent is a factor (right-assoc)
                l.fmt_prec(f, 5)?;
                write!(f, "^")?;
                r.fmt_prec(f, 3)?;
            }
            Expr::Call(func, arg) => {
                write!(f, "{}(", func.name())?;
                arg.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            Expr::Piecewise { .. } => unreachable!("piecewise is top-level only"),
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Tokenizer and recursive-descent parser.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Lt,
    Le,
}

struct Parser {
    toks: Vec<(Tok, usize)>, // token + 1-based source offset
    pos: usize,
    end_offset: usize, // offset just past the last byte, 1-based
}

impl Parser {
    fn new(src: &str) -> Self {
        let mut toks = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let start = i + 1; // 1-based
            match c {
                ' ' | '\t' | '\n' | '\r' => {
                    i += 1;
                    continue;
                }
                '(' => toks.push((Tok::LParen, start)),
                ')' => toks.push((Tok::RParen, start)),
                ',' => toks.push((Tok::Comma, start)),
                '+' => toks.push((Tok::Plus, start)),
                '-' => toks.push((Tok::Minus, start)),
                '*' => toks.push((Tok::Star, start)),
                '/' => toks.push((Tok::Slash, start)),
                '^' => toks.push((Tok::Caret, start)),
                '<' => {
                    if bytes.get(i + 1) == Some(&b'=') {
                        toks.push((Tok::Le, start));
                        i += 2;
                        continue;
                    }
                    toks.push((Tok::Lt, start));
                }
                '0'..='9' => {
                    let mut j = i;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j] == b'.' {
                        j += 1;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                    if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                        let mut k = j + 1;
                        if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                            k += 1;
                        }
                        if k < bytes.len() && bytes[k].is_ascii_digit() {
                            j = k;
                            while j < bytes.len() && bytes[j].is_ascii_digit() {
                                j += 1;
                            }
                        }
                    }
                    let text = &src[i..j];
                    match text.parse::<f64>() {
                        Ok(v) => toks.push((Tok::Num(v), start)),
                        Err(_) => {
                            toks.push((Tok::Ident(text.to_string()), start));
                        }
                    }
                    i = j;
                    continue;
                }
                'a'..='z' | 'A'..='Z' | '_' => {
                    let mut j = i;
                    while j < bytes.len()
                        && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    toks.push((Tok::Ident(src[i..j].to_string()), start));
                    i = j;
                    continue;
                }
                other => {
                    // lex errors surface as an identifier token the parser rejects
                    toks.push((Tok::Ident(other.to_string()), start));
                }
            }
            i += 1;
        }
        Parser {
            toks,
            pos: 0,
            end_offset: src.len() + 1,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, o)| o)
            .unwrap_or(self.end_offset)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {}", what))
        }
    }

    fn parse_source(&mut self) -> Result<Expr, ParseError> {
        let expr = if matches!(self.peek(), Some(Tok::Ident(id)) if id == "piecewise") {
            self.bump();
            self.parse_piecewise()?
        } else {
            self.parse_expr()?
        };
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(expr)
    }

    fn parse_piecewise(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen, "'(' after piecewise")?;
        let mut branches = Vec::new();
        let otherwise;
        loop {
            if self.peek() == Some(&Tok::LParen) && self.branch_ahead() {
                self.bump();
                branches.push(self.parse_branch()?);
                self.expect(Tok::Comma, "',' between piecewise arms")?;
            } else {
                otherwise = self.parse_expr()?;
                break;
            }
        }
        if branches.is_empty() {
            return self.err("piecewise requires at least one (condition, expression) arm");
        }
        self.expect(Tok::RParen, "')' closing piecewise")?;
        Ok(Expr::Piecewise {
            branches,
            otherwise: Box::new(otherwise),
        })
    }

    /// After a '(': does `x <`/`x <=` follow, i.e. a branch rather than a
    /// parenthesized fallback expression?
    fn branch_ahead(&self) -> bool {
        matches!(self.toks.get(self.pos + 1), Some((Tok::Ident(id), _)) if id == "x")
            && matches!(
                self.toks.get(self.pos + 2),
                Some((Tok::Lt, _)) | Some((Tok::Le, _))
            )
    }

    fn parse_branch(&mut self) -> Result<Branch, ParseError> {
        match self.bump() {
            Some(Tok::Ident(id)) if id == "x" => {}
            _ => return self.err("expected 'x' in piecewise condition"),
        }
        let op = match self.bump() {
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Le) => CmpOp::Le,
            _ => return self.err("expected '<' or '<=' in piecewise condition"),
        };
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let threshold = match self.bump() {
            Some(Tok::Num(v)) => {
                if negative {
                    -v
                } else {
                    v
                }
            }
            _ => return self.err("expected number after comparison"),
        };
        self.expect(Tok::Comma, "',' after piecewise condition")?;
        let body = self.parse_expr()?;
        self.expect(Tok::RParen, "')' closing piecewise arm")?;
        Ok(Branch {
            op,
            threshold,
            body,
        })
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_unary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let exponent = self.parse_factor()?; // right-associative
            Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            let atom = self.parse_atom()?;
            Ok(Expr::Neg(Box::new(atom)))
        } else {
            self.parse_atom()
        }
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.bump();
                Ok(Expr::Num(v))
            }
            Some(Tok::Ident(id)) => {
                if id == "x" {
                    self.bump();
                    return Ok(Expr::Var);
                }
                if id == "piecewise" {
                    return self.err("piecewise is only allowed at the top level");
                }
                match UnaryFn::from_name(&id) {
                    Some(f) => {
                        self.bump();
                        self.expect(Tok::LParen, "'(' after function name")?;
                        let arg = self.parse_expr()?;
                        self.expect(Tok::RParen, "')' closing function argument")?;
                        Ok(Expr::Call(f, Box::new(arg)))
                    }
                    None => self.err(format!("unknown identifier '{}'", id)),
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => self.err("expected a number, 'x', a function call, or '('"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> Expr {
        Expr::parse(src).unwrap()
    }

    #[test]
    fn parses_precedence() {
        // 1 + 2*3^2 = 19
        assert_eq!(p("1+2*3^2").eval(0.0), 19.0);
        // left-assoc subtraction: 5-2-1 = 2
        assert_eq!(p("5-2-1").eval(0.0), 2.0);
        // right-assoc power: 2^3^2 = 512
        assert_eq!(p("2^3^2").eval(0.0), 512.0);
        // grammar quirk: -x^2 is (-x)^2
        assert_eq!(p("-x^2").eval(3.0), 9.0);
        assert_eq!(p("-(x^2)").eval(3.0), -9.0);
    }

    #[test]
    fn parses_numbers() {
        assert_eq!(p("0.5").eval(0.0), 0.5);
        assert_eq!(p("1e-3").eval(0.0), 1e-3);
        assert_eq!(p("2.5E+2").eval(0.0), 250.0);
    }

    #[test]
    fn evaluates_functions() {
        assert!((p("sin(x)").eval(1.0) - 1.0f64.sin()).abs() < 1e-15);
        assert_eq!(p("abs(x-0.5)").eval(0.25), 0.25);
        assert_eq!(p("sign(x-0.5)").eval(0.5), 0.0);
        assert_eq!(p("sign(x-0.5)").eval(0.75), 1.0);
        assert_eq!(p("sign(x-0.5)").eval(0.25), -1.0);
        assert_eq!(p("sqrt(x)").eval(4.0), 2.0);
        assert!((p("log(exp(x))").eval(2.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn evaluates_piecewise() {
        let e = p("piecewise((x<0.5, 0), 1)");
        assert_eq!(e.eval(0.25), 0.0);
        assert_eq!(e.eval(0.5), 1.0);
        assert_eq!(e.eval(0.75), 1.0);
        let e = p("piecewise((x<=0.5, x), (x<0.75, 2*x), 3)");
        assert_eq!(e.eval(0.5), 0.5);
        assert_eq!(e.eval(0.6), 1.2);
        assert_eq!(e.eval(0.9), 3.0);
    }

    #[test]
    fn reports_error_offsets() {
        let err = Expr::parse("sin(3*x").unwrap_err();
        assert_eq!(err.offset, 8); // one past the end: missing ')'
        let err = Expr::parse("x + * 2").unwrap_err();
        assert_eq!(err.offset, 5);
        let err = Expr::parse("foo(x)").unwrap_err();
        assert_eq!(err.offset, 1);
        assert!(err.to_string().contains("unknown identifier"));
        let err = Expr::parse("1 + piecewise((x<0, 1), 2)").unwrap_err();
        assert!(err.to_string().contains("top level"));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "x^2-0.5*x",
            "1+2*3^2",
            "5-2-1",
            "-x^2",
            "-(x^2+1)",
            "2^3^2",
            "sin(3*x)*exp(-(x^2))",
            "x/(1+x)",
            "abs(x-0.5)+0.25*sign(x-0.75)",
            "piecewise((x<0.5, 0), 1)",
            "piecewise((x<=0.25, x^2), (x<0.75, 1-x), sqrt(x))",
            "piecewise((x<-0.5, 0), 1)",
            "(x+1)*(x-1)",
            "x-(1-x)",
        ] {
            let tree = p(src);
            let printed = tree.to_string();
            let reparsed = Expr::parse(&printed)
                .unwrap_or_else(|e| panic!("reparse of {:?} failed: {}", printed, e));
            assert_eq!(tree, reparsed, "round-trip mismatch for {:?}", src);
        }
    }

    #[test]
    fn differentiates_products_and_chains() {
        // d/dx [x^2 sin x] = 2x sin x + x^2 cos x
        let d = p("x^2*sin(x)").differentiate().unwrap();
        for &t in &[0.1f64, 0.7, 1.3, 2.9] {
            let want = 2.0 * t * t.sin() + t * t * t.cos();
            assert!((d.eval(t) - want).abs() < 1e-12, "at {}", t);
        }
        // d/dx abs(x - 0.5) = sign(x - 0.5)
        let d = p("abs(x-0.5)").differentiate().unwrap();
        assert_eq!(d.eval(0.25), -1.0);
        assert_eq!(d.eval(0.75), 1.0);
        // quotient rule
        let d = p("x/(1+x)").differentiate().unwrap();
        for &t in &[0.0f64, 0.5, 2.0] {
            let want = 1.0 / (1.0 + t).powi(2);
            assert!((d.eval(t) - want).abs() < 1e-12);
        }
    }

    #[test]
    fn differentiate_rejects_unknown_breakpoints() {
        assert!(matches!(
            p("abs(x^2-0.25)").differentiate(),
            Err(DiffError::NonAffineArg { func: "abs", .. })
        ));
        assert!(matches!(
            p("x^x").differentiate(),
            Err(DiffError::GeneralPower(_))
        ));
    }

    #[test]
    fn finds_breakpoints() {
        let (pts, unlocated) = p("abs(x-0.5)+sign(2*x-0.5)").breakpoints(0.0, 1.0);
        assert_eq!(pts, vec![0.25, 0.5]);
        assert!(!unlocated);
        let (pts, unlocated) = p("abs(x^2-0.25)").breakpoints(0.0, 1.0);
        assert!(pts.is_empty());
        assert!(unlocated);
        let (pts, _) = p("piecewise((x<0.3, 0), 1)").breakpoints(0.0, 1.0);
        assert_eq!(pts, vec![0.3]);
        // breakpoints outside the open interval are dropped
        let (pts, _) = p("abs(x-2)").breakpoints(0.0, 1.0);
        assert!(pts.is_empty());
    }

    #[test]
    fn affine_detection() {
        assert_eq!(p("2*x-1").as_affine(), Some((2.0, -1.0)));
        assert_eq!(p("0.5*(x-0.25)").as_affine(), Some((0.5, -0.125)));
        assert_eq!(p("(x+1)/2").as_affine(), Some((0.5, 0.5)));
        assert_eq!(p("x*x").as_affine(), None);
        assert_eq!(p("sin(x)").as_affine(), None);
    }
}
