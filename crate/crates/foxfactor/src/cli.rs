//! Expression parser, formatter and the `foxf` command driver.
//!
//! Grammar (precedence `^` > `*` > `+`/`-`):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power ('*' power)*
//! power  := atom ('^' (['-'] int | '*' | '+'))*
//! atom   := int ['/' int] | 't' int | 'x' int | '(' expr ')'
//! ```
//!
//! `x_i` stands for `t_i - 1`. The postfix `^*` (Leavitt adjoint) is accepted on
//! `x_i` and on parenthesized products of `x`'s; `^+` is the quasi-inverse and is
//! only meaningful for `series-rational`.

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factor;
use crate::fox::{partial_derivative, DerivativeIndex};
use crate::lambda::FreePolynomial;
use crate::leavitt::{self, LeavittElement};
use crate::scalars::{FieldElem, FieldSpec};
use crate::series::{self, RationalRep, TruncatedSeries};
use crate::words::{Letter, ReducedWord, XMonomial};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigInt, BigInt),
    T(usize),
    X(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64, usize),
    Adjoint(Box<Expr>, usize),
    QuasiInverse(Box<Expr>, usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Gen(char, usize),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let digits = |k: &mut usize| {
        let start = *k;
        while *k < chars.len() && chars[*k].1.is_ascii_digit() {
            *k += 1;
        }
        chars[start..*k].iter().map(|c| c.1).collect::<String>()
    };
    while k < chars.len() {
        let (pos, c) = chars[k];
        match c {
            c if c.is_whitespace() => k += 1,
            '0'..='9' => {
                let s = digits(&mut k);
                out.push((pos, Tok::Int(s.parse().expect("digits"))));
            }
            't' | 'x' => {
                k += 1;
                if k < chars.len() && chars[k].1 == '_' {
                    k += 1;
                }
                let s = digits(&mut k);
                if s.is_empty() {
                    return Err(Error::parse(pos, format!("expected an index after '{c}'")));
                }
                let i: usize = s
                    .parse()
                    .map_err(|_| Error::parse(pos, "generator index too large"))?;
                if i == 0 {
                    return Err(Error::parse(pos, "generator indices start at 1"));
                }
                out.push((pos, Tok::Gen(c, i)));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push((pos, Tok::Op(c)));
                k += 1;
            }
            _ => return Err(Error::parse(pos, format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

struct ExprParser {
    toks: Vec<(usize, Tok)>,
    k: usize,
    end: usize,
}

impl ExprParser {
    fn pos(&self) -> usize {
        self.toks.get(self.k).map(|t| t.0).unwrap_or(self.end)
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.k) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek_op() == Some(c) {
            self.k += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.power()?;
        while self.eat('*') {
            e = Expr::Mul(Box::new(e), Box::new(self.power()?));
        }
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        loop {
            let pos = self.pos();
            if !self.eat('^') {
                return Ok(e);
            }
            if self.eat('*') {
                e = Expr::Adjoint(Box::new(e), pos);
            } else if self.eat('+') {
                e = Expr::QuasiInverse(Box::new(e), pos);
            } else {
                let neg = self.eat('-');
                let n = match self.toks.get(self.k) {
                    Some((_, Tok::Int(n))) => n.clone(),
                    _ => return Err(Error::parse(self.pos(), "expected an exponent")),
                };
                self.k += 1;
                let n: i64 = n
                    .try_into()
                    .map_err(|_| Error::parse(pos, "exponent too large"))?;
                e = Expr::Pow(Box::new(e), if neg { -n } else { n }, pos);
            }
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.toks.get(self.k).cloned() {
            Some((_, Tok::Int(n))) => {
                self.k += 1;
                if self.eat('/') {
                    match self.toks.get(self.k).cloned() {
                        Some((_, Tok::Int(d))) => {
                            self.k += 1;
                            Ok(Expr::Num(n, d))
                        }
                        _ => Err(Error::parse(self.pos(), "expected a denominator")),
                    }
                } else {
                    Ok(Expr::Num(n, BigInt::from(1)))
                }
            }
            Some((_, Tok::Gen('t', i))) => {
                self.k += 1;
                Ok(Expr::T(i))
            }
            Some((_, Tok::Gen(_, i))) => {
                self.k += 1;
                Ok(Expr::X(i))
            }
            Some((_, Tok::Op('('))) => {
                self.k += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::parse(self.pos(), "expected ')'"));
                }
                Ok(e)
            }
            Some(_) => Err(Error::parse(pos, "expected a number, generator or '('")),
            None => Err(Error::parse(pos, "unexpected end of input")),
        }
    }
}

/// Parses the grammar above into a syntax tree.
pub fn parse_syntax(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = ExprParser {
        toks,
        k: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.k != p.toks.len() {
        return Err(Error::parse(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

fn check_index(i: usize, rank: usize) -> Result<()> {
    if i > rank {
        Err(Error::RankExceeded { index: i, rank })
    } else {
        Ok(())
    }
}

fn scalar(n: &BigInt, d: &BigInt, field: FieldSpec) -> Result<FieldElem> {
    field.from_bigint(n).div(&field.from_bigint(d))
}

fn poly_pow(base: &FreePolynomial, n: i64, pos: usize) -> Result<FreePolynomial> {
    let base = if n < 0 {
        if !base.is_unit() {
            return Err(Error::parse(pos, "negative powers need a single-term base"));
        }
        let (w, c) = base.terms().next().expect("unit has a term");
        FreePolynomial::monomial(base.rank(), w.inverse(), c.inv()?)
    } else {
        base.clone()
    };
    let mut acc = FreePolynomial::one(base.rank(), base.field());
    for _ in 0..n.unsigned_abs() {
        acc = &acc * &base;
    }
    Ok(acc)
}

/// Evaluates a tree in the group algebra.
pub fn eval_poly(e: &Expr, rank: usize, field: FieldSpec) -> Result<FreePolynomial> {
    let rec = |x: &Expr| eval_poly(x, rank, field);
    Ok(match e {
        Expr::Num(n, d) => FreePolynomial::constant(rank, scalar(n, d, field)?),
        Expr::T(i) => {
            check_index(*i, rank)?;
            FreePolynomial::t(rank, field, *i, 1)
        }
        Expr::X(i) => {
            check_index(*i, rank)?;
            FreePolynomial::x(rank, field, *i)
        }
        Expr::Neg(a) => -&rec(a)?,
        Expr::Add(a, b) => &rec(a)? + &rec(b)?,
        Expr::Sub(a, b) => &rec(a)? - &rec(b)?,
        Expr::Mul(a, b) => &rec(a)? * &rec(b)?,
        Expr::Pow(a, n, pos) => poly_pow(&rec(a)?, *n, *pos)?,
        Expr::Adjoint(_, pos) => return Err(Error::parse(*pos, "'^*' needs a Leavitt command")),
        Expr::QuasiInverse(_, pos) => return Err(Error::parse(*pos, "'^+' needs series-rational")),
    })
}

/// Evaluates a tree in the Leavitt localization.
pub fn eval_leavitt(e: &Expr, rank: usize, field: FieldSpec) -> Result<LeavittElement> {
    let rec = |x: &Expr| eval_leavitt(x, rank, field);
    Ok(match e {
        Expr::Adjoint(inner, pos) => {
            let mut idx = Vec::new();
            collect_x_product(inner, &mut idx, *pos)?;
            for &i in &idx {
                check_index(i, rank)?;
            }
            LeavittElement::term(FreePolynomial::one(rank, field), XMonomial(idx))
        }
        Expr::Neg(a) => rec(a)?.scale(&-field.one()),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?)?,
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?)?,
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?)?,
        Expr::Pow(a, n, _) if *n >= 0 => {
            let base = rec(a)?;
            let mut acc = LeavittElement::one(rank, field);
            for _ in 0..*n {
                acc = acc.mul(&base)?;
            }
            acc
        }
        Expr::QuasiInverse(_, pos) => return Err(Error::parse(*pos, "'^+' needs series-rational")),
        _ => leavitt::embed(&eval_poly(e, rank, field)?),
    })
}

/// `(x_a x_b ...)^*` is spelled with the indices in product order.
fn collect_x_product(e: &Expr, out: &mut Vec<usize>, pos: usize) -> Result<()> {
    match e {
        Expr::X(i) => {
            out.push(*i);
            Ok(())
        }
        Expr::Mul(a, b) => {
            collect_x_product(a, out, pos)?;
            collect_x_product(b, out, pos)
        }
        _ => Err(Error::parse(pos, "'^*' applies to x_i or a product of x's")),
    }
}

fn has_quasi_inverse(e: &Expr) -> bool {
    match e {
        Expr::QuasiInverse(..) => true,
        Expr::Num(..) | Expr::T(_) | Expr::X(_) => false,
        Expr::Neg(a) | Expr::Pow(a, _, _) | Expr::Adjoint(a, _) => has_quasi_inverse(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            has_quasi_inverse(a) || has_quasi_inverse(b)
        }
    }
}

/// Builds a linear representation; polynomial subtrees become atoms.
pub fn eval_rational(e: &Expr, rank: usize, field: FieldSpec) -> Result<RationalRep> {
    if !has_quasi_inverse(e) {
        return Ok(RationalRep::atom(eval_poly(e, rank, field)?));
    }
    let rec = |x: &Expr| eval_rational(x, rank, field);
    let minus_one = || RationalRep::atom(FreePolynomial::constant(rank, -field.one()));
    match e {
        Expr::QuasiInverse(a, _) => series::rat_quasi_inverse(&rec(a)?),
        Expr::Neg(a) => series::rat_product(&minus_one(), &rec(a)?),
        Expr::Add(a, b) => series::rat_sum(&rec(a)?, &rec(b)?),
        Expr::Sub(a, b) => {
            let nb = series::rat_product(&minus_one(), &rec(b)?)?;
            series::rat_sum(&rec(a)?, &nb)
        }
        Expr::Mul(a, b) => series::rat_product(&rec(a)?, &rec(b)?),
        Expr::Pow(a, n, pos) => {
            if *n < 0 {
                return Err(Error::parse(*pos, "negative power of a rational series"));
            }
            let base = rec(a)?;
            let mut acc = RationalRep::atom(FreePolynomial::one(rank, field));
            for _ in 0..*n {
                acc = series::rat_product(&acc, &base)?;
            }
            Ok(acc)
        }
        Expr::Adjoint(_, pos) => Err(Error::parse(*pos, "'^*' needs a Leavitt command")),
        _ => unreachable!("leaves have no quasi-inverse"),
    }
}

pub fn parse_expr(text: &str, rank: usize, field: FieldSpec) -> Result<FreePolynomial> {
    eval_poly(&parse_syntax(text)?, rank, field)
}

pub fn parse_leavitt(text: &str, rank: usize, field: FieldSpec) -> Result<LeavittElement> {
    eval_leavitt(&parse_syntax(text)?, rank, field)
}

pub fn parse_rational(text: &str, rank: usize, field: FieldSpec) -> Result<RationalRep> {
    eval_rational(&parse_syntax(text)?, rank, field)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatMode {
    Text,
    Json,
}

pub fn format_poly(g: &FreePolynomial, mode: FormatMode) -> String {
    match mode {
        FormatMode::Text => g.to_string(),
        FormatMode::Json => serde_json::to_string(&g.to_json()).expect("serializable"),
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(name = "foxf", about = "Exact algebra in free group algebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args)]
struct Global {
    /// Number of free generators.
    #[arg(long, global = true, default_value_t = 2)]
    rank: usize,
    /// `Q` or `gf:P`; defaults to $FOX_DEFAULT_FIELD, then `Q`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Accepted for reproducible pipelines; every search is already seeded.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Word-length bound for right division.
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Truncation degree for series commands.
    #[arg(long, global = true, default_value_t = 6)]
    cutoff: usize,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Normalize an expression.
    Eval { expr: String },
    /// Fox derivatives; all of them unless --wrt is given.
    Derive {
        #[arg(long)]
        wrt: Option<String>,
        expr: String,
    },
    /// Order of the Magnus image.
    Order { expr: String },
    /// Longest word length in the support.
    Length { expr: String },
    /// Words of maximal length.
    Maximal { expr: String },
    /// Greatest common right divisor.
    Gcd {
        #[arg(required = true, num_args = 1..)]
        exprs: Vec<String>,
    },
    /// Exact right division `lambda = rho * gamma`.
    Divide { lambda: String, gamma: String },
    /// Factorization into irreducibles.
    Factor { expr: String },
    /// Decide irreducibility.
    Irreducible { expr: String },
    /// Decide similarity of two polynomials.
    Similar { a: String, b: String },
    /// The lattice module of a comonic polynomial.
    Lattice { expr: String },
    /// Magnus image truncated at --cutoff.
    SeriesMagnus { expr: String },
    /// Solve Z = P + QZ; P as "p1, p2" and Q as "q11, q12; q21, q22".
    SeriesSolve { p: String, q: String },
    /// Evaluate a rational expression built with '+', '*' and '^+'.
    SeriesRational { expr: String },
    /// Normal form of a Leavitt algebra element.
    LeavittNormalize {
        #[arg(long)]
        depth: Option<usize>,
        expr: String,
    },
    /// Product in the Leavitt algebra.
    LeavittMul { a: String, b: String },
}

/// Exit code and printed output for `foxf <args>` (program name excluded).
pub fn run_command<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("foxf".to_string())
        .chain(args.into_iter().map(Into::into))
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let json = cli.global.json;
    match run(&cli) {
        Ok((text, value)) => {
            if json {
                (0, json!({"status": "ok", "result": value}).to_string())
            } else {
                (0, text)
            }
        }
        Err(e) => {
            let (code, status) = if e.is_bounded_verdict() {
                (3, "bounded")
            } else {
                (2, "error")
            };
            if json {
                (
                    code,
                    json!({"status": status, "error": e.to_string()}).to_string(),
                )
            } else {
                (code, format!("{status}: {e}"))
            }
        }
    }
}

fn field_of(g: &Global) -> Result<FieldSpec> {
    let text = g
        .field
        .clone()
        .or_else(|| std::env::var("FOX_DEFAULT_FIELD").ok())
        .unwrap_or_else(|| "Q".into());
    text.parse()
}

fn read_arg(s: &str) -> Result<String> {
    if s == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Io(e.to_string()))?;
        Ok(buf.trim().to_string())
    } else {
        Ok(s.to_string())
    }
}

fn parse_derivative(text: &str, rank: usize) -> Result<DerivativeIndex> {
    let w = parse_expr(text, rank, FieldSpec::Rationals)?;
    let letter = match (w.num_terms(), w.terms().next()) {
        (1, Some((w, c))) if c.is_one() && w.len() == 1 => w.first(),
        _ => None,
    };
    letter
        .map(DerivativeIndex::from)
        .ok_or_else(|| Error::Invalid(format!("--wrt expects t_i or t_i^-1, got {text:?}")))
}

fn derivative_name(d: DerivativeIndex) -> String {
    ReducedWord::letter(Letter {
        index: d.index,
        sign: if d.barred { -1 } else { 1 },
    })
    .to_string()
}

fn series_json(s: &TruncatedSeries) -> Value {
    serde_json::to_value(s.to_json()).expect("serializable")
}

fn run(cli: &Cli) -> Result<(String, Value)> {
    let g = &cli.global;
    let (rank, field) = (g.rank, field_of(g)?);
    let poly = |s: &str| parse_expr(&read_arg(s)?, rank, field);
    let pj = |p: &FreePolynomial| serde_json::to_value(p.to_json()).expect("serializable");
    let out = |p: FreePolynomial| Ok((p.to_string(), pj(&p)));
    match &cli.cmd {
        Cmd::Eval { expr } => out(poly(expr)?),
        Cmd::Derive { wrt, expr } => {
            let p = poly(expr)?;
            match wrt {
                Some(w) => out(partial_derivative(parse_derivative(w, rank)?, &p)?),
                None => {
                    let mut lines = Vec::new();
                    let mut map = serde_json::Map::new();
                    for d in DerivativeIndex::all(rank) {
                        let q = partial_derivative(d, &p)?;
                        let name = derivative_name(d);
                        lines.push(format!("d/d{name}: {q}"));
                        map.insert(name, pj(&q));
                    }
                    Ok((lines.join("\n"), Value::Object(map)))
                }
            }
        }
        Cmd::Order { expr } => {
            let n = poly(expr)?.order()?;
            Ok((n.to_string(), n.into()))
        }
        Cmd::Length { expr } => {
            let n = poly(expr)?.length()?;
            Ok((n.to_string(), n.into()))
        }
        Cmd::Maximal { expr } => {
            let m = poly(expr)?.strictly_maximal()?;
            let words: Vec<String> = m.words.iter().map(|w| w.to_string()).collect();
            Ok((
                words.join(", "),
                json!({"words": words, "special": m.special}),
            ))
        }
        Cmd::Gcd { exprs } => {
            let gens = exprs.iter().map(|e| poly(e)).collect::<Result<Vec<_>>>()?;
            out(factor::gcd_set(&gens)?)
        }
        Cmd::Divide { lambda, gamma } => out(factor::divide_right(
            &poly(lambda)?,
            &poly(gamma)?,
            g.max_len,
        )?),
        Cmd::Factor { expr } => {
            let p = poly(expr)?;
            let f = factor::factorize(&p)?;
            let fj = f.to_json(rank, &p);
            let mut lines = vec![format!("unit: {}", f.unit)];
            if !f.unit_word.is_empty() {
                lines.push(format!("unit word: {}", f.unit_word));
            }
            for (k, q) in f.factors.iter().enumerate() {
                lines.push(format!("factor {}: {q}", k + 1));
            }
            lines.push(format!("length: {}", f.len()));
            lines.push(format!(
                "status: {}",
                if fj.verified {
                    "verified"
                } else {
                    "unverified"
                }
            ));
            Ok((
                lines.join("\n"),
                serde_json::to_value(fj).expect("serializable"),
            ))
        }
        Cmd::Irreducible { expr } => {
            let b = factor::is_irreducible(&poly(expr)?)?;
            Ok((b.to_string(), b.into()))
        }
        Cmd::Similar { a, b } => {
            let s = factor::similar(&poly(a)?, &poly(b)?)?;
            Ok((s.to_string(), s.into()))
        }
        Cmd::Lattice { expr } => {
            let p = poly(expr)?.comonic()?;
            let lat = factor::lattice_of(&p)?;
            let labels: Vec<String> = lat
                .module
                .labels()
                .map(|l| l.iter().map(|q| q.to_string()).collect())
                .unwrap_or_default();
            let text = format!(
                "dimension: {}\nkernel dimension: {}\nbasis: {}",
                lat.dim(),
                lat.kernel_dim(),
                labels.join(", ")
            );
            Ok((
                text,
                json!({
                    "dimension": lat.dim(),
                    "kernel_dimension": lat.kernel_dim(),
                    "module": lat.module.to_json(),
                }),
            ))
        }
        Cmd::SeriesMagnus { expr } => {
            let s = series::magnus_embed(&poly(expr)?, g.cutoff);
            Ok((s.to_string(), series_json(&s)))
        }
        Cmd::SeriesSolve { p, q } => {
            let p_polys = p
                .split(',')
                .map(|s| parse_expr(s, rank, field))
                .collect::<Result<Vec<_>>>()?;
            let q_polys = q
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|s| parse_expr(s, rank, field))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let ps: Vec<TruncatedSeries> = p_polys
                .iter()
                .map(|e| series::magnus_embed(e, g.cutoff))
                .collect();
            let qs: series::SeriesMatrix = q_polys
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| series::magnus_embed(e, g.cutoff))
                        .collect()
                })
                .collect();
            let z = series::solve_affine_system(&ps, &qs)?;
            let text: Vec<String> = z
                .iter()
                .enumerate()
                .map(|(k, s)| format!("z{}: {s}", k + 1))
                .collect();
            let values: Vec<Value> = z.iter().map(series_json).collect();
            Ok((text.join("\n"), Value::Array(values)))
        }
        Cmd::SeriesRational { expr } => {
            let rep = parse_rational(&read_arg(expr)?, rank, field)?;
            let s = series::rat_eval(&rep, g.cutoff)?;
            Ok((
                s.to_string(),
                json!({
                    "representation": serde_json::to_value(rep.to_json()).expect("serializable"),
                    "series": series_json(&s),
                }),
            ))
        }
        Cmd::LeavittNormalize { depth, expr } => {
            let e = parse_leavitt(&read_arg(expr)?, rank, field)?;
            let d = depth.unwrap_or(e.depth());
            let c = e.canonical_form(d)?;
            Ok((
                c.to_string(),
                serde_json::to_value(c.to_json()).expect("serializable"),
            ))
        }
        Cmd::LeavittMul { a, b } => {
            let x = parse_leavitt(&read_arg(a)?, rank, field)?;
            let y = parse_leavitt(&read_arg(b)?, rank, field)?;
            let c = x.mul(&y)?;
            Ok((
                c.to_string(),
                serde_json::to_value(c.to_json()).expect("serializable"),
            ))
        }
    }
}
