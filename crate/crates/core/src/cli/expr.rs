//! A small expression language over the calculus.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' INT)*
//! atom  := RAT | E2 | E4 | ... | E14 | Delta | Ek(k) | D(e [, j]) | RC(e, e, n)
//!        | Serre(e, m) | Ppoly(k, e) | '(' expr ')'
//! ```
//!
//! Weights are checked while parsing, so `E4 + E6` never reaches evaluation.

use std::fmt;

use crate::arith::{rat_to_string, Int, Rat};
use crate::calculus::{rankin_cohen, serre};
use crate::error::{Error, Result};
use crate::forms::{delta, e2, eisenstein, Form};
use crate::poincare::eval_modular_seed;
use crate::qseries::QSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Lit(Rat),
    /// `E_k`, including the quasimodular `E2`.
    E(u32),
    Delta,
    D(Box<Expr>, u32),
    RC(Box<Expr>, Box<Expr>, u32),
    Serre(Box<Expr>, u32),
    Ppoly(u32, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Weight and whether the value is known to be modular (no `E2`, no bare `D`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ty {
    pub weight: u32,
    pub modular: bool,
}

impl Expr {
    /// Static weight; fails on mismatched sums or non-modular bracket inputs.
    pub fn ty(&self) -> Result<Ty> {
        let m = |weight| Ty { weight, modular: true };
        Ok(match self {
            Expr::Lit(_) => m(0),
            Expr::E(2) => Ty { weight: 2, modular: false },
            Expr::E(k) => m(*k),
            Expr::Delta => m(12),
            Expr::D(e, j) => {
                let t = e.ty()?;
                Ty {
                    weight: t.weight + 2 * j,
                    modular: t.modular && *j == 0,
                }
            }
            Expr::RC(f, g, n) => {
                let (a, b) = (modular_operand(f, "RC")?, modular_operand(g, "RC")?);
                m(a + b + 2 * n)
            }
            Expr::Serre(f, k) => m(modular_operand(f, "Serre")? + 2 * k),
            Expr::Ppoly(k, e) => {
                let w = modular_operand(e, "Ppoly")?;
                let diff = *k as i64 - w as i64;
                if diff < 4 || diff % 2 != 0 {
                    return Err(Error::EisensteinFactor(diff));
                }
                m(*k)
            }
            Expr::Neg(e) => e.ty()?,
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (x, y) = (a.ty()?, b.ty()?);
                if x.weight != y.weight {
                    return Err(Error::WeightMismatch(x.weight, y.weight));
                }
                Ty {
                    weight: x.weight,
                    modular: x.modular && y.modular,
                }
            }
            Expr::Mul(a, b) => {
                let (x, y) = (a.ty()?, b.ty()?);
                Ty {
                    weight: x.weight + y.weight,
                    modular: x.modular && y.modular,
                }
            }
            Expr::Pow(e, n) => {
                let t = e.ty()?;
                Ty {
                    weight: t.weight * n,
                    modular: t.modular || *n == 0,
                }
            }
        })
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Lit(r) if r.cmp0().is_lt() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn modular_operand(e: &Expr, op: &str) -> Result<u32> {
    let t = e.ty()?;
    if !t.modular {
        return Err(Error::InvalidArgument(format!(
            "{op} needs a modular operand, `{e}` is quasimodular"
        )));
    }
    Ok(t.weight)
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_level: u8) -> fmt::Result {
    if e.level() < min_level {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Lit(r) => f.write_str(&rat_to_string(r)),
            Expr::E(k) if *k <= 14 => write!(f, "E{k}"),
            Expr::E(k) => write!(f, "Ek({k})"),
            Expr::Delta => f.write_str("Delta"),
            Expr::D(e, 1) => write!(f, "D({e})"),
            Expr::D(e, j) => write!(f, "D({e}, {j})"),
            Expr::RC(a, b, n) => write!(f, "RC({a}, {b}, {n})"),
            Expr::Serre(e, m) => write!(f, "Serre({e}, {m})"),
            Expr::Ppoly(k, e) => write!(f, "Ppoly({k}, {e})"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("*")?;
                write_child(f, b, 3)
            }
            Expr::Pow(e, n) => {
                write_child(f, e, 4)?;
                write!(f, "^{n}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(Int),
    Rat(Rat),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| Error::Parse { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            let num: Int = num.parse().expect("digits");
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                let ds = i + 1;
                i = ds;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den: String = chars[ds..i].iter().collect();
                let den: Int = den.parse().expect("digits");
                if den.cmp0().is_eq() {
                    return Err(err(l0, c0, "zero denominator".into()));
                }
                Tok::Rat(Rat::from((num, den)))
            } else {
                Tok::Int(num)
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' | '\u{2212}' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                _ => return Err(err(l0, c0, format!("unexpected character `{c}`"))),
            }
        };
        col += i - start;
        out.push(Spanned { tok, line: l0, col: c0 });
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Spanned, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let t = self.next();
        if t.tok == want {
            Ok(())
        } else {
            Err(self.error_at(&t, format!("expected {what}")))
        }
    }

    fn small_int(&mut self, what: &str) -> Result<u32> {
        let t = self.next();
        match &t.tok {
            Tok::Int(n) => n.to_u32().ok_or_else(|| self.error_at(&t, format!("{what} too large"))),
            _ => Err(self.error_at(&t, format!("expected {what} (a non-negative integer)"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => Expr::Add,
                Tok::Minus => Expr::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = op(Box::new(lhs), Box::new(rhs));
            lhs.ty()?;
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.next();
            let n = self.small_int("exponent")?;
            base = Expr::Pow(Box::new(base), n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Int(n) => Ok(Expr::Lit(Rat::from(n))),
            Tok::Rat(r) => Ok(Expr::Lit(r)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.call(&t, &name),
            Tok::End => Err(self.error_at(&t, "unexpected end of input")),
            other => Err(self.error_at(&t, format!("unexpected {}", describe(&other)))),
        }
    }

    fn call(&mut self, at: &Spanned, name: &str) -> Result<Expr> {
        let fixed = match name {
            "E2" => Some(2),
            "E4" => Some(4),
            "E6" => Some(6),
            "E8" => Some(8),
            "E10" => Some(10),
            "E12" => Some(12),
            "E14" => Some(14),
            _ => None,
        };
        if let Some(k) = fixed {
            return Ok(Expr::E(k));
        }
        if name == "Delta" {
            return Ok(Expr::Delta);
        }
        let e = match name {
            "Ek" => {
                self.expect(Tok::LParen, "`(`")?;
                let k = self.small_int("weight")?;
                if k % 2 == 1 || k == 0 {
                    return Err(self.error_at(at, format!("Ek needs an even weight >= 2, got {k}")));
                }
                Expr::E(k)
            }
            "D" => {
                self.expect(Tok::LParen, "`(`")?;
                let e = self.expr()?;
                let j = if *self.peek() == Tok::Comma {
                    self.next();
                    self.small_int("derivative order")?
                } else {
                    1
                };
                Expr::D(Box::new(e), j)
            }
            "RC" => {
                self.expect(Tok::LParen, "`(`")?;
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let n = self.small_int("bracket order")?;
                Expr::RC(Box::new(a), Box::new(b), n)
            }
            "Serre" => {
                self.expect(Tok::LParen, "`(`")?;
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let m = self.small_int("Serre order")?;
                Expr::Serre(Box::new(a), m)
            }
            "Ppoly" => {
                self.expect(Tok::LParen, "`(`")?;
                let k = self.small_int("weight")?;
                self.expect(Tok::Comma, "`,`")?;
                let a = self.expr()?;
                Expr::Ppoly(k, Box::new(a))
            }
            _ => return Err(self.error_at(at, format!("unknown identifier `{name}`"))),
        };
        self.expect(Tok::RParen, "`)`")?;
        match e.ty() {
            Ok(_) => Ok(e),
            Err(Error::WeightMismatch(a, b)) => Err(Error::WeightMismatch(a, b)),
            Err(err) => Err(self.error_at(at, err.to_string())),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Int(n) => format!("number {n}"),
        Tok::Rat(r) => format!("number {}", rat_to_string(r)),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses and type-checks `text`.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(p.error_at(&t, format!("unexpected {}", describe(&t.tok))));
    }
    e.ty()?;
    Ok(e)
}

/// Exact q-expansion of `e` to `prec` coefficients.
pub fn eval(e: &Expr, prec: usize) -> Result<Form> {
    Ok(match e {
        Expr::Lit(r) => Form::modular(0, QSeries::constant(r.clone(), prec))?,
        Expr::E(2) => e2(prec),
        Expr::E(k) => eisenstein(*k, prec)?,
        Expr::Delta => delta(prec.max(2))?.truncate(prec),
        Expr::D(x, j) => {
            let f = eval(x, prec)?;
            if *j == 0 {
                f
            } else {
                Form::quasimodular(f.weight() + 2 * j, f.series().derive(*j))
            }
        }
        Expr::RC(a, b, n) => rankin_cohen(&eval(a, prec)?, &eval(b, prec)?, *n)?,
        Expr::Serre(a, m) => serre(&eval(a, prec)?, *m)?,
        Expr::Ppoly(k, a) => eval_modular_seed(&eval(a, prec)?, *k)?,
        Expr::Neg(a) => eval(a, prec)?.scale(&Rat::from(-1)),
        Expr::Add(a, b) => eval(a, prec)?.add(&eval(b, prec)?)?,
        Expr::Sub(a, b) => eval(a, prec)?.sub(&eval(b, prec)?)?,
        Expr::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
            (Expr::Lit(r), x) | (x, Expr::Lit(r)) => eval(x, prec)?.scale(r),
            _ => eval(a, prec)?.mul(&eval(b, prec)?),
        },
        Expr::Pow(a, n) => {
            if *n == 0 {
                Form::modular(0, QSeries::one(prec))?
            } else {
                eval(a, prec)?.pow(*n)
            }
        }
    })
}

pub fn eval_str(text: &str, prec: usize) -> Result<Form> {
    eval(&parse(text)?, prec)
}
