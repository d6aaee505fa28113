//! Small expression language for algebra elements.
//!
//! `+`/`-` separate terms, `*` is optional between factors, `^` raises to a
//! non-negative integer power, parentheses group, and `name(arg, ...)` is a
//! call. Numbers are integers or `a/b` fractions.

use num_bigint::BigInt;
use num_rational::BigRational;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Var { name: String, column: usize },
    Call { name: String, args: Vec<Expr>, column: usize },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::ParseAt { line: 1, column, message: message.into() }
}

/// Re-labels a parse error with the line it came from.
pub fn at_line(e: Error, line: usize, column_offset: usize) -> Error {
    match e {
        Error::ParseAt { column, message, .. } => Error::ParseAt {
            line,
            column: column + column_offset,
            message,
        },
        Error::UnknownGenerator(g) => Error::ParseAt {
            line,
            column: column_offset + 1,
            message: format!("unknown generator `{g}`"),
        },
        other => Error::ParseAt {
            line,
            column: column_offset + 1,
            message: other.to_string(),
        },
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(chars[start..i].iter().collect()), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            _ => return Err(err(col, format!("unexpected character `{c}`"))),
        };
        out.push((t, col));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        let col = self.col();
        match self.bump() {
            Some((ref got, _)) if *got == t => Ok(()),
            _ => Err(err(col, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if let Some(Tok::Plus) = self.peek() {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let col = self.col();
            match self.bump() {
                Some((Tok::Int(s), _)) => {
                    let e: u32 = s.parse().map_err(|_| err(col, "exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(err(col, "expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.bump() {
            Some((Tok::Int(s), _)) => {
                let n = BigInt::from_str(&s).map_err(|_| err(col, "bad integer"))?;
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dcol = self.col();
                    match self.bump() {
                        Some((Tok::Int(d), _)) => {
                            let d = BigInt::from_str(&d).map_err(|_| err(dcol, "bad integer"))?;
                            if d == BigInt::from(0) {
                                return Err(err(dcol, "zero denominator"));
                            }
                            Ok(Expr::Num(BigRational::new(n, d)))
                        }
                        _ => Err(err(dcol, "expected denominator")),
                    }
                } else {
                    Ok(Expr::Num(BigRational::from_integer(n)))
                }
            }
            Some((Tok::Ident(name), _)) => {
                if let Some(Tok::LParen) = self.peek() {
                    self.bump();
                    let mut args = Vec::new();
                    if let Some(Tok::RParen) = self.peek() {
                        self.bump();
                    } else {
                        loop {
                            args.push(self.expr()?);
                            let c = self.col();
                            match self.bump() {
                                Some((Tok::Comma, _)) => continue,
                                Some((Tok::RParen, _)) => break,
                                _ => return Err(err(c, "expected `,` or `)`")),
                            }
                        }
                    }
                    Ok(Expr::Call { name, args, column: col })
                } else {
                    Ok(Expr::Var { name, column: col })
                }
            }
            Some((Tok::LParen, _)) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(err(col, "expected a term")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1 };
    if p.peek().is_none() {
        return Err(err(1, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(err(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

/// A ring in which expressions can be evaluated.
pub trait Evaluator {
    type Value;
    fn number(&self, q: &BigRational) -> Result<Self::Value>;
    fn var(&self, name: &str, column: usize) -> Result<Self::Value>;
    fn call(&self, name: &str, args: &[Expr], column: usize) -> Result<Self::Value> {
        let _ = args;
        Err(err(column, format!("unknown function `{name}`")))
    }
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value>;
    fn one(&self) -> Result<Self::Value>;

    fn eval(&self, e: &Expr) -> Result<Self::Value> {
        match e {
            Expr::Num(q) => self.number(q),
            Expr::Var { name, column } => self.var(name, *column),
            Expr::Call { name, args, column } => self.call(name, args, *column),
            Expr::Add(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                self.add(x, y)
            }
            Expr::Sub(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                let y = self.neg(y)?;
                self.add(x, y)
            }
            Expr::Mul(a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                self.mul(x, y)
            }
            Expr::Neg(a) => {
                let x = self.eval(a)?;
                self.neg(x)
            }
            Expr::Pow(a, k) => {
                if *k == 0 {
                    return self.one();
                }
                let mut acc = self.eval(a)?;
                for _ in 1..*k {
                    acc = self.mul(acc, self.eval(a)?)?;
                }
                Ok(acc)
            }
        }
    }
}
