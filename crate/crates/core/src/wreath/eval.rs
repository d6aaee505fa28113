//! Expressions over wreath elements.
//!
//! Names of `B`'s generators (and words made of them) stand for `(b, 0)`,
//! `c_gamma` for `c_γ` with target the identity row, and `e(i, j, a)` for the
//! matrix unit with entry `a` (an expression in `A`) at 1-based position `(i, j)`.
//! A bare number is a multiple of the identity, so it needs a unital `B`.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::expr::{self, Evaluator, Expr};
use crate::scalar::Scalar;
use crate::wreath::{GammaSpec, Wreath, WreathElement};

enum Val {
    Scalar(Scalar),
    Elem(WreathElement),
}

struct WreathEval<'a> {
    w: &'a Wreath,
    gamma: Option<&'a GammaSpec>,
}

fn at(column: usize, message: impl Into<String>) -> Error {
    Error::ParseAt { line: 1, column, message: message.into() }
}

impl WreathEval<'_> {
    fn elem(&self, v: Val) -> Result<WreathElement> {
        match v {
            Val::Elem(e) => Ok(e),
            Val::Scalar(c) if c.is_zero() => Ok(self.w.zero()),
            Val::Scalar(c) => self.w.scale(&self.w.identity()?, &c),
        }
    }

    fn index(&self, e: &Expr) -> Result<usize> {
        let column = match e {
            Expr::Var { column, .. } | Expr::Call { column, .. } => *column,
            _ => 1,
        };
        match e {
            Expr::Num(q) if q.is_integer() => {
                let i = q.to_integer().to_usize().unwrap_or(0);
                if i == 0 || i > self.w.index_len() {
                    return Err(at(
                        column,
                        format!("index must lie in 1..={}", self.w.index_len()),
                    ));
                }
                Ok(i - 1)
            }
            _ => Err(at(column, "matrix index must be a positive integer")),
        }
    }
}

impl Evaluator for WreathEval<'_> {
    type Value = Val;

    fn number(&self, q: &num_rational::BigRational) -> Result<Val> {
        Ok(Val::Scalar(self.w.b_alg().field().from_rational(q)?))
    }

    fn var(&self, name: &str, column: usize) -> Result<Val> {
        if name == "c_gamma" {
            let gamma = self
                .gamma
                .ok_or_else(|| at(column, "`c_gamma` needs a γ-spec"))?;
            let unit = self.w.unit_index().ok_or(Error::NotUnital)?;
            return Ok(Val::Elem(self.w.c_gamma(unit, gamma)?));
        }
        let b = self.w.b_alg();
        let word = b
            .alphabet()
            .split_word(name)
            .ok_or_else(|| at(column, format!("unknown generator `{name}`")))?;
        Ok(Val::Elem(self.w.from_b(&b.word(&word)?)?))
    }

    fn call(&self, name: &str, args: &[Expr], column: usize) -> Result<Val> {
        if name != "e" {
            return Err(at(column, format!("unknown function `{name}`")));
        }
        if args.len() != 3 {
            return Err(at(column, "`e` takes three arguments: e(i, j, a)"));
        }
        let i = self.index(&args[0])?;
        let j = self.index(&args[1])?;
        let a = self.w.a_alg().eval_expr(&args[2])?;
        Ok(Val::Elem(self.w.matrix_unit(i, j, &a)?))
    }

    fn add(&self, a: Val, b: Val) -> Result<Val> {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x.try_add(&y)?)),
            (a, b) => Ok(Val::Elem(self.w.add(&self.elem(a)?, &self.elem(b)?)?)),
        }
    }

    fn mul(&self, a: Val, b: Val) -> Result<Val> {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x.try_mul(&y)?)),
            (Val::Scalar(x), Val::Elem(e)) | (Val::Elem(e), Val::Scalar(x)) => {
                Ok(Val::Elem(self.w.scale(&e, &x)?))
            }
            (Val::Elem(x), Val::Elem(y)) => Ok(Val::Elem(self.w.mul(&x, &y)?)),
        }
    }

    fn neg(&self, a: Val) -> Result<Val> {
        match a {
            Val::Scalar(x) => Ok(Val::Scalar(x.neg_ref())),
            Val::Elem(e) => Ok(Val::Elem(self.w.neg(&e)?)),
        }
    }

    fn one(&self) -> Result<Val> {
        Ok(Val::Scalar(self.w.b_alg().field().one()))
    }
}

/// Evaluates a wreath expression; see the module docs for the vocabulary.
pub fn parse_wreath_expr(w: &Wreath, gamma: Option<&GammaSpec>, text: &str) -> Result<WreathElement> {
    let e = expr::parse(text)?;
    let ev = WreathEval { w, gamma };
    let v = ev.eval(&e)?;
    ev.elem(v)
}
