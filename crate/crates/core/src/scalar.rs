//! Exact field elements: arbitrary-precision rationals and prime-field residues.
//!
//! A [`Scalar`] carries its field with it, so mixing elements of different
//! fields is detected at the point of use. The checked operations
//! (`try_add`, `try_mul`, `inv`, ...) report a mismatch as an error; the
//! operator impls panic on a mismatch and are meant for code paths where every
//! operand was produced from the same [`FieldSpec`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "modulus {p} is not a prime below 2^31"
            )));
        }
        Ok(FieldSpec::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// Maps a rational number into this field. Over GF(p) the denominator
    /// must be invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            FieldSpec::Rationals => Ok(Scalar::Rational(q.clone())),
            FieldSpec::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_u32().expect("residue below modulus")
                };
                let num = Scalar::Mod { value: reduce(q.numer()), modulus: p };
                let den = Scalar::Mod { value: reduce(q.denom()), modulus: p };
                num.try_mul(&den.inv()?)
            }
        }
    }

    /// Parses scalar text: `a/b` or `a` over the rationals, a decimal integer
    /// (optionally `a/b` with invertible `b`) over GF(p).
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        let q = if let Some((n, d)) = t.split_once('/') {
            let n = BigInt::from_str(n.trim())
                .map_err(|_| Error::Parse(format!("bad scalar numerator `{t}`")))?;
            let d = BigInt::from_str(d.trim())
                .map_err(|_| Error::Parse(format!("bad scalar denominator `{t}`")))?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            BigRational::new(n, d)
        } else {
            let n = BigInt::from_str(t).map_err(|_| Error::Parse(format!("bad scalar `{t}`")))?;
            BigRational::from_integer(n)
        };
        self.from_rational(&q)
    }

    /// Enumerates every element of a prime field; `None` over the rationals.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some((0..p).map(|v| Scalar::Mod { value: v, modulus: p }).collect()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "gf {p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `rational`, `gf <p>` and `gf<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "rational" || t == "rationals" || t == "q" || t == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = t.strip_prefix("gf") {
            let p: u64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::InvalidField(format!("bad field `{t}`")))?;
            return FieldSpec::prime(p);
        }
        Err(Error::InvalidField(format!("unknown field `{t}`")))
    }
}

/// An exact element of a [`FieldSpec`].
///
/// Rationals are always in lowest terms with positive denominator (an
/// invariant maintained by `BigRational`); residues are always in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Mod { modulus, .. } => FieldSpec::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                modulus: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, .. }) => Scalar::Mod {
                value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                modulus: *p,
            },
            _ => unreachable!(),
        })
    }

    pub fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    /// Multiplicative inverse; zero is reported as [`Error::DivisionByZero`].
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Mod { value, modulus } => {
                // Fermat: a^(p-2)
                let p = *modulus as u64;
                let mut base = *value as u64;
                let mut e = p - 2;
                let mut acc = 1u64;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    e >>= 1;
                }
                Scalar::Mod { value: acc as u32, modulus: *modulus }
            }
        })
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.try_mul(&other.inv()?)
    }

    /// The value as a rational number (residues are lifted to `[0, p)`).
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Rational(q) => q.clone(),
            Scalar::Mod { value, .. } => BigRational::from_integer(BigInt::from(*value)),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rational_arithmetic() {
        assert_eq!(q(1, 2).try_add(&q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(q(2, 3).try_mul(&q(3, 4)).unwrap(), q(1, 2));
        assert_eq!(q(2, 3).inv().unwrap(), q(3, 2));
        let a = q(-7, 9);
        assert_eq!(a.try_add(&FieldSpec::Rationals.zero()).unwrap(), a);
        assert_eq!(a.try_mul(&FieldSpec::Rationals.one()).unwrap(), a);
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(f5.from_i64(3).try_add(&f5.from_i64(4)).unwrap(), f5.from_i64(2));
        assert_eq!(f5.from_i64(2).try_mul(&f5.from_i64(3)).unwrap(), f5.from_i64(1));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.from_i64(3).inv().unwrap(), f7.from_i64(5));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(matches!(FieldSpec::Rationals.zero().inv(), Err(Error::DivisionByZero)));
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(matches!(f7.zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let f5 = FieldSpec::prime(5).unwrap();
        let f7 = FieldSpec::prime(7).unwrap();
        assert!(matches!(f5.one().try_add(&f7.one()), Err(Error::FieldMismatch(..))));
        assert!(matches!(f5.one().try_mul(&q(1, 2)), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::prime(4).is_err());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(MAX_PRIME + 11).is_err());
        assert_eq!("gf 101".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(101));
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
    }

    #[test]
    fn parsing_scalars() {
        assert_eq!(FieldSpec::Rationals.parse_scalar("-4/6").unwrap(), q(-2, 3));
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(f7.parse_scalar("10").unwrap(), f7.from_i64(3));
        assert_eq!(f7.parse_scalar("1/3").unwrap(), f7.from_i64(5));
        assert!(FieldSpec::Rationals.parse_scalar("1/0").is_err());
        assert!(f7.parse_scalar("1/7").is_err());
    }
}
