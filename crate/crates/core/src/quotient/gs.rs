//! Golod–Shafarevich condition: is `1 - m·t + Σ_d r_d·t^d < 0` for some `t` in `(0, 1)`?

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Number of relations of each degree.
pub type Census = BTreeMap<usize, u64>;

/// Dense polynomial over the rationals, coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq)]
struct Poly(Vec<BigRational>);

impl Poly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
        .trim()
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    /// Quotient and remainder.
    fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        let mut q = vec![BigRational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] / &lead;
            for (i, dc) in d.0.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly(q).trim(), Poly(r).trim())
    }

    fn monic(&self) -> Poly {
        match self.0.last() {
            None => self.clone(),
            Some(l) => Poly(self.0.iter().map(|c| c / l).collect()),
        }
    }

    fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Odd-multiplicity part: the product of distinct irreducible factors
    /// occurring to an odd power (Yun's square-free decomposition).
    fn odd_part(&self) -> Poly {
        let one = Poly(vec![BigRational::one()]);
        let d = self.derivative();
        let a = self.gcd(&d);
        let mut b = self.divrem(&a).0;
        let mut c = d.divrem(&a).0;
        let mut out = one;
        let mut i = 1;
        loop {
            let bd = b.derivative();
            let diff = Poly(sub_coeffs(&c.0, &bd.0)).trim();
            if b.degree() == Some(0) || b.is_zero() {
                break;
            }
            let factor = b.gcd(&diff);
            if i % 2 == 1 {
                out = mul(&out, &factor);
            }
            b = b.divrem(&factor).0;
            c = diff.divrem(&factor).0;
            i += 1;
        }
        out
    }

    fn square_free(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0
    }

    fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].divrem(&seq[n - 1]).1.neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }
}

fn sub_coeffs(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect()
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly(Vec::new());
    }
    let mut out = vec![BigRational::zero(); a.0.len() + b.0.len() - 1];
    for (i, x) in a.0.iter().enumerate() {
        for (j, y) in b.0.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    Poly(out).trim()
}

fn sign_changes(seq: &[Poly], t: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(t);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct roots in `(a, b]`, for `a`, `b` not roots.
fn count_roots(seq: &[Poly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

fn gs_poly(m: u64, census: &Census) -> Poly {
    let top = census.keys().copied().max().unwrap_or(1).max(1);
    let mut c = vec![BigRational::zero(); top + 1];
    c[0] = BigRational::one();
    c[1] -= BigRational::from_integer(BigInt::from(m));
    for (&d, &r) in census {
        c[d] += BigRational::from_integer(BigInt::from(r));
    }
    Poly(c).trim()
}

/// `1 - m·t + Σ r_d t^d`, exactly.
pub fn gs_value(m: u64, census: &Census, t: &BigRational) -> BigRational {
    gs_poly(m, census).eval(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GsOutcome {
    /// The supplied `t0` makes the expression negative.
    Satisfied,
    /// The supplied `t0` does not.
    NotSatisfied,
    /// A witness was found by search.
    Satisfiable,
    /// No `t` in `(0, 1)` works; decided exactly.
    Unsatisfiable,
}

impl fmt::Display for GsOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GsOutcome::Satisfied => "satisfied",
            GsOutcome::NotSatisfied => "not satisfied",
            GsOutcome::Satisfiable => "satisfiable",
            GsOutcome::Unsatisfiable => "unsatisfiable",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GsReport {
    pub m: u64,
    pub census: Census,
    #[serde(serialize_with = "ser_opt_q")]
    pub t0: Option<BigRational>,
    #[serde(serialize_with = "ser_opt_q")]
    pub value: Option<BigRational>,
    pub outcome: GsOutcome,
    /// How the verdict was reached.
    pub method: String,
}

fn ser_opt_q<S: serde::Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}

impl fmt::Display for GsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.outcome)?;
        if let (Some(t), Some(v)) = (&self.t0, &self.value) {
            write!(f, ", t0={t}, value={v}")?;
        }
        Ok(())
    }
}

/// Checks the condition at `t0`, or searches for a witness when `t0` is absent.
///
/// The search scans fractions `p/q` with `q <= denom_bound` in `(1/m, 1)` in
/// increasing order. If none works, the question is settled exactly: the
/// expression is negative somewhere in `(0, 1)` iff it has a root of odd
/// multiplicity there, which Sturm sequences detect and isolate.
pub fn gs_check(m: u64, census: &Census, t0: Option<&BigRational>, denom_bound: u64) -> Result<GsReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one generator".into()));
    }
    let p = gs_poly(m, census);
    let report = |t0: Option<BigRational>, outcome, method: &str| {
        let value = t0.as_ref().map(|t| p.eval(t));
        GsReport {
            m,
            census: census.clone(),
            t0,
            value,
            outcome,
            method: method.to_string(),
        }
    };
    if let Some(t) = t0 {
        if !t.is_positive() || *t >= BigRational::one() {
            return Err(Error::InvalidArgument(format!("t0 = {t} is outside (0, 1)")));
        }
        let outcome = if p.eval(t).is_negative() {
            GsOutcome::Satisfied
        } else {
            GsOutcome::NotSatisfied
        };
        return Ok(report(Some(t.clone()), outcome, "evaluation"));
    }

    let lower = BigRational::new(BigInt::one(), BigInt::from(m));
    let mut grid: Vec<BigRational> = Vec::new();
    for q in 2..=denom_bound.max(2) {
        for num in 1..q {
            let t = BigRational::new(BigInt::from(num), BigInt::from(q));
            if t > lower {
                grid.push(t);
            }
        }
    }
    grid.sort();
    grid.dedup();
    if let Some(t) = grid.into_iter().find(|t| p.eval(t).is_negative()) {
        return Ok(report(Some(t), GsOutcome::Satisfiable, "rational search"));
    }

    match odd_root_witness(&p) {
        Some(t) => Ok(report(Some(t), GsOutcome::Satisfiable, "root isolation")),
        None => Ok(report(None, GsOutcome::Unsatisfiable, "no odd-multiplicity root in (0, 1)")),
    }
}

/// A rational point of `(0, 1)` where `p < 0`, given `p(0) = 1`.
fn odd_root_witness(p: &Poly) -> Option<BigRational> {
    // Divide out (1 - t) completely; that factor is positive on (0, 1).
    let one_minus_t = Poly(vec![BigRational::one(), -BigRational::one()]);
    let mut q = p.clone();
    loop {
        let (quot, rem) = q.divrem(&one_minus_t);
        if rem.is_zero() && !q.is_zero() && q.degree() > Some(0) {
            q = quot;
        } else {
            break;
        }
    }
    if q.degree().unwrap_or(0) == 0 {
        return None;
    }
    let odd = q.odd_part();
    if odd.degree().unwrap_or(0) == 0 {
        return None;
    }
    let odd_seq = odd.sturm();
    let sf_seq = q.square_free().sturm();
    let zero = BigRational::zero();
    let one = BigRational::one();
    if count_roots(&odd_seq, &zero, &one) == 0 {
        return None;
    }
    let mut stack = vec![(zero, one)];
    while let Some((a, b)) = stack.pop() {
        if count_roots(&odd_seq, &a, &b) == 0 {
            continue;
        }
        if count_roots(&sf_seq, &a, &b) == 1 {
            // A single root, of odd multiplicity: q changes sign across it.
            for t in [&a, &b] {
                if t.is_positive() && *t < BigRational::one() && q.eval(t).is_negative() {
                    return Some(t.clone());
                }
            }
        }
        let mut k = 2i64;
        let mid = loop {
            let t = &a + (&b - &a) / BigRational::from_integer(BigInt::from(k));
            if !q.eval(&t).is_zero() {
                break t;
            }
            k += 1;
        };
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    None
}

/// Places `r_i` relations at degree `n_i` and evaluates `Σ r_i t0^{n_i}`.
pub fn gs_census_from_blocks(blocks: &[(usize, u64)], t0: &BigRational) -> (Census, BigRational) {
    let mut census = Census::new();
    let mut bound = BigRational::zero();
    for &(n, r) in blocks {
        *census.entry(n).or_insert(0) += r;
        bound += BigRational::from_integer(BigInt::from(r)) * num_traits::pow(t0.clone(), n);
    }
    (census, bound)
}
