//! Matrix wreath products `A ≀ B`, restricted to the subalgebra `B + S(A,B)`.
//!
//! Index the flat basis `b_0, b_1, …` of the truncated algebra `B` (so `b_0 = 1`
//! when `B` is unital). A transformation with `f(b_j) = Σ_i b_i ⊗ a_ij` is stored
//! as the matrix `(a_ij)`: entry `(i, j)` means column `j` produces `b_i ⊗ a_ij`.
//! Only matrices with finitely many entries are represented, and they vanish on
//! basis words above the truncation. An element is a pair `(b, S)` acting by
//! `b_j ↦ b·b_j ⊗ 1 + S(b_j)`, with
//!
//! ```text
//! (b₁, S₁)(b₂, S₂) = (b₁b₂, Λ_{b₁}S₂ + S₁Λ_{b₂} + S₁S₂)
//! ```
//!
//! where `Λ_b` is the matrix of left multiplication by `b`. Only `b₁b₂`,
//! `Λ_{b₁}S₂` (rows pushed above the truncation) and entry products in `A` can
//! lose information, and those set the overflow flag. `S₁Λ_{b₂}` is always
//! exact: its column `j` reads `S₁` at the coordinates of `b₂·b_j`, and `S₁` has
//! no columns above the truncation.
//!
//! `B` need not be unital. When it is, the B-part may carry a multiple of the
//! identity, which makes `(1, 0)` the identity of the wreath product.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quotient::{AlgElement, OverflowPolicy, TruncatedAlgebra};
use crate::scalar::Scalar;
use crate::sparse::{Accumulator, SparseVec};
use crate::subspace::Subspace;

pub mod checks;
pub mod eval;
pub mod gamma;

pub use checks::{
    lemma5_generation_check, lemma6_embed_check, unipotent_inverse, Lemma5Report, Lemma6Report,
    Lemma6Row,
};
pub use eval::parse_wreath_expr;
pub use gamma::{parse_gamma, show_gamma, GammaSpec};

static NEXT_WREATH: AtomicU64 = AtomicU64::new(1);

/// A matrix over the base field, keyed by `(row, column)`.
pub type ScalarMatrix = BTreeMap<(usize, usize), Scalar>;

/// Finitely supported matrix over `A`; entries are coordinate vectors of `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SMatrix {
    entries: BTreeMap<(usize, usize), SparseVec<usize>>,
}

impl SMatrix {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&SparseVec<usize>> {
        self.entries.get(&(i, j))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &SparseVec<usize>)> {
        self.entries.iter()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &SparseVec<usize>)> {
        self.entries
            .range((i, 0)..=(i, usize::MAX))
            .map(|(&(_, j), v)| (j, v))
    }

    pub fn row_support(&self) -> BTreeSet<usize> {
        self.entries.keys().map(|&(i, _)| i).collect()
    }

    pub fn column_support(&self) -> BTreeSet<usize> {
        self.entries.keys().map(|&(_, j)| j).collect()
    }

    /// Adds `c·v` to entry `(i, j)`.
    pub fn add_to(&mut self, i: usize, j: usize, v: &SparseVec<usize>, c: &Scalar) {
        if v.is_zero() || c.is_zero() {
            return;
        }
        let next = match self.entries.get(&(i, j)) {
            Some(old) => old.add_scaled(v, c),
            None => v.scale(c),
        };
        if next.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), next);
        }
    }

    pub fn add(&self, other: &SMatrix) -> SMatrix {
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            if let Some((_, c)) = v.iter().next() {
                out.add_to(i, j, v, &c.field().one());
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> SMatrix {
        if c.is_zero() {
            return SMatrix::zero();
        }
        SMatrix {
            entries: self.entries.iter().map(|(k, v)| (*k, v.scale(c))).collect(),
        }
    }

    pub fn neg(&self) -> SMatrix {
        SMatrix {
            entries: self.entries.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }
}

/// Coordinates of a wreath element as one sparse vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WKey {
    B(usize),
    S(usize, usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathElement {
    host: u64,
    b: SparseVec<usize>,
    s: SMatrix,
    overflow: bool,
}

impl WreathElement {
    pub fn b_coords(&self) -> &SparseVec<usize> {
        &self.b
    }

    pub fn s_part(&self) -> &SMatrix {
        &self.s
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero() && self.s.is_zero()
    }

    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    pub fn host(&self) -> u64 {
        self.host
    }

    pub fn with_flag(mut self, flag: bool) -> Self {
        self.overflow |= flag;
        self
    }
}

/// Image of one basis vector: `Σ_i b_i ⊗ (c_i·1 + a_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnImage {
    /// Coefficients `c_i` coming from the B-part.
    pub unit_terms: SparseVec<usize>,
    /// Entries `a_i` coming from the S-part.
    pub terms: BTreeMap<usize, SparseVec<usize>>,
    pub overflow: bool,
}

impl ColumnImage {
    pub fn is_zero(&self) -> bool {
        self.unit_terms.is_zero() && self.terms.is_empty()
    }
}

/// Outcome of a bounded nilpotency search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilVerdict {
    Nilpotent(usize),
    NotNilpotentWithin(usize),
    InconclusiveOverflow(usize),
}

impl NilVerdict {
    pub fn is_definite(&self) -> bool {
        !matches!(self, NilVerdict::InconclusiveOverflow(_))
    }
}

impl fmt::Display for NilVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NilVerdict::Nilpotent(k) => write!(f, "nilpotent, index {k}"),
            NilVerdict::NotNilpotentWithin(k) => write!(f, "not nilpotent within power {k}"),
            NilVerdict::InconclusiveOverflow(k) => {
                write!(f, "inconclusive: truncation overflow at power {k}")
            }
        }
    }
}

pub struct Wreath {
    id: u64,
    b: Arc<TruncatedAlgebra>,
    a: Arc<TruncatedAlgebra>,
}

impl fmt::Debug for Wreath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Wreath").field("b", &self.b).field("a", &self.a).finish()
    }
}

impl Wreath {
    pub fn new(b: Arc<TruncatedAlgebra>, a: Arc<TruncatedAlgebra>) -> Result<Self> {
        if b.field() != a.field() {
            return Err(Error::FieldMismatch(b.field(), a.field()));
        }
        Ok(Wreath { id: NEXT_WREATH.fetch_add(1, Ordering::Relaxed), b, a })
    }

    pub fn b_alg(&self) -> &TruncatedAlgebra {
        &self.b
    }

    pub fn a_alg(&self) -> &TruncatedAlgebra {
        &self.a
    }

    pub fn b_arc(&self) -> Arc<TruncatedAlgebra> {
        Arc::clone(&self.b)
    }

    pub fn a_arc(&self) -> Arc<TruncatedAlgebra> {
        Arc::clone(&self.a)
    }

    /// Number of matrix indices (the dimension of truncated `B`).
    pub fn index_len(&self) -> usize {
        self.b.dim()
    }

    /// Index of the identity of `B`, when it has one.
    pub fn unit_index(&self) -> Option<usize> {
        self.b.is_unital().then_some(0)
    }

    pub fn show_index(&self, i: usize) -> String {
        self.b.show_basis(i)
    }

    /// Index of a basis word written as in presentations (`1` for the identity).
    pub fn index_of_word(&self, text: &str) -> Result<usize> {
        let w = self.b.alphabet().parse_word(text)?;
        self.b
            .flat_index(&w)
            .ok_or_else(|| Error::InvalidArgument(format!("`{text}` is not a basis word of B")))
    }

    fn check(&self, e: &WreathElement) -> Result<()> {
        if e.host != self.id {
            return Err(Error::HostMismatch);
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.index_len() {
            return Err(Error::InvalidIndex { index: i, len: self.index_len() });
        }
        Ok(())
    }

    fn elem(&self, b: SparseVec<usize>, s: SMatrix, overflow: bool) -> WreathElement {
        WreathElement { host: self.id, b, s, overflow }
    }

    pub fn zero(&self) -> WreathElement {
        self.elem(SparseVec::zero(), SMatrix::zero(), false)
    }

    pub fn identity(&self) -> Result<WreathElement> {
        let one = self.b.one()?;
        Ok(self.elem(one.coeffs().clone(), SMatrix::zero(), false))
    }

    /// `(b, 0)`.
    pub fn from_b(&self, b: &AlgElement) -> Result<WreathElement> {
        if b.host() != self.b.id() {
            return Err(Error::HostMismatch);
        }
        Ok(self.elem(b.coeffs().clone(), SMatrix::zero(), b.overflowed()))
    }

    /// `(0, s)`, validating indices and entries.
    pub fn from_smatrix(&self, s: SMatrix) -> Result<WreathElement> {
        for (&(i, j), v) in s.entries() {
            self.check_index(i)?;
            self.check_index(j)?;
            self.a.from_coeffs(v.clone())?;
        }
        Ok(self.elem(SparseVec::zero(), s, false))
    }

    pub fn b_part(&self, e: &WreathElement) -> AlgElement {
        self.b.elem(e.b.clone(), e.overflow)
    }

    /// Entry `(i, j)` of the S-part as an element of `A`.
    pub fn entry(&self, e: &WreathElement, i: usize, j: usize) -> AlgElement {
        let v = e.s.get(i, j).cloned().unwrap_or_default();
        self.a.elem(v, e.overflow)
    }

    /// The matrix with the single entry `a` at `(i, j)`: it sends `b_j ↦ b_i ⊗ a`.
    pub fn matrix_unit(&self, i: usize, j: usize, a: &AlgElement) -> Result<WreathElement> {
        self.check_index(i)?;
        self.check_index(j)?;
        if a.host() != self.a.id() {
            return Err(Error::HostMismatch);
        }
        let mut s = SMatrix::zero();
        s.add_to(i, j, a.coeffs(), &self.a.field().one());
        Ok(self.elem(SparseVec::zero(), s, a.overflowed()))
    }

    /// `c_γ: b_j ↦ b_target ⊗ γ(b_j)`.
    pub fn c_gamma(&self, target: usize, gamma: &GammaSpec) -> Result<WreathElement> {
        self.check_index(target)?;
        let mut s = SMatrix::zero();
        let one = self.a.field().one();
        for (&j, v) in gamma.support() {
            self.check_index(j)?;
            self.a.from_coeffs(v.clone())?;
            s.add_to(target, j, v, &one);
        }
        Ok(self.elem(SparseVec::zero(), s, false))
    }

    pub fn add(&self, x: &WreathElement, y: &WreathElement) -> Result<WreathElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.elem(x.b.add(&y.b), x.s.add(&y.s), x.overflow || y.overflow))
    }

    pub fn sub(&self, x: &WreathElement, y: &WreathElement) -> Result<WreathElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.elem(x.b.sub(&y.b), x.s.add(&y.s.neg()), x.overflow || y.overflow))
    }

    pub fn neg(&self, x: &WreathElement) -> Result<WreathElement> {
        self.check(x)?;
        Ok(self.elem(x.b.neg(), x.s.neg(), x.overflow))
    }

    pub fn scale(&self, x: &WreathElement, c: &Scalar) -> Result<WreathElement> {
        self.check(x)?;
        if c.field() != self.b.field() {
            return Err(Error::FieldMismatch(self.b.field(), c.field()));
        }
        Ok(self.elem(x.b.scale(c), x.s.scale(c), x.overflow))
    }

    /// `Λ_b` restricted to the truncated index set; the flag marks columns
    /// whose image left the truncation.
    pub fn left_mult_matrix(&self, b: &AlgElement) -> Result<(ScalarMatrix, bool)> {
        if b.host() != self.b.id() {
            return Err(Error::HostMismatch);
        }
        let mut out = ScalarMatrix::new();
        let mut flag = b.overflowed();
        for j in 0..self.index_len() {
            let mut acc = Accumulator::new();
            for (k, c) in b.coeffs().iter() {
                let (v, f) = self.b.basis_product(*k, j);
                flag |= f;
                acc.add_scaled(&v, c);
            }
            for (i, beta) in acc.finish().into_terms() {
                out.insert((i, j), beta);
            }
        }
        Ok((out, flag))
    }

    /// `Λ_b · m`: row `k` of `m` moves to the rows of `b·b_k`.
    fn lambda_left(&self, b: &SparseVec<usize>, m: &SMatrix) -> (SMatrix, bool) {
        let mut out = SMatrix::zero();
        let mut flag = false;
        if b.is_zero() {
            return (out, flag);
        }
        for k in m.row_support() {
            let mut acc = Accumulator::new();
            for (kb, c) in b.iter() {
                let (v, f) = self.b.basis_product(*kb, k);
                flag |= f;
                acc.add_scaled(&v, c);
            }
            let image = acc.finish();
            for (j, entry) in m.row(k) {
                for (i, beta) in image.iter() {
                    out.add_to(*i, j, entry, beta);
                }
            }
        }
        (out, flag)
    }

    /// `m · Λ_b`: column `j` is `Σ_k (coefficient of b_k in b·b_j)·(column k of m)`.
    fn lambda_right(&self, m: &SMatrix, b: &SparseVec<usize>) -> SMatrix {
        let mut out = SMatrix::zero();
        if b.is_zero() || m.is_zero() {
            return out;
        }
        let mut columns: BTreeMap<usize, Vec<(usize, &SparseVec<usize>)>> = BTreeMap::new();
        for (&(i, k), v) in m.entries() {
            columns.entry(k).or_default().push((i, v));
        }
        let top = columns.keys().map(|&k| self.b.basis_degree(k)).max().unwrap_or(0);
        let low = b.keys().map(|&k| self.b.basis_degree(k)).min().unwrap_or(0);
        if low > top {
            return out;
        }
        for d in 0..=(top - low) {
            for j in self.b.degree_range(d) {
                let mut acc = Accumulator::new();
                for (kb, c) in b.iter() {
                    acc.add_scaled(&self.b.basis_product(*kb, j).0, c);
                }
                for (k, beta) in acc.finish().iter() {
                    if let Some(col) = columns.get(k) {
                        for (i, entry) in col {
                            out.add_to(*i, j, entry, beta);
                        }
                    }
                }
            }
        }
        out
    }

    /// Matrix product with entries multiplied in `A`.
    pub fn smatrix_mul(&self, m1: &SMatrix, m2: &SMatrix) -> (SMatrix, bool) {
        let mut out = SMatrix::zero();
        let mut flag = false;
        let one = self.a.field().one();
        for (&(i, k), x) in m1.entries() {
            for (j, y) in m2.row(k) {
                let (p, f) = self.a.mul_coords(x, y);
                flag |= f;
                out.add_to(i, j, &p, &one);
            }
        }
        (out, flag)
    }

    /// Product that never fails on overflow; lost terms set the flag.
    pub fn mul_flagged(&self, x: &WreathElement, y: &WreathElement) -> Result<WreathElement> {
        Ok(self.mul_parts(x, y)?.0)
    }

    fn mul_parts(&self, x: &WreathElement, y: &WreathElement) -> Result<(WreathElement, bool, bool)> {
        self.check(x)?;
        self.check(y)?;
        let (b, fb) = self.b.mul_coords(&x.b, &y.b);
        let (left, fl) = self.lambda_left(&x.b, &y.s);
        let right = self.lambda_right(&x.s, &y.b);
        let (prod, fa) = self.smatrix_mul(&x.s, &y.s);
        let s = left.add(&right).add(&prod);
        let lost_b = fb || fl;
        let flag = x.overflow || y.overflow || lost_b || fa;
        Ok((self.elem(b, s, flag), lost_b, fa))
    }

    /// Product honouring the overflow policies of `B` and `A`.
    pub fn mul(&self, x: &WreathElement, y: &WreathElement) -> Result<WreathElement> {
        let (p, lost_b, lost_a) = self.mul_parts(x, y)?;
        if lost_b && self.b.policy() == OverflowPolicy::Reject {
            return Err(Error::Overflow(self.b.truncation()));
        }
        if lost_a && self.a.policy() == OverflowPolicy::Reject {
            return Err(Error::Overflow(self.a.truncation()));
        }
        Ok(p)
    }

    pub fn pow(&self, x: &WreathElement, k: u32) -> Result<WreathElement> {
        if k == 0 {
            return self.identity();
        }
        let mut acc = x.clone();
        for _ in 1..k {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Image of the basis vector `b_j`.
    pub fn apply(&self, e: &WreathElement, j: usize) -> Result<ColumnImage> {
        self.check(e)?;
        self.check_index(j)?;
        let mut acc = Accumulator::new();
        let mut flag = e.overflow;
        for (k, c) in e.b.iter() {
            let (v, f) = self.b.basis_product(*k, j);
            flag |= f;
            acc.add_scaled(&v, c);
        }
        let terms = e
            .s
            .entries()
            .filter(|((_, col), _)| *col == j)
            .map(|(&(i, _), v)| (i, v.clone()))
            .collect();
        Ok(ColumnImage { unit_terms: acc.finish(), terms, overflow: flag })
    }

    pub fn show_image(&self, img: &ColumnImage) -> String {
        let rows: BTreeSet<usize> = img
            .unit_terms
            .keys()
            .copied()
            .chain(img.terms.keys().copied())
            .collect();
        if rows.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = rows
            .into_iter()
            .map(|i| {
                let mut coeff = Vec::new();
                if let Some(c) = img.unit_terms.get(&i) {
                    coeff.push(c.to_string());
                }
                if let Some(v) = img.terms.get(&i) {
                    coeff.push(self.a.show(&self.a.elem(v.clone(), false)));
                }
                format!("{}⊗({})", self.show_index(i), coeff.join(" + "))
            })
            .collect();
        let s = parts.join(" + ");
        if img.overflow {
            format!("{s} [overflow]")
        } else {
            s
        }
    }

    /// Text that [`parse_wreath_expr`] reads back: the B-part followed by `e(i,j,a)` terms.
    pub fn show(&self, e: &WreathElement) -> String {
        let mut parts = Vec::new();
        if !e.b.is_zero() {
            parts.push(self.b.show(&self.b.elem(e.b.clone(), false)));
        }
        for (&(i, j), v) in e.s.entries() {
            let a = self.a.show(&self.a.elem(v.clone(), false));
            parts.push(format!("e({}, {}, {})", i + 1, j + 1, a));
        }
        let s = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if e.overflow {
            format!("{s} [overflow]")
        } else {
            s
        }
    }

    pub fn flatten(&self, e: &WreathElement) -> SparseVec<WKey> {
        let mut terms: Vec<(WKey, Scalar)> =
            e.b.iter().map(|(k, c)| (WKey::B(*k), c.clone())).collect();
        for (&(i, j), v) in e.s.entries() {
            terms.extend(v.iter().map(|(k, c)| (WKey::S(i, j, *k), c.clone())));
        }
        SparseVec::from_terms(terms)
    }

    pub fn unflatten(&self, v: &SparseVec<WKey>) -> WreathElement {
        let mut b = Vec::new();
        let mut s = SMatrix::zero();
        for (k, c) in v.iter() {
            match k {
                WKey::B(i) => b.push((*i, c.clone())),
                WKey::S(i, j, a) => s.add_to(*i, *j, &SparseVec::unit(*a, c.field().one()), c),
            }
        }
        self.elem(SparseVec::from_terms(b), s, false)
    }

    pub fn span(&self, elems: &[WreathElement]) -> Result<Subspace<WKey>> {
        let mut out = Subspace::new();
        for e in elems {
            self.check(e)?;
            out.insert(self.flatten(e));
        }
        Ok(out)
    }

    /// `span{s·t}` over basis vectors; the flag reports lost terms.
    pub fn product_span(&self, s: &Subspace<WKey>, t: &Subspace<WKey>) -> (Subspace<WKey>, bool) {
        let left: Vec<WreathElement> = s.basis().iter().map(|v| self.unflatten(v)).collect();
        let right: Vec<WreathElement> = t.basis().iter().map(|v| self.unflatten(v)).collect();
        let mut out = Subspace::new();
        let mut flag = false;
        for x in &left {
            for y in &right {
                let p = self.mul_flagged(x, y).expect("same host");
                flag |= p.overflow;
                out.insert(self.flatten(&p));
            }
        }
        (out, flag)
    }

    /// First `k ≤ max_power` with `e^k = 0`; any overflow makes the answer inconclusive.
    pub fn nilpotency_check(&self, e: &WreathElement, max_power: usize) -> Result<NilVerdict> {
        self.check(e)?;
        if max_power == 0 {
            return Err(Error::InvalidArgument("max_power must be at least 1".into()));
        }
        let mut p = e.clone();
        for k in 1..=max_power {
            if p.overflow {
                return Ok(NilVerdict::InconclusiveOverflow(k));
            }
            if p.is_zero() {
                return Ok(NilVerdict::Nilpotent(k));
            }
            if k < max_power {
                p = self.mul_flagged(&p, e)?;
            }
        }
        Ok(NilVerdict::NotNilpotentWithin(max_power))
    }

    /// `π(c_α) = α(1)` for a matrix supported in the identity row.
    pub fn rho1_projection(&self, m: &SMatrix) -> Result<AlgElement> {
        let unit = self.unit_index().ok_or(Error::NotUnital)?;
        if m.row_support().iter().any(|&i| i != unit) {
            return Err(Error::SupportOutsideRow(unit + 1));
        }
        Ok(self.a.elem(m.get(unit, unit).cloned().unwrap_or_default(), false))
    }
}
