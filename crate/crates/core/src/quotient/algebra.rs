//! Graded algebras `F<X | R>` computed exactly up to a truncation degree.
//!
//! Degree `d` is built from degree `< d`. Every word of degree `d` ends in a
//! letter, so modulo the ideal `I` it equals `NF(prefix)·g` for a normal
//! prefix. The *candidates* of degree `d` are therefore the words `w·g` with
//! `w` normal; they span the component. Write `ψ(u·g) = NF(u)·g` for the
//! projection of all words onto the candidate span. Because
//!
//! ```text
//! I_d = Σ_g I_{d-deg g}·g + Σ_r F<X>_{d-deg r}·r
//! ```
//!
//! (split `u·r·v` on whether `v` is empty) and `ψ` kills `I_{d'}·g`, the ideal
//! meets the candidate span in `span{ψ(u·r)}` with `u` ranging over normal
//! words. Normal words are the candidates that are not pivots of the reduced
//! echelon form of that span, pivots being deglex-greatest words. They are
//! exactly the words outside the leading-word set of `I_d`, and normal forms
//! agree with those from a full echelon form of `I_d`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{self, Evaluator};
use crate::free::{format_terms, Alphabet, FreeElement, Word};
use crate::quotient::presentation::Presentation;
use crate::scalar::{FieldSpec, Scalar};
use crate::sparse::{Accumulator, SparseVec};
use crate::subspace::Subspace;

static NEXT_HOST: AtomicU64 = AtomicU64::new(1);

/// What to do when a product has terms above the truncation degree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverflowPolicy {
    Reject,
    #[default]
    TruncateAndFlag,
}

struct Level {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    /// `right[pos][g]`: normal form of `words[pos]·g`, as positions in level `d + deg g`.
    right: Vec<Vec<Option<SparseVec<usize>>>>,
}

/// An element of a [`TruncatedAlgebra`], in coordinates of its flat basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgElement {
    host: u64,
    coeffs: SparseVec<usize>,
    overflow: bool,
}

impl AlgElement {
    pub fn coeffs(&self) -> &SparseVec<usize> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// Set when some product that produced this element lost terms above the truncation.
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

pub struct TruncatedAlgebra {
    id: u64,
    pres: Presentation,
    n: usize,
    policy: OverflowPolicy,
    levels: Vec<Level>,
    /// Flat index of the first basis word of each degree (entry 0 is the unit).
    offsets: Vec<usize>,
    locs: Vec<(usize, usize)>,
    nilpotent_from: Option<usize>,
    ideal_dims: Vec<u128>,
    products: RwLock<HashMap<(usize, usize), (SparseVec<usize>, bool)>>,
}

impl fmt::Debug for TruncatedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedAlgebra")
            .field("truncation", &self.n)
            .field("dims", &self.dims())
            .finish()
    }
}

impl TruncatedAlgebra {
    pub fn build(pres: Presentation, n: usize) -> Result<Self> {
        Self::build_with_policy(pres, n, OverflowPolicy::default())
    }

    pub fn build_with_policy(pres: Presentation, n: usize, policy: OverflowPolicy) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("truncation degree must be positive".into()));
        }
        for r in pres.relations() {
            let d = r.maxdeg()?;
            if d > n {
                return Err(Error::RelationTooLong { degree: d, bound: n });
            }
        }
        let alphabet = pres.alphabet().clone();
        let m = alphabet.len();
        let mut rels_by_degree: Vec<Vec<&FreeElement>> = vec![Vec::new(); n + 1];
        for r in pres.relations() {
            rels_by_degree[r.maxdeg()?].push(r);
        }

        let one = pres.field().one();
        let empty = Word::empty();
        let mut levels = vec![Level {
            words: vec![empty.clone()],
            index: HashMap::from([(empty, 0)]),
            right: vec![vec![None; m]],
        }];

        for d in 1..=n {
            // Candidates w·g, sorted so that key order is deglex order.
            let mut cands: Vec<(Word, usize, usize)> = Vec::new();
            for g in 0..m {
                let gd = alphabet.degree(g);
                if gd > d {
                    continue;
                }
                let letter = alphabet.letter(g);
                for (pos, w) in levels[d - gd].words.iter().enumerate() {
                    cands.push((w.concat(&letter), g, pos));
                }
            }
            cands.sort_by(|a, b| a.0.cmp(&b.0));
            let mut cand_of: Vec<Vec<usize>> = (0..m)
                .map(|g| {
                    let gd = alphabet.degree(g);
                    vec![usize::MAX; if gd > d { 0 } else { levels[d - gd].words.len() }]
                })
                .collect();
            for (i, (_, g, pos)) in cands.iter().enumerate() {
                cand_of[*g][*pos] = i;
            }

            let mut kernel: Subspace<usize> = Subspace::new();
            'rels: for e in 1..=d {
                for r in &rels_by_degree[e] {
                    for upos in 0..levels[d - e].words.len() {
                        if kernel.dim() == cands.len() {
                            break 'rels;
                        }
                        let mut acc = Accumulator::new();
                        for (w, c) in r.terms().iter() {
                            let (prefix, g) = w.split_last(&alphabet).expect("relations have positive degree");
                            let prefix_nf = right_mul_word(&levels, &alphabet, &one, d - e, upos, prefix.letters());
                            for (p, x) in prefix_nf.iter() {
                                acc.add_term(cand_of[g as usize][*p], x * c);
                            }
                        }
                        kernel.insert(acc.finish());
                    }
                }
            }
            kernel.make_reduced();

            let mut words = Vec::new();
            let mut new_pos = vec![usize::MAX; cands.len()];
            for (i, (w, _, _)) in cands.iter().enumerate() {
                if !kernel.is_pivot(&i) {
                    new_pos[i] = words.len();
                    words.push(w.clone());
                }
            }
            for (i, (_, g, pos)) in cands.iter().enumerate() {
                let nf = match kernel.row_for_pivot(&i) {
                    None => SparseVec::unit(new_pos[i], pres.field().one()),
                    Some(row) => SparseVec::from_terms(
                        row.iter()
                            .filter(|(k, _)| *k != i)
                            .map(|(k, c)| (new_pos[*k], -c)),
                    ),
                };
                let lower = d - alphabet.degree(*g);
                levels[lower].right[*pos][*g] = Some(nf);
            }
            let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
            let right = vec![vec![None; m]; words.len()];
            levels.push(Level { words, index, right });
        }

        let unital = pres.is_unital();
        let mut offsets = vec![0; n + 2];
        let mut locs = Vec::new();
        if unital {
            locs.push((0, 0));
        }
        for d in 1..=n {
            offsets[d] = locs.len();
            for pos in 0..levels[d].words.len() {
                locs.push((d, pos));
            }
        }
        offsets[n + 1] = locs.len();

        let maxdeg = alphabet.max_degree();
        let nilpotent_from = (1..=n)
            .find(|&d0| d0 + maxdeg - 1 <= n && (d0..d0 + maxdeg).all(|e| levels[e].words.is_empty()));

        let counts = alphabet.word_counts(n);
        let ideal_dims = (0..=n).map(|d| counts[d] - levels[d].words.len() as u128).collect();

        Ok(TruncatedAlgebra {
            id: NEXT_HOST.fetch_add(1, Ordering::Relaxed),
            pres,
            n,
            policy,
            levels,
            offsets,
            locs,
            nilpotent_from,
            ideal_dims,
            products: RwLock::new(HashMap::new()),
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.pres.alphabet()
    }

    pub fn field(&self) -> FieldSpec {
        self.pres.field()
    }

    pub fn is_unital(&self) -> bool {
        self.pres.is_unital()
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn policy(&self) -> OverflowPolicy {
        self.policy
    }

    /// Smallest degree from which the algebra is provably zero, if any.
    pub fn nilpotent_from(&self) -> Option<usize> {
        self.nilpotent_from
    }

    /// Dimension of the whole truncated algebra (including the unit if adjoined).
    pub fn dim(&self) -> usize {
        self.locs.len()
    }

    pub fn graded_dim(&self, d: usize) -> Result<usize> {
        if d > self.n {
            return Err(Error::DegreeOutOfRange { degree: d, bound: self.n });
        }
        Ok(self.levels[d].words.len())
    }

    pub fn ideal_dim(&self, d: usize) -> Result<u128> {
        if d > self.n {
            return Err(Error::DegreeOutOfRange { degree: d, bound: self.n });
        }
        Ok(self.ideal_dims[d])
    }

    /// Dimensions of degrees `1..=N`.
    pub fn dims(&self) -> Vec<usize> {
        (1..=self.n).map(|d| self.levels[d].words.len()).collect()
    }

    /// Normal words of degree `d`, in deglex order.
    pub fn degree_basis(&self, d: usize) -> &[Word] {
        &self.levels[d].words
    }

    /// Range of flat indices holding degree `d`.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        if d == 0 {
            return if self.is_unital() { 0..1 } else { 0..0 };
        }
        if d > self.n {
            return self.locs.len()..self.locs.len();
        }
        self.offsets[d]..self.offsets[d + 1]
    }

    pub fn basis_word(&self, flat: usize) -> &Word {
        let (d, pos) = self.locs[flat];
        &self.levels[d].words[pos]
    }

    pub fn basis_degree(&self, flat: usize) -> usize {
        self.locs[flat].0
    }

    pub fn flat_index(&self, w: &Word) -> Option<usize> {
        let d = w.degree();
        if d > self.n || (d == 0 && !self.is_unital()) {
            return None;
        }
        let pos = *self.levels[d].index.get(w)?;
        Some(if d == 0 { 0 } else { self.offsets[d] + pos })
    }

    pub fn show_basis(&self, flat: usize) -> String {
        self.alphabet().show_word(self.basis_word(flat))
    }

    pub(crate) fn elem(&self, coeffs: SparseVec<usize>, overflow: bool) -> AlgElement {
        AlgElement { host: self.id, coeffs, overflow }
    }

    fn check(&self, a: &AlgElement) -> Result<()> {
        if a.host != self.id {
            return Err(Error::HostMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgElement {
        self.elem(SparseVec::zero(), false)
    }

    pub fn one(&self) -> Result<AlgElement> {
        if !self.is_unital() {
            return Err(Error::NotUnital);
        }
        Ok(self.elem(SparseVec::unit(0, self.field().one()), false))
    }

    pub fn basis_element(&self, flat: usize) -> Result<AlgElement> {
        if flat >= self.dim() {
            return Err(Error::InvalidIndex { index: flat, len: self.dim() });
        }
        Ok(self.elem(SparseVec::unit(flat, self.field().one()), false))
    }

    pub fn from_coeffs(&self, coeffs: SparseVec<usize>) -> Result<AlgElement> {
        if let Some((k, _)) = coeffs.leading() {
            if *k >= self.dim() {
                return Err(Error::InvalidIndex { index: *k, len: self.dim() });
            }
        }
        if let Some((_, c)) = coeffs.iter().next() {
            if c.field() != self.field() {
                return Err(Error::FieldMismatch(self.field(), c.field()));
            }
        }
        Ok(self.elem(coeffs, false))
    }

    pub fn scalar(&self, c: &Scalar) -> Result<AlgElement> {
        Ok(self.one()?.coeffs.scale(c)).map(|v| self.elem(v, false))
    }

    /// Generator `g` reduced to normal form.
    pub fn generator(&self, g: usize) -> Result<AlgElement> {
        self.word(&self.alphabet().letter(g))
    }

    /// Normal form of an arbitrary word. Words above the truncation give
    /// zero, flagged unless the algebra is provably zero there.
    pub fn word(&self, w: &Word) -> Result<AlgElement> {
        if w.is_empty() {
            return self.one();
        }
        if w.degree() > self.n {
            let exact = self.nilpotent_from.is_some_and(|z| w.degree() >= z);
            return self.overflowing(exact);
        }
        let v = right_mul_word(&self.levels, self.alphabet(), &self.field().one(), 0, 0, w.letters());
        let coeffs = v.map_keys(|&p| self.offsets[w.degree()] + p);
        Ok(self.elem(coeffs, false))
    }

    fn overflowing(&self, exact: bool) -> Result<AlgElement> {
        if !exact && self.policy == OverflowPolicy::Reject {
            return Err(Error::Overflow(self.n));
        }
        Ok(self.elem(SparseVec::zero(), !exact))
    }

    pub fn from_free(&self, f: &FreeElement) -> Result<AlgElement> {
        if f.field() != self.field() {
            return Err(Error::FieldMismatch(self.field(), f.field()));
        }
        let mut acc = Accumulator::new();
        let mut flag = false;
        for (w, c) in f.terms().iter() {
            let e = self.word(w)?;
            flag |= e.overflow;
            acc.add_scaled(&e.coeffs, c);
        }
        Ok(self.elem(acc.finish(), flag))
    }

    /// Parses an expression in the generators.
    pub fn parse(&self, text: &str) -> Result<AlgElement> {
        self.eval_expr(&expr::parse(text)?)
    }

    pub fn eval_expr(&self, e: &expr::Expr) -> Result<AlgElement> {
        let ev = AlgEval(self);
        let v = ev.eval(e)?;
        ev.elem(v)
    }

    pub fn add(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.elem(a.coeffs.add(&b.coeffs), a.overflow || b.overflow))
    }

    pub fn sub(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.elem(a.coeffs.sub(&b.coeffs), a.overflow || b.overflow))
    }

    pub fn neg(&self, a: &AlgElement) -> Result<AlgElement> {
        self.check(a)?;
        Ok(self.elem(a.coeffs.neg(), a.overflow))
    }

    pub fn scale(&self, a: &AlgElement, c: &Scalar) -> Result<AlgElement> {
        self.check(a)?;
        if c.field() != self.field() {
            return Err(Error::FieldMismatch(self.field(), c.field()));
        }
        Ok(self.elem(a.coeffs.scale(c), a.overflow))
    }

    /// Product of basis elements `i·j`, with an overflow flag.
    pub fn basis_product(&self, i: usize, j: usize) -> (SparseVec<usize>, bool) {
        if let Some(hit) = self.products.read().expect("product cache").get(&(i, j)) {
            return hit.clone();
        }
        let (di, pi) = self.locs[i];
        let dj = self.locs[j].0;
        let out = if di + dj > self.n {
            let exact = self.nilpotent_from.is_some_and(|z| di + dj >= z);
            (SparseVec::zero(), !exact)
        } else {
            let w = &self.levels[dj].words[self.locs[j].1];
            let v = right_mul_word(&self.levels, self.alphabet(), &self.field().one(), di, pi, w.letters());
            (v.map_keys(|&p| self.offsets_or_unit(di + dj) + p), false)
        };
        self.products
            .write()
            .expect("product cache")
            .insert((i, j), out.clone());
        out
    }

    fn offsets_or_unit(&self, d: usize) -> usize {
        if d == 0 {
            0
        } else {
            self.offsets[d]
        }
    }

    /// Product dropping terms above the truncation and flagging the loss,
    /// regardless of the configured policy.
    pub fn mul_flagged(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check(a)?;
        self.check(b)?;
        let (v, flag) = self.mul_coords(&a.coeffs, &b.coeffs);
        Ok(self.elem(v, flag || a.overflow || b.overflow))
    }

    /// Product of coordinate vectors; the flag reports lost terms.
    pub fn mul_coords(&self, a: &SparseVec<usize>, b: &SparseVec<usize>) -> (SparseVec<usize>, bool) {
        let mut acc = Accumulator::new();
        let mut flag = false;
        for (i, ca) in a.iter() {
            for (j, cb) in b.iter() {
                let (v, f) = self.basis_product(*i, *j);
                flag |= f;
                acc.add_scaled(&v, &(ca * cb));
            }
        }
        (acc.finish(), flag)
    }

    /// Product honouring the overflow policy.
    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        let p = self.mul_flagged(a, b)?;
        if p.overflow && !(a.overflow || b.overflow) && self.policy == OverflowPolicy::Reject {
            return Err(Error::Overflow(self.n));
        }
        Ok(p)
    }

    pub fn pow(&self, a: &AlgElement, k: u32) -> Result<AlgElement> {
        if k == 0 {
            return self.one();
        }
        let mut acc = a.clone();
        for _ in 1..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Least degree among the terms of `a`.
    pub fn mindeg(&self, a: &AlgElement) -> Result<usize> {
        a.coeffs
            .keys()
            .map(|&k| self.locs[k].0)
            .min()
            .ok_or(Error::ZeroElement)
    }

    pub fn maxdeg(&self, a: &AlgElement) -> Result<usize> {
        a.coeffs
            .leading()
            .map(|(k, _)| self.locs[*k].0)
            .ok_or(Error::ZeroElement)
    }

    pub fn homogeneous_component(&self, a: &AlgElement, d: usize) -> AlgElement {
        let r = self.degree_range(d);
        self.elem(a.coeffs.filter(|k| r.contains(k)), a.overflow)
    }

    pub fn show(&self, a: &AlgElement) -> String {
        let s = format_terms(&a.coeffs, self.field(), |&k| {
            if self.locs[k].0 == 0 {
                None
            } else {
                Some(self.show_basis(k))
            }
        });
        if a.overflow {
            format!("{s} [overflow]")
        } else {
            s
        }
    }

    /// Span of the given elements as a coordinate subspace.
    pub fn span(&self, elems: &[AlgElement]) -> Result<Subspace<usize>> {
        let mut s = Subspace::new();
        for e in elems {
            self.check(e)?;
            s.insert(e.coeffs.clone());
        }
        Ok(s)
    }

    /// The whole homogeneous component of degree `d`.
    pub fn component(&self, d: usize) -> Subspace<usize> {
        let one = self.field().one();
        Subspace::span(self.degree_range(d).map(|k| SparseVec::unit(k, one.clone())))
    }

    /// Span of the generators.
    pub fn generator_span(&self) -> Result<Subspace<usize>> {
        let gens: Result<Vec<_>> = (0..self.alphabet().len()).map(|g| self.generator(g)).collect();
        self.span(&gens?)
    }

    /// `span{s·t}` over basis vectors of `s` and `t`; the flag reports lost terms.
    pub fn product_span(&self, s: &Subspace<usize>, t: &Subspace<usize>) -> (Subspace<usize>, bool) {
        let mut out = Subspace::new();
        let mut flag = false;
        for a in s.basis() {
            let a = self.elem(a.clone(), false);
            for b in t.basis() {
                let b = self.elem(b.clone(), false);
                let p = self.mul_flagged(&a, &b).expect("same host");
                flag |= p.overflow;
                out.insert(p.coeffs);
            }
        }
        (out, flag)
    }
}

/// Right-multiplies the normal word at `(level, pos)` by a sequence of letters.
fn right_mul_word(
    levels: &[Level],
    alphabet: &Alphabet,
    one: &Scalar,
    level: usize,
    pos: usize,
    letters: &[u32],
) -> SparseVec<usize> {
    let mut v = SparseVec::unit(pos, one.clone());
    let mut d = level;
    for &g in letters {
        let mut acc = Accumulator::new();
        for (p, c) in v.iter() {
            let img = levels[d].right[*p][g as usize]
                .as_ref()
                .expect("right multiplication within truncation");
            acc.add_scaled(img, c);
        }
        v = acc.finish();
        d += alphabet.degree(g as usize);
        if v.is_zero() {
            break;
        }
    }
    v
}

enum Val {
    Scalar(Scalar),
    Elem(AlgElement),
}

struct AlgEval<'a>(&'a TruncatedAlgebra);

impl AlgEval<'_> {
    fn elem(&self, v: Val) -> Result<AlgElement> {
        match v {
            Val::Elem(e) => Ok(e),
            Val::Scalar(c) if c.is_zero() => Ok(self.0.zero()),
            Val::Scalar(c) => self.0.scalar(&c),
        }
    }
}

impl Evaluator for AlgEval<'_> {
    type Value = Val;

    fn number(&self, q: &num_rational::BigRational) -> Result<Val> {
        Ok(Val::Scalar(self.0.field().from_rational(q)?))
    }

    fn var(&self, name: &str, _column: usize) -> Result<Val> {
        let w = self
            .0
            .alphabet()
            .split_word(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Val::Elem(self.0.word(&w)?))
    }

    fn add(&self, a: Val, b: Val) -> Result<Val> {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x.try_add(&y)?)),
            (a, b) => Ok(Val::Elem(self.0.add(&self.elem(a)?, &self.elem(b)?)?)),
        }
    }

    fn mul(&self, a: Val, b: Val) -> Result<Val> {
        match (a, b) {
            (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x.try_mul(&y)?)),
            (Val::Scalar(x), Val::Elem(e)) | (Val::Elem(e), Val::Scalar(x)) => {
                Ok(Val::Elem(self.0.scale(&e, &x)?))
            }
            (Val::Elem(x), Val::Elem(y)) => Ok(Val::Elem(self.0.mul(&x, &y)?)),
        }
    }

    fn neg(&self, a: Val) -> Result<Val> {
        match a {
            Val::Scalar(x) => Ok(Val::Scalar(x.neg_ref())),
            Val::Elem(e) => Ok(Val::Elem(self.0.neg(&e)?)),
        }
    }

    fn one(&self) -> Result<Val> {
        Ok(Val::Scalar(self.0.field().one()))
    }
}
