//! Words and linear combinations of words over a graded alphabet.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::{self, Evaluator};
use crate::scalar::{FieldSpec, Scalar};
use crate::sparse::{Accumulator, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    degrees: Vec<usize>,
    lookup: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut lookup = HashMap::new();
        for (name, deg) in gens {
            let name = name.into();
            if name.is_empty()
                || !name.chars().next().unwrap().is_alphabetic()
                || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
            {
                return Err(Error::InvalidArgument(format!("bad generator name `{name}`")));
            }
            if deg == 0 {
                return Err(Error::InvalidArgument(format!("generator `{name}` has degree 0")));
            }
            if lookup.insert(name.clone(), names.len()).is_some() {
                return Err(Error::Duplicate(format!("generator `{name}`")));
            }
            names.push(name);
            degrees.push(deg);
        }
        Ok(Alphabet { names, degrees, lookup })
    }

    /// Generators named by the given strings, all of degree one.
    pub fn degree_one(names: &[&str]) -> Result<Self> {
        Self::new(names.iter().map(|n| (n.to_string(), 1)))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn degree(&self, g: usize) -> usize {
        self.degrees[g]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(1)
    }

    pub fn all_degree_one(&self) -> bool {
        self.degrees.iter().all(|&d| d == 1)
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, usize)> {
        self.names.iter().map(String::as_str).zip(self.degrees.iter().copied())
    }

    /// Number of words of each degree `0..=max`, saturating at `u128::MAX`.
    pub fn word_counts(&self, max: usize) -> Vec<u128> {
        let mut counts = vec![0u128; max + 1];
        counts[0] = 1;
        for d in 1..=max {
            let mut c = 0u128;
            for &g in &self.degrees {
                if g <= d {
                    c = c.saturating_add(counts[d - g]);
                }
            }
            counts[d] = c;
        }
        counts
    }

    pub fn word(&self, letters: Vec<u32>) -> Word {
        let degree = letters.iter().map(|&l| self.degrees[l as usize]).sum();
        Word { degree, letters }
    }

    pub fn letter(&self, g: usize) -> Word {
        self.word(vec![g as u32])
    }

    /// Splits `text` into generator names, taking the longest name at each step.
    pub fn split_word(&self, text: &str) -> Option<Word> {
        let mut letters = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let mut best: Option<(usize, usize)> = None;
            for (i, name) in self.names.iter().enumerate() {
                if rest.starts_with(name.as_str()) && best.is_none_or(|(_, l)| name.len() > l) {
                    best = Some((i, name.len()));
                }
            }
            let (g, l) = best?;
            letters.push(g as u32);
            rest = &rest[l..];
        }
        Some(self.word(letters))
    }

    /// Parses a word written as letter names optionally separated by `*`,
    /// or `1` for the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let t = text.trim();
        if t == "1" {
            return Ok(self.word(Vec::new()));
        }
        let mut letters = Vec::new();
        for part in t.split('*') {
            let part = part.trim();
            let w = self
                .split_word(part)
                .filter(|w| !w.is_empty())
                .ok_or_else(|| Error::UnknownGenerator(part.to_string()))?;
            letters.extend(w.letters);
        }
        Ok(self.word(letters))
    }

    pub fn show_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<&str> = w.letters.iter().map(|&l| self.names[l as usize].as_str()).collect();
        parts.join("*")
    }

    /// All words of degree exactly `d`, in increasing deglex order.
    pub fn words_of_degree(&self, d: usize) -> Vec<Word> {
        let mut by_degree: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new()]];
        for e in 1..=d {
            let mut out = Vec::new();
            for g in 0..self.len() {
                let gd = self.degrees[g];
                if gd <= e {
                    for tail in &by_degree[e - gd] {
                        let mut l = vec![g as u32];
                        l.extend_from_slice(tail);
                        out.push(l);
                    }
                }
            }
            by_degree.push(out);
        }
        let mut words: Vec<Word> = by_degree.swap_remove(d).into_iter().map(|l| self.word(l)).collect();
        words.sort();
        words
    }
}

/// A word in the generators. Ordered degree-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    degree: usize,
    letters: Vec<u32>,
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word { degree: 0, letters: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { degree: self.degree + other.degree, letters }
    }

    /// Splits off the last letter.
    pub fn split_last(&self, alphabet: &Alphabet) -> Option<(Word, u32)> {
        let (&last, init) = self.letters.split_last()?;
        Some((
            Word {
                degree: self.degree - alphabet.degree(last as usize),
                letters: init.to_vec(),
            },
            last,
        ))
    }
}

pub fn word_concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

/// A finite linear combination of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeElement {
    field: FieldSpec,
    terms: SparseVec<Word>,
}

impl FreeElement {
    pub fn zero(field: FieldSpec) -> Self {
        FreeElement { field, terms: SparseVec::zero() }
    }

    pub fn monomial(field: FieldSpec, w: Word, c: Scalar) -> Self {
        FreeElement { field, terms: SparseVec::unit(w, c) }
    }

    pub fn word(field: FieldSpec, w: Word) -> Self {
        Self::monomial(field, w, field.one())
    }

    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        FreeElement { field, terms: SparseVec::from_terms(terms) }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn terms(&self) -> &SparseVec<Word> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FreeElement { field: self.field, terms: self.terms.add(&other.terms) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FreeElement { field: self.field, terms: self.terms.sub(&other.terms) })
    }

    pub fn neg(&self) -> Self {
        FreeElement { field: self.field, terms: self.terms.neg() }
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch(self.field, c.field()));
        }
        Ok(FreeElement { field: self.field, terms: self.terms.scale(c) })
    }

    /// Least degree of a nonzero homogeneous component.
    pub fn mindeg(&self) -> Result<usize> {
        self.terms.iter().map(|(w, _)| w.degree()).min().ok_or(Error::ZeroElement)
    }

    pub fn maxdeg(&self) -> Result<usize> {
        self.terms.leading().map(|(w, _)| w.degree()).ok_or(Error::ZeroElement)
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.mindeg(), self.maxdeg()) {
            (Ok(a), Ok(b)) => a == b,
            _ => true,
        }
    }

    pub fn homogeneous_component(&self, d: usize) -> Self {
        FreeElement { field: self.field, terms: self.terms.filter(|w| w.degree() == d) }
    }

    /// Substitutes a word for each letter.
    pub fn substitute(&self, images: &[Word]) -> Self {
        let terms = self.terms.iter().map(|(w, c)| {
            let mut out = Word::empty();
            for &l in w.letters() {
                out = out.concat(&images[l as usize]);
            }
            (out, c.clone())
        });
        FreeElement::from_terms(self.field, terms)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> FreeDisplay<'a> {
        FreeDisplay { elem: self, alphabet }
    }
}

pub fn free_mul(a: &FreeElement, b: &FreeElement) -> Result<FreeElement> {
    a.check(b)?;
    let mut acc = Accumulator::new();
    for (u, cu) in a.terms.iter() {
        for (v, cv) in b.terms.iter() {
            acc.add_term(u.concat(v), cu * cv);
        }
    }
    Ok(FreeElement { field: a.field, terms: acc.finish() })
}

pub fn element_mindeg(a: &FreeElement) -> Result<usize> {
    a.mindeg()
}

pub fn homogeneous_component(a: &FreeElement, d: usize) -> FreeElement {
    a.homogeneous_component(d)
}

/// Formats a linear combination as `c*w + ...` with terms in decreasing order.
pub fn format_terms<K>(
    terms: &SparseVec<K>,
    field: FieldSpec,
    show: impl Fn(&K) -> Option<String>,
) -> String
where
    K: Ord + Clone,
{
    if terms.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (k, c)) in terms.iter().rev().enumerate() {
        let negative = field == FieldSpec::Rationals && c.is_negative();
        let mag = if negative { -c } else { c.clone() };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        match show(k) {
            None => out.push_str(&mag.to_string()),
            Some(w) if mag.is_one() => out.push_str(&w),
            Some(w) => {
                out.push_str(&mag.to_string());
                out.push('*');
                out.push_str(&w);
            }
        }
    }
    out
}

pub struct FreeDisplay<'a> {
    elem: &'a FreeElement,
    alphabet: &'a Alphabet,
}

impl fmt::Display for FreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_terms(&self.elem.terms, self.elem.field, |w| {
            if w.is_empty() {
                None
            } else {
                Some(self.alphabet.show_word(w))
            }
        });
        f.write_str(&s)
    }
}

/// Evaluates expressions in the free algebra.
pub struct FreeEval<'a> {
    pub alphabet: &'a Alphabet,
    pub field: FieldSpec,
}

impl Evaluator for FreeEval<'_> {
    type Value = FreeElement;

    fn number(&self, q: &BigRational) -> Result<FreeElement> {
        Ok(FreeElement::monomial(self.field, Word::empty(), self.field.from_rational(q)?))
    }

    fn var(&self, name: &str, _column: usize) -> Result<FreeElement> {
        self.alphabet
            .split_word(name)
            .map(|w| FreeElement::word(self.field, w))
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn add(&self, a: FreeElement, b: FreeElement) -> Result<FreeElement> {
        a.add(&b)
    }

    fn mul(&self, a: FreeElement, b: FreeElement) -> Result<FreeElement> {
        free_mul(&a, &b)
    }

    fn neg(&self, a: FreeElement) -> Result<FreeElement> {
        Ok(a.neg())
    }

    fn one(&self) -> Result<FreeElement> {
        Ok(FreeElement::word(self.field, Word::empty()))
    }
}

/// Parses a free-algebra expression such as `x*y - y*x` or `x^3`.
pub fn parse_free(alphabet: &Alphabet, field: FieldSpec, text: &str) -> Result<FreeElement> {
    let e = expr::parse(text)?;
    FreeEval { alphabet, field }.eval(&e)
}
