//! Sparse coordinate vectors with exact coefficients.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// A finitely supported vector: strictly increasing keys, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVec<K> {
    terms: Vec<(K, Scalar)>,
}

impl<K> Default for SparseVec<K> {
    fn default() -> Self {
        SparseVec { terms: Vec::new() }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn zero() -> Self {
        SparseVec { terms: Vec::new() }
    }

    pub fn unit(key: K, coeff: Scalar) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            SparseVec { terms: vec![(key, coeff)] }
        }
    }

    /// Builds a vector from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms<I: IntoIterator<Item = (K, Scalar)>>(terms: I) -> Self {
        let mut map: BTreeMap<K, Scalar> = BTreeMap::new();
        for (k, c) in terms {
            match map.get_mut(&k) {
                Some(e) => *e = &*e + &c,
                None => {
                    map.insert(k, c);
                }
            }
        }
        Self::from_map(map)
    }

    pub fn from_map(map: BTreeMap<K, Scalar>) -> Self {
        SparseVec {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &(K, Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.iter().map(|(k, _)| k)
    }

    pub fn into_terms(self) -> Vec<(K, Scalar)> {
        self.terms
    }

    pub fn get(&self, key: &K) -> Option<&Scalar> {
        self.terms
            .binary_search_by(|(k, _)| k.cmp(key))
            .ok()
            .map(|i| &self.terms[i].1)
    }

    /// Greatest key and its coefficient.
    pub fn leading(&self) -> Option<&(K, Scalar)> {
        self.terms.last()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparseVec {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SparseVec {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// `self + c * other`, by a sorted merge.
    pub fn add_scaled(&self, other: &Self, c: &Scalar) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ka, va) = &self.terms[i];
            let (kb, vb) = &other.terms[j];
            match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    out.push((ka.clone(), va.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((kb.clone(), vb * c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = va + &(vb * c);
                    if !s.is_zero() {
                        out.push((ka.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(k, v)| (k.clone(), v * c)));
        SparseVec { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        match other.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().one()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match other.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &-&c.field().one()),
        }
    }

    /// Applies an order-preserving or arbitrary relabelling of keys.
    pub fn map_keys<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> SparseVec<L> {
        SparseVec::from_terms(self.terms.iter().map(|(k, c)| (f(k), c.clone())))
    }

    /// Keeps only the terms whose key satisfies the predicate.
    pub fn filter(&self, pred: impl Fn(&K) -> bool) -> Self {
        SparseVec {
            terms: self.terms.iter().filter(|(k, _)| pred(k)).cloned().collect(),
        }
    }
}

/// Accumulates many scaled contributions before producing a [`SparseVec`].
pub struct Accumulator<K> {
    map: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> Default for Accumulator<K> {
    fn default() -> Self {
        Accumulator { map: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Accumulator<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, key: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.map.get_mut(&key) {
            Some(e) => *e = &*e + &c,
            None => {
                self.map.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, v: &SparseVec<K>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, x) in v.iter() {
            self.add_term(k.clone(), x * c);
        }
    }

    pub fn finish(self) -> SparseVec<K> {
        SparseVec::from_map(self.map)
    }
}
