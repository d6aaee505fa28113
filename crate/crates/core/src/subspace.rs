//! Exact subspaces kept in echelon form.
//!
//! Every row is normalised so that its greatest key (the pivot) has
//! coefficient one, and pivots are pairwise distinct. Reduction walks a
//! vector from its greatest key downwards, cancelling pivots as it meets
//! them; since a row's other keys are all smaller than its pivot, a single
//! descending pass suffices.

use std::collections::BTreeMap;

use crate::scalar::Scalar;
use crate::sparse::SparseVec;

#[derive(Clone, Debug)]
pub struct Subspace<K> {
    rows: Vec<SparseVec<K>>,
    pivots: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Default for Subspace<K> {
    fn default() -> Self {
        Subspace { rows: Vec::new(), pivots: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Subspace<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn span<I: IntoIterator<Item = SparseVec<K>>>(vectors: I) -> Self {
        let mut s = Self::new();
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Echelon rows, in insertion order.
    pub fn basis(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }

    pub fn is_pivot(&self, key: &K) -> bool {
        self.pivots.contains_key(key)
    }

    /// Row whose pivot is `key`.
    pub fn row_for_pivot(&self, key: &K) -> Option<&SparseVec<K>> {
        self.pivots.get(key).map(|&i| &self.rows[i])
    }

    /// Remainder of `v` after cancelling every pivot it meets.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        if self.rows.is_empty() || v.is_zero() {
            return v.clone();
        }
        let mut work: BTreeMap<K, Scalar> = v.iter().cloned().collect();
        let mut bound: Option<K> = None;
        loop {
            let next = match &bound {
                None => work.iter().next_back(),
                Some(b) => work.range(..b.clone()).next_back(),
            };
            let Some((k, c)) = next else { break };
            let (k, c) = (k.clone(), c.clone());
            if let Some(&r) = self.pivots.get(&k) {
                for (rk, rc) in self.rows[r].iter() {
                    let delta = -&(&c * rc);
                    match work.get_mut(rk) {
                        Some(e) => {
                            *e = &*e + &delta;
                            if e.is_zero() {
                                work.remove(rk);
                            }
                        }
                        None => {
                            work.insert(rk.clone(), delta);
                        }
                    }
                }
            }
            bound = Some(k);
        }
        SparseVec::from_map(work)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns `true` when the dimension grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let r = self.reduce(&v);
        self.push_reduced(r)
    }

    fn push_reduced(&mut self, r: SparseVec<K>) -> bool {
        let Some((lead, c)) = r.leading().cloned() else {
            return false;
        };
        let row = r.scale(&c.inv().expect("nonzero leading coefficient"));
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        let mut s = self.clone();
        for v in other.basis() {
            s.insert(v.clone());
        }
        s
    }

    pub fn absorb(&mut self, other: &Subspace<K>) {
        for v in other.basis() {
            self.insert(v.clone());
        }
    }

    pub fn is_subspace_of(&self, other: &Subspace<K>) -> bool {
        self.rows.iter().all(|v| other.contains(v))
    }

    pub fn same_span(&self, other: &Subspace<K>) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// Brings the rows to reduced echelon form: no row contains another
    /// row's pivot. Rows end up sorted by increasing pivot.
    pub fn make_reduced(&mut self) {
        let mut order: Vec<(K, usize)> = self.pivots.iter().map(|(k, &i)| (k.clone(), i)).collect();
        order.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out = Subspace::new();
        for (_, i) in order {
            // Pivots of rows already in `out` are smaller than this row's
            // pivot, so reducing by `out` leaves the pivot untouched.
            let r = out.reduce(&self.rows[i]);
            let lead = r.leading().expect("independent row").0.clone();
            out.pivots.insert(lead, out.rows.len());
            out.rows.push(r);
        }
        // A row's keys are all below its pivot, so larger pivots never occur in it.
        *self = out;
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec<K>) -> Option<Vec<(usize, Scalar)>> {
        let mut coords = Vec::new();
        let mut work: BTreeMap<K, Scalar> = v.iter().cloned().collect();
        let mut bound: Option<K> = None;
        loop {
            let next = match &bound {
                None => work.iter().next_back(),
                Some(b) => work.range(..b.clone()).next_back(),
            };
            let Some((k, c)) = next else { break };
            let (k, c) = (k.clone(), c.clone());
            let &r = self.pivots.get(&k)?;
            coords.push((r, c.clone()));
            for (rk, rc) in self.rows[r].iter() {
                let delta = -&(&c * rc);
                match work.get_mut(rk) {
                    Some(e) => {
                        *e = &*e + &delta;
                        if e.is_zero() {
                            work.remove(rk);
                        }
                    }
                    None => {
                        work.insert(rk.clone(), delta);
                    }
                }
            }
            bound = Some(k);
        }
        Some(coords)
    }
}
