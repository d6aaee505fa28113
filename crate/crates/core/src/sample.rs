//! Seeded random elements for experiments and randomized checks.
//!
//! Every sampler takes an explicit generator; [`rng`] builds a ChaCha8 stream
//! from a `u64` seed, so results are reproducible across platforms.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quotient::{AlgElement, TruncatedAlgebra};
use crate::scalar::{FieldSpec, Scalar};
use crate::sparse::SparseVec;
use crate::wreath::{GammaSpec, SMatrix, Wreath, WreathElement};

/// Magnitude bound for rational samples.
const RATIONAL_SPREAD: i64 = 3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over `GF(p)`; an integer in `[-3, 3]` over the rationals.
pub fn scalar<R: Rng>(field: FieldSpec, rng: &mut R) -> Scalar {
    match field {
        FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
        FieldSpec::Rationals => field.from_i64(rng.gen_range(-RATIONAL_SPREAD..=RATIONAL_SPREAD)),
    }
}

pub fn nonzero_scalar<R: Rng>(field: FieldSpec, rng: &mut R) -> Scalar {
    loop {
        let c = scalar(field, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Up to `terms` random coordinates drawn from `range`.
pub fn coords<R: Rng>(field: FieldSpec, range: Range<usize>, terms: usize, rng: &mut R) -> SparseVec<usize> {
    if range.is_empty() {
        return SparseVec::zero();
    }
    SparseVec::from_terms(
        (0..terms).map(|_| (rng.gen_range(range.clone()), nonzero_scalar(field, rng))),
    )
}

/// Flat indices of degree at most `max_degree`.
fn low_degree(alg: &TruncatedAlgebra, max_degree: usize) -> Range<usize> {
    0..alg.degree_range(max_degree.min(alg.truncation())).end
}

/// Up to `terms` random terms of degree at most `max_degree`.
pub fn element<R: Rng>(alg: &TruncatedAlgebra, max_degree: usize, terms: usize, rng: &mut R) -> AlgElement {
    let v = coords(alg.field(), low_degree(alg, max_degree), terms, rng);
    alg.from_coeffs(v).expect("indices inside the basis")
}

/// Up to `entries` entries at row and column indices of degree at most
/// `index_degree`, each an element of `A` of degree at most `a_degree`.
pub fn smatrix<R: Rng>(w: &Wreath, index_degree: usize, a_degree: usize, entries: usize, rng: &mut R) -> SMatrix {
    let idx = low_degree(w.b_alg(), index_degree);
    let a_range = low_degree(w.a_alg(), a_degree);
    let one = w.a_alg().field().one();
    let mut s = SMatrix::zero();
    if idx.is_empty() {
        return s;
    }
    for _ in 0..entries {
        let i = rng.gen_range(idx.clone());
        let j = rng.gen_range(idx.clone());
        let v = coords(w.a_alg().field(), a_range.clone(), 2, rng);
        s.add_to(i, j, &v, &one);
    }
    s
}

/// `(b, S)` with both parts sampled as above.
pub fn wreath_element<R: Rng>(
    w: &Wreath,
    b_degree: usize,
    index_degree: usize,
    a_degree: usize,
    terms: usize,
    rng: &mut R,
) -> WreathElement {
    let b = w.from_b(&element(w.b_alg(), b_degree, terms, rng)).expect("same host");
    let s = w
        .from_smatrix(smatrix(w, index_degree, a_degree, terms, rng))
        .expect("valid entries");
    w.add(&b, &s).expect("same host")
}

/// `γ` with independent uniform coordinates on every basis word of degree at
/// most `b_degree` (including the identity when present).
pub fn gamma<R: Rng>(b: &TruncatedAlgebra, a: &TruncatedAlgebra, b_degree: usize, rng: &mut R) -> GammaSpec {
    let mut g = GammaSpec::zero();
    for k in low_degree(b, b_degree) {
        let v = SparseVec::from_terms((0..a.dim()).map(|t| (t, scalar(a.field(), rng))));
        if !v.is_zero() {
            g.insert(k, v).expect("each index once");
        }
    }
    g
}
