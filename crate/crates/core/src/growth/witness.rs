//! Bounded witness searches and the scheduled construction of slow-growth `γ`.
//!
//! Searches scan basis words in flat (deglex) order first, then two-term
//! combinations `b_p + c·b_q` with `p < q` and `c` from a coefficient set:
//! `{1, −1}` by default, every nonzero residue over `GF(p)` with `p ≤ 7`.
//! Exhausting the candidates proves nothing about the infinite algebra. Over a
//! finite field the combination trick used for infinite fields is unavailable,
//! so searches there may legitimately come back empty.
//!
//! `γ` is taken to vanish on words above the truncation of `B`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::growth::schedule::FiltrationSchedule;
use crate::quotient::{AlgElement, TruncatedAlgebra};
use crate::scalar::{FieldSpec, Scalar};
use crate::sparse::SparseVec;
use crate::subspace::Subspace;
use crate::wreath::GammaSpec;

/// Nonzero coefficients tried in two-term combinations.
pub fn default_coefficients(field: FieldSpec) -> Vec<Scalar> {
    match field {
        FieldSpec::Prime(p) if p <= 7 => (1..p as i64).map(|c| field.from_i64(c)).collect(),
        _ => vec![field.one(), field.from_i64(-1)],
    }
}

/// Candidates over the flat indices in `range`: single words, then pairs.
fn candidates(
    field: FieldSpec,
    range: std::ops::Range<usize>,
    coeffs: &[Scalar],
) -> impl Iterator<Item = SparseVec<usize>> + '_ {
    let one = field.one();
    let singles = range.clone().map(move |k| SparseVec::unit(k, one.clone()));
    let pairs = range.clone().flat_map(move |p| {
        let one = field.one();
        range.clone().filter(move |&q| q > p).flat_map(move |q| {
            let one = one.clone();
            coeffs
                .iter()
                .map(move |c| SparseVec::from_terms(vec![(p, one.clone()), (q, c.clone())]))
        })
    });
    singles.chain(pairs)
}

fn check_independent(b: &TruncatedAlgebra, list: &[AlgElement]) -> Result<()> {
    if b.span(list)?.dim() != list.len() {
        return Err(Error::DependentInput);
    }
    Ok(())
}

/// Whether `b` satisfies `γ(b_i·b) = 0` for `i < n` and `a·γ(b_n·b) ≠ 0`.
pub fn is_density_witness(
    b_alg: &TruncatedAlgebra,
    a_alg: &TruncatedAlgebra,
    gamma: &GammaSpec,
    list: &[AlgElement],
    a: &AlgElement,
    b: &SparseVec<usize>,
) -> bool {
    let Some((last, init)) = list.split_last() else {
        return false;
    };
    for bi in init {
        let (p, _) = b_alg.mul_coords(bi.coeffs(), b);
        if !gamma.apply(&p).is_zero() {
            return false;
        }
    }
    let (p, _) = b_alg.mul_coords(last.coeffs(), b);
    let (img, _) = a_alg.mul_coords(a.coeffs(), &gamma.apply(&p));
    !img.is_zero()
}

/// First `b` of degree at most `degree_cap` satisfying the density conditions.
pub fn density_witness(
    b_alg: &TruncatedAlgebra,
    a_alg: &TruncatedAlgebra,
    gamma: &GammaSpec,
    list: &[AlgElement],
    a: &AlgElement,
    degree_cap: usize,
    coeffs: Option<Vec<Scalar>>,
) -> Result<Option<AlgElement>> {
    check_independent(b_alg, list)?;
    if list.is_empty() {
        return Err(Error::InvalidArgument("empty list of elements".into()));
    }
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let coeffs = coeffs.unwrap_or_else(|| default_coefficients(b_alg.field()));
    let top = degree_cap.min(b_alg.truncation());
    let range = 0..b_alg.degree_range(top).end;
    for cand in candidates(b_alg.field(), range, &coeffs) {
        if is_density_witness(b_alg, a_alg, gamma, list, a, &cand) {
            return Ok(Some(b_alg.from_coeffs(cand)?));
        }
    }
    Ok(None)
}

/// Whether `{b_i·b}` is linearly independent. Truncation is a projection, so
/// independence of the truncated products implies independence of the true ones.
pub fn products_independent(b_alg: &TruncatedAlgebra, list: &[AlgElement], b: &SparseVec<usize>) -> bool {
    let mut s = Subspace::new();
    list.iter().all(|bi| s.insert(b_alg.mul_coords(bi.coeffs(), b).0))
}

/// First `b` in `B^s` (terms of degree ≥ `s`) with `b_1·b, …, b_n·b` independent.
pub fn lemma11_witness(
    b_alg: &TruncatedAlgebra,
    list: &[AlgElement],
    s: usize,
    coeffs: Option<Vec<Scalar>>,
) -> Result<Option<AlgElement>> {
    check_independent(b_alg, list)?;
    let coeffs = coeffs.unwrap_or_else(|| default_coefficients(b_alg.field()));
    let start = b_alg.degree_range(s.min(b_alg.truncation() + 1)).start;
    let range = start..b_alg.dim();
    for cand in candidates(b_alg.field(), range, &coeffs) {
        if products_independent(b_alg, list, &cand) {
            return Ok(Some(b_alg.from_coeffs(cand)?));
        }
    }
    Ok(None)
}

/// One step of the scheduled construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleStep {
    pub k: usize,
    /// Flat index of the chosen word `v_k`.
    pub chosen: usize,
    /// Number of other new words, all sent to zero.
    pub complement: usize,
}

/// Builds `γ` with `γ(v_k) = a_k` and `γ = 0` on the other words, where `v_k` is
/// the deglex-greatest normal word of degree in `(n_{k−1}, n_k]`. Requires
/// generators of degree one, so `V^{n}` is spanned by the words of degree `≤ n`.
pub fn lemma7_gamma(
    b_alg: &TruncatedAlgebra,
    a_basis: &[AlgElement],
    schedule: &FiltrationSchedule,
) -> Result<(GammaSpec, Vec<ScheduleStep>)> {
    if !b_alg.alphabet().all_degree_one() {
        return Err(Error::InvalidArgument("generators of B must have degree 1".into()));
    }
    if schedule.len() > a_basis.len() {
        return Err(Error::InvalidArgument(format!(
            "schedule has {} steps but only {} basis elements of A were given",
            schedule.len(),
            a_basis.len()
        )));
    }
    let mut map = BTreeMap::new();
    let mut steps = Vec::new();
    for k in 1..=schedule.len() {
        let lo = schedule.get(k - 1).expect("within schedule");
        let hi = schedule.get(k).expect("within schedule");
        if hi > b_alg.truncation() {
            return Err(Error::DegreeOutOfRange { degree: hi, bound: b_alg.truncation() });
        }
        let start = b_alg.degree_range(lo + 1).start;
        let end = b_alg.degree_range(hi).end;
        if end <= start {
            return Err(Error::EmptyScheduleStep(k));
        }
        let chosen = end - 1;
        map.insert(chosen, a_basis[k - 1].coeffs().clone());
        steps.push(ScheduleStep { k, chosen, complement: end - start - 1 });
    }
    Ok((GammaSpec::from_map(map), steps))
}
