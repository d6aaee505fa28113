//! A locally nilpotent test algebra on `x_1..x_k, y_1..y_k` built from a
//! two-generator graded ideal `J`, and the comparison of its growth with
//! that of `F<x, y>/J`.
//!
//! Relations, for distinct indices where stated:
//!
//! 1. `x_i x_j x_l = 0` for pairwise distinct `i, j, l`;
//! 2. `J(x_i, x_j) = 0` for `i != j`, substituting `x -> x_i`, `y -> x_j`;
//! 3. `id(x_i)^{n_{i+3}} = 0`, spanned by the words `x_i u_1 x_i ... u_{n-1} x_i`
//!    with each `u` free of `x_i`, enumerated only up to the truncation degree;
//! 4. every `y_i` is central;
//! 5. `y_i^2 = 0`.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::free::{Alphabet, FreeElement, Word};
use crate::growth::schedule::{Faithfulness, FiltrationSchedule};
use crate::growth::table::GrowthTable;
use crate::quotient::algebra::TruncatedAlgebra;
use crate::quotient::growth::growth_table;
use crate::quotient::presentation::Presentation;

pub fn x_name(i: usize) -> String {
    format!("x{i}")
}

pub fn y_name(i: usize) -> String {
    format!("y{i}")
}

/// Builds the presentation on `x1..xk, y1..yk` (in that generator order).
/// Relations of degree above `truncation` are omitted; they cannot affect
/// the algebra below that degree.
pub fn build_section6_presentation(
    k_max: usize,
    schedule: &FiltrationSchedule,
    j: &Presentation,
    truncation: usize,
) -> Result<Presentation> {
    if j.alphabet().len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "J must be given in two generators, found {}",
            j.alphabet().len()
        )));
    }
    if !j.alphabet().all_degree_one() {
        return Err(Error::InvalidArgument("J generators must have degree 1".into()));
    }
    let field = j.field();
    let gens: Vec<(String, usize)> = (1..=k_max)
        .map(|i| (x_name(i), 1))
        .chain((1..=k_max).map(|i| (y_name(i), 1)))
        .collect();
    let alphabet = Alphabet::new(gens)?;
    let x = |i: usize| alphabet.letter(i - 1);
    let y = |i: usize| alphabet.letter(k_max + i - 1);
    let word = |w: Word| FreeElement::word(field, w);

    let mut rels: Vec<FreeElement> = Vec::new();
    let mut seen: HashSet<FreeElement> = HashSet::new();
    let mut push = |r: FreeElement| {
        if r.is_zero() || r.maxdeg().unwrap_or(0) > truncation {
            return;
        }
        let lead = r.terms().leading().unwrap().1.clone();
        let normalized = r.scale(&lead.inv().unwrap()).unwrap();
        if seen.insert(normalized.clone()) {
            rels.push(normalized);
        }
    };

    for i in 1..=k_max {
        for jj in 1..=k_max {
            for l in 1..=k_max {
                if i != jj && jj != l && i != l {
                    push(word(x(i).concat(&x(jj)).concat(&x(l))));
                }
            }
        }
    }
    for i in 1..=k_max {
        for jj in 1..=k_max {
            if i != jj {
                for r in j.relations() {
                    push(r.substitute(&[x(i), x(jj)]));
                }
            }
        }
    }
    for i in 1..=k_max {
        if let Some(n) = schedule.get(i + 3) {
            for w in ideal_power_words(&alphabet, i - 1, n, truncation) {
                push(word(w));
            }
        }
    }
    for i in 1..=k_max {
        for jj in 1..=k_max {
            push(word(x(jj).concat(&y(i))).sub(&word(y(i).concat(&x(jj))))?);
            if jj != i {
                push(word(y(jj).concat(&y(i))).sub(&word(y(i).concat(&y(jj))))?);
            }
        }
        push(word(y(i).concat(&y(i))));
    }
    Presentation::new(alphabet, field, rels, false)
}

/// Words `g u_1 g u_2 ... u_{n-1} g` with `n` occurrences of letter `g`,
/// each `u` avoiding `g`, of total degree at most `max_degree`.
fn ideal_power_words(alphabet: &Alphabet, g: usize, n: usize, max_degree: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 || n > max_degree {
        return out;
    }
    let others: Vec<u32> = (0..alphabet.len() as u32).filter(|&l| l as usize != g).collect();
    let mut stack: Vec<(Vec<u32>, usize)> = vec![(vec![g as u32], 1)];
    while let Some((letters, count)) = stack.pop() {
        if count == n {
            out.push(alphabet.word(letters));
            continue;
        }
        // Remaining budget must still fit the missing occurrences of g.
        let room = max_degree - letters.len();
        let missing = n - count;
        // Append a gap of any length up to the slack, then g.
        let mut gaps: Vec<Vec<u32>> = vec![Vec::new()];
        let slack = room - missing;
        let mut frontier = vec![Vec::new()];
        for _ in 0..slack {
            let mut next = Vec::new();
            for gap in &frontier {
                for &o in &others {
                    let mut gg: Vec<u32> = gap.clone();
                    gg.push(o);
                    next.push(gg);
                }
            }
            gaps.extend(next.iter().cloned());
            frontier = next;
        }
        for gap in gaps {
            let mut l = letters.clone();
            l.extend(gap);
            l.push(g as u32);
            stack.push((l, count + 1));
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichRow {
    pub k: usize,
    pub n: usize,
    pub f: usize,
    pub g: usize,
    /// `binom(k, 2) · f(n)`.
    pub upper: usize,
    /// `None` when `n` lies outside `[n_k, n_{k+2})`.
    pub holds: Option<bool>,
    pub exact: bool,
}

pub fn binom2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Growth of `span{x_1..x_k}` inside the algebra built by [`build_section6_presentation`].
pub fn g_k_table(alg: &TruncatedAlgebra, k: usize, n_max: usize) -> Result<GrowthTable> {
    let mut gens = Vec::new();
    for i in 1..=k {
        let g = alg
            .alphabet()
            .index_of(&x_name(i))
            .ok_or_else(|| Error::UnknownGenerator(x_name(i)))?;
        gens.push(alg.generator(g)?);
    }
    let v = alg.span(&gens)?;
    Ok(growth_table(alg, &v, n_max, format!("g_{k}")))
}

/// Compares `f(n)`, the growth of `F<x,y>/J`, with `g_k(n)` at each `n` in range.
pub fn lemma12_sandwich_check(
    alg: &TruncatedAlgebra,
    r_alg: &TruncatedAlgebra,
    schedule: &FiltrationSchedule,
    k: usize,
    n_range: RangeInclusive<usize>,
) -> Result<Vec<SandwichRow>> {
    let top = *n_range.end();
    let bound = alg.truncation().min(r_alg.truncation());
    if top > bound {
        return Err(Error::DegreeOutOfRange { degree: top, bound });
    }
    let f = growth_table(r_alg, &r_alg.generator_span()?, top, "f");
    let g = g_k_table(alg, k, top)?;
    let lo = schedule.get(k);
    let hi = schedule.get(k + 2);
    let mut rows = Vec::new();
    for n in n_range {
        if n == 0 {
            continue;
        }
        let fe = f.get(n).expect("table covers range");
        let ge = g.get(n).expect("table covers range");
        let upper = binom2(k) * fe.dim;
        let in_range = lo.is_some_and(|lo| lo <= n) && hi.is_none_or(|hi| n < hi);
        let holds = in_range.then(|| fe.dim <= ge.dim && ge.dim <= upper);
        rows.push(SandwichRow { k, n, f: fe.dim, g: ge.dim, upper, holds, exact: fe.exact && ge.exact });
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct Section6Report {
    pub k_max: usize,
    pub schedule: Vec<usize>,
    pub truncation: usize,
    pub relation_count: usize,
    pub dims: Vec<usize>,
    pub faithfulness: Faithfulness,
    pub rows: Vec<SandwichRow>,
}

impl Section6Report {
    /// Every row with a verdict holds, and at least one row has a verdict.
    pub fn all_hold(&self) -> bool {
        self.rows.iter().any(|r| r.holds.is_some()) && self.rows.iter().all(|r| r.holds != Some(false))
    }

    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
    }
}

/// Builds both algebras and checks the sandwich for `k = 2..=k_max` over
/// each `k`'s admissible range within the truncation.
pub fn section6_miniature(
    k_max: usize,
    schedule: &FiltrationSchedule,
    j: &Presentation,
    truncation: usize,
) -> Result<Section6Report> {
    let pres = build_section6_presentation(k_max, schedule, j, truncation)?;
    let relation_count = pres.relations().len();
    let alg = TruncatedAlgebra::build(pres, truncation)?;
    let r_alg = TruncatedAlgebra::build(j.clone(), truncation)?;
    let mut rows = Vec::new();
    for k in 2..=k_max {
        let Some(lo) = schedule.get(k) else { continue };
        let hi = schedule.get(k + 2).map(|h| h - 1).unwrap_or(truncation).min(truncation);
        if lo.max(1) > hi {
            continue;
        }
        rows.extend(lemma12_sandwich_check(&alg, &r_alg, schedule, k, lo.max(1)..=hi)?);
    }
    Ok(Section6Report {
        k_max,
        schedule: schedule.thresholds().to_vec(),
        truncation,
        relation_count,
        dims: alg.dims(),
        faithfulness: schedule.faithfulness(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn j_comm() -> Presentation {
        Presentation::parse("generators x y\nrel x*y - y*x", FieldSpec::Rationals).unwrap()
    }

    fn has_word(p: &Presentation, w: &str) -> bool {
        let word = p.alphabet().parse_word(w).unwrap();
        p.relations().iter().any(|r| *r == FreeElement::word(p.field(), word.clone()))
    }

    #[test]
    fn two_generator_instance() {
        let s = FiltrationSchedule::parse("2,4").unwrap();
        let p = build_section6_presentation(2, &s, &j_comm(), 6).unwrap();
        assert!(!p.relations().iter().any(|r| r.maxdeg().unwrap() == 3));
        let a = p.alphabet();
        let f = p.field();
        let comm = crate::free::parse_free(a, f, "x1*x2 - x2*x1").unwrap();
        assert!(p.relations().iter().any(|r| *r == comm || *r == comm.neg()));
        assert!(has_word(&p, "y1*y1") && has_word(&p, "y2*y2"));
        let c = crate::free::parse_free(a, f, "x1*y2 - y2*x1").unwrap();
        assert!(p.relations().iter().any(|r| *r == c || *r == c.neg()));
    }

    #[test]
    fn three_generators_kill_distinct_triples() {
        let s = FiltrationSchedule::parse("2,4,6").unwrap();
        let p = build_section6_presentation(3, &s, &j_comm(), 8).unwrap();
        for w in ["x1x2x3", "x1x3x2", "x2x1x3", "x2x3x1", "x3x1x2", "x3x2x1"] {
            assert!(has_word(&p, w), "{w}");
        }
    }

    #[test]
    fn empty_j_single_generator() {
        let j = Presentation::parse("generators x y", FieldSpec::Rationals).unwrap();
        let s = FiltrationSchedule::parse("").unwrap();
        let p = build_section6_presentation(1, &s, &j, 4).unwrap();
        // y1 central with x1, and y1^2 = 0.
        assert_eq!(p.relations().len(), 2);
    }

    #[test]
    fn ideal_power_relations() {
        let j = Presentation::parse("generators x y", FieldSpec::Rationals).unwrap();
        let s = FiltrationSchedule::parse("1,2,3,4").unwrap();
        // n_4 = 4 > truncation 3: nothing; with truncation 5 the words x1 u x1 u x1 u x1 appear.
        let p = build_section6_presentation(1, &s, &j, 3).unwrap();
        assert_eq!(p.relations().len(), 2);
        let words = ideal_power_words(&Alphabet::degree_one(&["a", "b"]).unwrap(), 0, 2, 4);
        let shown: Vec<String> = words.iter().map(|w| Alphabet::degree_one(&["a", "b"]).unwrap().show_word(w)).collect();
        assert_eq!(shown, vec!["a*a", "a*b*a", "a*b*b*a"]);
    }

    #[test]
    fn sandwich_miniature() {
        let s = FiltrationSchedule::parse("2,4,6").unwrap();
        let rep = section6_miniature(3, &s, &j_comm(), 8).unwrap();
        assert!(!rep.faithfulness.faithful);
        assert!(rep.all_hold() && rep.all_exact());
        for r in &rep.rows {
            let n = r.n;
            assert_eq!(r.f, (n * n + 3 * n) / 2);
            match r.k {
                2 => assert_eq!(r.g, r.f),
                3 => assert_eq!(r.g, 3 * n * (n + 1) / 2),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn precondition_outside_range() {
        let s = FiltrationSchedule::parse("2,4,6").unwrap();
        let p = build_section6_presentation(3, &s, &j_comm(), 6).unwrap();
        let alg = TruncatedAlgebra::build(p, 6).unwrap();
        let r = TruncatedAlgebra::build(j_comm(), 6).unwrap();
        let rows = lemma12_sandwich_check(&alg, &r, &s, 3, 1..=6).unwrap();
        assert!(rows.iter().filter(|r| r.n < 6).all(|r| r.holds.is_none()));
        assert_eq!(rows.last().unwrap().holds, Some(true));
        assert!(lemma12_sandwich_check(&alg, &r, &s, 3, 1..=7).is_err());
    }

    #[test]
    fn one_dimensional_components() {
        // J = (x - y) leaves F<x>, so f(n) = n, and identifies x1 with x2.
        let j = Presentation::parse("generators x y\nrel x - y", FieldSpec::Rationals).unwrap();
        let s = FiltrationSchedule::parse("1,3").unwrap();
        let p = build_section6_presentation(2, &s, &j, 5).unwrap();
        let alg = TruncatedAlgebra::build(p, 5).unwrap();
        let r = TruncatedAlgebra::build(j, 5).unwrap();
        let rows = lemma12_sandwich_check(&alg, &r, &s, 2, 3..=5).unwrap();
        for row in rows {
            assert_eq!(row.f, row.n);
            assert_eq!(row.g, row.n);
        }
    }
}
