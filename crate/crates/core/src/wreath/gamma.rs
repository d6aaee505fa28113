//! Linear maps `γ: B → A` given on basis words, and their text format.
//!
//! ```text
//! # one line per basis word; unlisted words map to zero
//! map 1 -> 0
//! map x*y -> u + 2u^2
//! ```

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr;
use crate::quotient::{PowerChain, TruncatedAlgebra};
use crate::sparse::{Accumulator, SparseVec};

/// `γ` on the flat basis of `B`; values are coordinate vectors of `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaSpec {
    map: BTreeMap<usize, SparseVec<usize>>,
    generating: Option<bool>,
}

impl GammaSpec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_map(map: BTreeMap<usize, SparseVec<usize>>) -> Self {
        GammaSpec {
            map: map.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
            generating: None,
        }
    }

    /// Sets `γ(b_index)`; setting the same index twice is an error.
    pub fn insert(&mut self, index: usize, value: SparseVec<usize>) -> Result<()> {
        if self.map.contains_key(&index) {
            return Err(Error::Duplicate(format!("basis index {}", index + 1)));
        }
        self.generating = None;
        if !value.is_zero() {
            self.map.insert(index, value);
        }
        Ok(())
    }

    pub fn get(&self, index: usize) -> Option<&SparseVec<usize>> {
        self.map.get(&index)
    }

    pub fn support(&self) -> impl Iterator<Item = (&usize, &SparseVec<usize>)> {
        self.map.iter()
    }

    pub fn support_len(&self) -> usize {
        self.map.len()
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    /// `γ(b)` for `b` in coordinates of `B`; basis words outside the support map to zero.
    pub fn apply(&self, b: &SparseVec<usize>) -> SparseVec<usize> {
        let mut acc = Accumulator::new();
        for (k, c) in b.iter() {
            if let Some(v) = self.map.get(k) {
                acc.add_scaled(v, c);
            }
        }
        acc.finish()
    }

    /// Cached result of [`GammaSpec::check_generating`].
    pub fn generating(&self) -> Option<bool> {
        self.generating
    }

    /// Whether the image generates the truncated `A` (all of positive degree).
    pub fn check_generating(&mut self, a: &TruncatedAlgebra) -> bool {
        let verdict = is_generating(self, a);
        self.generating = Some(verdict);
        verdict
    }
}

pub fn is_generating(gamma: &GammaSpec, a: &TruncatedAlgebra) -> bool {
    let image = crate::subspace::Subspace::span(gamma.map.values().cloned());
    let mut chain = PowerChain::new(a, image);
    chain.advance_to(a.truncation());
    let generated = chain.current();
    (1..=a.truncation())
        .flat_map(|d| a.degree_range(d))
        .all(|k| generated.contains(&SparseVec::unit(k, a.field().one())))
}

/// Parses `map <word> -> <A-expression>` lines.
pub fn parse_gamma(text: &str, b: &TruncatedAlgebra, a: &TruncatedAlgebra) -> Result<GammaSpec> {
    let mut gamma = GammaSpec::zero();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let at = |column: usize, message: String| Error::ParseAt { line: line_no, column, message };
        let body = line.trim_start();
        let Some(rest) = body.strip_prefix("map") else {
            return Err(at(indent + 1, "expected `map <word> -> <expression>`".into()));
        };
        let Some((lhs, rhs)) = rest.split_once("->") else {
            return Err(at(indent + 4, "expected `->`".into()));
        };
        let word_col = indent + 4 + (lhs.len() - lhs.trim_start().len());
        let word_text = lhs.trim();
        let w = b
            .alphabet()
            .parse_word(word_text)
            .map_err(|e| at(word_col + 1, e.to_string()))?;
        let index = b
            .flat_index(&w)
            .ok_or_else(|| at(word_col + 1, format!("`{word_text}` is not a basis word of B")))?;
        let rhs_col = indent + 3 + lhs.len() + 2;
        let value = a
            .parse(rhs)
            .map_err(|e| expr::at_line(e, line_no, rhs_col))?;
        gamma
            .insert(index, value.coeffs().clone())
            .map_err(|_| at(word_col + 1, format!("duplicate mapping for `{word_text}`")))?;
    }
    Ok(gamma)
}

/// Text form read back by [`parse_gamma`].
pub fn show_gamma(gamma: &GammaSpec, b: &TruncatedAlgebra, a: &TruncatedAlgebra) -> String {
    let mut out = String::new();
    for (&k, v) in gamma.support() {
        let value = a.show(&a.elem(v.clone(), false));
        out.push_str(&format!("map {} -> {}\n", b.show_basis(k), value));
    }
    out
}
