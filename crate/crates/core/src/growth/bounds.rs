//! Growth of `C = ⟨B, c_γ⟩` and `C′ = ⟨B, c_γ, e₁₁(1)⟩` inside the wreath product.
//!
//! With `V` a generating subspace of `B`, `U = V + F·c_γ` (and `U′ = U + F·e₁₁(1)`)
//! generate `C` (and `C′`). The runner computes `U^n = Σ_{t≤n} U^t` and the
//! subspace
//!
//! ```text
//! rhs(n) = V^n + Σ_{i+j+k≤n} V^i (W_j c_γ) V^k  [+ Σ_{i+j+k≤n} V^i e₁₁(W_j) V^k]
//! ```
//!
//! with the conventions `V^0 = F·1`, `W_0 = F·1` (so `W_0 c_γ = F·c_γ` and
//! `e₁₁(W_0) = F·e₁₁(1)`), and compares dimensions with
//! `Σ_{i+j+k≤n} g(i)w(j)g(k) + g(n)` where `g(0) = w(0) = 1` (doubled sum for `C′`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::wgamma::{cumulative_powers, w_chain};
use crate::subspace::Subspace;
use crate::wreath::{GammaSpec, WKey, Wreath};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusionRow {
    pub n: usize,
    pub dim_u: usize,
    pub dim_rhs: usize,
    pub included: bool,
    pub bound: u128,
    pub bound_holds: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusionReport {
    pub with_e11: bool,
    pub rows: Vec<InclusionRow>,
    /// `dim e₁₁(1)·(F·1 + V^i)·e₁₁(1)` for `i = 0..=n_max` (only with `e₁₁`).
    pub e11_sandwich_dims: Vec<usize>,
}

impl InclusionReport {
    pub fn all_included(&self) -> bool {
        self.rows.iter().all(|r| r.included)
    }

    pub fn all_bounded(&self) -> bool {
        self.rows.iter().all(|r| r.bound_holds)
    }

    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
    }
}

struct Pieces {
    vpow: Vec<Subspace<WKey>>,
    wc: Vec<Subspace<WKey>>,
    e11w: Vec<Subspace<WKey>>,
    g: Vec<u128>,
    w: Vec<u128>,
    exact: bool,
}

fn pieces(w: &Wreath, gamma: &GammaSpec, v: &Subspace<usize>, n: usize, with_e11: bool) -> Result<Pieces> {
    let b = w.b_alg();
    let a = w.a_alg();
    let unit = w.unit_index().ok_or(Error::NotUnital)?;
    let (powers, b_exact) = cumulative_powers(b, v, n);
    let chain = w_chain(b, a, gamma, v, n)?;
    let mut exact = b_exact && chain.exact();

    let mut vpow = vec![w.span(&[w.identity()?])?];
    for p in powers.iter().skip(1) {
        let elems: Result<Vec<_>> = p
            .basis()
            .iter()
            .map(|c| w.from_b(&b.elem(c.clone(), false)))
            .collect();
        vpow.push(w.span(&elems?)?);
    }

    let c = w.c_gamma(unit, gamma)?;
    let mut wc = vec![w.span(&[c.clone()])?];
    let mut e11w = Vec::new();
    if with_e11 {
        e11w.push(w.span(&[w.matrix_unit(unit, unit, &a.one()?)?])?);
    }
    for j in 1..=n {
        let mut left = Vec::new();
        let mut units = Vec::new();
        for x in chain.get(j).basis() {
            let ax = a.elem(x.clone(), false);
            let e = w.matrix_unit(unit, unit, &ax)?;
            let p = w.mul_flagged(&e, &c)?;
            exact &= !p.overflowed();
            left.push(p);
            units.push(e);
        }
        wc.push(w.span(&left)?);
        if with_e11 {
            e11w.push(w.span(&units)?);
        }
    }

    let mut g = vec![1u128];
    g.extend(powers.iter().skip(1).map(|p| p.dim() as u128));
    let mut wd = vec![1u128];
    wd.extend(chain.levels.iter().skip(1).map(|l| l.dim() as u128));
    Ok(Pieces { vpow, wc, e11w, g, w: wd, exact })
}

fn sandwich_sum(w: &Wreath, p: &Pieces, mid: &[Subspace<WKey>], n: usize) -> (Subspace<WKey>, bool) {
    let mut out = Subspace::new();
    let mut lost = false;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (left, l1) = w.product_span(&p.vpow[i], &mid[j]);
            lost |= l1;
            for k in 0..=(n - i - j) {
                let (full, l2) = w.product_span(&left, &p.vpow[k]);
                lost |= l2;
                out.absorb(&full);
            }
        }
    }
    (out, lost)
}

/// Inclusion `U^n ⊆ rhs(n)` and the dimension bound for `n = 1..=n_max`.
pub fn inclusion_report(
    w: &Wreath,
    gamma: &GammaSpec,
    v: &Subspace<usize>,
    n_max: usize,
    with_e11: bool,
) -> Result<InclusionReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let p = pieces(w, gamma, v, n_max, with_e11)?;
    let base = Subspace::span(
        v.basis()
            .iter()
            .map(|c| w.flatten(&w.from_b(&w.b_alg().elem(c.clone(), false)).expect("host"))),
    );
    let mut u_gens = base;
    u_gens.absorb(&p.wc[0]);
    if with_e11 {
        u_gens.absorb(&p.e11w[0]);
    }
    let mut last = u_gens.clone();
    let mut total = u_gens.clone();
    let mut u_exact = true;

    let mut rows = Vec::new();
    for n in 1..=n_max {
        if n > 1 {
            let (next, lost) = w.product_span(&last, &u_gens);
            u_exact &= !lost;
            total.absorb(&next);
            last = next;
        }
        let (mut rhs, mut lost) = sandwich_sum(w, &p, &p.wc, n);
        if with_e11 {
            let (more, l) = sandwich_sum(w, &p, &p.e11w, n);
            rhs.absorb(&more);
            lost |= l;
        }
        rhs.absorb(&p.vpow[n]);
        let mut sum: u128 = 0;
        for i in 0..=n {
            for j in 0..=(n - i) {
                for k in 0..=(n - i - j) {
                    sum += p.g[i] * p.w[j] * p.g[k];
                }
            }
        }
        let bound = if with_e11 { 2 * sum } else { sum } + p.g[n];
        let dim_u = total.dim();
        rows.push(InclusionRow {
            n,
            dim_u,
            dim_rhs: rhs.dim(),
            included: total.is_subspace_of(&rhs),
            bound,
            bound_holds: dim_u as u128 <= bound,
            exact: p.exact && u_exact && !lost,
        });
    }

    let mut e11_sandwich_dims = Vec::new();
    if with_e11 {
        let e = &p.e11w[0];
        for i in 0..=n_max {
            let hull = p.vpow[i].sum(&p.vpow[0]);
            let (left, _) = w.product_span(e, &hull);
            let (s, _) = w.product_span(&left, e);
            e11_sandwich_dims.push(s.dim());
        }
    }
    Ok(InclusionReport { with_e11, rows, e11_sandwich_dims })
}

/// `U^n ⊆ Σ V^i (W_j c_γ) V^k + V^n`.
pub fn lemma3_verify(w: &Wreath, gamma: &GammaSpec, v: &Subspace<usize>, n: usize) -> Result<InclusionRow> {
    let r = inclusion_report(w, gamma, v, n, false)?;
    Ok(r.rows.into_iter().last().expect("n ≥ 1"))
}

/// The same for `U′ = U + F·e₁₁(1)`, with the extra `V^i e₁₁(W_j) V^k` terms.
pub fn lemma4prime_verify(w: &Wreath, gamma: &GammaSpec, v: &Subspace<usize>, n: usize) -> Result<InclusionReport> {
    inclusion_report(w, gamma, v, n, true)
}

pub fn corollary_bound_report(
    w: &Wreath,
    gamma: &GammaSpec,
    v: &Subspace<usize>,
    n_max: usize,
    with_e11: bool,
) -> Result<Vec<InclusionRow>> {
    Ok(inclusion_report(w, gamma, v, n_max, with_e11)?.rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DenseReport {
    pub n: usize,
    pub lhs: usize,
    pub dim_vn: usize,
    pub w_n: usize,
    pub bound: usize,
    pub equal: bool,
    pub exact: bool,
}

/// `dim V^n (W_n c_γ) V^n` against `(dim V^n)²·w_γ(n)`.
pub fn dense_gamma_dim_check(w: &Wreath, gamma: &GammaSpec, v: &Subspace<usize>, n: usize) -> Result<DenseReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let p = pieces(w, gamma, v, n, false)?;
    let (left, l1) = w.product_span(&p.vpow[n], &p.wc[n]);
    let (full, l2) = w.product_span(&left, &p.vpow[n]);
    let dim_vn = p.vpow[n].dim();
    let w_n = p.w[n] as usize;
    let bound = dim_vn * dim_vn * w_n;
    Ok(DenseReport {
        n,
        lhs: full.dim(),
        dim_vn,
        w_n,
        bound,
        equal: full.dim() == bound,
        exact: p.exact && !l1 && !l2,
    })
}
