//! `W_n = Σ_{i₁+⋯+i_r ≤ n} γ(V^{i₁})⋯γ(V^{i_r})` and `w_γ(n) = dim W_n`.

use crate::error::{Error, Result};
use crate::growth::table::GrowthTable;
use crate::quotient::{PowerChain, TruncatedAlgebra};
use crate::subspace::Subspace;
use crate::wreath::GammaSpec;

/// `W_0 ⊆ W_1 ⊆ ⋯ ⊆ W_n` with `W_0 = 0`; `level_exact[m]` covers every level up to `m`.
#[derive(Clone, Debug)]
pub struct WChain {
    pub levels: Vec<Subspace<usize>>,
    pub level_exact: Vec<bool>,
}

impl WChain {
    pub fn get(&self, n: usize) -> &Subspace<usize> {
        &self.levels[n]
    }

    pub fn exact(&self) -> bool {
        self.level_exact.last().copied().unwrap_or(true)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }
}

/// Image `γ(S)` of a subspace of `B` as a subspace of `A`.
pub fn gamma_image(gamma: &GammaSpec, s: &Subspace<usize>) -> Subspace<usize> {
    Subspace::span(s.basis().iter().map(|v| gamma.apply(v)))
}

/// Powers `V, V + V², …` of a subspace of `B`, cumulative, for `1..=n`; entry 0 is empty.
pub fn cumulative_powers(b: &TruncatedAlgebra, v: &Subspace<usize>, n: usize) -> (Vec<Subspace<usize>>, bool) {
    let mut out = vec![Subspace::new()];
    if n == 0 {
        return (out, true);
    }
    let mut chain = PowerChain::new(b, v.clone());
    out.push(chain.current().clone());
    for _ in 2..=n {
        chain.advance();
        out.push(chain.current().clone());
    }
    (out, chain.exact())
}

/// Weight-indexed recurrence `W_m = γ(V^m) + Σ_{i<m} γ(V^i)·W_{m−i}`, valid
/// because every product splits as its first factor times the rest.
pub fn w_chain(
    b: &TruncatedAlgebra,
    a: &TruncatedAlgebra,
    gamma: &GammaSpec,
    v: &Subspace<usize>,
    n: usize,
) -> Result<WChain> {
    if b.field() != a.field() {
        return Err(Error::FieldMismatch(b.field(), a.field()));
    }
    let mut chain = PowerChain::new(b, v.clone());
    let mut images = vec![Subspace::new()];
    let mut levels: Vec<Subspace<usize>> = vec![Subspace::new()];
    let mut level_exact = vec![true];
    let mut exact = true;
    for m in 1..=n {
        if m > 1 {
            chain.advance();
        }
        exact &= chain.exact();
        images.push(gamma_image(gamma, chain.current()));
        let mut w = images[m].clone();
        for i in 1..m {
            let (p, lost) = a.product_span(&images[i], &levels[m - i]);
            exact &= !lost;
            w.absorb(&p);
        }
        levels.push(w);
        level_exact.push(exact);
    }
    Ok(WChain { levels, level_exact })
}

pub fn compute_w(
    b: &TruncatedAlgebra,
    a: &TruncatedAlgebra,
    gamma: &GammaSpec,
    v: &Subspace<usize>,
    n: usize,
) -> Result<(Subspace<usize>, bool)> {
    let mut chain = w_chain(b, a, gamma, v, n)?;
    let exact = chain.exact();
    Ok((chain.levels.swap_remove(n), exact))
}

pub fn w_gamma(
    b: &TruncatedAlgebra,
    a: &TruncatedAlgebra,
    gamma: &GammaSpec,
    v: &Subspace<usize>,
    n: usize,
) -> Result<(usize, bool)> {
    let (w, exact) = compute_w(b, a, gamma, v, n)?;
    Ok((w.dim(), exact))
}

/// `w_γ(n)` for `n = 1..=n_max`.
pub fn w_gamma_table(
    b: &TruncatedAlgebra,
    a: &TruncatedAlgebra,
    gamma: &GammaSpec,
    v: &Subspace<usize>,
    n_max: usize,
) -> Result<GrowthTable> {
    let chain = w_chain(b, a, gamma, v, n_max)?;
    let mut t = GrowthTable::new("w_gamma");
    for m in 1..=n_max {
        t.insert(m, chain.levels[m].dim(), chain.level_exact[m]);
    }
    Ok(t)
}
