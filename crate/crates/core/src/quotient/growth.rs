//! Growth of a generating subspace: `g(V, n) = dim Σ_{k≤n} V^k`.

use crate::growth::table::GrowthTable;
use crate::quotient::algebra::TruncatedAlgebra;
use crate::subspace::Subspace;

/// The chain `V ⊆ V + V² ⊆ ...`, keeping products of exactly `k` factors.
pub struct PowerChain<'a> {
    alg: &'a TruncatedAlgebra,
    v: Subspace<usize>,
    last: Subspace<usize>,
    total: Subspace<usize>,
    k: usize,
    exact: bool,
}

impl<'a> PowerChain<'a> {
    pub fn new(alg: &'a TruncatedAlgebra, v: Subspace<usize>) -> Self {
        PowerChain {
            alg,
            last: v.clone(),
            total: v.clone(),
            v,
            k: 1,
            exact: true,
        }
    }

    /// Number of factors reached so far.
    pub fn power(&self) -> usize {
        self.k
    }

    /// `Σ_{i≤k} V^i`.
    pub fn current(&self) -> &Subspace<usize> {
        &self.total
    }

    /// Span of products of exactly `k` factors.
    pub fn top(&self) -> &Subspace<usize> {
        &self.last
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    pub fn advance(&mut self) {
        if !self.last.is_zero() {
            let (next, lost) = self.alg.product_span(&self.last, &self.v);
            self.exact &= !lost;
            self.total.absorb(&next);
            self.last = next;
        }
        self.k += 1;
    }

    pub fn advance_to(&mut self, n: usize) {
        while self.k < n {
            self.advance();
        }
    }
}

/// `g(V, n)` and whether it is exact.
pub fn growth_g(alg: &TruncatedAlgebra, v: &Subspace<usize>, n: usize) -> (usize, bool) {
    if n == 0 {
        return (0, true);
    }
    let mut chain = PowerChain::new(alg, v.clone());
    chain.advance_to(n);
    (chain.current().dim(), chain.exact())
}

/// `g(V, n)` for `n = 1..=n_max`.
pub fn growth_table(
    alg: &TruncatedAlgebra,
    v: &Subspace<usize>,
    n_max: usize,
    label: impl Into<String>,
) -> GrowthTable {
    let mut t = GrowthTable::new(label);
    if n_max == 0 {
        return t;
    }
    let mut chain = PowerChain::new(alg, v.clone());
    t.insert(1, chain.current().dim(), chain.exact());
    for n in 2..=n_max {
        chain.advance();
        t.insert(n, chain.current().dim(), chain.exact());
    }
    t
}
