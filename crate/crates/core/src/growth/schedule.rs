//! Increasing degree thresholds `0 = n_0 < n_1 < n_2 < ...`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationSchedule {
    /// `n_1, n_2, ...`; `n_0 = 0` is implicit.
    thresholds: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Faithfulness {
    pub faithful: bool,
    /// One line per violated growth constraint.
    pub violations: Vec<String>,
}

impl FiltrationSchedule {
    pub fn new(thresholds: Vec<usize>) -> Result<Self> {
        let mut prev = 0;
        for &n in &thresholds {
            if n <= prev {
                return Err(Error::ScheduleNotIncreasing);
            }
            prev = n;
        }
        Ok(FiltrationSchedule { thresholds })
    }

    /// Parses `2,4,6`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Self::new(Vec::new());
        }
        let v: std::result::Result<Vec<usize>, _> = t.split(',').map(|s| s.trim().parse()).collect();
        Self::new(v.map_err(|_| Error::Parse(format!("bad schedule `{t}`")))?)
    }

    /// `n_k`; `n_0 = 0`, and `None` past the end of the list.
    pub fn get(&self, k: usize) -> Option<usize> {
        if k == 0 {
            Some(0)
        } else {
            self.thresholds.get(k - 1).copied()
        }
    }

    /// Number of listed thresholds (excluding `n_0`).
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }

    /// Checks `n_k > e^{n_{k-1}}` and `n_k > e^{e^k}` for every listed `k >= 2`.
    /// These are reported, never enforced.
    pub fn faithfulness(&self) -> Faithfulness {
        let mut violations = Vec::new();
        for k in 2..=self.len() {
            let nk = self.get(k).unwrap() as f64;
            let prev = self.get(k - 1).unwrap() as f64;
            let a = prev.exp();
            if nk <= a {
                violations.push(format!("n_{k} = {nk} <= e^n_{} = {a:.3}", k - 1));
            }
            let b = (k as f64).exp().exp();
            if nk <= b {
                violations.push(format!("n_{k} = {nk} <= e^e^{k} = {b:.3}"));
            }
        }
        Faithfulness { faithful: violations.is_empty(), violations }
    }
}
