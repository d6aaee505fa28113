//! Window estimates of the polynomial growth exponent.
//!
//! The estimate is the least-squares slope of `ln dim` against `ln n` over the
//! exact, nonzero entries of a window. It is computed in `f64` and rounded to the
//! nearest multiple of `10⁻⁶` for the rational value. This is a statement about
//! the window only; the infimum over all exponents is not computable from finite
//! data.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::table::GrowthTable;

pub const SLOPE_DENOMINATOR: i64 = 1_000_000;
pub const DEFAULT_RATIO_THRESHOLD: f64 = 1.5;
const MIN_POINTS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GkEstimate {
    #[serde(serialize_with = "ser_rational")]
    pub slope: BigRational,
    pub slope_f64: f64,
    pub window: (usize, usize),
    pub points: usize,
    /// Root-mean-square residual of the fit, in log units.
    pub residual: f64,
    /// Every successive ratio `dim(n+1)/dim(n)` in the window reached the threshold.
    pub super_polynomial: bool,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn gk_estimate(table: &GrowthTable, window: (usize, usize), ratio_threshold: f64) -> Result<GkEstimate> {
    let (lo, hi) = window;
    if lo == 0 || lo > hi {
        return Err(Error::InvalidArgument(format!("bad window {lo}:{hi}")));
    }
    let pts: Vec<(usize, usize)> = table
        .iter()
        .filter(|(n, e)| *n >= lo && *n <= hi && e.exact && e.dim > 0)
        .map(|(n, e)| (n, e.dim))
        .collect();
    if pts.len() < MIN_POINTS {
        return Err(Error::TooFewPoints { need: MIN_POINTS, have: pts.len() });
    }
    let xs: Vec<f64> = pts.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|&(_, d)| (d as f64).ln()).collect();
    let m = pts.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let rounded = (slope * SLOPE_DENOMINATOR as f64).round() as i64;
    let super_polynomial = pts
        .windows(2)
        .filter(|w| w[1].0 == w[0].0 + 1)
        .all(|w| w[1].1 as f64 >= ratio_threshold * w[0].1 as f64);
    Ok(GkEstimate {
        slope: BigRational::new(BigInt::from(rounded), BigInt::from(SLOPE_DENOMINATOR)),
        slope_f64: slope,
        window,
        points: pts.len(),
        residual: (sse / m).sqrt(),
        super_polynomial,
    })
}
