//! Weighted decreasing isotonic regression (pool-adjacent-violators) and the
//! least-concave-majorant route to the Grenander estimator.

use crate::pmf::{CountVector, PmfOf};
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// A sequence of values with positive weights, the input to weighted
/// isotonic regression.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSeqOf<T> {
    values: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> WeightedSeqOf<T> {
    pub fn new(values: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if values.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| *w <= T::zero() || !w.is_finite()) {
            return Err(Error::InvalidCounts("weights must be positive".into()));
        }
        Ok(Self { values, weights })
    }

    /// Equal-weight sequence.
    pub fn unweighted(values: Vec<T>) -> Result<Self> {
        let weights = vec![T::one(); values.len()];
        Self::new(values, weights)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

/// Weighted least-squares projection onto the nonincreasing cone:
/// the minimizer of `Σ w_j (s_j - f_j)²` over `f_1 ≥ f_2 ≥ ... ≥ f_m`.
///
/// Pool-adjacent-violators, decreasing order: scan left to right keeping a
/// stack of blocks; whenever the last block value is smaller than the
/// incoming one, merge them into their weighted average.
pub fn pava_decreasing<T: Real>(s: &WeightedSeqOf<T>) -> Vec<T> {
    struct Block<T> {
        value: T,
        weight: T,
        len: usize,
    }

    let mut blocks: Vec<Block<T>> = Vec::with_capacity(s.values().len());
    for (&v, &w) in s.values().iter().zip(s.weights()) {
        let mut value = v;
        let mut weight = w;
        let mut len = 1;
        while let Some(last) = blocks.last() {
            if last.value < value {
                let total = last.weight + weight;
                value = (last.value * last.weight + value * weight) / total;
                weight = total;
                len += last.len;
                blocks.pop();
            } else {
                break;
            }
        }
        blocks.push(Block { value, weight, len });
    }

    let mut out = Vec::with_capacity(s.values().len());
    for b in blocks {
        out.extend(std::iter::repeat(b.value).take(b.len));
    }
    out
}

/// Left derivatives of the least concave majorant of the empirical CDF.
///
/// The LCM of the points `(0,0), (1, F_n(1)), ..., (k, F_n(k))` is the upper
/// convex hull of that point set; its left slope at each support point is the
/// Grenander estimate there. Hull computed by a single monotone-chain scan,
/// with cumulative counts kept in integer arithmetic so that collinearity
/// tests are exact.
pub fn lcm_left_derivatives<T: Real>(c: &CountVector) -> PmfOf<T> {
    let k = c.support_size();
    // hull vertices as (x, cumulative count)
    let mut hull: Vec<(u64, u64)> = Vec::with_capacity(k + 1);
    hull.push((0, 0));
    let mut cum = 0u64;
    for (i, &n_i) in c.counts().iter().enumerate() {
        cum += n_i;
        let p = ((i + 1) as u64, cum);
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // pop b when slope(a,b) <= slope(b,p), i.e. b lies on or below chord a-p
            let lhs = (b.1 - a.1) as i128 * (p.0 - b.0) as i128;
            let rhs = (p.1 - b.1) as i128 * (b.0 - a.0) as i128;
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }

    let n = real::<T>(c.total() as f64);
    let mut probs = Vec::with_capacity(k);
    for seg in hull.windows(2) {
        let (x0, y0) = seg[0];
        let (x1, y1) = seg[1];
        let slope = real::<T>((y1 - y0) as f64) / (real::<T>((x1 - x0) as f64) * n);
        probs.extend(std::iter::repeat(slope).take((x1 - x0) as usize));
    }
    PmfOf::new(probs).expect("LCM slopes form a valid pmf")
}
