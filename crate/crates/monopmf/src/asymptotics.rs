//! Closed-form asymptotic covariance matrices of the grouped and expanded
//! flat-region MLE, and the limit risks of the flat-region and Grenander
//! estimators under the l2 and Hellinger losses.

use crate::pmf::{validate_monotone_with_flats, FlatSpec, PmfOf};
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// A dense symmetric real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrixOf<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Real> CovMatrixOf<T> {
    fn from_fn(dim: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }
}

/// The grouped values `p'_j` of a pmf that matches the flat structure.
fn grouped_values<T: Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Result<Vec<T>> {
    if !validate_monotone_with_flats(p, spec)? {
        return Err(Error::NotMonotoneWithFlats(
            "pmf is not constant on each region and strictly decreasing across regions".into(),
        ));
    }
    Ok(spec.starts().iter().map(|&q| p.probs()[q]).collect())
}

/// Asymptotic covariance of `√n (p̂'_n − p')`, the grouped unrestricted MLE:
/// `Σ'_ij = δ_ij p'_i / w_i − p'_i p'_j`.
pub fn sigma_grouped<T: Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Result<CovMatrixOf<T>> {
    let values = grouped_values(p, spec)?;
    let lengths = spec.lengths();
    Ok(CovMatrixOf::from_fn(values.len(), |i, j| {
        let cross = values[i] * values[j];
        if i == j {
            values[i] / real::<T>(lengths[i] as f64) - cross
        } else {
            -cross
        }
    }))
}

/// Asymptotic covariance of `√n (p̂*_n − p)` on the full support:
/// the grouped covariance expanded by the 0/1 region-membership matrix, so
/// entry `(a, b)` is `Σ'_{j(a), j(b)}` with `j(·)` the region of the index.
pub fn sigma_star<T: Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Result<CovMatrixOf<T>> {
    let grouped = sigma_grouped(p, spec)?;
    let k = spec.support_size();
    let mut region_of = vec![0usize; k];
    for (j, range) in spec.regions().enumerate() {
        for i in range {
            region_of[i] = j;
        }
    }
    Ok(CovMatrixOf::from_fn(k, |a, b| {
        grouped.get(region_of[a], region_of[b])
    }))
}

/// Limit of `E[n · l2²(p̂*_n, p)]`: `Σ_j w_j p'_j (1/w_j − p'_j)`.
pub fn limit_l2_risk_flat<T: Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Result<T> {
    let values = grouped_values(p, spec)?;
    Ok(values
        .iter()
        .zip(spec.lengths())
        .map(|(&pj, &wj)| {
            let w = real::<T>(wj as f64);
            w * pj * (w.recip() - pj)
        })
        .sum())
}

/// Limit of `E[n · l2²(p̂^G_n, p)]` for the Grenander estimator:
/// `Σ_j Σ_{q=1}^{w_j} p'_j (1/q − p'_j)`.
pub fn limit_l2_risk_grenander<T: Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Result<T> {
    let values = grouped_values(p, spec)?;
    let mut total = T::zero();
    for (&pj, &wj) in values.iter().zip(spec.lengths()) {
        for q in 1..=wj {
            total = total + pj * (real::<T>(q as f64).recip() - pj);
        }
    }
    Ok(total)
}

/// Limit of `E[n · H²(p̂*_n, p)]`: `(1/8) Σ_j w_j (1/w_j − p'_j)`.
pub fn limit_hellinger_risk_flat<T: Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Result<T> {
    let values = grouped_values(p, spec)?;
    let sum: T = values
        .iter()
        .zip(spec.lengths())
        .map(|(&pj, &wj)| {
            let w = real::<T>(wj as f64);
            w * (w.recip() - pj)
        })
        .sum();
    Ok(sum / real::<T>(8.0))
}

/// Limit of `E[n · H²(p̂^G_n, p)]` for the Grenander estimator:
/// `(1/8) Σ_j Σ_{q=1}^{w_j} (1/q − p'_j)`.
pub fn limit_hellinger_risk_grenander<T: Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Result<T> {
    let values = grouped_values(p, spec)?;
    let mut total = T::zero();
    for (&pj, &wj) in values.iter().zip(spec.lengths()) {
        for q in 1..=wj {
            total = total + (real::<T>(q as f64).recip() - pj);
        }
    }
    Ok(total / real::<T>(8.0))
}
