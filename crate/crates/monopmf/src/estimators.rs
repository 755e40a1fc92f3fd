//! The four estimators under comparison: empirical, monotone rearrangement,
//! Grenander, and the flat-region maximum likelihood estimator.

use crate::isotonic::{pava_decreasing, WeightedSeqOf};
use crate::pmf::{expand, group_counts, CountVector, FlatSpec, GroupedEstimateOf, PmfOf};
use crate::scalar::{real, Real};
use crate::Result;

/// Relative frequencies `n_i / n`, the unrestricted MLE.
pub fn empirical_estimator<T: Real>(c: &CountVector) -> PmfOf<T> {
    let n = real::<T>(c.total() as f64);
    let probs = c
        .counts()
        .iter()
        .map(|&x| real::<T>(x as f64) / n)
        .collect();
    PmfOf::new(probs).expect("relative frequencies form a valid pmf")
}

/// The empirical estimator sorted into nonincreasing order.
///
/// The sort is stable, so tied values keep their original index order.
pub fn rearrangement_estimator<T: Real>(c: &CountVector) -> PmfOf<T> {
    let mut probs = empirical_estimator::<T>(c).probs().to_vec();
    probs.sort_by(|a, b| b.partial_cmp(a).expect("probabilities are finite"));
    PmfOf::new(probs).expect("rearranged pmf is a valid pmf")
}

/// Decreasing isotonic regression of the empirical estimator with unit
/// weights; equal to the left derivatives of the least concave majorant of
/// the empirical CDF.
pub fn grenander_estimator<T: Real>(c: &CountVector) -> PmfOf<T> {
    let empirical = empirical_estimator::<T>(c).probs().to_vec();
    let s = WeightedSeqOf::unweighted(empirical).expect("count vector is nonempty");
    PmfOf::new(pava_decreasing(&s)).expect("isotonic projection of a pmf is a valid pmf")
}

/// Unrestricted MLE of the grouped parameters: `p̂'_j = n'_j / (w_j n)`.
pub fn grouped_unrestricted_mle<T: Real>(
    c: &CountVector,
    spec: &FlatSpec,
) -> Result<GroupedEstimateOf<T>> {
    let grouped = group_counts(c, spec)?;
    let n = real::<T>(c.total() as f64);
    let values = grouped
        .iter()
        .zip(spec.lengths())
        .map(|(&nj, &wj)| real::<T>(nj as f64) / (real::<T>(wj as f64) * n))
        .collect();
    GroupedEstimateOf::new(values, spec.clone())
}

/// The flat-region MLE: group the counts, project the grouped frequencies
/// onto the nonincreasing cone with the region lengths as weights, and expand
/// back to the full support.
pub fn flat_mle<T: Real>(c: &CountVector, spec: &FlatSpec) -> Result<PmfOf<T>> {
    let grouped = grouped_unrestricted_mle::<T>(c, spec)?;
    let s = WeightedSeqOf::new(grouped.values().to_vec(), spec.weights())?;
    let isotonic = pava_decreasing(&s);
    Ok(expand(&GroupedEstimateOf::new(isotonic, spec.clone())?))
}
