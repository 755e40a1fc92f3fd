//! Loss functions for comparing probability vectors.

use crate::pmf::PmfOf;
use crate::scalar::{real, Real};
use crate::{Error, Result};

fn check_lengths<T: Real>(a: &PmfOf<T>, b: &PmfOf<T>) -> Result<()> {
    if a.support_size() != b.support_size() {
        return Err(Error::DimensionMismatch(format!(
            "support sizes {} and {}",
            a.support_size(),
            b.support_size()
        )));
    }
    Ok(())
}

/// Squared l2 distance `Σ (a_i − b_i)²`.
pub fn l2_squared<T: Real>(a: &PmfOf<T>, b: &PmfOf<T>) -> Result<T> {
    check_lengths(a, b)?;
    Ok(a.probs()
        .iter()
        .zip(b.probs())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum())
}

/// Squared Hellinger distance `(1/2) Σ (√a_i − √b_i)²`, in `[0, 1]`.
pub fn hellinger_squared<T: Real>(a: &PmfOf<T>, b: &PmfOf<T>) -> Result<T> {
    check_lengths(a, b)?;
    let sum: T = a
        .probs()
        .iter()
        .zip(b.probs())
        .map(|(&x, &y)| {
            let d = x.sqrt() - y.sqrt();
            d * d
        })
        .sum();
    Ok(sum / real::<T>(2.0))
}

/// l1 distance `Σ |a_i − b_i|`.
pub fn l1<T: Real>(a: &PmfOf<T>, b: &PmfOf<T>) -> Result<T> {
    check_lengths(a, b)?;
    Ok(a.probs()
        .iter()
        .zip(b.probs())
        .map(|(&x, &y)| (x - y).abs())
        .sum())
}
