//! Domain types: probability vectors, flat-region specifications, observed
//! counts, and the grouping/expansion maps between the full support `{1..k}`
//! and the `m`-dimensional grouped parameter space.

use crate::scalar::{real, unit_tol, Real};
use crate::{Error, Result};

/// A finite probability vector over the support `{1..k}`.
///
/// Entries are nonnegative and sum to one within `1e-12`. The vector is
/// immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfOf<T> {
    probs: Vec<T>,
}

impl<T: Real> PmfOf<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidPmf("support size must be at least 1".into()));
        }
        if let Some(i) = probs.iter().position(|p| *p < T::zero() || !p.is_finite()) {
            return Err(Error::InvalidPmf(format!(
                "entry {} is {}, expected a nonnegative finite value",
                i + 1,
                probs[i]
            )));
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > unit_tol::<T>() {
            return Err(Error::InvalidPmf(format!("entries sum to {total}, expected 1")));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// Support size `k`.
    pub fn support_size(&self) -> usize {
        self.probs.len()
    }
}

/// The known flat-region lengths `w = (w_1, ..., w_m)` together with the
/// derived zero-based start offset of each region.
///
/// Region `j` covers the support points `q_j .. q_j + w_j - 1` where
/// `q_1 = 1`; internally the starts are kept zero-based for indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatSpec {
    lengths: Vec<usize>,
    starts: Vec<usize>,
}

impl FlatSpec {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidFlatSpec("at least one region required".into()));
        }
        if let Some(j) = lengths.iter().position(|w| *w == 0) {
            return Err(Error::InvalidFlatSpec(format!("region {} has length 0", j + 1)));
        }
        let mut starts = Vec::with_capacity(lengths.len());
        let mut q = 0usize;
        for w in &lengths {
            starts.push(q);
            q += w;
        }
        Ok(Self { lengths, starts })
    }

    /// Number of regions `m`.
    pub fn region_count(&self) -> usize {
        self.lengths.len()
    }

    /// Total support size `k = Σ w_j`.
    pub fn support_size(&self) -> usize {
        self.starts.last().unwrap() + self.lengths.last().unwrap()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Zero-based start offset of each region (`q_j - 1` in one-based terms).
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    /// Iterate over the regions as index ranges into the support.
    pub fn regions(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.lengths
            .iter()
            .zip(&self.starts)
            .map(|(&w, &q)| q..q + w)
    }

    /// Region lengths as scalars, for use as isotonic regression weights.
    pub fn weights<T: Real>(&self) -> Vec<T> {
        self.lengths.iter().map(|&w| real::<T>(w as f64)).collect()
    }

    pub(crate) fn check_support(&self, k: usize, what: &str) -> Result<()> {
        if self.support_size() != k {
            return Err(Error::DimensionMismatch(format!(
                "flat regions cover {} support points but {what} has {k}",
                self.support_size()
            )));
        }
        Ok(())
    }
}

/// Observed per-point counts `n_i`, with `n = Σ n_i ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    counts: Vec<u64>,
    total: u64,
}

impl CountVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidCounts("support size must be at least 1".into()));
        }
        let total = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidCounts("total sample size must be at least 1".into()));
        }
        Ok(Self { counts, total })
    }

    /// Tally raw observations (values in `{1..k}`) into a count vector with
    /// `k` equal to the largest observed value.
    pub fn from_samples(samples: &[u64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(i) = samples.iter().position(|&x| x == 0) {
            return Err(Error::InvalidCounts(format!(
                "sample {} has value 0, support starts at 1",
                i + 1
            )));
        }
        let k = *samples.iter().max().unwrap() as usize;
        let mut counts = vec![0u64; k];
        for &x in samples {
            counts[x as usize - 1] += 1;
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total sample size `n`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }
}

/// The grouped parameter vector `p'` with its region lengths.
///
/// Satisfies `Σ w_j p'_j = 1` within `1e-12` and `p'_j ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedEstimateOf<T> {
    values: Vec<T>,
    spec: FlatSpec,
}

impl<T: Real> GroupedEstimateOf<T> {
    pub fn new(values: Vec<T>, spec: FlatSpec) -> Result<Self> {
        if values.len() != spec.region_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} grouped values for {} regions",
                values.len(),
                spec.region_count()
            )));
        }
        if let Some(j) = values.iter().position(|v| *v < T::zero() || !v.is_finite()) {
            return Err(Error::InvalidGrouped(format!(
                "value {} is {}, expected a nonnegative finite value",
                j + 1,
                values[j]
            )));
        }
        let total: T = values
            .iter()
            .zip(spec.lengths())
            .map(|(&v, &w)| v * real::<T>(w as f64))
            .sum();
        if (total - T::one()).abs() > unit_tol::<T>() {
            return Err(Error::InvalidGrouped(format!(
                "weighted sum Σ w_j p'_j is {total}, expected 1"
            )));
        }
        Ok(Self { values, spec })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn spec(&self) -> &FlatSpec {
        &self.spec
    }
}

/// Check whether `p` has exactly the flat structure described by `spec`:
/// constant within each region (within `1e-12`) and strictly decreasing
/// across consecutive region boundaries.
pub fn validate_monotone_with_flats<T: Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Result<bool> {
    spec.check_support(p.support_size(), "pmf")?;
    let tol = unit_tol::<T>();
    let probs = p.probs();
    for region in spec.regions() {
        let first = probs[region.start];
        if region.clone().any(|i| (probs[i] - first).abs() > tol) {
            return Ok(false);
        }
    }
    for pair in spec.starts().windows(2) {
        if probs[pair[0]] - probs[pair[1]] <= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Build the mixture `Σ_c mass_c · U(top_c)` of discrete uniforms on
/// `{1..top_c}` and the flat-region structure it induces.
///
/// Masses must be positive and sum to one; tops must be strictly increasing.
/// The region boundaries fall at each `top_c`, so the returned spec has one
/// region per component.
pub fn mixture_of_uniforms<T: Real>(components: &[(T, usize)]) -> Result<(PmfOf<T>, FlatSpec)> {
    if components.is_empty() {
        return Err(Error::InvalidMixture("no components".into()));
    }
    let mut mass_total = T::zero();
    let mut prev_top = 0usize;
    for (c, &(mass, top)) in components.iter().enumerate() {
        if mass <= T::zero() || !mass.is_finite() {
            return Err(Error::InvalidMixture(format!(
                "component {} has mass {mass}, expected positive",
                c + 1
            )));
        }
        if top <= prev_top {
            return Err(Error::InvalidMixture(format!(
                "component {} has top {top}, expected strictly increasing tops",
                c + 1
            )));
        }
        mass_total = mass_total + mass;
        prev_top = top;
    }
    if (mass_total - T::one()).abs() > unit_tol::<T>() {
        return Err(Error::InvalidMixture(format!(
            "masses sum to {mass_total}, expected 1"
        )));
    }

    let k = components.last().unwrap().1;
    let mut probs = vec![T::zero(); k];
    for &(mass, top) in components {
        let per_point = mass / real::<T>(top as f64);
        for p in probs.iter_mut().take(top) {
            *p = *p + per_point;
        }
    }
    let mut lengths = Vec::with_capacity(components.len());
    let mut prev = 0usize;
    for &(_, top) in components {
        lengths.push(top - prev);
        prev = top;
    }
    Ok((PmfOf::new(probs)?, FlatSpec::new(lengths)?))
}

/// Pool the counts region by region: `n'_j = Σ_{i ∈ region j} n_i`.
pub fn group_counts(c: &CountVector, spec: &FlatSpec) -> Result<Vec<u64>> {
    spec.check_support(c.support_size(), "count vector")?;
    Ok(spec
        .regions()
        .map(|r| c.counts()[r].iter().sum())
        .collect())
}

/// Expand a grouped estimate to the full support, repeating each `p'_j`
/// exactly `w_j` times (the action of the 0/1 expansion matrix).
pub fn expand<T: Real>(g: &GroupedEstimateOf<T>) -> PmfOf<T> {
    let mut probs = Vec::with_capacity(g.spec().support_size());
    for (&v, &w) in g.values().iter().zip(g.spec().lengths()) {
        probs.extend(std::iter::repeat(v).take(w));
    }
    // Σ w_j p'_j = 1 is a construction invariant of GroupedEstimateOf.
    PmfOf::new(probs).expect("expansion of a valid grouped estimate is a valid pmf")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pmf(v: &[f64]) -> PmfOf<f64> {
        PmfOf::new(v.to_vec()).unwrap()
    }

    #[test]
    fn pmf_rejects_bad_vectors() {
        assert!(PmfOf::<f64>::new(vec![]).is_err());
        assert!(PmfOf::new(vec![0.5, 0.6]).is_err());
        assert!(PmfOf::new(vec![-0.1, 1.1]).is_err());
        assert!(PmfOf::new(vec![0.5, 0.5]).is_ok());
    }

    #[test]
    fn flat_spec_derives_starts() {
        let spec = FlatSpec::new(vec![4, 4]).unwrap();
        assert_eq!(spec.starts(), &[0, 4]);
        assert_eq!(spec.support_size(), 8);
        assert!(FlatSpec::new(vec![2, 0]).is_err());
        assert!(FlatSpec::new(vec![]).is_err());
    }

    #[test]
    fn validate_flat_structure() {
        let spec = FlatSpec::new(vec![4, 4]).unwrap();
        let p = pmf(&[0.15, 0.15, 0.15, 0.15, 0.1, 0.1, 0.1, 0.1]);
        assert!(validate_monotone_with_flats(&p, &spec).unwrap());

        let spec = FlatSpec::new(vec![2]).unwrap();
        assert!(validate_monotone_with_flats(&pmf(&[0.5, 0.5]), &spec).unwrap());

        let spec = FlatSpec::new(vec![2, 1]).unwrap();
        assert!(!validate_monotone_with_flats(&pmf(&[0.5, 0.3, 0.2]), &spec).unwrap());

        // nondecreasing across the boundary
        let spec = FlatSpec::new(vec![1, 1]).unwrap();
        assert!(!validate_monotone_with_flats(&pmf(&[0.4, 0.6]), &spec).unwrap());
        assert!(!validate_monotone_with_flats(&pmf(&[0.5, 0.5]), &spec).unwrap());

        let spec = FlatSpec::new(vec![2, 2]).unwrap();
        assert!(matches!(
            validate_monotone_with_flats(&pmf(&[0.5, 0.5]), &spec),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn mixture_matches_hand_arithmetic() {
        let (p, spec) = mixture_of_uniforms(&[(0.2, 4), (0.8, 8)]).unwrap();
        let expected: [f64; 8] = [0.15, 0.15, 0.15, 0.15, 0.1, 0.1, 0.1, 0.1];
        for (a, b) in p.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(spec.lengths(), &[4, 4]);

        let (p, spec) = mixture_of_uniforms(&[(0.15, 4), (0.1, 8), (0.75, 12)]).unwrap();
        let expected: [f64; 12] = [
            0.1125, 0.1125, 0.1125, 0.1125, 0.075, 0.075, 0.075, 0.075, 0.0625, 0.0625, 0.0625,
            0.0625,
        ];
        for (a, b) in p.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(spec.lengths(), &[4, 4, 4]);

        let (p, spec) = mixture_of_uniforms::<f64>(&[(1.0, 3)]).unwrap();
        for &a in p.probs() {
            assert!((a - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(spec.lengths(), &[3]);
    }

    #[test]
    fn mixture_rejects_bad_components() {
        assert!(matches!(
            mixture_of_uniforms(&[(0.5, 4), (0.4, 8)]),
            Err(Error::InvalidMixture(_))
        ));
        assert!(matches!(
            mixture_of_uniforms(&[(0.5, 8), (0.5, 4)]),
            Err(Error::InvalidMixture(_))
        ));
        assert!(matches!(
            mixture_of_uniforms(&[(0.5, 4), (0.5, 4)]),
            Err(Error::InvalidMixture(_))
        ));
    }

    #[test]
    fn grouping_examples() {
        let c = CountVector::new(vec![3, 5, 2, 6, 4]).unwrap();
        let spec = FlatSpec::new(vec![2, 3]).unwrap();
        assert_eq!(group_counts(&c, &spec).unwrap(), vec![8, 12]);

        let c = CountVector::new(vec![1, 0, 0]).unwrap();
        let spec = FlatSpec::new(vec![1, 1, 1]).unwrap();
        assert_eq!(group_counts(&c, &spec).unwrap(), vec![1, 0, 0]);

        let c = CountVector::new(vec![2, 2, 2, 2]).unwrap();
        let spec = FlatSpec::new(vec![4]).unwrap();
        assert_eq!(group_counts(&c, &spec).unwrap(), vec![8]);

        let spec = FlatSpec::new(vec![2, 2]).unwrap();
        let c = CountVector::new(vec![1, 1, 1]).unwrap();
        assert!(matches!(
            group_counts(&c, &spec),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn expand_repeats_values() {
        let spec = FlatSpec::new(vec![2, 3]).unwrap();
        let g = GroupedEstimateOf::new(vec![0.2, 0.2], spec).unwrap();
        assert_eq!(expand(&g).probs(), &[0.2, 0.2, 0.2, 0.2, 0.2]);

        let spec = FlatSpec::new(vec![4, 4]).unwrap();
        let g = GroupedEstimateOf::new(vec![0.15, 0.1], spec).unwrap();
        assert_eq!(
            expand(&g).probs(),
            &[0.15, 0.15, 0.15, 0.15, 0.1, 0.1, 0.1, 0.1]
        );

        let spec = FlatSpec::new(vec![1]).unwrap();
        let g = GroupedEstimateOf::new(vec![1.0], spec).unwrap();
        assert_eq!(expand(&g).probs(), &[1.0]);
    }

    #[test]
    fn tally_samples() {
        let c = CountVector::from_samples(&[1, 1, 2]).unwrap();
        assert_eq!(c.counts(), &[2, 1]);
        assert_eq!(c.total(), 3);
        assert!(CountVector::from_samples(&[]).is_err());
        assert!(CountVector::from_samples(&[0, 1]).is_err());
    }

    proptest! {
        #[test]
        fn group_counts_preserves_total(
            lengths in prop::collection::vec(1usize..5, 1..6),
            seed_counts in prop::collection::vec(0u64..20, 24),
        ) {
            let spec = FlatSpec::new(lengths).unwrap();
            let k = spec.support_size();
            let mut counts: Vec<u64> = seed_counts[..k].to_vec();
            counts[0] += 1; // ensure n >= 1
            let c = CountVector::new(counts).unwrap();
            let grouped = group_counts(&c, &spec).unwrap();
            prop_assert_eq!(grouped.iter().sum::<u64>(), c.total());
        }

        #[test]
        fn mixture_passes_its_own_validation(
            raw in prop::collection::vec((1u32..10, 1usize..4), 1..5),
        ) {
            let total: u32 = raw.iter().map(|(m, _)| m).sum();
            let mut top = 0usize;
            let components: Vec<(f64, usize)> = raw
                .iter()
                .map(|&(m, dt)| {
                    top += dt;
                    (m as f64 / total as f64, top)
                })
                .collect();
            let (p, spec) = mixture_of_uniforms(&components).unwrap();
            prop_assert!(validate_monotone_with_flats(&p, &spec).unwrap());
        }

        #[test]
        fn expand_then_group_recovers_values(
            lengths in prop::collection::vec(1usize..5, 1..6),
            raw in prop::collection::vec(1u32..10, 6),
        ) {
            let spec = FlatSpec::new(lengths).unwrap();
            let m = spec.region_count();
            // strictly decreasing grouped values normalized to Σ w_j v_j = 1
            let mut vals: Vec<f64> = raw[..m].iter().map(|&x| x as f64).collect();
            vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (j, v) in vals.iter_mut().enumerate() {
                *v += (m - j) as f64 * 0.01;
            }
            let norm: f64 = vals
                .iter()
                .zip(spec.lengths())
                .map(|(&v, &w)| v * w as f64)
                .sum();
            let vals: Vec<f64> = vals.iter().map(|v| v / norm).collect();
            let g = GroupedEstimateOf::new(vals.clone(), spec.clone()).unwrap();
            let p = expand(&g);
            prop_assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (j, region) in spec.regions().enumerate() {
                for i in region {
                    prop_assert_eq!(p.probs()[i], vals[j]);
                }
            }
        }
    }
}
