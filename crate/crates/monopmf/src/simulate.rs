//! Seeded multinomial sampling and the Monte Carlo risk-comparison engine.
//!
//! Reproducibility contract: every replicate draws from its own ChaCha8
//! stream derived from `(seed, sample size, replicate index)`, so results are
//! bit-identical across runs and independent of how replicates are scheduled
//! across worker threads. Multinomial draws are generated as sequential
//! conditional binomials.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::estimators::{
    empirical_estimator, flat_mle, grenander_estimator, rearrangement_estimator,
};
use crate::metrics::{hellinger_squared, l1, l2_squared};
use crate::pmf::{mixture_of_uniforms, FlatSpec, PmfOf};
use crate::{CountVector, Error, Pmf, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Empirical,
    Rearrangement,
    Grenander,
    Flat,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::Empirical,
        EstimatorKind::Rearrangement,
        EstimatorKind::Grenander,
        EstimatorKind::Flat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Empirical => "empirical",
            EstimatorKind::Rearrangement => "rearrangement",
            EstimatorKind::Grenander => "grenander",
            EstimatorKind::Flat => "flat",
        }
    }

    pub fn estimate(self, counts: &CountVector, spec: &FlatSpec) -> Result<Pmf> {
        Ok(match self {
            EstimatorKind::Empirical => empirical_estimator(counts),
            EstimatorKind::Rearrangement => rearrangement_estimator(counts),
            EstimatorKind::Grenander => grenander_estimator(counts),
            EstimatorKind::Flat => flat_mle(counts, spec)?,
        })
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empirical" => Ok(EstimatorKind::Empirical),
            "rearrangement" => Ok(EstimatorKind::Rearrangement),
            "grenander" => Ok(EstimatorKind::Grenander),
            "flat" => Ok(EstimatorKind::Flat),
            other => Err(Error::InvalidConfig(format!("unknown estimator '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    L2,
    Hellinger,
    L1,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::L2, MetricKind::Hellinger, MetricKind::L1];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::L2 => "l2",
            MetricKind::Hellinger => "hellinger",
            MetricKind::L1 => "l1",
        }
    }

    pub fn loss(self, estimate: &Pmf, truth: &Pmf) -> Result<f64> {
        match self {
            MetricKind::L2 => l2_squared(estimate, truth),
            MetricKind::Hellinger => hellinger_squared(estimate, truth),
            MetricKind::L1 => l1(estimate, truth),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(MetricKind::L2),
            "hellinger" => Ok(MetricKind::Hellinger),
            "l1" => Ok(MetricKind::L1),
            other => Err(Error::InvalidConfig(format!("unknown metric '{other}'"))),
        }
    }
}

/// One Monte Carlo experiment: a true mixture pmf, the sample sizes and
/// replicate count, the seed, and which estimators and metrics to evaluate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Mixture components as (mass, top) pairs.
    pub components: Vec<(f64, usize)>,
    pub sample_sizes: Vec<u64>,
    pub replications: usize,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
    pub metrics: Vec<MetricKind>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::InvalidConfig("replications must be at least 1".into()));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::InvalidConfig("at least one sample size required".into()));
        }
        if self.sample_sizes.iter().any(|&n| n == 0) {
            return Err(Error::InvalidConfig("sample sizes must be positive".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidConfig("at least one estimator required".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::InvalidConfig("at least one metric required".into()));
        }
        mixture_of_uniforms::<f64>(&self.components)?;
        Ok(())
    }
}

/// Box-and-whisker statistics of a loss sample, whiskers by the 1.5×IQR
/// convention; quartiles by linear interpolation on the sorted sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxStats {
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
}

impl BoxStats {
    pub fn from_sample(values: &[f64]) -> BoxStats {
        assert!(!values.is_empty());
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("losses are finite"));
        let quantile = |p: f64| -> f64 {
            let pos = p * (sorted.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            let frac = pos - lo as f64;
            sorted[lo] * (1.0 - frac) + sorted[hi] * frac
        };
        let q1 = quantile(0.25);
        let q3 = quantile(0.75);
        let iqr = q3 - q1;
        let low_fence = q1 - 1.5 * iqr;
        let high_fence = q3 + 1.5 * iqr;
        let whisker_low = sorted
            .iter()
            .copied()
            .find(|&x| x >= low_fence)
            .unwrap_or(sorted[0]);
        let whisker_high = sorted
            .iter()
            .rev()
            .copied()
            .find(|&x| x <= high_fence)
            .unwrap_or(*sorted.last().unwrap());
        BoxStats {
            mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
            min: sorted[0],
            q1,
            median: quantile(0.5),
            q3,
            max: *sorted.last().unwrap(),
            whisker_low,
            whisker_high,
        }
    }
}

/// Per-replicate losses and aggregate statistics for one
/// (estimator, metric, sample size) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskSummary {
    pub estimator: EstimatorKind,
    pub metric: MetricKind,
    pub sample_size: u64,
    /// Raw (un-scaled) loss per replicate, indexed by replicate.
    pub losses: Vec<f64>,
    pub stats: BoxStats,
}

impl RiskSummary {
    /// Mean of `n · loss`, the scaling used by the asymptotic risk formulas.
    pub fn mean_scaled(&self) -> f64 {
        self.stats.mean * self.sample_size as f64
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The RNG substream for one replicate, a function of
/// `(seed, sample size, replicate index)` only.
pub fn replicate_rng(seed: u64, sample_size: u64, replicate: u64) -> ChaCha8Rng {
    let s = splitmix(seed ^ splitmix(sample_size ^ splitmix(replicate)));
    ChaCha8Rng::seed_from_u64(s)
}

/// Draw multinomial counts `Mult(n, p)` as sequential conditional binomials.
pub fn sample_counts(p: &Pmf, n: u64, rng: &mut impl Rng) -> CountVector {
    assert!(n >= 1, "sample size must be at least 1");
    let k = p.support_size();
    let mut counts = Vec::with_capacity(k);
    let mut remaining = n;
    let mut mass_left = 1.0f64;
    for (i, &pi) in p.probs().iter().enumerate() {
        if i + 1 == k {
            counts.push(remaining);
            break;
        }
        if remaining == 0 || mass_left <= 0.0 {
            counts.push(0);
            continue;
        }
        let ratio = (pi / mass_left).clamp(0.0, 1.0);
        let draw = if ratio >= 1.0 {
            remaining
        } else {
            Binomial::new(remaining, ratio)
                .expect("ratio is a valid probability")
                .sample(rng)
        };
        counts.push(draw);
        remaining -= draw;
        mass_left = (mass_left - pi).max(0.0);
    }
    CountVector::new(counts).expect("multinomial counts sum to n >= 1")
}

/// Run the Monte Carlo comparison: for each sample size, draw `replications`
/// count vectors (one shared draw per replicate, so estimator comparisons are
/// paired), apply every requested estimator, and record every requested loss
/// against the true pmf.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RiskSummary>> {
    cfg.validate()?;
    let (truth, spec) = mixture_of_uniforms::<f64>(&cfg.components)?;

    let mut summaries = Vec::new();
    for &n in &cfg.sample_sizes {
        // losses[rep][estimator][metric]
        let losses: Vec<Vec<Vec<f64>>> = (0..cfg.replications)
            .into_par_iter()
            .map(|rep| {
                let mut rng = replicate_rng(cfg.seed, n, rep as u64);
                let counts = sample_counts(&truth, n, &mut rng);
                cfg.estimators
                    .iter()
                    .map(|est| {
                        let estimate = est
                            .estimate(&counts, &spec)
                            .expect("estimator applies to sampled counts");
                        cfg.metrics
                            .iter()
                            .map(|metric| {
                                metric
                                    .loss(&estimate, &truth)
                                    .expect("estimate and truth share a support")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        for (e, &estimator) in cfg.estimators.iter().enumerate() {
            for (m, &metric) in cfg.metrics.iter().enumerate() {
                let cell: Vec<f64> = losses.iter().map(|rep| rep[e][m]).collect();
                summaries.push(RiskSummary {
                    estimator,
                    metric,
                    sample_size: n,
                    stats: BoxStats::from_sample(&cell),
                    losses: cell,
                });
            }
        }
    }
    Ok(summaries)
}

/// Monte Carlo check of the asymptotic covariance: sample covariance of
/// `√n (p̂*_n − p)` over `reps` replicates, compared entrywise against the
/// closed-form matrix. Returns the maximum absolute deviation.
pub fn empirical_covariance_check(
    p: &Pmf,
    spec: &FlatSpec,
    n: u64,
    reps: usize,
    seed: u64,
) -> Result<f64> {
    let sigma = crate::asymptotics::sigma_star(p, spec)?;
    let k = p.support_size();
    let sqrt_n = (n as f64).sqrt();

    let deviations: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, n, rep as u64);
            let counts = sample_counts(p, n, &mut rng);
            let estimate = flat_mle::<f64>(&counts, spec).expect("spec matches sampled counts");
            estimate
                .probs()
                .iter()
                .zip(p.probs())
                .map(|(&a, &b)| sqrt_n * (a - b))
                .collect()
        })
        .collect();

    let mut mean = vec![0.0f64; k];
    for z in &deviations {
        for (m, &zi) in mean.iter_mut().zip(z) {
            *m += zi;
        }
    }
    for m in &mut mean {
        *m /= reps as f64;
    }

    let denom = if reps > 1 { (reps - 1) as f64 } else { 1.0 };
    let mut max_dev = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let mut cov = 0.0;
            for z in &deviations {
                cov += (z[i] - mean[i]) * (z[j] - mean[j]);
            }
            cov /= denom;
            max_dev = max_dev.max((cov - sigma.get(i, j)).abs());
        }
    }
    Ok(max_dev)
}

/// Weighted squared error of grouped values against the true grouped values,
/// `Σ w_j (v_j − p'_j)²` — the quantity the reduction-of-error property
/// bounds.
pub fn grouped_weighted_sq_error(values: &[f64], truth: &[f64], lengths: &[usize]) -> f64 {
    values
        .iter()
        .zip(truth)
        .zip(lengths)
        .map(|((&v, &t), &w)| w as f64 * (v - t) * (v - t))
        .sum()
}

/// The grouped values of a pmf that is constant on each region of `spec`.
pub fn grouped_values_of<T: crate::scalar::Real>(p: &PmfOf<T>, spec: &FlatSpec) -> Vec<T> {
    spec.starts().iter().map(|&q| p.probs()[q]).collect()
}
