//! Confidence intervals for Monte-Carlo estimates.

use statrs::distribution::{ContinuousCDF, Normal};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub ci_half_width: f64,
    pub lower: f64,
    pub upper: f64,
    pub trials: u64,
    pub confidence: f64,
}

impl EstimateWithCI {
    pub fn overlaps(&self, other: &EstimateWithCI) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}

/// Two-sided standard normal quantile for `confidence`.
pub fn z_score(confidence: f64) -> f64 {
    let n = Normal::new(0.0, 1.0).expect("standard normal");
    n.inverse_cdf(0.5 + confidence / 2.0)
}

/// Wilson score interval for `successes` out of `trials` Bernoulli draws.
pub fn wilson(successes: u64, trials: u64, confidence: f64) -> EstimateWithCI {
    assert!(trials >= 1, "wilson interval needs at least one trial");
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = z_score(confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lower = (center - half).max(0.0).min(p);
    let upper = (center + half).min(1.0).max(p);
    EstimateWithCI {
        mean: p,
        ci_half_width: half,
        lower,
        upper,
        trials,
        confidence,
    }
}

/// Normal-approximation interval for a sample mean. With a single trial the
/// spread is unknown and the half-width is `+∞`.
pub fn normal_mean(acc: &MeanAccumulator, confidence: f64) -> EstimateWithCI {
    let n = acc.count();
    assert!(n >= 1, "mean interval needs at least one trial");
    let mean = acc.mean();
    let half = if n == 1 {
        f64::INFINITY
    } else {
        z_score(confidence) * (acc.sample_variance() / n as f64).sqrt()
    };
    EstimateWithCI {
        mean,
        ci_half_width: half,
        lower: mean - half,
        upper: mean + half,
        trials: n,
        confidence,
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sample mean and variance built from compensated sums, fed in a fixed
/// order so the result does not depend on how trials were scheduled.
#[derive(Clone, Copy, Debug, Default)]
pub struct MeanAccumulator {
    n: u64,
    sum: CompensatedSum,
    sum_sq: CompensatedSum,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum.add(x);
        self.sum_sq.add(x * x);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.sum.value() / self.n as f64
    }

    pub fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        let mean = self.mean();
        ((self.sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0)
    }
}
