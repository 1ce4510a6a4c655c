//! Invariant suite behind the `validate` subcommand.
//!
//! Every realization is drawn from the substream `(seed, index)`; a failing
//! check reports that pair so the case can be replayed.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::channel::{sample_channel, ChannelVector, LinkBudget};
use crate::error::Result;
use crate::exec::Executor;
use crate::experiments::config::ScenarioConfig;
use crate::phase_design::{
    self, cascade, eve_lower_bound, grid_oracle_min, term_phases, wrap_phase, AmplitudeProfile,
    PairingPlan, PhaseConfig,
};
use crate::rng::RandomStream;
use crate::secrecy_metrics::{estimate, PreparedScenario, Scheme};
use crate::stats::{wilson, DEFAULT_CONFIDENCE};

/// Eavesdropper-suppressing design under test.
pub type EveDesign = fn(&ChannelVector, &ChannelVector) -> Result<PhaseConfig>;

pub const PAIR_PHASE_TOL: f64 = 1e-9;
pub const SANDWICH_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidateOptions {
    pub levels: usize,
    pub trials: u64,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            levels: 16,
            trials: 500,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &'static str, outcome: std::result::Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult { name, passed, detail });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {}", c.name, c.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// `(g_sr, g_rd, g_re)` of one realization at the reference geometry.
pub fn realization(k_elems: usize, seed: u64, index: u64) -> (ChannelVector, ChannelVector, ChannelVector) {
    let sc = reference_links(k_elems);
    let mut s = RandomStream::new(seed, index);
    let g_sr = sample_channel(&sc.source_ris, k_elems, &mut s);
    let g_rd = sample_channel(&sc.ris_dest, k_elems, &mut s);
    let g_re = sample_channel(&sc.ris_eve, k_elems, &mut s);
    (g_sr, g_rd, g_re)
}

fn reference_links(k_elems: usize) -> PreparedScenario {
    let cfg = ScenarioConfig {
        k_elems,
        ..ScenarioConfig::default()
    };
    PreparedScenario::from_config(&cfg).expect("reference scenario is valid")
}

/// Largest deviation from π between the two steered term phases of any pair.
pub fn pair_phase_residual(g_sr: &ChannelVector, g_re: &ChannelVector, ph: &PhaseConfig) -> Result<f64> {
    let profile = AmplitudeProfile::from_channels(g_sr, g_re)?;
    let plan = PairingPlan::new(&profile);
    let theta = term_phases(g_sr, g_re)?;
    let w = ph.phases();
    Ok(plan
        .pairs
        .iter()
        .map(|&(i, j)| {
            let diff = (theta[i] + w[i]) - (theta[j] + w[j]);
            // distance of diff from π on the circle
            wrap_phase(diff - PI).abs()
        })
        .fold(0.0, f64::max))
}

/// Checks `lower ≤ |cascade| ≤ residual bound` with relative slack.
pub fn sandwich(g_sr: &ChannelVector, g_re: &ChannelVector, ph: &PhaseConfig) -> Result<(f64, f64, f64, bool)> {
    let profile = AmplitudeProfile::from_channels(g_sr, g_re)?;
    let plan = PairingPlan::new(&profile);
    let mag = cascade(g_sr, ph, g_re)?.norm();
    let lo = eve_lower_bound(&profile);
    let hi = plan.residual_bound(&profile);
    let slack = SANDWICH_REL_TOL * profile.total().max(f64::MIN_POSITIVE);
    Ok((lo, mag, hi, lo - slack <= mag && mag <= hi + slack))
}

pub fn check_pair_cancellation(design: EveDesign, opts: &ValidateOptions) -> std::result::Result<String, String> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for &k in &[2usize, 3, 16, 144] {
        for i in 0..opts.trials {
            let (g_sr, _, g_re) = realization(k, opts.seed, i);
            let ph = design(&g_sr, &g_re).map_err(|e| e.to_string())?;
            let r = pair_phase_residual(&g_sr, &g_re, &ph).map_err(|e| e.to_string())?;
            if r.is_nan() || r > PAIR_PHASE_TOL {
                return Err(format!(
                    "K={k}: pair phases off π by {r:.3e} rad at realization (seed {}, index {i})",
                    opts.seed
                ));
            }
            worst = worst.max(r);
            count += 1;
        }
    }
    Ok(format!("{count} realizations, worst deviation {worst:.2e} rad"))
}

pub fn check_sandwich(design: EveDesign, opts: &ValidateOptions) -> std::result::Result<String, String> {
    let mut count = 0;
    for &k in &[2usize, 3, 16, 144] {
        for i in 0..opts.trials {
            let (g_sr, _, g_re) = realization(k, opts.seed, i);
            let ph = design(&g_sr, &g_re).map_err(|e| e.to_string())?;
            let (lo, mag, hi, ok) = sandwich(&g_sr, &g_re, &ph).map_err(|e| e.to_string())?;
            if !ok {
                return Err(format!(
                    "K={k}: {lo:.6e} <= {mag:.6e} <= {hi:.6e} violated at (seed {}, index {i})",
                    opts.seed
                ));
            }
            count += 1;
        }
    }
    Ok(format!("{count} realizations bracketed"))
}

/// Number of exhaustive-search realizations at `k` elements, scaled down so
/// each element count costs roughly the same.
fn grid_realizations(k: usize, levels: usize, trials: u64) -> u64 {
    let cost = (levels as f64).powi(k as i32 - 1);
    ((2.0e6 / cost).floor() as u64).clamp(3, trials.max(3))
}

pub fn check_grid_oracle(design: EveDesign, opts: &ValidateOptions) -> std::result::Result<String, String> {
    let mut total = 0;
    for k in 1..=6usize {
        let n = grid_realizations(k, opts.levels, opts.trials);
        for i in 0..n {
            let (g_sr, _, g_re) = realization(k, opts.seed, i);
            let profile = AmplitudeProfile::from_channels(&g_sr, &g_re).map_err(|e| e.to_string())?;
            let lo = eve_lower_bound(&profile);
            let slack = SANDWICH_REL_TOL * profile.total();
            let (_, oracle) = grid_oracle_min(&g_sr, &g_re, opts.levels).map_err(|e| e.to_string())?;
            let ph = design(&g_sr, &g_re).map_err(|e| e.to_string())?;
            let heur = cascade(&g_sr, &ph, &g_re).map_err(|e| e.to_string())?.norm();
            let at = format!("(seed {}, index {i})", opts.seed);
            if oracle < lo - slack {
                return Err(format!("K={k}: grid minimum {oracle:.6e} below lower bound {lo:.6e} at {at}"));
            }
            if heur < lo - slack {
                return Err(format!("K={k}: design value {heur:.6e} below lower bound {lo:.6e} at {at}"));
            }
            if k <= 4 {
                let (_, fine) =
                    grid_oracle_min(&g_sr, &g_re, 2 * opts.levels).map_err(|e| e.to_string())?;
                if fine > oracle + slack {
                    return Err(format!("K={k}: refined grid {fine:.6e} > coarse {oracle:.6e} at {at}"));
                }
            }
            total += 1;
        }
    }
    Ok(format!("{total} exhaustive searches at {} levels, K = 1..6", opts.levels))
}

pub fn check_max_main(opts: &ValidateOptions) -> std::result::Result<String, String> {
    for &k in &[1usize, 8, 144] {
        for i in 0..opts.trials.min(200) {
            let (g_sr, g_rd, _) = realization(k, opts.seed, i);
            let ph = phase_design::max_main_phases(&g_sr, &g_rd).map_err(|e| e.to_string())?;
            let mag = cascade(&g_sr, &ph, &g_rd).map_err(|e| e.to_string())?.norm();
            let coherent = AmplitudeProfile::from_channels(&g_sr, &g_rd)
                .map_err(|e| e.to_string())?
                .total();
            if (mag - coherent).abs() > 1e-12 * coherent {
                return Err(format!(
                    "K={k}: |cascade| {mag:.15e} != {coherent:.15e} at (seed {}, index {i})",
                    opts.seed
                ));
            }
        }
    }
    Ok("coherent sum reached to 1e-12 relative".into())
}

/// Mean eavesdropper power under the design vs. random phases on the same
/// channels.
pub fn mean_eve_power(design: EveDesign, k: usize, n: u64, seed: u64) -> Result<(f64, f64)> {
    let sc = reference_links(k);
    let (mut opt, mut ran) = (0.0, 0.0);
    for i in 0..n {
        let mut s = RandomStream::new(seed, i);
        let g_sr = sample_channel(&sc.source_ris, k, &mut s);
        let _g_rd = sample_channel(&sc.ris_dest, k, &mut s);
        let g_re = sample_channel(&sc.ris_eve, k, &mut s);
        let rnd = phase_design::random_phases(k, &mut s);
        opt += cascade(&g_sr, &design(&g_sr, &g_re)?, &g_re)?.norm_sqr();
        ran += cascade(&g_sr, &rnd, &g_re)?.norm_sqr();
    }
    Ok((opt / n as f64, ran / n as f64))
}

pub fn check_dominance(design: EveDesign, opts: &ValidateOptions) -> std::result::Result<String, String> {
    let mut parts = Vec::new();
    for &k in &[4usize, 144] {
        let (opt, ran) = mean_eve_power(design, k, opts.trials, opts.seed).map_err(|e| e.to_string())?;
        if opt.is_nan() || ran.is_nan() || opt >= ran {
            return Err(format!("K={k}: design mean |c_E|² {opt:.4e} >= random {ran:.4e}"));
        }
        parts.push(format!("K={k}: {opt:.3e} < {ran:.3e}"));
    }
    Ok(parts.join("; "))
}

/// Sample moments of `n` coefficients drawn from `link`:
/// `(mean, variance, real-part variance, imaginary-part variance)`.
pub fn sample_moments(link: &LinkBudget, n: usize, seed: u64) -> (Complex64, f64, f64, f64) {
    let g = sample_channel(link, n, &mut RandomStream::new(seed, 0));
    let nf = n as f64;
    let mean: Complex64 = g.0.iter().sum::<Complex64>() / nf;
    let var = g.0.iter().map(|c| (c - mean).norm_sqr()).sum::<f64>() / (nf - 1.0);
    let var_re = g.0.iter().map(|c| (c.re - mean.re).powi(2)).sum::<f64>() / (nf - 1.0);
    let var_im = g.0.iter().map(|c| (c.im - mean.im).powi(2)).sum::<f64>() / (nf - 1.0);
    (mean, var, var_re, var_im)
}

pub fn check_sampler_moments(opts: &ValidateOptions) -> std::result::Result<String, String> {
    const N: usize = 100_000;
    let sc = reference_links(1);
    for (name, link) in [("S-RIS", sc.source_ris), ("RIS-D", sc.ris_dest), ("RIS-E", sc.ris_eve)] {
        let (mean, var, var_re, var_im) = sample_moments(&link, N, opts.seed);
        let eta = link.scatter_var;
        let mean_err = (mean - Complex64::new(link.los_mean, 0.0)).norm();
        let mean_tol = 4.0 * (eta / N as f64).sqrt();
        if mean_err > mean_tol {
            return Err(format!("{name}: mean error {mean_err:.3e} > {mean_tol:.3e} (seed {})", opts.seed));
        }
        if (var - eta).abs() > 0.05 * eta {
            return Err(format!("{name}: variance {var:.4e} vs η {eta:.4e} (seed {})", opts.seed));
        }
        for (part, v) in [("real", var_re), ("imag", var_im)] {
            if (v - eta / 2.0).abs() > 0.05 * eta / 2.0 {
                return Err(format!("{name}: {part} variance {v:.4e} vs η/2 (seed {})", opts.seed));
            }
        }
    }
    Ok(format!("3 links, {N} draws each"))
}

/// Fraction of `reps` Wilson intervals (each from `n` fair coin flips) that
/// contain 0.5.
pub fn wilson_coverage(reps: u64, n: u64, seed: u64) -> f64 {
    let covered = (0..reps)
        .filter(|&r| {
            let mut s = RandomStream::new(seed, r);
            let hits = (0..n).filter(|_| s.bernoulli(0.5)).count() as u64;
            let ci = wilson(hits, n, DEFAULT_CONFIDENCE);
            ci.lower <= 0.5 && 0.5 <= ci.upper
        })
        .count();
    covered as f64 / reps as f64
}

pub fn check_ci_calibration(opts: &ValidateOptions) -> std::result::Result<String, String> {
    let cov = wilson_coverage(1000, 400, opts.seed);
    if (cov - 0.95).abs() > 0.02 {
        return Err(format!("coverage {cov:.3} outside 0.95 ± 0.02 (seed {})", opts.seed));
    }
    Ok(format!("coverage {cov:.3} over 1000 repetitions"))
}

pub fn check_determinism(opts: &ValidateOptions) -> std::result::Result<String, String> {
    let cfg = ScenarioConfig {
        k_elems: 32,
        rates: vec![0.0, 1.0, 2.0],
        ..ScenarioConfig::default()
    };
    let sc = PreparedScenario::from_config(&cfg).map_err(|e| e.to_string())?;
    let n = opts.trials.max(64);
    for scheme in Scheme::ALL {
        let a = estimate(&sc, scheme, n, opts.seed, Executor::Sequential).map_err(|e| e.to_string())?;
        let b = estimate(&sc, scheme, n, opts.seed, Executor::Parallel { workers: 4 })
            .map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{scheme}: sequential and 4-worker estimates differ (seed {})", opts.seed));
        }
    }
    Ok(format!("{n} trials identical across executors"))
}

pub fn validate(opts: &ValidateOptions) -> ValidationReport {
    validate_with(phase_design::heuristic_min_eve, opts)
}

pub fn validate_with(design: EveDesign, opts: &ValidateOptions) -> ValidationReport {
    let mut report = ValidationReport::default();
    report.record("pair cancellation", check_pair_cancellation(design, opts));
    report.record("sandwich bounds", check_sandwich(design, opts));
    report.record("grid oracle", check_grid_oracle(design, opts));
    report.record("max-main exactness", check_max_main(opts));
    report.record("dominance in expectation", check_dominance(design, opts));
    report.record("sampler moments", check_sampler_moments(opts));
    report.record("wilson calibration", check_ci_calibration(opts));
    report.record("determinism", check_determinism(opts));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Heuristic with the conjugate sign dropped from the S→RIS phase.
    fn sign_flipped(g_sr: &ChannelVector, g_re: &ChannelVector) -> Result<PhaseConfig> {
        let profile = AmplitudeProfile::from_channels(g_sr, g_re)?;
        let plan = PairingPlan::new(&profile);
        let theta: Vec<f64> = g_sr.0.iter().zip(&g_re.0).map(|(a, b)| a.arg() + b.arg()).collect();
        let mut w = vec![0.0; g_sr.len()];
        for &(i, j) in &plan.pairs {
            w[i] = theta[j] + PI - theta[i];
        }
        Ok(PhaseConfig::new(w))
    }

    fn quick() -> ValidateOptions {
        ValidateOptions {
            levels: 8,
            trials: 40,
            seed: 3,
        }
    }

    #[test]
    fn default_design_passes() {
        let report = validate(&quick());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn sign_flip_is_caught() {
        let err = check_pair_cancellation(sign_flipped, &quick()).unwrap_err();
        assert!(err.contains("seed 3"), "{err}");
        assert!(!validate_with(sign_flipped, &quick()).passed());
    }
}
