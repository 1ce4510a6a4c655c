//! Per-trial SNRs and secrecy quantities, and their Monte-Carlo estimates.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::channel::{self, sample_channel, LinkBudget};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::experiments::config::ScenarioConfig;
use crate::phase_design::{self, cascade_unchecked, PhaseConfig};
use crate::rng::RandomStream;
use crate::stats::{self, EstimateWithCI, MeanAccumulator, DEFAULT_CONFIDENCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Suppress the eavesdropper by pairwise cancellation.
    Opt,
    /// Uniform random phases.
    Ran,
    /// Co-phase toward the legitimate receiver.
    MaxMain,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Opt, Scheme::Ran, Scheme::MaxMain];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Opt => "opt",
            Scheme::Ran => "ran",
            Scheme::MaxMain => "max_main",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "opt" => Ok(Scheme::Opt),
            "ran" => Ok(Scheme::Ran),
            "max_main" => Ok(Scheme::MaxMain),
            other => Err(format!("unknown scheme `{other}` (expected opt, ran or max_main)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrPair {
    pub snr_d: f64,
    pub snr_e: f64,
}

impl SnrPair {
    /// `log2((1 + snr_d) / (1 + snr_e))`, unclamped.
    pub fn log_ratio(&self) -> f64 {
        (self.snr_d.ln_1p() - self.snr_e.ln_1p()) / LN_2
    }
}

/// `P·|cascade|² / σ²`.
pub fn snr(ptx_watts: f64, cascade_amp: Complex64, noise_watts: f64) -> Result<f64> {
    if noise_watts.is_nan() || noise_watts <= 0.0 {
        return Err(Error::domain("noise_watts", format!("must be > 0, got {noise_watts}")));
    }
    if ptx_watts.is_nan() || ptx_watts <= 0.0 {
        return Err(Error::domain("ptx_watts", format!("must be > 0, got {ptx_watts}")));
    }
    Ok(ptx_watts * cascade_amp.norm_sqr() / noise_watts)
}

pub fn secrecy_rate_sample(p: &SnrPair) -> f64 {
    p.log_ratio().max(0.0)
}

/// Outage when the log-ratio is at or below `rate` (boundary counts).
pub fn sop_indicator(p: &SnrPair, rate: f64) -> bool {
    p.log_ratio() <= rate
}

/// Scenario with links resolved and every dB quantity converted to linear
/// units, ready for the trial loop.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedScenario {
    pub k_elems: usize,
    pub source_ris: LinkBudget,
    pub ris_dest: LinkBudget,
    pub ris_eve: LinkBudget,
    pub ptx_watts: f64,
    pub noise_watts: f64,
    pub rates: Vec<f64>,
}

impl PreparedScenario {
    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.check()?;
        let radio = &cfg.radio;
        Ok(PreparedScenario {
            k_elems: cfg.k_elems,
            source_ris: channel::make_link(cfg.pos_s, cfg.pos_r, cfg.k_sr, radio)?,
            ris_dest: channel::make_link(cfg.pos_r, cfg.pos_d, cfg.k_rd, radio)?,
            ris_eve: channel::make_link(cfg.pos_r, cfg.pos_e, cfg.k_re, radio)?,
            ptx_watts: radio.ptx_watts(),
            noise_watts: channel::noise_power_watts(radio),
            rates: cfg.rates.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub snr: SnrPair,
    pub secrecy_rate: f64,
    /// One flag per configured target rate.
    pub outage: Vec<bool>,
}

/// SNR pair of one realization.
///
/// Channels are drawn first (S→RIS, RIS→D, RIS→E, in that order), so every
/// scheme sees the same realization for a given stream; the random design
/// draws its phases afterwards.
pub fn trial_snr(sc: &PreparedScenario, scheme: Scheme, stream: &mut RandomStream) -> Result<SnrPair> {
    let g_sr = sample_channel(&sc.source_ris, sc.k_elems, stream);
    let g_rd = sample_channel(&sc.ris_dest, sc.k_elems, stream);
    let g_re = sample_channel(&sc.ris_eve, sc.k_elems, stream);
    let phases: PhaseConfig = match scheme {
        Scheme::Opt => phase_design::heuristic_min_eve(&g_sr, &g_re)?,
        Scheme::Ran => phase_design::random_phases(sc.k_elems, stream),
        Scheme::MaxMain => phase_design::max_main_phases(&g_sr, &g_rd)?,
    };
    let to_d = cascade_unchecked(g_sr.as_slice(), phases.phases(), g_rd.as_slice());
    let to_e = cascade_unchecked(g_sr.as_slice(), phases.phases(), g_re.as_slice());
    Ok(SnrPair {
        snr_d: snr(sc.ptx_watts, to_d, sc.noise_watts)?,
        snr_e: snr(sc.ptx_watts, to_e, sc.noise_watts)?,
    })
}

pub fn run_trial(sc: &PreparedScenario, scheme: Scheme, stream: &mut RandomStream) -> Result<TrialOutcome> {
    let snr = trial_snr(sc, scheme, stream)?;
    Ok(TrialOutcome {
        snr,
        secrecy_rate: secrecy_rate_sample(&snr),
        outage: sc.rates.iter().map(|&r| sop_indicator(&snr, r)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecrecyEstimate {
    /// `(rate, outage probability)` in configured rate order.
    pub sop: Vec<(f64, EstimateWithCI)>,
    pub sr: EstimateWithCI,
}

/// Monte-Carlo SOP (Wilson interval) and SR (normal interval).
///
/// Trial `i` uses the substream `(master_seed, i)`. Per-trial SNRs are
/// gathered in index order and reduced sequentially, so the output is
/// bit-identical for any executor.
pub fn estimate(
    sc: &PreparedScenario,
    scheme: Scheme,
    trials: u64,
    master_seed: u64,
    exec: Executor,
) -> Result<SecrecyEstimate> {
    if trials == 0 {
        return Err(Error::domain("trials", "must be >= 1"));
    }
    let snrs = exec.map_indexed(trials, |i| {
        trial_snr(sc, scheme, &mut RandomStream::new(master_seed, i))
    });

    let mut sr = MeanAccumulator::default();
    let mut outages = vec![0u64; sc.rates.len()];
    for p in snrs {
        let p = p?;
        let lr = p.log_ratio();
        sr.push(lr.max(0.0));
        for (count, &rate) in outages.iter_mut().zip(&sc.rates) {
            if lr <= rate {
                *count += 1;
            }
        }
    }
    Ok(SecrecyEstimate {
        sop: sc
            .rates
            .iter()
            .zip(outages)
            .map(|(&r, c)| (r, stats::wilson(c, trials, DEFAULT_CONFIDENCE)))
            .collect(),
        sr: stats::normal_mean(&sr, DEFAULT_CONFIDENCE),
    })
}
