//! Worked examples as executable checks, run by the `selftest` subcommand.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::{
    distance, make_link, noise_power_dbm, path_loss, sample_channel, ChannelVector, LinkBudget,
    Position2D, RadioParams,
};
use crate::exec::Executor;
use crate::experiments::config::{load_config, ScenarioConfig};
use crate::experiments::validate::{CheckResult, ValidationReport};
use crate::phase_design::{
    cascade, eve_lower_bound, grid_oracle_min, heuristic_min_eve, max_main_phases, random_phases,
    AmplitudeProfile, PhaseConfig,
};
use crate::rng::RandomStream;
use crate::secrecy_metrics::{
    estimate, secrecy_rate_sample, snr, sop_indicator, PreparedScenario, Scheme, SnrPair,
};

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn near(got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("got {got}, expected {want} ± {tol}"))
}

fn reals(v: &[f64]) -> ChannelVector {
    ChannelVector(v.iter().map(|&x| Complex64::new(x, 0.0)).collect())
}

fn distances() -> Result<(), String> {
    let o = Position2D::new(0.0, 0.0);
    let r = Position2D::new(10.0, 10.0);
    near(distance(o, o), 0.0, 0.0)?;
    near(distance(o, r), 14.1421, 1e-4)?;
    near(distance(r, Position2D::new(70.0, 0.0)), 60.8276, 1e-4)
}

fn pathloss() -> Result<(), String> {
    let p = RadioParams::default();
    let l0 = path_loss(0.0, &p).map_err(|e| e.to_string())?;
    near(l0, 7737.77, 0.01)?;
    ensure(l0 == p.pathloss_constant(), || "L(0) != K0".into())?;
    near(path_loss(200f64.sqrt(), &p).map_err(|e| e.to_string())?, 8.67, 0.01)?;
    ensure(path_loss(f64::NAN, &p).is_err(), || "NaN distance accepted".into())
}

fn noise() -> Result<(), String> {
    let mut p = RadioParams {
        noise_figure: 0.0,
        bandwidth: 1.0,
        ..RadioParams::default()
    };
    near(noise_power_dbm(&p), -174.0, 1e-12)?;
    p.noise_figure = 6.0;
    p.bandwidth = 1e7;
    near(noise_power_dbm(&p), -98.0, 1e-12)?;
    p.bandwidth = 1e6;
    near(noise_power_dbm(&p), -108.0, 1e-12)
}

fn links() -> Result<(), String> {
    let p = RadioParams::default();
    let o = Position2D::new(0.0, 0.0);
    let r = Position2D::new(10.0, 10.0);
    let l = make_link(o, r, 0.0, &p).map_err(|e| e.to_string())?;
    near(l.los_mean, 0.0, 0.0)?;
    let l = make_link(o, r, 3.0, &p).map_err(|e| e.to_string())?;
    near(l.los_mean, 5.10, 0.01)?;
    near(l.scatter_var, l.pathloss, 0.0)
}

fn sampler() -> Result<(), String> {
    let det = LinkBudget::with_moments(0.7, 0.0).map_err(|e| e.to_string())?;
    let g = sample_channel(&det, 10, &mut RandomStream::new(1, 1));
    ensure(g.0.iter().all(|c| *c == Complex64::new(0.7, 0.0)), || "η=0 not deterministic".into())?;
    let link = LinkBudget::with_moments(1.0, 2.0).map_err(|e| e.to_string())?;
    let n = 100_000;
    let g = sample_channel(&link, n, &mut RandomStream::new(1, 2));
    let mean: Complex64 = g.0.iter().sum::<Complex64>() / n as f64;
    let var = g.0.iter().map(|c| (c - mean).norm_sqr()).sum::<f64>() / (n - 1) as f64;
    ensure((mean - 1.0).norm() <= 4.0 * (2.0 / n as f64).sqrt(), || format!("mean {mean}"))?;
    ensure((var - 2.0).abs() <= 0.1, || format!("variance {var}"))
}

fn cascades() -> Result<(), String> {
    let one = reals(&[1.0]);
    let c = cascade(&one, &PhaseConfig::zeros(1), &one).map_err(|e| e.to_string())?;
    ensure(c == Complex64::new(1.0, 0.0), || format!("{c}"))?;
    let c = cascade(&one, &PhaseConfig::new(vec![PI]), &one).map_err(|e| e.to_string())?;
    ensure((c + 1.0).norm() < 1e-15, || format!("{c}"))?;
    ensure(
        cascade(&reals(&[1.0, 1.0]), &PhaseConfig::zeros(2), &one).is_err(),
        || "length mismatch accepted".into(),
    )
}

fn heuristic() -> Result<(), String> {
    let g = reals(&[1.0, 1.0]);
    let ph = heuristic_min_eve(&g, &g).map_err(|e| e.to_string())?;
    near(cascade(&g, &ph, &g).map_err(|e| e.to_string())?.norm(), 0.0, 1e-12)?;
    let g_sr = ChannelVector(vec![Complex64::from_polar(3.0, 0.4), Complex64::from_polar(1.0, 2.0)]);
    let g_re = ChannelVector(vec![Complex64::from_polar(1.0, -1.1), Complex64::from_polar(1.0, 0.9)]);
    let ph = heuristic_min_eve(&g_sr, &g_re).map_err(|e| e.to_string())?;
    near(cascade(&g_sr, &ph, &g_re).map_err(|e| e.to_string())?.norm(), 2.0, 1e-12)?;
    let g = reals(&[1.0, 1.0, 1.0]);
    let ph = heuristic_min_eve(&g, &g).map_err(|e| e.to_string())?;
    near(cascade(&g, &ph, &g).map_err(|e| e.to_string())?.norm(), 1.0, 1e-12)
}

fn random_design() -> Result<(), String> {
    let a = random_phases(100_000, &mut RandomStream::new(4, 4));
    let b = random_phases(100_000, &mut RandomStream::new(4, 4));
    ensure(a == b, || "not reproducible".into())?;
    ensure(a.phases().iter().all(|w| (-PI..=PI).contains(w)), || "out of range".into())?;
    let mean = a.phases().iter().sum::<f64>() / 1e5;
    ensure(mean.abs() < 4.0 * PI / (3e5f64).sqrt(), || format!("mean {mean}"))
}

fn max_main() -> Result<(), String> {
    let one = reals(&[1.0]);
    let ph = max_main_phases(&one, &one).map_err(|e| e.to_string())?;
    ensure(ph.phases() == [0.0], || format!("{:?}", ph.phases()))?;
    let g_sr = reals(&[1.0, 2.0]);
    let g_rd = ChannelVector(vec![Complex64::from_polar(1.0, 1.0), Complex64::from_polar(1.0, -2.0)]);
    let ph = max_main_phases(&g_sr, &g_rd).map_err(|e| e.to_string())?;
    near(cascade(&g_sr, &ph, &g_rd).map_err(|e| e.to_string())?.norm(), 3.0, 1e-12)
}

fn bounds() -> Result<(), String> {
    near(eve_lower_bound(&AmplitudeProfile(vec![1.0, 1.0, 1.0])), 0.0, 0.0)?;
    near(eve_lower_bound(&AmplitudeProfile(vec![5.0, 1.0, 1.0])), 3.0, 0.0)?;
    near(eve_lower_bound(&AmplitudeProfile(vec![0.4])), 0.4, 0.0)?;
    let g = ChannelVector(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
    let (_, v) = grid_oracle_min(&g, &g, 64).map_err(|e| e.to_string())?;
    ensure(v <= 2.0 * (PI / 64.0).sin() + 1e-12, || format!("grid min {v}"))?;
    ensure(
        grid_oracle_min(&reals(&[1.0; 9]), &reals(&[1.0; 9]), 2).is_err(),
        || "9 elements accepted".into(),
    )
}

fn metrics() -> Result<(), String> {
    near(snr(1.0, Complex64::new(0.0, 0.0), 1.0).map_err(|e| e.to_string())?, 0.0, 0.0)?;
    near(snr(1.0, Complex64::new(1.0, 0.0), 1.0).map_err(|e| e.to_string())?, 1.0, 0.0)?;
    near(snr(0.1, Complex64::new(1e-5, 0.0), 1.5849e-13).map_err(|e| e.to_string())?, 63.1, 0.01)?;
    let p = SnrPair { snr_d: 3.0, snr_e: 1.0 };
    near(secrecy_rate_sample(&p), 1.0, 1e-15)?;
    near(secrecy_rate_sample(&SnrPair { snr_d: 0.0, snr_e: 10.0 }), 0.0, 0.0)?;
    ensure(sop_indicator(&SnrPair { snr_d: 2.0, snr_e: 2.0 }, 0.0), || "R=0 boundary".into())?;
    ensure(sop_indicator(&p, 1.0), || "R=1 boundary".into())?;
    ensure(!sop_indicator(&p, 0.5), || "R=0.5".into())
}

fn degenerate_estimate() -> Result<(), String> {
    let det = |mu| LinkBudget::with_moments(mu, 0.0).expect("valid");
    let sc = PreparedScenario {
        k_elems: 2,
        source_ris: det(1.0),
        ris_dest: det(0.0),
        ris_eve: det(1.0),
        ptx_watts: 1.0,
        noise_watts: 1.0,
        rates: vec![0.0],
    };
    let est = estimate(&sc, Scheme::Opt, 10, 0, Executor::Sequential).map_err(|e| e.to_string())?;
    near(est.sop[0].1.mean, 1.0, 0.0)?;
    let one = estimate(&sc, Scheme::Opt, 1, 0, Executor::Sequential).map_err(|e| e.to_string())?;
    ensure(one.sr.ci_half_width.is_infinite(), || "trials=1 half-width finite".into())
}

fn configs() -> Result<(), String> {
    ensure(load_config("").map_err(|e| e.to_string())? == ScenarioConfig::default(), || {
        "empty config is not the default scenario".into()
    })?;
    let c = load_config("k_elems = 196").map_err(|e| e.to_string())?;
    ensure(c.k_elems == 196, || "override ignored".into())?;
    ensure(load_config("k_elems = 0").is_err(), || "k_elems = 0 accepted".into())
}

const CHECKS: &[(&str, Check)] = &[
    ("distance", distances),
    ("path loss", pathloss),
    ("noise power", noise),
    ("link budget", links),
    ("channel sampler", sampler),
    ("cascade", cascades),
    ("heuristic design", heuristic),
    ("random design", random_design),
    ("max-main design", max_main),
    ("lower bound and grid oracle", bounds),
    ("snr and secrecy metrics", metrics),
    ("degenerate estimate", degenerate_estimate),
    ("config loading", configs),
];

pub fn selftest() -> ValidationReport {
    ValidationReport {
        checks: CHECKS
            .iter()
            .map(|(name, f)| {
                let outcome = f();
                CheckResult {
                    name,
                    passed: outcome.is_ok(),
                    detail: outcome.err().unwrap_or_else(|| "ok".into()),
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_examples_pass() {
        let report = super::selftest();
        assert!(report.passed(), "{report}");
    }
}
