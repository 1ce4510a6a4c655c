//! Geometry, bounded path loss, thermal noise budget and Rician channel
//! sampling for the S→RIS and RIS→{D, E} hops.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::RandomStream;

pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Thermal noise density at room temperature, dBm/Hz.
pub const THERMAL_NOISE_DBM_HZ: f64 = -174.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Position2D {
    pub x: f64,
    pub y: f64,
}

impl Position2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Position2D { x, y }
    }
}

impl fmt::Display for Position2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// How the constant `K0 = (4π fc / c)²` enters the path loss.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PathlossConvention {
    /// `L = K0 · (1 + d)^β`. Exceeds unity at short range.
    #[default]
    Paper,
    /// `L = (1 + d)^β / K0`, the free-space attenuation form.
    Inverse,
}

impl FromStr for PathlossConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "paper" => Ok(PathlossConvention::Paper),
            "inverse" => Ok(PathlossConvention::Inverse),
            other => Err(format!("expected `paper` or `inverse`, got `{other}`")),
        }
    }
}

impl fmt::Display for PathlossConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathlossConvention::Paper => "paper",
            PathlossConvention::Inverse => "inverse",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadioParams {
    /// Carrier frequency, Hz.
    pub carrier_freq: f64,
    /// Bandwidth, Hz.
    pub bandwidth: f64,
    /// Receiver noise figure, dB.
    pub noise_figure: f64,
    /// Path-loss exponent β, applied with its sign as given.
    pub pathloss_exponent: f64,
    pub ptx_dbm: f64,
    pub pathloss_convention: PathlossConvention,
}

impl Default for RadioParams {
    fn default() -> Self {
        RadioParams {
            carrier_freq: 2.1e9,
            bandwidth: 10.0e6,
            noise_figure: 6.0,
            pathloss_exponent: -2.5,
            ptx_dbm: 20.0,
            pathloss_convention: PathlossConvention::Paper,
        }
    }
}

impl RadioParams {
    /// `K0 = (4π fc / c)²`.
    pub fn pathloss_constant(&self) -> f64 {
        (4.0 * PI * self.carrier_freq / SPEED_OF_LIGHT).powi(2)
    }

    pub fn ptx_watts(&self) -> f64 {
        dbm_to_watts(self.ptx_dbm)
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn distance(p: Position2D, q: Position2D) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Bounded path-loss gain `K0·(1+d)^β` (or its inverse-K0 variant).
/// Finite at `d = 0`.
pub fn path_loss(d: f64, params: &RadioParams) -> Result<f64> {
    if !d.is_finite() {
        return Err(Error::NonFinite {
            what: "distance",
            value: d,
        });
    }
    if d < 0.0 {
        return Err(Error::domain("distance", format!("must be >= 0, got {d}")));
    }
    let k0 = params.pathloss_constant();
    let spread = (1.0 + d).powf(params.pathloss_exponent);
    Ok(match params.pathloss_convention {
        PathlossConvention::Paper => k0 * spread,
        PathlossConvention::Inverse => spread / k0,
    })
}

/// Noise floor `-174 + NF + 10·log10(Bw)` in dBm. Shared by D and E.
pub fn noise_power_dbm(params: &RadioParams) -> f64 {
    THERMAL_NOISE_DBM_HZ + params.noise_figure + 10.0 * params.bandwidth.log10()
}

pub fn noise_power_watts(params: &RadioParams) -> f64 {
    dbm_to_watts(noise_power_dbm(params))
}

/// Large-scale state of one hop. The small-scale coefficients are
/// `CN(μ, η)` with a real common mean `μ = sqrt(K·L)` and `η = L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkBudget {
    pub distance: f64,
    pub pathloss: f64,
    pub rician_factor: f64,
    pub los_mean: f64,
    pub scatter_var: f64,
}

impl LinkBudget {
    /// Link with explicit moments, bypassing geometry. `scatter_var = 0`
    /// gives deterministic coefficients.
    pub fn with_moments(los_mean: f64, scatter_var: f64) -> Result<Self> {
        if !(los_mean.is_finite() && scatter_var.is_finite() && scatter_var >= 0.0) {
            return Err(Error::domain(
                "scatter_var",
                format!("need finite mean and variance >= 0, got ({los_mean}, {scatter_var})"),
            ));
        }
        Ok(LinkBudget {
            distance: f64::NAN,
            pathloss: scatter_var,
            rician_factor: f64::NAN,
            los_mean,
            scatter_var,
        })
    }
}

pub fn make_link(
    u: Position2D,
    v: Position2D,
    rician_factor: f64,
    params: &RadioParams,
) -> Result<LinkBudget> {
    if !(rician_factor.is_finite() && rician_factor >= 0.0) {
        return Err(Error::domain(
            "rician_factor",
            format!("must be finite and >= 0, got {rician_factor}"),
        ));
    }
    let d = distance(u, v);
    let pathloss = path_loss(d, params)?;
    Ok(LinkBudget {
        distance: d,
        pathloss,
        rician_factor,
        los_mean: (rician_factor * pathloss).sqrt(),
        scatter_var: pathloss,
    })
}

/// Complex coefficients of one hop, one per RIS element.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelVector(pub Vec<Complex64>);

impl ChannelVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }
}

impl From<Vec<Complex64>> for ChannelVector {
    fn from(v: Vec<Complex64>) -> Self {
        ChannelVector(v)
    }
}

/// Draws `k_elems` i.i.d. coefficients `μ + sqrt(η/2)·(z1 + j z2)`.
pub fn sample_channel(link: &LinkBudget, k_elems: usize, stream: &mut RandomStream) -> ChannelVector {
    let scale = (link.scatter_var / 2.0).sqrt();
    let coeffs = (0..k_elems)
        .map(|_| {
            let re = stream.standard_normal();
            let im = stream.standard_normal();
            Complex64::new(link.los_mean + scale * re, scale * im)
        })
        .collect();
    ChannelVector(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn distance_examples() {
        let o = Position2D::new(0.0, 0.0);
        let r = Position2D::new(10.0, 10.0);
        let d = Position2D::new(70.0, 0.0);
        assert_eq!(distance(o, o), 0.0);
        assert!((distance(o, r) - 14.1421).abs() < 1e-4);
        assert!((distance(r, d) - 60.8276).abs() < 1e-4);
        assert_eq!(distance(r, d), distance(d, r));
    }

    #[test]
    fn pathloss_constant_at_2_1_ghz() {
        let params = RadioParams::default();
        // (4π · 2.1e9 / 3e8)²
        assert!(close(params.pathloss_constant(), 7737.77, 1e-5));
        assert_eq!(path_loss(0.0, &params).unwrap(), params.pathloss_constant());
    }

    #[test]
    fn pathloss_at_source_to_ris() {
        let params = RadioParams::default();
        let l = path_loss(200f64.sqrt(), &params).unwrap();
        assert!((l - 8.6726).abs() < 1e-3, "{l}");
        let inv = RadioParams {
            pathloss_convention: PathlossConvention::Inverse,
            ..params
        };
        let li = path_loss(200f64.sqrt(), &inv).unwrap();
        assert!(close(li * params.pathloss_constant().powi(2), l, 1e-12));
    }

    #[test]
    fn pathloss_rejects_non_finite() {
        let params = RadioParams::default();
        assert!(matches!(
            path_loss(f64::NAN, &params),
            Err(Error::NonFinite { .. })
        ));
        assert!(path_loss(f64::INFINITY, &params).is_err());
    }

    #[test]
    fn pathloss_monotone_in_distance() {
        let mut params = RadioParams::default();
        let ds = [0.0, 0.5, 1.0, 10.0, 100.0, 1e4];
        let ls: Vec<f64> = ds.iter().map(|&d| path_loss(d, &params).unwrap()).collect();
        assert!(ls.windows(2).all(|w| w[1] < w[0]));
        params.pathloss_exponent = 2.0;
        let ls: Vec<f64> = ds.iter().map(|&d| path_loss(d, &params).unwrap()).collect();
        assert!(ls.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn noise_floor() {
        let mut params = RadioParams {
            noise_figure: 0.0,
            bandwidth: 1.0,
            ..RadioParams::default()
        };
        assert_eq!(noise_power_dbm(&params), -174.0);
        params.noise_figure = 6.0;
        params.bandwidth = 1e7;
        assert!((noise_power_dbm(&params) + 98.0).abs() < 1e-12);
        assert!(close(noise_power_watts(&params), 1.5849e-13, 1e-4));
        params.bandwidth = 1e6;
        assert!((noise_power_dbm(&params) + 108.0).abs() < 1e-12);
    }

    #[test]
    fn link_moments() {
        let params = RadioParams::default();
        let o = Position2D::new(0.0, 0.0);
        let r = Position2D::new(10.0, 10.0);
        let rayleigh = make_link(o, r, 0.0, &params).unwrap();
        assert_eq!(rayleigh.los_mean, 0.0);
        let link = make_link(o, r, 3.0, &params).unwrap();
        assert!((link.los_mean - 5.10).abs() < 0.01);
        assert_eq!(link.scatter_var, link.pathloss);
        for k in [3.0, 0.5, 1.25] {
            assert!(make_link(o, r, k, &params).is_ok());
        }
        assert!(make_link(o, r, -1.0, &params).is_err());
    }

    #[test]
    fn zero_variance_is_deterministic() {
        let link = LinkBudget::with_moments(1.5, 0.0).unwrap();
        let g = sample_channel(&link, 16, &mut RandomStream::new(1, 2));
        assert!(g.0.iter().all(|c| *c == Complex64::new(1.5, 0.0)));
    }

    #[test]
    fn sampling_is_reproducible() {
        let link = LinkBudget::with_moments(0.3, 2.0).unwrap();
        let a = sample_channel(&link, 32, &mut RandomStream::new(9, 4));
        let b = sample_channel(&link, 32, &mut RandomStream::new(9, 4));
        assert_eq!(a, b);
    }
}
