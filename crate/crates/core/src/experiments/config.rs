//! Scenario description and its flat `key = value` text form.
//!
//! ```text
//! # Figure 3 operating point
//! k_elems = 196
//! ptx_dbm = 40
//! schemes = opt, ran
//! rates = 0, 0.5, 1
//! ```
//!
//! Absent keys take the reference defaults; unknown and repeated keys are
//! rejected.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::channel::{PathlossConvention, Position2D, RadioParams};
use crate::error::{Error, Result};
use crate::secrecy_metrics::Scheme;

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 2021;

pub const KEYS: &[&str] = &[
    "pos_s",
    "pos_r",
    "pos_d",
    "pos_e",
    "k_elems",
    "k_sr",
    "k_rd",
    "k_re",
    "carrier_freq",
    "bandwidth",
    "noise_figure",
    "pathloss_exponent",
    "ptx_dbm",
    "pathloss_convention",
    "rates",
    "trials",
    "master_seed",
    "schemes",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub pos_s: Position2D,
    pub pos_r: Position2D,
    pub pos_d: Position2D,
    pub pos_e: Position2D,
    pub k_elems: usize,
    pub k_sr: f64,
    pub k_rd: f64,
    pub k_re: f64,
    pub radio: RadioParams,
    /// Target secrecy rates, bits/s/Hz.
    pub rates: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub schemes: Vec<Scheme>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            pos_s: Position2D::new(0.0, 0.0),
            pos_r: Position2D::new(10.0, 10.0),
            pos_d: Position2D::new(70.0, 0.0),
            pos_e: Position2D::new(70.0, -10.0),
            k_elems: 144,
            k_sr: 3.0,
            k_rd: 0.5,
            k_re: 1.25,
            radio: RadioParams::default(),
            rates: vec![1.0],
            trials: DEFAULT_TRIALS,
            master_seed: DEFAULT_SEED,
            schemes: vec![Scheme::Opt, Scheme::Ran],
        }
    }
}

fn parse_f64(key: &str, value: &str) -> std::result::Result<f64, String> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("`{key}`: cannot parse `{value}` as a number ({e})"))
}

fn parse_list<T>(
    key: &str,
    value: &str,
    item: impl Fn(&str) -> std::result::Result<T, String>,
) -> std::result::Result<Vec<T>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).map_err(|e| format!("`{key}`: {e}")))
        .collect()
}

fn parse_position(key: &str, value: &str) -> std::result::Result<Position2D, String> {
    let coords = parse_list(key, value, |s| parse_f64(key, s))?;
    match coords.as_slice() {
        [x, y] => Ok(Position2D::new(*x, *y)),
        _ => Err(format!("`{key}`: expected `x, y`, got `{value}`")),
    }
}

fn parse_int<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| format!("`{key}`: cannot parse `{value}` as an integer ({e})"))
}

impl ScenarioConfig {
    /// Sets one key from its text value. `Ok(false)` means the key is unknown.
    fn apply(&mut self, key: &str, value: &str) -> std::result::Result<bool, String> {
        match key {
            "pos_s" => self.pos_s = parse_position(key, value)?,
            "pos_r" => self.pos_r = parse_position(key, value)?,
            "pos_d" => self.pos_d = parse_position(key, value)?,
            "pos_e" => self.pos_e = parse_position(key, value)?,
            "k_elems" => self.k_elems = parse_int(key, value)?,
            "k_sr" => self.k_sr = parse_f64(key, value)?,
            "k_rd" => self.k_rd = parse_f64(key, value)?,
            "k_re" => self.k_re = parse_f64(key, value)?,
            "carrier_freq" => self.radio.carrier_freq = parse_f64(key, value)?,
            "bandwidth" => self.radio.bandwidth = parse_f64(key, value)?,
            "noise_figure" => self.radio.noise_figure = parse_f64(key, value)?,
            "pathloss_exponent" => self.radio.pathloss_exponent = parse_f64(key, value)?,
            "ptx_dbm" => self.radio.ptx_dbm = parse_f64(key, value)?,
            "pathloss_convention" => {
                self.radio.pathloss_convention = value
                    .trim()
                    .parse::<PathlossConvention>()
                    .map_err(|e| format!("`{key}`: {e}"))?
            }
            "rates" => self.rates = parse_list(key, value, |s| parse_f64(key, s))?,
            "trials" => self.trials = parse_int(key, value)?,
            "master_seed" => self.master_seed = parse_int(key, value)?,
            "schemes" => self.schemes = parse_list(key, value, |s| s.parse::<Scheme>())?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Applies a single `key=value` override and re-checks the invariants.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match self.apply(key.trim(), value) {
            Ok(true) => self.check(),
            Ok(false) => Err(Error::domain(key.trim(), "unknown key")),
            Err(reason) => Err(Error::domain(key.trim(), reason)),
        }
    }

    /// Checks every domain invariant, naming the first offending key.
    pub fn check(&self) -> Result<()> {
        for (key, p) in [
            ("pos_s", self.pos_s),
            ("pos_r", self.pos_r),
            ("pos_d", self.pos_d),
            ("pos_e", self.pos_e),
        ] {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::domain(key, "coordinates must be finite"));
            }
        }
        if self.k_elems == 0 {
            return Err(Error::domain("k_elems", "must be >= 1"));
        }
        for (key, k) in [("k_sr", self.k_sr), ("k_rd", self.k_rd), ("k_re", self.k_re)] {
            if !(k.is_finite() && k >= 0.0) {
                return Err(Error::domain(key, format!("must be finite and >= 0, got {k}")));
            }
        }
        let r = &self.radio;
        if !(r.carrier_freq.is_finite() && r.carrier_freq > 0.0) {
            return Err(Error::domain("carrier_freq", "must be > 0"));
        }
        if !(r.bandwidth.is_finite() && r.bandwidth > 0.0) {
            return Err(Error::domain("bandwidth", "must be > 0"));
        }
        if !r.noise_figure.is_finite() {
            return Err(Error::domain("noise_figure", "must be finite"));
        }
        if !r.pathloss_exponent.is_finite() {
            return Err(Error::domain("pathloss_exponent", "must be finite"));
        }
        if !r.ptx_dbm.is_finite() {
            return Err(Error::domain("ptx_dbm", "must be finite"));
        }
        if self.rates.is_empty() {
            return Err(Error::domain("rates", "at least one target rate is required"));
        }
        if let Some(bad) = self.rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::domain("rates", format!("rates must be finite and >= 0, got {bad}")));
        }
        if self.trials == 0 {
            return Err(Error::domain("trials", "must be >= 1"));
        }
        if self.schemes.is_empty() {
            return Err(Error::domain("schemes", "at least one scheme is required"));
        }
        Ok(())
    }

    /// Renders the scenario back to the text format.
    pub fn to_config_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(", ");
        let schemes: Vec<&str> = self.schemes.iter().map(Scheme::name).collect();
        let r = &self.radio;
        let mut s = String::new();
        let _ = writeln!(s, "pos_s = {}", self.pos_s);
        let _ = writeln!(s, "pos_r = {}", self.pos_r);
        let _ = writeln!(s, "pos_d = {}", self.pos_d);
        let _ = writeln!(s, "pos_e = {}", self.pos_e);
        let _ = writeln!(s, "k_elems = {}", self.k_elems);
        let _ = writeln!(s, "k_sr = {}", self.k_sr);
        let _ = writeln!(s, "k_rd = {}", self.k_rd);
        let _ = writeln!(s, "k_re = {}", self.k_re);
        let _ = writeln!(s, "carrier_freq = {}", r.carrier_freq);
        let _ = writeln!(s, "bandwidth = {}", r.bandwidth);
        let _ = writeln!(s, "noise_figure = {}", r.noise_figure);
        let _ = writeln!(s, "pathloss_exponent = {}", r.pathloss_exponent);
        let _ = writeln!(s, "ptx_dbm = {}", r.ptx_dbm);
        let _ = writeln!(s, "pathloss_convention = {}", r.pathloss_convention);
        let _ = writeln!(s, "rates = {}", join(&self.rates));
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "schemes = {}", schemes.join(", "));
        s
    }
}

/// Parses a configuration document on top of the defaults.
pub fn load_config(text: &str) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::default();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                reason: format!("expected `key = value`, got `{content}`"),
            });
        };
        let key = key.trim();
        if !seen.insert(key.to_string()) {
            return Err(Error::Parse {
                line,
                reason: format!("duplicate key `{key}`"),
            });
        }
        match cfg.apply(key, value) {
            Ok(true) => {}
            Ok(false) => {
                return Err(Error::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
            Err(reason) => return Err(Error::Parse { line, reason }),
        }
    }
    cfg.check()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let cfg = load_config("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.k_elems, 144);
        assert_eq!(cfg.rates, vec![1.0]);
        assert_eq!(cfg.radio.ptx_dbm, 20.0);
        assert_eq!(cfg.radio.noise_figure, 6.0);
        assert_eq!(cfg.radio.bandwidth, 1e7);
        assert_eq!(cfg.radio.pathloss_exponent, -2.5);
        assert_eq!(cfg.radio.carrier_freq, 2.1e9);
        assert_eq!((cfg.k_sr, cfg.k_rd, cfg.k_re), (3.0, 0.5, 1.25));
        assert_eq!(cfg.pos_e, Position2D::new(70.0, -10.0));
    }

    #[test]
    fn single_override() {
        let cfg = load_config("k_elems = 196\n").unwrap();
        assert_eq!(
            cfg,
            ScenarioConfig {
                k_elems: 196,
                ..ScenarioConfig::default()
            }
        );
    }

    #[test]
    fn comments_and_lists() {
        let text = "# header\n\nrates = 0, 0.5 ,1 # inline\nschemes=opt,max_main\npos_e = 70, 10\npathloss_convention = inverse\n";
        let cfg = load_config(text).unwrap();
        assert_eq!(cfg.rates, vec![0.0, 0.5, 1.0]);
        assert_eq!(cfg.schemes, vec![Scheme::Opt, Scheme::MaxMain]);
        assert_eq!(cfg.pos_e, Position2D::new(70.0, 10.0));
        assert_eq!(cfg.radio.pathloss_convention, PathlossConvention::Inverse);
    }

    #[test]
    fn zero_elements_rejected() {
        match load_config("k_elems = 0") {
            Err(Error::Domain { key, .. }) => assert_eq!(key, "k_elems"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagnostics_carry_line_and_key() {
        match load_config("k_elems = 4\nwarp = 9\n") {
            Err(Error::UnknownKey { line, key }) => assert_eq!((line, key.as_str()), (2, "warp")),
            other => panic!("unexpected {other:?}"),
        }
        match load_config("\n\nk_sr = three") {
            Err(Error::Parse { line, reason }) => {
                assert_eq!(line, 3);
                assert!(reason.contains("k_sr"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load_config("k_elems"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            load_config("trials = 1\ntrials = 2"),
            Err(Error::Parse { line: 2, .. })
        ));
        match load_config("rates = 1, -0.5") {
            Err(Error::Domain { key, .. }) => assert_eq!(key, "rates"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn text_roundtrip() {
        let mut cfg = ScenarioConfig::default();
        cfg.set("ptx_dbm", "37.5").unwrap();
        cfg.set("schemes", "ran, max_main").unwrap();
        cfg.set("pathloss_convention", "inverse").unwrap();
        assert_eq!(load_config(&cfg.to_config_text()).unwrap(), cfg);
        assert!(cfg.set("nope", "1").is_err());
        assert!(cfg.set("trials", "0").is_err());
    }

    #[test]
    fn every_key_is_accepted() {
        let cfg = ScenarioConfig::default();
        let text = cfg.to_config_text();
        let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap().trim()).collect();
        assert_eq!(keys, KEYS);
    }
}
