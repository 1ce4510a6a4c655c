//! One-dimensional parameter sweeps written as CSV.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::experiments::config::ScenarioConfig;
use crate::secrecy_metrics::{estimate, PreparedScenario, Scheme, SecrecyEstimate};
use crate::stats::EstimateWithCI;

pub const CSV_HEADER: &str =
    "variable,value,scheme,rate,sop,sop_ci_lo,sop_ci_hi,sr,sr_ci_lo,sr_ci_hi,trials,seed";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    Rate,
    PtxDbm,
    KElems,
    KSr,
    KRd,
    KRe,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::Rate => "rate",
            SweepVariable::PtxDbm => "ptx_dbm",
            SweepVariable::KElems => "k_elems",
            SweepVariable::KSr => "k_sr",
            SweepVariable::KRd => "k_rd",
            SweepVariable::KRe => "k_re",
        }
    }

    /// Base scenario with this variable set to `value`.
    pub fn apply(&self, base: &ScenarioConfig, value: f64) -> Result<ScenarioConfig> {
        let mut cfg = base.clone();
        match self {
            SweepVariable::Rate => cfg.rates = vec![value],
            SweepVariable::PtxDbm => cfg.radio.ptx_dbm = value,
            SweepVariable::KElems => {
                if !(value.fract() == 0.0 && (1.0..=u32::MAX as f64).contains(&value)) {
                    return Err(Error::domain(
                        self.name(),
                        format!("element count must be a positive integer, got {value}"),
                    ));
                }
                cfg.k_elems = value as usize;
            }
            SweepVariable::KSr => cfg.k_sr = value,
            SweepVariable::KRd => cfg.k_rd = value,
            SweepVariable::KRe => cfg.k_re = value,
        }
        cfg.check().map_err(|e| match e {
            Error::Domain { reason, .. } => Error::domain(self.name(), format!("{value}: {reason}")),
            other => other,
        })?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "rate" => SweepVariable::Rate,
            "ptx_dbm" => SweepVariable::PtxDbm,
            "k_elems" => SweepVariable::KElems,
            "k_sr" => SweepVariable::KSr,
            "k_rd" => SweepVariable::KRd,
            "k_re" => SweepVariable::KRe,
            other => {
                return Err(format!(
                    "unknown sweep variable `{other}` (rate, ptx_dbm, k_elems, k_sr, k_rd, k_re)"
                ))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub base: ScenarioConfig,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, values: Vec<f64>, base: ScenarioConfig) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain(variable.name(), "sweep needs at least one value"));
        }
        base.check()?;
        for &v in &values {
            variable.apply(&base, v)?;
        }
        Ok(SweepSpec {
            variable,
            values,
            base,
        })
    }
}

/// Parses `start:stop:step` into an inclusive grid. The endpoint is kept when
/// it lies within a millionth of a step of the grid.
pub fn parse_range(text: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(format!("expected start:stop:step, got `{text}`"));
    };
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("bad number `{s}` in range: {e}"));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(step.is_finite() && step > 0.0 && start.is_finite() && stop.is_finite() && start <= stop) {
        return Err(format!("range `{text}` needs finite start <= stop and step > 0"));
    }
    let n = ((stop - start) / step + 1e-6).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

pub fn parse_values(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| format!("bad value `{s}`: {e}")))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub cells: usize,
    pub rows: usize,
}

/// One estimated cell of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub scheme: Scheme,
    pub estimate: SecrecyEstimate,
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_header<W: Write>(out: &mut W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}").map_err(|e| Error::io("writing CSV header", e))
}

/// Writes one row per target rate. `value = None` leaves the value column empty.
pub fn write_rows<W: Write>(
    out: &mut W,
    variable: &str,
    value: Option<f64>,
    scheme: Scheme,
    est: &SecrecyEstimate,
    seed: u64,
) -> Result<usize> {
    let value = value.map(fmt_f).unwrap_or_default();
    let sr: &EstimateWithCI = &est.sr;
    for (rate, sop) in &est.sop {
        writeln!(
            out,
            "{variable},{value},{scheme},{},{},{},{},{},{},{},{},{seed}",
            fmt_f(*rate),
            fmt_f(sop.mean),
            fmt_f(sop.lower),
            fmt_f(sop.upper),
            fmt_f(sr.mean),
            fmt_f(sr.lower),
            fmt_f(sr.upper),
            sop.trials,
        )
        .map_err(|e| Error::io(format!("writing {variable}={value} row"), e))?;
    }
    Ok(est.sop.len())
}

/// Estimates every (value, scheme) cell in value-major order.
///
/// All cells key their trials by the base master seed alone, so cells share
/// channel realizations (common random numbers) and adding a sweep point
/// leaves the others untouched.
pub fn estimate_cells(spec: &SweepSpec, exec: Executor) -> Result<Vec<Cell>> {
    let mut cells = Vec::with_capacity(spec.values.len() * spec.base.schemes.len());
    for &value in &spec.values {
        let cfg = spec.variable.apply(&spec.base, value)?;
        let prepared = PreparedScenario::from_config(&cfg)?;
        for &scheme in &cfg.schemes {
            let estimate = estimate(&prepared, scheme, cfg.trials, cfg.master_seed, exec)?;
            cells.push(Cell {
                value,
                scheme,
                estimate,
            });
        }
    }
    Ok(cells)
}

pub fn run_sweep<W: Write>(spec: &SweepSpec, out: &mut W, exec: Executor) -> Result<SweepSummary> {
    write_header(out)?;
    let mut summary = SweepSummary::default();
    for &value in &spec.values {
        let cfg = spec.variable.apply(&spec.base, value)?;
        let prepared = PreparedScenario::from_config(&cfg)?;
        for &scheme in &cfg.schemes {
            let est = estimate(&prepared, scheme, cfg.trials, cfg.master_seed, exec)?;
            summary.rows += write_rows(out, spec.variable.name(), Some(value), scheme, &est, cfg.master_seed)?;
            summary.cells += 1;
        }
    }
    out.flush().map_err(|e| Error::io("flushing sweep output", e))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_range("10:400:130").unwrap(), vec![10.0, 140.0, 270.0, 400.0]);
        assert_eq!(parse_range("0:4:0.1").unwrap().len(), 41);
        assert!(parse_range("1:0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("0:1").is_err());
        assert_eq!(parse_values("1, 2,3").unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn spec_rejects_bad_values() {
        let base = ScenarioConfig::default();
        assert!(SweepSpec::new(SweepVariable::Rate, vec![], base.clone()).is_err());
        assert!(SweepSpec::new(SweepVariable::KElems, vec![10.0, 0.0], base.clone()).is_err());
        assert!(SweepSpec::new(SweepVariable::KElems, vec![2.5], base.clone()).is_err());
        assert!(SweepSpec::new(SweepVariable::KSr, vec![-1.0], base.clone()).is_err());
        assert!(SweepSpec::new(SweepVariable::Rate, vec![-0.1], base).is_err());
    }

    #[test]
    fn single_value_single_trial_rows() {
        let base = ScenarioConfig {
            trials: 1,
            k_elems: 8,
            rates: vec![0.0, 1.0, 2.0],
            schemes: Scheme::ALL.to_vec(),
            ..ScenarioConfig::default()
        };
        let spec = SweepSpec::new(SweepVariable::PtxDbm, vec![20.0], base).unwrap();
        let mut buf = Vec::new();
        let summary = run_sweep(&spec, &mut buf, Executor::Sequential).unwrap();
        assert_eq!(summary, SweepSummary { cells: 3, rows: 9 });
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 10);
        assert!(lines[1].starts_with("ptx_dbm,2.0000000000000000e1,opt,0.0000000000000000e0,"));
        assert!(lines[1].ends_with(",1,2021"));
        // single trial: SR interval is unbounded
        assert!(lines[1].contains(",-inf,inf,"));
    }

    #[test]
    fn rate_sweep_uses_value_as_rate() {
        let base = ScenarioConfig {
            trials: 20,
            k_elems: 4,
            ..ScenarioConfig::default()
        };
        let spec = SweepSpec::new(SweepVariable::Rate, vec![0.0, 0.5], base).unwrap();
        let cells = estimate_cells(&spec, Executor::Sequential).unwrap();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[1].estimate.sop[0].0, 0.0);
        assert_eq!(cells[2].estimate.sop[0].0, 0.5);
    }
}
