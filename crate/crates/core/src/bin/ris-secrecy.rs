use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ris_secrecy::experiments::sweep::{self, parse_range, parse_values};
use ris_secrecy::experiments::{self, load_config, ScenarioConfig, SweepSpec, SweepVariable};
use ris_secrecy::secrecy_metrics::estimate;
use ris_secrecy::{Error, Executor, PreparedScenario, Scheme};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ris-secrecy", version, about = "Secrecy outage and rate of RIS-assisted wiretap links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate SOP and SR for a single scenario.
    Run(ScenarioArgs),
    /// Sweep one parameter and write one CSV row per cell and rate.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// rate, ptx_dbm, k_elems, k_sr, k_rd or k_re
        #[arg(long)]
        variable: SweepVariable,
        /// Comma-separated values.
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        values: Option<String>,
        /// Inclusive grid `start:stop:step`.
        #[arg(long)]
        range: Option<String>,
    },
    /// Run the invariant suite; exits with status 2 on any failure.
    Validate {
        #[arg(long, default_value_t = 16)]
        levels: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Run the worked examples as checks; exits with status 2 on any failure.
    Selftest,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a scenario key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// opt, ran or max_main; repeatable.
    #[arg(long = "scheme")]
    schemes: Vec<Scheme>,
    /// Output path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads. Changes speed only, never results.
    #[arg(long)]
    workers: Option<usize>,
}

impl ScenarioArgs {
    fn scenario(&self) -> Result<ScenarioConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Io { context: format!("reading {}", path.display()), source: e })?;
                load_config(&text)?
            }
            None => ScenarioConfig::default(),
        };
        for kv in &self.overrides {
            let (key, value) = kv.split_once('=').ok_or_else(|| Error::Domain {
                key: kv.clone(),
                reason: "expected KEY=VALUE".into(),
            })?;
            cfg.set(key, value)?;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if !self.schemes.is_empty() {
            cfg.schemes = self.schemes.clone();
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn executor(&self) -> Executor {
        self.workers.map_or(Executor::Auto, Executor::with_workers)
    }

    fn sink(&self) -> Result<Box<dyn Write>, Error> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| Error::Io {
                context: format!("creating {}", path.display()),
                source: e,
            })?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn run_single(args: &ScenarioArgs) -> Result<(), Error> {
    let cfg = args.scenario()?;
    let prepared = PreparedScenario::from_config(&cfg)?;
    let exec = args.executor();
    let mut out = args.sink()?;
    sweep::write_header(&mut out)?;
    for &scheme in &cfg.schemes {
        let est = estimate(&prepared, scheme, cfg.trials, cfg.master_seed, exec)?;
        sweep::write_rows(&mut out, "none", None, scheme, &est, cfg.master_seed)?;
    }
    out.flush().map_err(|e| Error::Io { context: "flushing output".into(), source: e })
}

fn run_sweep(
    args: &ScenarioArgs,
    variable: SweepVariable,
    values: Option<&str>,
    range: Option<&str>,
) -> Result<(), Error> {
    let cfg = args.scenario()?;
    let values = match (values, range) {
        (Some(v), _) => parse_values(v),
        (None, Some(r)) => parse_range(r),
        (None, None) => Err("either --values or --range is required".to_string()),
    }
    .map_err(|reason| Error::Domain { key: variable.name().into(), reason })?;
    let spec = SweepSpec::new(variable, values, cfg)?;
    let mut out = args.sink()?;
    let summary = experiments::run_sweep(&spec, &mut out, args.executor())?;
    eprintln!("{} cells, {} rows", summary.cells, summary.rows);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };

    let result = match &cli.command {
        Command::Run(args) => run_single(args),
        Command::Sweep { scenario, variable, values, range } => {
            run_sweep(scenario, *variable, values.as_deref(), range.as_deref())
        }
        Command::Validate { levels, trials, seed } => {
            let opts = experiments::ValidateOptions { levels: *levels, trials: *trials, seed: *seed };
            let report = experiments::validate(&opts);
            println!("{report}");
            return if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VALIDATION) };
        }
        Command::Selftest => {
            let report = experiments::selftest();
            println!("{report}");
            return if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VALIDATION) };
        }
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
