use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use multiplier_core::sim::{events_to_json, write_events_csv, DEFAULT_MAX_EVENTS};
use multiplier_core::{Axis, MultiplierParams, SimConfig};
use serde::Deserialize;

use crate::commands;
use crate::fixtures::{semilog_presets, Fixtures, ReferenceTable};
use crate::table::{render, Format, OutputTable};
use crate::verify::{report, run_checks};
use crate::{EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

#[derive(Debug, Parser)]
#[command(
    name = "multiplier",
    version,
    about = "Classic and nested money multipliers"
)]
pub struct Cli {
    /// Output format: csv, json or human.
    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,

    /// TOML file with parameter values; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classic partial sums and the 1/R limit.
    Classic {
        #[arg(short = 'R', long)]
        reserve: Option<f64>,
        #[arg(short = 'n', long)]
        iterations: Option<u32>,
        /// Count the initial deposit, giving the 1/R asymptote.
        #[arg(long)]
        include_initial_deposit: bool,
    },
    /// Nested multiplier for depths 1..=k.
    Kraken {
        #[command(flatten)]
        params: ParamArgs,
        /// Report log10 m, for depths beyond the f64 range.
        #[arg(long)]
        log_space: bool,
    },
    /// The four reference tables.
    Tables,
    /// Semi-log curves, one series per value of the swept parameter.
    Curve {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value = "R")]
        axis: Axis,
        #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.025])]
        values: Vec<f64>,
    },
    /// Ledger simulation of the lending cascade.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Write the event log here (json if the name ends in .json, csv otherwise).
        #[arg(long, value_name = "PATH")]
        events: Option<PathBuf>,
    },
    /// Nested multiplier over a list of values for one parameter.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        axis: Axis,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Check the implementation against reference values and oracles.
    Verify {
        #[arg(long, hide = true, value_name = "TABLE:K")]
        corrupt_fixture: Option<String>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    #[arg(short = 'R', long)]
    pub reserve: Option<f64>,
    #[arg(short = 'I', long)]
    pub insurance: Option<f64>,
    #[arg(short = 'O', long)]
    pub origination: Option<f64>,
    #[arg(short = 'T', long)]
    pub tranche: Option<f64>,
    #[arg(short = 'n', long)]
    pub iterations: Option<u32>,
    #[arg(short = 'k', long)]
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub seed_capital: Option<f64>,
    #[arg(long)]
    pub leak: Option<f64>,
    /// Leave every j-th loan of each level uninsured.
    #[arg(long, value_name = "J")]
    pub skip_every: Option<u32>,
    #[arg(long)]
    pub min_loan: Option<f64>,
    /// Cap on synthetic capital as a multiple of the seed.
    #[arg(long)]
    pub cap: Option<f64>,
    #[arg(long)]
    pub max_events: Option<usize>,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub reserve: Option<f64>,
    pub insurance: Option<f64>,
    pub origination: Option<f64>,
    pub tranche: Option<f64>,
    pub iterations: Option<u32>,
    pub depth: Option<u32>,
    pub seed_capital: Option<f64>,
    pub leak: Option<f64>,
    pub skip_every: Option<u32>,
    pub min_loan: Option<f64>,
    pub cap: Option<f64>,
    pub max_events: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<multiplier_core::Error> for CliError {
    fn from(e: multiplier_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Fallbacks used when neither a flag nor the config file sets a value.
#[derive(Debug, Clone, Copy, Default)]
struct Defaults {
    reserve: Option<f64>,
    insurance: Option<f64>,
    origination: Option<f64>,
    tranche: Option<f64>,
    iterations: Option<u32>,
    depth: Option<u32>,
}

impl Defaults {
    fn plain() -> Self {
        Defaults {
            origination: Some(1.0),
            ..Defaults::default()
        }
    }

    fn preset(f: &ReferenceTable) -> Self {
        let p = f.params();
        Defaults {
            reserve: Some(p.reserve()),
            insurance: Some(p.insurance()),
            origination: Some(p.origination()),
            tranche: Some(p.tranche()),
            iterations: Some(p.iterations()),
            depth: Some(p.depth()),
        }
    }
}

fn pick<T: Copy>(
    name: &str,
    flag: Option<T>,
    file: Option<T>,
    default: Option<T>,
) -> Result<T, CliError> {
    flag.or(file)
        .or(default)
        .ok_or_else(|| CliError::Usage(format!("missing required parameter --{name}")))
}

fn resolve_params(
    args: &ParamArgs,
    file: &ConfigFile,
    defaults: Defaults,
) -> Result<MultiplierParams, CliError> {
    Ok(MultiplierParams::new(
        pick("reserve", args.reserve, file.reserve, defaults.reserve)?,
        pick(
            "insurance",
            args.insurance,
            file.insurance,
            defaults.insurance,
        )?,
        pick(
            "origination",
            args.origination,
            file.origination,
            defaults.origination,
        )?,
        pick("tranche", args.tranche, file.tranche, defaults.tranche)?,
        pick(
            "iterations",
            args.iterations,
            file.iterations,
            defaults.iterations,
        )?,
        pick("depth", args.depth, file.depth, defaults.depth)?,
    )?)
}

fn resolve_sim(
    params: MultiplierParams,
    args: &SimArgs,
    file: &ConfigFile,
) -> Result<SimConfig, CliError> {
    let config = SimConfig {
        params,
        seed_capital: args.seed_capital.or(file.seed_capital).unwrap_or(1.0),
        leak: args.leak.or(file.leak).unwrap_or(0.0),
        skip_insurance_every: args.skip_every.or(file.skip_every),
        min_loan: args.min_loan.or(file.min_loan).unwrap_or(0.0),
        synthetic_capital_cap: args.cap.or(file.cap),
        max_events: args
            .max_events
            .or(file.max_events)
            .unwrap_or(DEFAULT_MAX_EVENTS),
    };
    config.validate()?;
    Ok(config)
}

/// Parses `TABLE:K`, `din` or `din-skipped` and returns the fixtures with
/// that entry perturbed.
pub fn corrupt_fixtures(spec: &str) -> Result<Fixtures, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--corrupt-fixture expects TABLE:K, din or din-skipped, got {spec:?}"
        ))
    };
    let mut fixtures = Fixtures::default();
    match spec {
        "din" => {
            fixtures.fully_insured_ratio += 0.1;
            return Ok(fixtures);
        }
        "din-skipped" => {
            fixtures.skipped_ratio += 0.1;
            return Ok(fixtures);
        }
        _ => {}
    }
    let (t, k) = spec.split_once(':').ok_or_else(bad)?;
    let t: usize = t.trim().parse().map_err(|_| bad())?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    if !(1..=4).contains(&t) || !(1..=10).contains(&k) {
        return Err(bad());
    }
    let entry = &mut fixtures.tables[t - 1].expected[k - 1];
    *entry = *entry * 2 + 10;
    Ok(fixtures)
}

fn write_events(path: &Path, result: &multiplier_core::SimResult) -> Result<(), CliError> {
    let io =
        |e: &dyn std::fmt::Display| CliError::Io(format!("cannot write {}: {e}", path.display()));
    if path.extension().is_some_and(|e| e == "json") {
        fs::write(path, events_to_json(&result.events)).map_err(|e| io(&e))
    } else {
        let file = fs::File::create(path).map_err(|e| io(&e))?;
        write_events_csv(&result.events, std::io::BufWriter::new(file)).map_err(|e| io(&e))
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut code = EXIT_OK;
    let tables: Vec<OutputTable> = match &cli.command {
        Command::Classic {
            reserve,
            iterations,
            include_initial_deposit,
        } => {
            let r = pick("reserve", *reserve, file.reserve, None)?;
            if r >= 1.0 {
                return Err(CliError::Usage(format!(
                    "reserve ratio {r} must be below 1"
                )));
            }
            let n = pick("iterations", *iterations, file.iterations, Some(100))?;
            vec![commands::classic_table(r, n, *include_initial_deposit)?]
        }
        Command::Kraken { params, log_space } => {
            let p = resolve_params(params, &file, Defaults::plain())?;
            if *log_space {
                vec![commands::kraken_log_table(&p)]
            } else {
                vec![commands::kraken_command_table(&p)?]
            }
        }
        Command::Tables => commands::reference_tables(),
        Command::Curve {
            params,
            axis,
            values,
        } => {
            let p = resolve_params(params, &file, Defaults::preset(&semilog_presets()[0]))?;
            vec![commands::curve_table(&p, *axis, values)?]
        }
        Command::Sweep {
            params,
            axis,
            values,
        } => {
            let p = resolve_params(params, &file, Defaults::plain())?;
            vec![commands::sweep_table(&p, *axis, values)?]
        }
        Command::Simulate {
            params,
            sim,
            events,
        } => {
            let p = resolve_params(params, &file, Defaults::plain())?;
            let config = resolve_sim(p, sim, &file)?;
            let (table, result) = commands::simulate_table(&config)?;
            if let Some(path) = events {
                write_events(path, &result)?;
            }
            vec![table]
        }
        Command::Verify { corrupt_fixture } => {
            let fixtures = match corrupt_fixture {
                Some(spec) => corrupt_fixtures(spec)?,
                None => Fixtures::default(),
            };
            let checks = run_checks(&fixtures);
            if checks.iter().any(|c| !c.passed) {
                code = EXIT_VERIFY_FAILED;
            }
            vec![report(&checks)]
        }
    };
    Ok(Outcome {
        output: render(&tables, cli.format),
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("multiplier").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_config() {
        let file: ConfigFile = toml::from_str(
            "reserve = 0.1\ninsurance = 0.05\ntranche = 0.3\niterations = 50\ndepth = 3\n",
        )
        .unwrap();
        let cli = parse(&["kraken", "-R", "0.05"]);
        let Command::Kraken { params, .. } = &cli.command else {
            unreachable!()
        };
        let p = resolve_params(params, &file, Defaults::plain()).unwrap();
        assert_eq!(p.reserve(), 0.05);
        assert_eq!(p.iterations(), 50);
        assert_eq!(p.origination(), 1.0);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(toml::from_str::<ConfigFile>("reserv = 0.1").is_err());
    }

    #[test]
    fn missing_parameter_is_usage_error() {
        let cli = parse(&["kraken", "-R", "0.05"]);
        let err = run(&cli).err().unwrap();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(err.to_string().contains("--insurance"));
    }

    #[test]
    fn corrupt_spec_parsing() {
        let f = corrupt_fixtures("3:7").unwrap();
        let clean = Fixtures::default();
        assert_ne!(f.tables[2].expected[6], clean.tables[2].expected[6]);
        assert_eq!(f.tables[0], clean.tables[0]);
        assert_ne!(corrupt_fixtures("din").unwrap(), clean);
        assert!(corrupt_fixtures("5:1").is_err());
        assert!(corrupt_fixtures("3").is_err());
    }

    #[test]
    fn value_lists_split_on_commas() {
        let cli = parse(&["sweep", "--axis", "T", "--values", "0.1,0.2,0.3"]);
        let Command::Sweep { values, axis, .. } = cli.command else {
            unreachable!()
        };
        assert_eq!(values, vec![0.1, 0.2, 0.3]);
        assert_eq!(axis, Axis::Tranche);
    }
}
