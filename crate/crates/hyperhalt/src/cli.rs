//! The `hyperhalt` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error (bad flag,
//! bad config file, missing machine), 3 invariant suite failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigError, ModeSpec, RunConfig, ScheduleSpec, StateSpec};
use crate::exec::Parallel;
use crate::experiments::{self, ExperimentError};
use crate::report::{emit, records_json, ExperimentRecord, Table};
use crate::suite;

#[derive(Debug, Parser)]
#[command(name = "hyperhalt", version, about = "False-coin detection with random test vectors, and the halting problem as coins")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weigh one coin from stack 1, two from stack 2, ... and locate the false stack.
    Merchant {
        /// False stack 1..=10; 0 or absent means every stack is true.
        #[arg(long)]
        false_stack: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run a Turing machine for a bounded number of steps.
    TmRun(TmRunCmd),
    /// Estimate the measure of the indistinguishable set at one time.
    Device(DeviceCmd),
    /// Sweep the indistinguishable-set estimate over several times.
    Measure(MeasureCmd),
    /// Transmission and reflection of the quantum dot over a momentum grid.
    ScatterScan(ScanCmd),
    /// Non-click fraction of the Brownian detector against its bound.
    Brownian(BrownianCmd),
    /// Run the device on the coins encoding a machine's halting.
    HaltingExperiment(HaltingCmd),
    /// Run the invariant suite.
    Validate,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON config, or a report whose embedded config is replayed.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; falls back to the config, then HYPERHALT_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Leave wall-clock time out of the report.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Debug, Args)]
struct DeviceArgs {
    /// ε = 2^-EPSILON.
    #[arg(long)]
    epsilon: Option<u32>,
    /// θ = 2^-THETA.
    #[arg(long)]
    theta: Option<u32>,
    /// False-coin excess γ = 2^-j, given as a value such as 0.5.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    prior: Option<f64>,
    /// Truncation length N.
    #[arg(long)]
    len: Option<usize>,
    /// dyadic, unperturbed, constant:D or table:D1,D2,...
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeSpec>,
    /// Time T; derived from θ when absent.
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Debug, Args)]
struct TmRunCmd {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Corpus name or machine file.
    #[arg(long)]
    machine: Option<String>,
    #[arg(long)]
    input: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DeviceCmd {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    device: DeviceArgs,
    /// Index j of the false stack.
    #[arg(long)]
    stack: Option<usize>,
}

#[derive(Debug, Args)]
struct MeasureCmd {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    device: DeviceArgs,
    #[arg(long)]
    stack: Option<usize>,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Gnuplot blocks of estimate and bound against T.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanCmd {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inner dot levels α_l² = l.
    #[arg(long)]
    levels: Option<usize>,
    /// Comma-separated real channel components.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    state: Option<StateSpec>,
    /// |β|² after rescaling.
    #[arg(long)]
    beta_strength: Option<f64>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// CSV path; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BrownianCmd {
    #[command(flatten)]
    common: Common,
    /// Comma-separated exponents k, ε = 2^-k.
    #[arg(long, value_delimiter = ',')]
    epsilons: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Option<Vec<f64>>,
    #[arg(long)]
    len: Option<usize>,
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HaltingCmd {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    device: DeviceArgs,
    #[arg(long)]
    machine: Option<String>,
    #[arg(long)]
    input: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("cannot start worker threads: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Experiment(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Experiment(_) => 2,
            CliError::Write { .. } | CliError::Threads(_) => 1,
        }
    }
}

macro_rules! set {
    ($cfg:ident . $field:ident, $value:expr) => {
        if let Some(v) = $value {
            $cfg.$field = v;
        }
    };
}

fn load(path: &Option<PathBuf>) -> Result<RunConfig, ConfigError> {
    match path {
        Some(p) => RunConfig::from_file(p),
        None => Ok(RunConfig::default()),
    }
}

fn apply_device(cfg: &mut RunConfig, d: DeviceArgs) -> Result<(), ConfigError> {
    set!(cfg.epsilon, d.epsilon);
    set!(cfg.theta, d.theta);
    set!(cfg.gamma, d.gamma);
    set!(cfg.prior, d.prior);
    set!(cfg.len, d.len);
    set!(cfg.mode, d.mode);
    set!(cfg.trials, d.trials);
    if let Some(s) = d.schedule {
        cfg.schedule = ScheduleSpec::parse(&s)?;
    }
    if d.time.is_some() {
        cfg.time = d.time;
    }
    Ok(())
}

fn prepare(common: &Common, cfg: &mut RunConfig) -> Result<Parallel, CliError> {
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    if common.workers.is_some() {
        cfg.workers = common.workers;
    }
    cfg.resolve_seed()?;
    Ok(Parallel::new(cfg.workers.unwrap_or(0))?)
}

fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    emit(path, text).map_err(|source| CliError::Write {
        path: path.map_or_else(|| "stdout".to_string(), |p| p.display().to_string()),
        source,
    })
}

fn finish(common: &Common, mut records: Vec<ExperimentRecord>, started: Instant) -> Result<(), CliError> {
    if !common.no_timestamp {
        let ms = started.elapsed().as_millis() as u64;
        for r in &mut records {
            r.wall_time_ms = Some(ms);
        }
    }
    write(common.output.as_deref(), &records_json(&records))
}

fn tables(table: &Table, csv: &Option<PathBuf>, plot: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(p) = csv {
        write(Some(p), &table.to_csv())?;
    }
    if let Some(p) = plot {
        write(Some(p), &table.to_plot_data(&["estimate", "bound"]))?;
    }
    Ok(())
}

fn execute(command: Command) -> Result<i32, CliError> {
    let started = Instant::now();
    match command {
        Command::Merchant { false_stack, json } => {
            let r = experiments::merchant(false_stack.filter(|&n| n != 0))?;
            let text = if json {
                format!("{}\n", serde_json::to_string_pretty(&r).expect("report serializes"))
            } else {
                let detected = r.detected.map_or_else(|| "none".to_string(), |n| format!("stack {n}"));
                format!("weight {:.2}\ndetected {detected}\n", r.weight)
            };
            write(None, &text)?;
        }
        Command::TmRun(c) => {
            let mut cfg = load(&c.config)?;
            if c.machine.is_some() {
                cfg.machine = c.machine;
            }
            set!(cfg.input, c.input);
            set!(cfg.budget, c.budget);
            let r = experiments::tm_run_report(&cfg)?;
            write(c.output.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&r).expect("report serializes")))?;
        }
        Command::Device(c) => {
            let mut cfg = load(&c.common.config)?;
            apply_device(&mut cfg, c.device)?;
            set!(cfg.stack, c.stack);
            let exec = prepare(&c.common, &mut cfg)?;
            let r = experiments::device(&cfg, &exec)?;
            finish(&c.common, vec![r], started)?;
        }
        Command::Measure(c) => {
            let mut cfg = load(&c.common.config)?;
            apply_device(&mut cfg, c.device)?;
            set!(cfg.stack, c.stack);
            set!(cfg.times, c.times);
            let exec = prepare(&c.common, &mut cfg)?;
            let (records, table) = experiments::measure(&cfg, &exec)?;
            tables(&table, &c.csv, &c.plot_data)?;
            finish(&c.common, records, started)?;
        }
        Command::ScatterScan(c) => {
            let mut cfg = load(&c.config)?;
            set!(cfg.levels, c.levels);
            set!(cfg.beta, c.beta);
            set!(cfg.state, c.state);
            set!(cfg.beta_strength, c.beta_strength);
            set!(cfg.p_min, c.p_min);
            set!(cfg.p_max, c.p_max);
            set!(cfg.points, c.points);
            let table = experiments::scatter_scan(&cfg)?;
            write(c.csv.as_deref(), &table.to_csv())?;
        }
        Command::Brownian(c) => {
            let mut cfg = load(&c.common.config)?;
            set!(cfg.epsilons, c.epsilons);
            set!(cfg.beta, c.beta);
            set!(cfg.len, c.len);
            set!(cfg.trials, c.trials);
            if let Some(s) = c.schedule {
                cfg.schedule = ScheduleSpec::parse(&s)?;
            }
            let exec = prepare(&c.common, &mut cfg)?;
            let (records, table) = experiments::brownian(&cfg, &exec)?;
            tables(&table, &c.csv, &c.plot_data)?;
            finish(&c.common, records, started)?;
        }
        Command::HaltingExperiment(c) => {
            let mut cfg = load(&c.common.config)?;
            apply_device(&mut cfg, c.device)?;
            if c.machine.is_some() {
                cfg.machine = c.machine;
            }
            set!(cfg.input, c.input);
            let exec = prepare(&c.common, &mut cfg)?;
            let r = experiments::halting_experiment(&cfg, &exec)?;
            finish(&c.common, vec![r], started)?;
        }
        Command::Validate => {
            let checks = suite::run_suite();
            let mut text = String::new();
            for c in &checks {
                text.push_str(&format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
            }
            write(None, &text)?;
            if checks.iter().any(|c| !c.passed) {
                return Ok(3);
            }
        }
    }
    Ok(0)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
