//! Run configuration shared by every subcommand.
//!
//! A config is plain JSON. Reports embed the resolved config, so a report
//! can be fed back with `--config` to replay the run.

use std::path::Path;

use hyperhalt_core::detector::DEFAULT_LEN;
use hyperhalt_core::{DeviceConfig, Mode, WalkSchedule};
use serde::{Deserialize, Serialize};

/// Seed used when neither a flag, the config nor `HYPERHALT_SEED` gives one.
pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "HYPERHALT_SEED";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid {field}: {reason}")]
    Field { field: String, reason: String },
    #[error("cannot read config {path}: {reason}")]
    File { path: String, reason: String },
}

impl ConfigError {
    pub fn field(field: &str, reason: impl Into<String>) -> Self {
        ConfigError::Field { field: field.to_string(), reason: reason.into() }
    }
}

impl From<hyperhalt_core::Error> for ConfigError {
    fn from(e: hyperhalt_core::Error) -> Self {
        match e {
            hyperhalt_core::Error::InvalidParameter { name, reason } => ConfigError::field(name, reason),
            other => ConfigError::field("config", other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleSpec {
    #[default]
    Dyadic,
    Unperturbed,
    Constant(f64),
    Table(Vec<f64>),
}

impl ScheduleSpec {
    /// `dyadic`, `unperturbed`, `constant:0.5` or `table:0.5,0.75`.
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        let bad = |reason: &str| ConfigError::field("schedule", reason);
        let number = |v: &str| v.trim().parse::<f64>().map_err(|_| bad("steps must be numbers"));
        match s.split_once(':') {
            None if s == "dyadic" => Ok(ScheduleSpec::Dyadic),
            None if s == "unperturbed" => Ok(ScheduleSpec::Unperturbed),
            Some(("constant", v)) => Ok(ScheduleSpec::Constant(number(v)?)),
            Some(("table", v)) => Ok(ScheduleSpec::Table(v.split(',').map(number).collect::<Result<_, _>>()?)),
            _ => Err(bad("expected dyadic, unperturbed, constant:D or table:D1,D2,...")),
        }
    }

    pub fn to_schedule(&self) -> Result<WalkSchedule, ConfigError> {
        let built = match self {
            ScheduleSpec::Dyadic => Ok(WalkSchedule::Dyadic),
            ScheduleSpec::Unperturbed => Ok(WalkSchedule::Unperturbed),
            ScheduleSpec::Constant(d) => WalkSchedule::constant(*d),
            ScheduleSpec::Table(t) => WalkSchedule::table(t.clone()),
        };
        built.map_err(|e| ConfigError::field("schedule", e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    #[default]
    Real,
    Complex,
}

impl From<ModeSpec> for Mode {
    fn from(m: ModeSpec) -> Mode {
        match m {
            ModeSpec::Real => Mode::Real,
            ModeSpec::Complex => Mode::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StateSpec {
    Vacant,
    #[default]
    Occupied,
}

/// Every tunable of every subcommand. Fields a subcommand does not use are
/// carried along unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `ε = 2^-epsilon`.
    pub epsilon: u32,
    /// `θ = 2^-theta`.
    pub theta: u32,
    /// False-coin excess `γ`, a power `2^-j`.
    pub gamma: f64,
    pub prior: f64,
    /// Truncation `N`.
    pub len: usize,
    pub schedule: ScheduleSpec,
    pub mode: ModeSpec,
    /// Explicit time `T`; derived from `θ` when absent.
    pub time: Option<f64>,
    /// Index `j` of the false stack in `device` and `measure`.
    pub stack: usize,
    pub trials: u64,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    /// Corpus name or machine file path.
    pub machine: Option<String>,
    pub input: u64,
    pub budget: u64,
    /// Times swept by `measure`.
    pub times: Vec<f64>,
    /// `ε` exponents swept by `brownian`.
    pub epsilons: Vec<u32>,
    /// Real channel components `β_m`.
    pub beta: Vec<f64>,
    /// Inner dot levels `α_l² = l`, `l = 1..=levels`.
    pub levels: usize,
    pub state: StateSpec,
    /// `|β|²` used by `scatter-scan`; the channel is rescaled to it.
    pub beta_strength: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            epsilon: 6,
            theta: 6,
            gamma: 0.5,
            prior: 0.5,
            len: DEFAULT_LEN,
            schedule: ScheduleSpec::Dyadic,
            mode: ModeSpec::Real,
            time: None,
            stack: 1,
            trials: 10_000,
            seed: None,
            workers: None,
            machine: None,
            input: 0,
            budget: 1000,
            times: (2..=16).map(f64::from).collect(),
            epsilons: vec![2, 4, 6],
            beta: vec![1.0],
            levels: 8,
            state: StateSpec::Occupied,
            beta_strength: 1.0,
            p_min: 0.1,
            p_max: 3.0,
            points: 100,
        }
    }
}

/// `j` with `2^-j == gamma` exactly.
pub fn gamma_exponent(gamma: f64) -> Result<u32, ConfigError> {
    (1..=hyperhalt_core::coins::MAX_WEIGHT_EXPONENT)
        .find(|&j| hyperhalt_core::coins::dyadic(j) == gamma)
        .ok_or_else(|| ConfigError::field("gamma", "must be 2^-j for some j in 1..=52"))
}

impl RunConfig {
    /// Reads a config, or the config embedded in a report (an object with a
    /// `config` key, or an array of such objects).
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let bad = |e: serde_json::Error| ConfigError::field("config", e.to_string());
        let value: serde_json::Value = serde_json::from_str(text).map_err(bad)?;
        let inner = match &value {
            serde_json::Value::Array(items) => items
                .first()
                .and_then(|r| r.get("config"))
                .ok_or_else(|| ConfigError::field("config", "report array has no embedded config"))?,
            serde_json::Value::Object(map) if map.contains_key("config") => &map["config"],
            other => other,
        };
        RunConfig::deserialize(inner).map_err(bad)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::File { path: path.display().to_string(), reason: e.to_string() })?;
        Self::from_json(&text)
    }

    /// Fills in the seed from `HYPERHALT_SEED` or the default.
    pub fn resolve_seed(&mut self) -> Result<u64, ConfigError> {
        if self.seed.is_none() {
            self.seed = Some(match std::env::var(SEED_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| ConfigError::field("seed", format!("{SEED_ENV} must be an unsigned integer")))?,
                Err(_) => DEFAULT_SEED,
            });
        }
        Ok(self.seed.expect("just set"))
    }

    pub fn device(&self) -> Result<DeviceConfig, ConfigError> {
        let cfg = DeviceConfig {
            epsilon_exp: self.epsilon,
            theta_exp: self.theta,
            gamma_exp: gamma_exponent(self.gamma)?,
            schedule: self.schedule.to_schedule()?,
            len: self.len,
            prior: self.prior,
            time: self.time,
            mode: self.mode.into(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn check_trials(&self, min: u64) -> Result<(), ConfigError> {
        if self.trials < min {
            return Err(ConfigError::field("trials", format!("at least {min} trials are required")));
        }
        Ok(())
    }
}
