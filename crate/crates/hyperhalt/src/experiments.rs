//! Experiment runners behind the subcommands. Each is a pure function of
//! its resolved [`RunConfig`]; the executor only changes how fast it runs.

use hyperhalt_core::coins::{classical_merchant_detect, classical_merchant_weigh, merchant_config};
use hyperhalt_core::detector::min_time_bound;
use hyperhalt_core::scattering::{estimate_brownian_measure, s_matrix, BetaChannel, DotState, InnerDot};
use hyperhalt_core::{
    estimate_indistinguishable_measure, indistinguishable_bound, posterior_no_false, run_halting_batch, tm_run,
    RunStatus, StackSelector, TrialExecutor,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{gamma_exponent, ConfigError, RunConfig, StateSpec};
use crate::machine_file::{self, MachineFileError};
use crate::report::{ExperimentRecord, Table};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Machine(#[from] MachineFileError),
}

impl From<hyperhalt_core::Error> for ExperimentError {
    fn from(e: hyperhalt_core::Error) -> Self {
        ExperimentError::Config(e.into())
    }
}

type Result<T> = std::result::Result<T, ExperimentError>;

fn seed_of(cfg: &RunConfig) -> Result<u64> {
    cfg.seed.ok_or_else(|| ConfigError::field("seed", "unresolved; call RunConfig::resolve_seed first").into())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MerchantReport {
    pub false_stack: Option<usize>,
    pub weight: f64,
    pub detected: Option<usize>,
}

pub fn merchant(false_stack: Option<usize>) -> Result<MerchantReport> {
    let config = merchant_config(false_stack)?;
    let weight = classical_merchant_weigh(&config)?;
    let detected = classical_merchant_detect(weight)?;
    Ok(MerchantReport { false_stack, weight, detected })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TmRunReport {
    pub machine: String,
    pub input: u64,
    pub budget: u64,
    pub halted: bool,
    pub halt_step: Option<u64>,
}

pub fn tm_run_report(cfg: &RunConfig) -> Result<TmRunReport> {
    let name = cfg.machine.as_deref().ok_or_else(|| ConfigError::field("machine", "a corpus name or file is required"))?;
    let machine = machine_file::resolve(name)?;
    let trace = tm_run(&machine, cfg.input, cfg.budget)?;
    Ok(TmRunReport {
        machine: if machine.name().is_empty() { name.to_string() } else { machine.name().to_string() },
        input: cfg.input,
        budget: cfg.budget,
        halted: matches!(trace.status, RunStatus::HaltedAt(_)),
        halt_step: trace.halt_step(),
    })
}

/// Measure of the indistinguishable set at the fixed false stack, at the
/// configured time (or the least time meeting the `η` target).
pub fn device<E: TrialExecutor>(cfg: &RunConfig, exec: &E) -> Result<ExperimentRecord> {
    cfg.check_trials(1000)?;
    let seed = seed_of(cfg)?;
    let dev = cfg.device()?;
    let t = dev.time_budget()?;
    let steps = match cfg.time {
        Some(_) => None,
        None => Some(min_time_bound(dev.epsilon(), dev.eta(), dev.gamma(), dev.prod_delta())?.steps),
    };
    let inside = estimate_indistinguishable_measure(&dev, StackSelector::Fixed(cfg.stack), cfg.trials, seed, exec)?;
    let analytic = indistinguishable_bound(dev.epsilon(), t, dev.gamma(), dev.prod_delta());
    let posterior = posterior_no_false(dev.prior, dev.epsilon(), dev.gamma(), t, dev.prod_delta())?;
    Ok(ExperimentRecord::new("device", cfg, seed, &inside).with_bounds(analytic, Some(posterior)).with_details(json!({
        "time": t,
        "steps": steps,
        "stack": cfg.stack,
        "epsilon": dev.epsilon(),
        "theta": dev.theta(),
        "eta": dev.eta(),
        "prod_delta": dev.prod_delta(),
        "limit_product": dev.schedule.limit_product(),
    })))
}

/// [`device`] at each time of `cfg.times`, with the matching CSV table.
pub fn measure<E: TrialExecutor>(cfg: &RunConfig, exec: &E) -> Result<(Vec<ExperimentRecord>, Table)> {
    if cfg.times.is_empty() {
        return Err(ConfigError::field("times", "at least one time is required").into());
    }
    let mut table = Table::new(vec!["T", "estimate", "ci_low", "ci_high", "bound"]);
    let mut records = Vec::with_capacity(cfg.times.len());
    for &t in &cfg.times {
        let mut at = cfg.clone();
        at.time = Some(t);
        let mut r = device(&at, exec)?;
        r.command = "measure".to_string();
        // echo the sweep, not the single time it was expanded into
        r.config = cfg.clone();
        table.push(vec![t, r.empirical_fraction, r.ci_low, r.ci_high, r.analytic_bound.unwrap_or(f64::NAN)]);
        records.push(r);
    }
    Ok((records, table))
}

fn channel(cfg: &RunConfig) -> Result<BetaChannel> {
    Ok(BetaChannel::real(&cfg.beta).map_err(ConfigError::from)?)
}

/// Non-click fraction of perturbed walks against the Brownian bound for each
/// `ε = 2^-k`, `k` in `cfg.epsilons`.
pub fn brownian<E: TrialExecutor>(cfg: &RunConfig, exec: &E) -> Result<(Vec<ExperimentRecord>, Table)> {
    cfg.check_trials(1000)?;
    if cfg.epsilons.is_empty() {
        return Err(ConfigError::field("epsilons", "at least one exponent is required").into());
    }
    let seed = seed_of(cfg)?;
    let ch = channel(cfg)?;
    let sched = cfg.schedule.to_schedule()?;
    let mut table = Table::new(vec!["epsilon", "estimate", "ci_low", "ci_high", "bound"]);
    let mut records = Vec::new();
    for &k in &cfg.epsilons {
        if !(1..=hyperhalt_core::coins::MAX_WEIGHT_EXPONENT).contains(&k) {
            return Err(ConfigError::field("epsilons", "exponents must lie in 1..=52").into());
        }
        let eps = hyperhalt_core::coins::dyadic(k);
        let est = estimate_brownian_measure(&ch, eps, &sched, cfg.len, cfg.trials, seed, exec)?;
        let r = ExperimentRecord::new("brownian", cfg, seed, &est.non_clicks).with_bounds(est.bound, None).with_details(
            json!({
                "epsilon_exp": k,
                "epsilon": eps,
                "beta_norm_sq": ch.norm_sq(),
                "b_norm_sq": ch.tail_norm_sq(),
                "moment_sum": ch.moment_sum(),
                "bound_holds": est.bound_holds(),
            }),
        );
        table.push(vec![eps, r.empirical_fraction, r.ci_low, r.ci_high, r.analytic_bound.unwrap_or(f64::NAN)]);
        records.push(r);
    }
    Ok((records, table))
}

/// Batch of single-shot runs of the device on the coins encoding a machine.
pub fn halting_experiment<E: TrialExecutor>(cfg: &RunConfig, exec: &E) -> Result<ExperimentRecord> {
    let seed = seed_of(cfg)?;
    let name = cfg.machine.as_deref().ok_or_else(|| ConfigError::field("machine", "a corpus name or file is required"))?;
    let machine = machine_file::resolve(name)?;
    let dev = cfg.device()?;
    if cfg.trials == 0 {
        return Err(ConfigError::field("trials", "must be positive").into());
    }
    let batch = run_halting_batch(&machine, cfg.input, gamma_exponent(cfg.gamma)?, &dev, cfg.trials, seed, exec)?;
    Ok(ExperimentRecord::new("halting-experiment", cfg, seed, &batch.non_detection)
        .with_bounds(batch.analytic_bound, Some(batch.posterior))
        .with_details(json!({
            "machine": if machine.name().is_empty() { name } else { machine.name() },
            "input": cfg.input,
            "time": batch.time,
            "halted_within": batch.halted_within,
            "eta": dev.eta(),
        })))
}

/// Scalar coefficients and unitarity defect of `S(p)` on a uniform grid.
pub fn scatter_scan(cfg: &RunConfig) -> Result<Table> {
    if !(cfg.p_min > 0.0 && cfg.p_max >= cfg.p_min) || !cfg.p_max.is_finite() {
        return Err(ConfigError::field("p", "need 0 < p_min <= p_max").into());
    }
    if cfg.points == 0 {
        return Err(ConfigError::field("points", "must be positive").into());
    }
    if cfg.levels == 0 {
        return Err(ConfigError::field("levels", "must be positive").into());
    }
    let state = match cfg.state {
        StateSpec::Vacant => DotState::Vacant,
        StateSpec::Occupied => DotState::Occupied,
    };
    let dot = InnerDot::ladder(cfg.levels).in_state(state);
    let ch = channel(cfg)?;
    let ch = if ch.is_off() { ch } else { ch.with_strength(cfg.beta_strength).map_err(ConfigError::from)? };
    let mut table = Table::new(vec!["p", "lambda", "re_t", "im_t", "re_r", "im_r", "unitarity_defect"]);
    for i in 0..cfg.points {
        let p = if cfg.points == 1 {
            cfg.p_min
        } else {
            cfg.p_min + (cfg.p_max - cfg.p_min) * i as f64 / (cfg.points - 1) as f64
        };
        let s = s_matrix(&dot, &ch, p)?;
        table.push(vec![
            p,
            p * p,
            s.transmission.re,
            s.transmission.im,
            s.reflection.re,
            s.reflection.im,
            s.unitarity_defect(),
        ]);
    }
    Ok(table)
}
