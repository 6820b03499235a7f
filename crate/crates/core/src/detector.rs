//! The probabilistic halting device.
//!
//! A device with sensitivity `ε` watches `⟨Qᵗx, x⟩` on a random perturbed
//! walk `x` and clicks once the growth reaches `ε‖x‖₁²`. A click proves a
//! false stack exists. If no click happened by the computable time `T`,
//! all stacks are true with a posterior probability bounded from below.

use crate::coins::{check_exponent, dyadic, growth, quadratic_excess, scaled_growth, CoinSequence};
use crate::error::{Error, Result};
use crate::halting::{encode_halting_as_coins, TuringMachine};
use crate::schedule::WalkSchedule;
use crate::stats::{Proportion, TrialExecutor};
use crate::vector::{Mode, TestVector};
use crate::walks::{trial_rng, WalkSampler};

/// Default truncation length of coin sequences and walks.
pub const DEFAULT_LEN: usize = 256;

/// Parameters of one device experiment.
///
/// `ε = 2^-epsilon_exp`, `θ = 2^-theta_exp`, `γ = 2^-gamma_exp`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceConfig {
    pub epsilon_exp: u32,
    pub theta_exp: u32,
    pub gamma_exp: u32,
    pub schedule: WalkSchedule,
    pub len: usize,
    /// A-priori probability that every stack is true.
    pub prior: f64,
    /// Explicit time budget; derived from `θ` when absent.
    pub time: Option<f64>,
    pub mode: Mode,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        DeviceConfig {
            epsilon_exp: 6,
            theta_exp: 6,
            gamma_exp: 1,
            schedule: WalkSchedule::Dyadic,
            len: DEFAULT_LEN,
            prior: 0.5,
            time: None,
            mode: Mode::Real,
        }
    }
}

impl DeviceConfig {
    pub fn validate(&self) -> Result<()> {
        check_exponent(self.epsilon_exp, "epsilon")?;
        check_exponent(self.theta_exp, "theta")?;
        check_exponent(self.gamma_exp, "gamma")?;
        self.schedule.validate()?;
        if self.len == 0 {
            return Err(Error::param("N", "truncation length must be positive"));
        }
        if !(self.prior > 0.0 && self.prior < 1.0) {
            return Err(Error::param("prior", "must lie strictly between 0 and 1"));
        }
        if let Some(t) = self.time {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(Error::param("time", "must be finite and nonnegative"));
            }
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        dyadic(self.epsilon_exp)
    }

    pub fn theta(&self) -> f64 {
        dyadic(self.theta_exp)
    }

    pub fn gamma(&self) -> f64 {
        dyadic(self.gamma_exp)
    }

    /// Target measure bound `η = θ·P/(1-P)`. It makes the posterior bound
    /// reach `1 - θ` exactly when the measure bound reaches `η`.
    pub fn eta(&self) -> f64 {
        self.theta() * self.prior / (1.0 - self.prior)
    }

    /// `∏_{m<=N} Δ_m` over the truncation actually sampled.
    pub fn prod_delta(&self) -> f64 {
        self.schedule.partial_product(self.len)
    }

    /// The explicit time, or the least time guaranteeing the `η` bound.
    pub fn time_budget(&self) -> Result<f64> {
        self.validate()?;
        match self.time {
            Some(t) => Ok(t),
            None => Ok(min_time_bound(self.epsilon(), self.eta(), self.gamma(), self.prod_delta())?.time),
        }
    }

    pub fn sampler(&self, seed: u64) -> Result<WalkSampler> {
        WalkSampler::new(self.schedule.clone(), self.mode, self.len, seed)
    }
}

/// `⟨Qᵗx, x⟩ >= ‖x‖² + ε‖x‖₁²`, evaluated as `Σ(q_i^t - 1)|x_i|² >= ε‖x‖₁²`
/// so that all-true stacks never click through rounding.
pub fn device_clicks(seq: &CoinSequence, x: &TestVector, t: f64, cfg: &DeviceConfig) -> Result<bool> {
    let sobolev = crate::vector::sobolev_weighted(x, &cfg.schedule)?;
    clicks_with_norm(seq, x, t, cfg.epsilon(), sobolev)
}

fn clicks_with_norm(seq: &CoinSequence, x: &TestVector, t: f64, epsilon: f64, sobolev: f64) -> Result<bool> {
    Ok(quadratic_excess(seq, x, t)? >= epsilon * sobolev)
}

/// Result of [`min_time_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeBound {
    /// Smallest double for which the measure bound evaluates to `<= η`.
    pub time: f64,
    /// Least integer strictly above `log_{1+γ}(ε/(η²∏Δ) + 1 + ε)`.
    pub steps: u64,
}

/// Least `T > log_{1+γ}(ε/(η²·∏Δ) + 1 + ε)`.
pub fn min_time_bound(epsilon: f64, eta: f64, gamma: f64, prod_delta: f64) -> Result<TimeBound> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::param("epsilon", "must be positive"));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param("eta", "must lie strictly between 0 and 1"));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::param("gamma", "must be positive"));
    }
    if !(prod_delta > 0.0 && prod_delta <= 1.0) {
        return Err(Error::param("prod_delta", "must lie in (0, 1]"));
    }
    let threshold = libm::log1p(epsilon / (eta * eta * prod_delta) + epsilon) / libm::log1p(gamma);
    let mut time = threshold;
    // Step up through adjacent doubles until the evaluated bound honours η.
    for _ in 0..64 {
        match indistinguishable_bound(epsilon, time, gamma, prod_delta) {
            Bound::Value(v) if v <= eta => break,
            _ => time = next_up(time),
        }
    }
    let floor = libm::floor(threshold);
    let steps = if floor == threshold { floor + 1.0 } else { libm::ceil(threshold) };
    Ok(TimeBound { time, steps: steps as u64 })
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

/// An analytic bound, or a marker that it does not yet say anything.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Value(f64),
    NotYetInformative,
}

impl Bound {
    pub fn value(self) -> Option<f64> {
        match self {
            Bound::Value(v) => Some(v),
            Bound::NotYetInformative => None,
        }
    }
}

/// `W̃(F_{ε,T}) <= sqrt(ε / (((1+γ)^T - 1 - ε)·∏Δ))`.
pub fn indistinguishable_bound(epsilon: f64, t: f64, gamma: f64, prod_delta: f64) -> Bound {
    let margin = growth(gamma, t) - epsilon;
    if !(margin > 0.0) || !(prod_delta > 0.0) {
        return Bound::NotYetInformative;
    }
    let v = libm::sqrt(epsilon / margin / prod_delta);
    if v > 1.0 {
        Bound::NotYetInformative
    } else {
        Bound::Value(v)
    }
}

/// Which stacks the indistinguishable set is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackSelector {
    /// The known false stack (1-based).
    Fixed(usize),
    /// Some stack `j <= N`.
    Any,
}

/// `((1+γ)^T - 1)|x_j|² < ε‖x‖₁²`, at a fixed `j` or for some `j`.
pub fn in_indistinguishable_set(
    x: &TestVector,
    epsilon: f64,
    t: f64,
    gamma: f64,
    selector: StackSelector,
    schedule: &WalkSchedule,
) -> Result<bool> {
    if !(t >= 0.0) {
        return Err(Error::param("t", "must be nonnegative"));
    }
    let sobolev = crate::vector::sobolev_weighted(x, schedule)?;
    membership(x, epsilon * sobolev, growth(gamma, t), selector)
}

fn membership(x: &TestVector, threshold: f64, grow: f64, selector: StackSelector) -> Result<bool> {
    match selector {
        StackSelector::Fixed(j) => {
            if j == 0 || j > x.len() {
                return Err(Error::IndexOutOfRange { index: j, len: x.len() });
            }
            Ok(scaled_growth(grow, x.entries()[j - 1].norm_sqr()) < threshold)
        }
        // the union is decided by the smallest |x_j|
        StackSelector::Any => Ok(x.entries().iter().any(|v| scaled_growth(grow, v.norm_sqr()) < threshold)),
    }
}

/// Fraction of perturbed walks inside `F_{ε,T}` at the configured time.
pub fn estimate_indistinguishable_measure<E: TrialExecutor>(
    cfg: &DeviceConfig,
    selector: StackSelector,
    trials: u64,
    seed: u64,
    exec: &E,
) -> Result<Proportion> {
    if trials < 1000 {
        return Err(Error::param("trials", "at least 1000 trials are required"));
    }
    if let StackSelector::Fixed(j) = selector {
        if j == 0 || j > cfg.len {
            return Err(Error::IndexOutOfRange { index: j, len: cfg.len });
        }
    }
    let t = cfg.time_budget()?;
    let sampler = cfg.sampler(seed)?;
    let (eps, grow) = (cfg.epsilon(), growth(cfg.gamma(), t));
    let hits = exec.count_trials(trials, |trial| {
        let x = sampler.sample(trial);
        membership(&x, eps * sampler.sobolev_weighted(&x), grow, selector).expect("selector checked")
    });
    Ok(Proportion::new(hits, trials))
}

/// Lower bound on `P(all true | no click at T)`:
/// `1 - (1-P)/P · sqrt(ε) / (sqrt((1+γ)^T - 1 - ε)·sqrt(∏Δ))`, clamped at 0.
pub fn posterior_no_false(prior: f64, epsilon: f64, gamma: f64, t: f64, prod_delta: f64) -> Result<Bound> {
    if !(prior > 0.0 && prior <= 1.0) {
        return Err(Error::param("prior", "must lie in (0, 1]"));
    }
    if prior == 1.0 {
        return Ok(Bound::Value(1.0));
    }
    let margin = growth(gamma, t) - epsilon;
    if !(margin > 0.0) || !(prod_delta > 0.0) {
        return Ok(Bound::NotYetInformative);
    }
    let odds = (1.0 - prior) / prior;
    let v = 1.0 - odds * libm::sqrt(epsilon) / (libm::sqrt(margin) * libm::sqrt(prod_delta));
    Ok(Bound::Value(v.max(0.0)))
}

/// Counts from a Bayesian simulation of the device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesTally {
    pub trials: u64,
    pub non_clicks: u64,
    pub non_clicks_all_true: u64,
}

impl BayesTally {
    /// Empirical `P(all true | no click)` with its binomial standard error.
    pub fn posterior(&self) -> Option<(f64, f64)> {
        if self.non_clicks == 0 {
            return None;
        }
        let n = self.non_clicks as f64;
        let p = self.non_clicks_all_true as f64 / n;
        Some((p, libm::sqrt(p * (1.0 - p) / n)))
    }
}

/// Draws "all true" with probability `prior`, else a false stack at `stack`,
/// then runs the device once at the configured time.
pub fn simulate_posterior<E: TrialExecutor>(
    cfg: &DeviceConfig,
    stack: usize,
    trials: u64,
    seed: u64,
    exec: &E,
) -> Result<BayesTally> {
    let t = cfg.time_budget()?;
    let sampler = cfg.sampler(seed)?;
    let all_true = CoinSequence::all_true(cfg.len)?;
    let false_seq = CoinSequence::false_at(cfg.len, stack, cfg.gamma_exp)?;
    let eps = cfg.epsilon();
    let outcomes = exec.map_trials(trials, |trial| {
        let mut rng = trial_rng(seed, trial);
        let x = sampler.sample_with(&mut rng);
        let is_true = rand::Rng::random::<f64>(&mut rng) < cfg.prior;
        let seq = if is_true { &all_true } else { &false_seq };
        let click = clicks_with_norm(seq, &x, t, eps, sampler.sobolev_weighted(&x)).expect("lengths agree");
        (is_true, click)
    });
    let non_clicks = outcomes.iter().filter(|(_, c)| !c).count() as u64;
    let non_clicks_all_true = outcomes.iter().filter(|(a, c)| *a && !c).count() as u64;
    Ok(BayesTally { trials, non_clicks, non_clicks_all_true })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// The device clicked at time `time`; a false stack certainly exists.
    FalseCoinsDetected { time: f64 },
    /// No click by the time budget.
    ProbablyAllTrue { posterior: Bound },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub trials_used: u64,
    pub seed: u64,
    pub trial: u64,
}

/// One single-shot run of the device on the coins encoding `machine(input)`.
pub fn run_halting_experiment(
    machine: &TuringMachine,
    input: u64,
    exponent: u32,
    cfg: &DeviceConfig,
    seed: u64,
    trial: u64,
) -> Result<Verdict> {
    let prepared = Prepared::new(machine, input, exponent, cfg, seed)?;
    Ok(prepared.verdict(trial))
}

struct Prepared {
    seq: CoinSequence,
    sampler: WalkSampler,
    time: f64,
    epsilon: f64,
    posterior: Bound,
    seed: u64,
}

impl Prepared {
    fn new(machine: &TuringMachine, input: u64, exponent: u32, cfg: &DeviceConfig, seed: u64) -> Result<Self> {
        let cfg = DeviceConfig { gamma_exp: exponent, ..cfg.clone() };
        let time = cfg.time_budget()?;
        let seq = encode_halting_as_coins(machine, input, exponent)?.truncate(cfg.len)?;
        let posterior = posterior_no_false(cfg.prior, cfg.epsilon(), cfg.gamma(), time, cfg.prod_delta())?;
        Ok(Prepared { seq, sampler: cfg.sampler(seed)?, time, epsilon: cfg.epsilon(), posterior, seed })
    }

    fn clicks(&self, trial: u64) -> bool {
        let x = self.sampler.sample(trial);
        clicks_with_norm(&self.seq, &x, self.time, self.epsilon, self.sampler.sobolev_weighted(&x))
            .expect("sequence and walk share the truncation")
    }

    fn verdict(&self, trial: u64) -> Verdict {
        let outcome = if self.clicks(trial) {
            Outcome::FalseCoinsDetected { time: self.time }
        } else {
            Outcome::ProbablyAllTrue { posterior: self.posterior }
        };
        Verdict { outcome, trials_used: 1, seed: self.seed, trial }
    }
}

/// Aggregate of many single-shot halting experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaltingBatch {
    pub time: f64,
    pub halted_within: Option<usize>,
    /// Fraction of trials that did not click.
    pub non_detection: Proportion,
    pub clicks: u64,
    pub analytic_bound: Bound,
    pub posterior: Bound,
    pub seed: u64,
}

pub fn run_halting_batch<E: TrialExecutor>(
    machine: &TuringMachine,
    input: u64,
    exponent: u32,
    cfg: &DeviceConfig,
    trials: u64,
    seed: u64,
    exec: &E,
) -> Result<HaltingBatch> {
    if trials == 0 {
        return Err(Error::param("trials", "must be positive"));
    }
    let p = Prepared::new(machine, input, exponent, cfg, seed)?;
    let clicks = exec.count_trials(trials, |t| p.clicks(t));
    let analytic_bound = indistinguishable_bound(p.epsilon, p.time, dyadic(exponent), cfg.prod_delta());
    Ok(HaltingBatch {
        time: p.time,
        halted_within: p.seq.false_stack().map(|f| f.index),
        non_detection: Proportion::new(trials - clicks, trials),
        clicks,
        analytic_bound,
        posterior: p.posterior,
        seed,
    })
}
