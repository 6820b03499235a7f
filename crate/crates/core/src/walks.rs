//! Discrete Wiener walks started at `x_0 = 0`.
//!
//! A walk with steps `Δ_m` has independent Gaussian increments with density
//! proportional to `exp(-|ξ|²/Δ_m)`: variance `Δ_m/2` on the real line, or
//! `Δ_m/2` per component in the complex plane. Unit steps give the
//! non-perturbed walk `W`, steps from a perturbed schedule give `W̃`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::quadrature::composite;
use crate::schedule::WalkSchedule;
use crate::stats::{Proportion, TrialExecutor};
use crate::vector::{weighted_sum_with, Mode, TestVector};

/// The random stream for one trial. Each trial reads its own ChaCha stream
/// keyed by `(master_seed, trial)`, so draws do not depend on which other
/// trials ran, or in what order.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSampler {
    schedule: WalkSchedule,
    mode: Mode,
    len: usize,
    master_seed: u64,
    scales: Vec<f64>,
    weights: Vec<f64>,
}

impl WalkSampler {
    pub fn new(schedule: WalkSchedule, mode: Mode, len: usize, master_seed: u64) -> Result<Self> {
        schedule.validate()?;
        if len == 0 {
            return Err(Error::param("N", "walks need at least one step"));
        }
        let scales = schedule.steps(len).into_iter().map(|d| libm::sqrt(0.5 * d)).collect();
        let weights = schedule.weights(len);
        Ok(WalkSampler { schedule, mode, len, master_seed, scales, weights })
    }

    pub fn schedule(&self) -> &WalkSchedule {
        &self.schedule
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Sobolev weights `(1 - Δ_m)/Δ_m` of the sampler's schedule.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `‖x‖₁²` under the sampler's schedule.
    pub fn sobolev_weighted(&self, x: &TestVector) -> f64 {
        weighted_sum_with(x, &self.weights)
    }

    pub fn sample(&self, trial: u64) -> TestVector {
        self.sample_with(&mut trial_rng(self.master_seed, trial))
    }

    /// Draws a walk from a caller-owned stream, for trials that need more
    /// randomness than the walk itself.
    pub fn sample_with(&self, rng: &mut ChaCha8Rng) -> TestVector {
        let mut acc = Complex64::new(0.0, 0.0);
        let entries = self
            .scales
            .iter()
            .map(|&s| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = match self.mode {
                    Mode::Real => 0.0,
                    Mode::Complex => StandardNormal.sample(rng),
                };
                acc += Complex64::new(s * re, s * im);
                acc
            })
            .collect();
        TestVector::new(self.mode, entries).expect("gaussian draws are finite")
    }
}

/// `ln(dW̃/dW)(x)` over the first `N` increments.
pub fn log_rn_density(x: &TestVector, schedule: &WalkSchedule) -> Result<f64> {
    schedule.validate()?;
    let n = x.len();
    let log_norm = match x.mode() {
        Mode::Real => -0.5 * schedule.log_partial_product(n),
        Mode::Complex => -schedule.log_partial_product(n),
    };
    Ok(log_norm - crate::vector::weighted_sum(x, schedule))
}

/// Radon–Nikodym density of the perturbed walk with respect to the
/// non-perturbed one: `exp(-‖x‖₁²) / ∏√Δ_l` on the line, `/ ∏Δ_l` in the plane.
pub fn rn_density(x: &TestVector, schedule: &WalkSchedule) -> Result<f64> {
    log_rn_density(x, schedule).map(libm::exp)
}

/// `max_{0<s<=t} |x_s|² < C·t` for every `t <= N`.
pub fn is_quasi_loop(x: &TestVector, c: f64) -> Result<bool> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::param("C", "must be positive and finite"));
    }
    let mut running_max = 0.0f64;
    for (t, v) in x.entries().iter().enumerate() {
        running_max = running_max.max(v.norm_sqr());
        if running_max >= c * (t + 1) as f64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A cylinder-set constraint `x_{time} ∈ disc(center, radius)`; an open
/// interval in real mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub time: usize,
    pub center: Complex64,
    pub radius: f64,
}

impl Gate {
    pub fn new(time: usize, center: Complex64, radius: f64) -> Self {
        Gate { time, center, radius }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm_sqr() < self.radius * self.radius
    }
}

pub const MAX_GATES: usize = 3;

/// Absolute tolerance of the cylinder quadrature.
pub const CYLINDER_TOLERANCE: f64 = 1e-6;

fn check_gates(mode: Mode, gates: &[Gate]) -> Result<()> {
    if gates.is_empty() {
        return Err(Error::param("gates", "at least one gate is required"));
    }
    if gates.len() > MAX_GATES {
        return Err(Error::Unsupported("cylinder quadrature handles at most three gates"));
    }
    let mut prev = 0;
    for g in gates {
        if g.time <= prev {
            return Err(Error::param("gates", "gate times must be positive and strictly increasing"));
        }
        if !(g.radius > 0.0) || !g.center.re.is_finite() || !g.center.im.is_finite() {
            return Err(Error::param("gates", "gates need a finite center and positive radius"));
        }
        if mode == Mode::Real && g.center.im != 0.0 {
            return Err(Error::param("gates", "real-mode gates must have real centers"));
        }
        prev = g.time;
    }
    Ok(())
}

/// Quadrature value of a cylinder measure with its last refinement change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderQuadrature {
    pub probability: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// `W(C)` for the cylinder set cut out by `gates`, by nested Gauss–Legendre
/// quadrature of the Green-function convolution. The rule is refined by
/// panel doubling until two successive values agree to
/// [`CYLINDER_TOLERANCE`] or the evaluation budget runs out.
pub fn cylinder_probability(schedule: &WalkSchedule, mode: Mode, gates: &[Gate]) -> Result<CylinderQuadrature> {
    schedule.validate()?;
    check_gates(mode, gates)?;

    let mut variances = Vec::with_capacity(gates.len());
    let mut prev = 0;
    for g in gates {
        variances.push((prev + 1..=g.time).map(|m| schedule.delta(m)).sum::<f64>());
        prev = g.time;
    }

    const ORDER: usize = 8;
    const BUDGET: f64 = 8.0e6;
    let points_per_gate = |panels: usize| match mode {
        Mode::Real => (ORDER * panels) as f64,
        Mode::Complex => (ORDER * panels * 16 * panels) as f64,
    };

    let mut panels = 1;
    let mut previous: Option<f64> = None;
    let mut last_change = f64::INFINITY;
    loop {
        let rules: Vec<Vec<(Complex64, f64)>> = gates.iter().map(|g| gate_rule(mode, g, panels)).collect();
        let value = nested(&rules, &variances, mode, 0, Complex64::new(0.0, 0.0));
        if let Some(p) = previous {
            last_change = (value - p).abs();
            if last_change < 0.1 * CYLINDER_TOLERANCE {
                return Ok(CylinderQuadrature { probability: value, error_estimate: last_change, converged: true });
            }
        }
        let next_cost = libm::pow(points_per_gate(2 * panels), gates.len() as f64);
        if next_cost > BUDGET {
            return Ok(CylinderQuadrature {
                probability: value,
                error_estimate: last_change,
                converged: last_change < CYLINDER_TOLERANCE,
            });
        }
        previous = Some(value);
        panels *= 2;
    }
}

fn gate_rule(mode: Mode, gate: &Gate, panels: usize) -> Vec<(Complex64, f64)> {
    match mode {
        Mode::Real => composite(gate.center.re - gate.radius, gate.center.re + gate.radius, panels, 8)
            .into_iter()
            .map(|(x, w)| (Complex64::new(x, 0.0), w))
            .collect(),
        Mode::Complex => {
            let radial = composite(0.0, gate.radius, panels, 8);
            let angles = 16 * panels;
            let dphi = 2.0 * PI / angles as f64;
            let mut out = Vec::with_capacity(radial.len() * angles);
            for (rho, w) in radial {
                for k in 0..angles {
                    let phi = (k as f64 + 0.5) * dphi;
                    let z = gate.center + Complex64::new(rho * libm::cos(phi), rho * libm::sin(phi));
                    out.push((z, w * rho * dphi));
                }
            }
            out
        }
    }
}

fn green(mode: Mode, dz: Complex64, variance: f64) -> f64 {
    let e = libm::exp(-dz.norm_sqr() / variance);
    match mode {
        Mode::Real => e / libm::sqrt(PI * variance),
        Mode::Complex => e / (PI * variance),
    }
}

fn nested(rules: &[Vec<(Complex64, f64)>], variances: &[f64], mode: Mode, level: usize, from: Complex64) -> f64 {
    if level == rules.len() {
        return 1.0;
    }
    rules[level]
        .iter()
        .map(|&(z, w)| w * green(mode, z - from, variances[level]) * nested(rules, variances, mode, level + 1, z))
        .sum()
}

/// Monte Carlo estimate of the same cylinder measure from sampled walks.
pub fn cylinder_probability_mc<E: TrialExecutor>(
    schedule: &WalkSchedule,
    mode: Mode,
    gates: &[Gate],
    trials: u64,
    seed: u64,
    exec: &E,
) -> Result<Proportion> {
    check_gates(mode, gates)?;
    if trials == 0 {
        return Err(Error::param("trials", "must be positive"));
    }
    let len = gates.last().map(|g| g.time).unwrap_or(1);
    let sampler = WalkSampler::new(schedule.clone(), mode, len, seed)?;
    let hits = exec.count_trials(trials, |t| {
        let x = sampler.sample(t);
        gates.iter().all(|g| g.contains(x.get(g.time).expect("walk covers every gate")))
    });
    Ok(Proportion::new(hits, trials))
}
