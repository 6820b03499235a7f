use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::smatrix::BetaChannel;
use crate::detector::Bound;
use crate::error::{Error, Result};
use crate::schedule::WalkSchedule;
use crate::stats::{MeanEstimate, Proportion, TrialExecutor};
use crate::vector::{weighted_sum, Mode, TestVector};
use crate::walks::{trial_rng, WalkSampler};

/// Largest dimension accepted by [`gaussian_det_identity`].
pub const MAX_DET_DIM: usize = 32;
/// Largest dimension accepted by [`gaussian_integral_mc`].
pub const MAX_MC_DIM: usize = 4;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::param("epsilon", "must be positive and finite"));
    }
    Ok(())
}

/// `|⟨x, β⟩|² / |β|²`, equal to `|𝒫_β (x, x)/√2|²` in the doubled space.
pub fn brownian_projection_sq(x: &TestVector, channel: &BetaChannel) -> Result<f64> {
    if channel.is_off() {
        return Err(Error::param("beta", "a switched-off channel has no direction"));
    }
    if channel.dim() > x.len() {
        return Err(Error::LengthMismatch { expected: x.len(), found: channel.dim() });
    }
    let inner: Complex64 = x.entries().iter().zip(channel.components()).map(|(a, b)| a * b.conj()).sum();
    Ok(inner.norm_sqr() / channel.norm_sq())
}

/// Strict click test `|𝒫_β x|² > ε‖x‖₁²`; ties do not click.
pub fn brownian_click(x: &TestVector, channel: &BetaChannel, epsilon: f64, schedule: &WalkSchedule) -> Result<bool> {
    check_epsilon(epsilon)?;
    schedule.validate()?;
    let proj = brownian_projection_sq(x, channel)?;
    Ok(proj > epsilon * weighted_sum(x, schedule))
}

/// `√ε|β| / (∏_{l≤N} √Δ_l · √(ε|β|² + |b|²))`.
pub fn brownian_bound(channel: &BetaChannel, epsilon: f64, schedule: &WalkSchedule, len: usize) -> Result<f64> {
    check_epsilon(epsilon)?;
    schedule.validate()?;
    if channel.is_off() {
        return Err(Error::param("beta", "the bound needs a nonzero channel"));
    }
    if len == 0 {
        return Err(Error::param("N", "must be positive"));
    }
    let strength = channel.norm_sq();
    let root_prod = libm::sqrt(schedule.partial_product(len));
    Ok(libm::sqrt(epsilon * strength) / (root_prod * libm::sqrt(epsilon * strength + channel.tail_norm_sq())))
}

/// Dense and closed-form values of `det(I + c·P_b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

fn unit(b: &[f64]) -> Result<Vec<f64>> {
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("b", "components must be finite"));
    }
    let norm = libm::sqrt(b.iter().map(|v| v * v).sum());
    if norm == 0.0 {
        return Err(Error::param("b", "must be nonzero"));
    }
    Ok(b.iter().map(|v| v / norm).collect())
}

fn check_c(c: f64) -> Result<()> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::param("c", "must be finite and nonnegative"));
    }
    Ok(())
}

/// Compares the LU determinant of `I + c·b̂b̂ᵀ` with `1 + c`.
pub fn gaussian_det_identity(b: &[f64], c: f64) -> Result<DetIdentity> {
    check_c(c)?;
    if b.len() > MAX_DET_DIM {
        return Err(Error::param("N", "at most 32 dimensions"));
    }
    let u = unit(b)?;
    let n = u.len();
    let a = DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } + c * u[i] * u[j]);
    let lhs = a.determinant();
    let rhs = 1.0 + c;
    Ok(DetIdentity { lhs, rhs, defect: (lhs - rhs).abs() })
}

/// Monte Carlo value of `π^{-N/2} ∫ e^{-⟨ξ, (I + c·P_b) ξ⟩} dξ`, which should
/// equal `1/√(1 + c)`. Draws `ξ ~ N(0, I/2)` and averages `e^{-c⟨ξ, b̂⟩²}`.
pub fn gaussian_integral_mc<E: TrialExecutor>(
    b: &[f64],
    c: f64,
    samples: u64,
    seed: u64,
    exec: &E,
) -> Result<MeanEstimate> {
    check_c(c)?;
    if b.len() > MAX_MC_DIM {
        return Err(Error::param("N", "at most 4 dimensions"));
    }
    if samples < 2 {
        return Err(Error::param("samples", "at least 2 samples are required"));
    }
    let u = unit(b)?;
    let scale = libm::sqrt(0.5);
    let values = exec.map_trials(samples, |trial| {
        let mut rng = trial_rng(seed, trial);
        let dot: f64 = u
            .iter()
            .map(|&ui| {
                let z: f64 = StandardNormal.sample(&mut rng);
                ui * scale * z
            })
            .sum();
        libm::exp(-c * dot * dot)
    });
    Ok(MeanEstimate::from_samples(&values))
}

/// Fraction of perturbed Real-mode walks that do not click, with the
/// analytic bound it should stay under.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianEstimate {
    pub epsilon: f64,
    pub len: usize,
    pub non_clicks: Proportion,
    /// [`Bound::NotYetInformative`] when the formula exceeds 1.
    pub bound: Bound,
}

impl BrownianEstimate {
    /// Upper confidence limit at or below the bound. An uninformative bound
    /// holds trivially.
    pub fn bound_holds(&self) -> bool {
        match self.bound {
            Bound::Value(b) => self.non_clicks.ci_high <= b,
            Bound::NotYetInformative => true,
        }
    }
}

pub fn estimate_brownian_measure<E: TrialExecutor>(
    channel: &BetaChannel,
    epsilon: f64,
    schedule: &WalkSchedule,
    len: usize,
    trials: u64,
    seed: u64,
    exec: &E,
) -> Result<BrownianEstimate> {
    if trials < 1000 {
        return Err(Error::param("trials", "at least 1000 trials are required"));
    }
    let value = brownian_bound(channel, epsilon, schedule, len)?;
    if channel.dim() > len {
        return Err(Error::LengthMismatch { expected: len, found: channel.dim() });
    }
    let sampler = WalkSampler::new(schedule.clone(), Mode::Real, len, seed)?;
    let misses = exec.count_trials(trials, |trial| {
        let x = sampler.sample(trial);
        let proj = brownian_projection_sq(&x, channel).expect("channel checked");
        proj <= epsilon * sampler.sobolev_weighted(&x)
    });
    let bound = if value > 1.0 { Bound::NotYetInformative } else { Bound::Value(value) };
    Ok(BrownianEstimate { epsilon, len, non_clicks: Proportion::new(misses, trials), bound })
}
