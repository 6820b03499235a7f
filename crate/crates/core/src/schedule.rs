//! Step schedules of the discrete random walks.
//!
//! The non-perturbed walk advances with unit steps; a perturbed walk uses
//! steps `0 < Δ_m < 1` whose deficits `1 - Δ_m` are summable, so the
//! infinite product of the steps stays positive.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Index past which every dyadic step rounds to 1 in double precision.
const DYADIC_SATURATION: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum WalkSchedule {
    /// `Δ_m = 1 - 2^-(m+1)`.
    Dyadic,
    /// Unit steps: the non-perturbed walk.
    Unperturbed,
    /// The same step at every index.
    Constant(f64),
    /// Explicit leading steps; every index past the table takes a unit step.
    Table(Vec<f64>),
}

impl Default for WalkSchedule {
    fn default() -> Self {
        WalkSchedule::Dyadic
    }
}

fn check_step(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("delta", "steps must lie in (0, 1]"))
    }
}

impl WalkSchedule {
    pub fn constant(delta: f64) -> Result<Self> {
        check_step(delta)?;
        Ok(WalkSchedule::Constant(delta))
    }

    pub fn table(steps: Vec<f64>) -> Result<Self> {
        for &d in &steps {
            check_step(d)?;
        }
        Ok(WalkSchedule::Table(steps))
    }

    /// Re-checks the step invariant, for schedules built from raw variants.
    pub fn validate(&self) -> Result<()> {
        match self {
            WalkSchedule::Constant(d) => check_step(*d),
            WalkSchedule::Table(t) => t.iter().try_for_each(|&d| check_step(d)),
            _ => Ok(()),
        }
    }

    /// Step `Δ_m` for `m >= 1`.
    pub fn delta(&self, m: usize) -> f64 {
        debug_assert!(m >= 1);
        match self {
            WalkSchedule::Dyadic => 1.0 - dyadic_deficit(m),
            WalkSchedule::Unperturbed => 1.0,
            WalkSchedule::Constant(d) => *d,
            WalkSchedule::Table(t) => t.get(m - 1).copied().unwrap_or(1.0),
        }
    }

    /// Sobolev weight `(1 - Δ_m) / Δ_m`.
    pub fn weight(&self, m: usize) -> f64 {
        match self {
            // the deficit is exact here, `1 - Δ_m` would round it away
            WalkSchedule::Dyadic => dyadic_deficit(m) / self.delta(m),
            _ => {
                let d = self.delta(m);
                (1.0 - d) / d
            }
        }
    }

    pub fn steps(&self, len: usize) -> Vec<f64> {
        (1..=len).map(|m| self.delta(m)).collect()
    }

    pub fn weights(&self, len: usize) -> Vec<f64> {
        (1..=len).map(|m| self.weight(m)).collect()
    }

    /// `∏_{m <= len} Δ_m`.
    pub fn partial_product(&self, len: usize) -> f64 {
        let effective = match self {
            WalkSchedule::Dyadic => len.min(DYADIC_SATURATION),
            WalkSchedule::Unperturbed => 0,
            WalkSchedule::Table(t) => len.min(t.len()),
            WalkSchedule::Constant(d) if *d == 1.0 => 0,
            WalkSchedule::Constant(_) => len,
        };
        (1..=effective).map(|m| self.delta(m)).product()
    }

    /// `ln ∏_{m <= len} Δ_m`, for densities that would underflow.
    pub fn log_partial_product(&self, len: usize) -> f64 {
        (1..=len).map(|m| libm::log(self.delta(m))).sum()
    }

    /// `lim_N ∏_{m <= N} Δ_m`. Zero for a constant step below one, whose
    /// deficits are not summable.
    pub fn limit_product(&self) -> f64 {
        match self {
            WalkSchedule::Dyadic => self.partial_product(DYADIC_SATURATION),
            WalkSchedule::Unperturbed => 1.0,
            WalkSchedule::Constant(d) if *d == 1.0 => 1.0,
            WalkSchedule::Constant(_) => 0.0,
            WalkSchedule::Table(t) => self.partial_product(t.len()),
        }
    }
}

fn dyadic_deficit(m: usize) -> f64 {
    let e = m.saturating_add(1).min(2000) as i32;
    libm::ldexp(1.0, -e)
}
