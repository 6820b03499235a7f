//! Truncated test vectors `x_1..x_N` with the implicit start `x_0 = 0`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::schedule::WalkSchedule;

/// Whether trajectories live on the real line or in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestVector {
    mode: Mode,
    entries: Vec<Complex64>,
}

impl TestVector {
    pub fn real(entries: Vec<f64>) -> Result<Self> {
        Self::new(Mode::Real, entries.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn complex(entries: Vec<Complex64>) -> Result<Self> {
        Self::new(Mode::Complex, entries)
    }

    pub fn new(mode: Mode, entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::param("x", "test vectors need at least one entry"));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param("x", "entries must be finite"));
        }
        if mode == Mode::Real && entries.iter().any(|z| z.im != 0.0) {
            return Err(Error::param("x", "real-mode entries must have zero imaginary part"));
        }
        Ok(TestVector { mode, entries })
    }

    /// A vector that is zero except for `value` at the 1-based `index`.
    pub fn spike(mode: Mode, len: usize, index: usize, value: Complex64) -> Result<Self> {
        if index == 0 || index > len {
            return Err(Error::IndexOutOfRange { index, len });
        }
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); len];
        entries[index - 1] = value;
        Self::new(mode, entries)
    }

    /// Builds the trajectory whose increments are `increments`.
    pub fn from_increments(mode: Mode, increments: &[Complex64]) -> Result<Self> {
        let mut acc = Complex64::new(0.0, 0.0);
        let entries = increments
            .iter()
            .map(|d| {
                acc += d;
                acc
            })
            .collect();
        Self::new(mode, entries)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `x_i` for `1 <= i <= N`, and `x_0 = 0`.
    pub fn get(&self, i: usize) -> Option<Complex64> {
        if i == 0 {
            Some(Complex64::new(0.0, 0.0))
        } else {
            self.entries.get(i - 1).copied()
        }
    }

    /// Increments `x_m - x_{m-1}` for `m = 1..=N`.
    pub fn increments(&self) -> impl Iterator<Item = Complex64> + '_ {
        let prev = core::iter::once(Complex64::new(0.0, 0.0)).chain(self.entries.iter().copied());
        self.entries.iter().zip(prev).map(|(x, p)| x - p)
    }

    /// `‖x‖² = Σ |x_i|²`.
    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        let mode = if c.im != 0.0 { Mode::Complex } else { self.mode };
        Self::new(mode, self.entries.iter().map(|z| z * c).collect())
    }
}

/// `|x|₁² = Σ_m |x_m - x_{m-1}|²`.
pub fn sobolev_unperturbed(x: &TestVector) -> f64 {
    x.increments().map(|d| d.norm_sqr()).sum()
}

/// `‖x‖₁² = Σ_m (1 - Δ_m)/Δ_m · |x_m - x_{m-1}|²`.
pub fn sobolev_weighted(x: &TestVector, schedule: &WalkSchedule) -> Result<f64> {
    schedule.validate()?;
    Ok(weighted_sum(x, schedule))
}

pub(crate) fn weighted_sum(x: &TestVector, schedule: &WalkSchedule) -> f64 {
    x.increments()
        .enumerate()
        .map(|(i, d)| schedule.weight(i + 1) * d.norm_sqr())
        .sum()
}

/// Same as [`sobolev_weighted`] with the weights precomputed.
pub(crate) fn weighted_sum_with(x: &TestVector, weights: &[f64]) -> f64 {
    x.increments().zip(weights).map(|(d, w)| w * d.norm_sqr()).sum()
}
