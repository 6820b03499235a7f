//! Coin stacks: the classical ten-stack merchant puzzle and the infinite
//! variant whose weights feed the iterated quadratic form `⟨Qᵗx, x⟩`.

use crate::error::{Error, Result};
use crate::vector::TestVector;

/// Number of stacks in the classical puzzle.
pub const MERCHANT_STACKS: usize = 10;
/// Weight of a true coin in the classical puzzle, in grams.
pub const TRUE_COIN_GRAMS: f64 = 1.0;
/// Weight of a false coin in the classical puzzle, in grams.
pub const FALSE_COIN_GRAMS: f64 = 1.01;

/// Largest admissible weight exponent; `1 + 2^-53` is not representable.
pub const MAX_WEIGHT_EXPONENT: u32 = 52;

/// Weighs one coin from stack 1, two from stack 2, ... ten from stack 10.
///
/// `false_stacks[k]` marks stack `k + 1` as holding false coins.
pub fn classical_merchant_weigh(false_stacks: &[bool; MERCHANT_STACKS]) -> Result<f64> {
    if false_stacks.iter().filter(|&&f| f).count() > 1 {
        return Err(Error::MoreThanOneFalseStack);
    }
    Ok(false_stacks
        .iter()
        .enumerate()
        .map(|(k, &f)| {
            let coin = if f { FALSE_COIN_GRAMS } else { TRUE_COIN_GRAMS };
            (k + 1) as f64 * coin
        })
        .sum())
}

/// Configuration with at most one false stack (1-based), or none.
pub fn merchant_config(false_stack: Option<usize>) -> Result<[bool; MERCHANT_STACKS]> {
    let mut cfg = [false; MERCHANT_STACKS];
    if let Some(s) = false_stack {
        if s == 0 || s > MERCHANT_STACKS {
            return Err(Error::IndexOutOfRange { index: s, len: MERCHANT_STACKS });
        }
        cfg[s - 1] = true;
    }
    Ok(cfg)
}

/// Inverts [`classical_merchant_weigh`]: `55 g` means no false stack,
/// `55 + N/100 g` means stack `N`.
pub fn classical_merchant_detect(weight: f64) -> Result<Option<usize>> {
    let base = (MERCHANT_STACKS * (MERCHANT_STACKS + 1) / 2) as f64;
    let excess = (weight - base) / (FALSE_COIN_GRAMS - TRUE_COIN_GRAMS);
    let stack = libm::round(excess);
    if !excess.is_finite() || (excess - stack).abs() > 1e-6 || !(0.0..=MERCHANT_STACKS as f64).contains(&stack) {
        return Err(Error::UndecodableWeight(weight));
    }
    Ok(match stack as usize {
        0 => None,
        s => Some(s),
    })
}

/// The one false stack of a [`CoinSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FalseStack {
    /// 1-based stack index `j0`.
    pub index: usize,
    /// `j` in the excess weight `γ = 2^-j`.
    pub exponent: u32,
}

impl FalseStack {
    pub fn gamma(&self) -> f64 {
        dyadic(self.exponent)
    }
}

/// Stack weights `q_1..q_N`: all one, except possibly `q_{j0} = 1 + γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoinSequence {
    len: usize,
    false_stack: Option<FalseStack>,
}

impl CoinSequence {
    pub fn all_true(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::param("N", "truncation length must be positive"));
        }
        Ok(CoinSequence { len, false_stack: None })
    }

    pub fn false_at(len: usize, index: usize, exponent: u32) -> Result<Self> {
        if len == 0 {
            return Err(Error::param("N", "truncation length must be positive"));
        }
        if index == 0 || index > len {
            return Err(Error::IndexOutOfRange { index, len });
        }
        check_exponent(exponent, "gamma")?;
        Ok(CoinSequence { len, false_stack: Some(FalseStack { index, exponent }) })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn false_stack(&self) -> Option<FalseStack> {
        self.false_stack
    }

    pub fn is_all_true(&self) -> bool {
        self.false_stack.is_none()
    }

    /// `q_i` for `1 <= i <= N`.
    pub fn weight(&self, i: usize) -> f64 {
        match self.false_stack {
            Some(f) if f.index == i => 1.0 + f.gamma(),
            _ => 1.0,
        }
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.len).map(move |i| self.weight(i))
    }
}

pub(crate) fn check_exponent(exponent: u32, name: &'static str) -> Result<()> {
    if exponent == 0 || exponent > MAX_WEIGHT_EXPONENT {
        return Err(Error::param(name, "exponent must lie in 1..=52"));
    }
    Ok(())
}

/// `2^-exponent`.
pub fn dyadic(exponent: u32) -> f64 {
    libm::ldexp(1.0, -(exponent.min(1100) as i32))
}

/// `(1 + γ)^t - 1`. Integer `t` is evaluated by repeated squaring, so
/// dyadic `γ` yields exact values as long as they are representable.
pub fn growth(gamma: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if libm::trunc(t) == t && t <= 1024.0 {
        let mut base = 1.0 + gamma;
        let mut n = t as u64;
        let mut acc = 1.0;
        while n > 0 {
            if n & 1 == 1 {
                acc *= base;
            }
            base *= base;
            n >>= 1;
        }
        acc - 1.0
    } else {
        libm::expm1(t * libm::log1p(gamma))
    }
}

/// `⟨Qᵗx, x⟩ = Σ_i q_i^t |x_i|²`.
pub fn quadratic_form(seq: &CoinSequence, x: &TestVector, t: f64) -> Result<f64> {
    Ok(x.norm_sq() + quadratic_excess(seq, x, t)?)
}

/// `⟨Qᵗx, x⟩ - ‖x‖² = Σ_i (q_i^t - 1)|x_i|²`, evaluated without the
/// cancellation of the difference. It is exactly zero for all-true stacks.
/// `grow·|x_j|²`, taking a zero coordinate to zero even when the growth
/// factor has overflowed.
pub(crate) fn scaled_growth(grow: f64, norm_sq: f64) -> f64 {
    if norm_sq == 0.0 {
        0.0
    } else {
        grow * norm_sq
    }
}

pub fn quadratic_excess(seq: &CoinSequence, x: &TestVector, t: f64) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::param("t", "time must be finite and nonnegative"));
    }
    if x.len() > seq.len() {
        return Err(Error::LengthMismatch { expected: seq.len(), found: x.len() });
    }
    Ok(match seq.false_stack {
        Some(f) => match x.get(f.index) {
            Some(v) if f.index <= x.len() => scaled_growth(growth(f.gamma(), t), v.norm_sqr()),
            _ => 0.0,
        },
        None => 0.0,
    })
}
