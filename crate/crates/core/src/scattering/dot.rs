use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Half-width of the window around each level in which the M-function is
/// reported as a pole instead of evaluated.
pub const POLE_HALF_WIDTH: f64 = 1e-9;

/// Occupation of the lowest (resonance) level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotState {
    /// `S₁`: the resonance level and everything above it is vacant.
    Vacant,
    /// `S₂`: the resonance level is occupied and drops out.
    Occupied,
}

/// Truncated inner Hamiltonian `diag(α₁², α₂², ...)` with the Fourier
/// coefficients `e_l` of the deficiency vector and per-level occupation.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerDot {
    levels: Vec<f64>,
    deficiency: Vec<Complex64>,
    occupied: Vec<bool>,
}

impl InnerDot {
    pub fn new(levels: Vec<f64>, deficiency: Vec<Complex64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::param("levels", "the dot needs at least one level"));
        }
        if levels.len() != deficiency.len() {
            return Err(Error::LengthMismatch { expected: levels.len(), found: deficiency.len() });
        }
        if levels.iter().any(|a| !(a.is_finite() && *a > 0.0)) || levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("levels", "levels must be positive and strictly increasing"));
        }
        if deficiency.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::param("deficiency", "components must be finite"));
        }
        if deficiency.iter().all(|e| e.norm_sqr() == 0.0) {
            return Err(Error::param("deficiency", "the deficiency vector must be nonzero"));
        }
        let occupied = vec![false; levels.len()];
        Ok(InnerDot { levels, deficiency, occupied })
    }

    /// Levels `α_l² = l` with a normalized, uniform deficiency vector.
    pub fn ladder(count: usize) -> Self {
        let e = Complex64::new(1.0 / libm::sqrt(count as f64), 0.0);
        Self::new((1..=count).map(|l| l as f64).collect(), vec![e; count]).expect("ladder is valid")
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn deficiency(&self) -> &[Complex64] {
        &self.deficiency
    }

    pub fn occupied(&self) -> &[bool] {
        &self.occupied
    }

    pub fn with_occupied(mut self, occupied: Vec<bool>) -> Result<Self> {
        if occupied.len() != self.levels.len() {
            return Err(Error::LengthMismatch { expected: self.levels.len(), found: occupied.len() });
        }
        self.occupied = occupied;
        Ok(self)
    }

    /// The dot with only the resonance level's occupation set by `state`.
    pub fn in_state(&self, state: DotState) -> Self {
        let mut occupied = vec![false; self.levels.len()];
        occupied[0] = state == DotState::Occupied;
        InnerDot { occupied, ..self.clone() }
    }

    /// `α₁²`.
    pub fn resonance_level(&self) -> f64 {
        self.levels[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MValue {
    Finite(Complex64),
    /// `λ` sits on level `level` (0-based). Near it `M(λ) ≈ residue / (α² - λ)`
    /// with `residue = (1 + α⁴)|e_l|²`.
    Pole { level: usize, residue: f64 },
}

/// `M(λ) = Σ_l (1 + α_l²λ)/(α_l² - λ)·|e_l|²`, over vacant levels only when
/// `exclude_occupied` is set.
pub fn m_function(dot: &InnerDot, lambda: Complex64, exclude_occupied: bool) -> MValue {
    let included = |l: &usize| !(exclude_occupied && dot.occupied[*l]);
    for l in (0..dot.levels.len()).filter(included) {
        let a = dot.levels[l];
        if (lambda - a).norm() <= POLE_HALF_WIDTH {
            return MValue::Pole { level: l, residue: (1.0 + a * a) * dot.deficiency[l].norm_sqr() };
        }
    }
    let sum = (0..dot.levels.len())
        .filter(included)
        .map(|l| {
            let a = dot.levels[l];
            (1.0 + lambda * a) / (a - lambda) * dot.deficiency[l].norm_sqr()
        })
        .sum();
    MValue::Finite(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn real(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn single_level_values() {
        let dot = InnerDot::new(vec![4.0], vec![real(1.0)]).unwrap();
        let MValue::Finite(m) = m_function(&dot, real(1.0), false) else { panic!() };
        assert!((m.re - 5.0 / 3.0).abs() < 1e-15 && m.im == 0.0);
        let dot = InnerDot::new(vec![1.0], vec![real(1.0)]).unwrap();
        assert_eq!(m_function(&dot, real(0.0), false), MValue::Finite(real(1.0)));
    }

    #[test]
    fn poles_are_flagged() {
        let dot = InnerDot::new(vec![2.0, 3.0], vec![real(0.5), real(1.0)]).unwrap();
        let v = m_function(&dot, real(3.0 + 5e-10), false);
        assert_eq!(v, MValue::Pole { level: 1, residue: 10.0 });
        assert!(matches!(m_function(&dot, real(3.0 + 1e-8), false), MValue::Finite(_)));
    }

    #[test]
    fn herglotz_in_upper_half_plane() {
        let dot = InnerDot::ladder(8);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let lambda = Complex64::new(rng.random_range(-5.0..15.0), rng.random_range(1e-3..5.0));
            let MValue::Finite(m) = m_function(&dot, lambda, false) else { panic!() };
            assert!(m.im > 0.0);
        }
    }

    #[test]
    fn occupation_splits() {
        let dot = InnerDot::ladder(8);
        let lambda = real(2.5);
        let term = |l: usize| {
            let a = dot.levels()[l];
            (1.0 + a * 2.5) / (a - 2.5) * dot.deficiency()[l].norm_sqr()
        };
        let m3: f64 = (2..8).map(term).sum();
        let MValue::Finite(m1) = m_function(&dot.in_state(DotState::Vacant), lambda, true) else { panic!() };
        let MValue::Finite(m2) = m_function(&dot.in_state(DotState::Occupied), lambda, true) else { panic!() };
        assert!((m1.re - (term(0) + term(1) + m3)).abs() < 1e-14);
        assert!((m2.re - (term(1) + m3)).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_dots() {
        assert!(InnerDot::new(vec![2.0, 1.0], vec![real(1.0); 2]).is_err());
        assert!(InnerDot::new(vec![0.0, 1.0], vec![real(1.0); 2]).is_err());
        assert!(InnerDot::new(vec![1.0, 2.0], vec![real(0.0); 2]).is_err());
        assert!(InnerDot::new(vec![1.0], vec![real(1.0); 2]).is_err());
    }
}
