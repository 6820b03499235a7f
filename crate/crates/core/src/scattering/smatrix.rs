use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dot::{m_function, DotState, InnerDot, MValue};
use super::CMatrix;
use crate::error::{Error, Result};

/// `|β|²` used for the occupied-resonance limit unless a caller asks for
/// another coupling.
pub const DEFAULT_RESONANCE_STRENGTH: f64 = 1e6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coupling vector `β` between the wire and the dot, truncated to `d`
/// components of the input space.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaChannel {
    beta: Vec<Complex64>,
}

impl BetaChannel {
    pub fn new(beta: Vec<Complex64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::param("beta", "the channel needs at least one component"));
        }
        if beta.iter().any(|b| !b.re.is_finite() || !b.im.is_finite()) {
            return Err(Error::param("beta", "components must be finite"));
        }
        Ok(BetaChannel { beta })
    }

    pub fn real(beta: &[f64]) -> Result<Self> {
        Self::new(beta.iter().map(|&b| Complex64::new(b, 0.0)).collect())
    }

    /// `β = (1, 0, ..., 0)` in `dim` components.
    pub fn first_axis(dim: usize) -> Self {
        let mut beta = alloc::vec![ZERO; dim.max(1)];
        beta[0] = ONE;
        BetaChannel { beta }
    }

    pub fn components(&self) -> &[Complex64] {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    /// `|β|²`.
    pub fn norm_sq(&self) -> f64 {
        self.beta.iter().map(|b| b.norm_sqr()).sum()
    }

    pub fn is_off(&self) -> bool {
        self.norm_sq() == 0.0
    }

    /// The same direction rescaled so that `|β|² = strength`.
    pub fn with_strength(&self, strength: f64) -> Result<Self> {
        if self.is_off() {
            return Err(Error::param("beta", "a switched-off channel has no direction"));
        }
        if !(strength >= 0.0) || !strength.is_finite() {
            return Err(Error::param("beta_strength", "must be finite and nonnegative"));
        }
        let k = libm::sqrt(strength / self.norm_sq());
        Ok(BetaChannel { beta: self.beta.iter().map(|b| b * k).collect() })
    }

    /// Tail sums `b_l = Σ_{m>=l} β_m`.
    pub fn tail_sums(&self) -> Vec<Complex64> {
        let mut acc = ZERO;
        let mut b: Vec<Complex64> = self
            .beta
            .iter()
            .rev()
            .map(|v| {
                acc += v;
                acc
            })
            .collect();
        b.reverse();
        b
    }

    /// `|b|² = Σ_l |b_l|²`, the quantity entering the Brownian bound.
    pub fn tail_norm_sq(&self) -> f64 {
        self.tail_sums().iter().map(|b| b.norm_sqr()).sum()
    }

    /// `Σ_m m²|β_m|²`; finiteness is sufficient for `b ∈ l₂`.
    pub fn moment_sum(&self) -> f64 {
        self.beta.iter().enumerate().map(|(i, b)| ((i + 1) * (i + 1)) as f64 * b.norm_sqr()).sum()
    }

    /// Orthogonal projection `P_β` onto `span(β)`; zero when switched off.
    pub fn projector(&self) -> CMatrix {
        rank_one_projector(&self.beta)
    }
}

fn rank_one_projector(v: &[Complex64]) -> CMatrix {
    let n = v.len();
    let norm: f64 = v.iter().map(|b| b.norm_sqr()).sum();
    if norm == 0.0 {
        return DMatrix::zeros(n, n);
    }
    DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj() / norm)
}

/// Projection `𝒫_β` onto the doubled vector `(β, β)` in `ℰ ⊕ ℰ`.
pub fn doubled_projector(channel: &BetaChannel) -> CMatrix {
    let doubled: Vec<Complex64> = channel.beta.iter().chain(channel.beta.iter()).copied().collect();
    rank_one_projector(&doubled)
}

/// `S(p) = [[T, R], [R, T]]` with `T = P⊥ + τP_β` and `R = ρP_β`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    pub p: f64,
    /// Scalar transmission `τ = 2ip / (2ip + |β|²M⁻¹)` on `span(β)`.
    pub transmission: Complex64,
    /// Scalar reflection `ρ = -|β|²M⁻¹ / (2ip + |β|²M⁻¹)` on `span(β)`.
    pub reflection: Complex64,
    t: CMatrix,
    r: CMatrix,
}

impl ScatteringMatrix {
    fn assemble(channel: &BetaChannel, p: f64, transmission: Complex64, reflection: Complex64) -> Self {
        let proj = channel.projector();
        let id = CMatrix::identity(channel.dim(), channel.dim());
        let t = &id - &proj + &proj * transmission;
        let r = &proj * reflection;
        ScatteringMatrix { p, transmission, reflection, t, r }
    }

    /// Input-space dimension `d`; the full matrix is `2d × 2d`.
    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn transmission_block(&self) -> &CMatrix {
        &self.t
    }

    pub fn reflection_block(&self) -> &CMatrix {
        &self.r
    }

    pub fn dense(&self) -> CMatrix {
        let d = self.dim();
        let mut s = CMatrix::zeros(2 * d, 2 * d);
        s.view_mut((0, 0), (d, d)).copy_from(&self.t);
        s.view_mut((0, d), (d, d)).copy_from(&self.r);
        s.view_mut((d, 0), (d, d)).copy_from(&self.r);
        s.view_mut((d, d), (d, d)).copy_from(&self.t);
        s
    }

    /// `‖S*S - I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let s = self.dense();
        let n = s.nrows();
        super::frobenius_distance(&(s.adjoint() * &s), &CMatrix::identity(n, n))
    }
}

fn coefficients(channel: &BetaChannel, p: f64, m: MValue) -> (Complex64, Complex64) {
    let strength = channel.norm_sq();
    if strength == 0.0 {
        return (ONE, ZERO);
    }
    match m {
        // M⁻¹ vanishes on a pole
        MValue::Pole { .. } => (ONE, ZERO),
        MValue::Finite(m) => {
            // multiplied through by M, which also covers M = 0
            let two_ipm = Complex64::new(0.0, 2.0 * p) * m;
            let denom = two_ipm + strength;
            (two_ipm / denom, -Complex64::new(strength, 0.0) / denom)
        }
    }
}

/// Scattering matrix at momentum `p > 0`, energy `λ = p²`, using the
/// M-function over the dot's vacant levels. On a pole of `M` the value is
/// the continuous extension.
pub fn s_matrix(dot: &InnerDot, channel: &BetaChannel, p: f64) -> Result<ScatteringMatrix> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::param("p", "momentum must be positive"));
    }
    let m = m_function(dot, Complex64::new(p * p, 0.0), true);
    let (tau, rho) = coefficients(channel, p, m);
    Ok(ScatteringMatrix::assemble(channel, p, tau, rho))
}

/// [`s_matrix`] at energy `λ > 0`.
pub fn s_matrix_at_energy(dot: &InnerDot, channel: &BetaChannel, lambda: f64) -> Result<ScatteringMatrix> {
    if !(lambda > 0.0) {
        return Err(Error::param("lambda", "energy must be positive"));
    }
    s_matrix(dot, channel, libm::sqrt(lambda))
}

/// `I - [[P_β, P_β], [P_β, P_β]]`, the strong-coupling limit at an
/// occupied resonance.
pub fn reflection_limit(channel: &BetaChannel) -> CMatrix {
    let d = channel.dim();
    let proj = channel.projector();
    let mut block = CMatrix::zeros(2 * d, 2 * d);
    for (r, c) in [(0, 0), (0, d), (d, 0), (d, d)] {
        block.view_mut((r, c), (d, d)).copy_from(&proj);
    }
    CMatrix::identity(2 * d, 2 * d) - block
}

/// Scattering at the resonance energy `λ = α₁²` with its limit matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Resonance {
    pub state: DotState,
    pub lambda: f64,
    pub matrix: ScatteringMatrix,
    /// `I` for a vacant level, [`reflection_limit`] for an occupied one.
    pub limit: CMatrix,
}

impl Resonance {
    pub fn limit_defect(&self) -> f64 {
        super::frobenius_distance(&self.matrix.dense(), &self.limit)
    }
}

pub fn resonance_smatrix(
    dot: &InnerDot,
    channel: &BetaChannel,
    state: DotState,
    beta_strength: f64,
) -> Result<Resonance> {
    if state == DotState::Occupied && dot.levels().len() < 2 {
        return Err(Error::param("levels", "an occupied resonance needs a second level"));
    }
    let channel = channel.with_strength(beta_strength)?;
    let lambda = dot.resonance_level();
    let matrix = s_matrix(&dot.in_state(state), &channel, libm::sqrt(lambda))?;
    let limit = match state {
        DotState::Vacant => CMatrix::identity(2 * channel.dim(), 2 * channel.dim()),
        DotState::Occupied => reflection_limit(&channel),
    };
    Ok(Resonance { state, lambda, matrix, limit })
}

/// Outgoing amplitudes of the modal evolution `e^{ip²t}(Tν_l + Rν_r, Rν_l + Tν_r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolved {
    pub phase: Complex64,
    pub left: Vec<Complex64>,
    pub right: Vec<Complex64>,
}

impl Evolved {
    pub fn with_phase(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let scale = |v: &[Complex64]| v.iter().map(|z| z * self.phase).collect();
        (scale(&self.left), scale(&self.right))
    }

    pub fn norm_sq(&self) -> f64 {
        self.left.iter().chain(&self.right).map(|z| z.norm_sqr()).sum()
    }
}

/// Applies `S(p)` to incoming amplitudes; the phase `e^{ip²t}` is kept apart.
pub fn evolve_modes(
    s: &ScatteringMatrix,
    nu_left: &[Complex64],
    nu_right: &[Complex64],
    p: f64,
    t: f64,
) -> Result<Evolved> {
    let d = s.dim();
    for v in [nu_left, nu_right] {
        if v.len() != d {
            return Err(Error::LengthMismatch { expected: d, found: v.len() });
        }
    }
    if (p - s.p).abs() > 1e-12 * p.abs().max(1.0) {
        return Err(Error::param("p", "S was evaluated at a different momentum"));
    }
    let l = nalgebra::DVector::from_column_slice(nu_left);
    let r = nalgebra::DVector::from_column_slice(nu_right);
    let left = &s.t * &l + &s.r * &r;
    let right = &s.r * &l + &s.t * &r;
    let angle = p * p * t;
    Ok(Evolved {
        phase: Complex64::new(libm::cos(angle), libm::sin(angle)),
        left: left.iter().copied().collect(),
        right: right.iter().copied().collect(),
    })
}

/// `½(⟨e, e⟩ + ⟨Se, e⟩)` (real part) for a `2d × 2d` matrix `S`.
pub fn discrimination_correlation(s: &CMatrix, e: &[Complex64]) -> Result<f64> {
    if s.nrows() != e.len() || s.ncols() != e.len() {
        return Err(Error::LengthMismatch { expected: s.nrows(), found: e.len() });
    }
    let norm: f64 = e.iter().map(|z| z.norm_sqr()).sum();
    if norm == 0.0 {
        return Err(Error::param("e", "the input vector must be nonzero"));
    }
    let v = nalgebra::DVector::from_column_slice(e);
    let se = s * &v;
    let inner: Complex64 = se.iter().zip(e).map(|(a, b)| a * b.conj()).sum();
    Ok(0.5 * (norm + inner.re))
}
