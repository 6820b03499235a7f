//! Zero-range solvable model of a quantum dot on a wire.
//!
//! The dot is a diagonal inner Hamiltonian coupled to the wire through a
//! channel vector `β`. Its scalar M-function fixes the transmission and
//! reflection blocks of the scattering matrix; at the lowest level the
//! matrix is the identity when that level is vacant and approaches a
//! reflection when it is occupied.

mod brownian;
mod cnot;
mod dot;
mod smatrix;

pub use brownian::{
    brownian_bound, brownian_click, brownian_projection_sq, estimate_brownian_measure, gaussian_det_identity,
    gaussian_integral_mc, BrownianEstimate, DetIdentity, MAX_DET_DIM, MAX_MC_DIM,
};
pub use cnot::{cnot_check, cnot_matrix, operator_schmidt_values, CnotReport};
pub use dot::{m_function, DotState, InnerDot, MValue, POLE_HALF_WIDTH};
pub use smatrix::{
    discrimination_correlation, doubled_projector, evolve_modes, reflection_limit, resonance_smatrix, s_matrix,
    s_matrix_at_energy, BetaChannel, Evolved, Resonance, ScatteringMatrix, DEFAULT_RESONANCE_STRENGTH,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

/// Frobenius norm of `a - b`.
pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    libm::sqrt(a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum())
}
