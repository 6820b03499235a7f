use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::smatrix::{reflection_limit, BetaChannel};
use super::{frobenius_distance, CMatrix};

/// Controlled NOT in the basis `|00⟩, |01⟩, |10⟩, |11⟩`; the first qubit
/// controls.
pub fn cnot_matrix() -> super::RealMatrix {
    DMatrix::from_row_slice(4, 4, &[
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, 1.0, 0.0,
    ])
}

/// Singular values, largest first, of the realigned matrix
/// `R[2a+c, 2b+d] = U[2a+b, 2c+d]` for a two-qubit operator `U`. `U` is a
/// product `U₁⊗U₂` exactly when one value is nonzero.
pub fn operator_schmidt_values(u: &DMatrix<f64>) -> Vec<f64> {
    assert_eq!(u.shape(), (4, 4), "two-qubit operators are 4x4");
    let r = DMatrix::from_fn(4, 4, |row, col| {
        let (a, c) = (row / 2, row % 2);
        let (b, d) = (col / 2, col % 2);
        u[(2 * a + b, 2 * c + d)]
    });
    let mut values: Vec<f64> = r.singular_values().iter().copied().collect();
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

#[derive(Debug, Clone, PartialEq)]
pub struct CnotReport {
    pub matrix: DMatrix<f64>,
    /// `U e_k` against the table `00→00, 01→01, 10→11, 11→10`.
    pub truth_table_ok: bool,
    /// `‖UᵀU - I‖_F`.
    pub unitarity_defect: f64,
    /// `‖U² - I‖_F`.
    pub square_defect: f64,
    pub schmidt_values: Vec<f64>,
    pub schmidt_rank: usize,
    /// `diag(S₁, S₂)` with a one-dimensional channel: the vacant resonance
    /// gives `I`, the occupied limit gives `[[0, -1], [-1, 0]]`.
    pub realised: CMatrix,
    /// The realised matrix equals `U` entrywise in absolute value.
    pub realised_up_to_sign: bool,
    /// `‖realised - U‖_F`; nonzero because the reflection carries `-P_β`.
    pub sign_defect: f64,
}

pub fn cnot_check() -> CnotReport {
    let u = cnot_matrix();
    let id = DMatrix::<f64>::identity(4, 4);
    let table = [(0, 0), (1, 1), (2, 3), (3, 2)];
    let truth_table_ok = table.iter().all(|&(from, to)| {
        let col = u.column(from);
        (0..4).all(|k| col[k] == if k == to { 1.0 } else { 0.0 })
    });
    let unitarity_defect = (u.transpose() * &u - &id).norm();
    let square_defect = (&u * &u - &id).norm();
    let schmidt_values = operator_schmidt_values(&u);
    let cutoff = 1e-9 * schmidt_values[0];
    let schmidt_rank = schmidt_values.iter().filter(|&&s| s > cutoff).count();

    let occupied = reflection_limit(&BetaChannel::first_axis(1));
    let mut realised = CMatrix::identity(4, 4);
    realised.view_mut((2, 2), (2, 2)).copy_from(&occupied);
    let u_c = u.map(|v| Complex64::new(v, 0.0));
    let realised_up_to_sign = realised.iter().zip(u_c.iter()).all(|(a, b)| (a.norm() - b.norm()).abs() < 1e-15);
    let sign_defect = frobenius_distance(&realised, &u_c);

    CnotReport {
        matrix: u,
        truth_table_ok,
        unitarity_defect,
        square_defect,
        schmidt_values,
        schmidt_rank,
        realised,
        realised_up_to_sign,
        sign_defect,
    }
}
