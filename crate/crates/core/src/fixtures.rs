//! Worked matrices used by the `demo` command and the regression tests.

use crate::matrix::ComplexMatrix;

fn real(rows: [[f64; 5]; 5]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("fixture is well formed")
}

/// Diagonalizable, five simple eigenvalues `3, 2, 1, -1, -2`.
pub fn matrix_p() -> ComplexMatrix {
    real([
        [4.5, 0.5, -7.0, 5.0, -3.0],
        [7.5, 1.5, -11.0, 5.0, -7.0],
        [5.0, 0.0, -7.0, 5.0, -5.0],
        [4.0, 0.0, -4.0, 3.0, -4.0],
        [0.5, 0.5, -1.0, 0.0, 1.0],
    ])
}

/// Diagonalizable, eigenvalue 3 with multiplicity three and 2 with multiplicity two.
pub fn matrix_q() -> ComplexMatrix {
    real([
        [1.5, -0.5, 2.0, 0.0, 1.0],
        [0.5, 2.5, 0.0, 0.0, -1.0],
        [0.0, 0.0, 3.0, 0.0, 0.0],
        [1.0, 0.0, -1.0, 3.0, -1.0],
        [-0.5, -0.5, 1.0, 0.0, 3.0],
    ])
}

/// Not diagonalizable: one Jordan block of size 3 at eigenvalue 2 and one
/// of size 2 at eigenvalue 1.
pub fn matrix_r() -> ComplexMatrix {
    real([
        [0.0, -1.0, 4.0, -1.0, 2.0],
        [2.0, 1.0, -2.0, 1.0, -2.0],
        [-0.5, -0.5, 3.0, 0.0, 1.0],
        [0.5, -0.5, 0.0, 2.0, 0.0],
        [-0.5, -0.5, 2.0, -1.0, 2.0],
    ])
}

/// 3x3 matrix in rational canonical form with a single companion block.
pub fn companion_m() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 2.0]])
        .expect("fixture is well formed")
}

/// Cyclic nilpotent `N_3` with ones on the subdiagonal.
pub fn nilpotent_n3() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
        .expect("fixture is well formed")
}
