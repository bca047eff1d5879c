//! Krylov subspaces and annihilator degrees.
//!
//! The dimension of `span{b, Tb, T^2 b, ...}` equals the degree of the monic
//! polynomial of least degree that kills `b` under `T`. Both the annihilator
//! degree and the brute-force recoverability oracle are computed from an
//! Arnoldi basis (classical Gram-Schmidt applied twice), which spans exactly
//! the same spaces as the raw powers but keeps every rank decision on
//! orthonormal vectors.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::{hstack, vector_is_finite, ComplexMatrix, C64};

/// Orthonormal basis of a truncated Krylov space.
#[derive(Debug, Clone)]
pub(crate) struct KrylovBasis {
    /// Orthonormal basis vectors, in generation order.
    pub vectors: Vec<DVector<C64>>,
    /// Unit-norm component of `T q_last` orthogonal to the basis, when the
    /// sequence has not stabilized. Spans the next Krylov extension.
    pub next: Option<DVector<C64>>,
}

impl KrylovBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn as_matrix(&self, nrows: usize) -> DMatrix<C64> {
        if self.vectors.is_empty() {
            return DMatrix::zeros(nrows, 0);
        }
        DMatrix::from_columns(&self.vectors)
    }
}

/// Builds an orthonormal basis of `span{b, Tb, ..., T^{max_vectors-1} b}`.
///
/// The sequence stops when the orthogonalized residual of `T q_last` has
/// norm at most `breakdown` (an absolute threshold, normally
/// `rank_tol * ||T||_F`). A zero start vector yields an empty basis.
pub(crate) fn krylov_basis(op: &DMatrix<C64>, start: &DVector<C64>, max_vectors: usize, breakdown: f64) -> KrylovBasis {
    let mut vectors: Vec<DVector<C64>> = Vec::new();
    let norm = start.norm();
    if norm == 0.0 || max_vectors == 0 {
        return KrylovBasis { vectors, next: None };
    }
    vectors.push(start / C64::new(norm, 0.0));
    let dim = op.nrows();
    loop {
        let last = vectors.last().unwrap();
        let mut w = op * last;
        for _ in 0..2 {
            for q in &vectors {
                let h = q.dotc(&w);
                w.axpy(-h, q, C64::new(1.0, 0.0));
            }
        }
        let r = w.norm();
        if r <= breakdown || vectors.len() == dim {
            return KrylovBasis { vectors, next: None };
        }
        let unit = w / C64::new(r, 0.0);
        if vectors.len() == max_vectors {
            return KrylovBasis {
                vectors,
                next: Some(unit),
            };
        }
        vectors.push(unit);
    }
}

pub(crate) fn breakdown_threshold(op: &DMatrix<C64>, rank_tol: f64) -> f64 {
    rank_tol * op.norm()
}

/// Degree of the `T`-annihilator of `b`: the numerical rank of the Krylov
/// matrix `[b, Tb, ..., T^d b]`. Zero exactly when `b = 0`.
pub fn annihilator_degree(t: &ComplexMatrix, b: &[C64], rank_tol: f64) -> Result<usize> {
    let d = t.require_square("annihilator operator")?;
    if b.len() != d {
        return Err(Error::degenerate(format!(
            "vector length {} does not match operator dimension {d}",
            b.len()
        )));
    }
    if !vector_is_finite(b) {
        return Err(Error::degenerate("vector has non-finite entries"));
    }
    if !(rank_tol.is_finite() && rank_tol >= 0.0) {
        return Err(Error::degenerate("rank tolerance must be non-negative and finite"));
    }
    let op = t.as_dmatrix();
    let start = DVector::from_column_slice(b);
    Ok(krylov_basis(op, &start, d, breakdown_threshold(op, rank_tol)).len())
}

/// Orthonormal Krylov bases for several start vectors, each truncated at its
/// own vector budget, stacked side by side.
pub(crate) fn stacked_krylov(
    op: &DMatrix<C64>,
    starts: &[(DVector<C64>, usize)],
    rank_tol: f64,
) -> (DMatrix<C64>, Vec<KrylovBasis>) {
    let thr = breakdown_threshold(op, rank_tol);
    let bases: Vec<KrylovBasis> = starts
        .iter()
        .map(|(b, budget)| krylov_basis(op, b, *budget, thr))
        .collect();
    let mats: Vec<DMatrix<C64>> = bases.iter().map(|k| k.as_matrix(op.nrows())).collect();
    (hstack(&mats, op.nrows()), bases)
}
