//! Dense complex matrices and the tolerance-aware rank primitives every other
//! module builds on.
//!
//! All rank decisions go through singular values. A matrix's numerical rank is
//! the number of singular values strictly above `rank_tol * sigma_max`; the
//! zero matrix has rank zero.

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Validated dense complex matrix. Entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::degenerate(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_iterator(rows, cols, entries))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::degenerate("ragged rows"));
        }
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Self::from_row_major(nrows, ncols, entries)
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::degenerate("matrix has non-finite entries"));
        }
        Ok(ComplexMatrix(m))
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(rows, cols))
    }

    pub fn diagonal(values: &[C64]) -> Self {
        ComplexMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(values)))
    }

    pub fn real_diagonal(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diagonal(&v)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn is_square(&self) -> bool {
        self.0.nrows() == self.0.ncols()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.adjoint())
    }

    /// Row-major copy of the entries.
    pub fn row_major_entries(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.0.len());
        for i in 0..self.0.nrows() {
            for j in 0..self.0.ncols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::degenerate(format!(
                "{what} must be square, got {}x{}",
                self.0.nrows(),
                self.0.ncols()
            )));
        }
        Ok(self.0.nrows())
    }
}

impl Deref for ComplexMatrix {
    type Target = DMatrix<C64>;

    fn deref(&self) -> &DMatrix<C64> {
        &self.0
    }
}

/// Tolerances shared by the spectral and feasibility code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute distance below which eigenvalues are merged into one cluster.
    pub cluster: f64,
    /// Relative singular-value threshold for rank decisions.
    pub rank: f64,
    /// Similarity transforms with a larger condition number are flagged untrusted.
    pub condition_cap: f64,
}

impl Tolerances {
    pub const DEFAULT_CONDITION_CAP: f64 = 1e8;

    /// Defaults for a given operator: `cluster = 1e-8 * ||A||`,
    /// `rank = d * eps * 1e4`.
    pub fn for_matrix(a: &ComplexMatrix) -> Self {
        Tolerances {
            cluster: (1e-8 * a.norm()).max(f64::MIN_POSITIVE),
            rank: default_rank_tol(a.nrows()),
            condition_cap: Self::DEFAULT_CONDITION_CAP,
        }
    }

    pub fn with_rank(mut self, rank: f64) -> Self {
        self.rank = rank;
        self
    }

    pub fn with_cluster(mut self, cluster: f64) -> Self {
        self.cluster = cluster;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("cluster", self.cluster),
            ("rank", self.rank),
            ("condition_cap", self.condition_cap),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::degenerate(format!("{name} tolerance must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

pub fn default_rank_tol(d: usize) -> f64 {
    d.max(1) as f64 * f64::EPSILON * 1e4
}

/// SVD `m = U diag(s) V*` with singular values in descending order.
pub(crate) struct Svd {
    pub u: DMatrix<C64>,
    pub s: Vec<f64>,
    pub v: DMatrix<C64>,
}

fn to_faer(m: &DMatrix<C64>) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin SVD, or full when `full` is set (`U` and `V` square).
///
/// Backed by faer: nalgebra's bidiagonal SVD loses accuracy on some exactly
/// rank-deficient inputs, which rank decisions cannot tolerate.
pub(crate) fn svd(m: &DMatrix<C64>, full: bool) -> Svd {
    let f = to_faer(m);
    let dec = if full { f.svd() } else { f.thin_svd() };
    let dec = dec.expect("SVD of a finite matrix converges");
    Svd {
        u: from_faer(dec.U()),
        s: dec.S().column_vector().iter().map(|z| z.re).collect(),
        v: from_faer(dec.V()),
    }
}

/// Singular values in descending order.
pub(crate) fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD of a finite matrix converges")
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    to_faer(m)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("Hermitian eigensolver converges")
}

/// Eigenvalues of a square matrix, unordered.
pub(crate) fn eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    to_faer(m).eigenvalues().expect("eigensolver converges")
}

/// Numerical rank: singular values strictly above `rank_tol * sigma_max`.
pub fn rank_with_tol(m: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    if !(rank_tol.is_finite() && rank_tol >= 0.0) {
        return Err(Error::degenerate("rank tolerance must be non-negative and finite"));
    }
    Ok(rank_relative(m.as_dmatrix(), rank_tol))
}

pub(crate) fn rank_relative(m: &DMatrix<C64>, rank_tol: f64) -> usize {
    let sv = singular_values(m);
    let Some(&smax) = sv.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * smax).count()
}

/// Rank with an absolute threshold.
pub(crate) fn rank_absolute(m: &DMatrix<C64>, threshold: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > threshold).count()
}

/// Orthonormal basis (as columns) for the column space of `m`, keeping left
/// singular vectors whose singular value exceeds `rank_tol * sigma_max`.
pub(crate) fn column_space(m: &DMatrix<C64>, rank_tol: f64) -> DMatrix<C64> {
    if m.is_empty() {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let dec = svd(m, false);
    let smax = dec.s.first().copied().unwrap_or(0.0);
    let keep = dec.s.iter().filter(|&&s| smax > 0.0 && s > rank_tol * smax).count();
    dec.u.columns(0, keep).into_owned()
}

/// The `k` right singular vectors belonging to the smallest singular values of
/// a square matrix, as columns, together with the full descending spectrum.
pub(crate) fn smallest_right_singular(m: &DMatrix<C64>, k: usize) -> (DMatrix<C64>, Vec<f64>) {
    let n = m.ncols();
    let dec = svd(m, true);
    (dec.v.columns(n - k, k).into_owned(), dec.s)
}

/// 2-norm condition number; infinite for singular or non-square input.
pub(crate) fn condition_number(m: &DMatrix<C64>) -> f64 {
    if m.nrows() != m.ncols() || m.is_empty() {
        return f64::INFINITY;
    }
    let sv = singular_values(m);
    let smin = *sv.last().unwrap();
    if smin == 0.0 {
        f64::INFINITY
    } else {
        sv[0] / smin
    }
}

/// Minimum-norm least-squares solution via the truncated SVD. Returns the
/// solution and the number of singular values kept.
pub(crate) fn pinv_solve(m: &DMatrix<C64>, y: &DVector<C64>, rank_tol: f64) -> (DVector<C64>, usize) {
    let n = m.ncols();
    if m.is_empty() {
        return (DVector::zeros(n), 0);
    }
    let dec = svd(m, false);
    let smax = dec.s.first().copied().unwrap_or(0.0);
    let mut x = DVector::zeros(n);
    let mut kept = 0;
    for (k, &s) in dec.s.iter().enumerate() {
        if smax == 0.0 || s <= rank_tol * smax {
            continue;
        }
        kept += 1;
        let coeff = dec.u.column(k).dotc(y) / C64::new(s, 0.0);
        x += dec.v.column(k) * coeff;
    }
    (x, kept)
}

/// Moore-Penrose pseudo-inverse keeping every non-zero singular value.
pub(crate) fn pseudo_inverse(m: &DMatrix<C64>) -> DMatrix<C64> {
    let dec = svd(m, false);
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for (k, &s) in dec.s.iter().enumerate() {
        if s > 0.0 {
            out += dec.v.column(k) * dec.u.column(k).adjoint() / C64::new(s, 0.0);
        }
    }
    out
}

/// Copies `m` with every non-zero row scaled to unit Euclidean norm.
pub(crate) fn normalize_rows(m: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = m.clone();
    for mut row in out.row_iter_mut() {
        let n = row.norm();
        if n > 0.0 {
            row /= C64::new(n, 0.0);
        }
    }
    out
}

pub(crate) fn select_columns(m: &DMatrix<C64>, cols: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols[j])])
}

pub(crate) fn select_rows(m: &DMatrix<C64>, rows: &[usize]) -> DMatrix<C64> {
    DMatrix::from_fn(rows.len(), m.ncols(), |i, j| m[(rows[i], j)])
}

pub(crate) fn hstack(blocks: &[DMatrix<C64>], nrows: usize) -> DMatrix<C64> {
    let ncols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(nrows, ncols);
    let mut at = 0;
    for b in blocks {
        out.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    out
}

pub(crate) fn vector_is_finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
