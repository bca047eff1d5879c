use nalgebra::DMatrix;

use super::DiskSequence;
use crate::error::Result;
use crate::matrix::{hermitian_eigenvalues, C64};

/// Absolute bound on the dropped tail of the series oracle.
const SERIES_TAIL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GramianReport {
    pub k: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `max / min`; infinite when the smallest eigenvalue is not positive.
    pub condition: f64,
    /// Largest entrywise deviation between the closed form and the series oracle.
    pub series_deviation: f64,
}

/// Normalized kernel Gramian
/// `G(s,t) = sqrt((1-|lambda_s|^2)(1-|lambda_t|^2)) / (1 - lambda_s conj(lambda_t))`.
pub fn gramian_matrix(seq: &DiskSequence) -> DMatrix<C64> {
    let k = seq.len();
    let roots: Vec<f64> = (0..k).map(|j| seq.defect(j).sqrt()).collect();
    DMatrix::from_fn(k, k, |s, t| {
        if s == t {
            C64::new(1.0, 0.0)
        } else {
            C64::new(roots[s] * roots[t], 0.0) / seq.kernel_denominator(s, t)
        }
    })
}

/// Entry `(s, t)` from the truncated series
/// `sqrt(...) * sum_{l < L_0} (lambda_s conj(lambda_t))^l`, with `L_0` a power
/// of two beyond which the geometric tail is below `1e-12`. Partial sums are
/// doubled via `S_{2N} = S_N (1 + z^N)`.
pub fn series_entry(seq: &DiskSequence, s: usize, t: usize) -> C64 {
    let scale = (seq.defect(s) * seq.defect(t)).sqrt();
    let log_z = seq.log_kernel_product(s, t);
    if log_z.re == f64::NEG_INFINITY {
        return C64::new(scale, 0.0);
    }
    // 1 - |z| = -expm1(log|z|).
    let gap = -log_z.re.exp_m1();
    let needed = ((SERIES_TAIL * gap).ln() / log_z.re).max(1.0);
    let mut n: f64 = 1.0;
    let mut sum = C64::new(1.0, 0.0);
    while n < needed {
        sum *= C64::new(1.0, 0.0) + (log_z * n).exp();
        n *= 2.0;
    }
    sum * scale
}

pub(crate) fn hermitian_extremes(g: &DMatrix<C64>) -> (f64, f64) {
    let eig = hermitian_eigenvalues(g);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

/// Spectrum of the truncated Gramian with the series cross-check.
pub fn truncated_gramian(seq: &DiskSequence) -> Result<GramianReport> {
    let g = gramian_matrix(seq);
    let k = seq.len();
    let mut series_deviation: f64 = 0.0;
    for s in 0..k {
        for t in s..k {
            series_deviation = series_deviation.max((series_entry(seq, s, t) - g[(s, t)]).norm());
        }
    }
    let (min, max) = hermitian_extremes(&g);
    Ok(GramianReport {
        k,
        min_eigenvalue: min,
        max_eigenvalue: max,
        condition: if min > 0.0 { max / min } else { f64::INFINITY },
        series_deviation,
    })
}
