//! Finite-truncation demonstrations: completeness, near-dependence of
//! iterate families, decay of lower frame bounds, and a periodized
//! tridiagonal example that stays a Riesz basis.

use nalgebra::{DMatrix, DVector};

use super::gramian::{gramian_matrix, hermitian_extremes};
use super::{DiskSequence, WeightedVector};
use crate::error::{Error, Result};
use crate::feasibility::EigenDiagnostic;
use crate::matrix::{condition_number, default_rank_tol, pinv_solve, rank_relative, singular_values, C64};
use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub complete: bool,
    /// Required rank is `dim E_j`; achieved rank is that of `{P_j b_i}`.
    pub per_eigenvalue: Vec<EigenDiagnostic>,
    pub witness: Vec<C64>,
}

/// Completeness of `{D^l b_i}` on each eigenspace of a diagonal model.
///
/// Coordinates are grouped by eigenvalue in the order given: the first
/// `multiplicities[0]` coordinates belong to `eigenvalues[0]`, and so on.
/// Each `vectors[i]` is a sampled `b_i` in these coordinates.
pub fn completeness_truncated(
    eigenvalues: &[C64],
    multiplicities: &[usize],
    vectors: &[Vec<C64>],
    rank_tol: f64,
) -> Result<CompletenessReport> {
    if eigenvalues.len() != multiplicities.len() || eigenvalues.is_empty() {
        return Err(Error::degenerate(
            "eigenvalues and multiplicities must be non-empty and aligned",
        ));
    }
    if multiplicities.contains(&0) {
        return Err(Error::degenerate("multiplicities must be positive"));
    }
    for (i, a) in eigenvalues.iter().enumerate() {
        if eigenvalues[i + 1..].contains(a) {
            return Err(Error::degenerate("eigenvalues must be distinct"));
        }
    }
    let k: usize = multiplicities.iter().sum();
    if vectors.is_empty() || vectors.iter().any(|v| v.len() != k) {
        return Err(Error::degenerate(format!("each sampled vector must have length {k}")));
    }
    let scale = vectors.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let threshold = rank_tol * scale;
    let mut per_eigenvalue = Vec::with_capacity(eigenvalues.len());
    let mut witness = Vec::new();
    let mut offset = 0;
    for (&lambda, &h) in eigenvalues.iter().zip(multiplicities) {
        let block = DMatrix::from_fn(h, vectors.len(), |r, c| vectors[c][offset + r]);
        let achieved = singular_values(&block).iter().filter(|&&s| s > threshold).count();
        if achieved < h {
            witness.push(lambda);
        }
        per_eigenvalue.push(EigenDiagnostic {
            eigenvalue: lambda,
            required_rank: h,
            achieved_rank: achieved,
        });
        offset += h;
    }
    Ok(CompletenessReport {
        complete: witness.is_empty(),
        per_eigenvalue,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuntzReport {
    /// `dist(D^l b, span{D^n b : n in exponents})`.
    pub distance: f64,
    /// `||D^l b||`.
    pub target_norm: f64,
    pub relative: f64,
}

/// Least-squares distance from `D^l b` to the span of the other iterates.
pub fn muntz_defect(seq: &DiskSequence, b: &WeightedVector, exponents: &[u64], l: u64) -> Result<MuntzReport> {
    if exponents.contains(&l) {
        return Err(Error::degenerate(format!(
            "target exponent {l} is among the spanning exponents"
        )));
    }
    let target = DVector::from_vec(seq.apply_power(b, l)?);
    let target_norm = target.norm();
    let distance = if exponents.is_empty() {
        target_norm
    } else {
        let cols: Vec<DVector<C64>> = exponents
            .iter()
            .map(|&n| seq.apply_power(b, n).map(DVector::from_vec))
            .collect::<Result<_>>()?;
        let v = DMatrix::from_columns(&cols);
        let (x, _) = pinv_solve(&v, &target, f64::EPSILON * v.nrows().max(v.ncols()) as f64);
        (&v * x - &target).norm()
    };
    Ok(MuntzReport {
        distance,
        target_norm,
        relative: if target_norm > 0.0 { distance / target_norm } else { 0.0 },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameFailurePoint {
    pub k: usize,
    /// Number of iterates `D^l b`, `l = 0..L(K)`, with `L(K) = K - 1`.
    pub iterates: usize,
    /// Smallest eigenvalue of the frame operator of the raw iterates on `C^K`.
    pub raw_lower: f64,
    /// Same for the iterates scaled to unit norm.
    pub normalized_lower: f64,
}

/// Lower frame bound estimates of `{D^l b}` on the first `K` coordinates
/// for each `K` in `ks`. Requires `|lambda_k| <= 1 - gap_tol` throughout.
pub fn frame_failure_profile(
    seq: &DiskSequence,
    b: &WeightedVector,
    ks: &[usize],
    gap_tol: f64,
) -> Result<Vec<FrameFailurePoint>> {
    if let Some(k) = (0..seq.len()).find(|&k| seq.gap(k) < gap_tol) {
        return Err(Error::HypothesisViolated(format!(
            "|lambda_{}| = {} is within {gap_tol} of the unit circle",
            k + 1,
            seq.lambdas()[k].norm()
        )));
    }
    if ks.is_empty() || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::degenerate(
            "truncation levels must be non-empty and strictly ascending",
        ));
    }
    if b.values.len() != seq.len() {
        return Err(Error::degenerate("weight length does not match the sequence"));
    }
    par::map(ks, |&k| {
        let s = seq.truncate(k)?;
        let bk = b.truncate(k);
        let cols: Vec<DVector<C64>> = (0..k as u64)
            .map(|l| s.apply_power(&bk, l).map(DVector::from_vec))
            .collect::<Result<_>>()?;
        let raw = DMatrix::from_columns(&cols);
        let normalized = DMatrix::from_columns(
            &cols
                .iter()
                .map(|c| {
                    let n = c.norm();
                    if n > 0.0 {
                        c / C64::new(n, 0.0)
                    } else {
                        c.clone()
                    }
                })
                .collect::<Vec<_>>(),
        );
        let lower = |m: &DMatrix<C64>| {
            let sv = singular_values(m);
            let smin = sv.last().copied().unwrap_or(0.0);
            smin * smin
        };
        Ok(FrameFailurePoint {
            k,
            iterates: k,
            raw_lower: lower(&raw),
            normalized_lower: lower(&normalized),
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedBounds {
    /// Extreme eigenvalues of the frame operator of `{D^l b : l >= 0}` on `C^K`.
    pub lower: f64,
    pub upper: f64,
    /// Same for `b^0` (the normalized Gramian).
    pub canonical_lower: f64,
    pub canonical_upper: f64,
    pub multiplier_min: f64,
    pub multiplier_max: f64,
}

/// Frame bounds of `{D^l b}` on the truncated space.
///
/// The frame operator has entries `b_s conj(b_t) / (1 - lambda_s conj(lambda_t))`,
/// i.e. `diag(m) G diag(conj m)` with `G` the normalized Gramian.
pub fn weighted_frame_bounds(seq: &DiskSequence, b: &WeightedVector) -> Result<WeightedBounds> {
    let m = b.multipliers(seq)?;
    let g = gramian_matrix(seq);
    let k = seq.len();
    let weighted = DMatrix::from_fn(k, k, |s, t| m[s] * g[(s, t)] * m[t].conj());
    let (lower, upper) = hermitian_extremes(&weighted);
    let (canonical_lower, canonical_upper) = hermitian_extremes(&g);
    let moduli: Vec<f64> = m.iter().map(|z| z.norm()).collect();
    Ok(WeightedBounds {
        lower,
        upper,
        canonical_lower,
        canonical_upper,
        multiplier_min: moduli.iter().copied().fold(f64::INFINITY, f64::min),
        multiplier_max: moduli.iter().copied().fold(0.0, f64::max),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantReport {
    pub m: usize,
    pub dimension: usize,
    /// Sampled sites (0-based).
    pub sites: Vec<usize>,
    pub vectors: usize,
    pub rank: usize,
    /// 2-norm condition number of the matrix of iterates; infinite unless it
    /// is square and invertible.
    pub condition: f64,
    pub basis: bool,
}

/// Iterates `A^l e_i`, `l = 0, 1, 2`, at every third site of the size-`3m`
/// periodized operator `A = B^{-1} D B`.
pub fn circulant_riesz_demo(m: usize) -> Result<CirculantReport> {
    circulant_riesz_demo_with_stride(m, 3)
}

/// As [`circulant_riesz_demo`], sampling every `stride`-th site.
///
/// `B` is circulant with 1 on the diagonal and 1/4 on both neighbouring
/// diagonals (wrapping around); `D` repeats the pattern `(2, 1, -1)`.
pub fn circulant_riesz_demo_with_stride(m: usize, stride: usize) -> Result<CirculantReport> {
    if m < 2 {
        return Err(Error::degenerate("circulant demo needs m >= 2"));
    }
    if stride == 0 {
        return Err(Error::degenerate("stride must be positive"));
    }
    let d = 3 * m;
    let b = DMatrix::from_fn(d, d, |i, j| {
        let gap = (i + d - j) % d;
        if gap == 0 {
            C64::new(1.0, 0.0)
        } else if gap == 1 || gap == d - 1 {
            C64::new(0.25, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let pattern = [2.0, 1.0, -1.0];
    let dm = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(pattern[i % 3], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let b_inv = b
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::degenerate("circulant B is singular"))?;
    let a = &b_inv * dm * &b;
    let sites: Vec<usize> = (0..d).step_by(stride).collect();
    let mut cols = Vec::with_capacity(3 * sites.len());
    for &i in &sites {
        let mut v = DVector::zeros(d);
        v[i] = C64::new(1.0, 0.0);
        for _ in 0..3 {
            let next = &a * &v;
            cols.push(std::mem::replace(&mut v, next));
        }
    }
    let v = DMatrix::from_columns(&cols);
    let rank = rank_relative(&v, default_rank_tol(d));
    let basis = rank == d && v.ncols() == d;
    Ok(CirculantReport {
        m,
        dimension: d,
        sites,
        vectors: v.ncols(),
        rank,
        condition: if basis { condition_number(&v) } else { f64::INFINITY },
        basis,
    })
}
