//! The space-time sampling operator, its frame bounds, synthetic samples and
//! least-squares reconstruction.
//!
//! Row `(i, j)` of the sampling matrix is `e_i^T A^j`, so applied to `f` it
//! yields the sample `(A^j f)(i)`. Rows are ordered site-major, time-minor,
//! following the order of `omega`.

use nalgebra::{DMatrix, DVector, RowDVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::feasibility::SamplingScheme;
use crate::matrix::{pinv_solve, singular_values, vector_is_finite, ComplexMatrix, C64};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseMeta {
    pub sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSpaceSamples {
    pub scheme: SamplingScheme,
    /// `(A^j f)(i)` in site-major, time-minor order.
    pub values: Vec<C64>,
    pub noise: Option<NoiseMeta>,
}

/// Squared-norm frame bounds of the rows of a sampling matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    /// Smallest eigenvalue of `M* M` (zero when `M` has fewer rows than columns).
    pub c1: f64,
    /// Largest eigenvalue of `M* M`.
    pub c2: f64,
    /// `sqrt(c2 / c1)`; infinite when `c1 = 0`.
    pub condition: f64,
    /// `sigma_min > rank_tol * sigma_max`.
    pub feasible: bool,
    pub rank: usize,
    /// Singular values of `M`, descending.
    pub singular_values: Vec<f64>,
}

/// Stacks the rows `e_i^T A^j` for `i` in `omega` and `j = 0..=l_i`.
pub fn build_sampling_matrix(a: &ComplexMatrix, scheme: &SamplingScheme) -> Result<ComplexMatrix> {
    let d = a.require_square("evolution operator")?;
    scheme.validate_for(d)?;
    let am = a.as_dmatrix();
    let mut rows: Vec<RowDVector<C64>> = Vec::with_capacity(scheme.sample_count(d));
    for (k, &i) in scheme.omega().iter().enumerate() {
        let mut row = RowDVector::zeros(d);
        row[i] = C64::new(1.0, 0.0);
        for _ in 0..scheme.budget(k, d) {
            let next = &row * am;
            rows.push(std::mem::replace(&mut row, next));
        }
        rows.push(row);
    }
    ComplexMatrix::from_dmatrix(DMatrix::from_rows(&rows))
}

pub fn frame_bounds(m: &ComplexMatrix, rank_tol: f64) -> Result<FrameReport> {
    if m.is_empty() {
        return Err(Error::degenerate("sampling matrix is empty"));
    }
    let sv = singular_values(m.as_dmatrix());
    let d = m.ncols();
    let smax = sv[0];
    let smin = if m.nrows() >= d { sv[d - 1] } else { 0.0 };
    let (c1, c2) = (smin * smin, smax * smax);
    let rank = sv.iter().filter(|&&s| smax > 0.0 && s > rank_tol * smax).count();
    Ok(FrameReport {
        c1,
        c2,
        condition: if c1 > 0.0 { (c2 / c1).sqrt() } else { f64::INFINITY },
        feasible: smax > 0.0 && smin > rank_tol * smax,
        rank,
        singular_values: sv,
    })
}

/// Samples of `f` with additive circular complex Gaussian noise of standard
/// deviation `sigma` (`sigma / sqrt(2)` per real component).
pub fn simulate_samples(
    a: &ComplexMatrix,
    scheme: &SamplingScheme,
    f: &[C64],
    sigma: f64,
    seed: u64,
) -> Result<TimeSpaceSamples> {
    if f.len() != a.ncols() {
        return Err(Error::degenerate(format!(
            "signal length {} does not match dimension {}",
            f.len(),
            a.ncols()
        )));
    }
    if !vector_is_finite(f) {
        return Err(Error::degenerate("signal has non-finite entries"));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::degenerate("noise level must be non-negative and finite"));
    }
    let m = build_sampling_matrix(a, scheme)?;
    let mut values: Vec<C64> = (m.as_dmatrix() * DVector::from_column_slice(f))
        .iter()
        .copied()
        .collect();
    let noise = if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma / std::f64::consts::SQRT_2).expect("valid deviation");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in values.iter_mut() {
            *v += C64::new(normal.sample(&mut rng), normal.sample(&mut rng));
        }
        Some(NoiseMeta { sigma, seed })
    } else {
        None
    };
    Ok(TimeSpaceSamples {
        scheme: scheme.clone(),
        values,
        noise,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub estimate: Vec<C64>,
    /// `||M f_hat - y||_2`.
    pub residual: f64,
    /// True when the sampling matrix is rank deficient; the estimate is then
    /// the minimum-norm least-squares solution.
    pub underdetermined: bool,
    pub rank: usize,
    pub frame: FrameReport,
}

/// Minimum-norm least-squares estimate of `f` from its samples via the SVD.
pub fn reconstruct(a: &ComplexMatrix, samples: &TimeSpaceSamples, rank_tol: f64) -> Result<Reconstruction> {
    let m = build_sampling_matrix(a, &samples.scheme)?;
    if samples.values.len() != m.nrows() {
        return Err(Error::degenerate(format!(
            "scheme expects {} samples, got {}",
            m.nrows(),
            samples.values.len()
        )));
    }
    if !vector_is_finite(&samples.values) {
        return Err(Error::degenerate("samples have non-finite entries"));
    }
    let y = DVector::from_column_slice(&samples.values);
    let (x, rank) = pinv_solve(m.as_dmatrix(), &y, rank_tol);
    let residual = (m.as_dmatrix() * &x - &y).norm();
    let frame = frame_bounds(&m, rank_tol)?;
    Ok(Reconstruction {
        estimate: x.iter().copied().collect(),
        residual,
        underdetermined: !frame.feasible,
        rank,
        frame,
    })
}

/// [`reconstruct`] over many sample sets, concurrently when enabled.
pub fn reconstruct_batch(a: &ComplexMatrix, batch: &[TimeSpaceSamples], rank_tol: f64) -> Vec<Result<Reconstruction>> {
    par::map(batch, |s| reconstruct(a, s, rank_tol))
}
