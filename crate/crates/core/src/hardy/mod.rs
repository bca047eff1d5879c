//! Spectral model `D = sum_k lambda_k P_k` with rank-one projections, probed
//! at finite truncation levels `K`.
//!
//! Points near the unit circle are stored through their complement
//! `c = sigma - lambda` with anchor `sigma = +1` or `-1` (the nearer of the
//! two). Distances, kernel denominators `1 - lambda_s conj(lambda_t)` and the
//! defects `1 - |lambda|^2` are evaluated from `c`, so families such as
//! `lambda_k = 1 - 2^{-k}` keep full relative accuracy even after
//! `1 - 2^{-k}` rounds to one.

mod carleson;
mod demos;
mod gramian;

pub use carleson::{carleson_products, CarlesonReport};
pub use demos::{
    circulant_riesz_demo, circulant_riesz_demo_with_stride, completeness_truncated, frame_failure_profile,
    muntz_defect, weighted_frame_bounds, CirculantReport, CompletenessReport, FrameFailurePoint, MuntzReport,
    WeightedBounds,
};
pub use gramian::{gramian_matrix, series_entry, truncated_gramian, GramianReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{vector_is_finite, C64};
use crate::par;

/// Points `lambda_k` of the open unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskSequence {
    lambdas: Vec<C64>,
    anchors: Vec<f64>,
    complements: Vec<C64>,
}

/// `log(1 - w)`, accurate for small `|w|`.
pub(crate) fn log_one_minus(w: C64) -> C64 {
    C64::new(0.5 * (w.norm_sqr() - 2.0 * w.re).ln_1p(), (-w.im).atan2(1.0 - w.re))
}

impl DiskSequence {
    /// Validates `|lambda_k| < 1` and finiteness.
    pub fn new(lambdas: Vec<C64>) -> Result<Self> {
        if !vector_is_finite(&lambdas) {
            return Err(Error::degenerate("sequence has non-finite points"));
        }
        let anchors: Vec<f64> = lambdas.iter().map(|z| if z.re >= 0.0 { 1.0 } else { -1.0 }).collect();
        let complements = lambdas
            .iter()
            .zip(&anchors)
            .map(|(z, &s)| C64::new(s, 0.0) - z)
            .collect();
        Self::checked(lambdas, anchors, complements)
    }

    /// Points `1 - c_k` given through their complements `c_k`.
    pub fn from_complements(complements: Vec<C64>) -> Result<Self> {
        if !vector_is_finite(&complements) {
            return Err(Error::degenerate("sequence has non-finite points"));
        }
        let lambdas = complements.iter().map(|c| C64::new(1.0, 0.0) - c).collect();
        let anchors = vec![1.0; complements.len()];
        Self::checked(lambdas, anchors, complements)
    }

    fn checked(lambdas: Vec<C64>, anchors: Vec<f64>, complements: Vec<C64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::degenerate("sequence is empty"));
        }
        let seq = DiskSequence {
            lambdas,
            anchors,
            complements,
        };
        if let Some(k) = (0..seq.len()).find(|&k| seq.defect(k).is_nan() || seq.defect(k) <= 0.0) {
            return Err(Error::degenerate(format!(
                "point {} is not inside the open unit disk",
                k + 1
            )));
        }
        Ok(seq)
    }

    /// `lambda_k = 1 - rate^k`, `k = 1..=K`.
    pub fn geometric(rate: f64, k: usize) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::degenerate("geometric rate must lie in (0, 1)"));
        }
        Self::from_complements((1..=k).map(|j| C64::new(rate.powi(j as i32), 0.0)).collect())
    }

    /// `lambda_k = 1 - k^{-power}`, `k = 1..=K`.
    pub fn polynomial(power: f64, k: usize) -> Result<Self> {
        if !(power > 0.0 && power.is_finite()) {
            return Err(Error::degenerate("polynomial power must be positive"));
        }
        Self::from_complements((1..=k).map(|j| C64::new((j as f64).powf(-power), 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[C64] {
        &self.lambdas
    }

    /// The first `k` points.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::degenerate(format!(
                "truncation level {k} outside 1..={}",
                self.len()
            )));
        }
        Ok(DiskSequence {
            lambdas: self.lambdas[..k].to_vec(),
            anchors: self.anchors[..k].to_vec(),
            complements: self.complements[..k].to_vec(),
        })
    }

    fn same_anchor(&self, s: usize, t: usize) -> bool {
        self.anchors[s] == self.anchors[t]
    }

    /// `1 - lambda_s conj(lambda_t)`.
    pub fn kernel_denominator(&self, s: usize, t: usize) -> C64 {
        if self.same_anchor(s, t) {
            let (cs, ct) = (self.complements[s], self.complements[t].conj());
            (cs + ct) * self.anchors[s] - cs * ct
        } else {
            C64::new(1.0, 0.0) - self.lambdas[s] * self.lambdas[t].conj()
        }
    }

    /// `1 - |lambda_k|^2`.
    pub fn defect(&self, k: usize) -> f64 {
        self.kernel_denominator(k, k).re
    }

    /// `1 - |lambda_k|`.
    pub fn gap(&self, k: usize) -> f64 {
        self.defect(k) / (1.0 + self.lambdas[k].norm())
    }

    /// `|lambda_s - lambda_t|`.
    pub fn distance(&self, s: usize, t: usize) -> f64 {
        if self.same_anchor(s, t) {
            (self.complements[s] - self.complements[t]).norm()
        } else {
            (self.lambdas[s] - self.lambdas[t]).norm()
        }
    }

    /// `log(lambda_s conj(lambda_t))`, `-inf` real part when the product is zero.
    ///
    /// Near the boundary it comes from the kernel denominator; away from it
    /// the direct product is the accurate one.
    pub(crate) fn log_kernel_product(&self, s: usize, t: usize) -> C64 {
        let z = self.lambdas[s] * self.lambdas[t].conj();
        if z.norm() <= 0.5 {
            if z == C64::new(0.0, 0.0) {
                return C64::new(f64::NEG_INFINITY, 0.0);
            }
            z.ln()
        } else {
            log_one_minus(self.kernel_denominator(s, t))
        }
    }

    /// `lambda_k^n`.
    pub fn power(&self, k: usize, n: u64) -> C64 {
        if n == 0 {
            return C64::new(1.0, 0.0);
        }
        let lambda = self.lambdas[k];
        if lambda.norm() <= 0.5 {
            return if lambda == C64::new(0.0, 0.0) {
                lambda
            } else {
                (lambda.ln() * n as f64).exp()
            };
        }
        let sigma = self.anchors[k];
        let c = self.complements[k] * sigma;
        if c == C64::new(1.0, 0.0) {
            return C64::new(0.0, 0.0);
        }
        let sign = if sigma < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        (log_one_minus(c) * n as f64).exp() * sign
    }

    /// `D^n b` at this truncation.
    pub fn apply_power(&self, b: &WeightedVector, n: u64) -> Result<Vec<C64>> {
        b.check_len(self)?;
        Ok((0..self.len()).map(|k| self.power(k, n) * b.values[k]).collect())
    }
}

/// Coefficient vector `b` of the single sampled site.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector {
    pub values: Vec<C64>,
}

impl WeightedVector {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if !vector_is_finite(&values) {
            return Err(Error::degenerate("weights have non-finite entries"));
        }
        Ok(WeightedVector { values })
    }

    /// `b^0_k = sqrt(1 - |lambda_k|^2)`, the vector with `m_k = 1`.
    pub fn canonical(seq: &DiskSequence) -> Self {
        WeightedVector {
            values: (0..seq.len()).map(|k| C64::new(seq.defect(k).sqrt(), 0.0)).collect(),
        }
    }

    /// `b_k = m_k sqrt(1 - |lambda_k|^2)`.
    pub fn from_multipliers(seq: &DiskSequence, m: &[C64]) -> Result<Self> {
        if m.len() != seq.len() {
            return Err(Error::degenerate("multiplier length does not match the sequence"));
        }
        Self::new((0..seq.len()).map(|k| m[k] * seq.defect(k).sqrt()).collect())
    }

    /// `m_k = b_k / sqrt(1 - |lambda_k|^2)`.
    pub fn multipliers(&self, seq: &DiskSequence) -> Result<Vec<C64>> {
        self.check_len(seq)?;
        Ok((0..seq.len()).map(|k| self.values[k] / seq.defect(k).sqrt()).collect())
    }

    pub fn truncate(&self, k: usize) -> Self {
        WeightedVector {
            values: self.values[..k.min(self.values.len())].to_vec(),
        }
    }

    fn check_len(&self, seq: &DiskSequence) -> Result<()> {
        if self.values.len() != seq.len() {
            return Err(Error::degenerate(format!(
                "weight length {} does not match sequence length {}",
                self.values.len(),
                seq.len()
            )));
        }
        Ok(())
    }
}

/// Generator specification for the two canonical families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SequenceFamily {
    Geometric {
        rate: f64,
        #[serde(rename = "K")]
        k: usize,
    },
    Polynomial {
        power: f64,
        #[serde(rename = "K")]
        k: usize,
    },
}

impl SequenceFamily {
    pub fn generate(&self) -> Result<DiskSequence> {
        match *self {
            SequenceFamily::Geometric { rate, k } => DiskSequence::geometric(rate, k),
            SequenceFamily::Polynomial { power, k } => DiskSequence::polynomial(power, k),
        }
    }

    pub fn with_len(&self, len: usize) -> Self {
        match *self {
            SequenceFamily::Geometric { rate, .. } => SequenceFamily::Geometric { rate, k: len },
            SequenceFamily::Polynomial { power, .. } => SequenceFamily::Polynomial { power, k: len },
        }
    }
}

/// Finite-sample thresholds for the one-point frame conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictOptions {
    /// The Carleson check passes when the infimum is at least this.
    pub delta_tol: f64,
    /// Multiplier bounds `c1 <= |m_k| <= c2`.
    pub c1: f64,
    pub c2: f64,
    /// The boundary trend passes when `max(1 - |lambda|)` over the last decile is
    /// at most this fraction of the same maximum over the first decile.
    pub trend_ratio: f64,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            delta_tol: 1e-3,
            c1: 1e-3,
            c2: 1e3,
            trend_ratio: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameVerdict {
    pub k: usize,
    pub inside_disk: bool,
    /// Ratio of `max(1 - |lambda_k|)` over the last decile to the first decile.
    pub trend_statistic: f64,
    pub accumulates_at_boundary: bool,
    pub carleson_infimum: f64,
    pub carleson: bool,
    pub multiplier_min: f64,
    pub multiplier_max: f64,
    pub multipliers_bounded: bool,
    pub overall: bool,
    pub options: VerdictOptions,
}

impl FrameVerdict {
    pub const NOTE: &'static str = "truncation-level evidence, not a proof";
}

/// Checks the four one-point frame conditions at the sequence's length.
pub fn one_point_frame_verdict(seq: &DiskSequence, b: &WeightedVector, opts: &VerdictOptions) -> Result<FrameVerdict> {
    let k = seq.len();
    let m = b.multipliers(seq)?;
    let inside_disk = (0..k).all(|j| seq.defect(j) > 0.0);
    let decile = (k / 10).max(1);
    let max_gap = |range: std::ops::Range<usize>| range.map(|j| seq.gap(j)).fold(0.0, f64::max);
    let first = max_gap(0..decile);
    let last = max_gap(k - decile..k);
    let trend_statistic = if first > 0.0 { last / first } else { f64::INFINITY };
    let carleson = carleson_products(seq);
    let moduli: Vec<f64> = m.iter().map(|z| z.norm()).collect();
    let multiplier_min = moduli.iter().copied().fold(f64::INFINITY, f64::min);
    let multiplier_max = moduli.iter().copied().fold(0.0, f64::max);
    let accumulates_at_boundary = k >= 2 && trend_statistic <= opts.trend_ratio;
    let carleson_ok = carleson.infimum >= opts.delta_tol;
    let multipliers_bounded = multiplier_min >= opts.c1 && multiplier_max <= opts.c2;
    Ok(FrameVerdict {
        k,
        inside_disk,
        trend_statistic,
        accumulates_at_boundary,
        carleson_infimum: carleson.infimum,
        carleson: carleson_ok,
        multiplier_min,
        multiplier_max,
        multipliers_bounded,
        overall: inside_disk && accumulates_at_boundary && carleson_ok && multipliers_bounded,
        options: *opts,
    })
}

/// Carleson infimum, Gramian spectrum and verdict at one truncation level.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendPoint {
    pub k: usize,
    pub carleson: CarlesonReport,
    pub gramian: GramianReport,
    pub verdict: FrameVerdict,
}

/// Evaluates every truncation level in `ks` (ascending, each at most the
/// sequence length), concurrently when enabled. Output is ordered by `K`.
pub fn trend_report(
    seq: &DiskSequence,
    b: &WeightedVector,
    ks: &[usize],
    opts: &VerdictOptions,
) -> Result<Vec<TrendPoint>> {
    if ks.is_empty() || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::degenerate(
            "truncation levels must be non-empty and strictly ascending",
        ));
    }
    b.check_len(seq)?;
    par::map(ks, |&k| {
        let s = seq.truncate(k)?;
        let bk = b.truncate(k);
        Ok(TrendPoint {
            k,
            carleson: carleson_products(&s),
            gramian: truncated_gramian(&s)?,
            verdict: one_point_frame_verdict(&s, &bk, opts)?,
        })
    })
    .into_iter()
    .collect()
}
