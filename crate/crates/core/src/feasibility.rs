//! Recoverability criteria for space-time sampling schemes.
//!
//! Sites are 0-based here; file formats translate to 1-based indices.
//!
//! With a factorization `A* = B^{-1} J B` and `b_i = B e_i`, unlimited
//! sampling at the sites `Omega` recovers every signal exactly when, for each
//! eigenvalue, the vectors `b_i` restricted to the cyclic rows of that
//! eigenvalue's Jordan blocks have full rank (one row per block). In the
//! diagonalizable case every block has size one and this is the rank of
//! `P_j b_i` against `dim E_j`.
//!
//! Finite budgets are checked in the same coordinates: the iterate families
//! `{J^j b_i : j <= l_i}` span the same space as the unlimited ones exactly
//! when every `J^{l_i+1} b_i` already lies in their span.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::krylov::{breakdown_threshold, krylov_basis, stacked_krylov};
use crate::matrix::{
    eigenvalues, hstack, normalize_rows, rank_absolute, rank_relative, select_columns, select_rows, ComplexMatrix,
    Tolerances, C64, ONE, ZERO,
};
use crate::par;
use crate::spectral::{eigendecompose, jordan_structure, JordanStructure, SpectralData};

/// Per-site time budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Budgets {
    /// The same number of time steps `L` at every site (samples at `j = 0..=L`).
    Uniform(usize),
    /// One budget `l_i` per site, aligned with `omega`.
    PerSite(Vec<usize>),
    /// As many time steps as help; capped at `d - 1`.
    Unlimited,
}

/// Spatial site set `Omega` with time budgets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplingScheme {
    omega: Vec<usize>,
    budgets: Budgets,
}

impl SamplingScheme {
    pub fn new(omega: Vec<usize>, budgets: Budgets) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::InvalidScheme("omega is empty".into()));
        }
        let mut sorted = omega.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidScheme("omega has repeated sites".into()));
        }
        if let Budgets::PerSite(l) = &budgets {
            if l.len() != omega.len() {
                return Err(Error::InvalidScheme(format!(
                    "{} budgets for {} sites",
                    l.len(),
                    omega.len()
                )));
            }
        }
        Ok(SamplingScheme { omega, budgets })
    }

    pub fn uniform(omega: Vec<usize>, l: usize) -> Result<Self> {
        Self::new(omega, Budgets::Uniform(l))
    }

    pub fn per_site(omega: Vec<usize>, budgets: Vec<usize>) -> Result<Self> {
        Self::new(omega, Budgets::PerSite(budgets))
    }

    pub fn unlimited(omega: Vec<usize>) -> Result<Self> {
        Self::new(omega, Budgets::Unlimited)
    }

    pub fn omega(&self) -> &[usize] {
        &self.omega
    }

    pub fn budgets(&self) -> &Budgets {
        &self.budgets
    }

    /// Checks that every site index is below `d`.
    pub fn validate_for(&self, d: usize) -> Result<()> {
        if let Some(&bad) = self.omega.iter().find(|&&i| i >= d) {
            return Err(Error::InvalidScheme(format!(
                "site {} is out of range for dimension {d}",
                bad + 1
            )));
        }
        Ok(())
    }

    /// Budget of the `k`-th site of `omega` in dimension `d`.
    pub fn budget(&self, k: usize, d: usize) -> usize {
        match &self.budgets {
            Budgets::Uniform(l) => *l,
            Budgets::PerSite(l) => l[k],
            Budgets::Unlimited => d.saturating_sub(1),
        }
    }

    pub fn sample_count(&self, d: usize) -> usize {
        (0..self.omega.len()).map(|k| self.budget(k, d) + 1).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDiagnostic {
    pub eigenvalue: C64,
    /// `gamma_s` (Jordan) or `dim E_j` (diagonalizable).
    pub required_rank: usize,
    pub achieved_rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// The unlimited-budget criterion.
    pub spanning: bool,
    /// Whether the given budgets reach the span of the unlimited iterates.
    pub budgets_sufficient: bool,
    pub per_eigenvalue: Vec<EigenDiagnostic>,
    /// Eigenvalues whose projected sensor set fails to span.
    pub witness: Vec<C64>,
    /// `r_i - 1` per site of `omega`, with `r_i` the annihilator degree of
    /// `b_i`; `None` for inert sites (`b_i = 0`).
    pub used_budgets: Vec<Option<usize>>,
    /// Sites whose budget stops short of what the criterion needs.
    pub short_sites: Vec<usize>,
    pub inert_sites: Vec<usize>,
    pub trusted: bool,
    pub warnings: Vec<String>,
}

fn evaluate(js: &JordanStructure, scheme: &SamplingScheme) -> Result<FeasibilityReport> {
    let d = js.dimension;
    scheme.validate_for(d)?;
    let omega = scheme.omega();
    let rank_tol = js.tolerances.rank;
    let b = js.basis.as_dmatrix();
    let j = js.jordan.as_dmatrix();

    let mut per_eigenvalue = Vec::with_capacity(js.groups.len());
    let mut witness = Vec::new();
    for g in &js.groups {
        // Unit rows make the test invariant under rescaling of the chain vectors.
        let rows = normalize_rows(&select_rows(b, &g.cyclic_rows));
        let achieved = rank_absolute(&select_columns(&rows, omega), rank_tol);
        let required = g.block_count();
        if achieved < required {
            witness.push(g.eigenvalue);
        }
        per_eigenvalue.push(EigenDiagnostic {
            eigenvalue: g.eigenvalue,
            required_rank: required,
            achieved_rank: achieved,
        });
    }
    let spanning = witness.is_empty();

    let thr = breakdown_threshold(j, rank_tol);
    let site_vectors: Vec<DVector<C64>> = omega.iter().map(|&i| b.column(i).into_owned()).collect();
    let mut used_budgets = Vec::with_capacity(omega.len());
    let mut inert_sites = Vec::new();
    for (k, v) in site_vectors.iter().enumerate() {
        let r = krylov_basis(j, v, d, thr).len();
        if r == 0 {
            inert_sites.push(omega[k]);
            used_budgets.push(None);
        } else {
            used_budgets.push(Some(r - 1));
        }
    }

    let mut short_sites = Vec::new();
    let needs_check = used_budgets
        .iter()
        .enumerate()
        .any(|(k, u)| u.is_some_and(|u| scheme.budget(k, d) < u));
    if needs_check {
        let starts: Vec<(DVector<C64>, usize)> = site_vectors
            .iter()
            .enumerate()
            .map(|(k, v)| (v.clone(), scheme.budget(k, d) + 1))
            .collect();
        let (span, bases) = stacked_krylov(j, &starts, rank_tol);
        let base_rank = rank_relative(&span, rank_tol);
        for (k, basis) in bases.iter().enumerate() {
            if let Some(next) = &basis.next {
                let extended = hstack(&[span.clone(), DMatrix::from_column_slice(d, 1, next.as_slice())], d);
                if rank_relative(&extended, rank_tol) > base_rank {
                    short_sites.push(omega[k]);
                }
            }
        }
    }
    let budgets_sufficient = short_sites.is_empty();

    let mut warnings = Vec::new();
    if !js.trusted {
        warnings.push("factorization is flagged untrusted; verdict may not be reliable".into());
    }
    for &i in &inert_sites {
        warnings.push(format!("site {} is inert (b_i = 0)", i + 1));
    }
    Ok(FeasibilityReport {
        feasible: spanning && budgets_sufficient,
        spanning,
        budgets_sufficient,
        per_eigenvalue,
        witness,
        used_budgets,
        short_sites,
        inert_sites,
        trusted: js.trusted,
        warnings,
    })
}

/// Unlimited-budget criterion in the diagonalizable case.
pub fn check_diagonalizable(sd: &SpectralData, omega: &[usize]) -> Result<FeasibilityReport> {
    evaluate(&JordanStructure::from(sd), &SamplingScheme::unlimited(omega.to_vec())?)
}

/// Unlimited-budget criterion for a Jordan factorization.
pub fn check_jordan(js: &JordanStructure, omega: &[usize]) -> Result<FeasibilityReport> {
    evaluate(js, &SamplingScheme::unlimited(omega.to_vec())?)
}

/// Criterion for a uniform budget `L` at every site.
#[allow(non_snake_case)]
pub fn check_fixed_L(js: &JordanStructure, omega: &[usize], L: usize) -> Result<FeasibilityReport> {
    evaluate(js, &SamplingScheme::uniform(omega.to_vec(), L)?)
}

/// Criterion for an arbitrary scheme.
pub fn check_scheme(js: &JordanStructure, scheme: &SamplingScheme) -> Result<FeasibilityReport> {
    evaluate(js, scheme)
}

/// Smallest uniform budget `L <= l_max` for which sampling `omega` is feasible.
pub fn minimal_uniform_l(js: &JordanStructure, omega: &[usize], l_max: usize) -> Result<Option<usize>> {
    let unlimited = check_jordan(js, omega)?;
    if !unlimited.feasible {
        return Ok(None);
    }
    let cap = unlimited.used_budgets.iter().flatten().copied().max().unwrap_or(0);
    let (mut lo, mut hi) = (0, cap.min(l_max));
    if !check_fixed_L(js, omega, hi)?.feasible {
        return Ok(None);
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if check_fixed_L(js, omega, mid)?.feasible {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Rank of `{A*^j e_i : i in Omega, j = 0..=l_i}`, computed from orthonormal
/// Krylov bases without any factorization.
pub fn brute_force_rank(a: &ComplexMatrix, scheme: &SamplingScheme, rank_tol: f64) -> Result<usize> {
    let d = a.require_square("evolution operator")?;
    scheme.validate_for(d)?;
    let adj = a.as_dmatrix().adjoint();
    let starts: Vec<(DVector<C64>, usize)> = scheme
        .omega()
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let mut e = DVector::zeros(d);
            e[i] = ONE;
            (e, scheme.budget(k, d) + 1)
        })
        .collect();
    let (span, _) = stacked_krylov(&adj, &starts, rank_tol);
    Ok(rank_relative(&span, rank_tol))
}

/// Independent oracle: the sampled iterates span `C^d`.
pub fn brute_force_feasible(a: &ComplexMatrix, scheme: &SamplingScheme, rank_tol: f64) -> Result<bool> {
    Ok(brute_force_rank(a, scheme, rank_tol)? == a.nrows())
}

/// How the factorization behind a verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralPath {
    Diagonalizable,
    Jordan,
    Supplied,
}

impl SpectralPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectralPath::Diagonalizable => "diagonalizable",
            SpectralPath::Jordan => "jordan",
            SpectralPath::Supplied => "supplied",
        }
    }
}

/// Eigendecomposition when `A` is diagonalizable, Jordan structure otherwise.
pub fn factorize(a: &ComplexMatrix, tol: &Tolerances) -> Result<(SpectralPath, JordanStructure)> {
    match eigendecompose(a, tol) {
        Ok(sd) => Ok((SpectralPath::Diagonalizable, JordanStructure::from(&sd))),
        Err(Error::NotDiagonalizable { .. }) => Ok((SpectralPath::Jordan, jordan_structure(a, tol)?)),
        Err(e) => Err(e),
    }
}

/// Criterion verdict together with the brute-force cross-check.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub path: SpectralPath,
    pub structure: JordanStructure,
    pub report: FeasibilityReport,
    pub oracle_rank: usize,
    pub oracle_feasible: bool,
}

impl Analysis {
    pub fn agrees(&self) -> bool {
        self.report.feasible == self.oracle_feasible
    }
}

pub fn analyze(a: &ComplexMatrix, scheme: &SamplingScheme, tol: &Tolerances) -> Result<Analysis> {
    let (path, structure) = factorize(a, tol)?;
    analyze_with(a, path, structure, scheme)
}

/// Analysis against an already computed or supplied factorization of `a`.
pub fn analyze_with(
    a: &ComplexMatrix,
    path: SpectralPath,
    structure: JordanStructure,
    scheme: &SamplingScheme,
) -> Result<Analysis> {
    if structure.dimension != a.nrows() {
        return Err(Error::degenerate("factorization dimension does not match A"));
    }
    let mut report = check_scheme(&structure, scheme)?;
    let oracle_rank = brute_force_rank(a, scheme, structure.tolerances.rank)?;
    let oracle_feasible = oracle_rank == a.nrows();
    if report.feasible != oracle_feasible {
        report.warnings.push(format!(
            "brute-force oracle disagrees (oracle rank {oracle_rank} of {})",
            a.nrows()
        ));
    }
    Ok(Analysis {
        path,
        structure,
        report,
        oracle_rank,
        oracle_feasible,
    })
}

#[derive(Debug, Clone)]
pub struct OracleCase {
    pub matrix: ComplexMatrix,
    pub scheme: SamplingScheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOutcome {
    pub path: SpectralPath,
    pub criterion: bool,
    pub oracle: bool,
    pub trusted: bool,
}

/// Criterion and oracle verdicts for a batch of cases with default
/// tolerances, evaluated concurrently when the `parallel` feature is on.
pub fn oracle_sweep(cases: &[OracleCase]) -> Vec<Result<OracleOutcome>> {
    par::map(cases, |c| {
        let tol = Tolerances::for_matrix(&c.matrix);
        let an = analyze(&c.matrix, &c.scheme, &tol)?;
        Ok(OracleOutcome {
            path: an.path,
            criterion: an.report.feasible,
            oracle: an.oracle_feasible,
            trusted: an.structure.trusted,
        })
    })
}

/// Vector `b` with `b_1 = 1` whose iterates `b, Mb, M^2 b` are linearly
/// dependent although `b` has a nonzero component along the cyclic vector
/// `e_1` of a companion block.
///
/// Draws `b_2` at random and solves `det[b, Mb, M^2 b] = 0` for `b_3`; the
/// determinant is a polynomial in `b_3` of degree at most 3. Real roots are
/// preferred. Fails with [`Error::NotFound`] when the determinant does not
/// vanish for any draw.
pub fn rational_form_counterexample(m: &ComplexMatrix, seed: u64) -> Result<Vec<C64>> {
    const DRAWS: usize = 64;
    if m.require_square("M")? != 3 {
        return Err(Error::degenerate("M must be 3x3"));
    }
    let mm = m.as_dmatrix();
    let det_at = |x2: C64, x3: C64| {
        let b = DVector::from_vec(vec![ONE, x2, x3]);
        let mb = mm * &b;
        let m2b = mm * &mb;
        DMatrix::from_columns(&[b, mb, m2b]).determinant()
    };
    let scale = mm.norm().max(1.0);
    let rank_tol = Tolerances::for_matrix(m).rank;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut complex_fallback = None;
    for _ in 0..DRAWS {
        let x2 = C64::new(rng.random_range(-1.0..1.0), 0.0);
        let nodes: [f64; 4] = [-1.0, 0.0, 1.0, 2.0];
        let vander = DMatrix::from_fn(4, 4, |r, c| C64::new(nodes[r].powi(c as i32), 0.0));
        let values = DVector::from_iterator(4, nodes.iter().map(|&x| det_at(x2, C64::new(x, 0.0))));
        let Some(coeffs) = vander.lu().solve(&values) else {
            continue;
        };
        let coeff_scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if coeff_scale == 0.0 {
            return Ok(vec![ONE, x2, ZERO]);
        }
        let degree = (1..4).rev().find(|&k| coeffs[k].norm() > 1e-12 * coeff_scale);
        let Some(degree) = degree else { continue };
        let mut roots = polynomial_roots(&coeffs.as_slice()[..=degree]);
        roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()).then(a.re.total_cmp(&b.re)));
        for root in roots {
            let is_real = root.im.abs() <= 1e-9 * scale.max(root.norm());
            let mut x3 = if is_real { C64::new(root.re, 0.0) } else { root };
            // Newton polish on the determinant itself.
            for _ in 0..8 {
                let h = 1e-6 * x3.norm().max(1.0);
                let f = det_at(x2, x3);
                let df = (det_at(x2, x3 + h) - det_at(x2, x3 - h)) / (2.0 * h);
                if df.norm() == 0.0 {
                    break;
                }
                let step = f / df;
                x3 -= if is_real { C64::new(step.re, 0.0) } else { step };
            }
            let b = vec![ONE, x2, x3];
            let bv = DVector::from_column_slice(&b);
            let mb = mm * &bv;
            let krylov = DMatrix::from_columns(&[bv, mb.clone(), mm * &mb]);
            if rank_relative(&krylov, rank_tol) < 3 {
                if is_real {
                    return Ok(b);
                }
                complex_fallback.get_or_insert(b);
            }
        }
    }
    complex_fallback.ok_or_else(|| Error::NotFound(format!("determinant has no usable zero in {DRAWS} draws")))
}

/// Roots of `c_0 + c_1 x + ... + c_n x^n` (`c_n != 0`) as companion eigenvalues.
fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let mut comp = DMatrix::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i] / lead;
    }
    eigenvalues(&comp)
}
