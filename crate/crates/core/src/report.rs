//! Report assembly for the command-line front end.
//!
//! Every command is a function from parsed inputs to a serializable report;
//! the binary only reads files, calls one of these, and writes the result.
//! Site indices in reports are 1-based.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{
    analyze_with, check_jordan, factorize, minimal_uniform_l, rational_form_counterexample, EigenDiagnostic,
    FeasibilityReport, SamplingScheme, SpectralPath,
};
use crate::fixtures;
use crate::hardy::{
    circulant_riesz_demo, circulant_riesz_demo_with_stride, trend_report, DiskSequence, FrameVerdict, SequenceFamily,
    TrendPoint, VerdictOptions, WeightedVector,
};
use crate::io::{FactorizationFile, SamplesFile, SchemeFile, SequenceFile, SequenceSource};
use crate::matrix::{ComplexMatrix, Tolerances, C64};
use crate::placement::{greedy_placement, minimal_placement_exhaustive, PlacementMethod, PlacementResult};
use crate::sampling::{build_sampling_matrix, frame_bounds, reconstruct, simulate_samples, FrameReport};
use crate::spectral::{from_factorization, JordanStructure};

/// Optional overrides of the per-matrix default tolerances.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ToleranceOverrides {
    pub rank: Option<f64>,
    pub cluster: Option<f64>,
}

impl ToleranceOverrides {
    pub fn resolve(&self, a: &ComplexMatrix) -> Result<Tolerances> {
        let mut t = Tolerances::for_matrix(a);
        if let Some(r) = self.rank {
            t = t.with_rank(r);
        }
        if let Some(c) = self.cluster {
            t = t.with_cluster(c);
        }
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TolerancesOut {
    pub cluster: f64,
    pub rank: f64,
    pub condition_cap: f64,
}

impl From<&Tolerances> for TolerancesOut {
    fn from(t: &Tolerances) -> Self {
        TolerancesOut {
            cluster: t.cluster,
            rank: t.rank,
            condition_cap: t.condition_cap,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenRow {
    pub eigenvalue: C64,
    pub required_rank: usize,
    pub achieved_rank: usize,
}

impl From<&EigenDiagnostic> for EigenRow {
    fn from(e: &EigenDiagnostic) -> Self {
        EigenRow {
            eigenvalue: e.eigenvalue,
            required_rank: e.required_rank,
            achieved_rank: e.achieved_rank,
        }
    }
}

fn one_based(sites: &[usize]) -> Vec<usize> {
    sites.iter().map(|i| i + 1).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityOut {
    pub feasible: bool,
    pub spanning: bool,
    pub budgets_sufficient: bool,
    pub per_eigenvalue: Vec<EigenRow>,
    pub witness: Vec<C64>,
    pub used_budgets: Vec<Option<usize>>,
    pub short_sites: Vec<usize>,
    pub inert_sites: Vec<usize>,
    pub trusted: bool,
    pub warnings: Vec<String>,
}

impl From<&FeasibilityReport> for FeasibilityOut {
    fn from(r: &FeasibilityReport) -> Self {
        FeasibilityOut {
            feasible: r.feasible,
            spanning: r.spanning,
            budgets_sufficient: r.budgets_sufficient,
            per_eigenvalue: r.per_eigenvalue.iter().map(EigenRow::from).collect(),
            witness: r.witness.clone(),
            used_budgets: r.used_budgets.clone(),
            short_sites: one_based(&r.short_sites),
            inert_sites: one_based(&r.inert_sites),
            trusted: r.trusted,
            warnings: r.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupOut {
    pub eigenvalue: C64,
    pub block_sizes: Vec<usize>,
    pub cyclic_rows: Vec<usize>,
    pub rank_profile: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureOut {
    pub path: &'static str,
    pub groups: Vec<GroupOut>,
    pub max_block_count: usize,
    pub residual: Option<f64>,
    pub condition: f64,
    pub trusted: bool,
    pub warnings: Vec<String>,
}

impl StructureOut {
    fn new(path: SpectralPath, js: &JordanStructure) -> Self {
        StructureOut {
            path: path.as_str(),
            groups: js
                .groups
                .iter()
                .map(|g| GroupOut {
                    eigenvalue: g.eigenvalue,
                    block_sizes: g.block_sizes.clone(),
                    cyclic_rows: one_based(&g.cyclic_rows),
                    rank_profile: g.rank_profile.clone(),
                })
                .collect(),
            max_block_count: js.max_block_count(),
            residual: js.residual,
            condition: js.condition,
            trusted: js.trusted,
            warnings: js.warnings.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameOut {
    pub c1: f64,
    pub c2: f64,
    pub condition: f64,
    pub feasible: bool,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

impl From<&FrameReport> for FrameOut {
    fn from(f: &FrameReport) -> Self {
        FrameOut {
            c1: f.c1,
            c2: f.c2,
            condition: f.condition,
            feasible: f.feasible,
            rank: f.rank,
            singular_values: f.singular_values.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleOut {
    pub feasible: bool,
    pub rank: usize,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub command: &'static str,
    pub dimension: usize,
    pub tolerances: TolerancesOut,
    pub scheme: SchemeFile,
    pub structure: StructureOut,
    pub feasibility: FeasibilityOut,
    pub frame: FrameOut,
    pub oracle: OracleOut,
}

fn structure_for(
    a: &ComplexMatrix,
    supplied: Option<FactorizationFile>,
    tol: &Tolerances,
) -> Result<(SpectralPath, JordanStructure)> {
    match supplied {
        Some(f) => {
            let js = from_factorization(Some(a), f.basis.into_matrix()?, f.jordan.into_matrix()?, tol)?;
            Ok((SpectralPath::Supplied, js))
        }
        None => factorize(a, tol),
    }
}

/// Criterion verdict, frame bounds of the sampling matrix and the
/// brute-force cross-check for one scheme.
pub fn run_analyze(
    a: &ComplexMatrix,
    scheme: &SamplingScheme,
    supplied: Option<FactorizationFile>,
    overrides: &ToleranceOverrides,
) -> Result<AnalyzeReport> {
    let tol = overrides.resolve(a)?;
    let (path, js) = structure_for(a, supplied, &tol)?;
    let analysis = analyze_with(a, path, js, scheme)?;
    let frame = frame_bounds(&build_sampling_matrix(a, scheme)?, tol.rank)?;
    Ok(AnalyzeReport {
        command: "analyze",
        dimension: a.nrows(),
        tolerances: TolerancesOut::from(&tol),
        scheme: SchemeFile::from_scheme(scheme),
        structure: StructureOut::new(path, &analysis.structure),
        feasibility: FeasibilityOut::from(&analysis.report),
        frame: FrameOut::from(&frame),
        oracle: OracleOut {
            feasible: analysis.oracle_feasible,
            rank: analysis.oracle_rank,
            agrees: analysis.agrees(),
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructReport {
    pub command: &'static str,
    pub estimate: Vec<C64>,
    pub residual: f64,
    pub underdetermined: bool,
    pub rank: usize,
    pub frame: FrameOut,
    pub warnings: Vec<String>,
}

pub fn run_reconstruct(
    a: &ComplexMatrix,
    samples: SamplesFile,
    overrides: &ToleranceOverrides,
) -> Result<ReconstructReport> {
    let tol = overrides.resolve(a)?;
    let samples = samples.into_samples()?;
    let r = reconstruct(a, &samples, tol.rank)?;
    let mut warnings = Vec::new();
    if r.underdetermined {
        warnings.push(format!(
            "sampling matrix has rank {} < {}; estimate is the minimum-norm least-squares solution",
            r.rank,
            a.ncols()
        ));
    }
    Ok(ReconstructReport {
        command: "reconstruct",
        estimate: r.estimate,
        residual: r.residual,
        underdetermined: r.underdetermined,
        rank: r.rank,
        frame: FrameOut::from(&r.frame),
        warnings,
    })
}

/// Synthetic samples of `f`, in the samples file format.
pub fn run_sample(a: &ComplexMatrix, scheme: &SamplingScheme, f: &[C64], sigma: f64, seed: u64) -> Result<SamplesFile> {
    Ok(SamplesFile::from_samples(&simulate_samples(a, scheme, f, sigma, seed)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaceReport {
    pub command: &'static str,
    pub method: &'static str,
    pub found: bool,
    pub optimal: bool,
    pub omega: Vec<usize>,
    pub size: usize,
    pub structure: StructureOut,
    pub certificate: Option<FeasibilityOut>,
    /// Frame bounds of unlimited-budget sampling at the chosen sites.
    pub frame: Option<FrameOut>,
}

pub fn run_place(
    a: &ComplexMatrix,
    supplied: Option<FactorizationFile>,
    method: PlacementMethod,
    overrides: &ToleranceOverrides,
) -> Result<PlaceReport> {
    let tol = overrides.resolve(a)?;
    let (path, js) = structure_for(a, supplied, &tol)?;
    let result: Option<PlacementResult> = match method {
        PlacementMethod::Exhaustive => minimal_placement_exhaustive(&js, js.dimension)?,
        PlacementMethod::Greedy => match greedy_placement(&js) {
            Ok(r) => Some(r),
            Err(Error::Infeasible) => None,
            Err(e) => return Err(e),
        },
    };
    let frame = match &result {
        Some(r) => {
            let scheme = SamplingScheme::unlimited(r.omega.clone())?;
            Some(FrameOut::from(&frame_bounds(
                &build_sampling_matrix(a, &scheme)?,
                tol.rank,
            )?))
        }
        None => None,
    };
    Ok(PlaceReport {
        command: "place",
        method: method.as_str(),
        found: result.is_some(),
        optimal: result.as_ref().is_some_and(|r| r.optimal),
        omega: result.as_ref().map_or_else(Vec::new, |r| one_based(&r.omega)),
        size: result.as_ref().map_or(0, |r| r.size),
        structure: StructureOut::new(path, &js),
        certificate: result.as_ref().map(|r| FeasibilityOut::from(&r.certificate)),
        frame,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalLReport {
    pub command: &'static str,
    pub omega: Vec<usize>,
    pub l_max: usize,
    pub minimal_l: Option<usize>,
    pub unlimited: FeasibilityOut,
}

pub fn run_minimal_l(
    a: &ComplexMatrix,
    omega: &[usize],
    l_max: usize,
    supplied: Option<FactorizationFile>,
    overrides: &ToleranceOverrides,
) -> Result<MinimalLReport> {
    let tol = overrides.resolve(a)?;
    let (_, js) = structure_for(a, supplied, &tol)?;
    Ok(MinimalLReport {
        command: "minimal-l",
        omega: one_based(omega),
        l_max,
        minimal_l: minimal_uniform_l(&js, omega, l_max)?,
        unlimited: FeasibilityOut::from(&check_jordan(&js, omega)?),
    })
}

/// A sequence with its weights and the truncation levels to evaluate.
#[derive(Debug, Clone)]
pub struct SequenceInput {
    pub description: String,
    pub sequence: DiskSequence,
    pub weights: WeightedVector,
    pub levels: Vec<usize>,
}

/// Resolves a sequence source and truncation levels.
///
/// Without explicit levels, a generator with `K` points is evaluated at
/// `K, 2K, 4K` (generating `4K` points), and an explicit sequence of length
/// `n` at `n/4, n/2, n`.
pub fn resolve_sequence(source: SequenceSource, levels: Option<Vec<usize>>) -> Result<SequenceInput> {
    if let Some(l) = &levels {
        if l.is_empty() || l[0] == 0 || l.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::degenerate("K list must be positive and strictly ascending"));
        }
    }
    match source {
        SequenceSource::Family(family) => {
            let base = match family {
                SequenceFamily::Geometric { k, .. } | SequenceFamily::Polynomial { k, .. } => k,
            };
            if base == 0 {
                return Err(Error::degenerate("K must be positive"));
            }
            let levels = levels.unwrap_or_else(|| vec![base, 2 * base, 4 * base]);
            let top = *levels.iter().max().ok_or_else(|| Error::degenerate("empty K list"))?;
            let sequence = family.with_len(top).generate()?;
            let description = match family {
                SequenceFamily::Geometric { rate, .. } => format!("geometric rate {rate}"),
                SequenceFamily::Polynomial { power, .. } => format!("polynomial power {power}"),
            };
            Ok(SequenceInput {
                description,
                weights: WeightedVector::canonical(&sequence),
                sequence,
                levels,
            })
        }
        SequenceSource::Explicit(file) => explicit_sequence(file, levels),
    }
}

fn explicit_sequence(file: SequenceFile, levels: Option<Vec<usize>>) -> Result<SequenceInput> {
    let (sequence, weights) = file.into_parts()?;
    let n = sequence.len();
    let weights = weights.unwrap_or_else(|| WeightedVector::canonical(&sequence));
    let levels = levels.unwrap_or_else(|| {
        let mut l: Vec<usize> = [n / 4, n / 2, n].into_iter().filter(|&k| k >= 1).collect();
        l.dedup();
        l
    });
    if let Some(&k) = levels.iter().find(|&&k| k > n || k == 0) {
        return Err(Error::degenerate(format!("truncation level {k} outside 1..={n}")));
    }
    Ok(SequenceInput {
        description: format!("explicit sequence of {n} points"),
        sequence,
        weights,
        levels,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OptionsOut {
    pub delta_tol: f64,
    pub c1: f64,
    pub c2: f64,
    pub trend_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictOut {
    pub inside_disk: bool,
    pub trend_statistic: f64,
    pub accumulates_at_boundary: bool,
    pub carleson: bool,
    pub multiplier_min: f64,
    pub multiplier_max: f64,
    pub multipliers_bounded: bool,
    pub overall: bool,
}

impl From<&FrameVerdict> for VerdictOut {
    fn from(v: &FrameVerdict) -> Self {
        VerdictOut {
            inside_disk: v.inside_disk,
            trend_statistic: v.trend_statistic,
            accumulates_at_boundary: v.accumulates_at_boundary,
            carleson: v.carleson,
            multiplier_min: v.multiplier_min,
            multiplier_max: v.multiplier_max,
            multipliers_bounded: v.multipliers_bounded,
            overall: v.overall,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelOut {
    #[serde(rename = "K")]
    pub k: usize,
    pub carleson_infimum: f64,
    pub carleson_argmin: usize,
    pub coincident: bool,
    pub gramian_min: f64,
    pub gramian_max: f64,
    pub gramian_condition: f64,
    pub series_deviation: f64,
    pub verdict: VerdictOut,
}

impl From<&TrendPoint> for LevelOut {
    fn from(p: &TrendPoint) -> Self {
        LevelOut {
            k: p.k,
            carleson_infimum: p.carleson.infimum,
            carleson_argmin: p.carleson.argmin + 1,
            coincident: p.carleson.coincident,
            gramian_min: p.gramian.min_eigenvalue,
            gramian_max: p.gramian.max_eigenvalue,
            gramian_condition: p.gramian.condition,
            series_deviation: p.gramian.series_deviation,
            verdict: VerdictOut::from(&p.verdict),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CarlesonRun {
    pub command: &'static str,
    pub source: String,
    pub options: OptionsOut,
    pub levels: Vec<LevelOut>,
    /// Conjunction of the verdicts at every level.
    pub overall: bool,
    pub note: &'static str,
    #[serde(skip)]
    pub points: Vec<TrendPoint>,
}

impl CarlesonRun {
    /// `K,n,product,log_product` for every level.
    pub fn products_csv(&self) -> String {
        let mut out = String::from("K,n,product,log_product\n");
        for p in &self.points {
            for (n, (prod, log)) in p.carleson.products.iter().zip(&p.carleson.log_products).enumerate() {
                out.push_str(&format!("{},{},{:.16e},{:.16e}\n", p.k, n + 1, prod, log));
            }
        }
        out
    }

    /// `K,carleson_infimum,gramian_min,gramian_max,overall` per level.
    pub fn levels_csv(&self) -> String {
        let mut out = String::from("K,carleson_infimum,gramian_min,gramian_max,overall\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{}\n",
                p.k, p.carleson.infimum, p.gramian.min_eigenvalue, p.gramian.max_eigenvalue, p.verdict.overall
            ));
        }
        out
    }
}

pub fn run_carleson(input: &SequenceInput, opts: &VerdictOptions) -> Result<CarlesonRun> {
    let points = trend_report(&input.sequence, &input.weights, &input.levels, opts)?;
    Ok(CarlesonRun {
        command: "carleson",
        source: input.description.clone(),
        options: OptionsOut {
            delta_tol: opts.delta_tol,
            c1: opts.c1,
            c2: opts.c2,
            trend_ratio: opts.trend_ratio,
        },
        levels: points.iter().map(LevelOut::from).collect(),
        overall: points.iter().all(|p| p.verdict.overall),
        note: FrameVerdict::NOTE,
        points,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GramianLevel {
    #[serde(rename = "K")]
    pub k: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub condition: f64,
    pub series_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GramianRun {
    pub command: &'static str,
    pub source: String,
    pub levels: Vec<GramianLevel>,
}

pub fn run_gramian(input: &SequenceInput) -> Result<GramianRun> {
    let levels = crate::par::map(&input.levels, |&k| {
        let g = crate::hardy::truncated_gramian(&input.sequence.truncate(k)?)?;
        Ok(GramianLevel {
            k,
            min_eigenvalue: g.min_eigenvalue,
            max_eigenvalue: g.max_eigenvalue,
            condition: g.condition,
            series_deviation: g.series_deviation,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(GramianRun {
        command: "gramian",
        source: input.description.clone(),
        levels,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureOut {
    pub name: &'static str,
    pub structure: StructureOut,
    pub exhaustive: Vec<usize>,
    pub greedy: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CirculantOut {
    pub m: usize,
    pub stride: usize,
    pub dimension: usize,
    pub vectors: usize,
    pub rank: usize,
    pub condition: f64,
    pub basis: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport {
    pub command: &'static str,
    pub fixtures: Vec<FixtureOut>,
    pub circulant: Vec<CirculantOut>,
    pub companion_dependent_vector: Vec<C64>,
}

/// Structure and placements of the worked matrices, the periodized
/// tridiagonal example, and a dependent-iterate vector for the companion matrix.
pub fn run_demo(overrides: &ToleranceOverrides, seed: u64) -> Result<DemoReport> {
    let mut out = Vec::new();
    for (name, a) in [
        ("P", fixtures::matrix_p()),
        ("Q", fixtures::matrix_q()),
        ("R", fixtures::matrix_r()),
    ] {
        let tol = overrides.resolve(&a)?;
        let (path, js) = factorize(&a, &tol)?;
        let exhaustive =
            minimal_placement_exhaustive(&js, js.dimension)?.map_or_else(Vec::new, |r| one_based(&r.omega));
        let greedy = one_based(&greedy_placement(&js)?.omega);
        out.push(FixtureOut {
            name,
            structure: StructureOut::new(path, &js),
            exhaustive,
            greedy,
        });
    }
    let mut circulant = Vec::new();
    for (m, stride) in [(2, 3), (4, 3), (10, 3), (4, 4)] {
        let r = if stride == 3 {
            circulant_riesz_demo(m)?
        } else {
            circulant_riesz_demo_with_stride(m, stride)?
        };
        circulant.push(CirculantOut {
            m,
            stride,
            dimension: r.dimension,
            vectors: r.vectors,
            rank: r.rank,
            condition: r.condition,
            basis: r.basis,
        });
    }
    Ok(DemoReport {
        command: "demo",
        fixtures: out,
        circulant,
        companion_dependent_vector: rational_form_counterexample(&fixtures::companion_m(), seed)?,
    })
}

fn c(z: &C64) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Human-readable summaries for `--format text`.
pub trait Summary {
    fn summary(&self) -> String;
}

impl Summary for AnalyzeReport {
    fn summary(&self) -> String {
        let mut s = format!(
            "dimension {} ({} path)\nfeasible: {}\n",
            self.dimension,
            self.structure.path,
            yes(self.feasibility.feasible)
        );
        for e in &self.feasibility.per_eigenvalue {
            s.push_str(&format!(
                "  eigenvalue {}: rank {}/{}\n",
                c(&e.eigenvalue),
                e.achieved_rank,
                e.required_rank
            ));
        }
        s.push_str(&format!(
            "frame bounds c1 = {:.6e}, c2 = {:.6e}\noracle feasible: {} (rank {})\n",
            self.frame.c1,
            self.frame.c2,
            yes(self.oracle.feasible),
            self.oracle.rank
        ));
        for w in &self.feasibility.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

impl Summary for ReconstructReport {
    fn summary(&self) -> String {
        let mut s = format!(
            "rank {}, residual {:.6e}, underdetermined: {}\n",
            self.rank,
            self.residual,
            yes(self.underdetermined)
        );
        for z in &self.estimate {
            s.push_str(&format!("  {}\n", c(z)));
        }
        s
    }
}

impl Summary for SamplesFile {
    fn summary(&self) -> String {
        format!("{} samples at sites {:?}\n", self.values.len(), self.scheme.omega)
    }
}

impl Summary for PlaceReport {
    fn summary(&self) -> String {
        if self.found {
            format!(
                "{} placement: sites {:?} (size {}{})\n",
                self.method,
                self.omega,
                self.size,
                if self.optimal { ", optimal" } else { "" }
            )
        } else {
            format!("{} placement: no feasible site set\n", self.method)
        }
    }
}

impl Summary for MinimalLReport {
    fn summary(&self) -> String {
        match self.minimal_l {
            Some(l) => format!("minimal uniform L for sites {:?}: {l}\n", self.omega),
            None => format!("no L <= {} works for sites {:?}\n", self.l_max, self.omega),
        }
    }
}

impl Summary for CarlesonRun {
    fn summary(&self) -> String {
        let mut s = format!("{}\n", self.source);
        for l in &self.levels {
            s.push_str(&format!(
                "  K = {}: Carleson inf {:.6e}, Gramian eigenvalues [{:.6e}, {:.6e}], verdict {}\n",
                l.k,
                l.carleson_infimum,
                l.gramian_min,
                l.gramian_max,
                if l.verdict.overall { "pass" } else { "fail" }
            ));
        }
        s.push_str(&format!("({})\n", self.note));
        s
    }
}

impl Summary for GramianRun {
    fn summary(&self) -> String {
        let mut s = format!("{}\n", self.source);
        for l in &self.levels {
            s.push_str(&format!(
                "  K = {}: eigenvalues [{:.6e}, {:.6e}], series deviation {:.3e}\n",
                l.k, l.min_eigenvalue, l.max_eigenvalue, l.series_deviation
            ));
        }
        s
    }
}

impl Summary for DemoReport {
    fn summary(&self) -> String {
        let mut s = String::new();
        for f in &self.fixtures {
            s.push_str(&format!(
                "{}: {} path, max blocks per eigenvalue {}, minimal sites {:?}, greedy {:?}\n",
                f.name, f.structure.path, f.structure.max_block_count, f.exhaustive, f.greedy
            ));
        }
        for r in &self.circulant {
            s.push_str(&format!(
                "circulant m = {}, stride {}: rank {}/{}, condition {:.6}\n",
                r.m, r.stride, r.rank, r.dimension, r.condition
            ));
        }
        s.push_str(&format!(
            "companion matrix: dependent iterates from b = [{}]\n",
            self.companion_dependent_vector
                .iter()
                .map(c)
                .collect::<Vec<_>>()
                .join(", ")
        ));
        s
    }
}
