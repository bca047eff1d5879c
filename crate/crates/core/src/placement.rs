//! Search for small site sets `Omega` that make recovery possible.
//!
//! Both searches work on the unlimited-budget criterion: for each eigenvalue
//! `lambda_s`, the cyclic rows of `B` restricted to the columns in `Omega`
//! must reach rank `gamma_s`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::feasibility::{check_jordan, FeasibilityReport};
use crate::matrix::{normalize_rows, rank_absolute, select_columns, select_rows, C64};
use crate::par;
use crate::spectral::JordanStructure;

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;
/// Candidate subsets are evaluated in batches of this size; the first
/// feasible subset in lexicographic order wins regardless of scheduling.
const BATCH: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlacementMethod {
    Exhaustive,
    Greedy,
}

impl PlacementMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlacementMethod::Exhaustive => "exhaustive",
            PlacementMethod::Greedy => "greedy",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementResult {
    /// Sites in ascending order (0-based).
    pub omega: Vec<usize>,
    pub size: usize,
    pub certificate: FeasibilityReport,
    pub method: PlacementMethod,
    /// Minimum cardinality is guaranteed (exhaustive search only).
    pub optimal: bool,
}

/// Row-normalized cyclic rows of `B`, one block per eigenvalue, with the
/// rank each block must reach.
struct Targets {
    blocks: Vec<(DMatrix<C64>, usize)>,
    rank_tol: f64,
}

impl Targets {
    fn new(js: &JordanStructure) -> Self {
        let b = js.basis.as_dmatrix();
        Targets {
            blocks: js
                .groups
                .iter()
                .map(|g| (normalize_rows(&select_rows(b, &g.cyclic_rows)), g.block_count()))
                .collect(),
            rank_tol: js.tolerances.rank,
        }
    }

    fn ranks(&self, omega: &[usize]) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|(x, _)| rank_absolute(&select_columns(x, omega), self.rank_tol))
            .collect()
    }

    fn feasible(&self, omega: &[usize]) -> bool {
        self.blocks
            .iter()
            .all(|(x, need)| rank_absolute(&select_columns(x, omega), self.rank_tol) >= *need)
    }

    fn lower_bound(&self) -> usize {
        self.blocks.iter().map(|b| b.1).max().unwrap_or(0).max(1)
    }
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// Smallest feasible `Omega` (lexicographically first among the smallest),
/// trying sizes from `max_s gamma_s` up to `size_cap`. `None` when no set of
/// at most `size_cap` sites is feasible.
pub fn minimal_placement_exhaustive(js: &JordanStructure, size_cap: usize) -> Result<Option<PlacementResult>> {
    minimal_placement_exhaustive_with_limit(js, size_cap, DEFAULT_EXHAUSTIVE_LIMIT)
}

pub fn minimal_placement_exhaustive_with_limit(
    js: &JordanStructure,
    size_cap: usize,
    limit: usize,
) -> Result<Option<PlacementResult>> {
    let d = js.dimension;
    if d > limit {
        return Err(Error::SearchSpaceTooLarge { dimension: d, limit });
    }
    let targets = Targets::new(js);
    let all: Vec<usize> = (0..d).collect();
    if !targets.feasible(&all) {
        return Ok(None);
    }
    for k in targets.lower_bound()..=size_cap.min(d) {
        let mut comb: Vec<usize> = (0..k).collect();
        let mut more = true;
        while more {
            let mut batch = Vec::with_capacity(BATCH);
            while more && batch.len() < BATCH {
                batch.push(comb.clone());
                more = next_combination(&mut comb, d);
            }
            let verdicts = par::map(&batch, |c| targets.feasible(c));
            if let Some(pos) = verdicts.iter().position(|&v| v) {
                let omega = batch.swap_remove(pos);
                let certificate = check_jordan(js, &omega)?;
                return Ok(Some(PlacementResult {
                    size: omega.len(),
                    omega,
                    certificate,
                    method: PlacementMethod::Exhaustive,
                    optimal: true,
                }));
            }
        }
    }
    Ok(None)
}

/// Adds the site with the largest total rank gain across eigenvalues until
/// every rank is met; ties go to the lowest site index.
pub fn greedy_placement(js: &JordanStructure) -> Result<PlacementResult> {
    let d = js.dimension;
    let targets = Targets::new(js);
    let all: Vec<usize> = (0..d).collect();
    if !targets.feasible(&all) {
        return Err(Error::Infeasible);
    }
    let mut omega: Vec<usize> = Vec::new();
    let mut score: usize = 0;
    while !targets.feasible(&omega) {
        let candidates: Vec<usize> = (0..d).filter(|i| !omega.contains(i)).collect();
        let gains = par::map(&candidates, |&i| {
            let mut trial = omega.clone();
            trial.push(i);
            targets
                .ranks(&trial)
                .iter()
                .zip(&targets.blocks)
                .map(|(&r, (_, need))| r.min(*need))
                .sum::<usize>()
        });
        let (best, best_score) =
            candidates.iter().zip(&gains).fold(
                (None, score),
                |(bi, bs), (&i, &s)| if s > bs { (Some(i), s) } else { (bi, bs) },
            );
        let Some(best) = best else {
            return Err(Error::Infeasible);
        };
        omega.push(best);
        score = best_score;
    }
    omega.sort_unstable();
    let certificate = check_jordan(js, &omega)?;
    Ok(PlacementResult {
        size: omega.len(),
        omega,
        certificate,
        method: PlacementMethod::Greedy,
        optimal: false,
    })
}
