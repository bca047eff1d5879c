//! Spectral structure of the adjoint operator `A*`.
//!
//! Recoverability is phrased in terms of a factorization `A* = B^{-1} D B`
//! (diagonalizable case) or `A* = B^{-1} J B` (general case), where the
//! columns `b_i` of `B` stand in for the sampling sites. This module produces
//! those factorizations numerically, or validates a supplied one.
//!
//! Eigenvalues come from a dense QR-iteration eigensolver and are grouped by a
//! single-linkage dendrogram. A group of `k` eigenvalues is accepted as one
//! cluster when its diameter is within `cluster_tol`, or within the
//! `eps^(1/k)` splitting radius a defective `k`-fold eigenvalue shows under
//! rounding. Block sizes of the Jordan form come from the rank profile of the
//! nilpotent part restricted to each generalized eigenspace.

use std::cmp::Ordering;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{
    column_space, condition_number, eigenvalues, pseudo_inverse, rank_absolute, rank_relative, smallest_right_singular,
    svd, ComplexMatrix, Tolerances, C64, ONE, ZERO,
};

/// Backward-error multiple `c` in the `2 (c eps)^(1/k) ||A||` splitting
/// diameter of a defective cluster.
const DEFECT_RADIUS_FACTOR: f64 = 100.0;
/// Bound, in units of machine epsilon, on `prod |lambda_i - mu| / ||A||^k` over a
/// cluster of `k` computed eigenvalues with mean `mu`.
const CLUSTER_PRODUCT_FACTOR: f64 = 1e4;
/// Two merged groups must lie within this multiple of their spread
/// (floored at the two-point splitting radius).
const SPLIT_RATIO: f64 = 100.0;
/// Residuals `||A* - B^{-1} J B||_F` above this multiple of `max(1, ||A||_F)` mark
/// the factorization untrusted.
const RESIDUAL_TRUST_FACTOR: f64 = 1e-6;

/// One distinct eigenvalue of a diagonalizable `A*` with its eigenspace.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub eigenvalue: C64,
    pub multiplicity: usize,
    /// Rows of `B` (equivalently, coordinates of `D`) belonging to this eigenvalue.
    pub coordinates: Vec<usize>,
    /// Spectral projector onto the eigenspace in standard coordinates.
    pub projector: ComplexMatrix,
}

/// Factorization `A* = B^{-1} D B` with eigenvalues grouped into clusters.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub dimension: usize,
    pub eigenspaces: Vec<Eigenspace>,
    /// `D`, block diagonal with `lambda_j I_{h_j}` in the order of `eigenspaces`.
    pub diagonal: ComplexMatrix,
    /// `B`; its columns are the vectors `b_i` of the sampling sites.
    pub basis: ComplexMatrix,
    /// `B^{-1}`; its columns are eigenvectors of `A*`.
    pub basis_inverse: ComplexMatrix,
    /// `||A* - B^{-1} D B||_F`.
    pub residual: f64,
    pub tolerances: Tolerances,
}

impl SpectralData {
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.eigenspaces.iter().map(|e| e.eigenvalue).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.eigenspaces.iter().map(|e| e.multiplicity).collect()
    }

    /// Column `i` of `B`.
    pub fn site_vector(&self, site: usize) -> Vec<C64> {
        self.basis.column(site).iter().copied().collect()
    }
}

/// Jordan blocks belonging to one distinct eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanGroup {
    pub eigenvalue: C64,
    /// Block sizes `t_1 >= t_2 >= ...`.
    pub block_sizes: Vec<usize>,
    /// Index of the first row of each block in `J` (0-based), aligned with `block_sizes`.
    pub cyclic_rows: Vec<usize>,
    /// `rank((A* - lambda I)^k)` for `k = 0..=h`.
    pub rank_profile: Vec<usize>,
}

impl JordanGroup {
    pub fn block_count(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn algebraic_multiplicity(&self) -> usize {
        self.block_sizes.iter().sum()
    }
}

/// Factorization `A* = B^{-1} J B` with `J` in Jordan form.
///
/// `J` uses ones on the subdiagonal: inside a block, `J e_k = lambda e_k + e_{k+1}`,
/// so the first basis vector of each block is cyclic for it.
#[derive(Debug, Clone)]
pub struct JordanStructure {
    pub dimension: usize,
    pub groups: Vec<JordanGroup>,
    pub jordan: ComplexMatrix,
    pub basis: ComplexMatrix,
    pub basis_inverse: ComplexMatrix,
    /// `||A* - B^{-1} J B||_F`, or `None` for a supplied factorization without `A`.
    pub residual: Option<f64>,
    /// 2-norm condition number of `B`.
    pub condition: f64,
    /// False when the similarity is ill-conditioned, the residual is large,
    /// or the rank profile was numerically inconsistent.
    pub trusted: bool,
    pub supplied: bool,
    pub warnings: Vec<String>,
    pub tolerances: Tolerances,
}

impl JordanStructure {
    /// Largest number of Jordan blocks for a single eigenvalue (`max_s gamma_s`).
    pub fn max_block_count(&self) -> usize {
        self.groups.iter().map(JordanGroup::block_count).max().unwrap_or(0)
    }

    /// Column `i` of `B`.
    pub fn site_vector(&self, site: usize) -> Vec<C64> {
        self.basis.column(site).iter().copied().collect()
    }

    /// Orthogonal projector onto `W_s = span{e_k : k a cyclic row of group s}`.
    pub fn cyclic_projector(&self, group: usize) -> ComplexMatrix {
        let mut p = DMatrix::zeros(self.dimension, self.dimension);
        for &k in &self.groups[group].cyclic_rows {
            p[(k, k)] = ONE;
        }
        ComplexMatrix::from_dmatrix(p).expect("finite")
    }

    /// Ranks of `(J - lambda_s I)^k`, `k = 0..=h_s`, read off the stored block sizes.
    pub fn structural_rank_profile(&self, group: usize) -> Vec<usize> {
        let g = &self.groups[group];
        let h = g.algebraic_multiplicity();
        (0..=h)
            .map(|k| self.dimension - h + g.block_sizes.iter().map(|&t| t.saturating_sub(k)).sum::<usize>())
            .collect()
    }
}

/// Deterministic report order: descending modulus, then ascending real and
/// imaginary parts. Moduli and parts are compared on a grid of width `quantum`.
pub(crate) fn eigen_order(a: C64, b: C64, quantum: f64) -> Ordering {
    let q = |x: f64| (x / quantum).round() as i64;
    q(b.norm())
        .cmp(&q(a.norm()))
        .then(q(a.re).cmp(&q(b.re)))
        .then(q(a.im).cmp(&q(b.im)))
        .then(b.norm().total_cmp(&a.norm()))
        .then(a.re.total_cmp(&b.re))
        .then(a.im.total_cmp(&b.im))
}

fn ordering_quantum(tol: &Tolerances) -> f64 {
    tol.cluster.max(1e-300) * 10.0
}

fn validate_operator(a: &ComplexMatrix, tol: &Tolerances) -> Result<usize> {
    let d = a.require_square("evolution operator")?;
    if d == 0 {
        return Err(Error::degenerate("operator has dimension zero"));
    }
    tol.validate()?;
    Ok(d)
}

/// Largest diameter of a `k`-fold cluster.
fn cluster_radius(k: usize, cluster_tol: f64, scale: f64) -> f64 {
    if k <= 1 {
        return cluster_tol;
    }
    let defect = 2.0 * (DEFECT_RADIUS_FACTOR * f64::EPSILON).powf(1.0 / k as f64) * scale;
    cluster_tol.max(defect)
}

/// Groups eigenvalue indices into clusters. Output clusters are sorted by
/// their smallest member index.
pub(crate) fn cluster_eigenvalues(vals: &[C64], cluster_tol: f64, scale: f64) -> Vec<Vec<usize>> {
    let n = vals.len();
    if n == 0 {
        return Vec::new();
    }
    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(((vals[i] - vals[j]).norm(), i, j));
        }
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    struct Node {
        members: Vec<usize>,
        children: Option<(usize, usize)>,
        merge_distance: f64,
    }
    let mut nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            members: vec![i],
            children: None,
            merge_distance: 0.0,
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut node_of_root: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (dist, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        let (ni, nj) = (node_of_root[ri], node_of_root[rj]);
        let mut members = nodes[ni].members.clone();
        members.extend_from_slice(&nodes[nj].members);
        members.sort_unstable();
        nodes.push(Node {
            members,
            children: Some((ni, nj)),
            merge_distance: dist,
        });
        parent[rj] = ri;
        node_of_root[ri] = nodes.len() - 1;
    }

    let diameter = |members: &[usize]| {
        let mut diam: f64 = 0.0;
        for (a, &p) in members.iter().enumerate() {
            for &q in &members[a + 1..] {
                diam = diam.max((vals[p] - vals[q]).norm());
            }
        }
        diam
    };
    // Merging two groups (not single points) far beyond their own spread
    // joins distinct eigenvalues. Children precede parents in `nodes`.
    let floor = cluster_radius(2, cluster_tol, scale);
    let diams: Vec<f64> = nodes.iter().map(|n| diameter(&n.members)).collect();
    let mut coherent: Vec<bool> = Vec::with_capacity(nodes.len());
    for (id, node) in nodes.iter().enumerate() {
        let ok = match node.children {
            None => true,
            Some(_) if diams[id] <= cluster_tol => true,
            Some((l, r)) => {
                let groups = nodes[l].children.is_some() && nodes[r].children.is_some();
                coherent[l]
                    && coherent[r]
                    && (!groups || node.merge_distance <= SPLIT_RATIO * diams[l].max(diams[r]).max(floor))
            }
        };
        coherent.push(ok);
    }
    // A size-t block splits into a ring with `prod |lambda - mu| ~ eps ||A||^t`,
    // and exact members contribute almost nothing, so a genuine cluster has a
    // tiny normalized product whatever its block sizes.
    let log_bound = (CLUSTER_PRODUCT_FACTOR * f64::EPSILON).ln();
    let root = node_of_root[find(&mut parent, 0)];
    let mut stack = vec![root];
    let mut clusters = Vec::new();
    while let Some(id) = stack.pop() {
        let node = &nodes[id];
        let k = node.members.len();
        let accept = match node.children {
            None => true,
            Some(_) if diams[id] <= cluster_tol => true,
            Some(_) if !coherent[id] || diams[id] > cluster_radius(k, cluster_tol, scale) => false,
            Some(_) => {
                let mu = node.members.iter().map(|&i| vals[i]).sum::<C64>() / k as f64;
                let log_product: f64 = node.members.iter().map(|&i| ((vals[i] - mu).norm() / scale).ln()).sum();
                log_product <= log_bound
            }
        };
        if accept {
            clusters.push(node.members.clone());
        } else if let Some((l, r)) = node.children {
            stack.push(l);
            stack.push(r);
        }
    }
    clusters.sort_by_key(|c| c[0]);
    clusters
}

struct Cluster {
    center: C64,
    size: usize,
}

/// Eigenvalues of `A*`, clustered and ordered for reporting.
fn clustered_spectrum(adj: &DMatrix<C64>, tol: &Tolerances) -> Vec<Cluster> {
    let vals = eigenvalues(adj);
    let scale = adj.norm();
    let mut clusters: Vec<Cluster> = cluster_eigenvalues(&vals, tol.cluster, scale)
        .into_iter()
        .map(|members| {
            let sum: C64 = members.iter().map(|&i| vals[i]).sum();
            Cluster {
                center: sum / members.len() as f64,
                size: members.len(),
            }
        })
        .collect();
    let q = ordering_quantum(tol);
    clusters.sort_by(|a, b| eigen_order(a.center, b.center, q));
    clusters
}

fn shifted(adj: &DMatrix<C64>, mu: C64) -> DMatrix<C64> {
    let mut m = adj.clone();
    for i in 0..m.nrows() {
        m[(i, i)] -= mu;
    }
    m
}

/// Mean eigenvalue of `A*` restricted to the subspace spanned by the
/// orthonormal columns of `basis`.
fn restricted_mean(adj: &DMatrix<C64>, basis: &DMatrix<C64>) -> C64 {
    let restricted = basis.adjoint() * adj * basis;
    restricted.trace() / basis.ncols() as f64
}

/// Eigendecomposition of `A*` for diagonalizable `A`.
///
/// Eigenvalues within `tol.cluster` of each other are merged and share a
/// pooled eigenspace. Fails with [`Error::NotDiagonalizable`] when a cluster's
/// geometric multiplicity falls short of its size.
pub fn eigendecompose(a: &ComplexMatrix, tol: &Tolerances) -> Result<SpectralData> {
    let d = validate_operator(a, tol)?;
    let adj = a.as_dmatrix().adjoint();
    let clusters = clustered_spectrum(&adj, tol);

    let mut blocks: Vec<(C64, DMatrix<C64>)> = Vec::with_capacity(clusters.len());
    for c in &clusters {
        let shifted_op = shifted(&adj, c.center);
        let (vecs, sv) = smallest_right_singular(&shifted_op, c.size);
        let threshold = tol.rank * sv[0];
        let geometric = sv.iter().filter(|&&s| s <= threshold).count();
        if geometric < c.size {
            return Err(Error::NotDiagonalizable {
                eigenvalue: format!("{}", c.center),
                geometric,
                algebraic: c.size,
            });
        }
        blocks.push((restricted_mean(&adj, &vecs), vecs));
    }

    let v = crate::matrix::hstack(&blocks.iter().map(|b| b.1.clone()).collect::<Vec<_>>(), d);
    if rank_relative(&v, tol.rank) < d {
        let worst = &clusters[0];
        return Err(Error::NotDiagonalizable {
            eigenvalue: format!("{}", worst.center),
            geometric: rank_relative(&v, tol.rank),
            algebraic: d,
        });
    }
    let b = v.clone().try_inverse().ok_or_else(|| Error::NotDiagonalizable {
        eigenvalue: "(eigenvector matrix singular)".into(),
        geometric: 0,
        algebraic: d,
    })?;

    let mut diag = Vec::with_capacity(d);
    let mut eigenspaces = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for (mu, vecs) in &blocks {
        let h = vecs.ncols();
        let rows = b.rows(offset, h).into_owned();
        let projector = vecs * rows;
        eigenspaces.push(Eigenspace {
            eigenvalue: *mu,
            multiplicity: h,
            coordinates: (offset..offset + h).collect(),
            projector: ComplexMatrix::from_dmatrix(projector)?,
        });
        diag.extend(std::iter::repeat_n(*mu, h));
        offset += h;
    }
    let diagonal = ComplexMatrix::diagonal(&diag);
    let residual = (&adj - &v * diagonal.as_dmatrix() * &b).norm();
    Ok(SpectralData {
        dimension: d,
        eigenspaces,
        diagonal,
        basis: ComplexMatrix::from_dmatrix(b)?,
        basis_inverse: ComplexMatrix::from_dmatrix(v)?,
        residual,
        tolerances: *tol,
    })
}

/// Chains of one generalized eigenspace, in local coordinates.
struct LocalChains {
    /// Chain vectors `[v, N v, ..., N^{t-1} v]`, longest chains first.
    chains: Vec<Vec<nalgebra::DVector<C64>>>,
    /// `rank(N^k)` for `k = 0..=h`, local to the generalized eigenspace.
    local_ranks: Vec<usize>,
    consistent: bool,
}

/// Block sizes from the local rank profile `r_0 = h >= r_1 >= ... `.
///
/// `#{blocks of size >= k} = r_{k-1} - r_k`. Returns sizes in descending
/// order and whether the profile was a valid nilpotent rank profile.
fn blocks_from_ranks(ranks: &[usize]) -> (Vec<usize>, bool) {
    let h = ranks[0];
    let mut consistent = *ranks.last().unwrap() == 0;
    let mut at_least: Vec<usize> = Vec::with_capacity(h);
    for k in 1..=h {
        let c = ranks[k - 1].saturating_sub(ranks[k]);
        if ranks[k] > ranks[k - 1] {
            consistent = false;
        }
        let c = match at_least.last() {
            Some(&prev) if c > prev => {
                consistent = false;
                prev
            }
            _ => c,
        };
        at_least.push(c);
    }
    let mut sizes = Vec::new();
    for k in (1..=h).rev() {
        let next = if k < h { at_least[k] } else { 0 };
        let exact = at_least[k - 1] - next.min(at_least[k - 1]);
        sizes.extend(std::iter::repeat_n(k, exact));
    }
    let covered: usize = sizes.iter().sum();
    if covered != h {
        consistent = false;
        sizes.extend(std::iter::repeat_n(1, h.saturating_sub(covered)));
    }
    (sizes, consistent)
}

fn local_null_space(power: &DMatrix<C64>, rank: usize) -> DMatrix<C64> {
    let h = power.ncols();
    if rank >= h {
        return DMatrix::zeros(h, 0);
    }
    smallest_right_singular(power, h - rank).0
}

/// Jordan chains of a (numerically) nilpotent `h x h` matrix.
fn nilpotent_chains(n: &DMatrix<C64>, scale: f64, rank_tol: f64) -> LocalChains {
    let h = n.nrows();
    let mut powers = vec![DMatrix::<C64>::identity(h, h)];
    let mut local_ranks = vec![h];
    for k in 1..=h {
        let p = n * &powers[k - 1];
        local_ranks.push(rank_absolute(&p, rank_tol * scale.powi(k as i32)));
        powers.push(p);
    }
    // Enforce monotonicity before reading block sizes.
    for k in 1..=h {
        local_ranks[k] = local_ranks[k].min(local_ranks[k - 1]);
    }
    let (sizes, consistent) = blocks_from_ranks(&local_ranks);

    let nulls: Vec<DMatrix<C64>> = (0..=h).map(|k| local_null_space(&powers[k], local_ranks[k])).collect();
    let t_max = sizes.first().copied().unwrap_or(0);
    let mut chains: Vec<Vec<nalgebra::DVector<C64>>> = Vec::new();
    // Current level-j vector of each chain started so far.
    let mut current: Vec<nalgebra::DVector<C64>> = Vec::new();
    for level in (1..=t_max).rev() {
        let new_count = sizes.iter().filter(|&&t| t == level).count();
        if new_count > 0 {
            let mut cols: Vec<nalgebra::DVector<C64>> =
                nulls[level - 1].column_iter().map(|c| c.into_owned()).collect();
            cols.extend(current.iter().cloned());
            let taken = if cols.is_empty() {
                DMatrix::zeros(h, 0)
            } else {
                column_space(&DMatrix::from_columns(&cols), rank_tol)
            };
            let z = &nulls[level];
            let complement = z - &taken * (taken.adjoint() * z);
            let u = svd(&complement, false).u;
            for c in 0..new_count.min(u.ncols()) {
                let head = u.column(c).into_owned();
                let mut chain = vec![head.clone()];
                for _ in 1..level {
                    let next = n * chain.last().unwrap();
                    chain.push(next);
                }
                chains.push(chain);
                current.push(head);
            }
        }
        for v in current.iter_mut() {
            *v = n * &*v;
        }
    }
    chains.sort_by_key(|c| std::cmp::Reverse(c.len()));
    LocalChains {
        chains,
        local_ranks,
        consistent,
    }
}

/// Jordan structure of `A*` computed from rank profiles.
///
/// The result always carries the residual `||A* - B^{-1} J B||_F` and the
/// condition number of `B`; it is flagged untrusted (not rejected) when the
/// condition number exceeds `tol.condition_cap`.
pub fn jordan_structure(a: &ComplexMatrix, tol: &Tolerances) -> Result<JordanStructure> {
    let d = validate_operator(a, tol)?;
    let adj = a.as_dmatrix().adjoint();
    let scale = adj.norm();
    let clusters = clustered_spectrum(&adj, tol);
    let mut warnings = Vec::new();
    let mut consistent = true;

    let mut columns: Vec<nalgebra::DVector<C64>> = Vec::with_capacity(d);
    let mut groups = Vec::with_capacity(clusters.len());
    let mut jordan = DMatrix::zeros(d, d);
    for c in &clusters {
        let h = c.size;
        let subspace = |mu: C64| {
            let shifted_op = shifted(&adj, mu);
            let mut power = shifted_op.clone();
            for _ in 1..h {
                power = &power * &shifted_op;
            }
            smallest_right_singular(&power, h)
        };
        let (first, _) = subspace(c.center);
        let mu = restricted_mean(&adj, &first);
        let (basis, sv) = subspace(mu);
        let mu = restricted_mean(&adj, &basis);
        // Largest singular value on the presumed null space, against the
        // norm bound of (A* - mu)^h.
        let null_edge = sv[d - h];
        let reference = shifted(&adj, mu).norm().powi(h as i32);
        if reference > 0.0 && null_edge > tol.rank.sqrt() * reference {
            consistent = false;
            warnings.push(format!(
                "generalized eigenspace of {mu} is poorly resolved (relative singular value {:.3e})",
                null_edge / reference
            ));
        }
        let local = basis.adjoint() * shifted(&adj, mu) * &basis;
        let nil_scale = shifted(&adj, mu).norm();
        let mut chains = nilpotent_chains(&local, nil_scale, tol.rank);
        if !chains.consistent {
            consistent = false;
            warnings.push(format!("inconsistent rank profile for eigenvalue {mu}"));
        }
        if chains.chains.iter().map(Vec::len).sum::<usize>() != h {
            consistent = false;
            warnings.push(format!(
                "chains for eigenvalue {mu} do not span its generalized eigenspace"
            ));
            chains.chains = (0..h)
                .map(|i| vec![nalgebra::DVector::from_fn(h, |r, _| if r == i { ONE } else { ZERO })])
                .collect();
        }

        let offset0 = columns.len();
        let mut sizes = Vec::new();
        let mut rows = Vec::new();
        for chain in &chains.chains {
            let start = columns.len();
            rows.push(start);
            sizes.push(chain.len());
            for (k, v) in chain.iter().enumerate() {
                columns.push(&basis * v);
                jordan[(start + k, start + k)] = mu;
                if k + 1 < chain.len() {
                    jordan[(start + k + 1, start + k)] = ONE;
                }
            }
        }
        debug_assert_eq!(columns.len() - offset0, h);
        groups.push(JordanGroup {
            eigenvalue: mu,
            block_sizes: sizes,
            cyclic_rows: rows,
            rank_profile: chains.local_ranks.iter().map(|r| d - h + r).collect(),
        });
    }

    let v = DMatrix::from_columns(&columns);
    let condition = condition_number(&v);
    let b = match v.clone().try_inverse() {
        Some(b) if condition.is_finite() => b,
        _ => {
            consistent = false;
            warnings.push("similarity transform is singular".into());
            pseudo_inverse(&v)
        }
    };
    let residual = (&adj - &v * &jordan * &b).norm();
    let residual_ok = residual <= RESIDUAL_TRUST_FACTOR * scale.max(1.0);
    if !residual_ok {
        warnings.push(format!("similarity residual {residual:.3e} is large"));
    }
    let well_conditioned = condition <= tol.condition_cap;
    if !well_conditioned {
        warnings.push(format!(
            "similarity condition number {condition:.3e} exceeds cap {:.3e}",
            tol.condition_cap
        ));
    }
    Ok(JordanStructure {
        dimension: d,
        groups,
        jordan: ComplexMatrix::from_dmatrix(jordan)?,
        basis: ComplexMatrix::from_dmatrix(b)?,
        basis_inverse: ComplexMatrix::from_dmatrix(v)?,
        residual: Some(residual),
        condition,
        trusted: consistent && residual_ok && well_conditioned,
        supplied: false,
        warnings,
        tolerances: *tol,
    })
}

/// Builds a [`JordanStructure`] from a supplied pair `(B, J)` with
/// `A* = B^{-1} J B`, bypassing numerical computation.
///
/// `J` must be lower bidiagonal with subdiagonal entries 0 or 1 and a
/// constant diagonal along each run of ones. When `a` is given the residual
/// is evaluated against it.
pub fn from_factorization(
    a: Option<&ComplexMatrix>,
    basis: ComplexMatrix,
    jordan: ComplexMatrix,
    tol: &Tolerances,
) -> Result<JordanStructure> {
    tol.validate()?;
    let d = jordan.require_square("J")?;
    if basis.nrows() != d || basis.ncols() != d {
        return Err(Error::degenerate(format!(
            "B must be {d}x{d} to match J, got {}x{}",
            basis.nrows(),
            basis.ncols()
        )));
    }
    if d == 0 {
        return Err(Error::degenerate("factorization has dimension zero"));
    }
    let entry_tol = 1e-12 * jordan.norm().max(1.0);
    for i in 0..d {
        for j in 0..d {
            let z = jordan[(i, j)];
            let allowed = i == j || (i == j + 1 && ((z - ONE).norm() <= entry_tol || z.norm() <= entry_tol));
            if !allowed && z.norm() > entry_tol {
                return Err(Error::InvalidJordanLayout(format!(
                    "unexpected entry at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if i == j + 1 && !allowed {
                return Err(Error::InvalidJordanLayout(format!(
                    "subdiagonal entry at ({}, {}) must be 0 or 1",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    // Blocks as (start, size, eigenvalue).
    let mut blocks: Vec<(usize, usize, C64)> = Vec::new();
    let mut start = 0;
    for i in 0..d {
        let links_next = i + 1 < d && (jordan[(i + 1, i)] - ONE).norm() <= entry_tol;
        if links_next && (jordan[(i + 1, i + 1)] - jordan[(i, i)]).norm() > tol.cluster {
            return Err(Error::InvalidJordanLayout(format!(
                "diagonal changes inside a block at row {}",
                i + 2
            )));
        }
        if !links_next {
            blocks.push((start, i + 1 - start, jordan[(start, start)]));
            start = i + 1;
        }
    }
    let mut groups: Vec<JordanGroup> = Vec::new();
    for (start, size, lambda) in blocks {
        match groups
            .iter_mut()
            .find(|g| (g.eigenvalue - lambda).norm() <= tol.cluster)
        {
            Some(g) => {
                g.block_sizes.push(size);
                g.cyclic_rows.push(start);
            }
            None => groups.push(JordanGroup {
                eigenvalue: lambda,
                block_sizes: vec![size],
                cyclic_rows: vec![start],
                rank_profile: Vec::new(),
            }),
        }
    }
    for g in groups.iter_mut() {
        let mut pairs: Vec<(usize, usize)> = g
            .block_sizes
            .iter()
            .copied()
            .zip(g.cyclic_rows.iter().copied())
            .collect();
        pairs.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        g.block_sizes = pairs.iter().map(|p| p.0).collect();
        g.cyclic_rows = pairs.iter().map(|p| p.1).collect();
        let h = g.algebraic_multiplicity();
        g.rank_profile = (0..=h)
            .map(|k| d - h + g.block_sizes.iter().map(|&t| t.saturating_sub(k)).sum::<usize>())
            .collect();
    }
    let q = ordering_quantum(tol);
    groups.sort_by(|x, y| eigen_order(x.eigenvalue, y.eigenvalue, q));

    let condition = condition_number(basis.as_dmatrix());
    let inverse = basis
        .as_dmatrix()
        .clone()
        .try_inverse()
        .filter(|_| condition.is_finite())
        .ok_or_else(|| Error::degenerate("supplied B is singular"))?;
    let mut warnings = Vec::new();
    let residual = match a {
        Some(a) => {
            if a.nrows() != d || a.ncols() != d {
                return Err(Error::degenerate("A does not match the factorization dimension"));
            }
            let r = (a.as_dmatrix().adjoint() - &inverse * jordan.as_dmatrix() * basis.as_dmatrix()).norm();
            Some(r)
        }
        None => None,
    };
    let residual_ok = match (residual, a) {
        (Some(r), Some(a)) => r <= RESIDUAL_TRUST_FACTOR * a.norm().max(1.0),
        _ => true,
    };
    if !residual_ok {
        warnings.push(format!(
            "supplied factorization residual {:.3e} is large",
            residual.unwrap()
        ));
    }
    let well_conditioned = condition <= tol.condition_cap;
    if !well_conditioned {
        warnings.push(format!("supplied B has condition number {condition:.3e}"));
    }
    Ok(JordanStructure {
        dimension: d,
        groups,
        jordan,
        basis,
        basis_inverse: ComplexMatrix::from_dmatrix(inverse)?,
        residual,
        condition,
        trusted: residual_ok && well_conditioned,
        supplied: true,
        warnings,
        tolerances: *tol,
    })
}

impl From<&SpectralData> for JordanStructure {
    /// The diagonal case viewed as a Jordan structure with all blocks of size one.
    fn from(sd: &SpectralData) -> Self {
        let d = sd.dimension;
        let groups = sd
            .eigenspaces
            .iter()
            .map(|e| JordanGroup {
                eigenvalue: e.eigenvalue,
                block_sizes: vec![1; e.multiplicity],
                cyclic_rows: e.coordinates.clone(),
                rank_profile: vec![d, d - e.multiplicity],
            })
            .collect();
        JordanStructure {
            dimension: d,
            groups,
            jordan: sd.diagonal.clone(),
            basis: sd.basis.clone(),
            basis_inverse: sd.basis_inverse.clone(),
            residual: Some(sd.residual),
            condition: condition_number(sd.basis.as_dmatrix()),
            trusted: true,
            supplied: false,
            warnings: Vec::new(),
            tolerances: sd.tolerances,
        }
    }
}
