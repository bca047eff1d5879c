//! Exact rational arithmetic oracles and random integer matrices.
#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dynsamp::{ComplexMatrix, C64};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn to_complex(m: &IntMatrix) -> ComplexMatrix {
    let rows: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    ComplexMatrix::from_real_rows(&rows).unwrap()
}

fn big(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn row_times(row: &[BigInt], a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let d = a.len();
    (0..d)
        .map(|j| (0..d).fold(BigInt::zero(), |acc, k| acc + &row[k] * &a[k][j]))
        .collect()
}

/// Rank over the rationals by Gaussian elimination.
pub fn exact_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in rank + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let v = &f * &m[rank][j];
                m[i][j] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Exact rank of the rows `e_i^T A^j`, `i` in `omega`, `j = 0..=budget_i`.
pub fn exact_sampling_rank(a: &IntMatrix, omega: &[usize], budgets: &[usize]) -> usize {
    let d = a.len();
    let ab = big(a);
    let mut rows = Vec::new();
    for (&i, &l) in omega.iter().zip(budgets) {
        let mut row: Vec<BigInt> = (0..d)
            .map(|k| if k == i { BigInt::one() } else { BigInt::zero() })
            .collect();
        rows.push(row.clone());
        for _ in 0..l.min(d) {
            row = row_times(&row, &ab);
            rows.push(row.clone());
        }
    }
    exact_rank(&rows)
}

fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Random unimodular matrix and its inverse, as products of elementary
/// row operations with small multipliers.
fn unimodular(d: usize, rng: &mut ChaCha8Rng) -> (IntMatrix, IntMatrix) {
    let id: IntMatrix = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    let (mut s, mut inv) = (id.clone(), id);
    for _ in 0..d + 1 {
        let i = rng.random_range(0..d);
        let j = rng.random_range(0..d);
        if i == j {
            continue;
        }
        let c = if rng.random_bool(0.5) { 1 } else { -1 };
        // s <- E s with E = I + c e_i e_j^T; inv <- inv E^{-1}.
        for k in 0..d {
            s[i][k] += c * s[j][k];
        }
        for k in 0..d {
            inv[k][j] -= c * inv[k][i];
        }
    }
    (s, inv)
}

/// Random integer matrix of dimension `d`: either a dense random matrix, or
/// `S J S^{-1}` with `S` unimodular and `J` an integer Jordan matrix with
/// repeated eigenvalues.
pub fn random_int_matrix(d: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    match rng.random_range(0..3) {
        0 => (0..d)
            .map(|_| (0..d).map(|_| rng.random_range(-3..=3)).collect())
            .collect(),
        kind => {
            let mut j: IntMatrix = vec![vec![0; d]; d];
            let pool: Vec<i64> = (0..rng.random_range(1..=d.min(3)))
                .map(|_| rng.random_range(-2..=2))
                .collect();
            for i in 0..d {
                j[i][i] = pool[rng.random_range(0..pool.len())];
            }
            if kind == 2 {
                for i in 1..d {
                    if j[i][i] == j[i - 1][i - 1] && rng.random_bool(0.5) {
                        j[i][i - 1] = 1;
                    }
                }
            }
            let (s, inv) = unimodular(d, rng);
            matmul(&matmul(&s, &j), &inv)
        }
    }
}

pub fn random_vector(d: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..d)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `scale * a` as an integer matrix; panics unless every entry is integral.
pub fn scaled_int(a: &ComplexMatrix, scale: f64) -> IntMatrix {
    (0..a.nrows())
        .map(|i| {
            (0..a.ncols())
                .map(|j| {
                    let x = a[(i, j)].re * scale;
                    assert!(x.fract() == 0.0 && a[(i, j)].im == 0.0);
                    x as i64
                })
                .collect()
        })
        .collect()
}
