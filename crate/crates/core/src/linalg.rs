//! Small exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::exact::Q;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Q>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows · x = 0}`, one vector per free column; vector `k` has
/// a 1 in free column `k` and 0 in the other free columns.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    (basis, free)
}

pub fn determinant(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let v = &a[c][j] * &f;
                a[i][j] -= v;
            }
        }
    }
    det
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>], bcols: usize) -> Vec<Vec<Q>> {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Solve `coeffs · x = target` where `coeffs` has full column rank and the
/// system is consistent. Returns `None` otherwise.
pub fn solve_unique(columns: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let k = columns.len();
    let n = target.len();
    let aug: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&aug, k + 1);
    if pivots.contains(&k) || pivots.len() != k {
        return None;
    }
    Some(r.iter().take(k).map(|row| row[k].clone()).collect())
}
