//! Dense exact linear algebra over Z and Q for desk-scale matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{qi, Q};

pub type IntMat = Vec<Vec<BigInt>>;
pub type RatMat = Vec<Vec<Q>>;

pub fn identity_int(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn to_rat(m: &IntMat) -> RatMat {
    m.iter().map(|r| r.iter().map(qi).collect()).collect()
}

/// Determinant of a square integer matrix (fraction-free Bareiss elimination).
pub fn det_int(m: &IntMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn invert(m: &RatMat) -> Option<RatMat> {
    let n = m.len();
    let mut a: RatMat = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        let prow = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &RatMat, v: &[Q]) -> Vec<Q> {
    m.iter().map(|r| crate::rational::dot(r, v)).collect()
}

/// Reduced row echelon form; returns (rref, pivot columns).
pub fn rref(m: &RatMat) -> (RatMat, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &piv;
        }
        let prow = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &RatMat) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}` over Q.
pub fn nullspace(m: &RatMat, cols: usize) -> Vec<Vec<Q>> {
    let (a, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Q::zero(); cols];
            x[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -a[r][f].clone();
            }
            x
        })
        .collect()
}

/// Smith normal form `U · M · V = D` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Nonzero diagonal entries of `D`, positive and successively dividing.
    pub diagonal: Vec<BigInt>,
    pub left: IntMat,
    pub right: IntMat,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

pub fn smith(m: &IntMat, cols: usize) -> Smith {
    let rows = m.len();
    let mut a = m.clone();
    let mut u = identity_int(rows);
    let mut v = identity_int(cols);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { diagonal, left: u, right: v };
            };
            a.swap(t, pi);
            u.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = a[i][t].div_floor(&a[t][t]);
                for j in 0..cols {
                    let s = &f * &a[t][j];
                    a[i][j] -= s;
                }
                for j in 0..rows {
                    let s = &f * &u[t][j];
                    u[i][j] -= s;
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = a[t][j].div_floor(&a[t][t]);
                for i in 0..rows {
                    let s = &f * &a[i][t];
                    a[i][j] -= s;
                }
                for i in 0..cols {
                    let s = &f * &v[i][t];
                    v[i][j] -= s;
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            if let Some(i) = bad {
                for j in 0..cols {
                    let s = a[i][j].clone();
                    a[t][j] += s;
                }
                for j in 0..rows {
                    let s = u[i][j].clone();
                    u[t][j] += s;
                }
                continue;
            }
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        diagonal.push(a[t][t].clone());
    }
    Smith { diagonal, left: u, right: v }
}

/// Row-style Hermite normal form of an integer matrix with independent rows:
/// pivots positive, entries above each pivot reduced into `[0, pivot)`.
pub fn row_hnf(m: &IntMat) -> IntMat {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-combine column c into row r
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].div_floor(&a[r][c]);
                let prow = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
                done &= a[i][c].is_zero();
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let prow = a[r].clone();
        for i in 0..r {
            let f = a[i][c].div_floor(&prow[c]);
            if f.is_zero() {
                continue;
            }
            for (x, y) in a[i].iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}
