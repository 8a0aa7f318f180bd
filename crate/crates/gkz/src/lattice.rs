//! The configuration matrix `A` and its lattice data: integer kernels,
//! the kernel bases `B_sigma`, normalized volumes, pointedness and the
//! homogenization `rho(A)`.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GkzError, Result};
use crate::linalg::{self, IntMat, RatMat};
use crate::lp::{LinearProgram, LpResult, Relation};
use crate::rational::{self, q, qi, Q};

/// A `d × n` integer matrix; columns `a_1, …, a_n` are the points of the configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegerMatrix {
    rows: Vec<Vec<i64>>,
    n: usize,
}

impl IntegerMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(GkzError::Shape("no rows".into()));
        };
        let n = first.len();
        if n == 0 {
            return Err(GkzError::Shape("no columns".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(GkzError::Shape(format!("row {} has {} entries, expected {n}", bad + 1, rows[bad].len())));
        }
        Ok(Self { rows, n })
    }

    /// Builds the matrix and checks full row rank and `ZA = Z^d`.
    pub fn validated(rows: Vec<Vec<i64>>) -> Result<Self> {
        let a = Self::new(rows)?;
        a.check_full_rank()?;
        a.check_generates_lattice()?;
        Ok(a)
    }

    pub fn d(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn column_q(&self, j: usize) -> Vec<Q> {
        self.rows.iter().map(|r| q(r[j])).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntegerMatrix {
        let rows = self.rows.iter().map(|r| cols.iter().map(|&j| r[j]).collect()).collect();
        IntegerMatrix { rows, n: cols.len() }
    }

    pub fn to_int(&self) -> IntMat {
        self.rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    pub fn to_rat(&self) -> RatMat {
        self.rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    /// Square submatrix `A_sigma` as an integer matrix.
    pub fn submatrix_int(&self, sigma: &[usize]) -> IntMat {
        self.rows.iter().map(|r| sigma.iter().map(|&j| BigInt::from(r[j])).collect()).collect()
    }

    pub fn det(&self, sigma: &[usize]) -> BigInt {
        debug_assert_eq!(sigma.len(), self.d());
        linalg::det_int(&self.submatrix_int(sigma))
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.to_rat())
    }

    pub fn apply(&self, u: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(u).map(|(&a, x)| BigInt::from(a) * x).sum())
            .collect()
    }

    pub fn apply_q(&self, v: &[Q]) -> Vec<Q> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).filter(|(&a, _)| a != 0).map(|(&a, x)| q(a) * x).sum())
            .collect()
    }

    pub fn check_full_rank(&self) -> Result<()> {
        let transpose: RatMat = (0..self.n).map(|j| self.column_q(j)).collect();
        let left_kernel = linalg::nullspace(&transpose, self.d());
        if left_kernel.is_empty() {
            return Ok(());
        }
        let mut dependent: Vec<usize> = left_kernel
            .iter()
            .flat_map(|y| y.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i))
            .collect();
        dependent.sort_unstable();
        dependent.dedup();
        Err(GkzError::RankDeficient { dependent_rows: dependent })
    }

    pub fn smith(&self) -> linalg::Smith {
        linalg::smith(&self.to_int(), self.n)
    }

    pub fn check_generates_lattice(&self) -> Result<()> {
        let s = self.smith();
        if s.rank() == self.d() && s.diagonal.iter().all(|x| x.is_one()) {
            Ok(())
        } else {
            Err(GkzError::LatticeIndex { invariant_factors: s.diagonal })
        }
    }

    /// Whether `(1, …, 1)` lies in the rowspan (homogeneous toric ideal).
    pub fn is_homogeneous(&self) -> bool {
        let ones = vec![Q::one(); self.n];
        in_rowspan(self, &ones)
    }
}

pub fn in_rowspan(a: &IntegerMatrix, w: &[Q]) -> bool {
    let mut m = a.to_rat();
    let r = linalg::rank(&m);
    m.push(w.to_vec());
    linalg::rank(&m) == r
}

/// Saturated basis of `ker_Z(A)` in row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<BigInt>>,
    /// Ambient dimension (number of columns of `A`).
    pub n: usize,
}

impl KernelBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of `u` in the basis, `None` when `u` is not in the lattice.
    pub fn coordinates(&self, u: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = u.to_vec();
        let mut coords = Vec::with_capacity(self.vectors.len());
        for b in &self.vectors {
            let p = b.iter().position(|x| !x.is_zero())?;
            if !(&rest[p] % &b[p]).is_zero() {
                return None;
            }
            let c = &rest[p] / &b[p];
            for (x, y) in rest.iter_mut().zip(b) {
                *x -= &c * y;
            }
            coords.push(c);
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn combine(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        let mut u = vec![BigInt::zero(); n];
        for (c, b) in coords.iter().zip(&self.vectors) {
            for (x, y) in u.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        u
    }
}

pub fn kernel_basis(a: &IntegerMatrix) -> Result<KernelBasis> {
    a.check_full_rank()?;
    let s = a.smith();
    if !s.diagonal.iter().all(|x| x.is_one()) {
        return Err(GkzError::LatticeIndex { invariant_factors: s.diagonal });
    }
    let n = a.n();
    let raw: IntMat = (s.rank()..n).map(|j| (0..n).map(|i| s.right[i][j].clone()).collect()).collect();
    Ok(KernelBasis { vectors: linalg::row_hnf(&raw), n })
}

/// The `n × (n−d)` kernel basis attached to a maximal simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSigma {
    pub sigma: Vec<usize>,
    pub complement: Vec<usize>,
    /// `columns[i]` is the column indexed by `complement[i]`, as an `n`-vector.
    pub columns: Vec<Vec<Q>>,
    /// `A_sigma^{-1}`.
    pub inverse: RatMat,
}

impl BSigma {
    /// `B_sigma · m` for `m` indexed by the complement.
    pub fn combine(&self, m: &[Q]) -> Vec<Q> {
        let n = self.sigma.len() + self.complement.len();
        let mut out = vec![Q::zero(); n];
        for (c, col) in m.iter().zip(&self.columns) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in out.iter_mut().zip(col) {
                if !y.is_zero() {
                    *x += c * y;
                }
            }
        }
        out
    }

    /// Row vector `w · B_sigma` (one entry per complement index).
    pub fn weigh(&self, w: &[Q]) -> Vec<Q> {
        self.columns.iter().map(|c| rational::dot(w, c)).collect()
    }
}

pub fn complement(sigma: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|j| !sigma.contains(j)).collect()
}

pub fn simplex_inverse(a: &IntegerMatrix, sigma: &[usize]) -> Result<RatMat> {
    if sigma.len() != a.d() {
        return Err(GkzError::DimensionMismatch { what: "simplex".into(), expected: a.d(), found: sigma.len() });
    }
    let m = linalg::to_rat(&a.submatrix_int(sigma));
    linalg::invert(&m).ok_or_else(|| GkzError::SingularSimplex { sigma: sigma.to_vec() })
}

pub fn b_sigma(a: &IntegerMatrix, sigma: &[usize]) -> Result<BSigma> {
    let mut sigma = sigma.to_vec();
    sigma.sort_unstable();
    let inverse = simplex_inverse(a, &sigma)?;
    let n = a.n();
    let comp = complement(&sigma, n);
    let columns = comp
        .iter()
        .map(|&j| {
            let coords = linalg::mat_vec(&inverse, &a.column_q(j));
            let mut col = vec![Q::zero(); n];
            col[j] = Q::one();
            for (c, &s) in coords.iter().zip(&sigma) {
                col[s] = -c.clone();
            }
            col
        })
        .collect();
    Ok(BSigma { sigma, complement: comp, columns, inverse })
}

fn orientation(points: &[Vec<BigInt>], facet: &[usize], p: usize) -> BigInt {
    let base = &points[facet[0]];
    let mut m: IntMat = facet[1..]
        .iter()
        .map(|&i| points[i].iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    m.push(points[p].iter().zip(base).map(|(x, y)| x - y).collect());
    linalg::det_int(&m)
}

/// Placing triangulation of the point set (lexicographic insertion order).
/// Returns `None` when the points do not affinely span `R^dim`.
pub fn placing_triangulation(points: &[Vec<BigInt>], dim: usize) -> Option<Vec<Vec<usize>>> {
    // greedy affinely independent start
    let mut start = vec![0usize];
    for i in 1..points.len() {
        if start.len() == dim + 1 {
            break;
        }
        let mut m: RatMat = start[1..]
            .iter()
            .map(|&s| points[s].iter().zip(&points[start[0]]).map(|(x, y)| qi(&(x - y))).collect())
            .collect();
        let r = linalg::rank(&m);
        m.push(points[i].iter().zip(&points[start[0]]).map(|(x, y)| qi(&(x - y))).collect());
        if linalg::rank(&m) > r {
            start.push(i);
        }
    }
    if start.len() < dim + 1 {
        return None;
    }
    let mut simplices: Vec<Vec<usize>> = vec![start.clone()];
    // facet -> opposite vertices of the simplices containing it
    let mut facets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let register = |facets: &mut HashMap<Vec<usize>, Vec<usize>>, simplex: &[usize]| {
        for (k, &opp) in simplex.iter().enumerate() {
            let mut f: Vec<usize> = simplex.iter().enumerate().filter(|&(t, _)| t != k).map(|(_, &x)| x).collect();
            f.sort_unstable();
            facets.entry(f).or_default().push(opp);
        }
    };
    register(&mut facets, &start);
    for p in 0..points.len() {
        if start.contains(&p) {
            continue;
        }
        let visible: Vec<Vec<usize>> = facets
            .iter()
            .filter(|(_, opp)| opp.len() == 1)
            .filter(|(f, opp)| {
                let sp = orientation(points, f, p);
                let sq = orientation(points, f, opp[0]);
                (sp.is_positive() && sq.is_negative()) || (sp.is_negative() && sq.is_positive())
            })
            .map(|(f, _)| f.clone())
            .sorted()
            .collect();
        for f in visible {
            let mut s = f.clone();
            s.push(p);
            register(&mut facets, &s);
            simplices.push(s);
        }
    }
    Some(simplices)
}

/// `vol(A_tau) = d! · vol(conv(0, a_j : j ∈ tau))`, exact.
pub fn normalized_volume(a: &IntegerMatrix, tau: &[usize]) -> u64 {
    let d = a.d();
    let mut points: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); d]];
    let mut cols: Vec<Vec<i64>> = tau.iter().map(|&j| a.column(j)).collect();
    cols.sort();
    cols.dedup();
    points.extend(cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()));
    let Some(simplices) = placing_triangulation(&points, d) else { return 0 };
    let total: BigInt = simplices
        .iter()
        .map(|s| {
            let m: IntMat = s[1..]
                .iter()
                .map(|&i| points[i].iter().zip(&points[s[0]]).map(|(x, y)| x - y).collect())
                .collect();
            linalg::det_int(&m).abs()
        })
        .sum();
    total.to_u64().expect("volume fits in u64")
}

/// Result of the pointedness test.
#[derive(Clone, Debug, PartialEq)]
pub struct Pointedness {
    pub pointed: bool,
    /// A strictly positive vector of the rowspan, primitive integral.
    pub certificate: Option<Vec<BigInt>>,
}

pub fn is_pointed(a: &IntegerMatrix) -> Pointedness {
    let n = a.n();
    if a.is_homogeneous() {
        return Pointedness { pointed: true, certificate: Some(vec![BigInt::one(); n]) };
    }
    let d = a.d();
    let mut lp = LinearProgram::new(d);
    for j in 0..n {
        lp.add(a.column_q(j), Relation::Ge, Q::one());
    }
    // minimise the total weight (y A)·(1,…,1)
    let objective: Vec<Q> = (0..d).map(|i| q(a.rows()[i].iter().sum())).collect();
    match lp.minimize(&objective) {
        LpResult::Optimal { point, .. } => {
            let w: Vec<Q> = (0..n).map(|j| rational::dot(&point, &a.column_q(j))).collect();
            Pointedness { pointed: true, certificate: Some(rational::primitive_integer_vector(&w)) }
        }
        _ => Pointedness { pointed: false, certificate: None },
    }
}

/// `rho(A)`: prepend a zero column, then a row of ones.
pub fn rho_homogenize(a: &IntegerMatrix) -> IntegerMatrix {
    let n = a.n();
    let mut rows = vec![vec![1i64; n + 1]];
    for r in a.rows() {
        let mut row = vec![0i64];
        row.extend_from_slice(r);
        rows.push(row);
    }
    IntegerMatrix { rows, n: n + 1 }
}

/// All `d`-subsets with `det(A_sigma) != 0`, lexicographically sorted.
pub fn maximal_simplices(a: &IntegerMatrix) -> Vec<Vec<usize>> {
    (0..a.n()).combinations(a.d()).filter(|s| !a.det(s).is_zero()).collect()
}
