//! Integer points of a rational polyhedron `{c : M c <= b}`.
//!
//! A bounding box comes from exact LPs; points are then listed by a
//! depth-first search that, at each coordinate, derives the admissible range
//! from every constraint using the fixed prefix and the box of the suffix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lp::{LinearProgram, LpResult, Relation};
use crate::rational::{self, q, qi, Q};

/// One inequality `coeffs · c <= rhs`.
#[derive(Clone, Debug)]
pub struct HalfSpace {
    pub coeffs: Vec<Q>,
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Bounds {
    Empty,
    Box(Vec<(BigInt, BigInt)>),
    /// A nonzero recession direction of the polyhedron.
    Unbounded(Vec<Q>),
}

fn program(rows: &[HalfSpace], dim: usize, homogeneous: bool) -> LinearProgram {
    let mut lp = LinearProgram::new(dim);
    for h in rows {
        let rhs = if homogeneous { Q::zero() } else { h.rhs.clone() };
        lp.add(h.coeffs.clone(), Relation::Le, rhs);
    }
    lp
}

fn recession_direction(rows: &[HalfSpace], dim: usize, var: usize, sign: i64) -> Vec<Q> {
    let mut lp = program(rows, dim, true);
    let mut e = vec![Q::zero(); dim];
    e[var] = q(1);
    lp.add(e, Relation::Eq, q(sign));
    lp.feasible_point().expect("unbounded LP has a recession direction")
}

pub fn bounding_box(rows: &[HalfSpace], dim: usize) -> Bounds {
    let Some(lp) = program(rows, dim, false).prepare() else {
        return Bounds::Empty;
    };
    let mut out = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut e = vec![Q::zero(); dim];
        e[i] = q(1);
        let lo = match lp.minimize(&e) {
            LpResult::Optimal { value, .. } => rational::ceil(&value),
            LpResult::Infeasible => return Bounds::Empty,
            LpResult::Unbounded => return Bounds::Unbounded(recession_direction(rows, dim, i, -1)),
        };
        let hi = match lp.maximize(&e) {
            LpResult::Optimal { value, .. } => rational::floor(&value),
            LpResult::Infeasible => return Bounds::Empty,
            LpResult::Unbounded => return Bounds::Unbounded(recession_direction(rows, dim, i, 1)),
        };
        if lo > hi {
            return Bounds::Empty;
        }
        out.push((lo, hi));
    }
    Bounds::Box(out)
}

/// All integer points, in lexicographic order. `Err` carries a recession direction.
pub fn lattice_points(rows: &[HalfSpace], dim: usize) -> Result<Vec<Vec<BigInt>>, Vec<Q>> {
    if dim == 0 {
        let ok = rows.iter().all(|h| !h.rhs.is_negative());
        return Ok(if ok { vec![Vec::new()] } else { Vec::new() });
    }
    let bx = match bounding_box(rows, dim) {
        Bounds::Empty => return Ok(Vec::new()),
        Bounds::Unbounded(dir) => return Err(dir),
        Bounds::Box(b) => b,
    };
    // Clear denominators row by row so the search runs in integers.
    let rows: Vec<(Vec<BigInt>, BigInt)> = rows
        .iter()
        .map(|h| {
            let l = h.coeffs.iter().chain([&h.rhs]).fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let scale = |x: &Q| (x * qi(&l)).to_integer();
            (h.coeffs.iter().map(scale).collect(), scale(&h.rhs))
        })
        .collect();
    // suffix_min[r][i]: minimum of sum_{j >= i} coeffs_j c_j over the box
    let suffix_min: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|(coeffs, _)| {
            let mut acc = vec![BigInt::zero(); dim + 1];
            for j in (0..dim).rev() {
                let a = &coeffs[j];
                let m = if a.is_negative() { a * &bx[j].1 } else { a * &bx[j].0 };
                acc[j] = &acc[j + 1] + m;
            }
            acc
        })
        .collect();
    let mut out = Vec::new();
    let mut prefix = vec![BigInt::zero(); rows.len()];
    let mut point = Vec::with_capacity(dim);
    search(&rows, &bx, &suffix_min, 0, &mut prefix, &mut point, &mut out);
    Ok(out)
}

fn search(
    rows: &[(Vec<BigInt>, BigInt)],
    bx: &[(BigInt, BigInt)],
    suffix_min: &[Vec<BigInt>],
    i: usize,
    prefix: &mut Vec<BigInt>,
    point: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) {
    let dim = bx.len();
    if i == dim {
        out.push(point.clone());
        return;
    }
    let (mut lo, mut hi) = bx[i].clone();
    for (r, (coeffs, rhs)) in rows.iter().enumerate() {
        let slack = rhs - &prefix[r] - &suffix_min[r][i + 1];
        let a = &coeffs[i];
        if a.is_zero() {
            if slack.is_negative() {
                return;
            }
            continue;
        }
        if a.is_positive() {
            hi = hi.min(slack.div_floor(a));
        } else {
            lo = lo.max(slack.div_ceil(a));
        }
    }
    let mut c = lo;
    while c <= hi {
        for (r, (coeffs, _)) in rows.iter().enumerate() {
            if !coeffs[i].is_zero() {
                prefix[r] += &coeffs[i] * &c;
            }
        }
        point.push(c.clone());
        search(rows, bx, suffix_min, i + 1, prefix, point, out);
        point.pop();
        for (r, (coeffs, _)) in rows.iter().enumerate() {
            if !coeffs[i].is_zero() {
                prefix[r] -= &coeffs[i] * &c;
            }
        }
        c += 1;
    }
}
