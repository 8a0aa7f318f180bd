//! Independent oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the algorithms under test
//! except to build inputs.
#![allow(dead_code)]

use gkz::lattice::{self, IntegerMatrix};
use gkz::rational::{qr, Q};
use gkz::weight::WeightVector;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Integer kernel vectors of `A` in the box `[-bound, bound]^n`, by brute force.
pub fn kernel_in_box(rows: &[Vec<i64>], bound: i64) -> Vec<Vec<i64>> {
    let n = rows[0].len();
    let mut out = Vec::new();
    let mut u = vec![-bound; n];
    loop {
        if rows.iter().all(|r| r.iter().zip(&u).map(|(a, x)| a * x).sum::<i64>() == 0) {
            out.push(u.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if u[i] < bound {
                u[i] += 1;
                break;
            }
            u[i] = -bound;
            i += 1;
        }
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Twice the area of the convex hull of plane points (monotone chain + shoelace).
pub fn twice_hull_area(points: &[(i64, i64)]) -> i64 {
    let mut p = points.to_vec();
    p.sort();
    p.dedup();
    if p.len() < 3 {
        return 0;
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(i64, i64)>> =
            if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &x in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], x) <= 0 {
                hull.pop();
            }
            hull.push(x);
        }
        hull.pop();
    }
    let m = hull.len();
    (0..m).map(|i| hull[i].0 * hull[(i + 1) % m].1 - hull[(i + 1) % m].0 * hull[i].1).sum::<i64>().abs()
}

/// Normalized volume of `conv(0, columns)` for `d <= 2`, or for homogeneous
/// `d = 3` with first row all ones (then it is twice the area of the dehomogenized hull).
pub fn volume_oracle(rows: &[Vec<i64>]) -> Option<i64> {
    let n = rows[0].len();
    match rows.len() {
        1 => Some(rows[0].iter().copied().max().unwrap().max(0) - rows[0].iter().copied().min().unwrap().min(0)),
        2 => {
            let mut pts: Vec<(i64, i64)> = (0..n).map(|j| (rows[0][j], rows[1][j])).collect();
            pts.push((0, 0));
            Some(twice_hull_area(&pts))
        }
        3 if rows[0].iter().all(|&x| x == 1) => {
            let pts: Vec<(i64, i64)> = (0..n).map(|j| (rows[1][j], rows[2][j])).collect();
            Some(twice_hull_area(&pts))
        }
        _ => None,
    }
}

/// `(n+1)(2^{2(d+1)} vol − 1)` evaluated in plain integers.
pub fn degree_bound_oracle(d: u32, n: u64, vol: u64) -> u64 {
    (n + 1) * (4u64.pow(d + 1) * vol - 1)
}

/// `ln |Γ(x)|` and the sign of `Γ(x)`, for `x` not a non-positive integer.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (statrs::function::gamma::ln_gamma(x), 1.0);
    }
    // reflection: Γ(x) Γ(1 − x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let ln = std::f64::consts::PI.ln() - s.abs().ln() - statrs::function::gamma::ln_gamma(1.0 - x);
    (ln, s.signum())
}

/// `Π_j Γ(v_j + 1) / Γ(v_j + u_j + 1)` as `(ln |·|, sign)`.
pub fn gamma_ratio(v: &[f64], u: &[i64]) -> (f64, f64) {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for (&vj, &uj) in v.iter().zip(u) {
        if uj == 0 {
            continue;
        }
        let (a, sa) = ln_gamma_signed(vj + 1.0);
        let (b, sb) = ln_gamma_signed(vj + uj as f64 + 1.0);
        ln += a - b;
        sign *= sa * sb;
    }
    (ln, sign)
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap()
}

pub fn small(u: &[BigInt]) -> Vec<i64> {
    u.iter().map(|x| x.to_i64().unwrap()).collect()
}

/// Random full-rank `d × n` matrix with `ZA = Z^d`; `homogeneous` forces a
/// first row of ones and `pointed` rejects non-pointed draws.
pub fn random_matrix(rng: &mut ChaCha8Rng, d: usize, n: usize, range: i64, homogeneous: bool, pointed: bool) -> IntegerMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..n).map(|_| if homogeneous && i == 0 { 1 } else { rng.gen_range(-range..=range) }).collect())
            .collect();
        let Ok(a) = IntegerMatrix::validated(rows) else { continue };
        if (0..n).any(|j| a.column(j).iter().all(|&x| x == 0)) {
            continue;
        }
        if pointed && !lattice::is_pointed(&a).pointed {
            continue;
        }
        return a;
    }
}

/// Rational with a large prime denominator: generic with overwhelming probability.
pub fn random_beta(rng: &mut ChaCha8Rng, d: usize) -> Vec<Q> {
    const PRIMES: [i64; 6] = [101, 103, 107, 109, 113, 127];
    (0..d)
        .map(|_| {
            let den = PRIMES[rng.gen_range(0..PRIMES.len())];
            let mut num = rng.gen_range(-3 * den..=3 * den);
            if num % den == 0 {
                num += 1;
            }
            qr(num, den)
        })
        .collect()
}

pub fn random_weight(rng: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> WeightVector {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    WeightVector::from_ints(&w)
}


#[test]
fn oracle_self_checks() {
    assert_eq!(twice_hull_area(&[(0, 0), (0, 1), (3, -1), (1, 0)]), 3);
    assert_eq!(twice_hull_area(&[(0, 0), (1, 0), (0, 1), (1, 1)]), 2);
    assert_eq!(kernel_in_box(&[vec![1, 1]], 2).len(), 5);
    let (ln, s) = ln_gamma_signed(-0.5);
    assert!((ln - (2.0 * std::f64::consts::PI.sqrt()).ln()).abs() < 1e-12 && s < 0.0);
}
