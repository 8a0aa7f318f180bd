//! Library results against brute-force or closed-form oracles.

mod common;

use std::collections::BTreeSet;

use gkz::dmodule;
use gkz::lattice::{self, IntegerMatrix};
use gkz::rational::{q, qr, Q};
use gkz::series::{exponent_v, gamma_series};
use gkz::triangulation;
use gkz::weight::WeightVector;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn kernel_basis_generates_every_small_kernel_vector() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(d + 1..=4);
        let a = common::random_matrix(&mut rng, d, n, 3, false, false);
        let basis = lattice::kernel_basis(&a).unwrap();
        assert_eq!(basis.rank(), n - d);
        for b in &basis.vectors {
            assert!(a.apply(b).iter().all(Zero::is_zero), "{:?} not in ker {:?}", b, a.rows());
        }
        let brute = common::kernel_in_box(a.rows(), 3);
        for u in &brute {
            let coords = basis.coordinates(&ints(u));
            assert!(coords.is_some(), "{u:?} missed by the basis of {:?}", a.rows());
            assert_eq!(basis.combine(&coords.unwrap()), ints(u));
        }
    }
}

#[test]
fn box_kernel_vectors_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(d + 1..=4);
        let a = common::random_matrix(&mut rng, d, n, 3, false, false);
        let ours: BTreeSet<Vec<BigInt>> = dmodule::kernel_vectors_in_box(&a, 2).unwrap().into_iter().collect();
        // brute force keeps both signs and zero; the library keeps one sign
        let brute: BTreeSet<Vec<BigInt>> = common::kernel_in_box(a.rows(), 2)
            .into_iter()
            .filter(|u| u.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
            .map(|u| ints(&u))
            .collect();
        assert_eq!(ours, brute, "{:?}", a.rows());
    }
}

#[test]
fn normalized_volume_matches_hull_area() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..60 {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(d + 1..=6);
        let a = common::random_matrix(&mut rng, d, n, 4, false, false);
        let all: Vec<usize> = (0..n).collect();
        let oracle = common::volume_oracle(a.rows()).unwrap() as u64;
        assert_eq!(lattice::normalized_volume(&a, &all), oracle, "{:?}", a.rows());
    }
}

#[test]
fn homogeneous_triangulations_tile_the_polygon() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut done = 0;
    while done < 30 {
        let n = rng.gen_range(3..=7);
        let a = common::random_matrix(&mut rng, 3, n, 3, true, true);
        let w = common::random_weight(&mut rng, n, 0, 50);
        let Ok(t) = triangulation::triangulate(&a, &w) else { continue };
        let oracle = common::volume_oracle(a.rows()).unwrap() as u64;
        assert_eq!(t.volume(&a), oracle, "{:?} w {:?}", a.rows(), w.base());
        done += 1;
    }
}

/// `[v]_{u−} / [v+u]_{u+}` straight from the definition, one factor at a time.
fn coefficient_oracle(v: &[Q], u: &[i64]) -> Q {
    let mut c = Q::one();
    for (x, &m) in v.iter().zip(u) {
        if m < 0 {
            for i in 0..-m {
                c *= x - q(i);
            }
        } else {
            let y = x + q(m);
            for i in 0..m {
                c /= &y - q(i);
            }
        }
    }
    c
}

fn negative_integers(v: &[Q]) -> Vec<usize> {
    (0..v.len()).filter(|&j| v[j].is_integer() && v[j].is_negative()).collect()
}

#[test]
fn gamma_series_matches_brute_force_enumeration() {
    let a = IntegerMatrix::new(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap();
    let w = WeightVector::from_ints(&[1, 2, 5, 1]);
    let hi = q(14);
    // <w,u> = u_2 + 4u_3 with u_2, u_3 >= -1 keeps every coordinate of a term within 20
    let candidates = common::kernel_in_box(a.rows(), 20);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..4 {
        let beta = common::random_beta(&mut rng, 2);
        for (sigma, k) in [(vec![0, 3], vec![0, 0]), (vec![0, 3], vec![1, 0]), (vec![0, 3], vec![0, 1])] {
            let v = exponent_v(&a, &sigma, &k, &beta).unwrap();
            let s = gamma_series(&a, &beta, &v, &w, &hi).unwrap();
            let nsupp = negative_integers(&v.v);
            let mut expected = Vec::new();
            for u in candidates.iter().cloned() {
                let weight: i64 = [1, 2, 5, 1].iter().zip(&u).map(|(x, y)| x * y).sum();
                let shifted: Vec<Q> = v.v.iter().zip(&u).map(|(x, &y)| x + q(y)).collect();
                if q(weight) <= hi && negative_integers(&shifted) == nsupp {
                    expected.push(u);
                }
            }
            expected.sort();
            let got: Vec<Vec<i64>> = s.terms.iter().map(|t| common::small(&t.offset)).collect();
            assert_eq!(got, expected, "support for k = {k:?}");
            for t in &s.terms {
                assert_eq!(t.coefficient, coefficient_oracle(&v.v, &common::small(&t.offset)));
            }
        }
    }
}

#[test]
fn outer_facet_series_is_the_closed_form() {
    let a = IntegerMatrix::new(vec![vec![1, 0, 3], vec![0, 1, -1]]).unwrap();
    let beta = vec![qr(7, 5), qr(11, 7)];
    let v = exponent_v(&a, &[0, 1], &[0], &beta).unwrap();
    let s = gamma_series(&a, &beta, &v, &WeightVector::from_ints(&[0, 0, 1]), &q(25)).unwrap();
    assert_eq!(s.len(), 26);
    // c_m = [b1]_{3m} / ((b2+1)⋯(b2+m) · m!)
    let mut c = Q::one();
    for m in 0..26i64 {
        if m > 0 {
            for i in 0..3 {
                c *= &beta[0] - q(3 * (m - 1) + i);
            }
            c /= (&beta[1] + q(m)) * q(m);
        }
        assert_eq!(s.coefficient(&ints(&[-3 * m, m, m])), Some(&c), "m = {m}");
    }
}

#[test]
fn degree_bound_matches_formula_for_twisted_cubic() {
    let a = IntegerMatrix::new(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap();
    let vol = common::volume_oracle(a.rows()).unwrap() as u64;
    assert_eq!(vol, 3);
    assert_eq!(dmodule::degree_bound(&a), common::degree_bound_oracle(2, 4, vol).into());
    assert_eq!(dmodule::degree_bound(&a), 955u64.into());
}

#[test]
fn degree_bound_of_outer_facet_matrix_follows_its_volume() {
    let a = IntegerMatrix::new(vec![vec![1, 0, 3], vec![0, 1, -1]]).unwrap();
    let vol = common::volume_oracle(a.rows()).unwrap() as u64;
    assert_eq!(vol, 3);
    assert_eq!(dmodule::degree_bound(&a), common::degree_bound_oracle(2, 3, vol).into());
}

/// A target of 508 corresponds to volume 2; the exact volume is 3.
#[test]
#[ignore = "508 is unattainable: the normalized volume of [[1,0,3],[0,1,-1]] is 3, giving 764"]
fn degree_bound_of_outer_facet_matrix_is_508() {
    let a = IntegerMatrix::new(vec![vec![1, 0, 3], vec![0, 1, -1]]).unwrap();
    assert_eq!(dmodule::degree_bound(&a), 508u64.into());
}
