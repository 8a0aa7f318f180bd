//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process fails on any unexpected FAIL; a failure listed in `KNOWN`
//! is still printed as FAIL but does not fail the run.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gkz::dmodule;
use gkz::error::GkzError;
use gkz::lattice::{self, IntegerMatrix};
use gkz::nilsson::{self, Window};
use gkz::rational::{self, q, qr, Q};
use gkz::series::{self, TruncatedSeries};
use gkz::triangulation;
use gkz::weight::WeightVector;
use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GAMMA_REL_TOL: f64 = 1e-9;
const GEVREY_DIVERGENT: (f64, f64) = (1.9, 2.1);
const GEVREY_CONVERGENT: (f64, f64) = (0.9, 1.1);
/// The convergent series has a two-dimensional support; 3000 terms give
/// about 65 degrees whose slices lie entirely in the window.
const CONVERGENT_TERMS: usize = 3000;
const ANNIHILATION_SUPPORT_BOUND: u64 = 5;
const ANNIHILATION_MIN_TERMS: usize = 30;

/// Criteria whose target is known to be unattainable, with the reason.
const KNOWN: &[(u32, &str)] = &[(
    8,
    "the 508 target assumes vol = 2 for [[1,0,3],[0,1,-1]]; the exact volume is 3, and the formula then gives 764",
)];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: GkzError) -> String {
    e.to_string()
}

fn cubic() -> IntegerMatrix {
    IntegerMatrix::validated(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap()
}

fn outer_facet() -> IntegerMatrix {
    IntegerMatrix::validated(vec![vec![1, 0, 3], vec![0, 1, -1]]).unwrap()
}

fn outer_facet_weight() -> WeightVector {
    WeightVector::with_eps(vec![q(0), q(0), q(1)], vec![q(1), qr(11, 10), q(0)])
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn criterion_1() -> Check {
    let a = cubic();
    let beta = vec![qr(1, 2), qr(1, 3)];
    let w1 = WeightVector::from_ints(&[1, 2, 5, 1]);
    let w2 = WeightVector::from_ints(&[1, 5, 2, 1]);
    let sigma = vec![0, 3];
    for w in [&w1, &w2] {
        let t = triangulation::triangulate(&a, w).map_err(err)?;
        ensure(t.simplices == vec![sigma.clone()], || format!("T_w = {:?}", t.simplices))?;
    }
    ensure(triangulation::simplex_volume(&a, &sigma) == 3, || "vol(sigma) != 3".into())?;
    let omega = series::omega_representatives(&a, &sigma, &w1).map_err(err)?;
    ensure(omega.representatives.len() == 3, || format!("|Omega| = {}", omega.representatives.len()))?;

    let e = series::exponent_v(&a, &sigma, &[1, 0], &beta).map_err(err)?;
    let (b1, b2) = (&beta[0], &beta[1]);
    let expected = vec![b1 - (b2 + q(2)) / q(3), q(1), q(0), (b2 - q(1)) / q(3)];
    ensure(e.v == expected, || format!("v = {:?}", rational::fmt_vec(&e.v)))?;

    let u = ints(&[0, -1, 2, -1]);
    let s1 = series::gamma_series(&a, &beta, &e, &w1, &q(12)).map_err(err)?;
    let s2 = series::gamma_series(&a, &beta, &e, &w2, &q(12)).map_err(err)?;
    ensure(s1.coefficient(&u).is_some(), || "u not in the support".into())?;
    ensure(rational::dot_int(w2.base(), &u) == q(-2), || "<w2, u> != -2".into())?;

    let in1 = series::initial_form(&s1, &w1, &a).map_err(err)?;
    let in2 = series::initial_form(&s2, &w2, &a).map_err(err)?;
    let zero = vec![BigInt::from(0); 4];
    ensure(in1.trustworthy && in2.trustworthy, || "initial form not certified".into())?;
    ensure(in1.terms.len() == 1 && in1.terms[0].offset == zero, || "in_w1 != x^v".into())?;
    ensure(in2.terms.len() == 1 && in2.terms[0].offset == u, || "in_w2 is not the term at u".into())?;
    Ok("T_w = {{1,4}} for both weights, in_w1 = x^v, in_w2 = c x^(v+u) at weight -2".into())
}

fn criterion_2() -> Check {
    let a = outer_facet();
    let (b1, b2) = (qr(7, 5), qr(11, 7));
    let beta = vec![b1.clone(), b2.clone()];
    let kernel = lattice::kernel_basis(&a).map_err(err)?;
    let k = &kernel.vectors;
    ensure(k.len() == 1 && (k[0] == ints(&[-3, 1, 1]) || k[0] == ints(&[3, -1, -1])), || format!("kernel {k:?}"))?;

    let ext = triangulation::extend_triangulation(&a, &[0, 1], &WeightVector::from_ints(&[1, 1])).map_err(err)?;
    let expected = vec![vec![0, 1], vec![0, 2]];
    ensure(ext.triangulation.simplices == expected, || format!("extension {:?}", ext.triangulation.simplices))?;

    let basis = nilsson::nilsson_basis(&a, &beta, &outer_facet_weight(), &Window::MinTerms(50)).map_err(err)?;
    ensure(basis.simplices == expected, || format!("T_w = {:?}", basis.simplices))?;
    ensure(basis.dimension == 2, || format!("dimension {}", basis.dimension))?;
    let v1 = vec![b1.clone(), b2.clone(), q(0)];
    let v2 = vec![&b1 + q(3) * &b2, q(0), -&b2];
    ensure(basis.elements[0].series.base.v == v1, || "phi_1 exponent".into())?;
    ensure(basis.elements[1].series.base.v == v2, || "phi_2 exponent".into())?;

    let closed: [Box<dyn Fn(i64) -> Vec<Q>>; 2] = [
        Box::new(|m| vec![&b1 - q(3 * m), &b2 + q(m), q(m)]),
        Box::new(|m| vec![&b1 + q(3) * &b2 - q(3 * m), q(m), -&b2 + q(m)]),
    ];
    for (e, f) in basis.elements.iter().zip(&closed) {
        let s = &e.series;
        let first: Vec<Vec<Q>> = s.by_weight().into_iter().take(50).map(|t| s.exponent(t)).collect();
        let want: Vec<Vec<Q>> = (0..50).map(f).collect();
        ensure(first == want, || format!("support of series on {:?} differs from the closed form", e.sigma))?;
    }
    let conv = nilsson::convergent_subbasis(&basis);
    ensure(conv.elements.is_empty(), || "convergent sub-basis not empty".into())?;

    let (g, diag) =
        nilsson::gevrey_basis(&a, &beta, &[0, 1], &WeightVector::from_ints(&[1, 1]), &Window::MinTerms(10)).map_err(err)?;
    ensure(g.dimension == 1 && diag.volume == 1, || format!("gevrey dimension {} volume {}", g.dimension, diag.volume))?;
    Ok("kernel ±(-3,1,1), T = {{1,2},{1,3}}, 50 support points each, nilsson 2, gevrey 1, convergent 0".into())
}

fn random_shape(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let d = rng.gen_range(1..=3);
    let n = rng.gen_range(d + 1..=6);
    (d, n)
}

/// Draws generic (β, w) for `a` and returns the Nilsson basis.
fn random_basis(rng: &mut ChaCha8Rng, a: &IntegerMatrix, window: &Window) -> Option<(Vec<Q>, nilsson::SolutionBasis)> {
    for _ in 0..20 {
        let beta = common::random_beta(rng, a.d());
        let w = common::random_weight(rng, a.n(), 1, 40);
        match nilsson::nilsson_basis(a, &beta, &w, window) {
            Ok(b) => return Some((beta, b)),
            Err(GkzError::NonGenericWeight { .. } | GkzError::NonGenericParameter(_)) => continue,
            Err(e) => panic!("nilsson_basis on {:?}: {e}", a.rows()),
        }
    }
    None
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut series_checked = 0;
    let mut binomials = 0;
    let mut vacuous = 0;
    let mut instances = 0;
    while instances < 50 {
        let (d, n) = random_shape(&mut rng);
        let a = common::random_matrix(&mut rng, d, n, 4, false, true);
        let Some((beta, basis)) = random_basis(&mut rng, &a, &Window::MinTerms(ANNIHILATION_MIN_TERMS)) else {
            continue;
        };
        instances += 1;
        for e in &basis.elements {
            let r = dmodule::verify_annihilation(&e.series, &a, &beta, ANNIHILATION_SUPPORT_BOUND).map_err(err)?;
            ensure(r.passed(), || format!("A = {:?}, sigma {:?}: {} failures", a.rows(), e.sigma, r.failures().len()))?;
            let finite = nilsson::is_finite_series(&a, &e.series.base).map_err(err)?;
            ensure(finite || e.series.len() >= ANNIHILATION_MIN_TERMS, || "window below 30 terms".into())?;
            series_checked += 1;
            binomials += r.binomials_checked.len();
            vacuous += r.vacuous;
        }
    }
    Ok(format!(
        "50 matrices, {series_checked} series, {binomials} binomial checks ({vacuous} more had no output in the trusted window), 0 failures"
    ))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut done = 0;
    while done < 20 {
        let d = rng.gen_range(2..=3);
        let n = rng.gen_range(d + 1..=7);
        let a = common::random_matrix(&mut rng, d, n, 4, true, true);
        let w = common::random_weight(&mut rng, n, 0, 60);
        let t = match triangulation::triangulate(&a, &w) {
            Ok(t) => t,
            Err(GkzError::NonGenericWeight { .. }) => continue,
            Err(e) => return Err(format!("{:?}: {e}", a.rows())),
        };
        let oracle = common::volume_oracle(a.rows()).unwrap() as u64;
        ensure(t.volume(&a) == oracle, || format!("{:?}: sum {} oracle {oracle}", a.rows(), t.volume(&a)))?;
        done += 1;
    }
    Ok("20 homogeneous configurations, exact equality with the hull oracle".into())
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut series_done = 0;
    while series_done < 10 {
        let (d, n) = random_shape(&mut rng);
        let a = common::random_matrix(&mut rng, d, n, 4, false, true);
        let Some((_, basis)) = random_basis(&mut rng, &a, &Window::MinTerms(20)) else { continue };
        let e = &basis.elements[rng.gen_range(0..basis.elements.len())];
        let s = &e.series;
        if s.len() < 20 {
            continue;
        }
        let v: Vec<f64> = s.base.v.iter().map(common::to_f64).collect();
        for t in s.by_weight().into_iter().take(20) {
            let (ln, sign) = common::gamma_ratio(&v, &common::small(&t.offset));
            let exact_sign = if t.coefficient.is_negative() { -1.0 } else { 1.0 };
            ensure(sign == exact_sign, || format!("sign mismatch at {:?}", t.offset))?;
            let rel = (rational::ln_abs(&t.coefficient) - ln).exp_m1().abs();
            worst = worst.max(rel);
            ensure(rel <= GAMMA_REL_TOL, || format!("relative error {rel:e} at {:?}", t.offset))?;
        }
        series_done += 1;
    }
    Ok(format!("200 coefficients, worst relative error {worst:.1e} <= {GAMMA_REL_TOL:e}"))
}

fn criterion_6() -> Check {
    let a = outer_facet();
    let beta = vec![qr(7, 5), qr(11, 7)];
    let (b, _) =
        nilsson::gevrey_basis(&a, &beta, &[0, 1], &WeightVector::from_ints(&[1, 1]), &Window::MinTerms(200)).map_err(err)?;
    let s = &b.elements[0].series;
    ensure(s.len() >= 200, || format!("{} terms", s.len()))?;
    let est = nilsson::estimate_gevrey_order(&a, s, &[0, 1]).map_err(err)?;
    ensure((GEVREY_DIVERGENT.0..=GEVREY_DIVERGENT.1).contains(&est.order), || format!("divergent s = {}", est.order))?;

    let cubic = cubic();
    let basis =
        nilsson::nilsson_basis(&cubic, &[qr(1, 2), qr(1, 3)], &WeightVector::from_ints(&[1, 2, 5, 1]), &Window::MinTerms(CONVERGENT_TERMS))
            .map_err(err)?;
    let c = &basis.elements[0];
    ensure(c.convergent, || "twisted-cubic series not convergent".into())?;
    let conv = nilsson::estimate_gevrey_order(&cubic, &c.series, &[0, 3]).map_err(err)?;
    ensure((GEVREY_CONVERGENT.0..=GEVREY_CONVERGENT.1).contains(&conv.order), || format!("convergent s = {}", conv.order))?;
    Ok(format!("divergent s = {:.4}, convergent s = {:.4}", est.order, conv.order))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    let mut compared = 0;
    while done < 100 {
        let (d, n) = random_shape(&mut rng);
        let a = common::random_matrix(&mut rng, d, n, 4, false, false);
        let w = common::random_weight(&mut rng, n, -20, 20);
        let rho = lattice::rho_homogenize(&a);
        let (Ok(t), Ok(t_rho)) =
            (triangulation::regular_simplices(&a, &w), triangulation::regular_simplices(&rho, &w.prepend_zero()))
        else {
            continue;
        };
        let lifted: BTreeSet<Vec<usize>> =
            t.iter().map(|s| std::iter::once(0).chain(s.iter().map(|j| j + 1)).collect()).collect();
        let with_zero: BTreeSet<Vec<usize>> = t_rho.into_iter().filter(|s| s[0] == 0).collect();
        ensure(lifted == with_zero, || format!("A = {:?}, w = {:?}", a.rows(), w.base()))?;
        compared += lifted.len();
        done += 1;
    }
    Ok(format!("100 instances, {compared} simplices matched, 0 failures"))
}

fn criterion_8() -> Check {
    let a = cubic();
    let got = dmodule::degree_bound(&a);
    let vol = common::volume_oracle(a.rows()).unwrap() as u64;
    let want = common::degree_bound_oracle(2, 4, vol);
    ensure(want == 955 && got == want.into(), || format!("twisted cubic: {got} vs oracle {want}"))?;

    let b = outer_facet();
    let got = dmodule::degree_bound(&b);
    let vol = common::volume_oracle(b.rows()).unwrap() as u64;
    let oracle = common::degree_bound_oracle(2, 3, vol);
    ensure(got == oracle.into(), || format!("second matrix: {got} vs oracle {oracle}"))?;
    ensure(got == 508u64.into(), || format!("955 matches; second matrix gives {got} (oracle {oracle}), target 508"))?;
    Ok("955 and 508".into())
}

type Absolute = BTreeMap<Vec<Q>, Q>;

fn absolute_terms(s: &TruncatedSeries) -> Absolute {
    s.terms.iter().map(|t| (s.exponent(t), t.coefficient.clone())).collect()
}

fn in_window(s: &TruncatedSeries, x: &[Q]) -> bool {
    let u: Q = x.iter().zip(&s.base.v).zip(&s.weight).map(|((x, v), w)| (x - v) * w).sum();
    u <= s.weight_hi
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0;
    let mut pairs = 0;
    while done < 10 {
        let d = rng.gen_range(1..=2);
        let n = rng.gen_range(d + 1..=5);
        let a = common::random_matrix(&mut rng, d, n, 4, false, true);
        let beta = common::random_beta(&mut rng, d);
        let w1 = common::random_weight(&mut rng, n, 1, 30);
        let Ok(t1) = triangulation::triangulate(&a, &w1) else { continue };
        let cone = triangulation::secondary_cone(&a, &t1, true).map_err(err)?;
        let w2 = loop {
            let ints: Vec<i64> = w1.base().iter().map(|x| 2 * x.to_integer().to_string().parse::<i64>().unwrap()).collect();
            let cand: Vec<i64> = ints.iter().map(|x| x + rng.gen_range(-3..=3)).collect();
            let cand = WeightVector::from_ints(&cand);
            let distinct = cand.base().iter().zip(w1.base()).any(|(x, y)| x != &(y * q(2)));
            // Cone members can still vanish on some w·B_sigma outside T.
            if distinct && cone.contains(&cand) && triangulation::triangulate(&a, &cand).is_ok() {
                break cand;
            }
        };
        let t2 = triangulation::triangulate(&a, &w2).map_err(err)?;
        ensure(t2.simplices == t1.simplices, || "secondary cone member gives another triangulation".into())?;
        let window = Window::MinTerms(40);
        let (b1, b2) = match (nilsson::nilsson_basis(&a, &beta, &w1, &window), nilsson::nilsson_basis(&a, &beta, &w2, &window)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(GkzError::NonGenericParameter(_)), _) | (_, Err(GkzError::NonGenericParameter(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(format!("{:?}: {e}", a.rows())),
        };
        ensure(b1.dimension == b2.dimension, || "dimensions differ".into())?;
        for e1 in &b1.elements {
            let s1 = &e1.series;
            let e2 = b2.elements.iter().find(|e2| {
                e2.series.base.v.iter().zip(&s1.base.v).all(|(x, y)| rational::is_integer(&(x - y)))
            });
            let s2 = &e2.ok_or("no series with the same exponent class")?.series;
            let (t1, t2) = (absolute_terms(s1), absolute_terms(s2));
            let common1: Vec<(&Vec<Q>, &Q)> = t1.iter().filter(|(x, _)| in_window(s2, x)).collect();
            let common2: Vec<(&Vec<Q>, &Q)> = t2.iter().filter(|(x, _)| in_window(s1, x)).collect();
            ensure(!common1.is_empty(), || "empty common window".into())?;
            ensure(
                common1.iter().map(|p| p.0).eq(common2.iter().map(|p| p.0)),
                || format!("supports differ for {:?}", a.rows()),
            )?;
            let ratio = common2[0].1 / common1[0].1;
            ensure(common1.iter().zip(&common2).all(|(x, y)| y.1 == &(x.1 * &ratio)), || "coefficient ratio not constant".into())?;
            pairs += 1;
        }
        done += 1;
    }
    Ok(format!("10 matrices, {pairs} series pairs with equal supports and constant ratios"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "twisted-cubic initial forms", budget: Some(Duration::from_secs(1)), run: criterion_1 },
        Criterion { id: 2, name: "outer-facet example", budget: Some(Duration::from_secs(1)), run: criterion_2 },
        Criterion { id: 3, name: "annihilation suite", budget: Some(Duration::from_secs(60)), run: criterion_3 },
        Criterion { id: 4, name: "dimension identity", budget: Some(Duration::from_secs(10)), run: criterion_4 },
        Criterion { id: 5, name: "gamma-ratio cross-check", budget: None, run: criterion_5 },
        Criterion { id: 6, name: "gevrey-order estimate", budget: None, run: criterion_6 },
        Criterion { id: 7, name: "rho-lift", budget: None, run: criterion_7 },
        Criterion { id: 8, name: "degree-bound values", budget: None, run: criterion_8 },
        Criterion { id: 9, name: "basis w-invariance", budget: None, run: criterion_9 },
    ];
    // Optional positional ids select criteria; flags from the test runner are ignored.
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    for c in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
            (o, _) => o,
        };
        let known = KNOWN.iter().find(|(id, _)| *id == c.id).map(|(_, why)| *why);
        match (&outcome, known) {
            (Ok(detail), _) => println!("criterion {} {}: PASS ({elapsed:.2?}) {detail}", c.id, c.name),
            (Err(why), Some(reason)) => {
                println!("criterion {} {}: FAIL ({elapsed:.2?}) {why} [known: {reason}]", c.id, c.name)
            }
            (Err(why), None) => {
                unexpected += 1;
                println!("criterion {} {}: FAIL ({elapsed:.2?}) {why}", c.id, c.name)
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
