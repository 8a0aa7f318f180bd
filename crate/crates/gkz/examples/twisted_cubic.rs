//! Nilsson basis of the twisted cubic system at a generic parameter, with
//! the first few terms of each series and an annihilation check.

use gkz::dmodule;
use gkz::lattice::IntegerMatrix;
use gkz::nilsson::{self, Window};
use gkz::rational::{qr, Q};
use gkz::weight::WeightVector;

fn main() -> Result<(), gkz::error::GkzError> {
    let a = IntegerMatrix::validated(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]])?;
    let beta: Vec<Q> = vec![qr(1, 2), qr(1, 3)];
    let w = WeightVector::from_ints(&[1, 2, 5, 1]);

    let basis = nilsson::nilsson_basis(&a, &beta, &w, &Window::MinTerms(20))?;
    let one_based: Vec<Vec<usize>> = basis.simplices.iter().map(|s| s.iter().map(|j| j + 1).collect()).collect();
    println!("T_w = {one_based:?}");
    println!("dimension {} (normalized volume of A is 3)", basis.dimension);

    for e in &basis.elements {
        let s = &e.series;
        println!("\nsigma {:?}, k {:?}, v = {:?}", e.sigma, e.k, gkz::rational::fmt_vec(&s.base.v));
        for t in s.by_weight().into_iter().take(5) {
            println!("  weight {:>5}  offset {:?}  coefficient {}", t.weight.to_string(), t.offset, t.coefficient);
        }
        let report = dmodule::verify_annihilation(s, &a, &beta, 4)?;
        println!(
            "  euler ok: {}, binomials checked: {}, passed: {}",
            report.euler_ok,
            report.binomials_checked.len(),
            report.passed()
        );
    }
    Ok(())
}
