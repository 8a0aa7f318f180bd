//! The Euler operators and toric binomials applied to a truncated series:
//! the exact series passes, and a single corrupted coefficient is caught.

use gkz::dmodule::{self, ToricBinomial};
use gkz::lattice::IntegerMatrix;
use gkz::rational::{q, qr};
use gkz::series::{self, ExponentVector};
use gkz::weight::WeightVector;

fn main() -> Result<(), gkz::error::GkzError> {
    let a = IntegerMatrix::validated(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]])?;
    let beta = vec![qr(1, 2), qr(1, 3)];
    let w = WeightVector::from_ints(&[1, 2, 5, 1]);
    let v: ExponentVector = series::exponent_v(&a, &[0, 3], &[0, 0], &beta)?;
    let s = series::gamma_series(&a, &beta, &v, &w, &q(20))?;
    println!("{} terms up to weight 20", s.len());

    let b = ToricBinomial::new(&a, vec![1.into(), (-2).into(), 1.into(), 0.into()])?;
    let image = dmodule::apply_binomial(&s, &b);
    println!(
        "binomial {:?}: {} output terms, residual on trusted window <= {}: {}",
        b.u,
        image.terms.len(),
        image.trusted_hi,
        image.residual(&s.weight).len()
    );
    println!("full check: passed {}", dmodule::verify_annihilation(&s, &a, &beta, 3)?.passed());

    let mut bad = s.clone();
    let i = bad.terms.len() / 2;
    bad.terms[i].coefficient += q(1);
    let report = dmodule::verify_annihilation(&bad, &a, &beta, 3)?;
    println!(
        "after corrupting offset {:?}: passed {}, {} failing binomials",
        bad.terms[i].offset,
        report.passed(),
        report.failures().len()
    );
    Ok(())
}
