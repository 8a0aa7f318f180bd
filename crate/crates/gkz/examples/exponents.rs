//! The representatives Ω_σ, the exponents v_σ^k they produce, and the
//! negative supports that decide which exponents give Γ-series.

use gkz::lattice::IntegerMatrix;
use gkz::rational::{fmt_vec, q, qr};
use gkz::series;
use gkz::weight::WeightVector;

fn main() -> Result<(), gkz::error::GkzError> {
    let a = IntegerMatrix::validated(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]])?;
    let beta = vec![qr(1, 2), qr(1, 3)];
    let w = WeightVector::from_ints(&[1, 2, 5, 1]);
    let omega = series::omega_representatives(&a, &[0, 3], &w)?;
    println!("Z^d / Z A_sigma has invariant factors {:?}", omega.moduli);
    let mut exponents = Vec::new();
    for k in &omega.representatives {
        let e = series::exponent_v(&a, &[0, 3], k, &beta)?;
        println!("k = {k:?}: v = {:?}", fmt_vec(&e.v));
        exponents.push(e);
    }
    println!("generic: {}", series::genericity_certificate(&exponents).ok());

    let b = IntegerMatrix::validated(vec![vec![1, 1]])?;
    for v in [vec![q(-1), q(2)], vec![q(-1), q(-2)]] {
        let ns = series::negative_support(&v, &b, 10)?;
        println!(
            "A = (1 1), v = {:?}: nsupp {:?}, minimal {}, witness {:?}",
            fmt_vec(&v),
            ns.nsupp,
            ns.minimal,
            ns.witness
        );
    }
    Ok(())
}
