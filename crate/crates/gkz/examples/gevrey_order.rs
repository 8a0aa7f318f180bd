//! Gevrey order estimates of the divergent series along x3 as the number of
//! stored terms grows.

use gkz::lattice::IntegerMatrix;
use gkz::nilsson::{self, Window};
use gkz::rational::qr;
use gkz::weight::WeightVector;

fn main() -> Result<(), gkz::error::GkzError> {
    let a = IntegerMatrix::validated(vec![vec![1, 0, 3], vec![0, 1, -1]])?;
    let beta = vec![qr(7, 5), qr(11, 7)];
    let w_tau = WeightVector::from_ints(&[1, 1]);
    for n in [60, 120, 240, 480] {
        let (b, _) = nilsson::gevrey_basis(&a, &beta, &[0, 1], &w_tau, &Window::MinTerms(n))?;
        let est = nilsson::estimate_gevrey_order(&a, &b.elements[0].series, &[0, 1])?;
        println!(
            "{:>4} terms: s = {:.5}  [{:.5}, {:.5}]  max degree {}",
            est.terms_used, est.order, est.lower, est.upper, est.degrees
        );
    }
    Ok(())
}
