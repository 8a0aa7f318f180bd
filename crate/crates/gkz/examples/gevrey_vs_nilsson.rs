//! A non-homogeneous configuration where no Nilsson series converges, while
//! the Gevrey series along an outer facet of Γ_A is a genuine formal solution
//! of Gevrey order about 2.

use gkz::lattice::IntegerMatrix;
use gkz::nilsson::{self, Window};
use gkz::rational::{q, qr};
use gkz::weight::WeightVector;

fn main() -> Result<(), gkz::error::GkzError> {
    let a = IntegerMatrix::validated(vec![vec![1, 0, 3], vec![0, 1, -1]])?;
    let beta = vec![qr(7, 5), qr(11, 7)];
    // weight (0,0,1) perturbed by eps (1, 11/10, 0)
    let w = WeightVector::with_eps(vec![q(0), q(0), q(1)], vec![q(1), qr(11, 10), q(0)]);

    let basis = nilsson::nilsson_basis(&a, &beta, &w, &Window::MinTerms(10))?;
    let convergent = nilsson::convergent_subbasis(&basis);
    println!("Nilsson basis: {} series on {:?}", basis.dimension, basis.simplices);
    println!("convergent among them: {}", convergent.dimension);

    let tau = [0, 1];
    let (gevrey, diag) = nilsson::gevrey_basis(&a, &beta, &tau, &WeightVector::from_ints(&[1, 1]), &Window::MinTerms(200))?;
    println!("\nGevrey basis along tau = {{1, 2}}: dimension {} = vol(tau) {}", gevrey.dimension, diag.volume);
    println!("extension weight {:?}", gevrey.realized.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    for (e, est) in gevrey.elements.iter().zip(&diag.estimated_order) {
        match est {
            Ok(est) => println!(
                "sigma {:?}: order {:.4} in [{:.4}, {:.4}] from {} terms",
                e.sigma, est.order, est.lower, est.upper, est.terms_used
            ),
            Err(msg) => println!("sigma {:?}: no estimate ({msg})", e.sigma),
        }
    }
    println!("every Gevrey series is also a Nilsson series: {}", diag.contained_in_nilsson.iter().all(|&c| c));
    Ok(())
}
