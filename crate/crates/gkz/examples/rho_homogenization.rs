//! A non-pointed configuration needs a strictly positive weight; its
//! ρ-homogenization is pointed and homogeneous.

use gkz::lattice::{self, IntegerMatrix};
use gkz::triangulation;
use gkz::weight::WeightVector;

fn main() -> Result<(), gkz::error::GkzError> {
    let a = IntegerMatrix::validated(vec![vec![1, -1, 2]])?;
    println!("A = {:?}, pointed {}", a.rows(), lattice::is_pointed(&a).pointed);
    match triangulation::triangulate(&a, &WeightVector::from_ints(&[1, 0, 1])) {
        Ok(t) => println!("w = (1,0,1): {:?}", t.simplices),
        Err(e) => println!("w = (1,0,1): {e}"),
    }
    let t = triangulation::triangulate(&a, &WeightVector::from_ints(&[1, 1, 1]))?;
    println!("w = (1,1,1): {:?}", t.simplices);

    let rho = lattice::rho_homogenize(&a);
    let all: Vec<usize> = (0..rho.n()).collect();
    println!("\nrho(A) = {:?}", rho.rows());
    println!("pointed {}, homogeneous {}", lattice::is_pointed(&rho).pointed, rho.is_homogeneous());
    println!("vol(rho(A)) = {}", lattice::normalized_volume(&rho, &all));
    Ok(())
}
