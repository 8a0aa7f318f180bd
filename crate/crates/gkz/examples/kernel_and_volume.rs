//! Lattice data of a configuration: kernel basis, pointedness, normalized
//! volume and the bound on the degrees of a Gröbner basis of H_A(β).

use gkz::dmodule;
use gkz::lattice::{self, IntegerMatrix};

fn main() -> Result<(), gkz::error::GkzError> {
    for rows in [
        vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]],
        vec![vec![1, 0, 3], vec![0, 1, -1]],
        vec![vec![1, 1, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]],
    ] {
        let a = IntegerMatrix::validated(rows)?;
        let all: Vec<usize> = (0..a.n()).collect();
        let kernel = lattice::kernel_basis(&a)?;
        let pointed = lattice::is_pointed(&a);
        println!("A = {:?}", a.rows());
        println!("  kernel basis {:?}", kernel.vectors);
        println!("  pointed {} (certificate {:?})", pointed.pointed, pointed.certificate);
        println!("  homogeneous {}", a.is_homogeneous());
        println!("  vol(A) = {}", lattice::normalized_volume(&a, &all));
        println!("  degree bound {}", dmodule::degree_bound(&a));
    }
    Ok(())
}
