//! Regular triangulations of the twisted cubic for a few weights, and the
//! inequalities of the secondary cone each one determines.

use gkz::lattice::IntegerMatrix;
use gkz::triangulation;
use gkz::weight::WeightVector;

fn main() -> Result<(), gkz::error::GkzError> {
    let a = IntegerMatrix::validated(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]])?;
    for w in [[1, 2, 5, 1], [0, 0, 0, 1], [0, 1, 0, 0], [3, 0, 0, 3], [0, 3, 1, 0]] {
        let weight = WeightVector::from_ints(&w);
        match triangulation::triangulate(&a, &weight) {
            Ok(t) => {
                let cone = triangulation::secondary_cone(&a, &t, true)?;
                println!("w = {w:?}: T_w = {:?} ({:?})", t.simplices, t.covering);
                for b in &cone.inequalities {
                    println!("    w · {b:?} > 0");
                }
            }
            Err(e) => println!("w = {w:?}: {e}"),
        }
    }
    Ok(())
}
