//! Regular triangulations `T_w`, secondary cones and the face test against `Γ_A`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GkzError, Result};
use crate::lattice::{self, b_sigma, IntegerMatrix};
use crate::linalg;
use crate::lp::{LinearProgram, Relation};
use crate::rational::{self, q, Q};
use crate::weight::WeightVector;

/// Largest `n` for which covering is certified by exact pairwise checks.
pub const EXACT_COVERING_MAX_N: usize = 8;
const SAMPLED_POINTS: usize = 200;
const EXTENSION_ATTEMPTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoveringStatus {
    Verified,
    Sampled(usize),
    Unverified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Triangulation {
    /// Sorted list of sorted 0-based index sets.
    pub simplices: Vec<Vec<usize>>,
    pub weight: WeightVector,
    pub covering: CoveringStatus,
}

impl Triangulation {
    pub fn contains(&self, sigma: &[usize]) -> bool {
        self.simplices.iter().any(|s| s == sigma)
    }

    pub fn volume(&self, a: &IntegerMatrix) -> u64 {
        self.simplices.iter().map(|s| simplex_volume(a, s)).sum()
    }
}

pub fn simplex_volume(a: &IntegerMatrix, sigma: &[usize]) -> u64 {
    use num_traits::ToPrimitive;
    a.det(sigma).abs().to_u64().expect("determinant fits in u64")
}

pub fn maximal_simplices(a: &IntegerMatrix) -> Vec<Vec<usize>> {
    lattice::maximal_simplices(a)
}

/// `{σ : w·B_σ > 0}` after checking that no entry of any `w·B_σ` vanishes.
pub fn regular_simplices(a: &IntegerMatrix, w: &WeightVector) -> Result<Vec<Vec<usize>>> {
    if w.len() != a.n() {
        return Err(GkzError::DimensionMismatch { what: "weight".into(), expected: a.n(), found: w.len() });
    }
    let candidates = maximal_simplices(a);
    let verdicts: Vec<Result<(bool, Vec<(Vec<usize>, usize)>)>> = candidates
        .par_iter()
        .map(|sigma| {
            let b = b_sigma(a, sigma)?;
            let mut zeros = Vec::new();
            let mut positive = true;
            for (col, &j) in b.columns.iter().zip(&b.complement) {
                let v = w.pair(col);
                if v.is_zero() {
                    zeros.push((sigma.clone(), j));
                }
                positive &= v.is_positive();
            }
            Ok((positive, zeros))
        })
        .collect();
    let mut simplices = Vec::new();
    let mut zeros = Vec::new();
    for (sigma, v) in candidates.into_iter().zip(verdicts) {
        let (positive, z) = v?;
        zeros.extend(z);
        if positive {
            simplices.push(sigma);
        }
    }
    if !zeros.is_empty() {
        return Err(GkzError::NonGenericWeight { zeros });
    }
    Ok(simplices)
}

pub fn triangulate(a: &IntegerMatrix, w: &WeightVector) -> Result<Triangulation> {
    let simplices = regular_simplices(a, w)?;
    if !w.is_strictly_positive() && !lattice::is_pointed(a).pointed {
        return Err(GkzError::NotPointedWeight);
    }
    if simplices.is_empty() {
        return Err(GkzError::EmptyTriangulation);
    }
    let covering = verify_covering(a, &simplices)?;
    Ok(Triangulation { simplices, weight: w.clone(), covering })
}

/// `det[a_f for f in facet, x]`: which side of the hyperplane spanned by `facet` the vector lies on.
fn side(a: &IntegerMatrix, facet: &[usize], x: &[i64]) -> BigInt {
    let d = a.d();
    let m: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigInt> = facet.iter().map(|&f| BigInt::from(a.entry(i, f))).collect();
            row.push(BigInt::from(x[i]));
            row
        })
        .collect();
    linalg::det_int(&m)
}

fn interiors_meet(a: &IntegerMatrix, s1: &[usize], s2: &[usize]) -> bool {
    let shared: Vec<usize> = s1.iter().filter(|x| s2.contains(x)).copied().collect();
    if shared.len() + 1 == a.d() {
        let p = s1.iter().find(|x| !shared.contains(x)).unwrap();
        let r = s2.iter().find(|x| !shared.contains(x)).unwrap();
        let sp = side(a, &shared, &a.column(*p));
        let sr = side(a, &shared, &a.column(*r));
        return sp.sign() == sr.sign();
    }
    let d = a.d();
    let mut lp = LinearProgram::new(2 * d);
    for i in 0..d {
        let mut row = vec![Q::zero(); 2 * d];
        for (k, &j) in s1.iter().enumerate() {
            row[k] = q(a.entry(i, j));
        }
        for (k, &j) in s2.iter().enumerate() {
            row[d + k] = q(-a.entry(i, j));
        }
        lp.add(row, Relation::Eq, Q::zero());
    }
    for k in 0..2 * d {
        let mut e = vec![Q::zero(); 2 * d];
        e[k] = q(1);
        lp.add(e, Relation::Ge, q(1));
    }
    lp.feasible_point().is_some()
}

/// Certifies that the simplicial cones tile `pos(A)`.
///
/// Exact for `n <= EXACT_COVERING_MAX_N`: pairwise interior-disjointness plus
/// every facet either on the boundary of `pos(A)` or shared with a simplex on
/// the other side. Larger inputs fall back to random points of `pos(A)`.
pub fn verify_covering(a: &IntegerMatrix, simplices: &[Vec<usize>]) -> Result<CoveringStatus> {
    if a.n() > EXACT_COVERING_MAX_N {
        return sampled_covering(a, simplices);
    }
    let pairs: Vec<(usize, usize)> = (0..simplices.len()).tuple_combinations().collect();
    if let Some(&(i, j)) = pairs
        .par_iter()
        .find_first(|&&(i, j)| interiors_meet(a, &simplices[i], &simplices[j]))
    {
        return Err(GkzError::CoveringFailed(format!(
            "cones of {} and {} overlap",
            crate::error::one_based(&simplices[i]),
            crate::error::one_based(&simplices[j])
        )));
    }
    for sigma in simplices {
        for (k, &apex) in sigma.iter().enumerate() {
            let facet: Vec<usize> = sigma.iter().enumerate().filter(|&(t, _)| t != k).map(|(_, &x)| x).collect();
            let own = side(a, &facet, &a.column(apex));
            let boundary = (0..a.n()).all(|j| {
                let s = side(a, &facet, &a.column(j));
                s.is_zero() || s.sign() == own.sign()
            });
            if boundary {
                continue;
            }
            let matched = simplices.iter().any(|other| {
                other != sigma
                    && facet.iter().all(|f| other.contains(f))
                    && other
                        .iter()
                        .filter(|x| !facet.contains(x))
                        .any(|&x| side(a, &facet, &a.column(x)).sign() == -own.sign())
            });
            if !matched {
                return Err(GkzError::CoveringFailed(format!(
                    "interior facet {} of {} has no neighbour",
                    crate::error::one_based(&facet),
                    crate::error::one_based(sigma)
                )));
            }
        }
    }
    Ok(CoveringStatus::Verified)
}

fn sampled_covering(a: &IntegerMatrix, simplices: &[Vec<usize>]) -> Result<CoveringStatus> {
    let inverses: Vec<_> = simplices
        .iter()
        .map(|s| lattice::simplex_inverse(a, s))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9);
    let mut checked = 0;
    for _ in 0..SAMPLED_POINTS {
        let coeffs: Vec<i64> = (0..a.n()).map(|_| rng.gen_range(1..=1000)).collect();
        let x: Vec<Q> = (0..a.d()).map(|i| q((0..a.n()).map(|j| coeffs[j] * a.entry(i, j)).sum())).collect();
        let mut inside = 0;
        let mut on_boundary = false;
        for inv in &inverses {
            let lam = linalg::mat_vec(inv, &x);
            if lam.iter().all(|l| !l.is_negative()) {
                inside += 1;
                on_boundary |= lam.iter().any(|l| l.is_zero());
            }
        }
        if on_boundary {
            continue;
        }
        if inside != 1 {
            return Err(GkzError::CoveringFailed(format!("sample point lies in {inside} cones")));
        }
        checked += 1;
    }
    Ok(CoveringStatus::Sampled(checked))
}

/// Open cone `C(T) = {w : w·b > 0 for every listed b}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondaryCone {
    /// Primitive integer normals, sorted and deduplicated.
    pub inequalities: Vec<Vec<BigInt>>,
    pub source: Vec<Vec<usize>>,
}

impl SecondaryCone {
    pub fn contains(&self, w: &WeightVector) -> bool {
        self.inequalities.iter().all(|b| w.pair(&rational::to_q_vec(b)).is_positive())
    }

    pub fn violated(&self, w: &WeightVector) -> Vec<&Vec<BigInt>> {
        self.inequalities.iter().filter(|b| !w.pair(&rational::to_q_vec(b)).is_positive()).collect()
    }
}

fn in_cone_of(vectors: &[&Vec<BigInt>], target: &[BigInt]) -> bool {
    let k = vectors.len();
    let mut lp = LinearProgram::new(k);
    for (i, t) in target.iter().enumerate() {
        let row: Vec<Q> = vectors.iter().map(|v| rational::qi(&v[i])).collect();
        lp.add(row, Relation::Eq, rational::qi(t));
    }
    for i in 0..k {
        let mut e = vec![Q::zero(); k];
        e[i] = q(1);
        lp.add(e, Relation::Ge, Q::zero());
    }
    lp.feasible_point().is_some()
}

pub fn secondary_cone(a: &IntegerMatrix, t: &Triangulation, reduce: bool) -> Result<SecondaryCone> {
    if t.simplices.is_empty() {
        return Err(GkzError::EmptyTriangulation);
    }
    let mut inequalities = Vec::new();
    for sigma in &t.simplices {
        let b = b_sigma(a, sigma)?;
        inequalities.extend(b.columns.iter().map(|c| rational::primitive_integer_vector(c)));
    }
    inequalities.sort();
    inequalities.dedup();
    if reduce {
        let mut i = 0;
        while i < inequalities.len() {
            let others: Vec<&Vec<BigInt>> = inequalities.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).collect();
            if !others.is_empty() && in_cone_of(&others, &inequalities[i]) {
                inequalities.remove(i);
            } else {
                i += 1;
            }
        }
    }
    Ok(SecondaryCone { inequalities, source: t.simplices.clone() })
}

/// `(1,…,1)·B_σ >= 0`, i.e. σ lies in a facet of `Γ_A`.
pub fn gamma_face_test(a: &IntegerMatrix, sigma: &[usize]) -> Result<bool> {
    let b = b_sigma(a, sigma)?;
    Ok(b.columns.iter().all(|c| !c.iter().sum::<Q>().is_negative()))
}

/// Whether `x` lies in `pos(a_j : j ∈ cols)`.
pub fn cone_contains(a: &IntegerMatrix, cols: &[usize], x: &[i64]) -> bool {
    let k = cols.len();
    let mut lp = LinearProgram::new(k);
    for i in 0..a.d() {
        lp.add(cols.iter().map(|&j| q(a.entry(i, j))).collect(), Relation::Eq, q(x[i]));
    }
    for t in 0..k {
        let mut e = vec![Q::zero(); k];
        e[t] = q(1);
        lp.add(e, Relation::Ge, Q::zero());
    }
    lp.feasible_point().is_some()
}

/// `pos(A_tau) = pos(A)`.
pub fn pos_equal(a: &IntegerMatrix, tau: &[usize]) -> bool {
    (0..a.n()).filter(|j| !tau.contains(j)).all(|j| cone_contains(a, tau, &a.column(j)))
}

/// A triangulation of `A` containing a given regular triangulation of `A_tau`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub tau: Vec<usize>,
    /// Weight on all `n` coordinates: generic positive on the complement, `w_tau` one level down.
    pub weight: WeightVector,
    pub triangulation: Triangulation,
    /// `T(tau)` with indices of `A`.
    pub restricted: Triangulation,
    pub pos_equal: bool,
}

pub fn extend_triangulation(a: &IntegerMatrix, tau: &[usize], w_tau: &WeightVector) -> Result<Extension> {
    let mut tau = tau.to_vec();
    tau.sort_unstable();
    tau.dedup();
    if let Some(&bad) = tau.iter().find(|&&j| j >= a.n()) {
        return Err(GkzError::IndexOutOfRange { what: "tau".into(), index: bad + 1, n: a.n() });
    }
    if w_tau.len() != tau.len() {
        return Err(GkzError::DimensionMismatch { what: "w_tau".into(), expected: tau.len(), found: w_tau.len() });
    }
    let a_tau = a.select_columns(&tau);
    if a_tau.rank() < a.d() {
        return Err(GkzError::SubmatrixRank { tau });
    }
    let local = triangulate(&a_tau, w_tau)?;
    let restricted = Triangulation {
        simplices: local.simplices.iter().map(|s| s.iter().map(|&i| tau[i]).collect()).collect(),
        weight: w_tau.clone(),
        covering: local.covering,
    };
    let comp = lattice::complement(&tau, a.n());
    let pos_eq = pos_equal(a, &tau);
    if comp.is_empty() {
        let triangulation = triangulate(a, w_tau)?;
        return Ok(Extension { tau, weight: w_tau.clone(), triangulation, restricted, pos_equal: true });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_7a0u64);
    for _ in 0..EXTENSION_ATTEMPTS {
        let mut base = vec![Q::zero(); a.n()];
        for &j in &comp {
            base[j] = q(rng.gen_range(1..=97));
        }
        let mut levels = vec![base];
        for l in w_tau.levels() {
            let mut level = vec![Q::zero(); a.n()];
            for (x, &j) in l.iter().zip(&tau) {
                level[j] = x.clone();
            }
            levels.push(level);
        }
        let weight = WeightVector::from_levels(levels);
        let triangulation = match triangulate(a, &weight) {
            Ok(t) => t,
            Err(GkzError::NonGenericWeight { .. }) => continue,
            Err(e) => return Err(e),
        };
        if let Some(s) = restricted.simplices.iter().find(|s| !triangulation.contains(s)) {
            return Err(GkzError::Internal(format!(
                "extension lost simplex {} of T(tau)",
                crate::error::one_based(s)
            )));
        }
        if pos_eq && triangulation.simplices != restricted.simplices {
            return Err(GkzError::Internal("pos(A_tau) = pos(A) but T differs from T(tau)".into()));
        }
        return Ok(Extension { tau, weight, triangulation, restricted, pos_equal: pos_eq });
    }
    Err(GkzError::ExtensionFailed(EXTENSION_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> IntegerMatrix {
        IntegerMatrix::new(vec![vec![1, 1, 1, 1], vec![0, 1, 2, 3]]).unwrap()
    }

    fn example() -> IntegerMatrix {
        IntegerMatrix::new(vec![vec![1, 0, 3], vec![0, 1, -1]]).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn twisted_cubic_weights_give_single_simplex() {
        for w in [[1, 2, 5, 1], [1, 5, 2, 1]] {
            let t = triangulate(&cubic(), &WeightVector::from_ints(&w)).unwrap();
            assert_eq!(t.simplices, vec![vec![0, 3]]);
            assert_eq!(t.covering, CoveringStatus::Verified);
        }
    }

    #[test]
    fn example_extension_weight() {
        let w = WeightVector::with_eps(vec![q(0), q(0), q(1)], vec![q(1), q(1), q(0)]);
        let t = triangulate(&example(), &w).unwrap();
        assert_eq!(t.simplices, vec![vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn non_generic_weight_reports_zero_entries() {
        // w = (1,1,1,1) is on the boundary of C({{1,4}}) and of other cones
        match triangulate(&cubic(), &WeightVector::from_ints(&[1, 1, 1, 1])) {
            Err(GkzError::NonGenericWeight { zeros }) => assert!(!zeros.is_empty()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_pointed_needs_positive_weight() {
        let a = IntegerMatrix::new(vec![vec![1, -1, 2]]).unwrap();
        assert_eq!(triangulate(&a, &WeightVector::from_ints(&[1, -5, 1])), Err(GkzError::NotPointedWeight));
        let t = triangulate(&a, &WeightVector::from_ints(&[3, 1, 1])).unwrap();
        assert_eq!(t.covering, CoveringStatus::Verified);
    }

    #[test]
    fn secondary_cone_of_twisted_cubic() {
        let t = triangulate(&cubic(), &WeightVector::from_ints(&[1, 2, 5, 1])).unwrap();
        let c = secondary_cone(&cubic(), &t, false).unwrap();
        assert_eq!(c.inequalities, vec![ints(&[-2, 3, 0, -1]), ints(&[-1, 0, 3, -2])]);
        assert!(c.contains(&WeightVector::from_ints(&[1, 2, 5, 1])));
        assert!(c.contains(&WeightVector::from_ints(&[1, 5, 2, 1])));
        assert!(!c.contains(&WeightVector::from_ints(&[1, 1, 1, 1])));
        assert_eq!(c.violated(&WeightVector::from_ints(&[1, 1, 1, 1])).len(), 2);
    }

    #[test]
    fn gamma_faces() {
        assert!(gamma_face_test(&cubic(), &[0, 3]).unwrap());
        assert!(!gamma_face_test(&example(), &[0, 2]).unwrap());
        assert!(gamma_face_test(&example(), &[1, 2]).unwrap());
    }

    #[test]
    fn extension_of_example() {
        let ext = extend_triangulation(&example(), &[0, 1], &WeightVector::from_ints(&[1, 1])).unwrap();
        assert_eq!(ext.restricted.simplices, vec![vec![0, 1]]);
        assert_eq!(ext.triangulation.simplices, vec![vec![0, 1], vec![0, 2]]);
        assert!(!ext.pos_equal);
    }

    #[test]
    fn extension_when_cones_agree() {
        let a = IntegerMatrix::new(vec![vec![1, 1, 1], vec![0, 1, 2]]).unwrap();
        let ext = extend_triangulation(&a, &[0, 2], &WeightVector::from_ints(&[1, 1])).unwrap();
        assert!(ext.pos_equal);
        assert_eq!(ext.triangulation.simplices, vec![vec![0, 2]]);
    }

    #[test]
    fn extension_of_full_set_is_identity() {
        let w = WeightVector::from_ints(&[1, 2, 5, 1]);
        let ext = extend_triangulation(&cubic(), &[0, 1, 2, 3], &w).unwrap();
        assert_eq!(ext.weight, w);
        assert_eq!(ext.triangulation.simplices, ext.restricted.simplices);
    }

    #[test]
    fn extension_rejects_low_rank() {
        let r = extend_triangulation(&cubic(), &[1], &WeightVector::from_ints(&[1]));
        assert!(matches!(r, Err(GkzError::SubmatrixRank { .. })));
    }
}
