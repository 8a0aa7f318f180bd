//! Exponents `v_sigma^k`, the representative sets `Omega_sigma`, negative
//! supports and exact truncated Γ-series.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::enumerate::{self, HalfSpace};
use crate::error::{GkzError, Result};
use crate::lattice::{self, b_sigma, IntegerMatrix, KernelBasis};
use crate::linalg;
use crate::lp::{LinearProgram, LpResult, Relation};
use crate::rational::{self, q, qi, Q};
use crate::weight::{LexValue, WeightVector};

/// Default search radius (in kernel-basis coordinates) for minimality of negative supports.
pub const DEFAULT_NSUPP_RADIUS: u64 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Origin {
    pub sigma: Vec<usize>,
    /// Indexed by the complement of `sigma`, ascending.
    pub k: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    pub v: Vec<Q>,
    pub beta: Vec<Q>,
    pub origin: Option<Origin>,
}

impl ExponentVector {
    pub fn new(a: &IntegerMatrix, v: Vec<Q>) -> Self {
        let beta = a.apply_q(&v);
        Self { v, beta, origin: None }
    }

    pub fn nsupp(&self) -> Vec<usize> {
        (0..self.v.len()).filter(|&j| rational::is_negative_integer(&self.v[j])).collect()
    }

    pub fn shifted(&self, u: &[BigInt]) -> Vec<Q> {
        self.v.iter().zip(u).map(|(x, y)| x + qi(y)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaSet {
    pub sigma: Vec<usize>,
    /// Sorted lexicographically.
    pub representatives: Vec<Vec<u64>>,
    /// Coordinates in `Z^d / Z A_sigma ≅ ⊕ Z/D_i` (only factors `D_i > 1`).
    pub class_labels: Vec<Vec<BigInt>>,
    /// The invariant factors `D_i > 1` of the quotient.
    pub moduli: Vec<BigInt>,
}

struct QuotientMap {
    left: linalg::IntMat,
    diagonal: Vec<BigInt>,
}

impl QuotientMap {
    fn new(a: &IntegerMatrix, sigma: &[usize]) -> Self {
        let s = linalg::smith(&a.submatrix_int(sigma), sigma.len());
        Self { left: s.left, diagonal: s.diagonal }
    }

    fn label(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.left
            .iter()
            .zip(&self.diagonal)
            .filter(|(_, m)| !m.is_one())
            .map(|(row, m)| {
                let t: BigInt = row.iter().zip(y).map(|(x, z)| x * z).sum();
                t.mod_floor(m)
            })
            .collect()
    }

    fn moduli(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|m| !m.is_one()).cloned().collect()
    }
}

/// One minimal `k` per class of `A_{σ̄} k` modulo `Z A_sigma`, found best-first
/// by `<w B_sigma, k>` (ties broken lexicographically on `k`).
pub fn omega_representatives(a: &IntegerMatrix, sigma: &[usize], w: &WeightVector) -> Result<OmegaSet> {
    let b = b_sigma(a, sigma)?;
    let wb: Vec<LexValue> = b.columns.iter().map(|c| w.pair(c)).collect();
    if !wb.iter().all(LexValue::is_positive) {
        return Err(GkzError::WeightNotPositiveOnSimplex { sigma: b.sigma.clone() });
    }
    let quotient = QuotientMap::new(a, &b.sigma);
    let volume = a.det(&b.sigma).abs().to_usize().expect("volume fits in usize");
    let m = b.complement.len();
    let weigh = |k: &[u64]| {
        k.iter()
            .zip(&wb)
            .fold(LexValue::zero(), |acc, (&x, v)| acc.add(&v.scale(&q(x as i64))))
    };
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    let zero = vec![0u64; m];
    heap.push(Reverse((weigh(&zero), zero.clone())));
    seen.insert(zero);
    let mut found: HashMap<Vec<BigInt>, Vec<u64>> = HashMap::new();
    while found.len() < volume {
        let Some(Reverse((_, k))) = heap.pop() else {
            // only possible when the classes of A_{σ̄} k miss part of Z^d / Z A_sigma
            a.check_generates_lattice()?;
            return Err(GkzError::Internal("class search exhausted".into()));
        };
        let y: Vec<BigInt> = (0..a.d())
            .map(|i| b.complement.iter().zip(&k).map(|(&j, &kj)| BigInt::from(a.entry(i, j)) * kj).sum())
            .collect();
        found.entry(quotient.label(&y)).or_insert_with(|| k.clone());
        for t in 0..m {
            let mut next = k.clone();
            next[t] += 1;
            if seen.insert(next.clone()) {
                heap.push(Reverse((weigh(&next), next)));
            }
        }
    }
    let mut pairs: Vec<(Vec<u64>, Vec<BigInt>)> = found.into_iter().map(|(l, k)| (k, l)).collect();
    pairs.sort();
    let (representatives, class_labels) = pairs.into_iter().unzip();
    Ok(OmegaSet { sigma: b.sigma, representatives, class_labels, moduli: quotient.moduli() })
}

/// `v_sigma^k`: `k` on the complement, `A_sigma^{-1}(beta - A_{σ̄} k)` on `sigma`.
pub fn exponent_v(a: &IntegerMatrix, sigma: &[usize], k: &[u64], beta: &[Q]) -> Result<ExponentVector> {
    if beta.len() != a.d() {
        return Err(GkzError::DimensionMismatch { what: "beta".into(), expected: a.d(), found: beta.len() });
    }
    let mut sigma = sigma.to_vec();
    sigma.sort_unstable();
    let comp = lattice::complement(&sigma, a.n());
    if k.len() != comp.len() {
        return Err(GkzError::DimensionMismatch { what: "k".into(), expected: comp.len(), found: k.len() });
    }
    let inv = lattice::simplex_inverse(a, &sigma)?;
    let rhs: Vec<Q> = (0..a.d())
        .map(|i| &beta[i] - comp.iter().zip(k).map(|(&j, &kj)| q(a.entry(i, j) * kj as i64)).sum::<Q>())
        .collect();
    let vs = linalg::mat_vec(&inv, &rhs);
    let mut v = vec![Q::zero(); a.n()];
    for (x, &s) in vs.into_iter().zip(&sigma) {
        v[s] = x;
    }
    for (&j, &kj) in comp.iter().zip(k) {
        v[j] = q(kj as i64);
    }
    Ok(ExponentVector { v, beta: beta.to_vec(), origin: Some(Origin { sigma, k: k.to_vec() }) })
}

/// `x (x-1) ⋯ (x-m+1)` as an unreduced fraction `(numerator, denominator)`.
pub(crate) fn falling_parts(x: &Q, m: u64) -> (BigInt, BigInt) {
    let p = x.numer();
    let d = x.denom();
    let mut num = BigInt::one();
    let mut t = p.clone();
    for _ in 0..m {
        if t.is_zero() {
            return (BigInt::zero(), BigInt::one());
        }
        num *= &t;
        t -= d;
    }
    (num, d.pow(m as u32))
}

/// `x (x-1) ⋯ (x-m+1)` for a rational `x`, via one integer product.
fn falling(x: &Q, m: u64) -> Q {
    let (num, den) = falling_parts(x, m);
    Q::new(num, den)
}

/// `[v]_u = ∏_j v_j (v_j - 1) ⋯ (v_j - u_j + 1)`.
pub fn falling_factorial(v: &[Q], u: &[u64]) -> Q {
    v.iter().zip(u).map(|(x, &m)| falling(x, m)).product()
}

/// `[v]_{u−} / [v+u]_{u+}`; `None` when the denominator vanishes.
///
/// Products are accumulated as integers and reduced once: the coefficients
/// grow to thousands of bits and per-factor gcds dominate otherwise.
pub fn gamma_coefficient(v: &[Q], u: &[BigInt]) -> Option<Q> {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (x, uj) in v.iter().zip(u) {
        let m = uj.magnitude().to_u64().expect("exponent fits in u64");
        if uj.is_negative() {
            let (n, d) = falling_parts(x, m);
            num *= n;
            den *= d;
        } else if uj.is_positive() {
            let (n, d) = falling_parts(&(x + qi(uj)), m);
            num *= d;
            den *= n;
        }
    }
    if den.is_zero() {
        None
    } else {
        Some(Q::new(num, den))
    }
}

/// `c * num / den` for a large reduced `c` and small `num / den`, with gcds
/// taken against the small factors only.
fn mul_small(c: &Q, num: BigInt, den: BigInt) -> Q {
    if num.is_zero() || c.is_zero() {
        return Q::zero();
    }
    let g = num.gcd(&den);
    let (num, den) = (num / &g, den / &g);
    let g1 = num.gcd(&(c.denom() % &num));
    let g2 = den.gcd(&(c.numer() % &den));
    let n = (c.numer() / &g2) * (num / &g1);
    let d = (c.denom() / &g1) * (den / &g2);
    if d.is_negative() {
        Q::new_raw(-n, -d)
    } else {
        Q::new_raw(n, d)
    }
}

/// Coefficients of `φ_v` at the given offsets. When `nsupp(v)` is empty the
/// Γ-form `Π Γ(v+1)/Γ(v+u+1)` holds, so a term whose kernel coordinates
/// are one unit step further from the origin than another term follows from
/// it by a short falling-factorial ratio. Terms are visited outwards from the
/// origin; a term without such a neighbour uses the closed formula.
fn series_coefficients(v: &[Q], coords: &[Vec<BigInt>], offsets: &[Vec<BigInt>]) -> Result<Vec<Q>> {
    let direct = |u: &[BigInt]| {
        gamma_coefficient(v, u).ok_or_else(|| GkzError::Internal("vanishing denominator inside N_v".into()))
    };
    if v.iter().any(rational::is_negative_integer) {
        return offsets.par_iter().map(|u| direct(u)).collect();
    }
    let index: HashMap<&[BigInt], usize> = coords.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let norm = |c: &[BigInt]| -> BigInt { c.iter().map(|x| x.abs()).sum() };
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by_cached_key(|&i| norm(&coords[i]));
    let mut out: Vec<Option<Q>> = vec![None; coords.len()];
    for i in order {
        let c = &coords[i];
        let pred = (0..c.len()).filter(|&k| !c[k].is_zero()).find_map(|k| {
            let mut p = c.clone();
            p[k] -= c[k].signum();
            index.get(p.as_slice()).copied()
        });
        let Some(j) = pred else {
            out[i] = Some(direct(&offsets[i])?);
            continue;
        };
        // c(u) = c(u') [v+u']_{(u'-u)+} / [v+u]_{(u-u')+}
        let (u, up) = (&offsets[i], &offsets[j]);
        let (mut num, mut den) = (BigInt::one(), BigInt::one());
        for k in 0..v.len() {
            let step = &u[k] - &up[k];
            let m = step.magnitude().to_u64().expect("step fits in u64");
            if step.is_negative() {
                let (n, d) = falling_parts(&(&v[k] + qi(&up[k])), m);
                num *= n;
                den *= d;
            } else if step.is_positive() {
                let (n, d) = falling_parts(&(&v[k] + qi(&u[k])), m);
                num *= d;
                den *= n;
            }
        }
        if den.is_zero() {
            return Err(GkzError::Internal("vanishing denominator inside N_v".into()));
        }
        let prev = out[j].as_ref().expect("neighbour nearer the origin is computed first");
        out[i] = Some(mul_small(prev, num, den));
    }
    Ok(out.into_iter().map(|c| c.expect("every term visited")).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NegativeSupport {
    pub nsupp: Vec<usize>,
    /// Minimal among kernel translates with basis coordinates bounded by `radius`.
    pub minimal: bool,
    pub witness: Option<Vec<BigInt>>,
    pub radius: u64,
}

/// `nsupp(v)` and its minimality up to `radius`; the witness minimizes the
/// sup-norm of its kernel coordinates, then is lexicographically first.
pub fn negative_support(v: &[Q], a: &IntegerMatrix, radius: u64) -> Result<NegativeSupport> {
    let nsupp: Vec<usize> = (0..v.len()).filter(|&j| rational::is_negative_integer(&v[j])).collect();
    if nsupp.is_empty() {
        return Ok(NegativeSupport { nsupp, minimal: true, witness: None, radius });
    }
    let basis = lattice::kernel_basis(a)?;
    let r = radius as i64;
    let mut best: Option<(i64, Vec<i64>)> = None;
    for c in (0..basis.rank()).map(|_| -r..=r).multi_cartesian_product() {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let norm = c.iter().map(|x| x.abs()).max().unwrap();
        if best.as_ref().is_some_and(|(bn, bc)| (norm, &c) >= (*bn, bc)) {
            continue;
        }
        let u = basis.combine(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let shifted: Vec<usize> = (0..v.len())
            .filter(|&j| rational::is_negative_integer(&(&v[j] + qi(&u[j]))))
            .collect();
        let proper = shifted.len() < nsupp.len() && shifted.iter().all(|j| nsupp.contains(j));
        if proper {
            best = Some((norm, c));
        }
    }
    let witness = best.map(|(_, c)| basis.combine(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()));
    Ok(NegativeSupport { nsupp, minimal: witness.is_none(), witness, radius })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    /// `u ∈ ker_Z(A)`; the exponent is `v + u`.
    pub offset: Vec<BigInt>,
    pub coefficient: Q,
    /// `<w, u>` for the window weight.
    pub weight: Q,
}

/// `φ_v` restricted to `{u ∈ N_v : <w,u> <= weight_hi}`, complete inside that window.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    pub base: ExponentVector,
    pub weight: Vec<Q>,
    pub weight_hi: Q,
    /// Sorted lexicographically on the offset.
    pub terms: Vec<Term>,
}

impl TruncatedSeries {
    /// The single term `x^v` with a window reaching weight `0` only.
    pub fn monomial(base: ExponentVector, weight: Vec<Q>) -> Self {
        let n = base.v.len();
        let term = Term { offset: vec![BigInt::zero(); n], coefficient: Q::one(), weight: Q::zero() };
        Self { base, weight, weight_hi: Q::zero(), terms: vec![term] }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn exponent(&self, t: &Term) -> Vec<Q> {
        self.base.shifted(&t.offset)
    }

    pub fn coefficient(&self, u: &[BigInt]) -> Option<&Q> {
        self.terms
            .binary_search_by(|t| t.offset.as_slice().cmp(u))
            .ok()
            .map(|i| &self.terms[i].coefficient)
    }

    /// Exponents of all stored terms.
    pub fn support(&self) -> Vec<Vec<Q>> {
        self.terms.iter().map(|t| self.exponent(t)).collect()
    }

    /// Terms ordered by weight, then offset.
    pub fn by_weight(&self) -> Vec<&Term> {
        let mut ts: Vec<&Term> = self.terms.iter().collect();
        ts.sort_by(|x, y| x.weight.cmp(&y.weight).then_with(|| x.offset.cmp(&y.offset)));
        ts
    }

    /// Keeps the terms of weight `<= hi`.
    pub fn truncate(&self, hi: &Q) -> TruncatedSeries {
        let terms = self.terms.iter().filter(|t| &t.weight <= hi).cloned().collect();
        TruncatedSeries { terms, weight_hi: hi.clone(), ..self.clone() }
    }
}

/// Half-spaces in kernel-basis coordinates: the `N_v` sign conditions, plus
/// `<w,u> <= hi` when given.
pub(crate) fn support_constraints(v: &[Q], basis: &KernelBasis, w: Option<(&[Q], &Q)>) -> Vec<HalfSpace> {
    let r = basis.rank();
    let n = v.len();
    let mut rows = Vec::new();
    for j in 0..n {
        if !rational::is_integer(&v[j]) {
            continue;
        }
        let col: Vec<Q> = basis.vectors.iter().map(|b| qi(&b[j])).collect();
        if v[j].is_negative() {
            // v_j + u_j <= -1
            rows.push(HalfSpace { coeffs: col, rhs: -&v[j] - q(1) });
        } else {
            // v_j + u_j >= 0
            rows.push(HalfSpace { coeffs: col.iter().map(|x| -x).collect(), rhs: v[j].clone() });
        }
    }
    if let Some((w, hi)) = w {
        let coeffs: Vec<Q> = basis.vectors.iter().map(|b| rational::dot_int(w, b)).collect();
        rows.push(HalfSpace { coeffs, rhs: hi.clone() });
    }
    debug_assert!(rows.iter().all(|h| h.coeffs.len() == r));
    rows
}

/// Exact truncation of `φ_v = Σ_{u∈N_v} [v]_{u−}/[v+u]_{u+} x^{v+u}` to `<w,u> <= weight_hi`.
pub fn gamma_series(
    a: &IntegerMatrix,
    beta: &[Q],
    v: &ExponentVector,
    w: &WeightVector,
    weight_hi: &Q,
) -> Result<TruncatedSeries> {
    let w = w.concrete()?;
    if w.len() != a.n() {
        return Err(GkzError::DimensionMismatch { what: "weight".into(), expected: a.n(), found: w.len() });
    }
    if v.v.len() != a.n() {
        return Err(GkzError::DimensionMismatch { what: "exponent".into(), expected: a.n(), found: v.v.len() });
    }
    if a.apply_q(&v.v) != beta {
        return Err(GkzError::Internal("exponent does not satisfy A v = beta".into()));
    }
    if weight_hi.is_negative() {
        return Err(GkzError::InvalidWindow(format!("weight_hi = {weight_hi} is negative")));
    }
    let basis = lattice::kernel_basis(a)?;
    let rows = support_constraints(&v.v, &basis, Some((w, weight_hi)));
    let coords = enumerate::lattice_points(&rows, basis.rank()).map_err(|dir| GkzError::WindowUnbounded {
        direction: basis_direction(&basis, &dir),
    })?;
    let offsets: Vec<Vec<BigInt>> = coords.par_iter().map(|c| basis.combine(c)).collect();
    let coefficients = series_coefficients(&v.v, &coords, &offsets)?;
    let mut terms: Vec<Term> = offsets
        .into_iter()
        .zip(coefficients)
        .map(|(offset, coefficient)| {
            let weight = rational::dot_int(w, &offset);
            Term { offset, coefficient, weight }
        })
        .collect();
    terms.sort_by(|x, y| x.offset.cmp(&y.offset));
    Ok(TruncatedSeries { base: v.clone(), weight: w.to_vec(), weight_hi: weight_hi.clone(), terms })
}

fn basis_direction(basis: &KernelBasis, dir: &[Q]) -> Vec<BigInt> {
    let u: Vec<Q> = (0..basis.n)
        .map(|j| dir.iter().zip(&basis.vectors).map(|(c, b)| c * qi(&b[j])).sum())
        .collect();
    rational::primitive_integer_vector(&u)
}

/// Smallest window bound that holds at least `count` terms of `φ_v`.
pub fn window_for_terms(
    a: &IntegerMatrix,
    beta: &[Q],
    v: &ExponentVector,
    w: &WeightVector,
    count: usize,
) -> Result<Q> {
    let wc = w.concrete()?;
    let basis = lattice::kernel_basis(a)?;
    let rows = support_constraints(&v.v, &basis, None);
    if let Ok(all) = enumerate::lattice_points(&rows, basis.rank()) {
        // finite series: every term fits in some window
        let mut weights: Vec<Q> = all.iter().map(|c| rational::dot_int(wc, &basis.combine(c))).collect();
        weights.sort();
        let last = weights.len().min(count.max(1)) - 1;
        return Ok(weights[last].clone().max(Q::zero()));
    }
    if v.v.len() != a.n() || a.apply_q(&v.v) != beta {
        return Err(GkzError::Internal("exponent does not satisfy A v = beta".into()));
    }
    // start at the smallest step a basis vector can make, then double
    let mut hi = basis
        .vectors
        .iter()
        .map(|b| rational::dot_int(wc, b).abs())
        .filter(|x| x.is_positive())
        .min()
        .unwrap_or_else(|| q(1));
    loop {
        let rows = support_constraints(&v.v, &basis, Some((wc, &hi)));
        let pts = enumerate::lattice_points(&rows, basis.rank())
            .map_err(|dir| GkzError::WindowUnbounded { direction: basis_direction(&basis, &dir) })?;
        if pts.len() >= count {
            let mut weights: Vec<Q> = pts.iter().map(|c| rational::dot_int(wc, &basis.combine(c))).collect();
            weights.sort();
            return Ok(weights[count - 1].clone());
        }
        if hi > q(1 << 40) {
            return Err(GkzError::InvalidWindow(format!("only {} terms below weight {hi}", pts.len())));
        }
        hi *= q(2);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialForm {
    pub terms: Vec<Term>,
    pub weight: LexValue,
    /// No unstored term can have weight `<=` the minimum found.
    pub trustworthy: bool,
}

/// Terms of minimal `<w', u>` among the stored ones, with a certificate that
/// the minimum is not undercut outside the window.
pub fn initial_form(s: &TruncatedSeries, w: &WeightVector, a: &IntegerMatrix) -> Result<InitialForm> {
    if s.terms.is_empty() {
        return Err(GkzError::InvalidWindow("empty series".into()));
    }
    let values: Vec<LexValue> = s.terms.iter().map(|t| w.pair(&rational::to_q_vec(&t.offset))).collect();
    let min = values.iter().min().unwrap().clone();
    let terms: Vec<Term> = s.terms.iter().zip(&values).filter(|(_, v)| **v == min).map(|(t, _)| t.clone()).collect();
    let trustworthy = match w.concrete() {
        Ok(wc) => unstored_minimum_exceeds(s, wc, a, &min.base())?,
        Err(_) => false,
    };
    Ok(InitialForm { terms, weight: min, trustworthy })
}

fn unstored_minimum_exceeds(s: &TruncatedSeries, w: &[Q], a: &IntegerMatrix, min: &Q) -> Result<bool> {
    let basis = lattice::kernel_basis(a)?;
    let r = basis.rank();
    if r == 0 {
        return Ok(true);
    }
    let mut lp = LinearProgram::new(r);
    for h in support_constraints(&s.base.v, &basis, None) {
        lp.add(h.coeffs, Relation::Le, h.rhs);
    }
    let window: Vec<Q> = basis.vectors.iter().map(|b| rational::dot_int(&s.weight, b)).collect();
    lp.add(window, Relation::Ge, s.weight_hi.clone());
    let objective: Vec<Q> = basis.vectors.iter().map(|b| rational::dot_int(w, b)).collect();
    Ok(match lp.minimize(&objective) {
        LpResult::Optimal { value, .. } => &value > min,
        LpResult::Infeasible => true,
        LpResult::Unbounded => false,
    })
}

/// Finite consequences of genericity of `beta` for a family of exponents.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Genericity {
    pub violations: Vec<String>,
}

impl Genericity {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// No `sigma`-coordinate of any `v_sigma^k` is an integer and no two
/// exponents differ by an integer vector.
pub fn genericity_certificate(exponents: &[ExponentVector]) -> Genericity {
    let mut violations = Vec::new();
    for e in exponents {
        let Some(o) = &e.origin else { continue };
        for &j in &o.sigma {
            if rational::is_integer(&e.v[j]) {
                violations.push(format!(
                    "v for sigma = {}, k = {:?} has integer coordinate {} = {}",
                    crate::error::one_based(&o.sigma),
                    o.k,
                    j + 1,
                    e.v[j]
                ));
            }
        }
    }
    for (x, y) in exponents.iter().tuple_combinations() {
        if x.v.iter().zip(&y.v).all(|(p, r)| rational::is_integer(&(p - r))) {
            violations.push(format!(
                "exponents {} and {} differ by an integer vector",
                fmt_origin(x),
                fmt_origin(y)
            ));
        }
    }
    Genericity { violations }
}

fn fmt_origin(e: &ExponentVector) -> String {
    match &e.origin {
        Some(o) => format!("(sigma = {}, k = {:?})", crate::error::one_based(&o.sigma), o.k),
        None => format!("{:?}", rational::fmt_vec(&e.v)),
    }
}
