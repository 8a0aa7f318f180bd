//! Euler operators and toric binomials applied to truncated series, and the
//! annihilation report built from them.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::enumerate::{self, HalfSpace};
use crate::error::{GkzError, Result};
use crate::lattice::{self, IntegerMatrix};
use crate::rational::{self, q, qi, Q};
use crate::series::{falling_factorial, falling_parts, TruncatedSeries};

/// `∂^{u+} − ∂^{u−}` for `u ∈ ker_Z(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToricBinomial {
    pub u: Vec<BigInt>,
    pub plus: Vec<u64>,
    pub minus: Vec<u64>,
}

impl ToricBinomial {
    pub fn new(a: &IntegerMatrix, u: Vec<BigInt>) -> Result<Self> {
        if u.len() != a.n() {
            return Err(GkzError::DimensionMismatch { what: "binomial".into(), expected: a.n(), found: u.len() });
        }
        if a.apply(&u).iter().any(|x| !x.is_zero()) {
            return Err(GkzError::Input { field: "binomial".into(), message: "A u != 0".into() });
        }
        Ok(Self::from_kernel_vector(u))
    }

    /// Caller guarantees `A u = 0`.
    pub fn from_kernel_vector(u: Vec<BigInt>) -> Self {
        let to_u64 = |x: &BigInt| u64::try_from(x).expect("binomial exponent fits in u64");
        let plus = u.iter().map(|x| if x.is_positive() { to_u64(x) } else { 0 }).collect();
        let minus = u.iter().map(|x| if x.is_negative() { to_u64(&-x) } else { 0 }).collect();
        Self { u, plus, minus }
    }

    pub fn sup_norm(&self) -> u64 {
        self.plus.iter().chain(&self.minus).copied().max().unwrap_or(0)
    }
}

/// An operator applied to a truncated series: terms `coefficient · x^{v + offset}`.
///
/// Only output terms of weight `<= trusted_hi` are determined by the stored
/// input terms; beyond that the truncation may hide contributions.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorImage {
    pub terms: BTreeMap<Vec<BigInt>, Q>,
    pub trusted_hi: Q,
}

impl OperatorImage {
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Zero::is_zero)
    }

    /// Nonzero terms inside the trusted window, as `(offset, coefficient, weight)`.
    pub fn residual(&self, w: &[Q]) -> Vec<(Vec<BigInt>, Q, Q)> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(u, c)| (u.clone(), c.clone(), rational::dot_int(w, u)))
            .filter(|(_, _, wt)| wt <= &self.trusted_hi)
            .collect()
    }
}

/// `(E_i − beta_i)` for every row `i`: term `c x^e` maps to `(A e − beta)_i c x^e`.
pub fn apply_euler(s: &TruncatedSeries, a: &IntegerMatrix, beta: &[Q]) -> Vec<OperatorImage> {
    (0..a.d())
        .map(|i| {
            let terms = s
                .terms
                .iter()
                .map(|t| {
                    let e = s.exponent(t);
                    let ae: Q = (0..a.n()).map(|j| q(a.entry(i, j)) * &e[j]).sum();
                    let factor = ae - &beta[i];
                    let value = if factor.is_zero() { Q::zero() } else { factor * &t.coefficient };
                    (t.offset.clone(), value)
                })
                .collect();
            OperatorImage { terms, trusted_hi: s.weight_hi.clone() }
        })
        .collect()
}

fn sub(u: &[BigInt], m: &[u64]) -> Vec<BigInt> {
    u.iter().zip(m).map(|(x, &y)| x - y).collect()
}

fn weight_of(w: &[Q], m: &[u64]) -> Q {
    w.iter().zip(m).map(|(x, &y)| x * q(y as i64)).sum()
}

/// Trusted output bound `weight_hi − max(<w,u+>, <w,u−>)`.
pub fn trusted_bound(s: &TruncatedSeries, b: &ToricBinomial) -> Q {
    let wp = weight_of(&s.weight, &b.plus);
    let wm = weight_of(&s.weight, &b.minus);
    &s.weight_hi - wp.max(wm)
}

/// `∂^{u+} x^e = [e]_{u+} x^{e − u+}`, summed over the stored terms.
pub fn apply_binomial(s: &TruncatedSeries, b: &ToricBinomial) -> OperatorImage {
    let mut terms: BTreeMap<Vec<BigInt>, Q> = BTreeMap::new();
    for t in &s.terms {
        let e = s.exponent(t);
        for (shift, sign) in [(&b.plus, 1), (&b.minus, -1)] {
            let c = falling_factorial(&e, shift) * &t.coefficient;
            if c.is_zero() {
                continue;
            }
            let slot = terms.entry(sub(&t.offset, shift)).or_insert_with(Q::zero);
            if sign > 0 {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
    }
    OperatorImage { terms, trusted_hi: trusted_bound(s, b) }
}

/// Result of checking one binomial on the trusted window.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialCheck {
    pub binomial: ToricBinomial,
    pub ok: bool,
    /// Output weights `<= checked_hi` were compared.
    pub checked_hi: Q,
    pub compared_terms: usize,
    /// First offending output offset, if any.
    pub failure: Option<Vec<BigInt>>,
}

/// Per-series data shared by all binomial checks: the offset index and the
/// falling factorials `[e_j]_m` of every term for `m <= max_shift`, kept as
/// unreduced fractions.
pub struct BinomialChecker<'a> {
    s: &'a TruncatedSeries,
    offsets: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    falling: Vec<Vec<Vec<(BigInt, BigInt)>>>,
    // weights times the common denominator `scale`, so window tests are integer comparisons
    scale: BigInt,
    w: Vec<BigInt>,
    hi: BigInt,
    term_weights: Vec<BigInt>,
}

impl<'a> BinomialChecker<'a> {
    pub fn new(s: &'a TruncatedSeries, max_shift: u64) -> Self {
        let offsets: Vec<Vec<i64>> = s
            .terms
            .iter()
            .map(|t| t.offset.iter().map(|x| x.to_i64().expect("series offset fits in i64")).collect())
            .collect();
        let index = offsets.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let falling = s
            .terms
            .iter()
            .map(|t| s.exponent(t).iter().map(|e| (0..=max_shift).map(|m| falling_parts(e, m)).collect()).collect())
            .collect();
        let scale = s.weight.iter().chain([&s.weight_hi]).fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let scaled = |x: &Q| (x * Q::from(scale.clone())).to_integer();
        let w = s.weight.iter().map(scaled).collect();
        let hi = scaled(&s.weight_hi);
        let term_weights = s.terms.iter().map(|t| scaled(&t.weight)).collect();
        Self { s, offsets, index, falling, scale, w, hi, term_weights }
    }

    /// `c_i [e_i]_shift` as an unreduced fraction.
    fn shifted(&self, i: usize, shift: &[u64]) -> (BigInt, BigInt) {
        let t = &self.s.terms[i];
        let (mut num, mut den) = (t.coefficient.numer().clone(), t.coefficient.denom().clone());
        for (j, &m) in shift.iter().enumerate() {
            if m == 0 {
                continue;
            }
            match self.falling[i][j].get(m as usize) {
                Some((n, d)) => {
                    num *= n;
                    den *= d;
                }
                None => {
                    let (n, d) = falling_parts(&(&self.s.base.v[j] + qi(&t.offset[j])), m);
                    num *= n;
                    den *= d;
                }
            }
        }
        (num, den)
    }

    fn side(&self, out: &[i64], shift: &[u64]) -> (BigInt, BigInt) {
        let src: Vec<i64> = out.iter().zip(shift).map(|(x, &y)| x + y as i64).collect();
        match self.index.get(&src) {
            Some(&i) => self.shifted(i, shift),
            None => (BigInt::zero(), BigInt::one()),
        }
    }

    /// Compares `∂^{u+}φ` and `∂^{u−}φ` term by term on the trusted window only.
    pub fn check(&self, b: &ToricBinomial) -> BinomialCheck {
        let weight = |m: &[u64]| -> BigInt { self.w.iter().zip(m).map(|(x, &y)| x * y).sum() };
        let (wp, wm) = (weight(&b.plus), weight(&b.minus));
        let hi = &self.hi - (&wp).max(&wm);
        let plus_hi = &hi + &wp;
        let minus_hi = &hi + &wm;
        let shifted = |o: &[i64], m: &[u64]| -> Vec<i64> { o.iter().zip(m).map(|(x, &y)| x - y as i64).collect() };
        let mut outputs: Vec<Vec<i64>> = Vec::new();
        for (tw, o) in self.term_weights.iter().zip(&self.offsets) {
            if tw <= &plus_hi {
                outputs.push(shifted(o, &b.plus));
            }
            if tw <= &minus_hi {
                outputs.push(shifted(o, &b.minus));
            }
        }
        outputs.sort();
        outputs.dedup();
        let differ = |o: &[i64]| {
            let (n1, d1) = self.side(o, &b.plus);
            let (n2, d2) = self.side(o, &b.minus);
            n1 * d2 != n2 * d1
        };
        let failure = outputs.iter().find(|o| differ(o)).map(|o| o.iter().map(|&x| BigInt::from(x)).collect());
        let checked_hi = Q::new(hi, self.scale.clone());
        BinomialCheck { binomial: b.clone(), ok: failure.is_none(), checked_hi, compared_terms: outputs.len(), failure }
    }
}

/// Nonzero `u ∈ ker_Z(A)` with `‖u‖∞ <= bound` and first nonzero entry positive, sorted.
pub fn kernel_vectors_in_box(a: &IntegerMatrix, bound: u64) -> Result<Vec<Vec<BigInt>>> {
    let basis = lattice::kernel_basis(a)?;
    let r = basis.rank();
    let mut rows = Vec::new();
    for j in 0..a.n() {
        let col: Vec<Q> = basis.vectors.iter().map(|b| qi(&b[j])).collect();
        rows.push(HalfSpace { coeffs: col.clone(), rhs: q(bound as i64) });
        rows.push(HalfSpace { coeffs: col.iter().map(|x| -x).collect(), rhs: q(bound as i64) });
    }
    let coords = enumerate::lattice_points(&rows, r).map_err(|_| GkzError::Internal("kernel box unbounded".into()))?;
    let mut out: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|c| basis.combine(c))
        .filter(|u| u.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive()))
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilationReport {
    pub euler_ok: bool,
    pub binomials_checked: Vec<BinomialCheck>,
    /// Binomials with no output term inside the trusted window.
    pub vacuous: usize,
    pub support_bound: u64,
    /// Width of the excluded frontier band: `max over checked binomials of weight_hi − checked_hi`.
    pub frontier_excluded_weight: Q,
    pub caveats: Vec<String>,
}

impl AnnihilationReport {
    pub fn passed(&self) -> bool {
        self.euler_ok && self.binomials_checked.iter().all(|b| b.ok)
    }

    pub fn failures(&self) -> Vec<&BinomialCheck> {
        self.binomials_checked.iter().filter(|b| !b.ok).collect()
    }
}

/// Exact Euler check plus every kernel binomial with `‖u‖∞ <= support_bound`
/// on the trusted part of the window. The weight is the series' own window weight.
pub fn verify_annihilation(
    s: &TruncatedSeries,
    a: &IntegerMatrix,
    beta: &[Q],
    support_bound: u64,
) -> Result<AnnihilationReport> {
    let euler_ok = apply_euler(s, a, beta).iter().all(OperatorImage::is_zero);
    let checker = BinomialChecker::new(s, support_bound);
    let kernel = kernel_vectors_in_box(a, support_bound)?;
    let checks: Vec<BinomialCheck> =
        kernel.into_par_iter().map(|u| checker.check(&ToricBinomial::from_kernel_vector(u))).collect();
    let (binomials_checked, vacuous): (Vec<_>, Vec<_>) = checks.into_iter().partition(|c| c.compared_terms > 0);
    let frontier_excluded_weight = binomials_checked
        .iter()
        .map(|c| &s.weight_hi - &c.checked_hi)
        .max()
        .unwrap_or_else(Q::zero);
    let caveats = vec![
        format!(
            "toric ideal exercised through all kernel binomials with sup-norm <= {support_bound}; whether these generate I_A is not decided"
        ),
        "cancellation asserted only where both shifts of a binomial land inside the window".to_string(),
    ];
    Ok(AnnihilationReport {
        euler_ok,
        binomials_checked,
        vacuous: vacuous.len(),
        support_bound,
        frontier_excluded_weight,
        caveats,
    })
}

/// `(n+1)(2^{2(d+1)} vol(A) − 1)` with the exact normalized volume of `A`.
pub fn degree_bound(a: &IntegerMatrix) -> BigUint {
    let all: Vec<usize> = (0..a.n()).collect();
    let vol = BigUint::from(lattice::normalized_volume(a, &all));
    let pow = BigUint::one() << (2 * (a.d() + 1));
    BigUint::from(a.n() + 1) * (pow * vol - BigUint::one())
}
