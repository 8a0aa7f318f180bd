//! Solution bases: formal Nilsson series in a direction `w`, the convergent
//! sub-basis, Gevrey series along coordinate subspaces, and a numerical
//! estimate of the Gevrey order.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{GkzError, Result};
use crate::lattice::{self, b_sigma, IntegerMatrix};
use crate::lp::{LinearProgram, LpResult, Relation};
use crate::rational::{self, Q};
use crate::series::{self, exponent_v, gamma_series, omega_representatives, ExponentVector, Genericity, InitialForm, TruncatedSeries};
use crate::triangulation::{self, extend_triangulation, gamma_face_test, CoveringStatus, Triangulation};
use crate::weight::WeightVector;

/// Minimum number of terms for a Gevrey-order fit.
pub const GEVREY_MIN_TERMS: usize = 50;

/// How far each series is expanded.
#[derive(Clone, Debug, PartialEq)]
pub enum Window {
    /// All terms with `<w,u> <= bound`.
    WeightBound(Q),
    /// The smallest weight window holding at least this many terms.
    MinTerms(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Nilsson,
    Convergent,
    GevreyAlong(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub sigma: Vec<usize>,
    pub k: Vec<u64>,
    pub series: TruncatedSeries,
    pub initial_form: InitialForm,
    /// `(1,…,1) B_sigma >= 0`.
    pub convergent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionBasis {
    pub kind: BasisKind,
    pub direction: WeightVector,
    /// Concrete weight inducing the same triangulation, used for windows.
    pub realized: Vec<Q>,
    pub simplices: Vec<Vec<usize>>,
    pub covering: CoveringStatus,
    pub elements: Vec<BasisElement>,
    pub dimension: usize,
    pub genericity: Genericity,
}

/// A concrete weight with the same signs as `w` on every `B_sigma` column.
fn realize_weight(a: &IntegerMatrix, w: &WeightVector) -> Result<Vec<Q>> {
    if w.is_concrete() {
        return Ok(w.base().to_vec());
    }
    let mut probes = Vec::new();
    for sigma in triangulation::maximal_simplices(a) {
        probes.extend(b_sigma(a, &sigma)?.columns);
    }
    probes.extend((0..a.n()).map(|j| {
        let mut e = vec![Q::zero(); a.n()];
        e[j] = rational::q(1);
        e
    }));
    Ok(w.realize(&probes))
}

fn expand(
    a: &IntegerMatrix,
    beta: &[Q],
    e: &ExponentVector,
    w: &WeightVector,
    window: &Window,
) -> Result<TruncatedSeries> {
    let hi = match window {
        Window::WeightBound(hi) => hi.clone(),
        Window::MinTerms(count) => series::window_for_terms(a, beta, e, w, *count)?,
    };
    gamma_series(a, beta, e, w, &hi)
}

/// `φ_{v_sigma^k}` for the given simplices and all `k ∈ Omega_sigma`.
fn build_elements(
    a: &IntegerMatrix,
    beta: &[Q],
    simplices: &[Vec<usize>],
    wc: &[Q],
    window: &Window,
) -> Result<(Vec<BasisElement>, Genericity)> {
    let w = WeightVector::new(wc.to_vec());
    let mut exponents = Vec::new();
    for sigma in simplices {
        let om = omega_representatives(a, sigma, &w)?;
        for k in &om.representatives {
            exponents.push(exponent_v(a, sigma, k, beta)?);
        }
    }
    let genericity = series::genericity_certificate(&exponents);
    if !genericity.ok() {
        return Err(GkzError::NonGenericParameter(genericity.violations));
    }
    let elements: Vec<Result<BasisElement>> = exponents
        .par_iter()
        .map(|e| {
            let origin = e.origin.clone().expect("exponent built from a simplex");
            let s = expand(a, beta, e, &w, window)?;
            let initial_form = series::initial_form(&s, &w, a)?;
            let convergent = gamma_face_test(a, &origin.sigma)?;
            Ok(BasisElement { sigma: origin.sigma, k: origin.k, series: s, initial_form, convergent })
        })
        .collect();
    Ok((elements.into_iter().collect::<Result<_>>()?, genericity))
}

fn check_same_triangulation(a: &IntegerMatrix, wc: &[Q], t: &Triangulation) -> Result<()> {
    let simplices = triangulation::regular_simplices(a, &WeightVector::new(wc.to_vec()))?;
    if simplices != t.simplices {
        return Err(GkzError::Internal("realized weight changed the triangulation".into()));
    }
    Ok(())
}

/// `B_w(beta) = {φ_{v_sigma^k} : sigma ∈ T_w, k ∈ Omega_sigma}`.
pub fn nilsson_basis(a: &IntegerMatrix, beta: &[Q], w: &WeightVector, window: &Window) -> Result<SolutionBasis> {
    if beta.len() != a.d() {
        return Err(GkzError::DimensionMismatch { what: "beta".into(), expected: a.d(), found: beta.len() });
    }
    let t = triangulation::triangulate(a, w)?;
    let realized = realize_weight(a, w)?;
    check_same_triangulation(a, &realized, &t)?;
    let (elements, genericity) = build_elements(a, beta, &t.simplices, &realized, window)?;
    let dimension = elements.len();
    let expected: u64 = t.volume(a);
    if dimension as u64 != expected {
        return Err(GkzError::Internal(format!("basis has {dimension} elements, sum of volumes is {expected}")));
    }
    Ok(SolutionBasis {
        kind: BasisKind::Nilsson,
        direction: w.clone(),
        realized,
        simplices: t.simplices,
        covering: t.covering,
        elements,
        dimension,
        genericity,
    })
}

/// The elements whose simplex lies in a facet of `Γ_A`.
pub fn convergent_subbasis(basis: &SolutionBasis) -> SolutionBasis {
    let elements: Vec<BasisElement> = basis.elements.iter().filter(|e| e.convergent).cloned().collect();
    let mut simplices: Vec<Vec<usize>> = elements.iter().map(|e| e.sigma.clone()).collect();
    simplices.dedup();
    SolutionBasis {
        kind: BasisKind::Convergent,
        dimension: elements.len(),
        elements,
        simplices,
        ..basis.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GevreyEstimate {
    pub order: f64,
    pub lower: f64,
    pub upper: f64,
    pub terms_used: usize,
    /// Number of distinct positive degrees in the fit.
    pub degrees: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GevreyDiagnostic {
    pub tau: Vec<usize>,
    pub convergent: Vec<bool>,
    /// Per series; `Err` text when the estimate could not be made.
    pub estimated_order: Vec<std::result::Result<GevreyEstimate, String>>,
    /// Every offset has `<w,u> >= 0` and `u = 0` is the unique initial term, per series.
    pub contained_in_nilsson: Vec<bool>,
    pub pos_equal: bool,
    /// When `pos(A_tau) = pos(A)`: the Gevrey basis equals the Nilsson basis for the extension weight.
    pub equals_nilsson: Option<bool>,
    pub volume: u64,
}

/// Gevrey series solutions along `Y_tau = {x_j = 0 : j ∉ tau}`.
pub fn gevrey_basis(
    a: &IntegerMatrix,
    beta: &[Q],
    tau: &[usize],
    w_tau: &WeightVector,
    window: &Window,
) -> Result<(SolutionBasis, GevreyDiagnostic)> {
    if beta.len() != a.d() {
        return Err(GkzError::DimensionMismatch { what: "beta".into(), expected: a.d(), found: beta.len() });
    }
    let mut tau = tau.to_vec();
    tau.sort_unstable();
    tau.dedup();
    if let Some(&bad) = tau.iter().find(|&&j| j >= a.n()) {
        return Err(GkzError::IndexOutOfRange { what: "tau".into(), index: bad + 1, n: a.n() });
    }
    let a_tau = a.select_columns(&tau);
    if a_tau.rank() < a.d() {
        return Err(GkzError::SubmatrixRank { tau });
    }
    if !lattice::is_pointed(&a_tau).pointed {
        return Err(GkzError::NotPointed("A_tau".into()));
    }
    let ext = extend_triangulation(a, &tau, w_tau)?;
    for sigma in &ext.restricted.simplices {
        let local: Vec<usize> = sigma.iter().map(|j| tau.iter().position(|t| t == j).unwrap()).collect();
        if !gamma_face_test(&a_tau, &local)? {
            return Err(GkzError::NotRefiningGamma { sigma: sigma.clone() });
        }
    }
    let realized = realize_weight(a, &ext.weight)?;
    check_same_triangulation(a, &realized, &ext.triangulation)?;
    let (elements, genericity) = build_elements(a, beta, &ext.restricted.simplices, &realized, window)?;
    let volume = lattice::normalized_volume(a, &tau);
    if elements.len() as u64 != volume {
        return Err(GkzError::GevreyDimensionMismatch { basis: elements.len(), volume });
    }
    let contained_in_nilsson = elements
        .iter()
        .map(|e| {
            let nonneg = e.series.terms.iter().all(|t| !t.weight.is_negative());
            let unique = e.initial_form.terms.len() == 1 && e.initial_form.terms[0].offset.iter().all(Zero::is_zero);
            nonneg && unique
        })
        .collect();
    let equals_nilsson = if ext.pos_equal {
        let full = nilsson_basis(a, beta, &ext.weight, window)?;
        Some(same_series(&full.elements, &elements))
    } else {
        None
    };
    let estimated_order = elements
        .par_iter()
        .map(|e| estimate_gevrey_order(a, &e.series, &tau).map_err(|err| err.to_string()))
        .collect();
    let diagnostic = GevreyDiagnostic {
        tau: tau.clone(),
        convergent: elements.iter().map(|e| e.convergent).collect(),
        estimated_order,
        contained_in_nilsson,
        pos_equal: ext.pos_equal,
        equals_nilsson,
        volume,
    };
    let basis = SolutionBasis {
        kind: BasisKind::GevreyAlong(tau),
        direction: ext.weight,
        realized,
        simplices: ext.restricted.simplices,
        covering: ext.restricted.covering,
        dimension: elements.len(),
        elements,
        genericity,
    };
    Ok((basis, diagnostic))
}

fn same_series(x: &[BasisElement], y: &[BasisElement]) -> bool {
    x.len() == y.len()
        && x.iter().zip(y).all(|(p, r)| p.sigma == r.sigma && p.k == r.k && p.series.terms == r.series.terms)
}

/// Whether the full (untruncated) `φ_v` has finitely many terms.
pub fn is_finite_series(a: &IntegerMatrix, v: &ExponentVector) -> Result<bool> {
    let basis = lattice::kernel_basis(a)?;
    if basis.rank() == 0 {
        return Ok(true);
    }
    let probe = series::gamma_series(a, &v.beta, v, &WeightVector::new(vec![Q::zero(); a.n()]), &Q::zero());
    match probe {
        Ok(_) => Ok(true),
        Err(GkzError::WindowUnbounded { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Predicate on `N`: every term of `φ_v` with `Σ_{j∉tau} u_j = N` lies inside
/// the truncation window of `s`. Unbounded slices are never complete, except
/// that every degree is accepted when no slice is bounded at all.
fn complete_degrees<'a>(a: &IntegerMatrix, s: &'a TruncatedSeries, outside: &[usize]) -> Result<impl Fn(&BigInt) -> bool + 'a> {
    let basis = lattice::kernel_basis(a)?;
    let rows = series::support_constraints(&s.base.v, &basis, None);
    let mut lp = LinearProgram::new(basis.rank());
    for h in &rows {
        lp.add(h.coeffs.clone(), Relation::Le, h.rhs.clone());
    }
    let degree: Vec<Q> = basis.vectors.iter().map(|b| outside.iter().map(|&j| Q::from(b[j].clone())).sum()).collect();
    let weight: Vec<Q> = basis.vectors.iter().map(|b| rational::dot_int(&s.weight, b)).collect();
    let mut verdict: BTreeMap<BigInt, bool> = BTreeMap::new();
    for t in &s.terms {
        let n: BigInt = outside.iter().map(|&j| &t.offset[j]).sum();
        if verdict.contains_key(&n) {
            continue;
        }
        let mut slice = lp.clone();
        slice.add(degree.clone(), Relation::Eq, Q::from(n.clone()));
        let inside = match slice.maximize(&weight) {
            LpResult::Optimal { value, .. } => value <= s.weight_hi,
            LpResult::Infeasible => true,
            LpResult::Unbounded => false,
        };
        verdict.insert(n, inside);
    }
    let any = verdict.values().any(|&b| b);
    Ok(move |n: &BigInt| !any || verdict.get(n).copied().unwrap_or(false))
}

/// Least-squares estimate of the Gevrey order along `Y_tau`.
///
/// Coefficients are grouped by `N = Σ_{j∉tau} u_j`; `log max|c|` per group is
/// fitted on `[1, log N, N, N log N]` and `s = 1 + (coefficient of N log N)`,
/// with an interval of two standard errors. This is a numerical estimate, not
/// the exact slope invariant.
pub fn estimate_gevrey_order(a: &IntegerMatrix, s: &TruncatedSeries, tau: &[usize]) -> Result<GevreyEstimate> {
    let outside: Vec<usize> = (0..a.n()).filter(|j| !tau.contains(j)).collect();
    if outside.is_empty() || is_finite_series(a, &s.base)? {
        return Ok(GevreyEstimate { order: 1.0, lower: 1.0, upper: 1.0, terms_used: s.len(), degrees: 0 });
    }
    let mut by_degree: BTreeMap<BigInt, f64> = BTreeMap::new();
    let mut used = 0;
    for t in &s.terms {
        if t.coefficient.is_zero() {
            continue;
        }
        let n: BigInt = outside.iter().map(|&j| &t.offset[j]).sum();
        if !n.is_positive() {
            continue;
        }
        used += 1;
        let l = rational::ln_abs(&t.coefficient);
        let slot = by_degree.entry(n).or_insert(f64::NEG_INFINITY);
        *slot = slot.max(l);
    }
    if used < GEVREY_MIN_TERMS {
        return Err(GkzError::TooFewCoefficients { found: used, needed: GEVREY_MIN_TERMS });
    }
    // A degree whose slice reaches past the window has its largest
    // coefficients cut off; those degrees would bias the fit downwards.
    let complete = complete_degrees(a, s, &outside)?;
    let points: Vec<(f64, f64)> = by_degree
        .iter()
        .filter(|(n, _)| complete(n))
        .map(|(n, l)| (rational::ln_abs_int(n).exp(), *l))
        .collect();
    let p = 4;
    if points.len() < p + 2 {
        return Err(GkzError::TooFewCoefficients { found: points.len(), needed: p + 2 });
    }
    let x = DMatrix::from_fn(points.len(), p, |i, j| {
        let n = points[i].0;
        match j {
            0 => 1.0,
            1 => n.ln(),
            2 => n,
            _ => n * n.ln(),
        }
    });
    let y = DVector::from_iterator(points.len(), points.iter().map(|(_, l)| *l));
    let xtx = x.transpose() * &x;
    let inv = xtx
        .try_inverse()
        .ok_or_else(|| GkzError::Internal("singular Gevrey regression".into()))?;
    let beta = &inv * x.transpose() * &y;
    let resid = &y - &x * &beta;
    let dof = (points.len() - p) as f64;
    let sigma2 = resid.norm_squared() / dof;
    let se = (sigma2 * inv[(p - 1, p - 1)]).max(0.0).sqrt();
    let order = 1.0 + beta[p - 1];
    Ok(GevreyEstimate { order, lower: order - 2.0 * se, upper: order + 2.0 * se, terms_used: used, degrees: points.len() })
}
