use num_bigint::BigInt;
use thiserror::Error;

/// 1-based rendering of an index set, matching the `{1,…,n}` labels used in reports.
pub(crate) fn one_based(set: &[usize]) -> String {
    let parts: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn zero_entries(zeros: &[(Vec<usize>, usize)]) -> String {
    zeros
        .iter()
        .map(|(s, j)| format!("{} at column {}", one_based(s), j + 1))
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GkzError {
    #[error("matrix is not rectangular or empty: {0}")]
    Shape(String),

    #[error("matrix does not have full row rank; dependent rows {}", one_based(.dependent_rows))]
    RankDeficient { dependent_rows: Vec<usize> },

    #[error("columns do not generate Z^d; Smith invariant factors {invariant_factors:?}")]
    LatticeIndex { invariant_factors: Vec<BigInt> },

    #[error("A_sigma is singular (det = 0) for sigma = {}", one_based(.sigma))]
    SingularSimplex { sigma: Vec<usize> },

    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },

    #[error("index {index} out of range 1..={n} in {what}")]
    IndexOutOfRange { what: String, index: usize, n: usize },

    #[error("weight is not generic: w·B_sigma has zero entries for {}", zero_entries(.zeros))]
    NonGenericWeight { zeros: Vec<(Vec<usize>, usize)> },

    #[error("A is not pointed and w is not strictly positive; T_w need not cover pos(A) (requires w > 0 or A pointed)")]
    NotPointedWeight,

    #[error("triangulation does not tile pos(A): {0}")]
    CoveringFailed(String),

    #[error("w·B_sigma is not strictly positive for sigma = {}", one_based(.sigma))]
    WeightNotPositiveOnSimplex { sigma: Vec<usize> },

    #[error("a concrete weight (no infinitesimal part) is required here")]
    WeightNotConcrete,

    #[error("weight window is unbounded: direction {direction:?} lies in the support with <w,u> <= 0")]
    WindowUnbounded { direction: Vec<BigInt> },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("parameter beta is not generic: {}", .0.join("; "))]
    NonGenericParameter(Vec<String>),

    #[error("rank(A_tau) < d for tau = {}", one_based(.tau))]
    SubmatrixRank { tau: Vec<usize> },

    #[error("{0} is not pointed")]
    NotPointed(String),

    #[error("simplex {} of T(tau) is not contained in a facet of Gamma of A_tau; w_tau does not refine it", one_based(.sigma))]
    NotRefiningGamma { sigma: Vec<usize> },

    #[error("Gevrey basis has {basis} elements but vol(tau) = {volume}")]
    GevreyDimensionMismatch { basis: usize, volume: u64 },

    #[error("could not draw a generic extension weight after {0} attempts")]
    ExtensionFailed(usize),

    #[error("triangulation is empty")]
    EmptyTriangulation,

    #[error("need at least {needed} usable coefficients, found {found}")]
    TooFewCoefficients { found: usize, needed: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("{field}: {message}")]
    Input { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, GkzError>;
