//! Exact series solutions of A-hypergeometric (GKZ) systems.
//!
//! Regular triangulations and secondary cones of an integer configuration,
//! exponents and truncated Γ-series in exact rational arithmetic, the
//! Euler and toric operators that check them, and solution bases of Nilsson
//! and Gevrey series.

pub mod cli;
pub mod dmodule;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod nilsson;
pub mod rational;
pub mod series;
pub mod triangulation;
pub mod weight;
