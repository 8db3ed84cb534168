//! Numerical engine for the left-invariant Riemannian geometry of
//! Hilbert-Schmidt operator families.
//!
//! Three families of Lie algebras with diagonally weighted orthonormal bases
//! are supported: the general family (all index pairs), the orthogonal family
//! (skew-symmetric, pairs `i < j`) and the strictly upper triangular family.
//! On top of the basic algebra (brackets, inner products, matrix embeddings)
//! the crate provides:
//!
//! - matrix exp/log series, truncated BCDH composition and path-length
//!   functionals ([`explog`]),
//! - the Levi-Civita connection, curvature tensor, sectional curvature and
//!   truncated Ricci curvature together with closed-form evaluators
//!   ([`curvature`]),
//! - an independent brute-force recomputation path built from raw matrix
//!   commutators, used to cross-check the formula-based path ([`oracle`]),
//! - CSV/JSON report types shared with the command-line front end
//!   ([`report`]).

pub mod algebra;
pub mod curvature;
pub mod error;
pub mod explog;
pub mod family;
pub mod matio;
pub mod oracle;
pub mod report;
pub mod scaling;
pub mod vector;

pub use algebra::TruncatedAlgebra;
pub use curvature::CurvatureEngine;
pub use error::{Error, Result};
pub use explog::GroupElement;
pub use family::Family;
pub use report::{CurvatureReport, FitRecord, PrincipalCurve, ReportRow};
pub use scaling::{GeneralScaling, ScalingSequence};
pub use vector::{AlgebraVector, BasisIndex};

/// Absolute floor added to every relative comparison.
pub const ABS_FLOOR: f64 = 1e-14;

/// Relative comparison with an absolute floor of [`ABS_FLOOR`].
pub fn approx_eq(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + ABS_FLOOR
}
