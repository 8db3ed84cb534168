//! Error type shared across the crate.

use crate::family::Family;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("index pair ({i},{j}) is not admissible for the {family:?} family")]
    InadmissibleIndex { i: u32, j: u32, family: Family },

    #[error("index pair ({i},{j}) exceeds truncation level N={n}")]
    IndexOutOfRange { i: u32, j: u32, n: u32 },

    #[error("operands belong to different families: {0:?} vs {1:?}")]
    FamilyMismatch(Family, Family),

    #[error("matrix log undefined: ||g - I|| = {norm} is too close to or above 1")]
    LogDomain { norm: f64 },

    #[error("BCDH order {0} outside the supported range 1..=6")]
    OrderOutOfRange(usize),

    #[error("zero-norm input where a direction is required")]
    ZeroNorm,

    #[error("scaling value {value} at index {index} exceeds the boundedness cap {cap}")]
    UnboundedScaling { index: u32, value: f64, cap: f64 },

    #[error("scaling parameter out of range: {0}")]
    ScalingParameter(String),

    #[error("cannot parse scaling spec `{0}`")]
    ScalingParse(String),

    #[error("closed-form Ricci requires N > max(i,j); got N={n}, (i,j)=({i},{j})")]
    TruncationTooSmall { i: u32, j: u32, n: u32 },

    #[error("structure-constant projection residual {residual} above tolerance {tol}")]
    ProjectionResidual { residual: f64, tol: f64 },

    #[error("matrix is singular or badly conditioned")]
    Singular,

    #[error("path sample invalid: {0}")]
    BadPath(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed matrix file: {0}")]
    MatrixFormat(String),
}
