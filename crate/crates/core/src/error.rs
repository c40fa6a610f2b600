use thiserror::Error;

/// Errors raised while deriving or evaluating a box spline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoxError {
    #[error("degenerate box spline: direction matrix has rank {rank}, expected {expected}")]
    DegenerateMatrix { rank: usize, expected: usize },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("no kernel vector exists for alpha {0:?}")]
    NoSuchVector(Vec<u32>),
    #[error("omega gives a pole: direction {0} is orthogonal to omega")]
    PoleAtOmega(usize),
    #[error("column selection {0:?} is singular")]
    SingularSelection(Vec<usize>),
    #[error("hyperplane does not split the polyhedron")]
    NoSplit,
    #[error("region center lies on a knot plane")]
    CenterOnKnotPlane,
    #[error("point lies on a knot plane")]
    OnKnotPlane,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = BoxError> = std::result::Result<T, E>;
