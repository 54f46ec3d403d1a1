use thiserror::Error;

/// Errors raised by the geometric kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("incompatible planes: {0}")]
    IncompatiblePlanes(String),

    #[error("incompatible multivectors: {0}")]
    IncompatibleMultiVectors(String),

    #[error("invalid oriented plane: {0}")]
    InvalidPlane(String),

    #[error("not on sphere: norm deviates from 1 by {deviation:e}")]
    NotOnSphere { deviation: f64 },

    #[error("not on unit sphere: |x| - 1 = {deviation:e} at {point:?}")]
    NotOnUnitSphere { point: Vec<f64>, deviation: f64 },

    #[error("irregular point {point:?}: smallest singular value of the jacobian is {sigma_min:e}")]
    IrregularPoint { point: Vec<f64>, sigma_min: f64 },

    #[error("point {point:?} lies outside the chart domain")]
    OutsideChart { point: Vec<f64> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
