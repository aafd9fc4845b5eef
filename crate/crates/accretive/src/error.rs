//! Error taxonomy shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian within tolerance (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not accretive: lambda_min(Re A) = {re_min:.3e}")]
    NotAccretive { re_min: f64 },

    #[error("matrix is not positive semidefinite: lambda_min = {lambda_min:.3e}")]
    NotPsd { lambda_min: f64 },

    #[error("matrix is numerically singular (sigma_min/sigma_max = {sigma_ratio:.3e})")]
    NearSingular { sigma_ratio: f64 },

    #[error("eigenvector matrix is too ill-conditioned for diagonalization (cond = {vec_condition:.3e})")]
    DefectiveMatrix { vec_condition: f64 },

    #[error("spectrum touches the cut (-inf, 0] (distance {distance:.3e})")]
    SpectrumOnCut { distance: f64 },

    #[error("no admissible integration contour avoids the cut (-inf, 0]")]
    ContourHitsCut,

    #[error("quadrature did not converge under node doubling (delta {delta:.3e})")]
    QuadratureNotConverged { delta: f64 },

    #[error("dense eigensolver failed to converge")]
    SolverFailure,

    #[error("could not generate inputs satisfying the hypotheses after {attempts} attempts")]
    GenerationFailure { attempts: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
