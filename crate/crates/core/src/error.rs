use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures of the matrix-level operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("tolerance `{name}` = {value} must lie in (0, 1)")]
    BadTolerance { name: String, value: f64 },
    #[error("unknown tolerance `{0}` (expected rank_tol, residual_tol or inv_tol)")]
    UnknownTolerance(String),

    #[error("matrix is not Hermitian (‖m − m*‖ = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is singular (smallest singular value {min_sv:e})")]
    Singular { min_sv: f64 },

    #[error("matrix is not idempotent (‖m² − m‖ = {residual:e})")]
    NotIdempotent { residual: f64 },
    #[error("matrix is not a projection (‖m² − m‖ = {idem_residual:e}, ‖m − m*‖ = {herm_residual:e})")]
    NotProjection { idem_residual: f64, herm_residual: f64 },
    #[error("p + q − 1 is not invertible (smallest singular value {min_sv:e})")]
    SumNotInvertible { min_sv: f64 },
    #[error("construction could not be certified (worst residual {residual:e})")]
    Uncertified { residual: f64 },
    #[error("‖p − q‖ = {norm} is not less than one")]
    NormNotLessThanOne { norm: f64 },
    #[error("rank {k} is not admissible in dimension {n}")]
    BadRank { n: usize, k: usize },

    #[error("p + q − 1 is not injective (dim Im p∩Ker q = {d10}, dim Ker p∩Im q = {d01})")]
    SumNotInjective { d10: usize, d01: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("projections are not orthogonal (‖pq‖ = {residual:e})")]
    NotOrthogonal { residual: f64 },

    #[error("frame is not left-invertible (smallest singular value {min_sv:e})")]
    FrameDeficient { min_sv: f64 },
    #[error("projection is outside the chart (‖q − p_I‖ = {norm})")]
    NotInChart { norm: f64 },
    #[error("projection is outside the unit ball of the basepoint (‖q − p‖ = {norm})")]
    NotInBall { norm: f64 },
    #[error("point lies outside the chart overlap (‖q − p₂‖ = {norm})")]
    NotInOverlap { norm: f64 },
    #[error("coordinate matrix is not in p⊥Mp (‖x − p⊥xp‖ = {residual:e})")]
    NotInComplement { residual: f64 },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("invalid chart index: {0}")]
    BadChartIndex(String),
}
