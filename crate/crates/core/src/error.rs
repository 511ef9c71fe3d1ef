use thiserror::Error;

/// Errors across the whole pipeline. Reconstruction failures are kept as
/// distinct variants so that each violated assumption is individually
/// reportable.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("determinant guard violated: |det - 1| = {deviation:.3e}")]
    DetGuard { deviation: f64 },

    #[error("matrix is not skew-symmetric: relative residual {residual:.3e}")]
    NotSkew { residual: f64 },

    #[error("degenerate pencil: the three skew matrices span rank {rank} <= 1")]
    DegeneratePencil { rank: usize },

    #[error("no kernel: colinearity matrix has full rank {rank}, point is off the hypersurface")]
    NoKernel { rank: usize },

    #[error("non-ordinary commutator: [a, b^-1] is special")]
    NonOrdinaryCommutator,

    #[error("det(y0) = 0: the nullspace combination is singular (|det| = {det_mag:.3e})")]
    SingularY { det_mag: f64 },

    #[error("reducible pair: y and z share an eigenvector")]
    Reducible,

    #[error("coordinate collision: t_1212bar = t_2121bar (|diff| = {gap:.3e})")]
    CoordinateCollision { gap: f64 },

    #[error("solver failed to converge: best residual {best_residual:.3e} after {restarts} restarts")]
    Convergence { best_residual: f64, restarts: usize },

    #[error("relation residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    RelationResidual { residual: f64, tol: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
