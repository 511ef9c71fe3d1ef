//! Repo-wide pinned tolerances and sign conventions.
//!
//! Every tolerance is an explicit constant so that float slack stays
//! auditable; none of them are adjusted at runtime.

/// Default threshold for numerical rank decisions, relative to the
/// largest pivot.
pub const RANK_TOL: f64 = 1e-8;

/// Default eigenvalue clustering tolerance. A double root of the
/// characteristic cubic is only computable to about sqrt(machine eps),
/// so clustering must be looser than that.
pub const EIGEN_TOL: f64 = 1e-6;

/// Entrywise tolerance for matrix identity checks.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Unimodularity guard: |det - 1| must stay below this before a matrix
/// may be inverted through its adjugate.
pub const DET_GUARD_TOL: f64 = 1e-8;

/// Relative skewness tolerance for the M^1 identification.
pub const SKEW_TOL: f64 = 1e-9;

/// Relative symmetry tolerance for symmetric-slice checks.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Maximum admissible relation residual for a successful reconstruction.
pub const RELATION_TOL: f64 = 1e-6;

/// Sign in `(uv - vu)^vee = CROSS_SIGN * (u^vee x v^vee)` for the
/// component ordering (u12, u13, u23). Determined by direct 3x3
/// computation and re-verified by brute force in the test suite.
pub const CROSS_SIGN: f64 = -1.0;

/// Sign in `tr(uvw) = TRIPLE_SIGN * det[u^vee, v^vee, w^vee]`.
pub const TRIPLE_SIGN: f64 = 1.0;

/// Proportionality between the matrix-level colinearity trace
/// tr(M1 M2 M3) and the defining polynomial F: they agree exactly.
pub const K_EQUALS_F_SIGN: f64 = 1.0;

/// Default seed for every CLI subcommand and reproducible example.
pub const DEFAULT_SEED: u64 = 42;
