//! Trace-coordinate verification and constructive realization for the
//! symmetric slice of a rank-two SL(3,C) character variety.
//!
//! The library has three layers:
//!
//! - numeric primitives: [`mat3`], [`cubic`], [`rng`], [`skewmap`],
//!   [`words`];
//! - the hypersurface: exact integer polynomials and certificates in
//!   [`exactpoly`], numeric evaluation and sampling in [`hypersurface`],
//!   batch identity suites in [`verify`];
//! - the constructive pipeline in [`reconstruct`]: recover a matrix from
//!   prescribed trace coordinates, assemble the symmetric representation
//!   pair, and enumerate its six unit-determinant lifts.

// Fixed-size matrix code indexes rows and columns in lockstep; iterator
// rewrites obscure that.
#![allow(clippy::needless_range_loop)]

pub mod constants;
pub mod cubic;
pub mod error;
pub mod exactpoly;
pub mod hypersurface;
pub mod mat3;
pub mod par;
pub mod reconstruct;
pub mod rng;
pub mod skewmap;
pub mod verify;
pub mod wire;
pub mod words;

pub use error::{Error, Result};
pub use hypersurface::{coords_of, f_eval, sample, FreeVar, HypersurfacePoint, TraceCoords};
pub use mat3::{cplx, Cplx, Mat3};
pub use par::Exec;
pub use reconstruct::{
    check_relation, enumerate_lifts, is_irreducible, pipeline_from_a, solve_point, LiftSet,
    SolveOpts, SolveReport,
};
pub use rng::SeedStream;
pub use verify::{run_all, SuiteReport};
pub use words::{eval_word, parse_word, word_trace, Word};
