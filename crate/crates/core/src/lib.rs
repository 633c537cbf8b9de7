//! Numerical machinery for the sharp L²–L⁶ extension inequality on the
//! unit circle: Bessel sixfold integrals, convolutions of arc-length
//! measure, spectral evaluation of the multilinear forms `T`, `Ψ`, `Φ`,
//! and verification suites for the inequalities built on them.

pub mod bessel;
pub mod circfun;
pub mod circlegeom;
pub mod error;
pub mod forms;
pub mod oscint;
pub mod quad;
pub mod replab;
pub mod report;
pub mod seqtab;

pub use error::{Error, Result};
