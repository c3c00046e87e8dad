//! Construction, verification and classification of nilpotent Leibniz
//! superalgebras with characteristic sequence `(n | m−1, 1)` and nilindex
//! `n+m`.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`] and [`linalg`]: exact and floating ground fields, dense
//!   linear algebra.
//! * [`algebra`]: graded bases, structure tensors and identity checkers.
//! * [`invariants`]: central series, annihilators, Jordan profiles,
//!   characteristic sequences.
//! * [`families`]: the explicit algebras (chain models, families A and B,
//!   the D-map construction).
//! * [`isomorphism`]: closed-form isomorphism conditions, witnesses and
//!   their verification by change of basis.
//! * [`classification`]: normalization operators, canonical descriptors and
//!   the canonicalizer.

pub mod algebra;
pub mod classification;
pub mod error;
pub mod families;
pub mod invariants;
pub mod isomorphism;
pub mod json;
pub mod linalg;
pub mod scalar;

pub use algebra::{GradedBasis, IdentityReport, Parity, SuperAlgebra};
pub use error::{Error, Result};
pub use scalar::{Complex64, Cyclotomic, Rational, Scalar, ScalarKind, Tol};
