//! Functional calculus, operator means, entropy-like perspectives and a
//! margin-reporting inequality verification harness for accretive
//! (sectorial) matrices.
//!
//! An accretive matrix has positive definite Hermitian part; its numerical
//! range sits in a sector `|Im z| <= tan(alpha) Re z` of the right
//! half-plane, and the certified half-angle `alpha` controls every constant
//! (`sec^2 alpha`, `cos^2 alpha`, ...) in the inequalities this crate
//! implements and verifies.
//!
//! The pieces:
//!
//! - [`matcore`]: dense complex matrices, Hermitian certification, the
//!   Löwner order with explicit margins.
//! - [`decomp`]: eigendecompositions, SVD-based polar factorization,
//!   principal square roots, inverses.
//! - [`sector`]: sector-angle computation/certification and seeded random
//!   generation of sectorial matrices.
//! - [`matfunc`]: operator-monotone function registry and three independent
//!   routes to `f(A)` (diagonalization, resolvent contour, integral kernel).
//! - [`means`]: operator means, including the quadrature-defined weighted
//!   logarithmic mean.
//! - [`entropy`]: Tsallis/relative operator entropies and perspective
//!   differences.
//! - [`blockwitness`]: 2x2 block positivity, contraction/unitary witnesses,
//!   norm refinement chains.
//! - [`verify`]: the theorem registry; every statement runs as a
//!   margin-reporting randomized check.
//! - [`cli`]: the `accretive` binary (gen/eval/check/fuzz/sharpness).
//!
//! Start with the `examples/` directory: each file demonstrates one
//! capability end to end.

pub mod blockwitness;
pub mod cli;
pub mod decomp;
pub mod entropy;
pub mod error;
pub mod matcore;
pub mod matfunc;
pub mod means;
pub mod quadrature;
pub mod rng;
pub mod sector;
pub mod verify;

pub use error::{Error, Result};
pub use matcore::{CMatrix, HermMatrix, LoewnerVerdict, C};
pub use matfunc::FunctionSpec;
pub use means::{LogmeanConvention, MeanResult, MeanRoute};
pub use sector::SectorMatrix;
pub use verify::{CheckParams, CheckReport, TheoremId, ALL_THEOREMS};
