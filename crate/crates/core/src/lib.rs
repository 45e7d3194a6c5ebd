//! Exact verification and construction toolkit for Jones pairs, Nomura
//! algebras, four-weight spin models, and the braid representations and
//! association schemes they produce.
//!
//! Scalars live in a cyclotomic field Q(zeta_N) with exact rational
//! coefficients, or in Complex64 with a global tolerance. Matrices carry
//! their field context; the algebraic machinery on top (one-sided and
//! two-sided Jones pair checks, Nomura algebra computation and duality,
//! spin-model construction and axiom checks, braid word evaluation and
//! the Markov trace identity) is exact in exact mode.

pub mod builtin;
pub mod braid;
pub mod cli;
pub mod endo;
pub mod mat;
pub mod nomura;
pub mod pair;
pub mod sampling;
pub mod scalar;
pub mod spin;
pub mod textio;

pub use mat::Mat;
pub use scalar::{Ctx, Scalar};
