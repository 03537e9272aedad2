//! Exact computations with matrix factorizations of polynomial potentials.
//!
//! Everything here works over the rationals with exact arithmetic. The
//! crate is organised bottom-up:
//!
//! * [`poly`]: multivariate polynomials, monomial orders, Buchberger,
//!   quotient rings and Tjurina algebras.
//! * [`linalg`]: exact rational linear algebra (sparse echelon forms,
//!   Bareiss elimination).
//! * [`matrix`]: matrices with polynomial entries.
//! * [`mf`]: matrix factorizations, morphisms, gauge action, duals,
//!   tensor products and the standard example families.
//! * [`bilinear`]: (twisted) quadratic and symplectic structures.
//! * [`homotopy`]: the morphism differential and truncated Ext computation.
//! * [`knorrer`]: the Knörrer functor, its square and the versal family of
//!   the node.
//! * [`deform`]: tangent and obstruction dimensions.

pub mod bilinear;
pub mod budget;
mod coords;
pub mod deform;
pub mod error;
pub mod homotopy;
pub mod knorrer;
pub mod linalg;
pub mod matrix;
pub mod mf;
pub mod poly;

pub use budget::Budget;
pub use error::{Error, Result};
pub use matrix::PolyMatrix;
pub use mf::{GaugePair, MatrixFactorization, MorphismPair, Parity, VerificationReport, Violation};
pub use poly::{Monomial, MonomialOrder, Polynomial, Rational, Vars};
