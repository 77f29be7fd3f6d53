//! Betti numbers of towers of finite covers.
//!
//! Given a finitely presented group together with a matrix representation
//! into `GL_n(Z_p)`, this crate enumerates the finite quotients obtained by
//! reducing mod `p^i`, induces an equivariant cellular chain complex to each
//! of the resulting finite covers, and computes Betti numbers over `Q` and
//! `F_p` with exact linear algebra. On top of that sit:
//!
//! * limit estimation and error-exponent fitting along the tower ([`tower`]),
//! * a truncation model of the Iwasawa algebra `F_p[[Z_p^d]]` with module
//!   codimension and rank computations ([`iwasawa`]),
//! * Fox calculus, Alexander matrices and linking numbers for link group
//!   presentations and braid closures ([`alexander`]),
//! * the exact rank kernels everything runs on ([`exactla`]).
//!
//! All randomized kernels take explicit seeds and are deterministic given the
//! seed; exact results never depend on it.

pub mod alexander;
pub mod chain;
pub mod config;
pub mod exactla;
pub mod fpgroup;
pub mod io;
pub mod iwasawa;
pub mod perm;
pub mod poly;
pub mod tower;
pub mod word;

pub use config::{Budgets, DEFAULT_SEED};
pub use perm::Perm;
pub use word::Word;

/// Laurent/ordinary multivariate polynomial with `i64` coefficients, the
/// concrete instantiation used throughout the crate.
pub type LaurentPoly = poly::MultiPoly<i64>;

/// Dense univariate polynomial over arbitrary-precision integers.
pub type ZPoly = poly::UniPoly;
