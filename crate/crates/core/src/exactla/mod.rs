//! Exact rank kernels.
//!
//! Everything downstream reduces to four primitives:
//!
//! * [`rank_fp`] — rank over a prime field, bit-packed XOR elimination for
//!   `p = 2`, word-arithmetic echelon otherwise;
//! * [`rank_q`] — rational rank of an integer matrix by modular consensus
//!   over random 62-bit primes with a fraction-free confirmation, full
//!   Bareiss elimination below a size threshold;
//! * [`rank_laurent`] — rank of a Laurent-polynomial matrix over the fraction
//!   field `F_p(t_1..t_d)` by evaluation at random points of `F_{p^e}`
//!   (one-sided error, never above the true rank), with a deterministic
//!   exact path for one variable;
//! * [`snf`] — Smith normal form invariant factors of small integer matrices.
//!
//! No floating point anywhere; all randomized paths take explicit seeds.

mod bitmat;
mod dense;
mod field;
mod laurent;
mod ratrank;
mod snf;

pub use bitmat::BitMatrix;
pub use dense::{rank_dense, IntMatrix, PrimeFieldMatrix};
pub use field::{ExtField, FieldOps, PrimeField};
pub use laurent::{LaurentMatrix, LaurentRankParams};
pub use ratrank::{is_prime_u64, random_prime_62};
pub use snf::snf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExactlaError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("field too small: need p^e > {need} for the Schwartz–Zippel margin, got {got}")]
    FieldTooSmall { need: u128, got: u128 },
}

/// Exact rank over `F_p`. Dispatches to the packed `F_2` kernel when `p = 2`.
pub fn rank_fp(m: &PrimeFieldMatrix) -> usize {
    if m.p == 2 {
        BitMatrix::from_prime_field(m).rank()
    } else {
        dense::rank_mod_p(m)
    }
}

/// Exact rank over `Q` of an integer matrix.
///
/// Small matrices get full fraction-free (Bareiss) elimination. Larger ones
/// use the maximum of ranks modulo independent random 62-bit primes; the
/// answer is accepted once two primes agree and a fraction-free elimination
/// of a sampled pivot submatrix confirms the rank lower bound.
pub fn rank_q(m: &IntMatrix, seed: u64, bareiss_threshold: usize) -> usize {
    ratrank::rank_q(m, seed, bareiss_threshold)
}

/// Rank of a Laurent-polynomial matrix over the fraction field
/// `F_p(t_1, .., t_d)`. See [`LaurentMatrix::rank`].
pub fn rank_laurent(
    m: &LaurentMatrix,
    p: u64,
    params: &LaurentRankParams,
) -> Result<usize, ExactlaError> {
    m.rank(p, params)
}
