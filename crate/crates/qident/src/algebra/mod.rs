//! Exact coefficient arithmetic, sparse Laurent polynomials in `{q, a, b}`,
//! rational functions with two equality oracles, and modular evaluation.
//!
//! Everything in this module is immutable after construction; values may be
//! shared freely between threads.

mod expvec;
mod modular;
mod poly;
mod ratfunc;
mod text;

pub use expvec::{ExpVec, Sign, SignedMonomial, SubstMap, Variable};
pub use modular::{
    add_mod, inv_mod, is_prime_u64, mul_mod, neg_mod, pow_mod, sub_mod, FieldPoint, ModEvalError,
    DEFAULT_PRIME,
};
pub use poly::LaurentPoly;
pub use ratfunc::RatFunc;
pub use text::TextError;

use thiserror::Error;

/// Exact rational coefficients. Invariants (reduced form, positive
/// denominator, zero as 0/1) are maintained by `num-rational`.
pub type BigRat = num_rational::BigRational;

/// Arbitrary-precision signed integers.
pub type BigInt = num_bigint::BigInt;

/// Convenience constructor for an integer coefficient.
pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Convenience constructor for a rational coefficient `n/d`.
pub fn rat_frac(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Division by the zero rational function (or a zero denominator).
    #[error("division by the zero rational function")]
    DivisionByZeroFunction,
}
