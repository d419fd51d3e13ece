//! Exact verification of terminating q-hypergeometric summation identities.
//!
//! `qident` is a small computer-algebra kernel specialized for one job: checking
//! summation identities for terminating basic hypergeometric series — together
//! with the telescoping certificates, contiguous relations, induction steps and
//! substitution transports that prove them — over the exact rational-function
//! field in `q`, `a`, `b`.
//!
//! The crate is organized in four layers:
//!
//! * [`algebra`] — sparse Laurent polynomials over arbitrary-precision
//!   rationals, rational functions with a cross-multiplication equality oracle,
//!   and modular evaluation over a large prime field.
//! * [`qseries`] — q-Pochhammer symbols (with the negative-length extension),
//!   terminating `phi` series, q-Catalan and Catalan numbers.
//! * [`catalog`] — a tiny declarative language for identities whose exponents
//!   are affine in `n` and `k`, plus the built-in catalog of identities this
//!   crate ships with.
//! * [`verifier`] — symbolic and randomized-modular checkers and a parallel
//!   suite runner with deterministic output.
//!
//! # Example
//!
//! ```
//! use qident::catalog::builtin_catalog;
//! use qident::verifier::{verify_symbolic, Status};
//!
//! let cat = builtin_catalog();
//! let spec = cat.identity("A1").unwrap();
//! let result = verify_symbolic(cat, spec, 3);
//! assert_eq!(result.status, Status::Pass);
//! ```

pub mod algebra;
pub mod catalog;
pub mod qseries;
pub mod verifier;

#[cfg(doctest)]
mod book;
