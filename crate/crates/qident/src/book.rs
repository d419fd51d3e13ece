//! Doc-test shims for the guide in `book/`: each chapter is included as a
//! rustdoc page so its fenced Rust snippets run under `cargo test --doc` and
//! cannot drift from the library.

#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}

#[doc = include_str!("../../../book/src/q-series.md")]
pub mod q_series {}

#[doc = include_str!("../../../book/src/catalog.md")]
pub mod catalog_guide {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
