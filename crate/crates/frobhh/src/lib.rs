//! Exact computation of Hochschild cohomology for finite-dimensional
//! Frobenius algebras over prime fields.
//!
//! The library takes an algebra presented by structure constants over
//! `F_p`, finds a Frobenius form, computes the Nakayama automorphism and
//! its eigenspace grading, and then computes Hochschild cohomology
//! dimensions degree by degree, decomposed along the grading. On top of
//! that sit machine checks of the structural identities the whole
//! computation relies on: graded concentration in class zero, the cyclic
//! action on subalgebra cohomology with its invariant dimensions, a family
//! of chain-map and homotopy identities between auxiliary double
//! complexes, and a Hopf-theoretic cross-check of the Nakayama
//! automorphism for Taft algebras.
//!
//! All arithmetic is exact; every verdict is an integer equality or an
//! exact matrix identity over `F_p`.
//!
//! See the `book/` directory for a guided tour; its code snippets compile
//! and run as doctests of this crate.

pub mod action;
pub mod algebra;
pub mod complexes;
mod error;
pub mod field;
pub mod frobenius;
pub mod hochschild;
pub mod hopf;
pub mod matrix;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book;
