//! Computational operator algebra for pairs of projections.
//!
//! Three capabilities, all at desk scale over dense complex matrices:
//!
//! * **Structure decomposition** — split the space acted on by two
//!   orthogonal projections `P`, `Q` into the four corner subspaces where
//!   they commute plus two-dimensional "generic" cells parametrized by
//!   angles on the upper semicircle ([`pair::halmos_decompose`]).
//! * **Index certificates** — the restricted operator `QP: ran P → ran Q`
//!   is Fredholm; its index is computed three independent ways (kernel
//!   ranks, odd trace powers of `P − Q`, and a graded-module trace pairing)
//!   and cross-checked ([`index::index_theorem_check`]).
//! * **Word calculus** — reduced words in `n` symmetries, reduced words in
//!   the rank-`n−1` free group crossed with the generator-inverting
//!   involution, the isomorphism between the two presentations, and
//!   evaluation of abstract words on concrete projection tuples
//!   ([`words`]).
//!
//! The crate is `no_std` (with `alloc`); everything is pure and
//! deterministic, including the seeded instance generators in [`rng`] and
//! [`rep`]. File formats and the command-line front end live in the
//! companion `projcalc-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod eigen;
pub mod error;
pub mod index;
pub mod matrix;
pub mod pair;
pub mod rep;
pub mod rng;
pub mod validate;
pub mod words;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, Scalar};
pub use validate::ToleranceConfig;
