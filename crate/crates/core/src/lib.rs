//! Free structure of factors `X/Y` in free groups.
//!
//! The crate computes free bases of `Y` adapted to free bases of `X` when
//! `X/Y` is abelian (the U-, Z- and restricted U-constructions), the
//! collecting processes that rewrite elements of `X` into those bases,
//! relative basic commutators of weight at most two for a presentation
//! `F/R`, and generating sets for `(R ∩ F')/[R,F]`.
//!
//! Every construction is checked against two classical oracles living in
//! [`subgroup`]: Stallings foldings (membership, index, rank) and Nielsen
//! reduction (independence).

pub mod cli;
pub mod collector;
pub mod commutator;
pub mod constructions;
pub mod error;
pub mod factor_basis;
pub mod lattice;
pub mod lcs;
pub mod multiplicator;
pub mod nilpotent;
pub mod subgroup;
pub mod word;

pub use error::{Error, Result};
pub use word::{Alphabet, Letter, Word};
