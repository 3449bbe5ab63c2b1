//! Normalizing permutation groups over the full transformation monoid `T_n`.
//!
//! A group `G <= S_n` is *a-normalizing* for a singular map `a` when
//! `<a, G> \ G` equals the semigroup generated by the `G`-conjugates of `a`,
//! and *normalizing* when that holds for every singular `a`. This crate
//! provides the exact arithmetic on transformations, the permutation-group
//! and transformation-semigroup machinery, and the decision procedures and
//! classification driver built on top of them.

pub mod cache;
pub mod catalog;
pub mod error;
pub mod groups;
pub mod normalizing;
pub mod parse;
pub mod semigroups;
pub mod transform;

pub use error::{Error, Result};
pub use groups::PermutationGroup;
pub use semigroups::TransSemigroup;
pub use transform::{KernelPartition, Permutation, PointSet, Transformation, MAX_DEGREE};
