//! Finite-scale combinatorial independence for symbolic dynamics.
//!
//! Everything here runs on two-sided subshifts over a finite alphabet:
//! full shifts, shifts of finite type given by forbidden words, and a
//! deterministic generator for a sparse transitive-pair subshift. On top of
//! that base the crate computes exact independence sets and their densities,
//! shattering combinatorics (largest shattered subsets, Karpovsky-Milman
//! thresholds, excluded-symbol cover numbers), partition and cover entropy,
//! l1-equivalence constants via linear programming, and low-rank
//! conditional-expectation approximations, each paired with a brute-force
//! oracle at small scale.
//!
//! All operations are pure functions of their inputs and deterministic,
//! including tie-breaking, so that reports are byte-identical across runs.

pub mod entropy;
pub mod error;
pub mod examples;
pub mod independence;
pub mod l1;
pub mod shattering;
pub mod symbolic;
pub(crate) mod util;

pub use error::{Error, Result};
pub use symbolic::{
    Alphabet, BorelLikeSet, CylinderSet, MeasureModel, Partition, SetTuple, SubshiftKind,
    SubshiftSpec, Window, Word,
};
