//! Exact solvers for three equivalent sequencing problems: maximum-overhang
//! block stacking (with and without counterweights), airplane refueling, and
//! robust appointment scheduling.
//!
//! All objective values are computed in exact rational arithmetic. The crate
//! provides brute-force oracles, a pruned branch-and-bound, the
//! right-aligned 2-approximation, the Partition gadget used to show hardness
//! of the counterbalanced problem, and every transformation between the three
//! problems.
//!
//! Block orders are always written top to bottom and airplane orders first to
//! drop first. Indices are zero-based in the library; the command-line
//! surface uses one-based indices.

pub mod airplane;
pub mod appointment;
pub mod cli;
pub mod error;
pub mod perm;
pub mod rational;
pub mod reductions;
pub mod solvers;
pub mod stack;

pub use error::{Error, Result};
pub use rational::Rational;
