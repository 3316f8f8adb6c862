//! Factored state/action spaces, DDN structure, partial assignments, and
//! ground-truth MMDPs.
//!
//! States and actions are vectors of dense 0-based factor values. The joint
//! spaces are never materialized: everything addresses small per-factor
//! parent domains through mixed-radix encodings (last listed variable varies
//! fastest).

mod assignment;
mod ddn;
mod mmdp;
mod space;

pub use assignment::{PartialAssignment, Var};
pub use ddn::{DdnStructure, FactorDeps};
pub use mmdp::{FactorTable, GroundTruthMmdp};
pub use space::{mixed_radix_decode, mixed_radix_encode, FactorSpace, JointAction, JointState};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("factor {index} has size {size}; every factor needs at least one value")]
    EmptyFactor { index: usize, size: usize },
    #[error("factor index {index} out of range (space has {len} factors)")]
    FactorOutOfRange { index: usize, len: usize },
    #[error("value {value} out of range for {var:?} (size {size})")]
    ValueOutOfRange { var: Var, value: usize, size: usize },
    #[error("conflicting binding for {var:?}: {existing} vs {new}")]
    ConflictingBinding { var: Var, existing: usize, new: usize },
    #[error("parent list for state factor {factor} must be sorted and duplicate-free")]
    UnsortedParents { factor: usize },
    #[error("state factor {factor} declares {got} state-parent lists, expected {expected} (one per action-parent configuration)")]
    ConfigCountMismatch { factor: usize, got: usize, expected: usize },
    #[error("table for state factor {factor}, action configuration {config} has {got} entries, expected {expected}")]
    TableShapeMismatch { factor: usize, config: usize, got: usize, expected: usize },
    #[error("transition row for state factor {factor} (configuration {config}, offset {offset}) sums to {sum}, expected 1")]
    RowNotNormalized { factor: usize, config: usize, offset: usize, sum: f64 },
    #[error("probability {value} out of [0, 1] for state factor {factor}")]
    BadProbability { factor: usize, value: f64 },
    #[error("discount factor {gamma} outside [0, 1)")]
    BadDiscount { gamma: f64 },
    #[error("assignment does not bind {var:?}, required by factor {factor}")]
    MissingBinding { var: Var, factor: usize },
    #[error("basis domain must be non-empty and reference valid state factors")]
    BadBasis,
}
