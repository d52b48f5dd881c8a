//! Symbolic dynamics toolkit: shifts of finite type, flow equivalence
//! invariants, positive equivalence moves, flow codes between cross
//! sections and decision procedures in the mapping class group.

pub mod cocycle;
pub mod error;
pub mod fixtures;
pub mod flowcode;
pub mod graph;
pub mod invariants;
pub mod matrix;
pub mod mcg;
pub mod poseq;
pub mod schema;
pub mod section;
pub mod sft;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use sft::{AdjacencyMatrix, EdgeShift, PeriodicPoint, Word};
