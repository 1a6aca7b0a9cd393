//! Immersion order of punctured 4-manifolds.
//!
//! Exact invariants (twisted group homology, Steenrod squares, James
//! differentials), the `leq` decision engine with order graphs, chain-level
//! lifting checks for cyclic groups, and fibering utilities for two-generator
//! presentations.

pub mod cli;
pub mod cohomology;
pub mod exec;
pub mod fibering;
pub mod groupring;
pub mod intalg;
pub mod james;
pub mod order;
pub mod postnikov;

pub use exec::Execution;
pub use intalg::{FgAbelianGroup, IntMatrix, SmithForm};
