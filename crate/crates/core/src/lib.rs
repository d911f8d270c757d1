//! Constructive pieces of first uniformly finite homology on finite windows
//! of uniformly locally finite graphs.
//!
//! A [`GraphWindow`] is a finite ball of an infinite graph whose boundary
//! vertices mark where the truncation happened. On top of it live chains,
//! Rips complexes, flow decompositions, cycle-space bases, tree bip bases,
//! end separators and expansion probes.

#![allow(clippy::needless_range_loop)]

pub mod chain;
pub mod cyclespace;
pub mod ends;
pub mod error;
pub mod expansion;
pub mod family;
pub mod flow;
pub mod graph;
pub mod rips;
pub mod scalar;
pub mod trees;
pub mod triad;

pub use chain::{Chain, Simplex};
pub use error::{Error, Result};
pub use family::{build_window, FamilySpec};
pub use graph::{Edge, GraphWindow, VertexKey};
pub use rips::RipsComplex;
pub use scalar::{Coefficient, Ring, Z2};

/// Integer chains.
pub type ZChain = Chain<i64>;
/// Chains mod 2.
pub type Z2Chain = Chain<Z2>;
