//! Exact computation in Higman–Thompson groups of locally finite rooted trees.
//!
//! The ambient tree is the unrolling of a finite [`TypeGraph`]. Elements are
//! reduced tree pairs whose leaf identifications are the order-preserving
//! ones, so every [`Element`] acts on the boundary by locally order-preserving
//! homotheties. On top of the group law sit revealing pairs and the dynamical
//! decomposition of single elements ([`revealing`]), finitely generated
//! subgroup tools ([`subgroup`]), and a driver that, for a finitely generated
//! subgroup, produces either a finite orbit or a verified ping-pong pair
//! ([`alternative`]).

pub mod alternative;
pub mod element;
pub mod error;
pub mod format;
pub mod random;
pub mod revealing;
pub mod subgroup;
pub mod treespace;

pub use alternative::{DichotomyResult, PingPongWitness, Verdict};
pub use element::{Element, TreePair};
pub use error::{Error, Result};
pub use revealing::{DynamicsReport, Order, RevealingPair};
pub use subgroup::{Budgets, GeneratingSet, Word};
pub use treespace::{Address, BoundaryPoint, ClopenSet, Partition, Radius, Tree, TypeGraph, VisualDistance};
