//! The ambient tree, its boundary with the visual metric, exact boundary
//! points, and the Boolean algebra of clopen sets.
//!
//! Distances follow one convention throughout: two ends whose longest common
//! prefix has length `ℓ` are at distance `2^{-ℓ}`.

mod address;
mod clopen;
mod partition;
mod point;
mod typegraph;

pub use address::Address;
pub use clopen::{eventually_periodic_witness, ClopenSet};
pub use partition::Partition;
pub use point::{BoundaryPoint, Radius, VisualDistance};
pub use typegraph::{Tree, TypeGraph, TypeId, MAX_ARITY};

pub(crate) use address::{descendant_range, find_ancestor};
pub(crate) use clopen::{normalize, same_tree};
pub(crate) use partition::check_complete;

/// `d(x, y)`.
pub fn visual_distance(x: &BoundaryPoint, y: &BoundaryPoint) -> VisualDistance {
    VisualDistance::between(x, y)
}

/// `{x | d(x, S) ≤ eps}` as an exact clopen set.
pub fn epsilon_neighborhood(tree: &Tree, points: &[BoundaryPoint], eps: Radius) -> ClopenSet {
    ClopenSet::neighborhood(tree, points, eps)
}
