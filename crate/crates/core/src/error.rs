use thiserror::Error;

use crate::treespace::Address;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown type name `{0}`")]
    UnknownType(String),
    #[error("type `{0}` has an empty children sequence")]
    EmptyChildren(String),
    #[error("type graph has no types")]
    NoTypes,
    #[error("type graph arity {0} exceeds the supported maximum of 36")]
    ArityTooLarge(usize),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("address `{0}` is not a vertex of the tree")]
    InvalidAddress(Address),
    #[error("boundary point is not an infinite path of the tree: {0}")]
    InvalidPoint(String),
    #[error("operands live over different type graphs")]
    MixedTrees,
    #[error("radius must be a power of 1/2, got `{0}`")]
    BadRadius(String),
    #[error("leaf set is not a finite complete tree: {0}")]
    NotComplete(String),
    #[error("leaf bijection is malformed: {0}")]
    NotBijective(String),
    #[error("leaves {0} and {1} carry subtrees that are not order-isomorphic")]
    IncompatibleLeaves(Address, Address),
    #[error("`{0}` is not a domain leaf")]
    NotALeaf(Address),
    #[error("clopen set is not invariant under the element")]
    NotInvariant,
    #[error("stable sets have nonempty intersection")]
    NonEmptyIntersection,
    #[error("generating set is empty")]
    EmptyGeneratingSet,
    #[error("no type-compatible tree pair exists with at most {0} carets")]
    NoCompatiblePair(usize),
    #[error("search did not terminate within its step limit: {0}")]
    SearchLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
