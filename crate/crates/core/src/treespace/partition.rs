use std::fmt;

use super::clopen::{normalize, same_tree};
use super::{Address, Tree};
use crate::error::{Error, Result};

/// A partition of the boundary into finitely many balls: the leaf set of a
/// finite complete rooted subtree, kept in depth-first order.
#[derive(Clone)]
pub struct Partition {
    tree: Tree,
    leaves: Vec<Address>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.leaves == other.leaves && same_tree(&self.tree, &other.tree)
    }
}

impl Eq for Partition {}

impl Partition {
    pub fn trivial(tree: &Tree) -> Self {
        Partition { tree: tree.clone(), leaves: vec![Address::root()] }
    }

    pub fn new(tree: &Tree, mut leaves: Vec<Address>) -> Result<Self> {
        leaves.sort();
        check_complete(tree, &leaves)?;
        Ok(Partition { tree: tree.clone(), leaves })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn leaves(&self) -> &[Address] {
        &self.leaves
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Coarsest common refinement.
    pub fn refine(&self, other: &Partition) -> Result<Partition> {
        if !same_tree(&self.tree, &other.tree) {
            return Err(Error::MixedTrees);
        }
        Ok(Partition { tree: self.tree.clone(), leaves: common_refinement(&self.leaves, &other.leaves) })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.leaves.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "\"{b}\"")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Checks that sorted `leaves` are the leaves of a finite complete subtree.
pub(crate) fn check_complete(tree: &Tree, leaves: &[Address]) -> Result<()> {
    if leaves.is_empty() {
        return Err(Error::NotComplete("no leaves".into()));
    }
    for l in leaves {
        tree.check_address(l)?;
    }
    for w in leaves.windows(2) {
        if w[0].is_prefix_of(&w[1]) {
            return Err(Error::NotComplete(format!("`{}` lies below `{}`", w[1], w[0])));
        }
    }
    let merged = normalize(tree, leaves.to_vec());
    if !(merged.len() == 1 && merged[0].is_root()) {
        return Err(Error::NotComplete("leaf balls do not cover the boundary".into()));
    }
    Ok(())
}

/// Leaves of the union of two complete trees given by sorted leaf sets.
pub(crate) fn common_refinement(a: &[Address], b: &[Address]) -> Vec<Address> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (x, y) = (&a[i], &b[j]);
        if x == y {
            out.push(x.clone());
            i += 1;
            j += 1;
        } else if x.is_prefix_of(y) {
            out.push(y.clone());
            j += 1;
            if j == b.len() || !x.is_prefix_of(&b[j]) {
                i += 1;
            }
        } else {
            debug_assert!(y.is_prefix_of(x));
            out.push(x.clone());
            i += 1;
            if i == a.len() || !y.is_prefix_of(&a[i]) {
                j += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treespace::TypeGraph;

    fn part(t: &Tree, s: &[&str]) -> Result<Partition> {
        Partition::new(t, s.iter().map(|x| x.parse().unwrap()).collect())
    }

    #[test]
    fn completeness() {
        let t = TypeGraph::binary();
        assert!(part(&t, &["00", "01", "1"]).is_ok());
        assert!(part(&t, &["00", "1"]).is_err());
        assert!(part(&t, &["0", "00", "01", "1"]).is_err());
        assert!(part(&t, &["00", "01", "1", "2"]).is_err());
    }

    #[test]
    fn refinement() {
        let t = TypeGraph::binary();
        let a = part(&t, &["0", "10", "11"]).unwrap();
        let b = part(&t, &["00", "01", "1"]).unwrap();
        assert_eq!(a.refine(&b).unwrap(), part(&t, &["00", "01", "10", "11"]).unwrap());
        assert_eq!(a.refine(&Partition::trivial(&t)).unwrap(), a);
    }
}
