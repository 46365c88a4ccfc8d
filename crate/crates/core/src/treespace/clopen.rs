use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::address::{descendant_range, find_ancestor};
use super::{Address, BoundaryPoint, Radius, Tree, TypeGraph, TypeId};
use crate::error::{Error, Result};

pub(crate) fn same_tree(a: &Tree, b: &Tree) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A clopen subset of the boundary, held as a finite union of balls in
/// canonical normal form: a sorted antichain of addresses that never
/// contains every child of a common parent.
#[derive(Clone)]
pub struct ClopenSet {
    tree: Tree,
    balls: Vec<Address>,
}

impl PartialEq for ClopenSet {
    fn eq(&self, other: &Self) -> bool {
        self.balls == other.balls && same_tree(&self.tree, &other.tree)
    }
}

impl Eq for ClopenSet {}

impl Hash for ClopenSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.balls.hash(state);
    }
}

impl ClopenSet {
    pub fn empty(tree: &Tree) -> Self {
        ClopenSet { tree: tree.clone(), balls: Vec::new() }
    }

    pub fn full(tree: &Tree) -> Self {
        ClopenSet { tree: tree.clone(), balls: vec![Address::root()] }
    }

    pub fn ball(tree: &Tree, v: Address) -> Result<Self> {
        tree.check_address(&v)?;
        Ok(ClopenSet { tree: tree.clone(), balls: vec![v] }.normalized())
    }

    /// Union of the given balls, normalized.
    pub fn from_balls(tree: &Tree, balls: impl IntoIterator<Item = Address>) -> Result<Self> {
        let balls: Vec<Address> = balls.into_iter().collect();
        for b in &balls {
            tree.check_address(b)?;
        }
        Ok(Self::from_valid(tree, balls))
    }

    pub(crate) fn from_valid(tree: &Tree, balls: Vec<Address>) -> Self {
        ClopenSet { tree: tree.clone(), balls }.normalized()
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn balls(&self) -> &[Address] {
        &self.balls
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn is_all(&self) -> bool {
        self.balls.len() == 1 && self.balls[0].is_root()
    }

    fn normalized(mut self) -> Self {
        self.balls = normalize(&self.tree, std::mem::take(&mut self.balls));
        self
    }

    fn check(&self, other: &ClopenSet) -> Result<()> {
        if same_tree(&self.tree, &other.tree) {
            Ok(())
        } else {
            Err(Error::MixedTrees)
        }
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check(other)?;
        Ok(self.union_unchecked(other))
    }

    pub(crate) fn union_unchecked(&self, other: &ClopenSet) -> ClopenSet {
        let mut v = self.balls.clone();
        v.extend_from_slice(&other.balls);
        Self::from_valid(&self.tree, v)
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check(other)?;
        Ok(self.intersect_unchecked(other))
    }

    pub(crate) fn intersect_unchecked(&self, other: &ClopenSet) -> ClopenSet {
        let mut out = Vec::new();
        for a in &self.balls {
            if find_ancestor(&other.balls, |b| b, a).is_some() {
                out.push(a.clone());
            } else {
                out.extend_from_slice(&other.balls[descendant_range(&other.balls, |b| b, a)]);
            }
        }
        Self::from_valid(&self.tree, out)
    }

    pub fn complement(&self) -> ClopenSet {
        let mut out = Vec::new();
        let mut path = Vec::new();
        complement_below(&self.tree, &mut path, self.tree.root_type(), &self.balls, &mut out);
        Self::from_valid(&self.tree, out)
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check(other)?;
        Ok(self.difference_unchecked(other))
    }

    pub(crate) fn difference_unchecked(&self, other: &ClopenSet) -> ClopenSet {
        self.intersect_unchecked(&other.complement())
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        self.check(other)?;
        Ok(self.is_subset_unchecked(other))
    }

    pub(crate) fn is_subset_unchecked(&self, other: &ClopenSet) -> bool {
        // in normal form a ball is covered iff some ball of `other` contains it
        self.balls.iter().all(|a| find_ancestor(&other.balls, |b| b, a).is_some())
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool> {
        self.check(other)?;
        Ok(self.is_disjoint_unchecked(other))
    }

    pub(crate) fn is_disjoint_unchecked(&self, other: &ClopenSet) -> bool {
        self.balls.iter().all(|a| {
            find_ancestor(&other.balls, |b| b, a).is_none() && descendant_range(&other.balls, |b| b, a).is_empty()
        })
    }

    pub fn contains_point(&self, x: &BoundaryPoint) -> bool {
        let max = self.balls.iter().map(Address::depth).max().unwrap_or(0);
        let deep = x.truncate(max);
        find_ancestor(&self.balls, |b| b, &deep).is_some()
    }

    /// The ball of `balls` containing `x`, if any.
    pub fn ball_containing(&self, x: &BoundaryPoint) -> Option<&Address> {
        let max = self.balls.iter().map(Address::depth).max().unwrap_or(0);
        find_ancestor(&self.balls, |b| b, &x.truncate(max)).map(|i| &self.balls[i])
    }

    /// `{x | d(x, points) ≤ eps}`: the union of the balls at the length-`m`
    /// prefixes of the points, for `eps = 2^{-m}`.
    pub fn neighborhood(tree: &Tree, points: &[BoundaryPoint], eps: Radius) -> ClopenSet {
        let m = eps.exponent() as usize;
        Self::from_valid(tree, points.iter().map(|p| p.truncate(m)).collect())
    }

    /// Deterministic sample points, one per ball.
    pub fn witnesses(&self) -> Vec<BoundaryPoint> {
        self.balls.iter().map(|b| eventually_periodic_witness(&self.tree, b)).collect()
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.balls.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "\"{b}\"")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Sorts, removes dominated balls and merges complete sibling families.
pub(crate) fn normalize(tree: &TypeGraph, mut balls: Vec<Address>) -> Vec<Address> {
    balls.sort();
    balls.dedup();
    let mut anti: Vec<Address> = Vec::with_capacity(balls.len());
    for b in balls {
        match anti.last() {
            Some(last) if last.is_prefix_of(&b) => {}
            _ => anti.push(b),
        }
    }
    loop {
        let mut merged = false;
        let mut out = Vec::with_capacity(anti.len());
        let mut i = 0;
        while i < anti.len() {
            let a = &anti[i];
            if a.last() == Some(0) {
                let parent = a.parent().unwrap();
                let arity = tree.arity_at(&parent);
                let complete = i + arity <= anti.len()
                    && (0..arity).all(|k| {
                        let c = &anti[i + k];
                        c.depth() == a.depth() && c.last() == Some(k as u8) && parent.is_prefix_of(c)
                    });
                if complete {
                    out.push(parent);
                    i += arity;
                    merged = true;
                    continue;
                }
            }
            out.push(a.clone());
            i += 1;
        }
        anti = out;
        if !merged {
            return anti;
        }
    }
}

fn complement_below(tree: &TypeGraph, path: &mut Vec<u8>, t: TypeId, balls: &[Address], out: &mut Vec<Address>) {
    if balls.is_empty() {
        out.push(Address::from_digits(path.clone()));
        return;
    }
    if balls[0].depth() == path.len() {
        return;
    }
    let mut rest = balls;
    for (i, &c) in tree.children(t).iter().enumerate() {
        let depth = path.len();
        let n = rest.partition_point(|b| b.digits()[depth] == i as u8);
        path.push(i as u8);
        complement_below(tree, path, c, &rest[..n], out);
        path.pop();
        rest = &rest[n..];
    }
}

/// The point reached from `ball` by always descending to the least child
/// until the sequence of types repeats.
pub fn eventually_periodic_witness(tree: &TypeGraph, ball: &Address) -> BoundaryPoint {
    let mut t = tree.type_at(ball).expect("address outside the tree");
    let mut seen = vec![usize::MAX; tree.num_types()];
    let mut steps = 0usize;
    while seen[t] == usize::MAX {
        seen[t] = steps;
        t = tree.child_type(t, 0);
        steps += 1;
    }
    let pre = seen[t];
    let mut prefix = ball.digits().to_vec();
    prefix.extend(std::iter::repeat_n(0u8, pre));
    BoundaryPoint::new(prefix, vec![0u8; steps - pre])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(tree: &Tree, balls: &[&str]) -> ClopenSet {
        ClopenSet::from_balls(tree, balls.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn complement_and_merge() {
        let t = TypeGraph::binary();
        assert_eq!(set(&t, &["0"]).complement(), set(&t, &["1"]));
        assert_eq!(set(&t, &["00", "01"]), set(&t, &["0"]));
        assert!(set(&t, &["0", "1"]).is_all());
        assert!(set(&t, &["0"]).complement().complement() == set(&t, &["0"]));
        assert_eq!(set(&t, &["010"]).complement(), set(&t, &["00", "011", "1"]));
    }

    #[test]
    fn membership_and_neighborhoods() {
        let t = TypeGraph::binary();
        let one: BoundaryPoint = "(1)".parse().unwrap();
        assert!(set(&t, &["11"]).contains_point(&one));
        assert!(!set(&t, &["10"]).contains_point(&one));
        assert_eq!(ClopenSet::neighborhood(&t, std::slice::from_ref(&one), Radius(2)), set(&t, &["11"]));
        let both = ["(0)".parse().unwrap(), one];
        assert!(ClopenSet::neighborhood(&t, &both, Radius(0)).is_all());
        assert!(ClopenSet::neighborhood(&t, &[], Radius(3)).is_empty());
    }

    #[test]
    fn set_algebra() {
        let t = TypeGraph::binary();
        let a = set(&t, &["0", "11"]);
        let b = set(&t, &["01", "1"]);
        assert_eq!(a.intersect(&b).unwrap(), set(&t, &["01", "11"]));
        assert_eq!(a.union(&b).unwrap(), ClopenSet::full(&t));
        assert_eq!(a.difference(&b).unwrap(), set(&t, &["00"]));
        assert!(set(&t, &["01"]).is_subset(&a).unwrap());
        assert!(!b.is_subset(&a).unwrap());
        let other = TypeGraph::regular(3, 3);
        assert_eq!(a.union(&ClopenSet::full(&other)).unwrap_err(), Error::MixedTrees);
    }

    #[test]
    fn arity_one_vertices_merge() {
        let g = TypeGraph::new(
            vec![("a".into(), vec!["a".into(), "b".into()]), ("b".into(), vec!["b".into()])],
            "a",
        )
        .unwrap();
        assert_eq!(set(&g, &["10"]), set(&g, &["1"]));
        assert_eq!(set(&g, &["1"]).complement(), set(&g, &["0"]));
    }

    #[test]
    fn witnesses() {
        let t = TypeGraph::binary();
        assert_eq!(eventually_periodic_witness(&t, &"01".parse().unwrap()).to_string(), "01(0)^inf");
        assert_eq!(eventually_periodic_witness(&t, &Address::root()).to_string(), "(0)^inf");
        let g = TypeGraph::new(
            vec![("a".into(), vec!["a".into(), "b".into()]), ("b".into(), vec!["b".into()])],
            "a",
        )
        .unwrap();
        assert_eq!(eventually_periodic_witness(&g, &Address::root()).to_string(), "(0)^inf");
        // a:[b], b:[a] cycles with period 2 in types but 1 in digits
        let h = TypeGraph::new(
            vec![("a".into(), vec!["b".into(), "a".into()]), ("b".into(), vec!["a".into(), "b".into()])],
            "a",
        )
        .unwrap();
        let w = eventually_periodic_witness(&h, &"1".parse().unwrap());
        assert_eq!(w.to_string(), "1(0)^inf");
        assert!(w.validate(&h).is_ok());
    }
}
