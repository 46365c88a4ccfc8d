//! Elements of the Higman–Thompson group of the tree as reduced tree pairs.
//!
//! A tree pair lists domain leaves `u` with their images `κ(u)`; below a
//! leaf the map is the order-preserving identification, so a point `u·w`
//! goes to `κ(u)·w`. Every operation returns the reduced normal form, in
//! which no caret of the domain is sent onto a caret of the range with its
//! children in order.

mod builtin;

use std::fmt;
use std::hash::{Hash, Hasher};

pub use builtin::{builtin_generators, BuiltinFamily};

use crate::error::{Error, Result};
use crate::treespace::{
    check_complete, descendant_range, find_ancestor, normalize, same_tree, Address, BoundaryPoint, ClopenSet,
    Partition, Tree,
};

/// A possibly unreduced tree pair `(κ, T₁, T₂)`, stored as `(u, κ(u))`
/// sorted by domain leaf.
#[derive(Clone)]
pub struct TreePair {
    tree: Tree,
    pairs: Vec<(Address, Address)>,
}

impl PartialEq for TreePair {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs && same_tree(&self.tree, &other.tree)
    }
}

impl Eq for TreePair {}

impl Hash for TreePair {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.pairs.hash(state);
    }
}

impl TreePair {
    /// The one-leaf pair of the identity.
    pub fn trivial(tree: &Tree) -> Self {
        TreePair { tree: tree.clone(), pairs: vec![(Address::root(), Address::root())] }
    }

    /// Builds a pair from leaf lists and `perm`, where domain leaf `i` (in
    /// depth-first order) goes to range leaf `perm[i]`.
    pub fn from_leaves(tree: &Tree, domain: Vec<Address>, range: Vec<Address>, perm: &[usize]) -> Result<Self> {
        let mut domain_sorted = domain.clone();
        domain_sorted.sort();
        let mut range_sorted = range.clone();
        range_sorted.sort();
        if domain_sorted != domain || range_sorted != range {
            return Err(Error::NotComplete("leaves must be listed in depth-first order".into()));
        }
        if perm.len() != domain.len() || domain.len() != range.len() {
            return Err(Error::NotBijective(format!(
                "{} domain leaves, {} range leaves, {} permutation entries",
                domain.len(),
                range.len(),
                perm.len()
            )));
        }
        let mut hit = vec![false; range.len()];
        for &p in perm {
            if p >= range.len() || std::mem::replace(&mut hit[p], true) {
                return Err(Error::NotBijective(format!("permutation entry {p} is out of range or repeated")));
            }
        }
        let pairs = domain.into_iter().zip(perm.iter().map(|&p| range[p].clone())).collect();
        Self::from_pairs(tree, pairs)
    }

    /// Builds a pair from `(u, κ(u))` entries in any order, validating every invariant.
    pub fn from_pairs(tree: &Tree, mut pairs: Vec<(Address, Address)>) -> Result<Self> {
        pairs.sort();
        let domain: Vec<Address> = pairs.iter().map(|p| p.0.clone()).collect();
        check_complete(tree, &domain)?;
        let mut range: Vec<Address> = pairs.iter().map(|p| p.1.clone()).collect();
        range.sort();
        if range.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotBijective("two domain leaves share an image".into()));
        }
        check_complete(tree, &range)?;
        for (u, v) in &pairs {
            let (s, t) = (tree.type_at(u).unwrap(), tree.type_at(v).unwrap());
            if !tree.order_isomorphic(s, t) {
                return Err(Error::IncompatibleLeaves(u.clone(), v.clone()));
            }
        }
        Ok(TreePair { tree: tree.clone(), pairs })
    }

    pub(crate) fn from_sorted_unchecked(tree: &Tree, pairs: Vec<(Address, Address)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        TreePair { tree: tree.clone(), pairs }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn pairs(&self) -> &[(Address, Address)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn domain_leaves(&self) -> Vec<Address> {
        self.pairs.iter().map(|p| p.0.clone()).collect()
    }

    pub fn range_leaves(&self) -> Vec<Address> {
        let mut r: Vec<Address> = self.pairs.iter().map(|p| p.1.clone()).collect();
        r.sort();
        r
    }

    /// `perm[i]` is the depth-first index of the image of domain leaf `i`.
    pub fn perm(&self) -> Vec<usize> {
        let range = self.range_leaves();
        self.pairs.iter().map(|(_, v)| range.binary_search(v).unwrap()).collect()
    }

    pub fn domain_partition(&self) -> Partition {
        Partition::new(&self.tree, self.domain_leaves()).expect("domain of a tree pair is complete")
    }

    pub fn range_partition(&self) -> Partition {
        Partition::new(&self.tree, self.range_leaves()).expect("range of a tree pair is complete")
    }

    /// `κ(u)` for a domain leaf `u`.
    pub fn kappa(&self, u: &Address) -> Option<&Address> {
        self.pairs.binary_search_by(|p| p.0.cmp(u)).ok().map(|i| &self.pairs[i].1)
    }

    pub fn is_domain_leaf(&self, u: &Address) -> bool {
        self.kappa(u).is_some()
    }

    /// Adds the caret at the domain leaf `u` and the caret at `κ(u)`,
    /// matching children in order.
    pub fn expand(&self, u: &Address) -> Result<TreePair> {
        let i = self.pairs.binary_search_by(|p| p.0.cmp(u)).map_err(|_| Error::NotALeaf(u.clone()))?;
        let arity = self.tree.arity_at(u);
        let w = &self.pairs[i].1;
        let mut pairs = Vec::with_capacity(self.pairs.len() + arity - 1);
        pairs.extend_from_slice(&self.pairs[..i]);
        pairs.extend((0..arity).map(|k| (u.child(k), w.child(k))));
        pairs.extend_from_slice(&self.pairs[i + 1..]);
        Ok(TreePair { tree: self.tree.clone(), pairs })
    }

    /// Contracts carets until none is sent in order onto a caret.
    ///
    /// One left-to-right pass with a stack: a caret can only become
    /// contractible when its last child is on top.
    pub fn reduce(&self) -> TreePair {
        let mut stack: Vec<(Address, Address)> = Vec::with_capacity(self.pairs.len());
        for p in &self.pairs {
            stack.push(p.clone());
            loop {
                let Some(v) = stack.last().unwrap().0.parent() else { break };
                let arity = self.tree.arity_at(&v);
                if stack.len() < arity {
                    break;
                }
                let i = stack.len() - arity;
                match contractible_at(&self.tree, &stack, i) {
                    Some((v, w, _)) => {
                        stack.truncate(i);
                        stack.push((v, w));
                    }
                    None => break,
                }
            }
        }
        TreePair { tree: self.tree.clone(), pairs: stack }
    }

    pub fn inverse(&self) -> TreePair {
        let mut pairs: Vec<(Address, Address)> = self.pairs.iter().map(|(u, v)| (v.clone(), u.clone())).collect();
        pairs.sort();
        TreePair { tree: self.tree.clone(), pairs }
    }
}

/// If the entries starting at `i` are the children of a domain vertex `v`,
/// sent in order onto the children of a vertex `w`, returns `(v, w, arity)`.
fn contractible_at(tree: &Tree, pairs: &[(Address, Address)], i: usize) -> Option<(Address, Address, usize)> {
    let (u0, r0) = &pairs[i];
    if u0.last() != Some(0) || r0.last() != Some(0) {
        return None;
    }
    let v = u0.parent()?;
    let w = r0.parent()?;
    let arity = tree.arity_at(&v);
    if tree.arity_at(&w) != arity || i + arity > pairs.len() {
        return None;
    }
    let ok = (0..arity).all(|k| {
        let (u, r) = &pairs[i + k];
        u.depth() == u0.depth()
            && u.last() == Some(k as u8)
            && v.is_prefix_of(u)
            && r.depth() == r0.depth()
            && r.last() == Some(k as u8)
            && w.is_prefix_of(r)
    });
    ok.then_some((v, w, arity))
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::format::write_pair(f, &self.domain_leaves(), &self.range_leaves(), &self.perm())
    }
}

impl fmt::Debug for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An element of the Higman–Thompson group of the tree, in reduced normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    pair: TreePair,
}

impl Element {
    /// Validates and reduces a tree pair.
    pub fn new(pair: TreePair) -> Self {
        Element { pair: pair.reduce() }
    }

    pub fn identity(tree: &Tree) -> Self {
        Element { pair: TreePair::trivial(tree) }
    }

    pub fn from_pairs(tree: &Tree, pairs: Vec<(Address, Address)>) -> Result<Self> {
        Ok(Self::new(TreePair::from_pairs(tree, pairs)?))
    }

    pub fn from_leaves(tree: &Tree, domain: Vec<Address>, range: Vec<Address>, perm: &[usize]) -> Result<Self> {
        Ok(Self::new(TreePair::from_leaves(tree, domain, range, perm)?))
    }

    /// Convenience constructor from address strings; panics on malformed input.
    pub fn from_strs(tree: &Tree, pairs: &[(&str, &str)]) -> Result<Self> {
        let pairs = pairs.iter().map(|(u, v)| (u.parse().unwrap(), v.parse().unwrap())).collect();
        Self::from_pairs(tree, pairs)
    }

    pub fn pair(&self) -> &TreePair {
        &self.pair
    }

    pub fn tree(&self) -> &Tree {
        &self.pair.tree
    }

    /// Number of domain leaves of the reduced pair.
    pub fn size(&self) -> usize {
        self.pair.len()
    }

    pub fn is_identity(&self) -> bool {
        self.pair.pairs.len() == 1 && self.pair.pairs[0].0.is_root() && self.pair.pairs[0].1.is_root()
    }

    fn check(&self, other: &Element) -> Result<()> {
        if same_tree(self.tree(), other.tree()) {
            Ok(())
        } else {
            Err(Error::MixedTrees)
        }
    }

    /// `self ∘ other`, with `other` applied first.
    pub fn compose(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, h: &Element) -> Element {
        let g = self;
        let mut h_by_range: Vec<(&Address, &Address)> = h.pair.pairs.iter().map(|(d, r)| (r, d)).collect();
        h_by_range.sort();
        let gp = &g.pair.pairs;
        let mut out = Vec::with_capacity(h_by_range.len().max(gp.len()));
        let (mut i, mut j) = (0, 0);
        while i < h_by_range.len() && j < gp.len() {
            let (r, hd) = h_by_range[i];
            let (d, gr) = (&gp[j].0, &gp[j].1);
            if r == d {
                out.push((hd.clone(), gr.clone()));
                i += 1;
                j += 1;
            } else if r.is_prefix_of(d) {
                out.push((hd.concat(d.strip(r)), gr.clone()));
                j += 1;
                if j == gp.len() || !r.is_prefix_of(&gp[j].0) {
                    i += 1;
                }
            } else {
                debug_assert!(d.is_prefix_of(r));
                out.push((hd.clone(), gr.concat(r.strip(d))));
                i += 1;
                if i == h_by_range.len() || !d.is_prefix_of(h_by_range[i].0) {
                    j += 1;
                }
            }
        }
        out.sort();
        Element::new(TreePair::from_sorted_unchecked(self.tree(), out))
    }

    pub fn inverse(&self) -> Element {
        Element { pair: self.pair.inverse() }
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> Element {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Element::identity(self.tree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose_unchecked(&base);
            }
        }
        acc
    }

    /// Conjugate `c ∘ self ∘ c⁻¹`.
    pub fn conjugate_by(&self, c: &Element) -> Result<Element> {
        Ok(c.compose(self)?.compose_unchecked(&c.inverse()))
    }

    /// Adds the caret at domain leaf `u` and at its image; same homeomorphism.
    pub fn expand(&self, u: &Address) -> Result<TreePair> {
        self.pair.expand(u)
    }

    /// The domain leaf whose ball contains `x`.
    pub fn domain_leaf_of(&self, x: &BoundaryPoint) -> &Address {
        let max = self.pair.pairs.iter().map(|p| p.0.depth()).max().unwrap_or(0);
        let i = find_ancestor(&self.pair.pairs, |p| &p.0, &x.truncate(max)).expect("domain leaves cover the boundary");
        &self.pair.pairs[i].0
    }

    /// Exact image of a boundary point.
    pub fn apply_point(&self, x: &BoundaryPoint) -> BoundaryPoint {
        let u = self.domain_leaf_of(x);
        let v = self.pair.kappa(u).unwrap();
        x.shift(u.depth()).prepend(v)
    }

    /// Homothety exponent on the ball of domain leaf `u`: distances there are
    /// multiplied by `2^{|u| - |κ(u)|}`.
    pub fn ratio_exponent(&self, u: &Address) -> Option<i64> {
        self.pair.kappa(u).map(|v| u.depth() as i64 - v.depth() as i64)
    }

    /// Image of a ball: a single ball when `v` lies below a domain leaf.
    pub fn apply_ball(&self, v: &Address) -> Option<Address> {
        find_ancestor(&self.pair.pairs, |p| &p.0, v).map(|i| {
            let (u, w) = &self.pair.pairs[i];
            w.concat(v.strip(u))
        })
    }

    /// Exact image of a clopen set.
    pub fn apply_clopen(&self, c: &ClopenSet) -> Result<ClopenSet> {
        if !same_tree(self.tree(), c.tree()) {
            return Err(Error::MixedTrees);
        }
        Ok(self.apply_clopen_unchecked(c))
    }

    pub(crate) fn apply_clopen_unchecked(&self, c: &ClopenSet) -> ClopenSet {
        let mut out = Vec::with_capacity(c.len());
        for a in c.balls() {
            match self.apply_ball(a) {
                Some(img) => out.push(img),
                None => {
                    for (_, w) in &self.pair.pairs[descendant_range(&self.pair.pairs, |p| &p.0, a)] {
                        out.push(w.clone());
                    }
                }
            }
        }
        ClopenSet::from_valid(self.tree(), out)
    }

    /// Image of a partition whose balls each lie below a domain leaf.
    pub fn apply_partition(&self, p: &Partition) -> Option<Partition> {
        let leaves = p.leaves().iter().map(|v| self.apply_ball(v)).collect::<Option<Vec<_>>>()?;
        Some(Partition::new(self.tree(), leaves).expect("image of a partition is a partition"))
    }

    /// The identity map, restricted to the points not in `c`, extended by `self` on `c`.
    /// Requires `self(c) = c`.
    pub(crate) fn patch_identity_outside(&self, c: &ClopenSet) -> Element {
        let tree = self.tree();
        let mut pairs = Vec::new();
        for a in c.balls() {
            match self.apply_ball(a) {
                Some(img) => pairs.push((a.clone(), img)),
                None => {
                    for (u, w) in &self.pair.pairs[descendant_range(&self.pair.pairs, |p| &p.0, a)] {
                        pairs.push((u.clone(), w.clone()));
                    }
                }
            }
        }
        for b in c.complement().balls() {
            pairs.push((b.clone(), b.clone()));
        }
        pairs.sort();
        debug_assert!({
            let mut r: Vec<Address> = pairs.iter().map(|p| p.1.clone()).collect();
            r.sort();
            normalize(tree, r) == vec![Address::root()]
        });
        Element::new(TreePair::from_sorted_unchecked(tree, pairs))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pair)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pair)
    }
}
