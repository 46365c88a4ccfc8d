//! Seeded random elements for test corpora.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::treespace::{Address, Tree};

const ATTEMPTS: usize = 1000;

/// Expands `carets` randomly chosen leaves, starting from the root.
fn random_tree(tree: &Tree, rng: &mut ChaCha8Rng, carets: usize) -> Vec<Address> {
    let mut leaves = vec![Address::root()];
    for _ in 0..carets {
        let i = rng.gen_range(0..leaves.len());
        let v = leaves.swap_remove(i);
        leaves.extend((0..tree.arity_at(&v)).map(|k| v.child(k)));
    }
    leaves.sort();
    leaves
}

/// Grows a second tree until its leaf count is `target`, within `max_carets`.
fn random_tree_with_leaves(tree: &Tree, rng: &mut ChaCha8Rng, target: usize, max_carets: usize) -> Option<Vec<Address>> {
    let mut leaves = vec![Address::root()];
    for _ in 0..=max_carets {
        if leaves.len() == target {
            leaves.sort();
            return Some(leaves);
        }
        if leaves.len() > target {
            return None;
        }
        let i = rng.gen_range(0..leaves.len());
        let v = leaves.swap_remove(i);
        leaves.extend((0..tree.arity_at(&v)).map(|k| v.child(k)));
    }
    None
}

fn by_class(tree: &Tree, leaves: &[Address]) -> BTreeMap<usize, Vec<Address>> {
    let mut m: BTreeMap<usize, Vec<Address>> = BTreeMap::new();
    for l in leaves {
        m.entry(tree.order_class(tree.type_at(l).unwrap())).or_default().push(l.clone());
    }
    m
}

/// A reduced element drawn from pairs of random complete subtrees with at
/// most `size` carets each and a random type-compatible leaf bijection.
/// Deterministic in `seed`. Shapes without a compatible bijection are
/// resampled.
pub fn random_element(tree: &Tree, seed: u64, size: usize) -> Result<Element> {
    if size == 0 {
        return Ok(Element::identity(tree));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let carets = rng.gen_range(1..=size);
        let domain = random_tree(tree, &mut rng, carets);
        let Some(range) = random_tree_with_leaves(tree, &mut rng, domain.len(), size) else {
            continue;
        };
        let dom = by_class(tree, &domain);
        let mut ran = by_class(tree, &range);
        if dom.iter().any(|(c, v)| ran.get(c).map(Vec::len) != Some(v.len())) {
            continue;
        }
        let mut pairs = Vec::with_capacity(domain.len());
        for (c, us) in dom {
            let vs = ran.get_mut(&c).unwrap();
            vs.shuffle(&mut rng);
            pairs.extend(us.into_iter().zip(vs.iter().cloned()));
        }
        return Element::from_pairs(tree, pairs);
    }
    Err(Error::NoCompatiblePair(size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treespace::TypeGraph;

    #[test]
    fn size_zero_is_identity() {
        assert!(random_element(&TypeGraph::binary(), 0, 0).unwrap().is_identity());
    }

    #[test]
    fn deterministic_in_the_seed() {
        let t = TypeGraph::binary();
        for seed in 0..20 {
            let a = random_element(&t, seed, 3).unwrap();
            let b = random_element(&t, seed, 3).unwrap();
            assert_eq!(a.to_string(), b.to_string());
            assert!(a.size() <= 4);
        }
        let distinct: std::collections::HashSet<String> =
            (0..50).map(|s| random_element(&t, s, 3).unwrap().to_string()).collect();
        assert!(distinct.len() > 10);
    }

    #[test]
    fn respects_type_compatibility() {
        let t = TypeGraph::new(
            vec![("a".into(), vec!["a".into(), "b".into()]), ("b".into(), vec!["b".into()])],
            "a",
        )
        .unwrap();
        for seed in 0..20 {
            let g = random_element(&t, seed, 3).unwrap();
            for (u, v) in g.pair().pairs() {
                assert!(t.order_isomorphic(t.type_at(u).unwrap(), t.type_at(v).unwrap()));
            }
        }
    }

    #[test]
    fn other_regular_trees() {
        let t = TypeGraph::regular(2, 3);
        for seed in 0..20 {
            random_element(&t, seed, 6).unwrap();
        }
    }
}
