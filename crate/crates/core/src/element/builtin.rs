use super::Element;
use crate::treespace::{Address, Tree};

/// Shape of the tree as recognized by [`builtin_generators`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFamily {
    /// Every vertex has `d` children.
    Regular { d: usize },
    /// The root has `k` children, every other vertex `d`.
    RootedRegular { d: usize, k: usize },
}

/// Detects a tree of the form `T_{d,k}`: all non-root vertices share one
/// order-isomorphism class of arity `d ≥ 2`.
pub fn detect_family(tree: &Tree) -> Option<BuiltinFamily> {
    let root = tree.root_type();
    let first = tree.child_type(root, 0);
    let class = tree.order_class(first);
    let d = tree.arity(first);
    if d < 2 {
        return None;
    }
    // the reachable non-root types are exactly the class of `first`
    let mut stack = tree.children(root).to_vec();
    let mut seen = vec![false; tree.num_types()];
    while let Some(t) = stack.pop() {
        if std::mem::replace(&mut seen[t], true) {
            continue;
        }
        if tree.order_class(t) != class {
            return None;
        }
        stack.extend_from_slice(tree.children(t));
    }
    let k = tree.arity(root);
    if tree.order_class(root) == class {
        Some(BuiltinFamily::Regular { d })
    } else {
        Some(BuiltinFamily::RootedRegular { d, k })
    }
}

fn addr(digits: &[usize]) -> Address {
    Address::from_digits(digits.iter().map(|&d| d as u8).collect())
}

/// Domain leaves of `base` split once at its first child, range leaves split
/// once at its last child, matched in order: the first Thompson generator
/// placed at `base`, identity elsewhere.
fn thompson_move(tree: &Tree, base: &Address) -> Element {
    let d = tree.arity_at(base);
    let mut dom: Vec<Address> = (0..d).map(|k| base.child(0).child(k)).collect();
    dom.extend((1..d).map(|k| base.child(k)));
    let mut ran: Vec<Address> = (0..d - 1).map(|k| base.child(k)).collect();
    ran.extend((0..d).map(|k| base.child(d - 1).child(k)));
    local_map(tree, base, dom.into_iter().zip(ran).collect())
}

/// Completes a map on the subtree below `base` with the identity outside it.
fn local_map(tree: &Tree, base: &Address, mut pairs: Vec<(Address, Address)>) -> Element {
    let mut v = base.clone();
    while let Some(p) = v.parent() {
        for k in 0..tree.arity_at(&p) {
            let c = p.child(k);
            if c != v {
                pairs.push((c.clone(), c));
            }
        }
        v = p;
    }
    Element::from_pairs(tree, pairs).expect("builtin generator is a valid tree pair")
}

fn swap(tree: &Tree, base: &Address, i: usize, j: usize) -> Element {
    let d = tree.arity_at(base);
    let pairs = (0..d)
        .map(|k| {
            let img = if k == i { j } else if k == j { i } else { k };
            (base.child(k), base.child(img))
        })
        .collect();
    local_map(tree, base, pairs)
}

fn rotate(tree: &Tree, base: &Address) -> Element {
    let d = tree.arity_at(base);
    local_map(tree, base, (0..d).map(|k| (base.child(k), base.child((k + 1) % d))).collect())
}

/// A named generating family of the Higman–Thompson group of `tree`.
///
/// * `T_d` (all arities `d`): `x0` is the first Thompson generator at the
///   root, `x1` the same move below the last child of the root, `sigma`
///   swaps the first two children of the root and `tau` the first two
///   children of the last child of the root. On the binary tree these are
///   the usual `x₀, x₁`, the swap of the balls `0, 1` and of `10, 11`.
/// * `T_{d,k}` with `k ≠ d`: `rho` cycles the root children, `sigma` swaps
///   the first two of them, `y` moves one caret from the first root child
///   to the second (or, for `k = 1`, acts as `x0` below the root's child),
///   `x0`/`x1`/`tau` are the `T_d` moves inside the first root child.
///
/// Other trees get an empty family and a diagnostic.
pub fn builtin_generators(tree: &Tree) -> Result<Vec<(String, Element)>, String> {
    match detect_family(tree) {
        None => Err("no built-in generating family: the tree is not of the form T_{d,k}".into()),
        Some(BuiltinFamily::Regular { d }) => {
            let root = Address::root();
            let last = addr(&[d - 1]);
            Ok(vec![
                ("x0".into(), thompson_move(tree, &root)),
                ("x1".into(), thompson_move(tree, &last)),
                ("sigma".into(), swap(tree, &root, 0, 1)),
                ("tau".into(), swap(tree, &last, 0, 1)),
            ])
        }
        Some(BuiltinFamily::RootedRegular { d, k }) => {
            let inner = addr(&[0]);
            let inner_last = addr(&[0, d - 1]);
            let mut gens = Vec::new();
            if k >= 2 {
                gens.push(("rho".into(), rotate(tree, &Address::root())));
                gens.push(("sigma".into(), swap(tree, &Address::root(), 0, 1)));
                // split the first root child, merge the front of the second
                let mut dom: Vec<Address> = (0..d).map(|j| addr(&[0, j])).collect();
                dom.extend((1..k).map(|j| addr(&[j])));
                let mut ran: Vec<Address> = vec![addr(&[0])];
                ran.extend((0..d).map(|j| addr(&[1, j])));
                ran.extend((2..k).map(|j| addr(&[j])));
                let y = Element::from_pairs(tree, dom.into_iter().zip(ran).collect())
                    .expect("cross move is a valid tree pair");
                gens.push(("y".into(), y));
            }
            gens.push(("x0".into(), thompson_move(tree, &inner)));
            gens.push(("x1".into(), thompson_move(tree, &inner_last)));
            gens.push(("tau".into(), swap(tree, &inner, 0, 1)));
            Ok(gens)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treespace::TypeGraph;

    fn get<'a>(g: &'a [(String, Element)], n: &str) -> &'a Element {
        &g.iter().find(|(m, _)| m == n).unwrap().1
    }

    #[test]
    fn binary_family_matches_the_classical_generators() {
        let t = TypeGraph::binary();
        let g = builtin_generators(&t).unwrap();
        assert_eq!(get(&g, "x0").to_string(), "pair{domain=[00, 01, 1], range=[0, 10, 11], perm=[0, 1, 2]}");
        assert_eq!(
            get(&g, "x1").to_string(),
            "pair{domain=[0, 100, 101, 11], range=[0, 10, 110, 111], perm=[0, 1, 2, 3]}"
        );
        assert_eq!(get(&g, "sigma").to_string(), "pair{domain=[0, 1], range=[0, 1], perm=[1, 0]}");
        assert_eq!(get(&g, "tau").to_string(), "pair{domain=[0, 10, 11], range=[0, 10, 11], perm=[0, 2, 1]}");
    }

    #[test]
    fn t23_family() {
        let t = TypeGraph::regular(2, 3);
        let g = builtin_generators(&t).unwrap();
        let names: Vec<&str> = g.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["rho", "sigma", "y", "x0", "x1", "tau"]);
        assert_eq!(get(&g, "y").to_string(), "pair{domain=[00, 01, 1, 2], range=[0, 10, 11, 2], perm=[0, 1, 2, 3]}");
        assert_eq!(get(&g, "rho").pow(3), Element::identity(&t));
    }

    #[test]
    fn irregular_tree_gets_a_diagnostic() {
        let g = TypeGraph::new(
            vec![("a".into(), vec!["a".into(), "b".into()]), ("b".into(), vec!["b".into()])],
            "a",
        )
        .unwrap();
        assert!(builtin_generators(&g).is_err());
    }
}
