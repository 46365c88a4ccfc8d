use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Address;
use crate::error::{Error, Result};

pub type TypeId = usize;

/// Shared handle to an ambient tree. Every clopen set and element carries one.
pub type Tree = Arc<TypeGraph>;

/// Largest supported arity; addresses are written with one base-36 digit per step.
pub const MAX_ARITY: usize = 36;

/// A finite ordered graph whose unrolling from the root type is the ambient
/// locally finite rooted tree. The order of a children sequence is the order
/// on the children of every vertex of that type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeGraph {
    names: Vec<String>,
    children: Vec<Vec<TypeId>>,
    root: TypeId,
    // isomorphism classes of the unrolled subtrees, forgetting child order
    iso_class: Vec<usize>,
    // isomorphism classes respecting child order
    order_class: Vec<usize>,
    // every type reachable from here (itself included) has arity one
    ray: Vec<bool>,
    // every child has this same type
    uniform: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct TypeGraphFile {
    types: BTreeMap<String, Vec<String>>,
    root: String,
}

impl TypeGraph {
    /// Builds and validates a type graph. Type ids follow the order of `types`.
    pub fn new(types: Vec<(String, Vec<String>)>, root: &str) -> Result<Tree> {
        if types.is_empty() {
            return Err(Error::NoTypes);
        }
        let index: HashMap<&str, TypeId> = types
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.as_str(), i))
            .collect();
        let mut children = Vec::with_capacity(types.len());
        for (name, kids) in &types {
            if kids.is_empty() {
                return Err(Error::EmptyChildren(name.clone()));
            }
            if kids.len() > MAX_ARITY {
                return Err(Error::ArityTooLarge(kids.len()));
            }
            let ids = kids
                .iter()
                .map(|k| index.get(k.as_str()).copied().ok_or_else(|| Error::UnknownType(k.clone())))
                .collect::<Result<Vec<_>>>()?;
            children.push(ids);
        }
        let root = *index.get(root).ok_or_else(|| Error::UnknownType(root.to_string()))?;
        let names = types.into_iter().map(|(n, _)| n).collect();
        let iso_class = bisimulation_classes(&children, false);
        let order_class = bisimulation_classes(&children, true);
        let ray = ray_types(&children);
        let uniform = children.iter().enumerate().map(|(t, kids)| kids.iter().all(|&c| c == t)).collect();
        Ok(Arc::new(TypeGraph { names, children, root, iso_class, order_class, ray, uniform }))
    }

    /// The binary tree: one type with two children of the same type.
    pub fn binary() -> Tree {
        Self::regular(2, 2)
    }

    /// The tree whose root has `k` children and all other vertices `d` children.
    pub fn regular(d: usize, k: usize) -> Tree {
        assert!(d >= 1 && k >= 1 && d <= MAX_ARITY && k <= MAX_ARITY);
        if d == k {
            Self::new(vec![("b".into(), vec!["b".into(); d])], "b").unwrap()
        } else {
            Self::new(
                vec![("b".into(), vec!["b".into(); d]), ("r".into(), vec!["b".into(); k])],
                "r",
            )
            .unwrap()
        }
    }

    /// Parses the JSON form `{"types": {name: [child, ...]}, "root": name}`.
    pub fn from_json(text: &str) -> Result<Tree> {
        let file: TypeGraphFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("line {}: {}", e.line(), e),
        })?;
        Self::new(file.types.into_iter().collect(), &file.root)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let types: BTreeMap<String, Vec<String>> = self
            .names
            .iter()
            .zip(&self.children)
            .map(|(n, kids)| (n.clone(), kids.iter().map(|&k| self.names[k].clone()).collect()))
            .collect();
        serde_json::to_value(TypeGraphFile { types, root: self.names[self.root].clone() }).unwrap()
    }

    pub fn root_type(&self) -> TypeId {
        self.root
    }

    pub fn num_types(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, t: TypeId) -> &str {
        &self.names[t]
    }

    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn arity(&self, t: TypeId) -> usize {
        self.children[t].len()
    }

    pub fn child_type(&self, t: TypeId, i: usize) -> TypeId {
        self.children[t][i]
    }

    pub fn children(&self, t: TypeId) -> &[TypeId] {
        &self.children[t]
    }

    /// Type of the vertex at `addr`, or `None` if the path leaves the tree.
    pub fn type_at(&self, addr: &Address) -> Option<TypeId> {
        self.walk(self.root, addr.digits())
    }

    pub fn walk(&self, from: TypeId, path: &[u8]) -> Option<TypeId> {
        let mut t = from;
        for (k, &i) in path.iter().enumerate() {
            if self.uniform[t] {
                let n = self.children[t].len();
                return path[k..].iter().all(|&d| (d as usize) < n).then_some(t);
            }
            t = *self.children[t].get(i as usize)?;
        }
        Some(t)
    }

    pub fn contains(&self, addr: &Address) -> bool {
        self.type_at(addr).is_some()
    }

    pub fn check_address(&self, addr: &Address) -> Result<TypeId> {
        self.type_at(addr).ok_or_else(|| Error::InvalidAddress(addr.clone()))
    }

    /// Arity of the vertex at `addr`. Panics on an address outside the tree.
    pub fn arity_at(&self, addr: &Address) -> usize {
        self.arity(self.type_at(addr).expect("address outside the tree"))
    }

    /// Whether the trees unrolled from `s` and `t` are isomorphic as rooted
    /// trees, children matched by any bijection.
    pub fn subtree_isomorphic(&self, s: TypeId, t: TypeId) -> bool {
        self.iso_class[s] == self.iso_class[t]
    }

    /// Whether the ordered trees unrolled from `s` and `t` are isomorphic
    /// through the order-preserving matching of children.
    pub fn order_isomorphic(&self, s: TypeId, t: TypeId) -> bool {
        self.order_class[s] == self.order_class[t]
    }

    pub fn order_class(&self, t: TypeId) -> usize {
        self.order_class[t]
    }

    /// True iff the subtree below `addr` is a single ray, i.e. its ball is a singleton.
    pub fn is_isolated(&self, addr: &Address) -> bool {
        self.type_at(addr).is_some_and(|t| self.ray[t])
    }

    pub fn is_ray_type(&self, t: TypeId) -> bool {
        self.ray[t]
    }
}

impl fmt::Display for TypeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Coarsest partition of the types such that equivalent types have equivalent
/// child sequences (as sequences when `ordered`, as multisets otherwise).
fn bisimulation_classes(children: &[Vec<TypeId>], ordered: bool) -> Vec<usize> {
    let n = children.len();
    let mut class = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for t in 0..n {
            let mut sig: Vec<usize> = children[t].iter().map(|&c| class[c]).collect();
            if !ordered {
                sig.sort_unstable();
            }
            let fresh = ids.len();
            next[t] = *ids.entry((class[t], sig)).or_insert(fresh);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

fn ray_types(children: &[Vec<TypeId>]) -> Vec<bool> {
    let n = children.len();
    (0..n)
        .map(|start| {
            let mut seen = vec![false; n];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(t) = stack.pop() {
                if children[t].len() != 1 {
                    return false;
                }
                for &c in &children[t] {
                    if !seen[c] {
                        seen[c] = true;
                        stack.push(c);
                    }
                }
            }
            true
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(spec: &[(&str, &[&str])], root: &str) -> Result<Tree> {
        TypeGraph::new(
            spec.iter()
                .map(|(n, k)| (n.to_string(), k.iter().map(|s| s.to_string()).collect()))
                .collect(),
            root,
        )
    }

    // Unrolls `s` and `t` to `depth` levels and compares canonical forms of
    // the truncated trees, children matched by any bijection.
    fn brute_iso(tg: &TypeGraph, s: TypeId, t: TypeId, depth: usize) -> bool {
        fn canon(tg: &TypeGraph, t: TypeId, depth: usize) -> String {
            if depth == 0 {
                return "()".into();
            }
            let mut parts: Vec<String> =
                tg.children(t).iter().map(|&c| canon(tg, c, depth - 1)).collect();
            parts.sort();
            format!("({})", parts.join(""))
        }
        canon(tg, s, depth) == canon(tg, t, depth)
    }

    #[test]
    fn loads_binary_and_t23() {
        let b = TypeGraph::from_json(r#"{"types": {"b": ["b", "b"]}, "root": "b"}"#).unwrap();
        assert_eq!(b.arity(b.root_type()), 2);
        let t = TypeGraph::from_json(r#"{"types": {"r": ["b","b","b"], "b": ["b","b"]}, "root": "r"}"#)
            .unwrap();
        assert_eq!(t.arity(t.root_type()), 3);
        assert_eq!(t.arity_at(&Address::parse("1").unwrap()), 2);
    }

    #[test]
    fn rejects_empty_children_and_unknown_names() {
        let e = TypeGraph::from_json(r#"{"types": {"a": ["a","b"], "b": []}, "root": "a"}"#);
        assert_eq!(e.unwrap_err(), Error::EmptyChildren("b".into()));
        let e = TypeGraph::from_json(r#"{"types": {"a": ["a","c"]}, "root": "a"}"#);
        assert_eq!(e.unwrap_err(), Error::UnknownType("c".into()));
        assert!(matches!(TypeGraph::from_json("{not json"), Err(Error::Parse { .. })));
    }

    #[test]
    fn subtree_isomorphism_examples() {
        let b = TypeGraph::binary();
        assert!(b.subtree_isomorphic(0, 0));

        let g = graph(&[("a", &["a", "b"]), ("b", &["b"])], "a").unwrap();
        assert!(!g.subtree_isomorphic(0, 1));
        assert!(!brute_iso(&g, 0, 1, 2));

        let g = graph(&[("a", &["b", "c"]), ("b", &["c", "c"]), ("c", &["c", "c"])], "a").unwrap();
        assert!(brute_iso(&g, 0, 1, 4));
        assert!(g.subtree_isomorphic(0, 1));
        assert!(g.order_isomorphic(0, 1));
    }

    #[test]
    fn order_matters_only_for_order_isomorphism() {
        // x:[u,v] and y:[v,u] are isomorphic, but not through the ordered matching
        let g = graph(
            &[("x", &["u", "v"]), ("y", &["v", "u"]), ("u", &["u", "u"]), ("v", &["v"])],
            "x",
        )
        .unwrap();
        let (x, y) = (g.type_id("x").unwrap(), g.type_id("y").unwrap());
        assert!(g.subtree_isomorphic(x, y));
        assert!(!g.order_isomorphic(x, y));
        assert!(brute_iso(&g, x, y, 5));
    }

    #[test]
    fn isolated_vertices() {
        let b = TypeGraph::binary();
        assert!(!b.is_isolated(&Address::parse("0110").unwrap()));
        let g = graph(&[("a", &["a", "b"]), ("b", &["b"])], "a").unwrap();
        assert!(g.is_isolated(&Address::parse("1").unwrap()));
        assert!(g.is_isolated(&Address::parse("0010").unwrap()));
        assert!(!g.is_isolated(&Address::root()));
    }
}
