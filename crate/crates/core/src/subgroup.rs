//! Finitely generated subgroups: words, shortlex enumeration, finite
//! closures, common admissible partitions, orbits, and restriction to
//! invariant clopen sets.

use std::collections::{HashMap, HashSet, VecDeque};

use serde_json::{json, Value};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::revealing::{is_elliptic, lcm, order, Order};
use crate::treespace::{same_tree, BoundaryPoint, ClopenSet, Partition, Tree};

/// A generator or its inverse. Letters are ordered `g₀, g₀⁻¹, g₁, g₁⁻¹, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// A word `a₁ a₂ ⋯ a_k`, denoting `a₁ ∘ a₂ ∘ ⋯ ∘ a_k` (so `a_k` acts first).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn then(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).freely_reduced()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, n: u64) -> Word {
        let mut v = Vec::with_capacity(self.0.len() * n as usize);
        for _ in 0..n {
            v.extend_from_slice(&self.0);
        }
        Word(v).freely_reduced()
    }

    pub fn freely_reduced(self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for l in self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn evaluate(&self, set: &GeneratingSet) -> Element {
        self.0
            .iter()
            .rev()
            .fold(Element::identity(set.tree()), |acc, &l| set.letter_element(l).compose_unchecked(&acc))
    }

    /// Space-separated letters, `name^-1` for inverses, `id` for the empty word.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "id".into();
        }
        self.0
            .iter()
            .map(|l| if l.inverse { format!("{}^-1", names[l.generator]) } else { names[l.generator].clone() })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Inverse of [`Word::render`].
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let text = text.trim();
        if text == "id" {
            return Ok(Word::empty());
        }
        let mut v = Vec::new();
        for tok in text.split_whitespace() {
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let generator = names
                .iter()
                .position(|n| n == name)
                .ok_or(Error::Parse { pos: 0, msg: format!("unknown generator `{name}`") })?;
            v.push(Letter { generator, inverse });
        }
        Ok(Word(v))
    }
}

/// Named generators over one tree.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    tree: Tree,
    names: Vec<String>,
    generators: Vec<Element>,
    inverses: Vec<Element>,
}

impl GeneratingSet {
    pub fn new(names: Vec<String>, generators: Vec<Element>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyGeneratingSet)?;
        let tree = first.tree().clone();
        if generators.iter().any(|g| !same_tree(&tree, g.tree())) {
            return Err(Error::MixedTrees);
        }
        if names.len() != generators.len() {
            return Err(Error::Parse { pos: 0, msg: "one name per generator".into() });
        }
        let inverses = generators.iter().map(Element::inverse).collect();
        Ok(GeneratingSet { tree, names, generators, inverses })
    }

    /// Generators named `g0, g1, …`.
    pub fn from_elements(generators: Vec<Element>) -> Result<Self> {
        let names = (0..generators.len()).map(|i| format!("g{i}")).collect();
        Self::new(names, generators)
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn letter_element(&self, l: Letter) -> &Element {
        if l.inverse {
            &self.inverses[l.generator]
        } else {
            &self.generators[l.generator]
        }
    }

    /// All letters in enumeration order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).flat_map(|generator| {
            [false, true].into_iter().map(move |inverse| Letter { generator, inverse })
        })
    }
}

/// Search limits. Exceeding one is reported as a value, never as an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub word_length: usize,
    pub orbit_size: usize,
    pub expansion_depth: usize,
    pub dovetail_steps: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { word_length: 8, orbit_size: 512, expansion_depth: 12, dovetail_steps: 10_000 }
    }
}

impl Budgets {
    pub fn to_json(&self) -> Value {
        json!({
            "word_length": self.word_length,
            "orbit_size": self.orbit_size,
            "expansion_depth": self.expansion_depth,
            "dovetail_steps": self.dovetail_steps,
        })
    }
}

/// Lazy shortlex enumeration of the distinct elements of `⟨S⟩` with their
/// least words. Each element is yielded once, with the shortlex-least word.
pub struct Enumerator<'a> {
    set: &'a GeneratingSet,
    max_length: usize,
    seen: HashSet<Element>,
    queue: VecDeque<(Word, Element)>,
}

impl<'a> Iterator for Enumerator<'a> {
    type Item = (Word, Element);

    fn next(&mut self) -> Option<(Word, Element)> {
        let (w, e) = self.queue.pop_front()?;
        if w.len() < self.max_length {
            for l in self.set.letters() {
                let child = e.compose_unchecked(self.set.letter_element(l));
                if self.seen.insert(child.clone()) {
                    let mut v = w.0.clone();
                    v.push(l);
                    self.queue.push_back((Word(v), child));
                }
            }
        }
        Some((w, e))
    }
}

pub fn enumerate_elements(set: &GeneratingSet, max_length: usize) -> Enumerator<'_> {
    let id = Element::identity(set.tree());
    Enumerator {
        set,
        max_length,
        seen: HashSet::from([id.clone()]),
        queue: VecDeque::from([(Word::empty(), id)]),
    }
}

#[derive(Debug, Clone)]
pub enum EllipticCheck {
    /// Every element up to the word-length budget is elliptic.
    AllElliptic { checked: usize },
    Witness(Word, Element),
}

pub fn all_elliptic_or_witness(set: &GeneratingSet, max_length: usize) -> EllipticCheck {
    let mut checked = 0;
    for (w, e) in enumerate_elements(set, max_length) {
        if !is_elliptic(&e) {
            return EllipticCheck::Witness(w, e);
        }
        checked += 1;
    }
    EllipticCheck::AllElliptic { checked }
}

/// A finite group with its elements, their least words, and right
/// multiplication by letters: `edges[i][j]` is the index of
/// `elements[i] ∘ letter_j`, letters in enumeration order.
#[derive(Debug, Clone)]
pub struct GroupClosure {
    pub elements: Vec<Element>,
    pub words: Vec<Word>,
    pub edges: Vec<Vec<usize>>,
}

impl GroupClosure {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.contains(e)
    }

    /// Exponent of the group: lcm of the element orders.
    pub fn exponent(&self) -> u64 {
        self.elements.iter().fold(1, |acc, e| match order(e) {
            Order::Finite(n) => lcm(acc, n),
            Order::Infinite => unreachable!("element of a finite group"),
        })
    }
}

/// The whole group `⟨S⟩` if it has at most `bound` elements.
pub fn finite_closure(set: &GeneratingSet, bound: usize) -> Option<GroupClosure> {
    let id = Element::identity(set.tree());
    let mut index: HashMap<Element, usize> = HashMap::from([(id.clone(), 0)]);
    let mut elements = vec![id];
    let mut words = vec![Word::empty()];
    let mut edges = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut row = Vec::with_capacity(2 * set.len());
        for l in set.letters() {
            let child = elements[i].compose_unchecked(set.letter_element(l));
            let j = match index.get(&child) {
                Some(&j) => j,
                None => {
                    if elements.len() == bound {
                        return None;
                    }
                    let mut w = words[i].0.clone();
                    w.push(l);
                    index.insert(child.clone(), elements.len());
                    elements.push(child);
                    words.push(Word(w));
                    elements.len() - 1
                }
            };
            row.push(j);
        }
        edges.push(row);
        i += 1;
    }
    Some(GroupClosure { elements, words, edges })
}

/// The coarsest partition refining every domain partition of the group and
/// mapped to itself by every element.
pub fn common_admissible_partition(group: &GroupClosure) -> Partition {
    let mut p = group.elements[0].pair().domain_partition();
    for e in &group.elements[1..] {
        p = p.refine(&e.pair().domain_partition()).expect("one tree");
    }
    loop {
        let mut q = p.clone();
        for e in &group.elements {
            let image = e.apply_partition(&q).expect("partition refines every domain partition");
            q = q.refine(&image).expect("one tree");
        }
        if q == p {
            return p;
        }
        p = q;
    }
}

/// Whether `p` is admissible for `e` and mapped onto itself.
pub fn is_admissible_invariant(p: &Partition, e: &Element) -> bool {
    e.apply_partition(p).is_some_and(|q| q == *p)
}

/// A finite orbit in breadth-first order; `words[i]` maps the starting point to `points[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub points: Vec<BoundaryPoint>,
    pub words: Vec<Word>,
}

impl Orbit {
    pub fn sorted_points(&self) -> Vec<BoundaryPoint> {
        let mut v = self.points.clone();
        v.sort();
        v
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        json!({
            "points": self.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "words": self.words.iter().map(|w| w.render(names)).collect::<Vec<_>>(),
        })
    }
}

/// The orbit of `x` under `⟨S⟩` if it has at most `bound` points.
pub fn orbit(x: &BoundaryPoint, set: &GeneratingSet, bound: usize) -> Option<Orbit> {
    let mut index: HashSet<BoundaryPoint> = HashSet::from([x.clone()]);
    let mut points = vec![x.clone()];
    let mut words = vec![Word::empty()];
    let mut i = 0;
    while i < points.len() {
        for l in set.letters() {
            let y = set.letter_element(l).apply_point(&points[i]);
            if index.insert(y.clone()) {
                if points.len() == bound {
                    return None;
                }
                let mut w = vec![l];
                w.extend_from_slice(&words[i].0);
                points.push(y);
                words.push(Word(w));
            }
        }
        i += 1;
    }
    Some(Orbit { points, words })
}

/// Whether the finite set `points` is mapped into itself by every generator and inverse.
pub fn is_invariant_set(points: &[BoundaryPoint], set: &GeneratingSet) -> bool {
    let members: HashSet<&BoundaryPoint> = points.iter().collect();
    points.iter().all(|p| set.letters().all(|l| members.contains(&set.letter_element(l).apply_point(p))))
}

/// The map induced by an element on an invariant clopen set `W`, stored as
/// its extension by the identity off `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedElement {
    support: ClopenSet,
    extended: Element,
}

impl RestrictedElement {
    pub fn support(&self) -> &ClopenSet {
        &self.support
    }

    /// The element acting as this one on `W` and as the identity elsewhere.
    pub fn extended(&self) -> &Element {
        &self.extended
    }

    pub fn compose(&self, other: &RestrictedElement) -> Result<RestrictedElement> {
        if self.support != other.support {
            return Err(Error::NotInvariant);
        }
        Ok(RestrictedElement { support: self.support.clone(), extended: self.extended.compose(&other.extended)? })
    }

    pub fn inverse(&self) -> RestrictedElement {
        RestrictedElement { support: self.support.clone(), extended: self.extended.inverse() }
    }

    pub fn is_identity(&self) -> bool {
        self.extended.is_identity()
    }

    pub fn is_elliptic(&self) -> bool {
        is_elliptic(&self.extended)
    }

    pub fn apply_point(&self, x: &BoundaryPoint) -> Option<BoundaryPoint> {
        self.support.contains_point(x).then(|| self.extended.apply_point(x))
    }
}

/// `g` restricted to `w`; fails unless `g(w) = w`.
pub fn restrict(g: &Element, w: &ClopenSet) -> Result<RestrictedElement> {
    if g.apply_clopen(w)? != *w {
        return Err(Error::NotInvariant);
    }
    Ok(RestrictedElement { support: w.clone(), extended: g.patch_identity_outside(w) })
}
