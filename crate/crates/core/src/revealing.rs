//! Chains of a tree pair, revealing pairs, and the decomposition of the
//! boundary into a stable part `U` and a hyperbolic part `V` for one element.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::element::{Element, TreePair};
use crate::error::{Error, Result};
use crate::format::{clopen_to_json, points_to_json};
use crate::treespace::{descendant_range, Address, BoundaryPoint, ClopenSet, Radius, Tree};

/// Rolling steps tried by [`reveal`] before it falls back to the search.
pub const ROLLING_STEPS: usize = 256;
/// Iterations allowed when looking for the power bound of [`hyp_power_bound`].
pub const HYP_ITERATIONS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainKind {
    Attracting,
    Repelling,
    Periodic,
    Wandering,
    /// Fits none of the four cases; only occurs in non-revealing pairs.
    Unclassified,
}

impl ChainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ChainKind::Attracting => "attracting",
            ChainKind::Repelling => "repelling",
            ChainKind::Periodic => "periodic",
            ChainKind::Wandering => "wandering",
            ChainKind::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A maximal orbit `u₀, …, u_n` of the partial map `κ` on the leaves of
/// both trees. For a periodic chain the vertices list one period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub vertices: Vec<Address>,
    pub kind: ChainKind,
}

impl Chain {
    pub fn first(&self) -> &Address {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Address {
        self.vertices.last().unwrap()
    }

    /// Number of `κ` steps from `u₀` to `u_n`; the period for a periodic chain.
    pub fn steps(&self) -> usize {
        if self.kind == ChainKind::Periodic {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// The periodic points carried by an attracting or repelling chain:
    /// `u_k·s^∞` for `k < n`, where `s` is the path between `u₀` and `u_n`.
    pub fn periodic_points(&self) -> Vec<BoundaryPoint> {
        let s = match self.kind {
            ChainKind::Attracting => self.last().strip(self.first()).to_vec(),
            ChainKind::Repelling => self.first().strip(self.last()).to_vec(),
            _ => return Vec::new(),
        };
        self.vertices[..self.steps()].iter().map(|u| BoundaryPoint::periodic_below(u, &s)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.as_str(),
            "vertices": self.vertices.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn in_tree(sorted_leaves: &[Address], v: &Address) -> bool {
    !descendant_range(sorted_leaves, |a| a, v).is_empty()
}

/// All chains of `p`, ordered by first vertex.
pub fn chains(p: &TreePair) -> Vec<Chain> {
    let domain = p.domain_leaves();
    let range = p.range_leaves();
    let in_range = |u: &Address| range.binary_search(u).is_ok();
    let mut visited: BTreeSet<&Address> = BTreeSet::new();
    let mut out = Vec::new();
    for (u, _) in p.pairs() {
        if in_range(u) {
            continue;
        }
        let mut vertices = vec![u.clone()];
        let mut cur = u;
        while let Some(next) = p.kappa(cur) {
            visited.insert(cur);
            vertices.push(next.clone());
            cur = next;
        }
        let (u0, un) = (&vertices[0], vertices.last().unwrap());
        let kind = if u0.is_proper_prefix_of(un) {
            ChainKind::Attracting
        } else if un.is_proper_prefix_of(u0) {
            ChainKind::Repelling
        } else if !in_tree(&range, u0) && !in_tree(&domain, un) {
            ChainKind::Wandering
        } else {
            ChainKind::Unclassified
        };
        out.push(Chain { vertices, kind });
    }
    for (u, _) in p.pairs() {
        if visited.contains(u) {
            continue;
        }
        let mut vertices = vec![u.clone()];
        visited.insert(u);
        let mut cur = p.kappa(u).unwrap();
        while cur != u {
            visited.insert(cur);
            vertices.push(cur.clone());
            cur = p.kappa(cur).unwrap();
        }
        out.push(Chain { vertices, kind: ChainKind::Periodic });
    }
    out.sort_by(|a, b| a.vertices[0].cmp(&b.vertices[0]));
    out
}

/// Which difference of the two trees a component lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    /// A component of `𝒯₁ ∖ 𝒯₂`; needs a repeller.
    Domain,
    /// A component of `𝒯₂ ∖ 𝒯₁`; needs an attractor.
    Range,
}

/// One connected component of a tree difference, identified by its root
/// vertex, with the repeller or attractor found in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentWitness {
    pub side: Side,
    pub root: Address,
    pub witness: Option<Address>,
}

fn internal_vertices(leaves: &[Address]) -> BTreeSet<Address> {
    let mut out = BTreeSet::new();
    for l in leaves {
        let mut v = l.clone();
        while let Some(p) = v.parent() {
            if !out.insert(p.clone()) {
                break;
            }
            v = p;
        }
    }
    out
}

fn component_root(carets: &BTreeSet<Address>, v: &Address) -> Address {
    let mut v = v.clone();
    while let Some(p) = v.parent().filter(|p| carets.contains(p)) {
        v = p;
    }
    v
}

/// Components of both tree differences with their witnesses. A component is
/// a maximal connected union of carets of one tree missing from the other.
pub fn components(p: &TreePair, chains: &[Chain]) -> Vec<ComponentWitness> {
    let int1 = internal_vertices(&p.domain_leaves());
    let int2 = internal_vertices(&p.range_leaves());
    let mut out = Vec::new();
    for (side, mine, other) in [(Side::Domain, &int1, &int2), (Side::Range, &int2, &int1)] {
        let carets: BTreeSet<Address> = mine.difference(other).cloned().collect();
        let mut found: Vec<(Address, Address)> = Vec::new();
        for c in chains {
            let w = match (side, c.kind) {
                (Side::Domain, ChainKind::Repelling) => c.first(),
                (Side::Range, ChainKind::Attracting) => c.last(),
                _ => continue,
            };
            let parent = w.parent().expect("a repeller or attractor is never the root");
            if carets.contains(&parent) {
                found.push((component_root(&carets, &parent), w.clone()));
            }
        }
        for v in &carets {
            if v.parent().is_some_and(|p| carets.contains(&p)) {
                continue;
            }
            let witness = found.iter().filter(|(r, _)| r == v).map(|(_, w)| w.clone()).min();
            out.push(ComponentWitness { side, root: v.clone(), witness });
        }
    }
    out
}

/// Every component of `𝒯₁ ∖ 𝒯₂` holds a repeller and every component of
/// `𝒯₂ ∖ 𝒯₁` an attractor.
pub fn is_revealing(p: &TreePair) -> bool {
    components(p, &chains(p)).iter().all(|c| c.witness.is_some())
}

/// A revealing tree pair with its chains and component witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevealingPair {
    pub pair: TreePair,
    pub chains: Vec<Chain>,
    pub certificate: Vec<ComponentWitness>,
}

impl RevealingPair {
    /// Classifies `p`; `None` if it is not revealing.
    pub fn from_pair(p: TreePair) -> Option<RevealingPair> {
        let chains = chains(&p);
        let certificate = components(&p, &chains);
        certificate.iter().all(|c| c.witness.is_some()).then_some(RevealingPair { pair: p, chains, certificate })
    }

    pub fn element(&self) -> Element {
        Element::new(self.pair.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pair": self.pair.to_string(),
            "chains": self.chains.iter().map(Chain::to_json).collect::<Vec<_>>(),
            "components": self.certificate.iter().map(|c| json!({
                "side": match c.side { Side::Domain => "domain", Side::Range => "range" },
                "root": c.root.to_string(),
                "witness": c.witness.as_ref().map(|w| w.to_string()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Expands the domain at `v` by the shape of the range tree below `v`.
fn roll(p: &TreePair, v: &Address) -> TreePair {
    let range = p.range_leaves();
    let shape: Vec<Address> = internal_vertices(&range[descendant_range(&range, |a| a, v)])
        .into_iter()
        .filter(|w| v.is_prefix_of(w))
        .collect();
    let mut p = p.clone();
    for w in &shape {
        p = p.expand(w).expect("parents are expanded before children");
    }
    p
}

/// Guided rolling: repeatedly pushes a component lacking its attractor (or
/// repeller, through the inverse pair) along the chain of its root.
/// `None` if no revealing pair is reached within `max_steps`.
pub fn reveal_rolling(g: &Element, max_steps: usize) -> Option<RevealingPair> {
    let mut p = g.pair().clone();
    for _ in 0..=max_steps {
        let ch = chains(&p);
        let comps = components(&p, &ch);
        let Some(bad) = comps.iter().find(|c| c.witness.is_none()) else {
            return Some(RevealingPair { pair: p, chains: ch, certificate: comps });
        };
        p = match bad.side {
            Side::Range => roll(&p, &bad.root),
            Side::Domain => roll(&p.inverse(), &bad.root).inverse(),
        };
    }
    None
}

/// Breadth-first search over simultaneous expansions of the reduced pair.
/// Within a layer the least pair in pair order wins. `None` once more than
/// `max_nodes` pairs have been generated.
pub fn reveal_bfs(g: &Element, max_nodes: usize) -> Option<RevealingPair> {
    // every expansion adds a domain caret, so layers never share a pair
    let mut layer = vec![g.pair().clone()];
    let mut total = 1usize;
    loop {
        if let Some(i) = layer.par_iter().position_first(is_revealing) {
            return RevealingPair::from_pair(layer.swap_remove(i));
        }
        let mut next: Vec<TreePair> = layer
            .par_iter()
            .flat_map_iter(|p| p.domain_leaves().into_iter().map(move |u| p.expand(&u).unwrap()))
            .collect();
        next.par_sort_unstable_by(|a, b| a.pairs().cmp(b.pairs()));
        next.dedup();
        total += next.len();
        if total > max_nodes {
            return None;
        }
        layer = next;
    }
}

/// A revealing pair for `g`: guided rolling, with the exhaustive search as fallback.
pub fn reveal(g: &Element) -> RevealingPair {
    reveal_rolling(g, ROLLING_STEPS)
        .or_else(|| reveal_bfs(g, usize::MAX))
        .expect("every element has a revealing pair")
}

/// Per attracting chain: `(u₀, u_n, steps, e)` with contraction ratio `2^{-e}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorData {
    pub u0: Address,
    pub un: Address,
    pub steps: usize,
    pub ratio_exponent: usize,
}

/// The partition `∂𝒯 = U ⊔ V` of an element with its hyperbolic periodic points.
#[derive(Debug, Clone)]
pub struct DynamicsReport {
    pub revealing: RevealingPair,
    pub u: ClopenSet,
    pub v: ClopenSet,
    pub per_att: Vec<BoundaryPoint>,
    pub per_rep: Vec<BoundaryPoint>,
    /// Hyperbolic periodic points that are isolated; moved from `V` to `U`.
    pub isolated: Vec<BoundaryPoint>,
    /// `g^iso_power` is the identity on `U`.
    pub iso_power: u64,
    pub attractor_data: Vec<AttractorData>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// The shallowest vertex on the path of an isolated point whose ball is that point.
fn singleton_ball(tree: &Tree, x: &BoundaryPoint) -> Address {
    let bound = x.prefix().len() + x.cycle().len() * (tree.num_types() + 1);
    (0..=bound).map(|d| x.truncate(d)).find(|v| tree.is_isolated(v)).expect("point is isolated")
}

fn is_isolated_chain(tree: &Tree, c: &Chain) -> bool {
    c.periodic_points().first().is_some_and(|x| x.is_isolated(tree))
}

pub fn dynamics(g: &Element) -> DynamicsReport {
    dynamics_of(reveal(g))
}

/// The decomposition read off a given revealing pair.
pub fn dynamics_of(rp: RevealingPair) -> DynamicsReport {
    let tree = rp.pair.tree().clone();
    let mut stable = Vec::new();
    let (mut per_att, mut per_rep, mut isolated) = (Vec::new(), Vec::new(), Vec::new());
    let mut iso_power = 1u64;
    let mut attractor_data = Vec::new();
    for c in &rp.chains {
        match c.kind {
            ChainKind::Periodic => {
                stable.extend(c.vertices.iter().cloned());
                iso_power = lcm(iso_power, c.steps() as u64);
            }
            ChainKind::Attracting | ChainKind::Repelling => {
                let pts = c.periodic_points();
                if is_isolated_chain(&tree, c) {
                    stable.extend(pts.iter().map(|x| singleton_ball(&tree, x)));
                    iso_power = lcm(iso_power, c.steps() as u64);
                    isolated.extend(pts);
                } else if c.kind == ChainKind::Attracting {
                    per_att.extend(pts);
                } else {
                    per_rep.extend(pts);
                }
                if c.kind == ChainKind::Attracting {
                    attractor_data.push(AttractorData {
                        u0: c.first().clone(),
                        un: c.last().clone(),
                        steps: c.steps(),
                        ratio_exponent: c.last().depth() - c.first().depth(),
                    });
                }
            }
            _ => {}
        }
    }
    for v in [&mut per_att, &mut per_rep, &mut isolated] {
        v.sort();
        v.dedup();
    }
    let u = ClopenSet::from_balls(&tree, stable).expect("chain vertices lie in the tree");
    let v = u.complement();
    DynamicsReport { revealing: rp, u, v, per_att, per_rep, isolated, iso_power, attractor_data }
}

impl DynamicsReport {
    /// `Per_hyp`: all hyperbolic periodic points in `V`.
    pub fn per_hyp(&self) -> Vec<BoundaryPoint> {
        let mut out: Vec<BoundaryPoint> = self.per_att.iter().chain(&self.per_rep).cloned().collect();
        out.sort();
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "revealing_pair": self.revealing.to_json(),
            "U": clopen_to_json(&self.u),
            "V": clopen_to_json(&self.v),
            "per_att": points_to_json(&self.per_att),
            "per_rep": points_to_json(&self.per_rep),
            "isolated": points_to_json(&self.isolated),
            "iso_power": self.iso_power,
            "attractor_data": self.attractor_data.iter().map(|a| json!({
                "u0": a.u0.to_string(),
                "un": a.un.to_string(),
                "steps": a.steps,
                "ratio": format!("2^-{}", a.ratio_exponent),
            })).collect::<Vec<_>>(),
        })
    }
}

/// One inclusion of the power bound: `g^k(start) ⊆ trap ⊆ target` for all
/// `k ≥ steps`, where `g(trap) ⊆ trap`. `trace[j]` is `g^j(start)`.
#[derive(Debug, Clone)]
pub struct HypSide {
    pub start: ClopenSet,
    pub trap: ClopenSet,
    pub target: ClopenSet,
    pub steps: u64,
    pub trace: Vec<ClopenSet>,
}

impl HypSide {
    /// Re-checks the side against `g` (pass `g⁻¹` for the backward side).
    pub fn check(&self, g: &Element) -> bool {
        let image = g.apply_clopen_unchecked(&self.trap);
        let mut x = self.start.clone();
        for _ in 0..self.steps {
            x = g.apply_clopen_unchecked(&x);
        }
        self.trap.is_subset_unchecked(&self.target) && image.is_subset_unchecked(&self.trap) && x.is_subset_unchecked(&self.trap)
    }

    fn to_json(&self) -> Value {
        json!({
            "start": clopen_to_json(&self.start),
            "trap": clopen_to_json(&self.trap),
            "target": clopen_to_json(&self.target),
            "steps": self.steps,
            "trace": self.trace.iter().map(clopen_to_json).collect::<Vec<_>>(),
        })
    }
}

/// Certificate that `g^k(V ∖ Per_rep^ε) ⊆ Per_att^ε` and
/// `g^{-k}(V ∖ Per_att^ε) ⊆ Per_rep^ε` for every `k ≥ n`.
#[derive(Debug, Clone)]
pub struct HypCertificate {
    pub eps: Radius,
    pub n: u64,
    pub forward: HypSide,
    pub backward: HypSide,
}

impl HypCertificate {
    /// Both inclusions at the power `k`, by direct computation.
    pub fn verify_at(&self, g: &Element, k: u64) -> bool {
        let fwd = g.pow(k as i64).apply_clopen_unchecked(&self.forward.start);
        let bwd = g.pow(-(k as i64)).apply_clopen_unchecked(&self.backward.start);
        fwd.is_subset_unchecked(&self.forward.target) && bwd.is_subset_unchecked(&self.backward.target)
    }

    /// The structural certificate: traps are invariant, inside their targets,
    /// and reached within `n` steps.
    pub fn check(&self, g: &Element) -> bool {
        self.forward.steps <= self.n
            && self.backward.steps <= self.n
            && self.forward.check(g)
            && self.backward.check(&g.inverse())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "eps": self.eps.to_string(),
            "N": self.n,
            "forward": self.forward.to_json(),
            "backward": self.backward.to_json(),
        })
    }
}

/// A `g`-forward-invariant clopen inside `target`: `target` itself if it is
/// invariant, otherwise one ball per step of each attracting cycle, deep
/// enough to sit inside the `2^{-m}` balls of the periodic points.
fn trap(g: &Element, attracting: &[&Chain], target: &ClopenSet, m: usize) -> ClopenSet {
    let tree = g.tree();
    if g.apply_clopen_unchecked(target).is_subset_unchecked(target) {
        return target.clone();
    }
    let mut balls = Vec::new();
    for c in attracting {
        let shallowest = c.vertices[..c.steps()].iter().map(Address::depth).min().unwrap();
        let len = m.saturating_sub(shallowest);
        let s = c.last().strip(c.first()).to_vec();
        let tail = BoundaryPoint::new(Vec::new(), s).truncate(len);
        balls.extend(c.vertices[..c.steps()].iter().map(|u| u.concat(tail.digits())));
    }
    ClopenSet::from_balls(tree, balls).expect("trap balls lie in the tree")
}

fn iterate_into(g: &Element, start: &ClopenSet, trap: &ClopenSet) -> Result<(u64, Vec<ClopenSet>)> {
    let mut trace = vec![start.clone()];
    let mut x = start.clone();
    for j in 0..HYP_ITERATIONS {
        if x.is_subset_unchecked(trap) {
            return Ok((j as u64, trace));
        }
        x = g.apply_clopen_unchecked(&x);
        trace.push(x.clone());
    }
    Err(Error::SearchLimit(format!("orbit of the hyperbolic set did not enter the trap in {HYP_ITERATIONS} steps")))
}

/// The least `N ≥ 1` certified by the trap construction for both inclusions at radius `eps`.
pub fn hyp_power_bound(g: &Element, rep: &DynamicsReport, eps: Radius) -> Result<HypCertificate> {
    let tree = g.tree();
    let m = eps.exponent() as usize;
    if rep.v.is_empty() {
        let empty = ClopenSet::empty(tree);
        let side = HypSide { start: empty.clone(), trap: empty.clone(), target: empty, steps: 0, trace: Vec::new() };
        return Ok(HypCertificate { eps, n: 1, forward: side.clone(), backward: side });
    }
    let att = ClopenSet::neighborhood(tree, &rep.per_att, eps);
    let repel = ClopenSet::neighborhood(tree, &rep.per_rep, eps);
    let inverse_chains = chains(&rep.revealing.pair.inverse());
    let hyperbolic = |c: &&Chain, kind| c.kind == kind && !is_isolated_chain(tree, c);
    let fwd_cycles: Vec<&Chain> = rep.revealing.chains.iter().filter(|c| hyperbolic(c, ChainKind::Attracting)).collect();
    let bwd_cycles: Vec<&Chain> = inverse_chains.iter().filter(|c| hyperbolic(c, ChainKind::Attracting)).collect();
    let ginv = g.inverse();

    let side = |h: &Element, cycles: &[&Chain], target: &ClopenSet, avoid: &ClopenSet| -> Result<HypSide> {
        let start = rep.v.difference_unchecked(avoid);
        let trap = trap(h, cycles, target, m);
        let (steps, trace) = iterate_into(h, &start, &trap)?;
        Ok(HypSide { start, trap, target: target.clone(), steps, trace })
    };
    let forward = side(g, &fwd_cycles, &att, &repel)?;
    let backward = side(&ginv, &bwd_cycles, &repel, &att)?;
    let n = forward.steps.max(backward.steps).max(1);
    Ok(HypCertificate { eps, n, forward, backward })
}

/// Whether `g` permutes the balls of some partition: all chains of its revealing pair are periodic.
pub fn is_elliptic(g: &Element) -> bool {
    reveal(g).chains.iter().all(|c| c.kind == ChainKind::Periodic)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

pub fn order(g: &Element) -> Order {
    let rp = reveal(g);
    if rp.chains.iter().all(|c| c.kind == ChainKind::Periodic) {
        Order::Finite(rp.chains.iter().fold(1, |acc, c| lcm(acc, c.steps() as u64)))
    } else {
        Order::Infinite
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treespace::TypeGraph;

    fn a(s: &str) -> Address {
        s.parse().unwrap()
    }

    fn pt(s: &str) -> BoundaryPoint {
        s.parse().unwrap()
    }

    fn x0(t: &Tree) -> Element {
        Element::from_strs(t, &[("00", "0"), ("01", "10"), ("1", "11")]).unwrap()
    }

    fn sigma(t: &Tree) -> Element {
        Element::from_strs(t, &[("0", "1"), ("1", "0")]).unwrap()
    }

    fn summary(ch: &[Chain]) -> Vec<(Vec<String>, ChainKind)> {
        ch.iter().map(|c| (c.vertices.iter().map(|v| v.to_string()).collect(), c.kind)).collect()
    }

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn chains_of_x0() {
        let t = TypeGraph::binary();
        assert_eq!(
            summary(&chains(x0(&t).pair())),
            vec![
                (strs(&["00", "0"]), ChainKind::Repelling),
                (strs(&["01", "10"]), ChainKind::Wandering),
                (strs(&["1", "11"]), ChainKind::Attracting),
            ]
        );
    }

    #[test]
    fn chains_of_sigma_and_identity() {
        let t = TypeGraph::binary();
        assert_eq!(summary(&chains(sigma(&t).pair())), vec![(strs(&["0", "1"]), ChainKind::Periodic)]);
        let id = Element::identity(&t).expand(&Address::root()).unwrap();
        assert_eq!(
            summary(&chains(&id)),
            vec![(strs(&["0"]), ChainKind::Periodic), (strs(&["1"]), ChainKind::Periodic)]
        );
    }

    #[test]
    fn x0_components_are_rooted_at_chain_ends() {
        let t = TypeGraph::binary();
        let p = x0(&t).pair().clone();
        let comps = components(&p, &chains(&p));
        assert_eq!(
            comps,
            vec![
                ComponentWitness { side: Side::Domain, root: a("0"), witness: Some(a("00")) },
                ComponentWitness { side: Side::Range, root: a("1"), witness: Some(a("11")) },
            ]
        );
        assert!(is_revealing(&p));
        let q = p.expand(&a("01")).unwrap();
        assert!(is_revealing(&q));
        let wandering: Vec<_> = chains(&q).into_iter().filter(|c| c.kind == ChainKind::Wandering).collect();
        assert_eq!(wandering.len(), 2);
    }

    #[test]
    fn reveal_examples() {
        let t = TypeGraph::binary();
        let x = x0(&t);
        assert_eq!(reveal(&x).pair, *x.pair());
        assert_eq!(reveal(&sigma(&t)).pair, *sigma(&t).pair());
        let x2 = x.pow(2);
        for rp in [reveal_rolling(&x2, 64).unwrap(), reveal_bfs(&x2, 100_000).unwrap()] {
            assert!(is_revealing(&rp.pair));
            assert_eq!(rp.element(), x2);
            let d = dynamics_of(rp.clone());
            assert_eq!(d.per_att, vec![pt("(1)")]);
            assert_eq!(d.per_rep, vec![pt("(0)")]);
            let rep = rp.chains.iter().find(|c| c.kind == ChainKind::Repelling).unwrap();
            assert!(a("00").is_prefix_of(rep.first()));
            let att = rp.chains.iter().find(|c| c.kind == ChainKind::Attracting).unwrap();
            assert!(a("11").is_prefix_of(att.last()));
        }
    }

    #[test]
    fn reveal_products_of_generators() {
        let t = TypeGraph::binary();
        let gens: Vec<Element> = crate::element::builtin_generators(&t).unwrap().into_iter().map(|(_, e)| e).collect();
        for a in &gens {
            for b in &gens {
                let g = a.compose(&b.inverse()).unwrap().compose(&gens[0]).unwrap();
                let rp = reveal(&g);
                assert!(is_revealing(&rp.pair));
                assert!(rp.chains.iter().all(|c| c.kind != ChainKind::Unclassified));
                assert_eq!(rp.element(), g);
            }
        }
    }

    #[test]
    fn dynamics_examples() {
        let t = TypeGraph::binary();
        let d = dynamics(&x0(&t));
        assert!(d.u.is_empty());
        assert!(d.v.is_all());
        assert_eq!(d.per_att, vec![pt("(1)")]);
        assert_eq!(d.per_rep, vec![pt("(0)")]);
        assert!(d.isolated.is_empty());
        assert_eq!(d.attractor_data, vec![AttractorData { u0: a("1"), un: a("11"), steps: 1, ratio_exponent: 1 }]);

        let d = dynamics(&sigma(&t));
        assert!(d.u.is_all() && d.v.is_empty() && d.per_hyp().is_empty());
        assert_eq!(d.iso_power, 2);

        let d = dynamics(&Element::identity(&t));
        assert!(d.u.is_all());
        assert_eq!(d.iso_power, 1);
    }

    #[test]
    fn isolated_attractor_moves_to_the_stable_set() {
        // a: [a, r], r: [r]; every ball below a 1-step is a single point
        let t = TypeGraph::new(
            vec![("a".into(), vec!["a".into(), "r".into()]), ("r".into(), vec!["r".into()])],
            "a",
        )
        .unwrap();
        let p = TreePair::from_pairs(&t, vec![(a("0"), a("0")), (a("1"), a("10"))]).unwrap();
        let rp = RevealingPair::from_pair(p).unwrap();
        assert_eq!(summary(&rp.chains)[1], (strs(&["1", "10"]), ChainKind::Attracting));
        let d = dynamics_of(rp);
        assert_eq!(d.isolated, vec![pt("1(0)")]);
        assert!(d.per_att.is_empty());
        assert!(d.u.is_all());
        assert_eq!(d.iso_power, 1);
    }

    #[test]
    fn hyp_bound_for_x0() {
        let t = TypeGraph::binary();
        let x = x0(&t);
        let d = dynamics(&x);
        let c = hyp_power_bound(&x, &d, Radius(2)).unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.forward.trap, ClopenSet::ball(&t, a("11")).unwrap());
        assert_eq!(c.forward.start, ClopenSet::from_balls(&t, [a("01"), a("1")]).unwrap());
        assert_eq!(c.forward.trace[2], ClopenSet::ball(&t, a("11")).unwrap());
        assert!(c.check(&x));
        for k in 2..=5 {
            assert!(c.verify_at(&x, k));
        }
        assert!(!c.verify_at(&x, 1));

        let c = hyp_power_bound(&x, &d, Radius(0)).unwrap();
        assert_eq!(c.n, 1);
        assert!(c.forward.trap.is_all());

        let s = sigma(&t);
        let c = hyp_power_bound(&s, &dynamics(&s), Radius(3)).unwrap();
        assert_eq!(c.n, 1);
    }

    #[test]
    fn ellipticity_and_order() {
        let t = TypeGraph::binary();
        assert!(is_elliptic(&sigma(&t)));
        assert!(!is_elliptic(&x0(&t)));
        assert!(is_elliptic(&Element::identity(&t)));
        assert_eq!(order(&sigma(&t)), Order::Finite(2));
        assert_eq!(order(&x0(&t)), Order::Infinite);
        assert_eq!(order(&Element::identity(&t)), Order::Finite(1));
        // a 3-cycle of the balls 0, 10, 11
        let r = Element::from_strs(&t, &[("0", "10"), ("10", "11"), ("11", "0")]).unwrap();
        assert_eq!(order(&r), Order::Finite(3));
        assert!(r.pow(3).is_identity());
    }
}
