//! Finite orbit or ping-pong: stable-set intersections, contracting
//! elements, disjointification of finite sets, and the driver that decides
//! which of the two a finitely generated subgroup has.

use std::collections::HashSet;
use std::fmt;

use serde_json::{json, Value};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::format::{clopen_from_json, clopen_to_json, parse_element, points_to_json};
use crate::revealing::{dynamics, DynamicsReport};
use crate::subgroup::{
    enumerate_elements, finite_closure, is_invariant_set, orbit, restrict, Budgets, GeneratingSet, Orbit, Word,
};
use crate::treespace::{eventually_periodic_witness, BoundaryPoint, ClopenSet, Radius, Tree};

/// Powers tried per factor by [`proximal_contraction`].
pub const MAX_POWER_STEPS: u64 = 512;

/// `U_g`, the clopen set on which a power of `g` is the identity.
pub fn stable_set(g: &Element) -> ClopenSet {
    dynamics(g).u
}

/// `⋂ U_h`; the whole boundary for an empty list.
pub fn stable_intersection(tree: &Tree, hs: &[Element]) -> Result<ClopenSet> {
    let mut w = ClopenSet::full(tree);
    for h in hs {
        w = w.intersect(&stable_set(h))?;
    }
    Ok(w)
}

/// An element `h` with `h(∂𝒯 ∖ B^ε) ⊆ B^ε`, built as
/// `h_k^{a_k} ∘ ⋯ ∘ h_1^{a_1}` with each `a_j` a multiple of `iso_power(h_j)`.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub h: Element,
    pub b: Vec<BoundaryPoint>,
    pub eps: Radius,
    /// `(j, a_j)` in the order the factors act.
    pub powers: Vec<(usize, u64)>,
    /// `C_1 = ∂𝒯 ∖ B^ε` and `C_{j+1} = h_j^{a_j}(C_j)`.
    pub transcript: Vec<ClopenSet>,
    /// Exponents `m_j`: `C_j ⊆ K_j ∪ B^{2^{-m_j}}`.
    pub radii: Vec<u32>,
}

impl Contraction {
    /// Re-checks `h(∂𝒯 ∖ B^ε) ⊆ B^ε` from scratch.
    pub fn verify(&self) -> bool {
        let tree = self.h.tree();
        let nb = ClopenSet::neighborhood(tree, &self.b, self.eps);
        self.h.apply_clopen_unchecked(&nb.complement()).is_subset_unchecked(&nb)
    }

    /// The word of `h`, given words for the factors.
    pub fn word(&self, factor_words: &[Word]) -> Word {
        self.powers.iter().fold(Word::empty(), |acc, &(j, a)| factor_words[j].pow(a).then(&acc))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "h": self.h.to_string(),
            "B": points_to_json(&self.b),
            "eps": self.eps.to_string(),
            "powers": self.powers.iter().map(|&(j, a)| json!({"factor": j, "power": a})).collect::<Vec<_>>(),
            "radii": self.radii,
            "transcript": self.transcript.iter().map(clopen_to_json).collect::<Vec<_>>(),
        })
    }
}

fn max_depth(c: &ClopenSet) -> usize {
    c.balls().iter().map(|b| b.depth()).max().unwrap_or(0)
}

/// Builds a contracting element from `hs` whose stable sets have empty
/// intersection, for `B = ⋃ Per_hyp(h_j)`.
///
/// Radii are fixed backwards: with `K_1 = ∂𝒯 ∖ B^ε` and
/// `K_{j+1} = K_j ∩ U_j`, the step `j` needs `h_j^{a}(K_j ∪ B^{m_j})` inside
/// `K_{j+1} ∪ B^{m_{j+1}}`, where `m_{k+1}` is the exponent of `ε` and
/// `K_{k+1}` is empty.
pub fn proximal_contraction(hs: &[Element], eps: Radius) -> Result<Contraction> {
    let reports: Vec<DynamicsReport> = hs.iter().map(dynamics).collect();
    proximal_contraction_with(hs, &reports, eps)
}

pub(crate) fn proximal_contraction_with(hs: &[Element], reports: &[DynamicsReport], eps: Radius) -> Result<Contraction> {
    let first = hs.first().ok_or(Error::EmptyGeneratingSet)?;
    let tree = first.tree().clone();
    let mut stable = ClopenSet::full(&tree);
    for (h, r) in hs.iter().zip(reports) {
        if !crate::treespace::same_tree(&tree, h.tree()) {
            return Err(Error::MixedTrees);
        }
        stable = stable.intersect_unchecked(&r.u);
    }
    if !stable.is_empty() {
        return Err(Error::NonEmptyIntersection);
    }
    let mut b: Vec<BoundaryPoint> = reports.iter().flat_map(|r| r.per_hyp()).collect();
    b.sort();
    b.dedup();
    let k = hs.len();
    let nb = |m: u32| ClopenSet::neighborhood(&tree, &b, Radius(m));
    let mut ks = vec![nb(eps.exponent()).complement()];
    for r in reports {
        let next = ks.last().unwrap().intersect_unchecked(&r.u);
        ks.push(next);
    }
    let mut radii = vec![0u32; k + 1];
    radii[k] = eps.exponent();
    let mut powers = vec![0u64; k];
    for j in (0..k).rev() {
        let target = ks[j + 1].union_unchecked(&nb(radii[j + 1]));
        let h = &hs[j];
        let drift = h.pair().pairs().iter().map(|(u, v)| u.depth().abs_diff(v.depth())).max().unwrap_or(0) as u64;
        let mut found = None;
        for t in 1..=MAX_POWER_STEPS {
            let a = reports[j].iso_power * t;
            let ha = h.pow(a as i64);
            if !ha.apply_clopen_unchecked(&ks[j]).is_subset_unchecked(&target) {
                continue;
            }
            let cap = radii[j + 1] as u64 + max_depth(&target) as u64 + a * drift + 64;
            if let Some(r) = (radii[j + 1] as u64..=cap).find(|&r| {
                ha.apply_clopen_unchecked(&nb(r as u32)).is_subset_unchecked(&target)
            }) {
                found = Some((a, r as u32));
                break;
            }
        }
        let (a, r) = found.ok_or_else(|| {
            Error::SearchLimit(format!("no power of factor {j} up to {MAX_POWER_STEPS} iso-power multiples contracts"))
        })?;
        powers[j] = a;
        radii[j] = r;
    }
    let mut h = Element::identity(&tree);
    let mut transcript = vec![ks[0].clone()];
    for j in 0..k {
        let ha = hs[j].pow(powers[j] as i64);
        transcript.push(ha.apply_clopen_unchecked(transcript.last().unwrap()));
        h = ha.compose_unchecked(&h);
    }
    if !transcript.last().unwrap().is_subset_unchecked(&nb(eps.exponent())) {
        return Err(Error::SearchLimit("contraction transcript failed its final inclusion".into()));
    }
    let c = Contraction { h, b, eps, powers: powers.into_iter().enumerate().collect(), transcript, radii };
    debug_assert!(c.verify());
    Ok(c)
}

/// The first enumerated `g` with `g(A) ∩ B = ∅`, within the word-length budget.
pub fn neumann_disjoint(
    set: &GeneratingSet,
    a: &[BoundaryPoint],
    b: &[BoundaryPoint],
    max_length: usize,
) -> Option<(Word, Element)> {
    neumann_greedy(set, a, b, max_length, usize::MAX)
}

/// Greedy variant of [`neumann_disjoint`] for larger sets: composes
/// enumerated elements, each lowering the number of points of `A` that land
/// in `B`, examining at most `max_elements` per round.
fn neumann_greedy(
    set: &GeneratingSet,
    a: &[BoundaryPoint],
    b: &[BoundaryPoint],
    max_length: usize,
    max_elements: usize,
) -> Option<(Word, Element)> {
    let avoid: HashSet<&BoundaryPoint> = b.iter().collect();
    let bad = |pts: &[BoundaryPoint]| pts.iter().filter(|x| avoid.contains(x)).count();
    let mut word = Word::empty();
    let mut g = Element::identity(set.tree());
    let mut image = a.to_vec();
    let mut count = bad(&image);
    while count > 0 {
        let mut best: Option<(usize, Word, Element, Vec<BoundaryPoint>)> = None;
        for (w, k) in enumerate_elements(set, max_length).take(max_elements) {
            let moved: Vec<BoundaryPoint> = image.iter().map(|x| k.apply_point(x)).collect();
            let c = bad(&moved);
            if best.as_ref().map_or(c < count, |b| c < b.0) {
                best = Some((c, w, k, moved));
                if c == 0 {
                    break;
                }
            }
        }
        let (c, w, k, moved) = best?;
        word = w.then(&word);
        g = k.compose_unchecked(&g);
        image = moved;
        count = c;
    }
    Some((word, g))
}

/// Elements `g, h` and clopen sets with `g(X ∖ U₁) ⊆ V₁`,
/// `h(X ∖ U₂) ⊆ V₂`, the four sets pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PingPongWitness {
    pub g: Element,
    pub h: Element,
    pub u1: ClopenSet,
    pub u2: ClopenSet,
    pub v1: ClopenSet,
    pub v2: ClopenSet,
    pub g_word: Word,
    pub h_word: Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PingPongFailure {
    Disjointness,
    Inclusion1,
    Inclusion2,
}

impl fmt::Display for PingPongFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PingPongFailure::Disjointness => "disjointness",
            PingPongFailure::Inclusion1 => "inclusion 1",
            PingPongFailure::Inclusion2 => "inclusion 2",
        })
    }
}

/// Exact check of the ping-pong conditions.
pub fn verify_pingpong(w: &PingPongWitness) -> std::result::Result<(), PingPongFailure> {
    let sets = [&w.u1, &w.u2, &w.v1, &w.v2];
    for i in 0..4 {
        for j in i + 1..4 {
            if !sets[i].is_disjoint(sets[j]).map_err(|_| PingPongFailure::Disjointness)? {
                return Err(PingPongFailure::Disjointness);
            }
        }
    }
    let inclusion = |e: &Element, u: &ClopenSet, v: &ClopenSet| {
        e.apply_clopen(&u.complement()).and_then(|img| img.is_subset(v)).unwrap_or(false)
    };
    if !inclusion(&w.g, &w.u1, &w.v1) {
        return Err(PingPongFailure::Inclusion1);
    }
    if !inclusion(&w.h, &w.u2, &w.v2) {
        return Err(PingPongFailure::Inclusion2);
    }
    Ok(())
}

impl PingPongWitness {
    /// Whether the recorded words evaluate to `g` and `h` over `set`.
    pub fn words_match(&self, set: &GeneratingSet) -> bool {
        self.g_word.0.iter().chain(&self.h_word.0).all(|l| l.generator < set.len())
            && self.g_word.evaluate(set) == self.g
            && self.h_word.evaluate(set) == self.h
    }

    pub fn to_json(&self, names: &[String]) -> Value {
        json!({
            "g": self.g.to_string(),
            "h": self.h.to_string(),
            "g_word": self.g_word.render(names),
            "h_word": self.h_word.render(names),
            "U1": clopen_to_json(&self.u1),
            "U2": clopen_to_json(&self.u2),
            "V1": clopen_to_json(&self.v1),
            "V2": clopen_to_json(&self.v2),
        })
    }

    pub fn from_json(tree: &Tree, v: &Value, names: &[String]) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or(Error::Parse { pos: 0, msg: format!("missing field `{k}`") });
        let text = |k: &str| {
            field(k)?.as_str().map(str::to_string).ok_or(Error::Parse { pos: 0, msg: format!("`{k}` must be a string") })
        };
        Ok(PingPongWitness {
            g: parse_element(tree, &text("g")?)?,
            h: parse_element(tree, &text("h")?)?,
            u1: clopen_from_json(tree, field("U1")?)?,
            u2: clopen_from_json(tree, field("U2")?)?,
            v1: clopen_from_json(tree, field("V1")?)?,
            v2: clopen_from_json(tree, field("V2")?)?,
            g_word: Word::parse(&text("g_word")?, names)?,
            h_word: Word::parse(&text("h_word")?, names)?,
        })
    }
}

/// No nonempty reduced word in `g, h` of length at most `max_length` is the identity.
pub fn free_group_smoke(g: &Element, h: &Element, max_length: usize) -> bool {
    let letters = [g.clone(), g.inverse(), h.clone(), h.inverse()];
    fn walk(letters: &[Element; 4], cur: &Element, last: Option<usize>, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        (0..4).all(|i| {
            if last == Some(i ^ 1) {
                return true;
            }
            let next = cur.compose_unchecked(&letters[i]);
            !next.is_identity() && walk(letters, &next, Some(i), left - 1)
        })
    }
    walk(&letters, &Element::identity(g.tree()), None, max_length)
}

/// Elements of the subgroup found by the driver, with their words.
#[derive(Debug, Clone)]
struct Hyperbolic {
    word: Word,
    element: Element,
    report: DynamicsReport,
}

/// Builds a verified ping-pong pair from `hs` whose stable sets meet in the empty set.
fn pingpong_from(set: &GeneratingSet, hs: &[Hyperbolic], budgets: &Budgets) -> Option<PingPongWitness> {
    let elems: Vec<Element> = hs.iter().map(|h| h.element.clone()).collect();
    let reports: Vec<DynamicsReport> = hs.iter().map(|h| h.report.clone()).collect();
    let words: Vec<Word> = hs.iter().map(|h| h.word.clone()).collect();
    let mut b0: Vec<BoundaryPoint> = reports.iter().flat_map(|r| r.per_hyp()).collect();
    b0.sort();
    b0.dedup();
    if b0.is_empty() {
        return None;
    }
    let image = |g: &Element, pts: &[BoundaryPoint]| pts.iter().map(|x| g.apply_point(x)).collect::<Vec<_>>();
    let (v1w, v1) = neumann_greedy(set, &b0, &b0, budgets.word_length, budgets.dovetail_steps)?;
    let b1 = image(&v1, &b0);
    let taken: Vec<BoundaryPoint> = b0.iter().chain(&b1).cloned().collect();
    let (u2w, u2) = neumann_greedy(set, &b0, &taken, budgets.word_length, budgets.dovetail_steps)?;
    let a2 = image(&u2, &b0);
    let taken: Vec<BoundaryPoint> = taken.into_iter().chain(a2.iter().cloned()).collect();
    let (v2w, v2) = neumann_greedy(set, &b0, &taken, budgets.word_length, budgets.dovetail_steps)?;
    let b2 = image(&v2, &b0);
    let groups = [&b0, &b1, &a2, &b2];
    let mut sep = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            for x in groups[i] {
                for y in groups[j] {
                    sep = sep.max(x.common_prefix_len(y).expect("sets are disjoint"));
                }
            }
        }
    }
    let start = sep as u32 + 1;
    let tree = set.tree();
    let u2inv = u2.inverse();
    for e in start..=start + budgets.expansion_depth as u32 {
        let Ok(c) = proximal_contraction_with(&elems, &reports, Radius(e)) else {
            continue;
        };
        let hw = c.word(&words);
        let nb = ClopenSet::neighborhood(tree, &b0, Radius(e));
        let w = PingPongWitness {
            g: v1.compose_unchecked(&c.h),
            h: v2.compose_unchecked(&c.h).compose_unchecked(&u2inv),
            u1: nb.clone(),
            u2: u2.apply_clopen_unchecked(&nb),
            v1: v1.apply_clopen_unchecked(&nb),
            v2: v2.apply_clopen_unchecked(&nb),
            g_word: v1w.then(&hw),
            h_word: v2w.then(&hw).then(&u2w.inverse()),
        };
        if verify_pingpong(&w).is_ok() {
            return Some(w);
        }
    }
    None
}

/// Enumerates `⟨S⟩` until the stable sets of the collected elements have
/// empty intersection, then builds a ping-pong pair.
pub fn build_pingpong(set: &GeneratingSet, budgets: &Budgets) -> Option<PingPongWitness> {
    let (hs, w, _) = collect_hyperbolic(set, budgets);
    if !w.is_empty() {
        return None;
    }
    pingpong_from(set, &hs, budgets)
}

/// Walks the enumeration, keeping each element whose stable set shrinks the
/// running intersection. Returns the kept elements, the intersection, and the
/// number of elements examined.
fn collect_hyperbolic(set: &GeneratingSet, budgets: &Budgets) -> (Vec<Hyperbolic>, ClopenSet, usize) {
    let mut w = ClopenSet::full(set.tree());
    let mut hs = Vec::new();
    let mut examined = 0;
    for (word, element) in enumerate_elements(set, budgets.word_length) {
        if examined >= budgets.dovetail_steps || w.is_empty() {
            break;
        }
        examined += 1;
        if element.is_identity() {
            continue;
        }
        let report = dynamics(&element);
        let next = w.intersect_unchecked(&report.u);
        if next != w {
            w = next;
            hs.push(Hyperbolic { word, element, report });
        }
    }
    (hs, w, examined)
}

/// The largest clopen subset of `w` mapped onto itself by every generator.
pub fn largest_invariant_subset(set: &GeneratingSet, w: &ClopenSet) -> ClopenSet {
    let mut cur = w.clone();
    loop {
        let mut next = cur.clone();
        for g in set.generators() {
            next = next
                .intersect_unchecked(&g.apply_clopen_unchecked(&cur))
                .intersect_unchecked(&g.inverse().apply_clopen_unchecked(&cur));
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    /// A finite invariant set with words carrying its first point to each point.
    FiniteOrbit(Orbit),
    PingPong(PingPongWitness),
    Undecided(String),
}

/// Outcome of [`dichotomy`] with the state it stopped in.
#[derive(Debug, Clone)]
pub struct DichotomyResult {
    pub verdict: Verdict,
    /// Words of the elements kept while intersecting stable sets.
    pub kept: Vec<Word>,
    /// The final intersection `W` of their stable sets.
    pub stable: ClopenSet,
    pub examined: usize,
    /// Points whose orbits were searched.
    pub candidates: Vec<BoundaryPoint>,
    pub budgets: Budgets,
}

impl DichotomyResult {
    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::FiniteOrbit(_) => "FiniteOrbit",
            Verdict::PingPong(_) => "PingPong",
            Verdict::Undecided(_) => "Undecided",
        }
    }

    /// Re-checks the witness against `set` from scratch.
    pub fn verify(&self, set: &GeneratingSet) -> bool {
        match &self.verdict {
            Verdict::FiniteOrbit(o) => is_invariant_set(&o.points, set),
            Verdict::PingPong(w) => verify_pingpong(w).is_ok() && w.words_match(set),
            Verdict::Undecided(_) => false,
        }
    }

    /// A self-contained report: tree, generators, witness and diagnostics.
    pub fn to_json(&self, set: &GeneratingSet) -> Value {
        let names = set.names();
        let mut v = json!({
            "verdict": self.verdict_name(),
            "tree": set.tree().to_json(),
            "generators": names.iter().zip(set.generators()).map(|(n, g)| json!({"name": n, "element": g.to_string()})).collect::<Vec<_>>(),
            "diagnostics": {
                "kept": self.kept.iter().map(|w| w.render(names)).collect::<Vec<_>>(),
                "stable_intersection": clopen_to_json(&self.stable),
                "elements_examined": self.examined,
                "candidates": points_to_json(&self.candidates),
                "budgets": self.budgets.to_json(),
            },
        });
        match &self.verdict {
            Verdict::FiniteOrbit(o) => v["finite_orbit"] = o.to_json(names),
            Verdict::PingPong(w) => v["pingpong"] = w.to_json(names),
            Verdict::Undecided(reason) => v["undecided"] = json!(reason),
        }
        v
    }
}

/// Finds a finite orbit or a ping-pong pair for `⟨S⟩`.
///
/// 1. Enumerate elements in shortlex order, intersecting stable sets.
/// 2. If the intersection becomes empty, every finite orbit meets the
///    hyperbolic points `B` of the kept elements: search their orbits, then
///    build a ping-pong pair.
/// 3. Otherwise search orbits of witness points of the intersection, then
///    look for a finite restricted group on its largest invariant subset.
pub fn dichotomy(set: &GeneratingSet, budgets: &Budgets) -> DichotomyResult {
    let (hs, w, examined) = collect_hyperbolic(set, budgets);
    let kept = hs.iter().map(|h| h.word.clone()).collect();
    let mut result = DichotomyResult {
        verdict: Verdict::Undecided(String::new()),
        kept,
        stable: w.clone(),
        examined,
        candidates: Vec::new(),
        budgets: *budgets,
    };
    let finite = |candidates: &[BoundaryPoint]| {
        candidates.iter().find_map(|x| orbit(x, set, budgets.orbit_size))
    };
    if w.is_empty() {
        let mut b: Vec<BoundaryPoint> = hs.iter().flat_map(|h| h.report.per_hyp()).collect();
        b.sort();
        b.dedup();
        result.candidates = b.clone();
        if let Some(o) = finite(&b) {
            result.verdict = Verdict::FiniteOrbit(o);
        } else if let Some(pp) = pingpong_from(set, &hs, budgets) {
            result.verdict = Verdict::PingPong(pp);
        } else {
            result.verdict = Verdict::Undecided("no orbit of a hyperbolic point closed and no ping-pong pair verified".into());
        }
        return result;
    }
    let witnesses = w.witnesses();
    result.candidates = witnesses.clone();
    if let Some(o) = finite(&witnesses) {
        result.verdict = Verdict::FiniteOrbit(o);
        return result;
    }
    let inv = largest_invariant_subset(set, &w);
    if !inv.is_empty() {
        let restricted: Option<Vec<Element>> =
            set.generators().iter().map(|g| restrict(g, &inv).ok().map(|r| r.extended().clone())).collect();
        if let Some(gens) = restricted {
            let rset = GeneratingSet::new(set.names().to_vec(), gens).expect("same tree");
            if let Some(group) = finite_closure(&rset, budgets.orbit_size) {
                let x = eventually_periodic_witness(set.tree(), &inv.balls()[0]);
                if let Some(o) = orbit(&x, set, group.len()) {
                    result.candidates.push(x);
                    result.verdict = Verdict::FiniteOrbit(o);
                    return result;
                }
            }
        }
    }
    result.verdict = Verdict::Undecided(format!(
        "stable sets still meet in {} after {} elements; no candidate orbit closed within {} points",
        w, examined, budgets.orbit_size
    ));
    result
}
