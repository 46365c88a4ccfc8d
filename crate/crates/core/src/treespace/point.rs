use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::address::{digit_char, parse_digit};
use super::{Address, TypeGraph};
use crate::error::{Error, Result};

/// An eventually periodic end `prefix · cycle^∞` of the tree.
///
/// Always kept canonical: the cycle is primitive and the least of its
/// rotations, and the prefix is the shortest one compatible with that cycle.
/// Two points are equal as ends iff their canonical forms are identical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPoint {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

impl BoundaryPoint {
    /// Canonicalizes `prefix · cycle^∞` without consulting a tree. Panics on an empty cycle.
    pub fn new(prefix: Vec<u8>, cycle: Vec<u8>) -> Self {
        assert!(!cycle.is_empty(), "cycle must be nonempty");
        let (prefix, cycle) = canonicalize(prefix, cycle);
        BoundaryPoint { prefix, cycle }
    }

    /// Canonicalizes and checks that the path stays inside `tree` forever.
    pub fn checked(tree: &TypeGraph, prefix: Vec<u8>, cycle: Vec<u8>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidPoint("empty cycle".into()));
        }
        let p = Self::new(prefix, cycle);
        p.validate(tree)?;
        Ok(p)
    }

    pub fn validate(&self, tree: &TypeGraph) -> Result<()> {
        let bad = || Error::InvalidPoint(self.to_string());
        let mut t = tree.walk(tree.root_type(), &self.prefix).ok_or_else(bad)?;
        // the type at the start of each cycle pass is eventually periodic
        let mut seen = vec![false; tree.num_types()];
        while !seen[t] {
            seen[t] = true;
            t = tree.walk(t, &self.cycle).ok_or_else(bad)?;
        }
        Ok(())
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u8] {
        &self.cycle
    }

    /// The child index taken at step `i` of the path.
    pub fn digit(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The vertex at depth `len` on the path.
    pub fn truncate(&self, len: usize) -> Address {
        Address::from_digits((0..len).map(|i| self.digit(i)).collect())
    }

    pub fn starts_with(&self, v: &Address) -> bool {
        v.digits().iter().enumerate().all(|(i, &d)| self.digit(i) == d)
    }

    /// Drops the first `k` steps of the path.
    pub fn shift(&self, k: usize) -> BoundaryPoint {
        if k <= self.prefix.len() {
            BoundaryPoint { prefix: self.prefix[k..].to_vec(), cycle: self.cycle.clone() }.renormalized()
        } else {
            let mut c = self.cycle.clone();
            let n = c.len();
            c.rotate_left((k - self.prefix.len()) % n);
            BoundaryPoint::new(Vec::new(), c)
        }
    }

    /// The point `v · self`.
    pub fn prepend(&self, v: &Address) -> BoundaryPoint {
        let mut p = v.digits().to_vec();
        p.extend_from_slice(&self.prefix);
        BoundaryPoint { prefix: p, cycle: self.cycle.clone() }.renormalized()
    }

    /// The point `v · s^∞`.
    pub fn periodic_below(v: &Address, s: &[u8]) -> BoundaryPoint {
        BoundaryPoint::new(v.digits().to_vec(), s.to_vec())
    }

    fn renormalized(self) -> Self {
        Self::new(self.prefix, self.cycle)
    }

    /// Whether the point is isolated in the boundary: some vertex on its path
    /// has a single-ray subtree.
    pub fn is_isolated(&self, tree: &TypeGraph) -> bool {
        // the types at cycle boundaries repeat within num_types passes
        let depth = self.prefix.len() + self.cycle.len() * (tree.num_types() + 1);
        tree.is_isolated(&self.truncate(depth))
    }

    /// Length of the longest common prefix, `None` when the points coincide.
    pub fn common_prefix_len(&self, other: &BoundaryPoint) -> Option<usize> {
        if self == other {
            return None;
        }
        let bound = self.prefix.len().max(other.prefix.len()) + lcm(self.cycle.len(), other.cycle.len());
        let l = (0..bound).find(|&i| self.digit(i) != other.digit(i));
        debug_assert!(l.is_some(), "distinct canonical points must differ early");
        l
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn canonicalize(mut prefix: Vec<u8>, mut cycle: Vec<u8>) -> (Vec<u8>, Vec<u8>) {
    let n = cycle.len();
    let d = (1..=n).find(|&d| n % d == 0 && (d..n).all(|i| cycle[i] == cycle[i - d])).unwrap();
    cycle.truncate(d);
    while let (Some(&p), Some(&c)) = (prefix.last(), cycle.last()) {
        if p != c {
            break;
        }
        prefix.pop();
        cycle.rotate_right(1);
    }
    let best = (0..d)
        .min_by(|&a, &b| {
            let ra = cycle[a..].iter().chain(&cycle[..a]);
            let rb = cycle[b..].iter().chain(&cycle[..b]);
            ra.cmp(rb)
        })
        .unwrap();
    prefix.extend_from_slice(&cycle[..best]);
    cycle.rotate_left(best);
    (prefix, cycle)
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.prefix {
            write!(f, "{}", digit_char(d))?;
        }
        write!(f, "(")?;
        for &d in &self.cycle {
            write!(f, "{}", digit_char(d))?;
        }
        write!(f, ")^inf")
    }
}

impl fmt::Debug for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BoundaryPoint {
    type Err = Error;

    /// Parses `prefix(cycle)^inf`; the `^inf` suffix is optional.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s.find('(').ok_or(Error::Parse { pos: 0, msg: "expected `(`".into() })?;
        let close = s.find(')').ok_or(Error::Parse { pos: s.len(), msg: "expected `)`".into() })?;
        if close < open {
            return Err(Error::Parse { pos: close, msg: "unbalanced parentheses".into() });
        }
        let rest = &s[close + 1..];
        if !(rest.is_empty() || rest == "^inf") {
            return Err(Error::Parse { pos: close + 1, msg: format!("unexpected `{rest}`") });
        }
        let digits = |from: usize, t: &str| {
            t.chars().enumerate().map(|(i, c)| parse_digit(c, from + i)).collect::<Result<Vec<u8>>>()
        };
        let prefix = digits(0, &s[..open])?;
        let cycle = digits(open + 1, &s[open + 1..close])?;
        if cycle.is_empty() {
            return Err(Error::Parse { pos: open + 1, msg: "empty cycle".into() });
        }
        Ok(BoundaryPoint::new(prefix, cycle))
    }
}

/// A visual distance: `0` or `2^{-ℓ}` where `ℓ` is the common prefix length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VisualDistance {
    Zero,
    /// `2^{-ℓ}`
    Pow(u32),
}

impl VisualDistance {
    pub fn between(x: &BoundaryPoint, y: &BoundaryPoint) -> Self {
        match x.common_prefix_len(y) {
            None => VisualDistance::Zero,
            Some(l) => VisualDistance::Pow(l as u32),
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            VisualDistance::Zero => 0.0,
            VisualDistance::Pow(l) => 0.5f64.powi(l as i32),
        }
    }

    /// Multiplies by the homothety ratio `2^{shift}` (shift may be negative).
    pub fn scale(self, shift: i64) -> Self {
        match self {
            VisualDistance::Zero => VisualDistance::Zero,
            VisualDistance::Pow(l) => VisualDistance::Pow((l as i64 - shift) as u32),
        }
    }
}

impl Ord for VisualDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (VisualDistance::Zero, VisualDistance::Zero) => Ordering::Equal,
            (VisualDistance::Zero, _) => Ordering::Less,
            (_, VisualDistance::Zero) => Ordering::Greater,
            (VisualDistance::Pow(a), VisualDistance::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for VisualDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VisualDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VisualDistance::Zero => write!(f, "0"),
            VisualDistance::Pow(0) => write!(f, "1"),
            VisualDistance::Pow(l) => write!(f, "2^-{l}"),
        }
    }
}

/// A radius `2^{-m}`; `m = 0` is the radius that covers everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radius(pub u32);

impl Radius {
    pub fn exponent(self) -> u32 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        0.5f64.powi(self.0 as i32)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            write!(f, "1")
        } else {
            write!(f, "2^-{}", self.0)
        }
    }
}

impl FromStr for Radius {
    type Err = Error;

    /// Accepts `2^-m`, `1`, or a decimal that is exactly a power of 1/2.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::BadRadius(s.to_string());
        if let Some(m) = t.strip_prefix("2^-") {
            return m.parse::<u32>().map(Radius).map_err(|_| bad());
        }
        if t == "2^0" {
            return Ok(Radius(0));
        }
        let v: f64 = t.parse().map_err(|_| bad())?;
        if !(v > 0.0 && v <= 1.0) {
            return Err(bad());
        }
        let m = -v.log2();
        let r = m.round();
        if (m - r).abs() > 1e-12 || 0.5f64.powi(r as i32) != v {
            return Err(bad());
        }
        Ok(Radius(r as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> BoundaryPoint {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(pt("1(1)^inf").to_string(), "(1)^inf");
        assert_eq!(pt("(0101)^inf").to_string(), "(01)^inf");
        assert_eq!(pt("(10)^inf").to_string(), "1(01)^inf");
        assert_eq!(pt("0(10)^inf"), pt("(01)^inf"));
        assert_eq!(pt("01(0)^inf").to_string(), "01(0)^inf");
        assert_eq!(pt("0100(00)^inf").to_string(), "01(0)^inf");
    }

    #[test]
    fn distances() {
        assert_eq!(VisualDistance::between(&pt("(0)"), &pt("(0)")), VisualDistance::Zero);
        assert_eq!(VisualDistance::between(&pt("(0)"), &pt("(1)")), VisualDistance::Pow(0));
        assert_eq!(VisualDistance::between(&pt("01(0)"), &pt("01(1)")), VisualDistance::Pow(2));
        assert_eq!(VisualDistance::Pow(2).to_f64(), 0.25);
        assert!(VisualDistance::Pow(3) < VisualDistance::Pow(2));
        assert!(VisualDistance::Zero < VisualDistance::Pow(40));
    }

    #[test]
    fn shift_and_prepend() {
        let x = pt("01(10)");
        assert_eq!(x.shift(2), pt("(10)"));
        assert_eq!(x.shift(3), pt("(01)"));
        assert_eq!(x.shift(3).prepend(&"011".parse().unwrap()), x);
    }

    #[test]
    fn radius_parsing() {
        assert_eq!("2^-3".parse::<Radius>().unwrap(), Radius(3));
        assert_eq!("1".parse::<Radius>().unwrap(), Radius(0));
        assert_eq!("0.125".parse::<Radius>().unwrap(), Radius(3));
        assert!("0.3".parse::<Radius>().is_err());
        assert!("2".parse::<Radius>().is_err());
    }

    #[test]
    fn validation_against_tree() {
        let g = TypeGraph::new(
            vec![("a".into(), vec!["a".into(), "b".into()]), ("b".into(), vec!["b".into()])],
            "a",
        )
        .unwrap();
        assert!(pt("(0)").validate(&g).is_ok());
        assert!(pt("1(0)").validate(&g).is_ok());
        assert!(pt("(1)").validate(&g).is_err());
        assert!(pt("1(0)").is_isolated(&g));
        assert!(!pt("(0)").is_isolated(&g));
    }
}
