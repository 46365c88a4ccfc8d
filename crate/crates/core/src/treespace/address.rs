use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A vertex of the ambient tree, given by its child indices from the root.
///
/// The derived order is lexicographic with prefixes first, which is exactly
/// the depth-first order on vertices; the descendants of a vertex form a
/// contiguous run right after it.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(Vec<u8>);

pub(crate) fn digit_char(d: u8) -> char {
    std::char::from_digit(d as u32, 36).expect("digit out of range")
}

pub(crate) fn parse_digit(c: char, pos: usize) -> Result<u8> {
    c.to_digit(36)
        .map(|d| d as u8)
        .filter(|_| !c.is_ascii_uppercase())
        .ok_or_else(|| Error::Parse { pos, msg: format!("`{c}` is not a child index") })
}

impl Address {
    pub fn root() -> Self {
        Address(Vec::new())
    }

    pub fn from_digits(digits: Vec<u8>) -> Self {
        Address(digits)
    }

    /// Parses a digit string; `""` (or `ε`) is the root.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "ε" {
            return Ok(Self::root());
        }
        s.chars().enumerate().map(|(i, c)| parse_digit(c, i)).collect::<Result<Vec<_>>>().map(Address)
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Address {
        let mut v = self.0.clone();
        v.push(i as u8);
        Address(v)
    }

    pub fn parent(&self) -> Option<Address> {
        if self.0.is_empty() {
            None
        } else {
            Some(Address(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// `self` is an ancestor of `other` or equal to it.
    pub fn is_prefix_of(&self, other: &Address) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_proper_prefix_of(&self, other: &Address) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    pub fn comparable(&self, other: &Address) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn concat(&self, tail: &[u8]) -> Address {
        let mut v = Vec::with_capacity(self.0.len() + tail.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(tail);
        Address(v)
    }

    /// Digits of `self` below the ancestor `prefix`.
    pub fn strip(&self, prefix: &Address) -> &[u8] {
        debug_assert!(prefix.is_prefix_of(self));
        &self.0[prefix.0.len()..]
    }

    pub fn truncate(&self, len: usize) -> Address {
        Address(self.0[..len.min(self.0.len())].to_vec())
    }

    pub fn common_prefix_len(&self, other: &Address) -> usize {
        self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count()
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.0 {
            write!(f, "{}", digit_char(d))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Address {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Address::parse(s)
    }
}

/// Index range of the entries of a sorted slice that have `v` as a prefix.
pub(crate) fn descendant_range<T>(sorted: &[T], key: impl Fn(&T) -> &Address, v: &Address) -> std::ops::Range<usize> {
    let start = sorted.partition_point(|x| key(x) < v);
    let len = sorted[start..].partition_point(|x| v.is_prefix_of(key(x)));
    start..start + len
}

/// Position of the entry of a sorted antichain that is an ancestor of (or equal to) `v`.
pub(crate) fn find_ancestor<T>(sorted: &[T], key: impl Fn(&T) -> &Address, v: &Address) -> Option<usize> {
    // the ancestor, if present, is the last entry <= v
    let idx = sorted.partition_point(|x| key(x) <= v);
    if idx == 0 {
        return None;
    }
    let cand = key(&sorted[idx - 1]);
    cand.is_prefix_of(v).then_some(idx - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let a = Address::parse("01z").unwrap();
        assert_eq!(a.digits(), &[0, 1, 35]);
        assert_eq!(a.to_string(), "01z");
        assert_eq!(Address::parse("").unwrap(), Address::root());
        assert!(Address::parse("0!").is_err());
    }

    #[test]
    fn order_is_depth_first() {
        let mut v: Vec<Address> = ["1", "01", "", "0", "10", "00"].iter().map(|s| s.parse().unwrap()).collect();
        v.sort();
        let s: Vec<String> = v.iter().map(|a| a.to_string()).collect();
        assert_eq!(s, ["", "0", "00", "01", "1", "10"]);
    }

    #[test]
    fn ancestor_and_descendant_lookup() {
        let v: Vec<Address> = ["00", "01", "1"].iter().map(|s| s.parse().unwrap()).collect();
        assert_eq!(find_ancestor(&v, |a| a, &"0110".parse().unwrap()), Some(1));
        assert_eq!(find_ancestor(&v, |a| a, &"0".parse().unwrap()), None);
        assert_eq!(descendant_range(&v, |a| a, &"0".parse().unwrap()), 0..2);
        assert_eq!(descendant_range(&v, |a| a, &"11".parse().unwrap()), 3..3);
    }
}
