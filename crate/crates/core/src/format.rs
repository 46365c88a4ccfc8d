//! Text formats: elements, generating sets, points and clopen sets.
//!
//! An element is written `pair{domain=[00, 01, 1], range=[0, 10, 11], perm=[0, 1, 2]}`
//! with both leaf lists in depth-first order and `perm[i]` the index of the
//! range leaf paired with domain leaf `i`. The root address is written `""`.
//! A generating-set file holds one `name = <element>` per line; `#` starts a
//! comment and `builtin:NAME` refers to the built-in family of the tree.

use std::fmt;

use crate::element::{builtin_generators, Element};
use crate::error::{Error, Result};
use crate::subgroup::GeneratingSet;
use crate::treespace::{Address, BoundaryPoint, ClopenSet, Tree};

fn addr_token(a: &Address) -> String {
    if a.is_root() {
        "\"\"".to_string()
    } else {
        a.to_string()
    }
}

pub(crate) fn write_pair(f: &mut fmt::Formatter<'_>, domain: &[Address], range: &[Address], perm: &[usize]) -> fmt::Result {
    let list = |v: &[Address]| v.iter().map(addr_token).collect::<Vec<_>>().join(", ");
    let perm = perm.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
    write!(f, "pair{{domain=[{}], range=[{}], perm=[{}]}}", list(domain), list(range), perm)
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.s[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        self.skip_ws();
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.err(format!("expected `{lit}`")))
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.s[self.pos..].chars().next()
    }

    /// A bracketed, comma-separated list of raw tokens.
    fn list(&mut self) -> Result<Vec<(usize, String)>> {
        self.expect("[")?;
        let mut items = Vec::new();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(items);
        }
        loop {
            self.skip_ws();
            let start = self.pos;
            let end = self.s[start..].find([',', ']']).map(|i| start + i).ok_or_else(|| self.err("unterminated list"))?;
            items.push((start, self.s[start..end].trim().to_string()));
            self.pos = end;
            if self.s[end..].starts_with(']') {
                self.pos += 1;
                return Ok(items);
            }
            self.pos += 1;
        }
    }
}

fn parse_addr_token(pos: usize, tok: &str) -> Result<Address> {
    let t = tok.trim_matches('"');
    Address::parse(t).map_err(|e| match e {
        Error::Parse { pos: p, msg } => Error::Parse { pos: pos + p, msg },
        other => other,
    })
}

/// Parses the element text format (or `builtin:NAME`).
pub fn parse_element(tree: &Tree, text: &str) -> Result<Element> {
    let text = text.trim();
    if let Some(name) = text.strip_prefix("builtin:") {
        let gens = builtin_generators(tree).map_err(|msg| Error::Parse { pos: 0, msg })?;
        return gens
            .into_iter()
            .find(|(n, _)| n == name.trim())
            .map(|(_, e)| e)
            .ok_or_else(|| Error::Parse { pos: 8, msg: format!("no built-in generator `{}`", name.trim()) });
    }
    let mut c = Cursor { s: text, pos: 0 };
    c.expect("pair{")?;
    c.expect("domain=")?;
    let dom = c.list()?;
    c.expect(",")?;
    c.expect("range=")?;
    let ran = c.list()?;
    c.expect(",")?;
    c.expect("perm=")?;
    let perm = c.list()?;
    c.expect("}")?;
    c.skip_ws();
    if c.pos != text.len() {
        return Err(c.err("trailing input"));
    }
    let dom = dom.iter().map(|(p, t)| parse_addr_token(*p, t)).collect::<Result<Vec<_>>>()?;
    let ran = ran.iter().map(|(p, t)| parse_addr_token(*p, t)).collect::<Result<Vec<_>>>()?;
    let perm = perm
        .iter()
        .map(|(p, t)| t.parse::<usize>().map_err(|_| Error::Parse { pos: *p, msg: format!("`{t}` is not an index") }))
        .collect::<Result<Vec<_>>>()?;
    Element::from_leaves(tree, dom, ran, &perm)
}

/// Parses a generating-set file. `builtin` alone on a line pulls in the
/// whole built-in family.
pub fn parse_generating_set(tree: &Tree, text: &str) -> Result<GeneratingSet> {
    let mut names = Vec::new();
    let mut elems = Vec::new();
    let mut offset = 0;
    for line in text.lines() {
        let start = offset;
        offset += line.len() + 1;
        let body = line.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        if body == "builtin" {
            let gens = builtin_generators(tree).map_err(|msg| Error::Parse { pos: start, msg })?;
            for (n, e) in gens {
                names.push(n);
                elems.push(e);
            }
            continue;
        }
        let (name, rhs) = body
            .split_once('=')
            .filter(|(n, _)| !n.contains('{'))
            .ok_or(Error::Parse { pos: start, msg: "expected `name = element`".into() })?;
        let e = parse_element(tree, rhs).map_err(|err| match err {
            Error::Parse { pos, msg } => Error::Parse { pos: start + pos, msg },
            other => other,
        })?;
        names.push(name.trim().to_string());
        elems.push(e);
    }
    GeneratingSet::new(names, elems)
}

pub fn write_generating_set(set: &GeneratingSet) -> String {
    set.names()
        .iter()
        .zip(set.generators())
        .map(|(n, e)| format!("{n} = {e}\n"))
        .collect()
}

pub fn clopen_to_json(c: &ClopenSet) -> serde_json::Value {
    serde_json::Value::Array(c.balls().iter().map(|b| serde_json::Value::String(b.to_string())).collect())
}

pub fn clopen_from_json(tree: &Tree, v: &serde_json::Value) -> Result<ClopenSet> {
    let arr = v.as_array().ok_or(Error::Parse { pos: 0, msg: "clopen set must be an array".into() })?;
    let balls = arr
        .iter()
        .map(|a| {
            a.as_str().ok_or(Error::Parse { pos: 0, msg: "address must be a string".into() }).and_then(Address::parse)
        })
        .collect::<Result<Vec<_>>>()?;
    ClopenSet::from_balls(tree, balls)
}

pub fn points_to_json(points: &[BoundaryPoint]) -> serde_json::Value {
    serde_json::Value::Array(points.iter().map(|p| serde_json::Value::String(p.to_string())).collect())
}

pub fn points_from_json(tree: &Tree, v: &serde_json::Value) -> Result<Vec<BoundaryPoint>> {
    let arr = v.as_array().ok_or(Error::Parse { pos: 0, msg: "points must be an array".into() })?;
    arr.iter()
        .map(|p| {
            let s = p.as_str().ok_or(Error::Parse { pos: 0, msg: "point must be a string".into() })?;
            let x: BoundaryPoint = s.parse()?;
            x.validate(tree)?;
            Ok(x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treespace::TypeGraph;

    #[test]
    fn element_round_trip() {
        let t = TypeGraph::binary();
        let text = "pair{domain=[00, 01, 1], range=[0, 10, 11], perm=[0, 1, 2]}";
        let e = parse_element(&t, text).unwrap();
        assert_eq!(e.to_string(), text);
        let id = parse_element(&t, "pair{domain=[\"\"], range=[\"\"], perm=[0]}").unwrap();
        assert!(id.is_identity());
        assert_eq!(parse_element(&t, &id.to_string()).unwrap(), id);
        assert_eq!(parse_element(&t, "builtin:x0").unwrap(), e);
    }

    #[test]
    fn element_parse_errors_carry_positions() {
        let t = TypeGraph::binary();
        match parse_element(&t, "pair{domain=[00, 0X, 1], range=[0, 10, 11], perm=[0, 1, 2]}") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 18),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_element(&t, "pair{domain=[0,1]}"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_element(&t, "pair{domain=[0, 1], range=[0, 1], perm=[0, 0]}"),
            Err(Error::NotBijective(_))
        ));
    }

    #[test]
    fn generating_set_file() {
        let t = TypeGraph::binary();
        let text = "# Thompson's F\nx0 = builtin:x0\nx1 = pair{domain=[0, 100, 101, 11], range=[0, 10, 110, 111], perm=[0, 1, 2, 3]}\n";
        let s = parse_generating_set(&t, text).unwrap();
        assert_eq!(s.names(), ["x0", "x1"]);
        let again = parse_generating_set(&t, &write_generating_set(&s)).unwrap();
        assert_eq!(again.generators(), s.generators());
        assert_eq!(parse_generating_set(&t, "builtin").unwrap().len(), 4);
    }
}
