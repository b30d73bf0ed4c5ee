//! Text formats for homomorphism values.
//!
//! ```text
//! target=<factors>
//! <element index> <value index>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::hom::ElementMap;

pub fn parse_hom_file(text: &str) -> Result<(GroupSpec, ElementMap)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("missing target header".into()))?;
    let spec = header
        .strip_prefix("target=")
        .ok_or_else(|| Error::Parse(format!("expected 'target=<factors>', got '{header}'")))?;
    let target: GroupSpec = spec.parse()?;
    let mut map = ElementMap::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        let (Some(x), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("expected '<element> <value>', got '{line}'")));
        };
        let x: u32 = x.parse().map_err(|_| Error::Parse(format!("bad element index '{x}'")))?;
        let v: u32 = v.parse().map_err(|_| Error::Parse(format!("bad value index '{v}'")))?;
        target.check(Element(v))?;
        if map.insert(Element(x), Element(v)).is_some() {
            return Err(Error::Parse(format!("element {x} listed twice")));
        }
    }
    Ok((target, map))
}

pub fn format_hom_file(target: &GroupSpec, phi: &ElementMap) -> String {
    let mut out = format!("target={target}\n");
    for (x, v) in phi {
        writeln!(out, "{} {}", x.0, v.0).unwrap();
    }
    out
}

pub fn read_hom_file(path: impl AsRef<Path>) -> Result<(GroupSpec, ElementMap)> {
    parse_hom_file(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let target = GroupSpec::new(vec![2, 3]).unwrap();
        let phi: ElementMap = [(0, 1), (4, 5), (9, 0)].iter().map(|&(a, b)| (Element(a), Element(b))).collect();
        let text = format_hom_file(&target, &phi);
        assert_eq!(text, "target=2,3\n0 1\n4 5\n9 0\n");
        assert_eq!(parse_hom_file(&text).unwrap(), (target, phi));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_hom_file("").is_err());
        assert!(parse_hom_file("group=5\n0 1\n").is_err());
        assert!(parse_hom_file("target=5\n0 7\n").is_err());
        assert!(parse_hom_file("target=5\n0 1\n0 2\n").is_err());
        assert!(parse_hom_file("target=5\n0\n").is_err());
    }
}
