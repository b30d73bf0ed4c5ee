use std::fmt::Write as _;
use std::path::Path;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::rng::rng_from_seed;

/// How a [`SubsetSample`] was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Provenance {
    Binomial { p: f64, seed: u64 },
    Fixed { t: u32, seed: u64 },
    Explicit,
}

/// A subset of a finite Abelian group, stored as strictly increasing indices.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSample {
    group: GroupSpec,
    elements: Vec<Element>,
    provenance: Provenance,
}

impl SubsetSample {
    /// Builds an explicit subset; input order is irrelevant but duplicates
    /// and out-of-range indices are rejected.
    pub fn from_elements(group: GroupSpec, mut elements: Vec<Element>) -> Result<Self> {
        for &x in &elements {
            group.check(x)?;
        }
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubset("duplicate element".into()));
        }
        Ok(SubsetSample { group, elements, provenance: Provenance::Explicit })
    }

    /// Convenience constructor from raw indices.
    pub fn from_indices(group: GroupSpec, indices: &[u32]) -> Result<Self> {
        Self::from_elements(group, indices.iter().map(|&i| Element(i)).collect())
    }

    /// The whole group as a subset of itself.
    pub fn full(group: GroupSpec) -> Self {
        let elements = group.elements().collect();
        SubsetSample { group, elements, provenance: Provenance::Explicit }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of `x` in the sorted element list.
    pub fn position(&self, x: Element) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// Indicator of the set as a dense boolean vector over the group.
    pub fn indicator(&self) -> Vec<bool> {
        let mut ind = vec![false; self.group.order() as usize];
        for x in &self.elements {
            ind[x.index()] = true;
        }
        ind
    }

    /// The subset with `drop` removed (used for isolation and extension tests).
    pub fn without(&self, drop: &[Element]) -> SubsetSample {
        let elements = self.elements.iter().copied().filter(|x| !drop.contains(x)).collect();
        SubsetSample { group: self.group.clone(), elements, provenance: Provenance::Explicit }
    }

    /// Serializes in the text set format: `group=<factors>` followed by one
    /// index per line in ascending order.
    pub fn to_set_file(&self) -> String {
        let mut out = format!("group={}\n", self.group);
        for x in &self.elements {
            writeln!(out, "{x}").unwrap();
        }
        out
    }

    pub fn parse_set_file(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("missing group header".into()))?;
        let spec = header
            .strip_prefix("group=")
            .ok_or_else(|| Error::Parse(format!("expected 'group=<factors>', got {header:?}")))?;
        let group: GroupSpec = spec.parse()?;
        let mut elements = Vec::new();
        for line in lines {
            let idx: u32 =
                line.parse().map_err(|_| Error::Parse(format!("bad element index {line:?}")))?;
            let x = Element(idx);
            group.check(x)?;
            if let Some(&last) = elements.last() {
                if x <= last {
                    return Err(Error::Parse(format!("indices not strictly ascending at {idx}")));
                }
            }
            elements.push(x);
        }
        Ok(SubsetSample { group, elements, provenance: Provenance::Explicit })
    }

    pub fn read_set_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_set_file(&std::fs::read_to_string(path)?)
    }

    pub fn write_set_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_set_file())?;
        Ok(())
    }
}

/// Includes each element of `g` independently with probability `p`.
pub fn sample_binomial(g: &GroupSpec, p: f64, seed: u64) -> Result<SubsetSample> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = rng_from_seed(seed);
    let elements = g.elements().filter(|_| rng.gen_bool(p)).collect();
    Ok(SubsetSample { group: g.clone(), elements, provenance: Provenance::Binomial { p, seed } })
}

/// A uniformly random `t`-subset of `g`.
pub fn sample_fixed(g: &GroupSpec, t: u32, seed: u64) -> Result<SubsetSample> {
    if t > g.order() {
        return Err(Error::SizeTooLarge { size: t as u64, order: g.order() as u64 });
    }
    let mut rng = rng_from_seed(seed);
    let mut elements: Vec<Element> = index::sample(&mut rng, g.order() as usize, t as usize)
        .into_iter()
        .map(|i| Element(i as u32))
        .collect();
    elements.sort_unstable();
    Ok(SubsetSample { group: g.clone(), elements, provenance: Provenance::Fixed { t, seed } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_endpoints() {
        let g = GroupSpec::cyclic(50).unwrap();
        assert!(sample_binomial(&g, 0.0, 1).unwrap().is_empty());
        assert_eq!(sample_binomial(&g, 1.0, 1).unwrap().len(), 50);
        assert!(matches!(sample_binomial(&g, 1.5, 1), Err(Error::InvalidProbability(_))));
        assert!(sample_binomial(&g, f64::NAN, 1).is_err());
    }

    #[test]
    fn fixed_endpoints() {
        let g = GroupSpec::cyclic(30).unwrap();
        assert!(sample_fixed(&g, 0, 3).unwrap().is_empty());
        assert_eq!(sample_fixed(&g, 30, 3).unwrap().elements(), SubsetSample::full(g.clone()).elements());
        assert!(matches!(sample_fixed(&g, 31, 3), Err(Error::SizeTooLarge { .. })));
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = GroupSpec::new(vec![10, 10]).unwrap();
        assert_eq!(sample_binomial(&g, 0.3, 9).unwrap(), sample_binomial(&g, 0.3, 9).unwrap());
        assert_eq!(sample_fixed(&g, 17, 9).unwrap(), sample_fixed(&g, 17, 9).unwrap());
        let s = sample_fixed(&g, 17, 9).unwrap();
        assert_eq!(s.len(), 17);
        assert!(s.elements().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn set_file_round_trip() {
        let g = GroupSpec::new(vec![4, 9]).unwrap();
        let s = SubsetSample::from_indices(g, &[3, 0, 35, 12]).unwrap();
        let text = s.to_set_file();
        assert_eq!(text, "group=4,9\n0\n3\n12\n35\n");
        assert_eq!(SubsetSample::parse_set_file(&text).unwrap().elements(), s.elements());
    }

    #[test]
    fn set_file_rejects_bad_input() {
        assert!(SubsetSample::parse_set_file("group=5\n3\n1\n").is_err());
        assert!(SubsetSample::parse_set_file("group=5\n1\n1\n").is_err());
        assert!(SubsetSample::parse_set_file("group=5\n7\n").is_err());
        assert!(SubsetSample::parse_set_file("5\n1\n").is_err());
        assert!(SubsetSample::parse_set_file("").is_err());
        assert!(SubsetSample::parse_set_file("group=5\n").unwrap().is_empty());
    }

    #[test]
    fn explicit_rejects_duplicates() {
        let g = GroupSpec::cyclic(5).unwrap();
        assert!(SubsetSample::from_indices(g.clone(), &[1, 1]).is_err());
        assert!(SubsetSample::from_indices(g, &[5]).is_err());
    }
}
