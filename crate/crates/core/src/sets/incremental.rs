use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::sets::OrbitRow;

/// Quadruple structure of a set grown one element at a time.
///
/// Positions are assigned in insertion order. Inserting an element touches
/// only the `|A| + 1` new pair sums it creates and the pairs already sharing
/// those sums.
#[derive(Debug, Clone)]
pub struct IncrementalQuadruples {
    group: GroupSpec,
    members: Vec<Element>,
    position: HashMap<Element, u32>,
    buckets: HashMap<u32, Vec<[u32; 2]>>,
    degree: Vec<u64>,
    ordered: u64,
    isolated: usize,
}

impl IncrementalQuadruples {
    pub fn new(group: GroupSpec) -> Self {
        IncrementalQuadruples {
            group,
            members: Vec::new(),
            position: HashMap::new(),
            buckets: HashMap::new(),
            degree: Vec::new(),
            ordered: 0,
            isolated: 0,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// Members in insertion order; row entries refer to these positions.
    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.position.contains_key(&x)
    }

    /// Ordered non-degenerate quadruple count.
    pub fn ordered_count(&self) -> u64 {
        self.ordered
    }

    pub fn isolated_count(&self) -> usize {
        self.isolated
    }

    /// Degree of each member, in insertion order.
    pub fn degrees(&self) -> &[u64] {
        &self.degree
    }

    pub fn degree(&self, x: Element) -> Option<u64> {
        self.position.get(&x).map(|&i| self.degree[i as usize])
    }

    /// Adds `a` and returns the relation rows of the new quadruple orbits.
    pub fn insert(&mut self, a: Element) -> Result<Vec<OrbitRow>> {
        self.group.check(a)?;
        if self.position.contains_key(&a) {
            return Err(Error::InvalidSubset(format!("element {a} inserted twice")));
        }
        let pa = self.members.len() as u32;
        self.members.push(a);
        self.position.insert(a, pa);
        self.degree.push(0);
        self.isolated += 1;

        let mut rows = Vec::new();
        for pb in 0..=pa {
            let b = self.members[pb as usize];
            let sum = self.group.add(a, b).0;
            let pair = [pb, pa];
            let bucket = self.buckets.entry(sum).or_default();
            for &other in bucket.iter() {
                let row = OrbitRow { plus: other, minus: pair };
                let size = row.ordered_size();
                self.ordered += size;
                let mut touched = [other[0], other[1], pair[0], pair[1]];
                touched.sort_unstable();
                let mut last = u32::MAX;
                for p in touched {
                    if p != last {
                        let d = &mut self.degree[p as usize];
                        if *d == 0 {
                            self.isolated -= 1;
                        }
                        *d += size;
                        last = p;
                    }
                }
                rows.push(row);
            }
            bucket.push(pair);
        }
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{enumerate_quadruples, SubsetSample};

    #[test]
    fn matches_batch_enumeration_on_small_group() {
        let g = GroupSpec::new(vec![3, 5]).unwrap();
        let order = [7u32, 0, 14, 3, 9, 1, 12, 5, 10, 2];
        let mut inc = IncrementalQuadruples::new(g.clone());
        for (step, &x) in order.iter().enumerate() {
            inc.insert(Element(x)).unwrap();
            let set = SubsetSample::from_indices(g.clone(), &order[..=step]).unwrap();
            let gamma = enumerate_quadruples(&set);
            assert_eq!(inc.ordered_count() as usize, gamma.len());
            for &y in &order[..=step] {
                assert_eq!(inc.degree(Element(y)), gamma.degree(Element(y)));
            }
            let isolated = gamma.degrees().iter().filter(|&&d| d == 0).count();
            assert_eq!(inc.isolated_count(), isolated);
        }
    }

    #[test]
    fn rejects_repeats() {
        let mut inc = IncrementalQuadruples::new(GroupSpec::cyclic(4).unwrap());
        inc.insert(Element(1)).unwrap();
        assert!(inc.insert(Element(1)).is_err());
        assert!(inc.insert(Element(4)).is_err());
    }
}
