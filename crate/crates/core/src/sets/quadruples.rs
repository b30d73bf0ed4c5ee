use std::collections::BTreeSet;

use serde::Serialize;

use crate::group::{Element, GroupSpec};
use crate::sets::SubsetSample;

/// One orbit of non-degenerate quadruples under the symmetries
/// `(x,y,z,w) -> (y,x,z,w), (x,y,w,z), (z,w,x,y)`, stored as the relation
/// `e_plus[0] + e_plus[1] - e_minus[0] - e_minus[1]` over positions in the set.
///
/// `plus` and `minus` are disjoint; a repeated entry carries coefficient 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitRow {
    pub plus: [u32; 2],
    pub minus: [u32; 2],
}

impl OrbitRow {
    /// Nonzero entries of the relation as `(position, coefficient)`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, i64)> {
        let [a, b] = self.plus;
        let [c, d] = self.minus;
        let plus = if a == b { [(a, 2), (u32::MAX, 0)] } else { [(a, 1), (b, 1)] };
        let minus = if c == d { [(c, -2), (u32::MAX, 0)] } else { [(c, -1), (d, -1)] };
        plus.into_iter().chain(minus).filter(|&(_, k)| k != 0)
    }

    /// Number of ordered quadruples in this orbit.
    pub fn ordered_size(&self) -> u64 {
        let ord = |p: [u32; 2]| if p[0] == p[1] { 1 } else { 2 };
        2 * ord(self.plus) * ord(self.minus)
    }
}

/// Unordered pairs `{u, v}` of a set, bucketed by their sum.
///
/// Two distinct pairs in the same bucket form exactly one orbit of
/// non-degenerate additive quadruples, so every count in this module is read
/// off the bucket sizes.
#[derive(Debug, Clone)]
pub struct PairSums {
    size: usize,
    // (sum, i, j) with i <= j, sorted.
    pairs: Vec<(u32, u32, u32)>,
    bounds: Vec<usize>,
}

impl PairSums {
    pub fn build(set: &SubsetSample) -> Self {
        let g = set.group();
        let elems = set.elements();
        let k = elems.len();
        let mut pairs = Vec::with_capacity(k * (k + 1) / 2);
        for i in 0..k {
            for j in i..k {
                pairs.push((g.add(elems[i], elems[j]).0, i as u32, j as u32));
            }
        }
        pairs.sort_unstable();
        let mut bounds = vec![0];
        for idx in 1..pairs.len() {
            if pairs[idx].0 != pairs[idx - 1].0 {
                bounds.push(idx);
            }
        }
        bounds.push(pairs.len());
        if pairs.is_empty() {
            bounds = vec![0];
        }
        PairSums { size: k, pairs, bounds }
    }

    /// Number of elements of the underlying set.
    pub fn set_size(&self) -> usize {
        self.size
    }

    /// Buckets of pairs sharing a sum, as `(sum, [(i, j)])` in increasing sum order.
    pub fn buckets(&self) -> impl Iterator<Item = &[(u32, u32, u32)]> + '_ {
        self.bounds.windows(2).map(move |w| &self.pairs[w[0]..w[1]])
    }

    /// Largest number of unordered pairs sharing one sum.
    pub fn max_bucket(&self) -> usize {
        self.buckets().map(|b| b.len()).max().unwrap_or(0)
    }

    /// One relation row per orbit of non-degenerate quadruples.
    pub fn orbit_rows(&self) -> impl Iterator<Item = OrbitRow> + '_ {
        self.buckets().flat_map(|bucket| {
            (0..bucket.len()).flat_map(move |a| {
                (a + 1..bucket.len()).map(move |b| OrbitRow {
                    plus: [bucket[a].1, bucket[a].2],
                    minus: [bucket[b].1, bucket[b].2],
                })
            })
        })
    }

    pub fn orbit_count(&self) -> u64 {
        self.buckets().map(|b| (b.len() * (b.len() - 1) / 2) as u64).sum()
    }

    /// Number of ordered non-degenerate quadruples `|Gamma_A|`.
    pub fn ordered_count(&self) -> u64 {
        self.buckets()
            .map(|b| {
                let (s, sq) = b.iter().fold((0u64, 0u64), |(s, sq), &(_, i, j)| {
                    let o = if i == j { 1 } else { 2 };
                    (s + o, sq + o * o)
                });
                s * s - sq
            })
            .sum()
    }

    /// Ordered additive energy: solutions of `x + y = z + w` in `A^4`,
    /// degenerate ones included.
    pub fn energy(&self) -> u64 {
        self.buckets()
            .map(|b| {
                let s: u64 = b.iter().map(|&(_, i, j)| if i == j { 1 } else { 2 }).sum();
                s * s
            })
            .sum()
    }

    /// Per-position count of ordered quadruples containing that element.
    pub fn degrees(&self) -> Vec<u64> {
        let mut degree = vec![0u64; self.size];
        for bucket in self.buckets() {
            let total: u64 = bucket.iter().map(|&(_, i, j)| if i == j { 1 } else { 2 }).sum();
            for &(_, i, j) in bucket {
                let o = if i == j { 1 } else { 2 };
                let contrib = 2 * o * (total - o);
                degree[i as usize] += contrib;
                if i != j {
                    degree[j as usize] += contrib;
                }
            }
        }
        degree
    }
}

/// All ordered non-degenerate additive quadruples of a set, with the number
/// of quadruples containing each element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadrupleSet {
    elements: Vec<Element>,
    quadruples: Vec<[Element; 4]>,
    degree: Vec<u64>,
}

impl QuadrupleSet {
    /// Elements of the set the quadruples were drawn from.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Quadruples in lexicographic order.
    pub fn quadruples(&self) -> &[[Element; 4]] {
        &self.quadruples
    }

    pub fn len(&self) -> usize {
        self.quadruples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quadruples.is_empty()
    }

    /// Degree of the element at position `i` of [`elements`](Self::elements).
    pub fn degree_at(&self, i: usize) -> u64 {
        self.degree[i]
    }

    pub fn degree(&self, x: Element) -> Option<u64> {
        self.elements.binary_search(&x).ok().map(|i| self.degree[i])
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degree
    }

    /// Quadruples containing `x` in some position (the set `Gamma_x`).
    pub fn containing(&self, x: Element) -> impl Iterator<Item = &[Element; 4]> + '_ {
        self.quadruples.iter().filter(move |q| q.contains(&x))
    }
}

/// Lists every ordered `(x, y, z, w)` in `A^4` with `x + y = z + w` and
/// `x, y` not in `{z, w}`.
///
/// Pairs are bucketed by sum, so the cost is `O(|A|^2 log |A| + |Gamma_A|)`.
pub fn enumerate_quadruples(set: &SubsetSample) -> QuadrupleSet {
    let sums = PairSums::build(set);
    let elems = set.elements();
    let mut quadruples = Vec::with_capacity(sums.ordered_count() as usize);
    for bucket in sums.buckets() {
        // Ordered pairs in this bucket, tagged with the unordered pair they came from.
        let ordered: Vec<(usize, Element, Element)> = bucket
            .iter()
            .enumerate()
            .flat_map(|(tag, &(_, i, j))| {
                let (x, y) = (elems[i as usize], elems[j as usize]);
                let mut v = vec![(tag, x, y)];
                if i != j {
                    v.push((tag, y, x));
                }
                v
            })
            .collect();
        for &(t1, x, y) in &ordered {
            for &(t2, z, w) in &ordered {
                if t1 != t2 {
                    quadruples.push([x, y, z, w]);
                }
            }
        }
    }
    quadruples.sort_unstable();
    QuadrupleSet { elements: elems.to_vec(), quadruples, degree: sums.degrees() }
}

/// Elements of `A` lying in no non-degenerate additive quadruple of `A`.
pub fn isolated_elements(set: &SubsetSample) -> BTreeSet<Element> {
    let degree = PairSums::build(set).degrees();
    set.elements().iter().zip(degree).filter(|&(_, d)| d == 0).map(|(&x, _)| x).collect()
}

/// Brute-force reference: scan all of `A^4`.
pub fn enumerate_quadruples_naive(g: &GroupSpec, elems: &[Element]) -> Vec<[Element; 4]> {
    let mut out = Vec::new();
    for &x in elems {
        for &y in elems {
            let s = g.add(x, y);
            for &z in elems {
                for &w in elems {
                    if g.add(z, w) == s && x != z && x != w && y != z && y != w {
                        out.push([x, y, z, w]);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(factors: Vec<u32>, idx: &[u32]) -> SubsetSample {
        SubsetSample::from_indices(GroupSpec::new(factors).unwrap(), idx).unwrap()
    }

    fn q(v: [u32; 4]) -> [Element; 4] {
        v.map(Element)
    }

    #[test]
    fn three_term_progression_in_z5() {
        let gamma = enumerate_quadruples(&set(vec![5], &[0, 1, 2]));
        assert_eq!(
            gamma.quadruples(),
            &[q([0, 2, 1, 1]), q([1, 1, 0, 2]), q([1, 1, 2, 0]), q([2, 0, 1, 1])]
        );
    }

    #[test]
    fn half_period_pair_in_z6() {
        let a = set(vec![6], &[0, 1, 3]);
        let gamma = enumerate_quadruples(&a);
        assert_eq!(gamma.quadruples(), &[q([0, 0, 3, 3]), q([3, 3, 0, 0])]);
        assert_eq!(gamma.degrees(), &[2, 0, 2]);
        assert_eq!(isolated_elements(&a).into_iter().collect::<Vec<_>>(), vec![Element(1)]);
    }

    #[test]
    fn singleton_and_empty() {
        let a = set(vec![7], &[0]);
        assert!(enumerate_quadruples(&a).is_empty());
        assert_eq!(isolated_elements(&a).len(), 1);
        let e = set(vec![7], &[]);
        assert!(enumerate_quadruples(&e).is_empty());
        assert!(isolated_elements(&e).is_empty());
    }

    #[test]
    fn whole_z5_has_no_isolated_elements() {
        let a = SubsetSample::full(GroupSpec::cyclic(5).unwrap());
        assert!(isolated_elements(&a).is_empty());
    }

    #[test]
    fn counts_agree_with_listing() {
        let a = set(vec![3, 4], &[0, 1, 2, 5, 7, 8, 11]);
        let sums = PairSums::build(&a);
        let gamma = enumerate_quadruples(&a);
        assert_eq!(sums.ordered_count() as usize, gamma.len());
        let orbit_total: u64 = sums.orbit_rows().map(|r| r.ordered_size()).sum();
        assert_eq!(orbit_total as usize, gamma.len());
        for (i, &x) in a.elements().iter().enumerate() {
            assert_eq!(gamma.degree_at(i) as usize, gamma.containing(x).count());
        }
    }

    #[test]
    fn orbit_row_entries() {
        let r = OrbitRow { plus: [0, 2], minus: [1, 1] };
        assert_eq!(r.entries().collect::<Vec<_>>(), vec![(0, 1), (2, 1), (1, -2)]);
        assert_eq!(r.ordered_size(), 4);
    }
}
