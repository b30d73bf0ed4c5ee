//! Additive isolation and connectivity inside a set `U`.
//!
//! `W` is isolated when no `w` in `W` can be written as `v1 + v2 - v3` with
//! all `v_i` in `V = U \ W`. Such a representation with `w` outside
//! `{v1, v2}` is exactly a non-degenerate quadruple `v1 + v2 = w + v3`, so
//! all searches here run over the pair-sum buckets of `U`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::hom::free_budget;
use crate::sets::{PairSums, SubsetSample};

/// `{v1 + v2 - v3 : v_i in V}`.
pub fn sumset_vvv(g: &GroupSpec, v: &[Element]) -> BTreeSet<Element> {
    let n = g.order() as usize;
    let mut pair = vec![false; n];
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i..] {
            pair[g.add(a, b).index()] = true;
        }
    }
    let mut out = vec![false; n];
    for (s, _) in pair.iter().enumerate().filter(|(_, &hit)| hit) {
        for &c in v {
            out[g.sub(Element(s as u32), c).index()] = true;
        }
    }
    out.iter().enumerate().filter(|(_, &hit)| hit).map(|(x, _)| Element(x as u32)).collect()
}

/// For each position `w` of `U`, the position triples `(v3, v1, v2)` with
/// `v1 + v2 = w + v3` non-degenerate and `v3 != w`.
#[derive(Debug, Clone)]
pub struct Representations {
    reps: Vec<Vec<[u32; 3]>>,
}

impl Representations {
    pub fn build(set: &SubsetSample) -> Self {
        let mut reps = vec![Vec::new(); set.len()];
        for bucket in PairSums::build(set).buckets() {
            for (a, &(_, i, j)) in bucket.iter().enumerate() {
                if i == j {
                    continue;
                }
                for (b, &(_, k, l)) in bucket.iter().enumerate() {
                    if a != b {
                        reps[i as usize].push([j, k, l]);
                        reps[j as usize].push([i, k, l]);
                    }
                }
            }
        }
        Representations { reps }
    }

    pub fn of(&self, w: usize) -> &[[u32; 3]] {
        &self.reps[w]
    }

    /// Whether the positions flagged in `inside` form an isolated set.
    pub fn is_isolated(&self, inside: &[bool]) -> bool {
        inside
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .all(|(w, _)| self.reps[w].iter().all(|r| r.iter().any(|&p| inside[p as usize])))
    }
}

/// A nonempty `W` in `U` with `(V + V - V)` disjoint from `W`, `V = U \ W`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationWitness {
    #[serde(rename = "W")]
    w: Vec<Element>,
    #[serde(rename = "V")]
    v: Vec<Element>,
}

impl IsolationWitness {
    /// Checks the isolation condition from scratch.
    pub fn new(set: &SubsetSample, w: &[Element]) -> Result<Self> {
        if !is_isolated_subset(set, w)? {
            return Err(Error::InvalidSubset("subset is not additively isolated".into()));
        }
        let w: BTreeSet<Element> = w.iter().copied().collect();
        let v = set.elements().iter().copied().filter(|x| !w.contains(x)).collect();
        Ok(IsolationWitness { w: w.into_iter().collect(), v })
    }

    pub fn w(&self) -> &[Element] {
        &self.w
    }

    pub fn v(&self) -> &[Element] {
        &self.v
    }
}

/// Whether `W` misses `V + V - V` for `V = U \ W`.
pub fn is_isolated_subset(set: &SubsetSample, w: &[Element]) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::InvalidSubset("isolated subsets must be nonempty".into()));
    }
    if let Some(x) = w.iter().find(|&&x| !set.contains(x)) {
        return Err(Error::InvalidSubset(format!("{x} is not in the set")));
    }
    let v: Vec<Element> = set.elements().iter().copied().filter(|x| !w.contains(x)).collect();
    let s = sumset_vvv(set.group(), &v);
    Ok(w.iter().all(|x| !s.contains(x)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Connectivity {
    Connected,
    Witness(IsolationWitness),
    /// No isolated subset of size up to `searched` exists, but larger ones
    /// within the `eta` budget were not examined.
    Inconclusive { searched: usize },
}

/// Searches for an isolated `W` with `|W| <= min(floor(eta |U|), w_max)`.
///
/// Returns the smallest witness, lexicographically least among those.
pub fn is_additively_connected(set: &SubsetSample, eta: f64, w_max: usize) -> Result<Connectivity> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!("eta must lie in (0, 1], got {eta}")));
    }
    let budget = free_budget(eta, set.len());
    let cap = budget.min(w_max);
    let reps = Representations::build(set);
    for size in 1..=cap {
        if let Some(w) = smallest_isolated(&reps, set.len(), size) {
            let w: Vec<Element> = w.iter().map(|&p| set.elements()[p]).collect();
            return Ok(Connectivity::Witness(IsolationWitness::new(set, &w)?));
        }
    }
    if budget > cap {
        Ok(Connectivity::Inconclusive { searched: cap })
    } else {
        Ok(Connectivity::Connected)
    }
}

/// Lexicographically least isolated set of exactly `size` positions.
///
/// Branching: an isolated set containing `w` must meet every representation
/// of `w`, so while some representation is unmet we branch over its entries.
fn smallest_isolated(reps: &Representations, k: usize, size: usize) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    let mut inside = vec![false; k];
    for first in 0..k {
        if best.as_ref().is_some_and(|b| b[0] < first) {
            break;
        }
        inside[first] = true;
        let mut members = vec![first];
        grow(reps, &mut inside, &mut members, first, size, &mut best);
        inside[first] = false;
    }
    best
}

fn grow(
    reps: &Representations,
    inside: &mut [bool],
    members: &mut Vec<usize>,
    min: usize,
    size: usize,
    best: &mut Option<Vec<usize>>,
) {
    let unmet = members
        .iter()
        .flat_map(|&w| reps.of(w).iter())
        .find(|r| !r.iter().any(|&p| inside[p as usize]));
    match unmet {
        None => {
            if members.len() == size {
                let mut w = members.clone();
                w.sort_unstable();
                if best.as_ref().map_or(true, |b| w < *b) {
                    *best = Some(w);
                }
            }
        }
        Some(r) => {
            if members.len() == size {
                return;
            }
            let mut options: Vec<usize> = r.iter().map(|&p| p as usize).filter(|&p| p > min).collect();
            options.sort_unstable();
            options.dedup();
            for p in options {
                inside[p] = true;
                members.push(p);
                grow(reps, inside, members, min, size, best);
                members.pop();
                inside[p] = false;
            }
        }
    }
}

/// Least superset of `v0` inside `U` closed under adding `w = v1 + v2 - v3`.
pub fn propagate_affine(set: &SubsetSample, v0: &[Element]) -> Result<BTreeSet<Element>> {
    let k = set.len();
    let reps = Representations::build(set);
    // For each representation, how many of its distinct entries are still unknown.
    let mut owner = Vec::new();
    let mut missing = Vec::new();
    let mut watchers: Vec<Vec<u32>> = vec![Vec::new(); k];
    for w in 0..k {
        for r in reps.of(w) {
            let id = owner.len() as u32;
            owner.push(w as u32);
            let mut distinct = *r;
            distinct.sort_unstable();
            let mut count = 0u8;
            for (i, &p) in distinct.iter().enumerate() {
                if i == 0 || p != distinct[i - 1] {
                    watchers[p as usize].push(id);
                    count += 1;
                }
            }
            missing.push(count);
        }
    }
    let mut known = vec![false; k];
    let mut queue = Vec::new();
    for &x in v0 {
        let p = set.position(x).ok_or_else(|| Error::InvalidSubset(format!("{x} is not in the set")))?;
        if !known[p] {
            known[p] = true;
            queue.push(p);
        }
    }
    while let Some(p) = queue.pop() {
        for &id in &watchers[p] {
            missing[id as usize] -= 1;
            let w = owner[id as usize] as usize;
            if missing[id as usize] == 0 && !known[w] {
                known[w] = true;
                queue.push(w);
            }
        }
    }
    Ok(set.elements().iter().zip(&known).filter(|(_, &b)| b).map(|(&x, _)| x).collect())
}
