//! Fuzzy values: finitely supported nonnegative functions on a target group,
//! and the pipeline that recovers an affine map from a Freiman homomorphism.
//!
//! With `mu = (n / |U|) 1_U`, the triple-sum distribution is
//! `psi(x)(h) = E_{x1+x2+x3=x} mu(x1) mu(x2) mu(x3) [phi(x1)+phi(x2)+phi(x3) = h]`
//! `= n c(x, h) / |U|^3`, where `c` counts triples of `U` summing to `x` with
//! image sum `h`. Likewise `theta(x) = E_{x1-x2=x} psi(x1) * psi(x2)(-.)` equals
//! `n C(x, h) / |U|^6` for an integer count `C`. Both are kept as exact counts
//! and only scaled into a [`Scalar`] at the end.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::hom::{values_on, AffineWitness, ElementMap};
use crate::rng::rng_from_seed;
use crate::sets::SubsetSample;

/// Number type for fuzzy values: `f64` or exact `BigRational`.
pub trait Scalar:
    Clone + Debug + PartialOrd + Send + Sync + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_ratio(num: u128, den: u128) -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_ratio(num: u128, den: u128) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: u128, den: u128) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite threshold")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// A finitely supported nonnegative function on `target`; zeros are not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyDist<S> {
    target: GroupSpec,
    entries: BTreeMap<Element, S>,
    mass: S,
}

impl<S: Scalar> FuzzyDist<S> {
    /// The zero distribution.
    pub fn new(target: GroupSpec) -> Self {
        FuzzyDist { target, entries: BTreeMap::new(), mass: S::zero() }
    }

    /// Sums repeated entries; rejects negative values.
    pub fn from_entries(target: GroupSpec, entries: impl IntoIterator<Item = (Element, S)>) -> Result<Self> {
        let mut d = FuzzyDist::new(target);
        for (h, v) in entries {
            d.target.check(h)?;
            if v < S::zero() {
                return Err(Error::InvalidParameter("fuzzy values must be nonnegative".into()));
            }
            d.add_at(h, v);
        }
        Ok(d)
    }

    /// `delta_a` scaled by `weight`.
    pub fn point(target: GroupSpec, a: Element, weight: S) -> Self {
        let mut d = FuzzyDist::new(target);
        d.add_at(a, weight);
        d
    }

    pub fn delta(target: GroupSpec, a: Element) -> Self {
        Self::point(target, a, S::one())
    }

    fn add_at(&mut self, h: Element, v: S) {
        if v.is_zero() {
            return;
        }
        self.mass = self.mass.clone() + v.clone();
        let slot = self.entries.entry(h).or_insert_with(S::zero);
        *slot = slot.clone() + v;
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn get(&self, h: Element) -> S {
        self.entries.get(&h).cloned().unwrap_or_else(S::zero)
    }

    pub fn mass(&self) -> &S {
        &self.mass
    }

    pub fn entries(&self) -> impl Iterator<Item = (Element, &S)> + '_ {
        self.entries.iter().map(|(&h, v)| (h, v))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `h -> p(-h)`.
    pub fn reflect(&self) -> Self {
        let mut d = FuzzyDist::new(self.target.clone());
        for (&h, v) in &self.entries {
            d.add_at(self.target.neg(h), v.clone());
        }
        d
    }

    /// Largest value, ties going to the least index.
    pub fn argmax(&self) -> Option<(Element, &S)> {
        let mut best: Option<(Element, &S)> = None;
        for (&h, v) in &self.entries {
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((h, v));
            }
        }
        best
    }
}

/// `(p * q)(h) = sum_{h1 + h2 = h} p(h1) q(h2)`.
pub fn fuzzy_convolve<S: Scalar>(p: &FuzzyDist<S>, q: &FuzzyDist<S>) -> Result<FuzzyDist<S>> {
    if p.target != q.target {
        return Err(Error::TargetMismatch);
    }
    let mut out = FuzzyDist::new(p.target.clone());
    for (&a, x) in &p.entries {
        for (&b, y) in &q.entries {
            out.add_at(p.target.add(a, b), x.clone() * y.clone());
        }
    }
    Ok(out)
}

/// `<p, q> = sum_h p(h) q(h)`.
pub fn fuzzy_inner<S: Scalar>(p: &FuzzyDist<S>, q: &FuzzyDist<S>) -> Result<S> {
    if p.target != q.target {
        return Err(Error::TargetMismatch);
    }
    let (small, large) = if p.entries.len() <= q.entries.len() { (p, q) } else { (q, p) };
    Ok(small.entries.iter().fold(S::zero(), |acc, (h, v)| match large.entries.get(h) {
        Some(w) => acc + v.clone() * w.clone(),
        None => acc,
    }))
}

/// `d(p, q) = 1 - <p, q>`; may be negative.
pub fn fuzzy_distance<S: Scalar>(p: &FuzzyDist<S>, q: &FuzzyDist<S>) -> Result<S> {
    Ok(S::one() - fuzzy_inner(p, q)?)
}

/// A map from the elements of `domain` to fuzzy values on `target`; absent
/// arguments carry the zero distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyMap<S> {
    domain: GroupSpec,
    target: GroupSpec,
    values: BTreeMap<Element, FuzzyDist<S>>,
}

impl<S: Scalar> FuzzyMap<S> {
    pub fn new(domain: GroupSpec, target: GroupSpec) -> Self {
        FuzzyMap { domain, target, values: BTreeMap::new() }
    }

    pub fn domain(&self) -> &GroupSpec {
        &self.domain
    }

    pub fn target(&self) -> &GroupSpec {
        &self.target
    }

    pub fn get(&self, x: Element) -> Option<&FuzzyDist<S>> {
        self.values.get(&x)
    }

    /// Zero distributions are dropped.
    pub fn insert(&mut self, x: Element, d: FuzzyDist<S>) -> Result<()> {
        if d.target != self.target {
            return Err(Error::TargetMismatch);
        }
        if d.is_zero() {
            self.values.remove(&x);
        } else {
            self.values.insert(x, d);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, &FuzzyDist<S>)> + '_ {
        self.values.iter().map(|(&x, d)| (x, d))
    }
}

/// `mu(x) = n / |U|` on `U`, zero elsewhere.
pub fn char_measure<S: Scalar>(set: &SubsetSample) -> Result<Vec<S>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = set.group().order() as u128;
    let value = S::from_ratio(n, set.len() as u128);
    let mut mu = vec![S::zero(); n as usize];
    for &x in set.elements() {
        mu[x.index()] = value.clone();
    }
    Ok(mu)
}

/// Integer counts `c(x, h)` behind `psi`: triples of `U` with sum `x` and
/// image sum `h`.
#[derive(Debug, Clone)]
pub struct TripleCounts {
    domain: GroupSpec,
    target: GroupSpec,
    set_size: u128,
    counts: Vec<BTreeMap<Element, u64>>,
}

impl TripleCounts {
    pub fn build(set: &SubsetSample, target: &GroupSpec, phi: &ElementMap) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let values = values_on(set, target, phi)?;
        let g = set.group();
        let elems = set.elements();
        let mut pairs: BTreeMap<(Element, Element), u64> = BTreeMap::new();
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                *pairs.entry((g.add(a, b), target.add(values[i], values[j]))).or_default() += 1;
            }
        }
        let mut counts = vec![BTreeMap::new(); g.order() as usize];
        for (&(s, hs), &c) in &pairs {
            for (k, &u) in elems.iter().enumerate() {
                *counts[g.add(s, u).index()].entry(target.add(hs, values[k])).or_default() += c;
            }
        }
        Ok(TripleCounts { domain: g.clone(), target: target.clone(), set_size: elems.len() as u128, counts })
    }

    pub fn count(&self, x: Element, h: Element) -> u64 {
        self.counts[x.index()].get(&h).copied().unwrap_or(0)
    }

    /// `psi` as fuzzy values.
    pub fn to_map<S: Scalar>(&self) -> FuzzyMap<S> {
        let n = self.domain.order() as u128;
        let den = self.set_size.pow(3);
        let mut map = FuzzyMap::new(self.domain.clone(), self.target.clone());
        for (x, row) in self.counts.iter().enumerate() {
            let d = FuzzyDist::from_entries(
                self.target.clone(),
                row.iter().map(|(&h, &c)| (h, S::from_ratio(n * c as u128, den))),
            )
            .expect("counts are nonnegative");
            map.insert(Element(x as u32), d).expect("same target");
        }
        map
    }

    /// Counts `C(x, h) = sum_{x2} sum_{h1 - h2 = h} c(x + x2, h1) c(x2, h2)`
    /// behind `theta`, for each `x` of `domain`.
    pub fn theta_counts(&self, domain: &[Element]) -> ThetaCounts {
        let g = &self.domain;
        let h = &self.target;
        let support: Vec<(Element, &BTreeMap<Element, u64>)> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, row)| !row.is_empty())
            .map(|(x, row)| (Element(x as u32), row))
            .collect();
        let rows: Vec<(Element, BTreeMap<Element, u128>)> = domain
            .par_iter()
            .map(|&x| {
                let mut acc: BTreeMap<Element, u128> = BTreeMap::new();
                for &(x2, right) in &support {
                    let left = &self.counts[g.add(x, x2).index()];
                    if left.is_empty() {
                        continue;
                    }
                    for (&h1, &c1) in left {
                        for (&h2, &c2) in right {
                            *acc.entry(h.sub(h1, h2)).or_default() += c1 as u128 * c2 as u128;
                        }
                    }
                }
                (x, acc)
            })
            .collect();
        ThetaCounts {
            domain: g.clone(),
            target: h.clone(),
            set_size: self.set_size,
            rows: rows.into_iter().collect(),
        }
    }
}

/// Integer counts behind `theta` on a chosen set of arguments.
#[derive(Debug, Clone)]
pub struct ThetaCounts {
    domain: GroupSpec,
    target: GroupSpec,
    set_size: u128,
    rows: BTreeMap<Element, BTreeMap<Element, u128>>,
}

impl ThetaCounts {
    pub fn arguments(&self) -> impl Iterator<Item = Element> + '_ {
        self.rows.keys().copied()
    }

    pub fn to_map<S: Scalar>(&self) -> FuzzyMap<S> {
        let n = self.domain.order() as u128;
        let den = self.set_size.pow(6);
        let mut map = FuzzyMap::new(self.domain.clone(), self.target.clone());
        for (&x, row) in &self.rows {
            let d = FuzzyDist::from_entries(self.target.clone(), row.iter().map(|(&h, &c)| (h, ratio::<S>(n, c, den))))
                .expect("counts are nonnegative");
            map.insert(x, d).expect("same target");
        }
        map
    }
}

// n * c / den without overflowing the numerator.
fn ratio<S: Scalar>(n: u128, c: u128, den: u128) -> S {
    match n.checked_mul(c) {
        Some(num) => S::from_ratio(num, den),
        None => S::from_ratio(c, den) * S::from_ratio(n, 1),
    }
}

/// `psi` for `phi: U -> target`.
pub fn build_psi<S: Scalar>(set: &SubsetSample, target: &GroupSpec, phi: &ElementMap) -> Result<FuzzyMap<S>> {
    Ok(TripleCounts::build(set, target, phi)?.to_map())
}

/// `theta(x) = E_{x1 - x2 = x} psi(x1) * psi_-(x2)` with `psi_-(y)(h) = psi(y)(-h)`,
/// evaluated at each `x` of `domain`.
pub fn build_theta<S: Scalar>(psi: &FuzzyMap<S>, domain: &[Element]) -> FuzzyMap<S> {
    let g = psi.domain();
    let inv_n = S::from_ratio(1, g.order() as u128);
    let reflected: Vec<(Element, FuzzyDist<S>)> = psi.iter().map(|(x, d)| (x, d.reflect())).collect();
    let mut theta = FuzzyMap::new(g.clone(), psi.target().clone());
    for &x in domain {
        let mut acc = FuzzyDist::new(psi.target().clone());
        for (x2, minus) in &reflected {
            if let Some(plus) = psi.get(g.add(x, *x2)) {
                let conv = fuzzy_convolve(plus, minus).expect("same target");
                for (h, v) in conv.entries() {
                    acc.add_at(h, v.clone() * inv_n.clone());
                }
            }
        }
        theta.insert(x, acc).expect("same target");
    }
    theta
}

/// Arguments at which `theta` is evaluated: all of `G` when `n <= full_limit`,
/// otherwise `0`, the generators and `sample` further elements drawn with `seed`.
pub fn theta_domain(g: &GroupSpec, full_limit: u32, sample: usize, seed: u64) -> Vec<Element> {
    if g.order() <= full_limit {
        return g.elements().collect();
    }
    let mut points: Vec<Element> = std::iter::once(Element::ZERO).chain((0..g.rank()).map(|j| g.generator(j))).collect();
    let mut rng = rng_from_seed(seed);
    let take = sample.min(g.order() as usize);
    points.extend(index::sample(&mut rng, g.order() as usize, take).into_iter().map(|i| Element(i as u32)));
    points.sort_unstable();
    points.dedup();
    points
}

/// Result of reading a homomorphism off `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaExtraction {
    /// `argmax theta(x)` wherever the maximum reaches the threshold.
    pub gamma: BTreeMap<Element, Element>,
    /// `max_h theta(x)(h)` for every examined `x`.
    pub max_mass: BTreeMap<Element, f64>,
    /// `gamma` is defined at every examined argument.
    pub total: bool,
    /// Failed homomorphism checks among points where `gamma` is defined.
    pub violations: usize,
    /// Images of the standard generators, when all are defined.
    pub generator_images: Option<Vec<Element>>,
}

/// Thresholded argmax of `theta` over `domain`, with homomorphism checks.
///
/// On all of `G` the checks are `gamma(0) = 0` and
/// `gamma(x + e_j) = gamma(x) + gamma(e_j)`; on a partial domain they are
/// `gamma(0) = 0`, `d_j gamma(e_j) = 0` and agreement with the extension from
/// the generators.
pub fn extract_gamma<S: Scalar>(theta: &FuzzyMap<S>, threshold: f64, domain: &[Element]) -> GammaExtraction {
    let g = theta.domain();
    let h = theta.target();
    let cut = S::from_f64(threshold);
    let mut gamma = BTreeMap::new();
    let mut max_mass = BTreeMap::new();
    for &x in domain {
        match theta.get(x).and_then(|d| d.argmax()) {
            Some((arg, v)) => {
                max_mass.insert(x, v.to_f64());
                if *v >= cut {
                    gamma.insert(x, arg);
                }
            }
            None => {
                max_mass.insert(x, 0.0);
            }
        }
    }
    let total = domain.iter().all(|x| gamma.contains_key(x));
    let generator_images: Option<Vec<Element>> =
        (0..g.rank()).map(|j| gamma.get(&g.generator(j)).copied()).collect();

    let mut violations = 0;
    if gamma.get(&Element::ZERO).is_some_and(|&z| z != Element::ZERO) {
        violations += 1;
    }
    let full = domain.len() == g.order() as usize;
    if full {
        for (&x, &gx) in &gamma {
            for j in 0..g.rank() {
                let e = g.generator(j);
                if let (Some(&ge), Some(&gxe)) = (gamma.get(&e), gamma.get(&g.add(x, e))) {
                    if gxe != h.add(gx, ge) {
                        violations += 1;
                    }
                }
            }
        }
    } else if let Some(images) = &generator_images {
        for (j, &d) in g.factors().iter().enumerate() {
            if h.scale(d as i64, images[j]) != Element::ZERO {
                violations += 1;
            }
        }
        for (&x, &gx) in &gamma {
            if extend(g, h, images, x) != gx {
                violations += 1;
            }
        }
    }
    GammaExtraction { gamma, max_mass, total, violations, generator_images }
}

fn extend(g: &GroupSpec, h: &GroupSpec, images: &[Element], x: Element) -> Element {
    g.decode(x)
        .iter()
        .zip(images)
        .fold(Element::ZERO, |acc, (&d, &img)| h.add(acc, h.scale(d as i64, img)))
}

/// Counts of `max_h theta(x)(h)` in the bins `[0, 0.1), ..., [0.9, 1.0), [1.0, inf)`.
pub fn mass_histogram(max_mass: &BTreeMap<Element, f64>) -> Vec<usize> {
    let mut bins = vec![0usize; 11];
    for &m in max_mass.values() {
        let b = if m >= 1.0 { 10 } else { ((m * 10.0).floor().max(0.0) as usize).min(9) };
        bins[b] += 1;
    }
    bins
}

/// Settings for [`extract_affine`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    pub threshold: f64,
    /// Evaluate `theta` on all of `G` up to this order.
    pub full_limit: u32,
    /// Extra random arguments above `full_limit`.
    pub sample: usize,
    pub seed: u64,
    /// Use exact rationals up to this `|U|`, floats above.
    pub exact_limit: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { threshold: 0.5, full_limit: 5000, sample: 64, seed: 0, exact_limit: 60 }
    }
}

/// JSON report of an extraction run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionReport {
    pub gamma_total: bool,
    pub violations: usize,
    pub shift: Option<u32>,
    pub agreement: f64,
    pub per_x_max_mass: Vec<usize>,
    /// Affine map `x -> gamma(x) + shift`, when `gamma` is a total homomorphism.
    pub alpha: Option<AffineWitness>,
}

/// Runs `psi -> theta -> gamma` and picks the shift by majority vote of
/// `phi(u) - gamma(u)` over `u` in `U` (ties to the least index).
pub fn extraction_report(
    set: &SubsetSample,
    target: &GroupSpec,
    phi: &ElementMap,
    opts: &ExtractOptions,
) -> Result<ExtractionReport> {
    let g = set.group();
    let counts = TripleCounts::build(set, target, phi)?;
    let domain = theta_domain(g, opts.full_limit, opts.sample, opts.seed);
    let theta_counts = counts.theta_counts(&domain);
    let gamma = if set.len() <= opts.exact_limit {
        extract_gamma(&theta_counts.to_map::<BigRational>(), opts.threshold, &domain)
    } else {
        extract_gamma(&theta_counts.to_map::<f64>(), opts.threshold, &domain)
    };

    let values = values_on(set, target, phi)?;
    let mut report = ExtractionReport {
        gamma_total: gamma.total,
        violations: gamma.violations,
        shift: None,
        agreement: 0.0,
        per_x_max_mass: mass_histogram(&gamma.max_mass),
        alpha: None,
    };
    let Some(images) = &gamma.generator_images else { return Ok(report) };

    let linear: Vec<Element> = set.elements().iter().map(|&u| extend(g, target, images, u)).collect();
    let mut votes = vec![0usize; target.order() as usize];
    for (v, l) in values.iter().zip(&linear) {
        votes[target.sub(*v, *l).index()] += 1;
    }
    let best = votes.iter().max().copied().unwrap_or(0);
    let shift = votes.iter().position(|&c| c == best).unwrap_or(0) as u32;
    let agree = values.iter().zip(&linear).filter(|(v, l)| target.add(**l, Element(shift)) == **v).count();
    report.shift = Some(shift);
    report.agreement = agree as f64 / set.len() as f64;
    if gamma.total && gamma.violations == 0 {
        report.alpha = Some(AffineWitness { hom: images.iter().map(|e| e.0).collect(), shift });
    }
    Ok(report)
}

/// The affine map recovered from `phi` and its agreement with `phi` on `U`,
/// or `None` when `gamma` is not a total homomorphism.
pub fn extract_affine(
    set: &SubsetSample,
    target: &GroupSpec,
    phi: &ElementMap,
    opts: &ExtractOptions,
) -> Result<Option<(AffineWitness, f64)>> {
    let report = extraction_report(set, target, phi, opts)?;
    Ok(report.alpha.map(|a| (a, report.agreement)))
}
