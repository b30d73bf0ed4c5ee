//! Measured quantities: the quadruple average `M(f)`, representation counts,
//! triple convolutions of normalized indicators, and Fourier norms.
//!
//! Convolutions use expectation normalization, `f * g (x) = E_{y+z=x} f(y) g(z)`,
//! so for `mu_i = (n / |U_i|) 1_{U_i}` every convolution value is `n` times a
//! representation count divided by the product of set sizes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{dft_fast, Character, Element, GroupSpec};
use crate::hom::{values_on, ElementMap};
use crate::sets::{PairSums, QuadrupleSet, SubsetSample};

/// `M(f) = E_{(x,y,z,w) in Gamma} f(x) f(y) conj(f(z) f(w))` over the stored quadruples.
pub fn m_value(f: &[Complex64], gamma: &QuadrupleSet) -> Result<Complex64> {
    if gamma.is_empty() {
        return Err(Error::EmptyQuadruples);
    }
    let total: Complex64 = gamma
        .quadruples()
        .iter()
        .map(|&[x, y, z, w]| f[x.index()] * f[y.index()] * (f[z.index()] * f[w.index()]).conj())
        .sum();
    Ok(total / gamma.len() as f64)
}

/// [`m_value`] for the quadruples of `set`, summed bucket by bucket without
/// listing them: within a bucket the total is `|S|^2 - sum_P |T_P|^2`, where
/// `T_P` sums `f(x) f(y)` over the orderings of the pair `P` and `S = sum_P T_P`.
pub fn m_value_of_set(f: &[Complex64], set: &SubsetSample) -> Result<Complex64> {
    let sums = PairSums::build(set);
    if sums.ordered_count() == 0 {
        return Err(Error::EmptyQuadruples);
    }
    let elems = set.elements();
    let mut total = Complex64::new(0.0, 0.0);
    for bucket in sums.buckets() {
        let mut s = Complex64::new(0.0, 0.0);
        let mut diag = 0.0;
        for &(_, i, j) in bucket {
            let prod = f[elems[i as usize].index()] * f[elems[j as usize].index()];
            let t = if i == j { prod } else { prod * 2.0 };
            s += t;
            diag += t.norm_sqr();
        }
        total += s.norm_sqr() - diag;
    }
    Ok(total / sums.ordered_count() as f64)
}

/// `mu` as a complex function on `G`.
pub fn measure(set: &SubsetSample) -> Result<Vec<Complex64>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = set.group().order() as usize;
    let v = n as f64 / set.len() as f64;
    let mut mu = vec![Complex64::new(0.0, 0.0); n];
    for &x in set.elements() {
        mu[x.index()] = Complex64::new(v, 0.0);
    }
    Ok(mu)
}

/// `f = mu (chi o phi)`, supported on `U`.
pub fn twisted_measure(set: &SubsetSample, target: &GroupSpec, phi: &ElementMap, chi: Character) -> Result<Vec<Complex64>> {
    let values = values_on(set, target, phi)?;
    let mut f = measure(set)?;
    for (&x, &v) in set.elements().iter().zip(&values) {
        f[x.index()] *= target.char_eval(chi, v);
    }
    Ok(f)
}

/// Pair-sum counts: `r(x) = #{(u1, u2) in U1 x U2 : u1 + u2 = x}`.
fn pair_counts(g: &GroupSpec, u1: &[Element], u2: &[Element]) -> Vec<u64> {
    let mut r = vec![0u64; g.order() as usize];
    for &a in u1 {
        for &b in u2 {
            r[g.add(a, b).index()] += 1;
        }
    }
    r
}

/// `max_x #{(u1, u2) in U1 x U2 : u1 + u2 = x}`.
pub fn max_pair_representation(g: &GroupSpec, u1: &[Element], u2: &[Element]) -> u64 {
    pair_counts(g, u1, u2).into_iter().max().unwrap_or(0)
}

/// Exact range of a convolution over `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvRange {
    pub min: BigRational,
    pub max: BigRational,
}

impl ConvRange {
    pub fn as_f64(&self) -> (f64, f64) {
        (self.min.to_f64().unwrap(), self.max.to_f64().unwrap())
    }
}

/// Minimum and maximum over `G` of `mu_1 * mu_2 * mu_3^-`, `mu_3^-(x) = mu_3(-x)`.
pub fn triple_conv_range(u1: &SubsetSample, u2: &SubsetSample, u3: &SubsetSample) -> Result<ConvRange> {
    let g = u1.group();
    if u2.group() != g || u3.group() != g {
        return Err(Error::InvalidSubset("sets live in different groups".into()));
    }
    if u1.is_empty() || u2.is_empty() || u3.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.order() as usize;
    let r = pair_counts(g, u1.elements(), u2.elements());
    // t(x) = #{u1 + u2 - u3 = x} = sum_{u3} r(x + u3)
    let mut t = vec![0u64; n];
    for &c in u3.elements() {
        let c = c.index();
        if g.is_cyclic() {
            for (x, tx) in t.iter_mut().enumerate() {
                let s = if x + c >= n { x + c - n } else { x + c };
                *tx += r[s];
            }
        } else {
            for (x, tx) in t.iter_mut().enumerate() {
                *tx += r[g.add(Element(x as u32), Element(c as u32)).index()];
            }
        }
    }
    let (lo, hi) = t.iter().fold((u64::MAX, 0), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let den = BigInt::from(u1.len()) * u2.len() * u3.len();
    let scale = |c: u64| BigRational::new(BigInt::from(c) * n, den.clone());
    Ok(ConvRange { min: scale(lo), max: scale(hi) })
}

/// `mu * mu * mu` as exact values `n t(x) / |U|^3`, with `t(x)` the number of
/// triples of `U` summing to `x`.
pub fn triple_sum_counts(set: &SubsetSample) -> Vec<u64> {
    let g = set.group();
    let r = pair_counts(g, set.elements(), set.elements());
    let mut t = vec![0u64; g.order() as usize];
    for (s, &c) in r.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for &u in set.elements() {
            t[g.add(Element(s as u32), u).index()] += c;
        }
    }
    t
}

/// `sup_x |mu * mu * mu (x) - 1|`, exactly.
pub fn sup_mu3_deviation(set: &SubsetSample) -> Result<BigRational> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = set.group().order() as u64;
    let den = BigInt::from(set.len()).pow(3);
    let t = triple_sum_counts(set);
    let (lo, hi) = t.iter().fold((u64::MAX, 0), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let one = BigRational::from_integer(1.into());
    let dev = |c: u64| (BigRational::new(BigInt::from(c) * n, den.clone()) - &one).abs();
    Ok(std::cmp::max(dev(lo), dev(hi)))
}

/// `||f^||_p^p = sum_tau |f^(tau)|^p`.
fn dual_power_sum(g: &GroupSpec, f: &[Complex64], p: i32) -> f64 {
    dft_fast(g, f).iter().map(|c| c.norm().powi(p)).sum()
}

/// `||f^||_12^12` for `f = mu (chi o phi)`.
pub fn l12_fourier(set: &SubsetSample, target: &GroupSpec, phi: &ElementMap, chi: Character) -> Result<f64> {
    let f = twisted_measure(set, target, phi, chi)?;
    Ok(dual_power_sum(set.group(), &f, 12))
}

/// `||f^||_4^4`, the fourth power of the `U^2` norm.
pub fn u2_energy(g: &GroupSpec, f: &[Complex64]) -> f64 {
    dual_power_sum(g, f, 4)
}

/// Summary of the measured quantities of one set.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct DiagnosticsReport {
    pub M_mu: Option<f64>,
    pub l12_by_character: BTreeMap<u32, f64>,
    pub sup_mu3_minus_1: f64,
    pub max_pair_rep: u64,
    pub energy_ordered: u64,
    pub notes: Vec<String>,
}

/// Diagnostics of `set` with `phi` the inclusion into `G`, at the trivial
/// character and the characters dual to each cyclic factor. Fourier
/// quantities are skipped when `|G|` exceeds `fourier_limit`.
pub fn diagnostics(set: &SubsetSample, fourier_limit: u32) -> Result<DiagnosticsReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = set.group();
    let mut notes = Vec::new();
    let mu = measure(set)?;
    let m_mu = match m_value_of_set(&mu, set) {
        Ok(m) => {
            if m.im.abs() > 1e-9 * m.re.abs().max(1.0) {
                notes.push(format!("M(mu) has imaginary residue {}", m.im));
            }
            Some(m.re)
        }
        Err(Error::EmptyQuadruples) => {
            notes.push("no non-degenerate quadruples: M(mu) undefined".into());
            None
        }
        Err(e) => return Err(e),
    };
    let identity: ElementMap = set.elements().iter().map(|&x| (x, x)).collect();
    let mut l12 = BTreeMap::new();
    if g.order() <= fourier_limit {
        let characters =
            std::iter::once(Character::TRIVIAL).chain((0..g.rank()).map(|j| Character(g.generator(j).0)));
        for chi in characters {
            l12.insert(chi.0, l12_fourier(set, g, &identity, chi)?);
        }
    } else {
        notes.push(format!("group order {} above {fourier_limit}: Fourier norms skipped", g.order()));
    }
    let sums = PairSums::build(set);
    Ok(DiagnosticsReport {
        M_mu: m_mu,
        l12_by_character: l12,
        sup_mu3_minus_1: sup_mu3_deviation(set)?.to_f64().unwrap(),
        max_pair_rep: max_pair_representation(g, set.elements(), set.elements()),
        energy_ordered: sums.energy(),
        notes,
    })
}
