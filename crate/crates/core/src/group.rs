//! Finite Abelian groups given as products of cyclic factors, their
//! characters, and the discrete Fourier transform.
//!
//! Elements are canonical mixed-radix indices: for factors `[d_1, ..., d_k]`
//! the index of `(x_1, ..., x_k)` is `x_1 + d_1 * (x_2 + d_2 * (...))`, so the
//! first factor is the least significant digit.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a group element in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub u32);

impl Element {
    pub const ZERO: Element = Element(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a character of the group, decoded with the same mixed radix as
/// elements: `t = (t_1, ..., t_k)` gives `x -> exp(2 pi i sum t_j x_j / d_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Character(pub u32);

impl Character {
    pub const TRIVIAL: Character = Character(0);
}

/// A finite Abelian group `Z_{d_1} x ... x Z_{d_k}`.
///
/// Factors need not be in invariant-factor form. The trivial group is the
/// single-factor list `[1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<u32>,
    order: u32,
}

impl GroupSpec {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("empty factor list".into()));
        }
        if factors == [1] {
            return Ok(GroupSpec { factors, order: 1 });
        }
        let mut order: u64 = 1;
        for &d in &factors {
            if d < 2 {
                return Err(Error::InvalidGroup(format!("cyclic factor {d} must be at least 2")));
            }
            order *= d as u64;
            if order > u32::MAX as u64 {
                return Err(Error::InvalidGroup("group order exceeds 2^32 - 1".into()));
            }
        }
        Ok(GroupSpec { factors, order: order as u32 })
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(Element)
    }

    pub fn check(&self, x: Element) -> Result<()> {
        if x.0 < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: x.0 as u64, order: self.order as u64 })
        }
    }

    /// Mixed-radix digits of `x`, least significant factor first.
    pub fn decode(&self, x: Element) -> Vec<u32> {
        let mut rest = x.0;
        self.factors
            .iter()
            .map(|&d| {
                let digit = rest % d;
                rest /= d;
                digit
            })
            .collect()
    }

    /// Inverse of [`decode`](Self::decode); digits are reduced modulo their factor.
    pub fn encode(&self, digits: &[u32]) -> Element {
        debug_assert_eq!(digits.len(), self.factors.len());
        let mut idx = 0u64;
        for (&d, &x) in self.factors.iter().zip(digits).rev() {
            idx = idx * d as u64 + (x % d) as u64;
        }
        Element(idx as u32)
    }

    /// Encode signed digits, reducing each into `[0, d_j)`.
    pub fn encode_signed(&self, digits: &[i64]) -> Element {
        let mut idx = 0u64;
        for (&d, &x) in self.factors.iter().zip(digits).rev() {
            idx = idx * d as u64 + x.rem_euclid(d as i64) as u64;
        }
        Element(idx as u32)
    }

    #[inline]
    pub fn add(&self, a: Element, b: Element) -> Element {
        if let [d] = self.factors[..] {
            let s = a.0 as u64 + b.0 as u64;
            return Element((s % d as u64) as u32);
        }
        self.combine(a, b, |x, y, d| (x + y) % d)
    }

    #[inline]
    pub fn neg(&self, a: Element) -> Element {
        if let [d] = self.factors[..] {
            return Element(if a.0 == 0 { 0 } else { d - a.0 });
        }
        self.combine(a, Element::ZERO, |x, _, d| (d - x) % d)
    }

    #[inline]
    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    /// `k * a` for a signed integer `k`.
    pub fn scale(&self, k: i64, a: Element) -> Element {
        let digits: Vec<i64> = self
            .decode(a)
            .into_iter()
            .zip(&self.factors)
            .map(|(x, &d)| ((x as i128 * k as i128).rem_euclid(d as i128)) as i64)
            .collect();
        self.encode_signed(&digits)
    }

    /// Checked addition, validating both indices.
    pub fn try_add(&self, a: Element, b: Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    fn combine(&self, a: Element, b: Element, op: impl Fn(u32, u32, u32) -> u32) -> Element {
        let (mut ra, mut rb) = (a.0, b.0);
        let mut idx = 0u64;
        let mut stride = 1u64;
        for &d in &self.factors {
            let digit = op(ra % d, rb % d, d);
            ra /= d;
            rb /= d;
            idx += digit as u64 * stride;
            stride *= d as u64;
        }
        Element(idx as u32)
    }

    /// The canonical generator `e_j` of the `j`-th cyclic factor.
    pub fn generator(&self, j: usize) -> Element {
        let mut digits = vec![0u32; self.rank()];
        if self.order > 1 {
            digits[j] = 1;
        }
        self.encode(&digits)
    }

    /// Phase of `chi_t(x)` as a numerator over `n`: `sum_j t_j x_j (n / d_j) mod n`.
    pub fn char_phase(&self, t: Character, x: Element) -> u64 {
        let n = self.order as u64;
        let (mut rt, mut rx) = (t.0 as u64, x.0 as u64);
        let mut acc = 0u64;
        for &d in &self.factors {
            let d = d as u64;
            let (tj, xj) = (rt % d, rx % d);
            rt /= d;
            rx /= d;
            acc = (acc + (tj * xj % d) * (n / d)) % n;
        }
        acc
    }

    /// The value `chi_t(x)`, a complex number of modulus one.
    pub fn char_eval(&self, t: Character, x: Element) -> Complex64 {
        let phase = self.char_phase(t, x);
        unit_root(phase, self.order as u64)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `"101"` or `"4,9"`.
    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidGroup(format!("malformed group spec {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GroupSpec::new(factors)
    }
}

#[inline]
fn unit_root(k: u64, n: u64) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Exact quarter turns avoid rounding noise on the axes.
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            3 => Complex64::new(0.0, -1.0),
            _ => Complex64::new(1.0, 0.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// Table of the `n`-th roots of unity, `table[k] = exp(2 pi i k / n)`.
fn root_table(n: u64) -> Vec<Complex64> {
    (0..n).map(|k| unit_root(k, n)).collect()
}

/// Fourier transform `f^(t) = E_x f(x) conj(chi_t(x))` by direct evaluation.
pub fn dft(g: &GroupSpec, f: &[Complex64]) -> Vec<Complex64> {
    transform_direct(g, f, true)
}

/// Fourier inversion `f(x) = sum_t f^(t) chi_t(x)` by direct evaluation.
pub fn inverse_dft(g: &GroupSpec, fhat: &[Complex64]) -> Vec<Complex64> {
    transform_direct(g, fhat, false)
}

fn transform_direct(g: &GroupSpec, input: &[Complex64], forward: bool) -> Vec<Complex64> {
    let n = g.order() as usize;
    assert_eq!(input.len(), n, "function must be defined on all of G");
    let roots = root_table(n as u64);
    let scale = if forward { 1.0 / n as f64 } else { 1.0 };
    (0..n as u32)
        .map(|t| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, &v) in input.iter().enumerate() {
                let phase = g.char_phase(Character(t), Element(x as u32)) as usize;
                let root = if forward { roots[(n - phase) % n] } else { roots[phase] };
                acc += v * root;
            }
            acc * scale
        })
        .collect()
}

/// Same transform as [`dft`], computed one cyclic factor at a time.
///
/// Cost is `O(n * sum_j d_j)` instead of `O(n^2)`.
pub fn dft_fast(g: &GroupSpec, f: &[Complex64]) -> Vec<Complex64> {
    transform_by_factor(g, f, true)
}

pub fn inverse_dft_fast(g: &GroupSpec, fhat: &[Complex64]) -> Vec<Complex64> {
    transform_by_factor(g, fhat, false)
}

fn transform_by_factor(g: &GroupSpec, input: &[Complex64], forward: bool) -> Vec<Complex64> {
    let n = g.order() as usize;
    assert_eq!(input.len(), n, "function must be defined on all of G");
    let mut data = input.to_vec();
    let mut scratch = Vec::new();
    let mut stride = 1usize;
    for &d in g.factors() {
        let d = d as usize;
        if d == 1 {
            continue;
        }
        let roots = root_table(d as u64);
        let block = stride * d;
        scratch.resize(d, Complex64::new(0.0, 0.0));
        for base in (0..n).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (k, slot) in scratch.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..d {
                        let phase = (k * x) % d;
                        let root = if forward { roots[(d - phase) % d] } else { roots[phase] };
                        acc += data[start + x * stride] * root;
                    }
                    *slot = if forward { acc / d as f64 } else { acc };
                }
                for (k, &v) in scratch.iter().enumerate() {
                    data[start + k * stride] = v;
                }
            }
        }
        stride = block;
    }
    data
}

/// `||f||_p = (E_x |f(x)|^p)^(1/p)` on the group side.
pub fn norm_group(f: &[Complex64], p: f64) -> f64 {
    let n = f.len() as f64;
    (f.iter().map(|z| z.norm().powf(p)).sum::<f64>() / n).powf(1.0 / p)
}

/// `||f^||_p = (sum_t |f^(t)|^p)^(1/p)` on the dual side.
pub fn norm_dual(fhat: &[Complex64], p: f64) -> f64 {
    fhat.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn parse_and_display() {
        let g: GroupSpec = "4,9".parse().unwrap();
        assert_eq!(g.factors(), &[4, 9]);
        assert_eq!(g.order(), 36);
        assert_eq!(g.to_string(), "4,9");
        assert!("".parse::<GroupSpec>().is_err());
        assert!("4,x".parse::<GroupSpec>().is_err());
        assert!("1,4".parse::<GroupSpec>().is_err());
        assert_eq!("1".parse::<GroupSpec>().unwrap().order(), 1);
    }

    #[test]
    fn modular_addition() {
        let z5 = GroupSpec::cyclic(5).unwrap();
        assert_eq!(z5.add(Element(3), Element(4)), Element(2));
        for x in z5.elements() {
            assert_eq!(z5.add(x, Element::ZERO), x);
            assert_eq!(z5.add(x, z5.neg(x)), Element::ZERO);
        }
        assert!(z5.try_add(Element(5), Element(0)).is_err());
    }

    #[test]
    fn componentwise_addition() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        let x = g.encode(&[1, 2]);
        assert_eq!(g.decode(g.add(x, x)), vec![0, 1]);
        for a in g.elements() {
            assert_eq!(g.encode(&g.decode(a)), a);
        }
    }

    #[test]
    fn scaling_matches_repeated_addition() {
        let g = GroupSpec::new(vec![4, 6]).unwrap();
        for a in g.elements() {
            let mut acc = Element::ZERO;
            for k in 0..7 {
                assert_eq!(g.scale(k, a), acc);
                acc = g.add(acc, a);
            }
            assert_eq!(g.scale(-1, a), g.neg(a));
        }
    }

    #[test]
    fn character_values() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        assert!(close(z4.char_eval(Character(1), Element(1)), Complex64::new(0.0, 1.0), 1e-15));
        for x in z4.elements() {
            assert_eq!(z4.char_eval(Character::TRIVIAL, x), Complex64::new(1.0, 0.0));
        }
        let v4 = GroupSpec::new(vec![2, 2]).unwrap();
        let t = Character(v4.encode(&[1, 0]).0);
        assert!(close(v4.char_eval(t, v4.encode(&[1, 1])), Complex64::new(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn characters_are_multiplicative() {
        let g = GroupSpec::new(vec![3, 4, 5]).unwrap();
        for t in 0..g.order() {
            for x in g.elements() {
                for y in g.elements().step_by(7) {
                    let lhs = g.char_eval(Character(t), g.add(x, y));
                    let rhs = g.char_eval(Character(t), x) * g.char_eval(Character(t), y);
                    assert!(close(lhs, rhs, 1e-12));
                    assert!((lhs.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn transform_of_constant_and_character() {
        let g = GroupSpec::new(vec![2, 6]).unwrap();
        let n = g.order() as usize;
        let ones = vec![Complex64::new(1.0, 0.0); n];
        let hat = dft(&g, &ones);
        assert!(close(hat[0], Complex64::new(1.0, 0.0), 1e-12));
        assert!(hat[1..].iter().all(|z| z.norm() < 1e-12));

        let t = Character(7);
        let chi: Vec<Complex64> = g.elements().map(|x| g.char_eval(t, x)).collect();
        let hat = dft(&g, &chi);
        for (s, z) in hat.iter().enumerate() {
            let expected = if s == 7 { 1.0 } else { 0.0 };
            assert!(close(*z, Complex64::new(expected, 0.0), 1e-12));
        }
    }

    #[test]
    fn fast_transform_matches_direct() {
        let g = GroupSpec::new(vec![3, 4, 2]).unwrap();
        let f: Vec<Complex64> = (0..g.order())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let a = dft(&g, &f);
        let b = dft_fast(&g, &f);
        for (x, y) in a.iter().zip(&b) {
            assert!(close(*x, *y, 1e-12));
        }
        let back = inverse_dft_fast(&g, &b);
        for (x, y) in back.iter().zip(&f) {
            assert!(close(*x, *y, 1e-12));
        }
    }

    #[test]
    fn trivial_group() {
        let g = GroupSpec::new(vec![1]).unwrap();
        assert_eq!(g.order(), 1);
        let f = vec![Complex64::new(2.5, -1.0)];
        assert_eq!(dft(&g, &f), f);
        assert_eq!(dft_fast(&g, &f), f);
    }
}
