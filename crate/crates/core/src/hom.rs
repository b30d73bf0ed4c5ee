//! Spaces of Freiman homomorphisms.
//!
//! A Freiman homomorphism on `A` is the same thing as a group homomorphism
//! out of `F = Z^A / L`, where `L` is spanned by the relation rows
//! `e_x + e_y - e_z - e_w` of the additive quadruples of `A`. Everything
//! here is read off `L`: its rational rank gives the real dimension, and its
//! Smith normal form gives the homomorphisms into finite cyclic targets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::linalg::{
    exact_nullity, lattice_basis, modular_nullity, smith_normal_form, solve_mod, ModularNullity, SmithForm,
};
use crate::sets::{OrbitRow, PairSums, QuadrupleSet, SubsetSample};

/// A map from the elements of a set to a target group.
pub type ElementMap = BTreeMap<Element, Element>;

/// The defining linear system of Freiman homomorphisms on a set: one row per
/// orbit of non-degenerate quadruples, columns indexed by set positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMatrix {
    columns: usize,
    rows: Vec<OrbitRow>,
}

impl RelationMatrix {
    /// Relation rows straight from the pair-sum buckets of `set`.
    pub fn of_set(set: &SubsetSample) -> Self {
        let rows = PairSums::build(set).orbit_rows().collect();
        RelationMatrix { columns: set.len(), rows }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> &[OrbitRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dense_rows(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        self.rows.iter().map(move |r| {
            let mut v = vec![0i64; self.columns];
            for (c, k) in r.entries() {
                v[c as usize] += k;
            }
            v
        })
    }

    /// Smith normal form of the relation lattice.
    pub fn smith(&self) -> SmithForm {
        let basis = lattice_basis(self.columns, self.dense_rows());
        smith_normal_form(self.columns, basis)
    }
}

/// One relation row per symmetry orbit of the quadruples in `gamma`.
pub fn build_relations(set: &SubsetSample, gamma: &QuadrupleSet) -> Result<RelationMatrix> {
    if gamma.elements() != set.elements() {
        return Err(Error::QuadrupleMismatch);
    }
    let pos = |x: Element| set.position(x).ok_or(Error::QuadrupleMismatch);
    let mut rows = Vec::with_capacity(gamma.len() / 2);
    for &[x, y, z, w] in gamma.quadruples() {
        let mut p = [pos(x)? as u32, pos(y)? as u32];
        let mut q = [pos(z)? as u32, pos(w)? as u32];
        p.sort_unstable();
        q.sort_unstable();
        let (plus, minus) = if p < q { (p, q) } else { (q, p) };
        rows.push(OrbitRow { plus, minus });
    }
    rows.sort_unstable();
    rows.dedup();
    Ok(RelationMatrix { columns: set.len(), rows })
}

/// Summary of the homomorphism space of a set.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub rank_q: usize,
    pub freiman_dim: usize,
    /// Integer basis of the rational solutions `R v = 0`, indexed by set position.
    pub nullspace_basis: Vec<Vec<BigInt>>,
    /// Invariant factors of the relation lattice, `e_1 | e_2 | ...`.
    pub smith_invariants: Vec<BigInt>,
}

impl HomSpace {
    /// Full exact computation via the Smith normal form. The trailing columns
    /// of the column transform span the kernel.
    pub fn compute(set: &SubsetSample) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let smith = RelationMatrix::of_set(set).smith();
        let rank_q = smith.rank();
        let k = set.len();
        let nullspace_basis = (rank_q..k).map(|i| (0..k).map(|a| smith.v[a][i].clone()).collect()).collect();
        Ok(HomSpace { rank_q, freiman_dim: k - rank_q - 1, nullspace_basis, smith_invariants: smith.invariants })
    }
}

/// Dimension of the space of Freiman homomorphisms `A -> R`, minus one.
///
/// The default route is the two-prime modular nullity, falling back to exact
/// integer elimination if the primes disagree; `exact` forces the latter.
pub fn freiman_dimension(set: &SubsetSample, exact: bool) -> Result<usize> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = set.len();
    if k == 1 {
        return Ok(0);
    }
    let rows: Vec<OrbitRow> = PairSums::build(set).orbit_rows().collect();
    Ok(dimension_from_rows(k, &rows, exact))
}

/// Freiman dimension of a set with `columns` elements and the given relation rows.
pub fn dimension_from_rows(columns: usize, rows: &[OrbitRow], exact: bool) -> usize {
    let nullity = if exact {
        exact_nullity(columns, rows)
    } else {
        match modular_nullity(columns, rows) {
            ModularNullity::Agreed(n) => n,
            ModularNullity::Disagreed(..) => exact_nullity(columns, rows),
        }
    };
    nullity - 1
}

/// Values of `phi` on `set`, in set order.
pub fn values_on(set: &SubsetSample, target: &GroupSpec, phi: &ElementMap) -> Result<Vec<Element>> {
    set.elements()
        .iter()
        .map(|&x| {
            let v = *phi.get(&x).ok_or(Error::PartialMap(x.0))?;
            target.check(v)?;
            Ok(v)
        })
        .collect()
}

/// Whether `phi(a) + phi(b) = phi(c) + phi(d)` in `target` whenever
/// `a + b = c + d` in `set`.
pub fn is_freiman_hom(set: &SubsetSample, target: &GroupSpec, phi: &ElementMap) -> Result<bool> {
    let values = values_on(set, target, phi)?;
    Ok(values_are_freiman_hom(set, target, &values))
}

/// Same as [`is_freiman_hom`] with values given in set order.
pub fn values_are_freiman_hom(set: &SubsetSample, target: &GroupSpec, values: &[Element]) -> bool {
    // Every pair sharing a sum must share an image sum.
    PairSums::build(set).buckets().all(|bucket| {
        let image = |&(_, i, j): &(u32, u32, u32)| target.add(values[i as usize], values[j as usize]);
        let first = image(&bucket[0]);
        bucket.iter().all(|p| image(p) == first)
    })
}

/// An affine map `x -> r(x) + shift` from `G` to `H`, with `r` given by the
/// images of the standard generators of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineWitness {
    pub hom: Vec<u32>,
    pub shift: u32,
}

impl AffineWitness {
    pub fn apply(&self, g: &GroupSpec, target: &GroupSpec, x: Element) -> Element {
        let mut acc = Element(self.shift);
        for (j, &digit) in g.decode(x).iter().enumerate() {
            acc = target.add(acc, target.scale(digit as i64, Element(self.hom[j])));
        }
        acc
    }
}

/// Finds an affine map of `g` into `target` agreeing with `phi` on `set`.
///
/// Homomorphisms `G -> Z/m` send the generator of `Z/d_j` to a multiple of
/// `m / gcd(m, d_j)`, so each factor of the target gives one linear system
/// over `Z/m` in the shift and those multipliers.
pub fn is_affine(
    g: &GroupSpec,
    set: &SubsetSample,
    target: &GroupSpec,
    phi: &ElementMap,
) -> Result<Option<AffineWitness>> {
    if set.group() != g {
        return Err(Error::InvalidSubset("set lives in a different group".into()));
    }
    let values = values_on(set, target, phi)?;
    Ok(affine_fit(g, set.elements(), target, &values))
}

/// Core of [`is_affine`] on parallel slices of points and values.
pub fn affine_fit(g: &GroupSpec, points: &[Element], target: &GroupSpec, values: &[Element]) -> Option<AffineWitness> {
    let digits: Vec<Vec<u32>> = points.iter().map(|&x| g.decode(x)).collect();
    let images: Vec<Vec<u32>> = values.iter().map(|&v| target.decode(v)).collect();
    let rank = g.rank();
    let mut hom_digits = vec![vec![0u32; target.rank()]; rank];
    let mut shift_digits = vec![0u32; target.rank()];
    for (k, &m) in target.factors().iter().enumerate() {
        let m = m as u64;
        let steps: Vec<u64> = g.factors().iter().map(|&d| m / m.gcd(&(d as u64))).collect();
        let matrix: Vec<Vec<u64>> = digits
            .iter()
            .map(|a| {
                let mut row = Vec::with_capacity(rank + 1);
                row.push(1 % m);
                row.extend(a.iter().zip(&steps).map(|(&aj, &s)| aj as u64 * s % m));
                row
            })
            .collect();
        let rhs: Vec<u64> = images.iter().map(|h| h[k] as u64).collect();
        let sol = solve_mod(&matrix, &rhs, m)?;
        shift_digits[k] = sol[0] as u32;
        for j in 0..rank {
            hom_digits[j][k] = (sol[j + 1] * steps[j] % m) as u32;
        }
    }
    let witness = AffineWitness {
        hom: hom_digits.iter().map(|d| target.encode(d).0).collect(),
        shift: target.encode(&shift_digits).0,
    };
    debug_assert!(points.iter().zip(values).all(|(&x, &v)| witness.apply(g, target, x) == v));
    Some(witness)
}

/// All Freiman homomorphisms `A -> Z/m`, as a direct sum of cyclic subgroups
/// of `(Z/m)^A`.
#[derive(Debug, Clone)]
pub struct CyclicHoms {
    pub modulus: u64,
    pub columns: usize,
    /// Generators with their additive orders; every solution is uniquely
    /// `sum c_i g_i` with `0 <= c_i < order_i`.
    pub generators: Vec<(Vec<u64>, u64)>,
}

impl CyclicHoms {
    /// Number of homomorphisms, or `None` past `u128`.
    pub fn count(&self) -> Option<u128> {
        self.generators.iter().try_fold(1u128, |acc, &(_, o)| acc.checked_mul(o as u128))
    }

    /// Every homomorphism, each as values in set order. Fails when there are
    /// more than `cap`.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<Vec<u64>>> {
        let count = self.count().unwrap_or(u128::MAX);
        if count > cap {
            return Err(Error::CapExceeded { count, cap });
        }
        let m = self.modulus;
        let mut out = Vec::with_capacity(count as usize);
        let mut coef = vec![0u64; self.generators.len()];
        let mut current = vec![0u64; self.columns];
        loop {
            out.push(current.clone());
            // Odometer step: bump the first coefficient that has room.
            let mut i = 0;
            loop {
                if i == coef.len() {
                    return Ok(out);
                }
                let (gen, order) = &self.generators[i];
                coef[i] += 1;
                if coef[i] < *order {
                    current.iter_mut().zip(gen).for_each(|(c, &x)| *c = (*c + x) % m);
                    break;
                }
                // Wrapped: subtract (order - 1) copies, i.e. add one more and land on zero.
                current.iter_mut().zip(gen).for_each(|(c, &x)| *c = (*c + x) % m);
                coef[i] = 0;
                i += 1;
            }
        }
    }
}

/// Freiman homomorphisms into `Z/m` via the Smith normal form `U R V = D`:
/// `R v = 0 (mod m)` exactly when `y = V^-1 v` has `e_i y_i = 0 (mod m)`.
pub fn homs_to_cyclic(set: &SubsetSample, m: u64) -> Result<CyclicHoms> {
    if m == 0 {
        return Err(Error::InvalidModulus);
    }
    let smith = RelationMatrix::of_set(set).smith();
    Ok(cyclic_homs_from_smith(&smith, m))
}

pub fn cyclic_homs_from_smith(smith: &SmithForm, m: u64) -> CyclicHoms {
    let k = smith.columns();
    let big_m = BigInt::from(m);
    let mut generators = Vec::new();
    for i in 0..k {
        let (order, step) = match smith.invariants.get(i) {
            Some(e) => {
                let g = e.gcd(&big_m).to_u64().unwrap();
                (g, m / g)
            }
            None => (m, 1),
        };
        if order <= 1 {
            continue;
        }
        let gen = (0..k).map(|a| smith.v_mod(a, i, m) * step % m).collect();
        generators.push((gen, order));
    }
    CyclicHoms { modulus: m, columns: k, generators }
}

/// Whether every Freiman homomorphism from `set` into every Abelian group is
/// the restriction of an affine map of the ambient group.
///
/// Equivalent to the evaluation map `F -> Z + G`, `e_a -> (1, a)`, being a
/// split injection. With Freiman dimension 0 the free part of `F` is spanned
/// by the constants, which always extend; so it remains to check that the
/// projection of `F` onto each cyclic torsion summand `Z/e_i` is affine.
pub fn is_universally_rigid(set: &SubsetSample) -> Result<bool> {
    Ok(rigidity_witness(set)?.is_none())
}

/// A non-affine Freiman homomorphism, when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonAffineHom {
    /// A non-constant real homomorphism, integer valued, in set order.
    Real(Vec<BigInt>),
    /// A homomorphism into `Z/modulus`, in set order.
    Cyclic { modulus: u64, values: Vec<u64> },
}

/// Certificate for [`is_universally_rigid`] returning `false`.
pub fn rigidity_witness(set: &SubsetSample) -> Result<Option<NonAffineHom>> {
    let space = HomSpace::compute(set)?;
    if space.freiman_dim > 0 {
        // Some kernel basis vector is not a multiple of the all-ones vector.
        let v = space
            .nullspace_basis
            .iter()
            .find(|v| v.iter().any(|x| x != &v[0]))
            .expect("positive dimension has a non-constant solution")
            .clone();
        return Ok(Some(NonAffineHom::Real(v)));
    }
    let smith = RelationMatrix::of_set(set).smith();
    let g = set.group();
    for (i, e) in smith.torsion() {
        let m = e
            .to_u32()
            .ok_or_else(|| Error::Overflow(format!("torsion invariant {e} does not fit a target group")))?;
        let target = GroupSpec::cyclic(m)?;
        let values: Vec<Element> = (0..set.len()).map(|a| Element(smith.v_mod(a, i, m as u64) as u32)).collect();
        if affine_fit(g, set.elements(), &target, &values).is_none() {
            return Ok(Some(NonAffineHom::Cyclic { modulus: m as u64, values: values.iter().map(|v| v.0 as u64).collect() }));
        }
    }
    Ok(None)
}

/// Brute-force rigidity check: every Freiman homomorphism into `Z/m`,
/// `2 <= m <= max_modulus`, is affine. Homomorphisms are enumerated when
/// there are at most `cap` of them; otherwise only the generators are tested,
/// which suffices because affine restrictions form a subgroup.
pub fn rigid_into_small_cyclic(set: &SubsetSample, max_modulus: u64, cap: u128) -> Result<Option<(u64, Vec<u64>)>> {
    let smith = RelationMatrix::of_set(set).smith();
    let g = set.group();
    for m in 2..=max_modulus {
        let target = GroupSpec::cyclic(m as u32)?;
        let homs = cyclic_homs_from_smith(&smith, m);
        let candidates = match homs.enumerate(cap) {
            Ok(all) => all,
            Err(Error::CapExceeded { .. }) => homs.generators.iter().map(|(v, _)| v.clone()).collect(),
            Err(e) => return Err(e),
        };
        for values in candidates {
            let image: Vec<Element> = values.iter().map(|&v| Element(v as u32)).collect();
            if affine_fit(g, set.elements(), &target, &image).is_none() {
                return Ok(Some((m, values)));
            }
        }
    }
    Ok(None)
}

/// Number of positions that may be left unconstrained: `floor(eta * k)`.
pub fn free_budget(eta: f64, k: usize) -> usize {
    ((eta * k as f64) + 1e-9).floor() as usize
}

/// Whether every Freiman homomorphism (into any Abelian group) that agrees
/// with an affine map on at least `(1 - eta)|U|` elements agrees with it
/// everywhere.
///
/// The difference of the two maps is a homomorphism vanishing on the agreement
/// set `S`, so the property holds iff `Z^W / (L restricted to W)` is trivial
/// for every `W` of the largest admissible size `floor(eta |U|)`.
pub fn extension_property(set: &SubsetSample, eta: f64) -> Result<bool> {
    Ok(extension_failure(set, eta)?.is_none())
}

/// A set `W` of size `floor(eta |U|)` (as positions) on which some nonzero
/// Freiman homomorphism is supported, if any.
pub fn extension_failure(set: &SubsetSample, eta: f64) -> Result<Option<Vec<usize>>> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!("eta must lie in (0, 1], got {eta}")));
    }
    let k = set.len();
    let w = free_budget(eta, k);
    if w == 0 {
        return Ok(None);
    }
    let dense: Vec<Vec<i64>> = RelationMatrix::of_set(set).dense_rows().collect();
    let mut failure = None;
    for_each_combination(k, w, |cols| {
        let restricted = dense.iter().map(|r| cols.iter().map(|&c| r[c]).collect::<Vec<i64>>());
        let basis = lattice_basis(cols.len(), restricted);
        let smith = smith_normal_form(cols.len(), basis);
        let trivial = smith.rank() == cols.len() && smith.invariants.iter().all(|e| e.is_one());
        if !trivial {
            failure = Some(cols.to_vec());
            return false;
        }
        true
    });
    Ok(failure)
}

/// Calls `f` on each `r`-subset of `0..n` in lexicographic order until it
/// returns `false`.
pub(crate) fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else { return };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact check that an integer vector solves the relation system.
pub fn in_kernel(matrix: &RelationMatrix, v: &[BigInt]) -> bool {
    matrix.rows().iter().all(|r| r.entries().map(|(c, k)| &v[c as usize] * k).sum::<BigInt>().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::enumerate_quadruples;

    fn set(factors: &[u32], idx: &[u32]) -> SubsetSample {
        SubsetSample::from_indices(GroupSpec::new(factors.to_vec()).unwrap(), idx).unwrap()
    }

    fn map(pairs: &[(u32, u32)]) -> ElementMap {
        pairs.iter().map(|&(a, b)| (Element(a), Element(b))).collect()
    }

    #[test]
    fn relation_rows_for_small_sets() {
        let a = set(&[5], &[0, 1, 2]);
        let rel = build_relations(&a, &enumerate_quadruples(&a)).unwrap();
        let dense: Vec<Vec<i64>> = rel.dense_rows().collect();
        assert_eq!(dense.len(), 1);
        assert!(dense[0] == vec![1, -2, 1] || dense[0] == vec![-1, 2, -1]);

        let b = set(&[6], &[0, 1, 3]);
        let rel = build_relations(&b, &enumerate_quadruples(&b)).unwrap();
        let dense: Vec<Vec<i64>> = rel.dense_rows().collect();
        assert_eq!(dense.len(), 1);
        assert!(dense[0] == vec![2, 0, -2] || dense[0] == vec![-2, 0, 2]);

        let c = set(&[7], &[0, 1]);
        assert!(build_relations(&c, &enumerate_quadruples(&c)).unwrap().is_empty());
        assert!(matches!(build_relations(&a, &enumerate_quadruples(&b)), Err(Error::QuadrupleMismatch)));
    }

    #[test]
    fn relations_from_listing_match_pair_sums() {
        let a = set(&[3, 4], &[0, 1, 2, 5, 6, 9, 11]);
        let from_gamma = build_relations(&a, &enumerate_quadruples(&a)).unwrap();
        let mut direct = RelationMatrix::of_set(&a);
        direct.rows.sort_unstable();
        assert_eq!(from_gamma, direct);
    }

    #[test]
    fn dimensions() {
        assert_eq!(freiman_dimension(&SubsetSample::full(GroupSpec::cyclic(5).unwrap()), false).unwrap(), 0);
        assert_eq!(freiman_dimension(&set(&[5], &[0, 1, 2]), false).unwrap(), 1);
        assert_eq!(freiman_dimension(&set(&[6], &[0, 1, 3]), true).unwrap(), 1);
        assert_eq!(freiman_dimension(&set(&[100], &[0, 1, 5, 20]), false).unwrap(), 3);
        assert_eq!(freiman_dimension(&set(&[9], &[4]), false).unwrap(), 0);
        assert!(matches!(freiman_dimension(&set(&[9], &[]), false), Err(Error::EmptySet)));
    }

    #[test]
    fn hom_space_kernel_contains_constants() {
        let a = set(&[4, 3], &[0, 1, 2, 4, 7, 8, 10]);
        let space = HomSpace::compute(&a).unwrap();
        let rel = RelationMatrix::of_set(&a);
        assert_eq!(space.nullspace_basis.len(), space.freiman_dim + 1);
        for v in &space.nullspace_basis {
            assert!(in_kernel(&rel, v));
        }
        assert!(in_kernel(&rel, &vec![BigInt::one(); a.len()]));
        assert_eq!(space.freiman_dim, freiman_dimension(&a, true).unwrap());
    }

    #[test]
    fn freiman_hom_checks() {
        let a = set(&[5], &[0, 1, 2]);
        let z5 = GroupSpec::cyclic(5).unwrap();
        assert!(is_freiman_hom(&a, &z5, &map(&[(0, 2), (1, 0), (2, 3)])).unwrap());
        assert!(!is_freiman_hom(&a, &z5, &map(&[(0, 0), (1, 0), (2, 1)])).unwrap());
        assert!(is_freiman_hom(&a, &z5, &map(&[(0, 4), (1, 4), (2, 4)])).unwrap());
        assert!(matches!(is_freiman_hom(&a, &z5, &map(&[(0, 0), (1, 0)])), Err(Error::PartialMap(2))));
    }

    #[test]
    fn affine_witnesses() {
        let z5 = GroupSpec::cyclic(5).unwrap();
        let a = set(&[5], &[0, 1, 2]);
        let w = is_affine(&z5, &a, &z5, &map(&[(0, 2), (1, 0), (2, 3)])).unwrap().unwrap();
        assert_eq!(w, AffineWitness { hom: vec![3], shift: 2 });
        assert_eq!(serde_json::to_string(&w).unwrap(), r#"{"hom":[3],"shift":2}"#);

        let c = is_affine(&z5, &a, &z5, &map(&[(0, 4), (1, 4), (2, 4)])).unwrap().unwrap();
        assert_eq!(c, AffineWitness { hom: vec![0], shift: 4 });

        let z6 = GroupSpec::cyclic(6).unwrap();
        let z2 = GroupSpec::cyclic(2).unwrap();
        let b = set(&[6], &[0, 1, 3]);
        assert_eq!(is_affine(&z6, &b, &z2, &map(&[(0, 0), (1, 0), (3, 1)])).unwrap(), None);
    }

    #[test]
    fn affine_into_product_target() {
        // G = Z4 x Z6 into H = Z2 x Z3 via (x, y) -> (x mod 2, y mod 3) + (1, 2).
        let g = GroupSpec::new(vec![4, 6]).unwrap();
        let h = GroupSpec::new(vec![2, 3]).unwrap();
        let a = SubsetSample::full(g.clone());
        let phi: ElementMap = g
            .elements()
            .map(|x| {
                let d = g.decode(x);
                (x, h.encode(&[(d[0] + 1) % 2, (d[1] + 2) % 3]))
            })
            .collect();
        let w = is_affine(&g, &a, &h, &phi).unwrap().unwrap();
        for x in g.elements() {
            assert_eq!(w.apply(&g, &h, x), phi[&x]);
        }
    }

    #[test]
    fn cyclic_hom_counts() {
        assert_eq!(homs_to_cyclic(&set(&[6], &[0, 1, 3]), 2).unwrap().count(), Some(8));
        assert_eq!(homs_to_cyclic(&set(&[5], &[0, 1, 2]), 2).unwrap().count(), Some(4));
        assert_eq!(homs_to_cyclic(&set(&[11], &[0, 1, 3]), 3).unwrap().count(), Some(27));
        let homs = homs_to_cyclic(&set(&[5], &[0, 1, 2]), 2).unwrap();
        assert_eq!(homs.enumerate(4).unwrap().len(), 4);
        assert!(matches!(homs.enumerate(3), Err(Error::CapExceeded { count: 4, cap: 3 })));
        assert!(matches!(homs_to_cyclic(&set(&[5], &[0]), 0), Err(Error::InvalidModulus)));
    }

    #[test]
    fn rigidity_examples() {
        assert!(is_universally_rigid(&SubsetSample::full(GroupSpec::cyclic(7).unwrap())).unwrap());
        assert!(is_universally_rigid(&SubsetSample::full(GroupSpec::new(vec![2, 4]).unwrap())).unwrap());
        assert!(!is_universally_rigid(&set(&[6], &[0, 1, 3])).unwrap());
        assert!(!is_universally_rigid(&set(&[5], &[0, 1, 2])).unwrap());
        // Z6 minus one point still has no isolated element.
        let a = set(&[6], &[0, 1, 2, 3, 4]);
        assert_eq!(is_universally_rigid(&a).unwrap(), rigid_into_small_cyclic(&a, 12, 1 << 16).unwrap().is_none());
    }

    #[test]
    fn extension_property_of_full_group() {
        let z7 = SubsetSample::full(GroupSpec::cyclic(7).unwrap());
        assert!(extension_property(&z7, 0.3).unwrap());
        // One free value is never pinned down in a set with an isolated element.
        assert!(!extension_property(&set(&[6], &[0, 1, 3]), 0.34).unwrap());
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
