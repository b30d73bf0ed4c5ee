//! Smith normal form over the integers.
//!
//! Only the column transform is tracked: for a relation lattice `L` spanned
//! by the rows of `B`, we find unimodular `V` and some unimodular `U` with
//! `U B V = diag(e_1, ..., e_r, 0, ...)`. Then `x -> x V` identifies
//! `Z^k / L` with `Z/e_1 + ... + Z/e_r + Z^(k - r)`, and the `i`-th column of
//! `V` evaluated on the basis vectors gives the projection onto the `i`-th
//! cyclic summand.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Nonzero diagonal entries `e_1 | e_2 | ... | e_r`, all positive.
    pub invariants: Vec<BigInt>,
    /// Column transform, `k x k`, row-major: `v[a][i]`.
    pub v: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn columns(&self) -> usize {
        self.v.len()
    }

    /// Invariant factors greater than one, with their column positions.
    pub fn torsion(&self) -> impl Iterator<Item = (usize, &BigInt)> + '_ {
        self.invariants.iter().enumerate().filter(|(_, e)| !e.is_one())
    }

    /// Entry `v[a][i]` reduced into `[0, m)`.
    pub fn v_mod(&self, a: usize, i: usize, m: u64) -> u64 {
        self.v[a][i].mod_floor(&BigInt::from(m)).to_u64().unwrap()
    }
}

/// Reduces integer rows to a basis of the lattice they span, in echelon form.
///
/// Uses extended-gcd row combinations, so the spanned lattice is preserved
/// exactly (unlike rank computations, which may rescale rows).
pub fn lattice_basis<I>(columns: usize, rows: I) -> Vec<Vec<BigInt>>
where
    I: IntoIterator<Item = Vec<i64>>,
{
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for row in rows {
        let mut v: Vec<BigInt> = row.into_iter().map(BigInt::from).collect();
        debug_assert_eq!(v.len(), columns);
        let mut idx = 0;
        loop {
            let Some(lead) = v.iter().position(|x| !x.is_zero()) else { break };
            while idx < basis.len() && basis[idx].0 < lead {
                idx += 1;
            }
            if idx == basis.len() || basis[idx].0 != lead {
                normalize_sign(&mut v, lead);
                basis.insert(idx, (lead, v));
                break;
            }
            let b = &mut basis[idx].1;
            let (bl, vl) = (b[lead].clone(), v[lead].clone());
            if (&vl % &bl).is_zero() {
                let q = &vl / &bl;
                v.iter_mut().zip(b.iter()).for_each(|(x, y)| *x -= &q * y);
            } else {
                let eg = bl.extended_gcd(&vl);
                let (g, s, t) = (eg.gcd, eg.x, eg.y);
                let (bq, vq) = (&bl / &g, &vl / &g);
                let new_b: Vec<BigInt> = b.iter().zip(&v).map(|(y, x)| &s * y + &t * x).collect();
                let new_v: Vec<BigInt> = b.iter().zip(&v).map(|(y, x)| &vq * y - &bq * x).collect();
                *b = new_b;
                normalize_sign(b, lead);
                v = new_v;
            }
            idx += 1;
        }
    }
    basis.into_iter().map(|(_, v)| v).collect()
}

fn normalize_sign(v: &mut [BigInt], lead: usize) {
    if v[lead].is_negative() {
        v.iter_mut().for_each(|x| *x = -&*x);
    }
}

/// Smith normal form of an integer matrix given by rows of length `columns`.
pub fn smith_normal_form(columns: usize, rows: Vec<Vec<BigInt>>) -> SmithForm {
    let mut m = rows;
    let nrows = m.len();
    let mut v: Vec<Vec<BigInt>> = (0..columns)
        .map(|a| (0..columns).map(|i| if a == i { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut invariants = Vec::new();

    for t in 0..nrows.min(columns) {
        // Smallest nonzero entry of the remaining block becomes the pivot.
        let Some((pi, pj)) = min_entry(&m, t, columns) else { break };
        m.swap(t, pi);
        swap_columns(&mut m, &mut v, t, pj);

        loop {
            let mut dirty = false;
            // Clear column t below the pivot with row operations.
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                let (top, rest) = m.split_at_mut(i);
                rest[0].iter_mut().zip(&top[t]).skip(t).for_each(|(x, y)| *x -= &q * y);
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            // Clear row t right of the pivot with column operations.
            for j in t + 1..columns {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                add_column_multiple(&mut m, &mut v, j, t, &(-q));
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A smaller remainder exists in row or column t; move it to the pivot.
                let (pi, pj) = min_in_cross(&m, t, columns);
                m.swap(t, pi);
                swap_columns(&mut m, &mut v, t, pj);
                continue;
            }
            // Pivot must divide the rest of the block.
            let pivot = m[t][t].clone();
            let bad = (t + 1..nrows).find(|&i| m[i][t + 1..].iter().any(|x| !(x % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    let (top, rest) = m.split_at_mut(i);
                    top[t].iter_mut().zip(&rest[0]).for_each(|(x, y)| *x += y);
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            m[t].iter_mut().for_each(|x| *x = -&*x);
        }
        invariants.push(m[t][t].clone());
    }
    SmithForm { invariants, v }
}

fn min_entry(m: &[Vec<BigInt>], t: usize, columns: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in m.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().take(columns).skip(t) {
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                let one = a.is_one();
                best = Some((i, j, a));
                if one {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn min_in_cross(m: &[Vec<BigInt>], t: usize, columns: usize) -> (usize, usize) {
    let mut best = (t, t, m[t][t].abs());
    for (i, row) in m.iter().enumerate().skip(t + 1) {
        if !row[t].is_zero() && row[t].abs() < best.2 {
            best = (i, t, row[t].abs());
        }
    }
    for j in t + 1..columns {
        if !m[t][j].is_zero() && m[t][j].abs() < best.2 {
            best = (t, j, m[t][j].abs());
        }
    }
    (best.0, best.1)
}

fn swap_columns(m: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    m.iter_mut().for_each(|row| row.swap(a, b));
    v.iter_mut().for_each(|row| row.swap(a, b));
}

/// column `dst` += k * column `src`, in both the matrix and the transform.
fn add_column_multiple(m: &mut [Vec<BigInt>], v: &mut [Vec<BigInt>], dst: usize, src: usize, k: &BigInt) {
    for row in m.iter_mut().chain(v.iter_mut()) {
        if !row[src].is_zero() {
            let delta = k * &row[src];
            row[dst] += delta;
        }
    }
}
