//! Nullity of relation matrices whose rows are `e_x + e_y - e_z - e_w`.
//!
//! Two independent routes:
//!
//! * [`modular_nullity`]: propagate values through rows with a single
//!   unknown entry (every coefficient is +-1 or +-2, hence invertible modulo
//!   an odd prime), introduce a fresh parameter whenever propagation stalls,
//!   and finish with dense elimination on the small parameter space. Run
//!   modulo two large primes; the results must agree.
//! * [`exact_nullity`]: fraction-free integer row reduction of the full
//!   matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::modp::{rank_primes, PrimeField};
use crate::sets::OrbitRow;

/// Order in which columns get values: either a free parameter or solved
/// from a row in which every other entry is already known.
#[derive(Debug, Clone)]
pub struct PropagationPlan {
    columns: usize,
    seeds: Vec<u32>,
    steps: Vec<Step>,
    used: Vec<bool>,
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Seed(u32),
    Solve { column: u32, row: u32 },
}

impl PropagationPlan {
    pub fn build(columns: usize, rows: &[OrbitRow]) -> Self {
        // Incidence lists in CSR form.
        let mut counts = vec![0u32; columns + 1];
        for r in rows {
            for (c, _) in r.entries() {
                counts[c as usize + 1] += 1;
            }
        }
        for i in 0..columns {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut incidence = vec![0u32; counts[columns] as usize];
        let mut unknown = vec![0u8; rows.len()];
        for (ri, r) in rows.iter().enumerate() {
            for (c, _) in r.entries() {
                incidence[fill[c as usize] as usize] = ri as u32;
                fill[c as usize] += 1;
                unknown[ri] += 1;
            }
        }
        let rows_of = |c: usize| &incidence[counts[c] as usize..counts[c + 1] as usize];

        let mut known = vec![false; columns];
        let mut used = vec![false; rows.len()];
        let mut steps = Vec::with_capacity(columns);
        let mut seeds = Vec::new();
        let mut worklist: Vec<u32> = Vec::new();
        let mut remaining = columns;

        let mark = |c: usize, known: &mut Vec<bool>, unknown: &mut Vec<u8>, worklist: &mut Vec<u32>| {
            known[c] = true;
            for &r in rows_of(c) {
                unknown[r as usize] -= 1;
                if unknown[r as usize] == 1 {
                    worklist.push(r);
                }
            }
        };

        // Seeds are taken in order of decreasing row count.
        let mut by_degree: Vec<u32> = (0..columns as u32).collect();
        by_degree.sort_by_key(|&c| std::cmp::Reverse(counts[c as usize + 1] - counts[c as usize]));
        let mut next_seed = 0;

        while remaining > 0 {
            while let Some(r) = worklist.pop() {
                if unknown[r as usize] != 1 || used[r as usize] {
                    continue;
                }
                let column = rows[r as usize]
                    .entries()
                    .map(|(c, _)| c)
                    .find(|&c| !known[c as usize])
                    .expect("row has one unknown column");
                used[r as usize] = true;
                steps.push(Step::Solve { column, row: r });
                mark(column as usize, &mut known, &mut unknown, &mut worklist);
                remaining -= 1;
            }
            if remaining == 0 {
                break;
            }
            while known[by_degree[next_seed] as usize] {
                next_seed += 1;
            }
            let seed = by_degree[next_seed];
            seeds.push(seed);
            steps.push(Step::Seed(seed));
            mark(seed as usize, &mut known, &mut unknown, &mut worklist);
            remaining -= 1;
        }
        PropagationPlan { columns, seeds, steps, used }
    }

    /// Number of free parameters introduced.
    pub fn parameters(&self) -> usize {
        self.seeds.len()
    }

    /// Nullity of the relation matrix modulo `field`.
    pub fn nullity(&self, rows: &[OrbitRow], field: &PrimeField) -> usize {
        let s = self.seeds.len();
        if s == 0 {
            return 0;
        }
        // values[c * s .. (c + 1) * s]: column c as a linear form in the parameters.
        let mut values = vec![0u64; self.columns * s];
        let mut param = 0;
        let inv2 = field.inv(2);
        for step in &self.steps {
            match *step {
                Step::Seed(c) => {
                    values[c as usize * s + param] = 1;
                    param += 1;
                }
                Step::Solve { column, row } => {
                    let mut acc = vec![0u64; s];
                    let mut own = 0i64;
                    for (c, k) in rows[row as usize].entries() {
                        if c == column {
                            own = k;
                            continue;
                        }
                        let src = &values[c as usize * s..(c as usize + 1) * s];
                        accumulate(field, &mut acc, src, k);
                    }
                    // own * x + acc = 0  =>  x = -acc / own
                    let dst = &mut values[column as usize * s..(column as usize + 1) * s];
                    for (d, a) in dst.iter_mut().zip(&acc) {
                        let mut v = field.neg(*a);
                        if own.abs() == 2 {
                            v = field.mul(v, inv2);
                        }
                        *d = if own < 0 { field.neg(v) } else { v };
                    }
                }
            }
        }

        // Dense nullspace of the reduced system, one column vector per basis element.
        let mut basis: Vec<Vec<u64>> = (0..s)
            .map(|i| {
                let mut e = vec![0u64; s];
                e[i] = 1;
                e
            })
            .collect();
        let mut reduced = vec![0u64; s];
        for (ri, row) in rows.iter().enumerate() {
            // Constants always solve the system, so nullity never drops below one.
            if basis.len() == 1 {
                break;
            }
            if self.used[ri] {
                continue;
            }
            reduced.iter_mut().for_each(|v| *v = 0);
            for (c, k) in row.entries() {
                accumulate(field, &mut reduced, &values[c as usize * s..(c as usize + 1) * s], k);
            }
            if reduced.iter().all(|&v| v == 0) {
                continue;
            }
            let images: Vec<u64> = basis.iter().map(|b| dot(field, &reduced, b)).collect();
            let Some(pivot) = images.iter().position(|&v| v != 0) else { continue };
            let inv = field.inv(images[pivot]);
            let pivot_vec = basis[pivot].clone();
            for (i, b) in basis.iter_mut().enumerate() {
                if i == pivot || images[i] == 0 {
                    continue;
                }
                let factor = field.mul(images[i], inv);
                for (x, &y) in b.iter_mut().zip(&pivot_vec) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
            basis.swap_remove(pivot);
        }
        basis.len()
    }
}

#[inline]
fn accumulate(field: &PrimeField, acc: &mut [u64], src: &[u64], k: i64) {
    match k {
        1 => acc.iter_mut().zip(src).for_each(|(a, &b)| *a = field.add(*a, b)),
        -1 => acc.iter_mut().zip(src).for_each(|(a, &b)| *a = field.sub(*a, b)),
        2 => acc.iter_mut().zip(src).for_each(|(a, &b)| *a = field.add(*a, field.add(b, b))),
        -2 => acc.iter_mut().zip(src).for_each(|(a, &b)| *a = field.sub(*a, field.add(b, b))),
        _ => unreachable!("relation coefficients are +-1 or +-2"),
    }
}

#[inline]
fn dot(field: &PrimeField, a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

/// Outcome of the two-prime modular computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModularNullity {
    Agreed(usize),
    Disagreed(usize, usize),
}

/// Nullity of the relation matrix modulo both rank primes.
pub fn modular_nullity(columns: usize, rows: &[OrbitRow]) -> ModularNullity {
    let plan = PropagationPlan::build(columns, rows);
    let [p, q] = rank_primes();
    let a = plan.nullity(rows, &p);
    let b = plan.nullity(rows, &q);
    if a == b {
        ModularNullity::Agreed(a)
    } else {
        ModularNullity::Disagreed(a, b)
    }
}

/// Nullity over the rationals by fraction-free integer elimination.
pub fn exact_nullity(columns: usize, rows: &[OrbitRow]) -> usize {
    // The all-ones vector is always in the kernel, so rank is at most columns - 1.
    let cap = columns.saturating_sub(1);
    columns - exact_rank_capped(columns, rows.iter().map(|r| dense_row(columns, r)), cap)
}

fn dense_row(columns: usize, r: &OrbitRow) -> Vec<i64> {
    let mut v = vec![0i64; columns];
    for (c, k) in r.entries() {
        v[c as usize] += k;
    }
    v
}

/// Rank over the rationals of integer rows of a common length.
pub fn exact_rank<I>(columns: usize, rows: I) -> usize
where
    I: IntoIterator<Item = Vec<i64>>,
{
    exact_rank_capped(columns, rows, columns)
}

/// Rows are reduced against an echelon basis kept primitive (each row divided
/// by the gcd of its entries); stops once the rank reaches `cap`.
fn exact_rank_capped<I>(columns: usize, rows: I, cap: usize) -> usize
where
    I: IntoIterator<Item = Vec<i64>>,
{
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for row in rows {
        if basis.len() >= cap.min(columns) {
            break;
        }
        let mut v: Vec<BigInt> = row.into_iter().map(BigInt::from).collect();
        for (lead, b) in &basis {
            if v[*lead].is_zero() {
                continue;
            }
            let (bl, vl) = (b[*lead].clone(), v[*lead].clone());
            for (x, y) in v.iter_mut().zip(b) {
                *x = &*x * &bl - y * &vl;
            }
            make_primitive(&mut v);
        }
        if let Some(lead) = v.iter().position(|x| !x.is_zero()) {
            let pos = basis.partition_point(|(l, _)| *l < lead);
            basis.insert(pos, (lead, v));
        }
    }
    basis.len()
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && g.abs() != BigInt::from(1) {
        v.iter_mut().for_each(|x| *x = &*x / &g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(plus: [u32; 2], minus: [u32; 2]) -> OrbitRow {
        OrbitRow { plus, minus }
    }

    #[test]
    fn single_relation() {
        let rows = [row([0, 2], [1, 1])];
        assert_eq!(exact_nullity(3, &rows), 2);
        assert_eq!(modular_nullity(3, &rows), ModularNullity::Agreed(2));
    }

    #[test]
    fn no_relations() {
        assert_eq!(exact_nullity(4, &[]), 4);
        assert_eq!(modular_nullity(4, &[]), ModularNullity::Agreed(4));
        assert_eq!(modular_nullity(0, &[]), ModularNullity::Agreed(0));
    }

    #[test]
    fn dependent_rows_do_not_count() {
        // x0 + x3 = x1 + x2, x1 + x4 = x2 + x3, and their sum.
        let rows = [row([0, 3], [1, 2]), row([1, 4], [2, 3]), row([0, 4], [2, 2])];
        assert_eq!(exact_nullity(5, &rows), 3);
        assert_eq!(modular_nullity(5, &rows), ModularNullity::Agreed(3));
    }

    #[test]
    fn exact_rank_generic() {
        let rows = vec![vec![2, 4, 6], vec![1, 2, 3], vec![0, 1, 1]];
        assert_eq!(exact_rank(3, rows), 2);
    }
}
