//! Hitting times: grow a random set one element at a time until its Freiman
//! dimension reaches 0.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::linalg::{exact_nullity, rank_primes, PrimeField};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sets::{enumerate_quadruples, IncrementalQuadruples, OrbitRow, SubsetSample};

/// Kernel of the relation matrix modulo a prime, kept up to date as columns
/// and rows arrive.
#[derive(Debug, Clone)]
pub struct IncrementalKernel {
    field: PrimeField,
    columns: usize,
    basis: Vec<Vec<u64>>,
}

impl IncrementalKernel {
    pub fn new(field: PrimeField) -> Self {
        IncrementalKernel { field, columns: 0, basis: Vec::new() }
    }

    /// A new unconstrained coordinate.
    pub fn add_column(&mut self) {
        for b in &mut self.basis {
            b.push(0);
        }
        let mut e = vec![0; self.columns + 1];
        e[self.columns] = 1;
        self.basis.push(e);
        self.columns += 1;
    }

    /// Restricts the kernel to vectors annihilated by `row`.
    pub fn add_row(&mut self, row: &OrbitRow) {
        let f = &self.field;
        let entries: Vec<(usize, u64)> = row.entries().map(|(c, k)| (c as usize, f.from_i64(k))).collect();
        let values: Vec<u64> = self
            .basis
            .iter()
            .map(|b| entries.iter().fold(0, |acc, &(c, k)| f.add(acc, f.mul(k, b[c]))))
            .collect();
        let Some(pivot) = values.iter().position(|&v| v != 0) else { return };
        let inv = f.inv(values[pivot]);
        let pivot_vec = self.basis[pivot].clone();
        for (i, b) in self.basis.iter_mut().enumerate() {
            if i == pivot || values[i] == 0 {
                continue;
            }
            let t = f.mul(values[i], inv);
            for (x, &y) in b.iter_mut().zip(&pivot_vec) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(t, y));
                }
            }
        }
        self.basis.swap_remove(pivot);
    }

    pub fn nullity(&self) -> usize {
        self.basis.len()
    }
}

/// Freiman dimension tracked under insertions, modulo two primes with an
/// exact fallback when they disagree.
#[derive(Debug, Clone)]
pub struct IncrementalDimension {
    quads: IncrementalQuadruples,
    kernels: [IncrementalKernel; 2],
    rows: Vec<OrbitRow>,
}

impl IncrementalDimension {
    pub fn new(group: GroupSpec) -> Self {
        let [p, q] = rank_primes();
        IncrementalDimension {
            quads: IncrementalQuadruples::new(group),
            kernels: [IncrementalKernel::new(p), IncrementalKernel::new(q)],
            rows: Vec::new(),
        }
    }

    pub fn insert(&mut self, a: Element) -> Result<()> {
        let rows = self.quads.insert(a)?;
        for k in &mut self.kernels {
            k.add_column();
            for r in &rows {
                k.add_row(r);
            }
        }
        self.rows.extend(rows);
        Ok(())
    }

    pub fn quadruples(&self) -> &IncrementalQuadruples {
        &self.quads
    }

    /// `None` for the empty set.
    pub fn dimension(&self) -> Option<usize> {
        let k = self.quads.len();
        if k == 0 {
            return None;
        }
        let [a, b] = [self.kernels[0].nullity(), self.kernels[1].nullity()];
        let nullity = if a == b { a } else { exact_nullity(k, &self.rows) };
        Some(nullity - 1)
    }
}

/// One growth run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HittingTimeRecord {
    pub trial: u64,
    pub seed: u64,
    pub n: u32,
    /// First size `>= 2` with no isolated element.
    pub tau_iso: Option<usize>,
    /// Start of the last isolated-free stretch before the run stopped.
    pub tau_iso_final: Option<usize>,
    /// First size `>= 2` with Freiman dimension 0.
    pub tau_dim0: Option<usize>,
    pub coincide: Option<bool>,
}

impl HittingTimeRecord {
    /// Panics if dimension 0 was reached before isolated elements vanished.
    pub fn assert_consistent(&self) {
        if let Some(d) = self.tau_dim0 {
            let iso = self.tau_iso.expect("dimension 0 reached with an isolated element");
            assert!(d >= iso, "tau_dim0 < tau_iso: {self:?}");
            assert!(self.tau_iso_final.is_some_and(|f| f <= d && f >= iso), "bad tau_iso_final: {self:?}");
        }
    }
}

/// Inserts a random ordering of `g` until dimension 0 (or exhaustion).
/// With `shadow`, every step is compared against from-scratch enumeration.
pub fn hitting_trial(g: &GroupSpec, trial: u64, seed: u64, shadow: bool) -> Result<HittingTimeRecord> {
    let mut order: Vec<Element> = g.elements().collect();
    order.shuffle(&mut rng_from_seed(seed));
    let mut state = IncrementalDimension::new(g.clone());
    let mut tau_iso = None;
    let mut run_start = None;
    let mut tau_dim0 = None;
    for (i, &a) in order.iter().enumerate() {
        state.insert(a)?;
        let size = i + 1;
        if shadow {
            check_against_scratch(g, &order[..size], &state)?;
        }
        if size < 2 {
            continue;
        }
        if state.quadruples().isolated_count() == 0 {
            tau_iso.get_or_insert(size);
            run_start.get_or_insert(size);
        } else {
            run_start = None;
        }
        if state.dimension() == Some(0) {
            tau_dim0 = Some(size);
            break;
        }
    }
    let tau_iso_final = run_start;
    let rec = HittingTimeRecord {
        trial,
        seed,
        n: g.order(),
        tau_iso,
        tau_iso_final,
        tau_dim0,
        coincide: tau_iso.zip(tau_dim0).map(|(a, b)| a == b),
    };
    rec.assert_consistent();
    Ok(rec)
}

fn check_against_scratch(g: &GroupSpec, prefix: &[Element], state: &IncrementalDimension) -> Result<()> {
    let set = SubsetSample::from_elements(g.clone(), prefix.to_vec())?;
    let gamma = enumerate_quadruples(&set);
    let quads = state.quadruples();
    let isolated = gamma.degrees().iter().filter(|&&d| d == 0).count();
    let same_degrees = set.elements().iter().all(|&x| quads.degree(x) == gamma.degree(x));
    let expected_dim = crate::hom::freiman_dimension(&set, true)?;
    if gamma.len() as u64 != quads.ordered_count()
        || isolated != quads.isolated_count()
        || !same_degrees
        || state.dimension() != Some(expected_dim)
    {
        return Err(Error::InvalidParameter(format!(
            "incremental state diverged from enumeration at size {}",
            prefix.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct HittingConfig {
    pub group: GroupSpec,
    pub trials: u64,
    pub seed: u64,
    pub shadow: bool,
}

/// Trial `t` uses seed `derive_seed(master, t)`; records come back in trial order.
pub fn run_hitting_time(cfg: &HittingConfig) -> Result<Vec<HittingTimeRecord>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| hitting_trial(&cfg.group, t, derive_seed(cfg.seed, t), cfg.shadow))
        .collect()
}

pub const HITTING_HEADER: &str = "trial,seed,n,tau_iso,tau_iso_final,tau_dim0,coincide";

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

pub fn hitting_csv(records: &[HittingTimeRecord]) -> String {
    let mut out = String::from(HITTING_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.trial,
            r.seed,
            r.n,
            opt(r.tau_iso),
            opt(r.tau_iso_final),
            opt(r.tau_dim0),
            opt(r.coincide)
        )
        .unwrap();
    }
    out
}
