//! Threshold scans: random subsets at `p = C n^(-2/3) (ln n)^(1/3)` for a grid of `C`.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::hom::{dimension_from_rows, is_universally_rigid};
use crate::rng::derive_seed;
use crate::sets::{sample_binomial, PairSums};

use super::stats::{mean_std, wilson, Z95};

/// `C n^(-2/3) (ln n)^(1/3)`, clamped to `[0, 1]`.
pub fn threshold_probability(n: u32, c: f64) -> f64 {
    let n = n as f64;
    (c * n.powf(-2.0 / 3.0) * n.ln().max(0.0).cbrt()).clamp(0.0, 1.0)
}

/// The `C` for which [`threshold_probability`] gives `p`.
pub fn threshold_constant(n: u32, p: f64) -> f64 {
    let n = n as f64;
    p / (n.powf(-2.0 / 3.0) * n.ln().max(f64::MIN_POSITIVE).cbrt())
}

/// Outcome of one random set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub size: usize,
    /// Ordered count `|Gamma_A|`.
    pub quadruples: u64,
    pub isolated: usize,
    /// Undefined for the empty set.
    pub freiman_dim: Option<usize>,
    pub dim_zero: bool,
    pub rigid: Option<bool>,
    #[serde(skip)]
    pub wall_ms: f64,
}

impl TrialRecord {
    /// Panics if the record contradicts itself. A singleton is isolated yet
    /// has dimension 0, so the isolation check starts at two elements.
    pub fn assert_consistent(&self) {
        assert_eq!(self.dim_zero, self.freiman_dim == Some(0), "dim_zero flag disagrees with dimension: {self:?}");
        if self.isolated > 0 && self.size >= 2 {
            assert!(self.freiman_dim.is_some_and(|d| d >= 1), "isolated element with dimension 0: {self:?}");
        }
        if self.rigid == Some(true) {
            assert!(self.dim_zero, "rigid set with positive dimension: {self:?}");
        }
    }
}

/// Samples one binomial set and measures it. Rigidity is decided when the
/// set has at most `rigidity_limit` elements.
pub fn run_trial(g: &GroupSpec, p: f64, trial: u64, seed: u64, exact: bool, rigidity_limit: usize) -> Result<TrialRecord> {
    let start = Instant::now();
    let set = sample_binomial(g, p, seed)?;
    let sums = PairSums::build(&set);
    let isolated = sums.degrees().iter().filter(|&&d| d == 0).count();
    let freiman_dim = match set.len() {
        0 => None,
        1 => Some(0),
        k => {
            let rows: Vec<_> = sums.orbit_rows().collect();
            Some(dimension_from_rows(k, &rows, exact))
        }
    };
    let rigid = if !set.is_empty() && set.len() <= rigidity_limit { Some(is_universally_rigid(&set)?) } else { None };
    Ok(TrialRecord {
        trial,
        seed,
        size: set.len(),
        quadruples: sums.ordered_count(),
        isolated,
        freiman_dim,
        dim_zero: freiman_dim == Some(0),
        rigid,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub group: GroupSpec,
    pub c_grid: Vec<f64>,
    /// Replaces the grid by a single fixed probability.
    pub p_override: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub exact_rank: bool,
    pub rigidity_limit: usize,
}

/// One row of the scan table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: u32,
    #[serde(rename = "C")]
    pub c: f64,
    pub p: f64,
    pub trials: u64,
    /// Trials whose set has no isolated element (the empty set counts).
    pub frac_no_isolated: f64,
    /// Trials whose set is nonempty with Freiman dimension 0.
    pub frac_dim0: f64,
    /// Over nonempty sets; `None` when every set was empty.
    pub mean_dim: Option<f64>,
    pub std_dim: Option<f64>,
    /// Half-width of the 95% Wilson interval for `frac_dim0`.
    pub ci_half: f64,
    pub seed: u64,
}

impl ScanRow {
    /// The 95% Wilson interval for `frac_dim0`.
    pub fn dim0_interval(&self) -> (f64, f64) {
        let k = (self.frac_dim0 * self.trials as f64).round() as usize;
        let (c, h) = wilson(k, self.trials as usize, Z95);
        (c - h, c + h)
    }
}

/// Aggregates the records of one grid point.
pub fn summarize(n: u32, c: f64, p: f64, seed: u64, records: &[TrialRecord]) -> ScanRow {
    for r in records {
        r.assert_consistent();
    }
    let trials = records.len();
    let no_isolated = records.iter().filter(|r| r.isolated == 0).count();
    let dim0 = records.iter().filter(|r| r.dim_zero).count();
    let dims: Vec<f64> = records.iter().filter_map(|r| r.freiman_dim.map(|d| d as f64)).collect();
    let moments = mean_std(&dims);
    ScanRow {
        n,
        c,
        p,
        trials: trials as u64,
        frac_no_isolated: no_isolated as f64 / trials.max(1) as f64,
        frac_dim0: dim0 as f64 / trials.max(1) as f64,
        mean_dim: moments.map(|m| m.0),
        std_dim: moments.map(|m| m.1),
        ci_half: wilson(dim0, trials, Z95).1,
        seed,
    }
}

/// Runs every grid point; trial `t` of grid point `i` uses seed
/// `derive_seed(master, i * trials + t)`. Rows come out sorted by `C`.
pub fn run_threshold_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    let (rows, _) = run_threshold_scan_with_records(cfg)?;
    Ok(rows)
}

/// [`run_threshold_scan`] also returning every trial record, grouped by row.
pub fn run_threshold_scan_with_records(cfg: &ScanConfig) -> Result<(Vec<ScanRow>, Vec<Vec<TrialRecord>>)> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let n = cfg.group.order();
    let mut points: Vec<(f64, f64)> = match cfg.p_override {
        Some(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
            vec![(threshold_constant(n, p), p)]
        }
        None => {
            if cfg.c_grid.is_empty() {
                return Err(Error::InvalidParameter("the C grid is empty".into()));
            }
            if let Some(c) = cfg.c_grid.iter().find(|c| !c.is_finite() || **c < 0.0) {
                return Err(Error::InvalidParameter(format!("C must be a nonnegative number, got {c}")));
            }
            cfg.c_grid.iter().map(|&c| (c, threshold_probability(n, c))).collect()
        }
    };
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    let jobs: Vec<(usize, u64)> = (0..points.len()).flat_map(|i| (0..cfg.trials).map(move |t| (i, t))).collect();
    let records: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|&(i, t)| {
            let index = i as u64 * cfg.trials + t;
            run_trial(&cfg.group, points[i].1, t, derive_seed(cfg.seed, index), cfg.exact_rank, cfg.rigidity_limit)
        })
        .collect::<Result<_>>()?;
    let grouped: Vec<Vec<TrialRecord>> = records.chunks(cfg.trials as usize).map(|c| c.to_vec()).collect();
    let rows = points.iter().zip(&grouped).map(|(&(c, p), recs)| summarize(n, c, p, cfg.seed, recs)).collect();
    Ok((rows, grouped))
}

pub const SCAN_HEADER: &str = "n,C,p,trials,frac_no_isolated,frac_dim0,mean_dim,std_dim,ci_half,seed";

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.c,
            r.p,
            r.trials,
            r.frac_no_isolated,
            r.frac_dim0,
            opt(r.mean_dim),
            opt(r.std_dim),
            r.ci_half,
            r.seed
        )
        .unwrap();
    }
    out
}

/// Whether `frac_dim0` never drops between consecutive rows by more than
/// their 95% intervals allow.
pub fn dim0_monotone_up_to_ci(rows: &[ScanRow]) -> bool {
    rows.windows(2).all(|w| {
        let (lo_a, hi_a) = w[0].dim0_interval();
        let (lo_b, hi_b) = w[1].dim0_interval();
        w[1].frac_dim0 >= w[0].frac_dim0 || (lo_b <= hi_a && lo_a <= hi_b)
    })
}
