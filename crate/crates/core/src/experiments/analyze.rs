//! Single-set analysis report.

use serde::Serialize;

use crate::connectivity::{is_additively_connected, Connectivity};
use crate::diagnostics::{diagnostics, DiagnosticsReport};
use crate::error::{Error, Result};
use crate::hom::{freiman_dimension, is_universally_rigid};
use crate::sets::{PairSums, SubsetSample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzeOptions {
    pub eta: f64,
    pub w_max: usize,
    pub exact_rank: bool,
    /// Rigidity is decided for sets up to this size.
    pub rigidity_limit: usize,
    pub fourier_limit: u32,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { eta: 0.2, w_max: 4, exact_rank: false, rigidity_limit: 60, fourier_limit: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub eta: f64,
    pub w_max: usize,
    #[serde(flatten)]
    pub result: Connectivity,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub group: String,
    pub n: u32,
    pub size: usize,
    pub quadruples_ordered: u64,
    pub orbits: u64,
    pub isolated: Vec<u32>,
    pub freiman_dim: usize,
    pub connectivity: ConnectivityReport,
    pub rigid: Option<bool>,
    pub diagnostics: DiagnosticsReport,
}

pub fn run_analyze(set: &SubsetSample, opts: &AnalyzeOptions) -> Result<AnalyzeReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = set.group();
    let sums = PairSums::build(set);
    let isolated = sums
        .degrees()
        .iter()
        .zip(set.elements())
        .filter(|(&d, _)| d == 0)
        .map(|(_, x)| x.0)
        .collect();
    let rigid = if set.len() <= opts.rigidity_limit { Some(is_universally_rigid(set)?) } else { None };
    Ok(AnalyzeReport {
        group: g.to_string(),
        n: g.order(),
        size: set.len(),
        quadruples_ordered: sums.ordered_count(),
        orbits: sums.orbit_count(),
        isolated,
        freiman_dim: freiman_dimension(set, opts.exact_rank)?,
        connectivity: ConnectivityReport {
            eta: opts.eta,
            w_max: opts.w_max,
            result: is_additively_connected(set, opts.eta, opts.w_max)?,
        },
        rigid,
        diagnostics: diagnostics(set, opts.fourier_limit)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn small_cyclic_example() {
        let u = SubsetSample::from_indices(GroupSpec::cyclic(6).unwrap(), &[0, 1, 3]).unwrap();
        let r = run_analyze(&u, &AnalyzeOptions::default()).unwrap();
        assert_eq!((r.quadruples_ordered, r.freiman_dim, r.rigid), (2, 1, Some(false)));
        assert_eq!(r.isolated, vec![1]);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["connectivity"]["verdict"], "connected");
    }

    #[test]
    fn full_group_and_empty_set() {
        let g = GroupSpec::cyclic(5).unwrap();
        let r = run_analyze(&SubsetSample::full(g.clone()), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.freiman_dim, 0);
        assert!(r.isolated.is_empty());
        assert_eq!(r.connectivity.result, Connectivity::Connected);
        assert_eq!(r.rigid, Some(true));
        let empty = SubsetSample::from_indices(g, &[]).unwrap();
        assert!(matches!(run_analyze(&empty, &AnalyzeOptions::default()), Err(Error::EmptySet)));
    }
}
