//! Experiment configuration as read from JSON files and command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Every field is optional so that file and flag layers can be merged.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: Option<String>,
    pub n: Option<u32>,
    #[serde(rename = "C")]
    pub c: Option<Vec<f64>>,
    pub p: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub wmax: Option<usize>,
    pub exact_rank: Option<bool>,
    pub set: Option<PathBuf>,
    pub hom: Option<PathBuf>,
    pub threshold: Option<f64>,
    pub eta: Option<f64>,
    pub rigidity_bound: Option<usize>,
    pub theta_sample: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: ExperimentConfig) -> ExperimentConfig {
        ExperimentConfig {
            group: self.group.or(base.group),
            n: self.n.or(base.n),
            c: self.c.filter(|c| !c.is_empty()).or(base.c),
            p: self.p.or(base.p),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            wmax: self.wmax.or(base.wmax),
            exact_rank: self.exact_rank.or(base.exact_rank),
            set: self.set.or(base.set),
            hom: self.hom.or(base.hom),
            threshold: self.threshold.or(base.threshold),
            eta: self.eta.or(base.eta),
            rigidity_bound: self.rigidity_bound.or(base.rigidity_bound),
            theta_sample: self.theta_sample.or(base.theta_sample),
        }
    }

    /// The group from `group`, or `Z_n` from `n`; both must agree when given.
    pub fn resolve_group(&self) -> Result<GroupSpec> {
        match (&self.group, self.n) {
            (Some(s), n) => {
                let g: GroupSpec = s.parse()?;
                if let Some(n) = n {
                    if n != g.order() {
                        return Err(Error::InvalidParameter(format!("n = {n} but group {g} has order {}", g.order())));
                    }
                }
                Ok(g)
            }
            (None, Some(n)) => GroupSpec::cyclic(n),
            (None, None) => Err(Error::InvalidParameter("no group given (use group or n)".into())),
        }
    }

    pub fn trials(&self) -> Result<u64> {
        match self.trials.unwrap_or(100) {
            0 => Err(Error::InvalidParameter("trials must be positive".into())),
            t => Ok(t),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn eta(&self) -> Result<f64> {
        let eta = self.eta.unwrap_or(0.2);
        if eta > 0.0 && eta <= 1.0 {
            Ok(eta)
        } else {
            Err(Error::InvalidParameter(format!("eta must lie in (0, 1], got {eta}")))
        }
    }

    pub fn threshold(&self) -> Result<f64> {
        let t = self.threshold.unwrap_or(0.5);
        if t > 0.0 && t <= 1.0 {
            Ok(t)
        } else {
            Err(Error::InvalidParameter(format!("threshold must lie in (0, 1], got {t}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file = ExperimentConfig::from_json(r#"{"n": 100, "C": [1, 2], "trials": 5, "format": "json"}"#).unwrap();
        let flags = ExperimentConfig { trials: Some(9), c: Some(vec![]), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.trials, Some(9));
        assert_eq!(merged.c, Some(vec![1.0, 2.0]));
        assert_eq!(merged.format, Some(OutputFormat::Json));
        assert_eq!(merged.resolve_group().unwrap().order(), 100);
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).is_err());
        let c = ExperimentConfig { group: Some("2,3".into()), n: Some(7), ..Default::default() };
        assert!(c.resolve_group().is_err());
        assert!(ExperimentConfig::default().resolve_group().is_err());
        assert!(ExperimentConfig { trials: Some(0), ..Default::default() }.trials().is_err());
        assert!(ExperimentConfig { eta: Some(0.0), ..Default::default() }.eta().is_err());
    }
}
