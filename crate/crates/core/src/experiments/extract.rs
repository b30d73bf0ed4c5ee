//! Extraction of an affine map from user-supplied homomorphism values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy::{extraction_report, ExtractOptions, ExtractionReport};
use crate::group::GroupSpec;
use crate::hom::{is_freiman_hom, ElementMap};
use crate::sets::SubsetSample;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractRunReport {
    pub n: u32,
    pub size: usize,
    pub target: String,
    pub input_is_freiman_hom: bool,
    #[serde(flatten)]
    pub extraction: ExtractionReport,
    pub notes: Vec<String>,
}

/// Fails with [`Error::PartialMap`] when `phi` misses an element of `U`.
pub fn run_extract(
    set: &SubsetSample,
    target: &GroupSpec,
    phi: &ElementMap,
    opts: &ExtractOptions,
) -> Result<ExtractRunReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let input_is_freiman_hom = is_freiman_hom(set, target, phi)?;
    let extraction = extraction_report(set, target, phi, opts)?;
    let mut notes = Vec::new();
    if !input_is_freiman_hom {
        notes.push("input not a Freiman homomorphism".to_string());
    }
    if !extraction.gamma_total {
        notes.push("gamma not total at the threshold".to_string());
    } else if extraction.violations > 0 {
        notes.push(format!("gamma fails additivity in {} checks", extraction.violations));
    }
    Ok(ExtractRunReport {
        n: set.group().order(),
        size: set.len(),
        target: target.to_string(),
        input_is_freiman_hom,
        extraction,
        notes,
    })
}
