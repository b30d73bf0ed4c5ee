//! Experiment drivers behind the command-line tool.

pub mod analyze;
pub mod config;
pub mod extract;
pub mod files;
pub mod hitting;
pub mod scan;
pub mod stats;

pub use analyze::{run_analyze, AnalyzeOptions, AnalyzeReport};
pub use config::{ExperimentConfig, OutputFormat};
pub use extract::{run_extract, ExtractRunReport};
pub use files::{format_hom_file, parse_hom_file, read_hom_file};
pub use hitting::{hitting_csv, hitting_trial, run_hitting_time, HittingConfig, HittingTimeRecord, IncrementalDimension};
pub use scan::{
    dim0_monotone_up_to_ci, run_threshold_scan, run_threshold_scan_with_records, scan_csv, threshold_probability,
    ScanConfig, ScanRow, TrialRecord,
};
