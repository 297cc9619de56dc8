//! Experiment orchestration: the dimension sweep, the baseline comparison,
//! box-counting validation and metric correlation, all written as CSV.
//!
//! Seeds: a sweep row for dimension `d` and replicate `r` simulates traffic
//! drawn with `base_seed ^ fnv1a64("{d}#{r}")`. Baseline rows share the flow
//! seed `base_seed ^ fnv1a64("flows#{r}")` across configurations, and stochastic
//! generators draw their graph from `base_seed ^ fnv1a64("{label}#{r}")`.

mod config;
mod io;
mod sweep;
mod validation;

pub use config::{ExperimentConfig, StructuralOptions, DEFAULT_BASELINES, COMPARISON_DIMENSIONS};
pub use io::{
    read_records, summarize, write_correlation, write_records, write_summary, SummaryRow,
};
pub use sweep::{
    evaluate, flow_seed_for_baselines, run_baselines, run_configurations, run_sweep, seed_for,
    Job, SweepRecord,
};
pub use validation::{
    correlate, metric_column, run_boxcount_validation, BoxCountRow, CorrelationMatrix,
    MIN_VALIDATION_POINTS,
};

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(PRIME))
}
