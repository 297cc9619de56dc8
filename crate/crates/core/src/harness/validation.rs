use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::SweepRecord;
use crate::boxcount::{dyadic_ladder, estimate_dimension, DEFAULT_RUNGS};
use crate::error::{Error, Result};
use crate::fractal::{generate_points, FractalConfig};
use crate::metrics::correlation_matrix;

/// Reads one numeric column of a sweep row.
pub type MetricGetter = fn(&SweepRecord) -> Option<f64>;

pub const MIN_VALIDATION_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxCountRow {
    pub d_target: f64,
    pub n_points: usize,
    pub d_est: Option<f64>,
    pub r_squared: Option<f64>,
    /// Largest and smallest box size inside the fit window.
    pub fit_max_box: Option<f64>,
    pub fit_min_box: Option<f64>,
    pub error: Option<String>,
}

fn validate_one(d: f64, n_points: usize) -> BoxCountRow {
    let mut row = BoxCountRow {
        d_target: d,
        n_points,
        d_est: None,
        r_squared: None,
        fit_max_box: None,
        fit_min_box: None,
        error: None,
    };
    let outcome = FractalConfig::new(n_points, d)
        .and_then(|c| generate_points(&c))
        .and_then(|ps| estimate_dimension(&ps.points, &dyadic_ladder(&ps.points, DEFAULT_RUNGS)));
    match outcome {
        Ok(est) => {
            row.d_est = Some(est.d_est);
            row.r_squared = Some(est.r_squared);
            row.fit_max_box = est.fit_range.first().map(|&k| est.samples[k].0);
            row.fit_min_box = est.fit_range.last().map(|&k| est.samples[k].0);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Estimate the box-counting dimension of `n_points` generated points per target.
pub fn run_boxcount_validation(d_values: &[f64], n_points: usize) -> Result<Vec<BoxCountRow>> {
    if n_points < MIN_VALIDATION_POINTS {
        return Err(Error::invalid(
            "n_points",
            format!("need at least {MIN_VALIDATION_POINTS} points, got {n_points}"),
        ));
    }
    if d_values.is_empty() {
        return Err(Error::invalid("d_values", "must not be empty"));
    }
    Ok(d_values
        .par_iter()
        .map(|&d| validate_one(d, n_points))
        .collect())
}

/// Column accessor by metric name; short aliases map to the unit-suffixed columns.
pub fn metric_column(name: &str) -> Option<MetricGetter> {
    Some(match name {
        "throughput" | "throughput_bps" => |r| r.throughput_bps,
        "delay" | "delay_s" => |r| r.delay_s,
        "jitter" | "jitter_s" => |r| r.jitter_s,
        "pdr" => |r| r.pdr,
        "loss_ratio" => |r| r.loss_ratio,
        "efficiency_unweighted" => |r| r.efficiency_unweighted,
        "efficiency_weighted" => |r| r.efficiency_weighted,
        "lambda2_unweighted" => |r| r.lambda2_unweighted,
        "lambda2_weighted" => |r| r.lambda2_weighted,
        "avg_edp" => |r| r.avg_edp,
        "cv_load" => |r| r.cv_load,
        "jain_index" => |r| r.jain_index,
        "d_frac" => |r| r.d_frac,
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Rows where every requested metric was present.
    pub rows_used: usize,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[i][j])
    }
}

/// Pearson matrix over the rows where all requested metrics are present.
pub fn correlate(records: &[SweepRecord], metrics: &[&str]) -> Result<CorrelationMatrix> {
    if metrics.len() < 2 {
        return Err(Error::invalid("metrics", "need at least two metrics"));
    }
    let getters = metrics
        .iter()
        .map(|m| metric_column(m).ok_or_else(|| Error::invalid("metrics", format!("unknown metric `{m}`"))))
        .collect::<Result<Vec<_>>>()?;
    let mut columns = vec![Vec::new(); metrics.len()];
    for r in records.iter().filter(|r| r.error.is_none()) {
        let values: Option<Vec<f64>> = getters.iter().map(|g| g(r)).collect();
        if let Some(values) = values {
            for (col, v) in columns.iter_mut().zip(values) {
                col.push(v);
            }
        }
    }
    let rows_used = columns[0].len();
    Ok(CorrelationMatrix {
        names: metrics.iter().map(|m| m.to_string()).collect(),
        values: correlation_matrix(&columns)?,
        rows_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_small_point_sets() {
        assert!(run_boxcount_validation(&[1.5], 9_999).is_err());
    }

    #[test]
    fn unknown_metric_is_an_error() {
        assert!(correlate(&[], &["pdr", "nope"]).is_err());
        assert!(metric_column("throughput").is_some());
    }
}
