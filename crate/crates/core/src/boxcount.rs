//! Box-counting dimension of planar point sets.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::bounding_box;

/// Minimum number of ladder rungs the regression must keep.
pub const MIN_FIT_SAMPLES: usize = 4;
/// Rungs with fewer occupied boxes are excluded from the fit.
pub const MIN_OCCUPIED: usize = 4;
/// Rungs with more than this fraction of `n` occupied are excluded.
pub const SATURATION_FRACTION: f64 = 0.4;
pub const DEFAULT_RUNGS: u32 = 10;
pub const MIN_POINTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxCountEstimate {
    pub d_est: f64,
    pub r_squared: f64,
    /// `(box_size, occupied)` per rung, largest box first.
    pub samples: Vec<(f64, usize)>,
    pub fit_range: Vec<usize>,
}

/// Cells of side `box_size` anchored at the bounding-box minimum that hold at
/// least one point. Points on the far bounding-box edge fold into the last cell.
pub fn occupied_boxes(points: &[[f64; 2]], box_size: f64) -> Result<usize> {
    if points.is_empty() {
        return Err(Error::invalid("points", "need at least one point"));
    }
    if !(box_size > 0.0) {
        return Err(Error::invalid("box_size", "must be positive"));
    }
    let (lo, hi) = bounding_box(points);
    let cells_x = cells_along(hi[0] - lo[0], box_size);
    let cells_y = cells_along(hi[1] - lo[1], box_size);
    let mut seen = HashSet::with_capacity(points.len());
    for p in points {
        let cx = cell_index(p[0] - lo[0], box_size, cells_x);
        let cy = cell_index(p[1] - lo[1], box_size, cells_y);
        seen.insert((cx, cy));
    }
    Ok(seen.len())
}

fn cells_along(extent: f64, size: f64) -> u64 {
    ((extent / size).ceil() as u64).max(1)
}

fn cell_index(offset: f64, size: f64, cells: u64) -> u64 {
    ((offset / size).floor() as u64).min(cells - 1)
}

/// Dyadic ladder `S * 2^-i`, `i = 1..=rungs`, with `S` the longer bounding-box side.
pub fn dyadic_ladder(points: &[[f64; 2]], rungs: u32) -> Vec<f64> {
    let (lo, hi) = bounding_box(points);
    let side = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    (1..=rungs).map(|i| side * 0.5f64.powi(i as i32)).collect()
}

/// Least-squares slope of `ln N(s)` against `ln(1/s)` over the non-saturated rungs.
pub fn estimate_dimension(points: &[[f64; 2]], ladder: &[f64]) -> Result<BoxCountEstimate> {
    if points.len() < MIN_POINTS {
        return Err(Error::invalid(
            "points",
            format!("need at least {MIN_POINTS} points, got {}", points.len()),
        ));
    }
    let mut sizes = ladder.to_vec();
    sizes.sort_by(|a, b| b.total_cmp(a));
    let samples = sizes
        .iter()
        .map(|&s| occupied_boxes(points, s).map(|c| (s, c)))
        .collect::<Result<Vec<_>>>()?;

    let ceiling = SATURATION_FRACTION * points.len() as f64;
    let fit_range: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, &(_, c))| c >= MIN_OCCUPIED && (c as f64) <= ceiling)
        .map(|(k, _)| k)
        .collect();
    if fit_range.len() < MIN_FIT_SAMPLES {
        return Err(Error::EstimationFailed {
            needed: MIN_FIT_SAMPLES,
            found: fit_range.len(),
            samples,
        });
    }
    let xs: Vec<f64> = fit_range.iter().map(|&k| (1.0 / samples[k].0).ln()).collect();
    let ys: Vec<f64> = fit_range.iter().map(|&k| (samples[k].1 as f64).ln()).collect();
    let (slope, r_squared) = least_squares(&xs, &ys);
    Ok(BoxCountEstimate {
        d_est: slope,
        r_squared,
        samples,
        fit_range,
    })
}

/// Slope and coefficient of determination of an ordinary least-squares line.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    (slope, r2)
}
