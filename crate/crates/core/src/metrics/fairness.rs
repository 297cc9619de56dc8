use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-node traffic load in bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LoadVector(Vec<f64>);

impl LoadVector {
    pub fn new(loads: Vec<f64>) -> Result<Self> {
        if loads.is_empty() {
            return Err(Error::invalid("loads", "load vector is empty"));
        }
        if let Some(bad) = loads.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::invalid(
                "loads",
                format!("loads must be finite and non-negative, got {bad}"),
            ));
        }
        Ok(Self(loads))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }
}

/// Population standard deviation over the mean.
pub fn coefficient_of_variation(loads: &LoadVector) -> Result<f64> {
    let mu = loads.mean();
    if !(mu > 0.0) {
        return Err(Error::Undefined("coefficient of variation of all-zero loads"));
    }
    let var = loads
        .as_slice()
        .iter()
        .map(|x| (x - mu).powi(2))
        .sum::<f64>()
        / loads.len() as f64;
    Ok(var.sqrt() / mu)
}

/// `(Σx)² / (N Σx²)`.
pub fn jains_index(loads: &LoadVector) -> Result<f64> {
    let xs = loads.as_slice();
    let sum: f64 = xs.iter().sum();
    let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
    if !(sum_sq > 0.0) {
        return Err(Error::Undefined("Jain's index of all-zero loads"));
    }
    Ok(sum * sum / (xs.len() as f64 * sum_sq))
}
