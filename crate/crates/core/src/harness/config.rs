use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netsim::{SimConfig, TrafficSpec};
use crate::registry::{GeneratorSpec, Site};
use crate::topology::{CapacityModel, DEFAULT_AREA_M, DEFAULT_RADIUS_M, DEFAULT_RETRY_CAP};

/// Fractal dimensions compared against the baselines.
pub const COMPARISON_DIMENSIONS: [f64; 3] = [2.0, 6.5, 7.5];

pub const DEFAULT_BASELINES: [&str; 5] = ["er", "ws", "ba", "grid", "tree"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StructuralOptions {
    /// Use the normalized Laplacian for both λ₂ columns.
    pub normalized_laplacian: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub d_values: Vec<f64>,
    pub n_nodes: usize,
    pub area_m: f64,
    pub radius_m: f64,
    pub replicates: u32,
    pub base_seed: u64,
    pub capacity: CapacityModel,
    pub retry_cap: u32,
    pub traffic: TrafficSpec,
    pub sim: SimConfig,
    pub structural: StructuralOptions,
    /// Generator selectors evaluated by the baseline comparison.
    pub baselines: Vec<GeneratorSpec>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d_values: (0..19).map(|k| 1.0 + 0.5 * k as f64).collect(),
            n_nodes: 85,
            area_m: DEFAULT_AREA_M,
            radius_m: DEFAULT_RADIUS_M,
            replicates: 30,
            base_seed: 20_240_601,
            capacity: CapacityModel::default(),
            retry_cap: DEFAULT_RETRY_CAP,
            traffic: TrafficSpec::default(),
            sim: SimConfig::default(),
            structural: StructuralOptions::default(),
            baselines: DEFAULT_BASELINES
                .iter()
                .map(|k| GeneratorSpec::new(k))
                .chain(COMPARISON_DIMENSIONS.iter().map(|&d| GeneratorSpec::fractal(d)))
                .collect(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d_values.is_empty() {
            return Err(Error::invalid("d_values", "must not be empty"));
        }
        if let Some(d) = self.d_values.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::invalid("d_values", format!("{d} is not a positive dimension")));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("replicates", "must be at least 1"));
        }
        if self.n_nodes < 2 {
            return Err(Error::invalid("n_nodes", "need at least two nodes"));
        }
        if !(self.area_m > 0.0) {
            return Err(Error::invalid("area_m", "must be positive"));
        }
        if !(self.radius_m > 0.0) {
            return Err(Error::invalid("radius_m", "must be positive"));
        }
        self.capacity.validate()?;
        self.sim.validate()?;
        if self.traffic.n_flows == 0 {
            return Err(Error::invalid("traffic.n_flows", "must be at least 1"));
        }
        Ok(())
    }

    pub fn site(&self) -> Site {
        Site {
            n_nodes: self.n_nodes,
            area_m: self.area_m,
            radius_m: self.radius_m,
            capacity: self.capacity,
            retry_cap: self.retry_cap,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_spans_one_to_ten() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.d_values.len(), 19);
        assert_eq!(cfg.d_values[0], 1.0);
        assert_eq!(cfg.d_values[18], 10.0);
        assert_eq!(cfg.baselines.len(), 8);
        cfg.validate().unwrap();
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"d_values": [2.0], "replicates": 1}"#).unwrap();
        assert_eq!(cfg.d_values, vec![2.0]);
        assert_eq!(cfg.n_nodes, 85);
        assert_eq!(cfg.sim.duration_s, 50.0);
        let back: ExperimentConfig =
            serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_invalid() {
        for text in [
            r#"{"d_values": []}"#,
            r#"{"d_values": [0.0]}"#,
            r#"{"replicates": 0}"#,
        ] {
            assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
        }
    }
}
