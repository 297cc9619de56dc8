use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_FLOWS: usize = 100;
pub const DEFAULT_PACKET_BYTES: u32 = 1024;
pub const DEFAULT_PACKETS_TOTAL: u64 = 100_000;
/// Start times are drawn uniformly from `[0, START_WINDOW_S]`.
pub const START_WINDOW_S: f64 = 10.0;
/// Per-flow rate the harness uses by default.
pub const DESK_RATE_BPS: f64 = 2e6;
/// Per-flow rate of the original testbed.
pub const TESTBED_RATE_BPS: f64 = 100e6;

/// A constant-bit-rate UDP flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowSpec {
    pub src: usize,
    pub dst: usize,
    pub start_s: f64,
    pub rate_bps: f64,
    pub packet_bytes: u32,
    pub packets_total: u64,
}

impl FlowSpec {
    pub fn validate(&self) -> Result<()> {
        if self.src == self.dst {
            return Err(Error::invalid("dst", "flow source and destination coincide"));
        }
        if !(self.rate_bps > 0.0) {
            return Err(Error::invalid("rate_bps", "must be positive"));
        }
        if self.packet_bytes == 0 {
            return Err(Error::invalid("packet_bytes", "must be positive"));
        }
        if !(self.start_s >= 0.0) {
            return Err(Error::invalid("start_s", "must be non-negative"));
        }
        Ok(())
    }

    pub fn packet_bits(&self) -> f64 {
        self.packet_bytes as f64 * 8.0
    }

    /// Seconds between consecutive packets.
    pub fn interval_s(&self) -> f64 {
        self.packet_bits() / self.rate_bps
    }

    /// Packets emitted before the cutoff: `start + k * interval < duration_s`.
    pub fn scheduled_packets(&self, duration_s: f64) -> u64 {
        if self.start_s >= duration_s {
            return 0;
        }
        let interval = self.interval_s();
        let mut k = ((duration_s - self.start_s) / interval).ceil() as u64;
        // guard against rounding at the boundary
        while k > 0 && self.start_s + (k - 1) as f64 * interval >= duration_s {
            k -= 1;
        }
        while self.start_s + k as f64 * interval < duration_s {
            k += 1;
        }
        k.min(self.packets_total)
    }
}

/// Traffic pattern knobs shared by every flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrafficSpec {
    pub n_flows: usize,
    pub rate_bps: f64,
    pub packet_bytes: u32,
    pub packets_total: u64,
}

impl Default for TrafficSpec {
    fn default() -> Self {
        Self {
            n_flows: DEFAULT_FLOWS,
            rate_bps: DESK_RATE_BPS,
            packet_bytes: DEFAULT_PACKET_BYTES,
            packets_total: DEFAULT_PACKETS_TOTAL,
        }
    }
}

/// Independent source/destination pairs (repeats allowed) with uniform start times.
pub fn generate_flows(n_nodes: usize, traffic: &TrafficSpec, seed: u64) -> Result<Vec<FlowSpec>> {
    if n_nodes < 2 {
        return Err(Error::invalid("n_nodes", "need at least two nodes for traffic"));
    }
    if traffic.n_flows == 0 {
        return Err(Error::invalid("n_flows", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flows = (0..traffic.n_flows)
        .map(|_| {
            let src = rng.random_range(0..n_nodes);
            let mut dst = rng.random_range(0..n_nodes - 1);
            if dst >= src {
                dst += 1;
            }
            let start_s = rng.random::<f64>() * START_WINDOW_S;
            FlowSpec {
                src,
                dst,
                start_s,
                rate_bps: traffic.rate_bps,
                packet_bytes: traffic.packet_bytes,
                packets_total: traffic.packets_total,
            }
        })
        .collect::<Vec<_>>();
    for f in &flows {
        f.validate()?;
    }
    Ok(flows)
}
