use serde::{Deserialize, Serialize};

use super::engine::SimResult;
use super::flows::FlowSpec;
use crate::error::{Error, Result};
use crate::metrics::{coefficient_of_variation, jains_index, LoadVector};

/// Flow-averaged quality-of-service summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QosRecord {
    /// Mean per-flow goodput, bits per second.
    pub throughput_bps: f64,
    /// Mean of per-flow mean delays over flows with at least one delivery.
    pub delay_s: Option<f64>,
    /// Mean of per-flow jitter over flows with at least three deliveries.
    pub jitter_s: Option<f64>,
    /// Delivered over sent, across all flows.
    pub pdr: f64,
    pub loss_ratio: f64,
    pub sent: u64,
    pub delivered: u64,
    pub dropped_queue: u64,
    pub dropped_unreachable: u64,
    pub in_flight: u64,
    /// Per-node received bytes (relayed plus terminated).
    pub node_loads: Vec<f64>,
    pub cv_load: Option<f64>,
    pub jain_index: Option<f64>,
}

/// Mean absolute deviation of consecutive inter-arrival gaps.
pub fn flow_jitter(deliveries_s: &[f64]) -> Option<f64> {
    if deliveries_s.len() < 3 {
        return None;
    }
    let gaps: Vec<f64> = deliveries_s.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    Some(gaps.iter().map(|g| (g - mean).abs()).sum::<f64>() / gaps.len() as f64)
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn derive_metrics(result: &SimResult, flows: &[FlowSpec], duration_s: f64) -> Result<QosRecord> {
    if result.flows.len() != flows.len() {
        return Err(Error::invalid(
            "flows",
            format!(
                "{} flow specs for {} flow results",
                flows.len(),
                result.flows.len()
            ),
        ));
    }
    if !(duration_s > 0.0) {
        return Err(Error::invalid("duration_s", "must be positive"));
    }
    let totals = result.totals();
    let throughput_bps = mean(
        result
            .flows
            .iter()
            .map(|f| f.delivered_bytes as f64 * 8.0 / duration_s),
    )
    .unwrap_or(0.0);
    let delay_s = mean(
        result
            .flows
            .iter()
            .filter(|f| f.delivered > 0)
            .map(|f| f.sum_delay_s / f.delivered as f64),
    );
    let jitter_s = mean(result.flows.iter().filter_map(|f| flow_jitter(&f.deliveries_s)));
    let pdr = if totals.sent > 0 {
        totals.delivered as f64 / totals.sent as f64
    } else {
        0.0
    };
    let node_loads = result.node_loads();
    let (cv_load, jain_index) = match LoadVector::new(node_loads.clone()) {
        Ok(loads) => (
            coefficient_of_variation(&loads).ok(),
            jains_index(&loads).ok(),
        ),
        Err(_) => (None, None),
    };
    Ok(QosRecord {
        throughput_bps,
        delay_s,
        jitter_s,
        pdr,
        loss_ratio: 1.0 - pdr,
        sent: totals.sent,
        delivered: totals.delivered,
        dropped_queue: totals.dropped_queue,
        dropped_unreachable: totals.dropped_unreachable,
        in_flight: totals.in_flight,
        node_loads,
        cv_load,
        jain_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netsim::engine::{FlowStats, NodeStats};

    #[test]
    fn jitter_examples() {
        assert_eq!(flow_jitter(&[0.0, 1.0, 3.0]), Some(0.5));
        assert_eq!(flow_jitter(&[0.0, 0.25, 0.5, 0.75]), Some(0.0));
        assert_eq!(flow_jitter(&[0.0, 1.0]), None);
    }

    fn spec() -> FlowSpec {
        FlowSpec {
            src: 0,
            dst: 1,
            start_s: 0.0,
            rate_bps: 8192.0,
            packet_bytes: 1024,
            packets_total: 10,
        }
    }

    #[test]
    fn no_deliveries_gives_zero_pdr_and_absent_delay() {
        let result = SimResult {
            duration_s: 10.0,
            flows: vec![FlowStats {
                sent: 5,
                dropped_unreachable: 5,
                ..Default::default()
            }],
            nodes: vec![NodeStats::default(); 2],
            events: 0,
        };
        let q = derive_metrics(&result, &[spec()], 10.0).unwrap();
        assert_eq!(q.pdr, 0.0);
        assert_eq!(q.loss_ratio, 1.0);
        assert!(q.delay_s.is_none());
        assert!(q.jitter_s.is_none());
        assert!(q.cv_load.is_none());
        assert_eq!(q.throughput_bps, 0.0);
    }

    #[test]
    fn full_delivery() {
        let result = SimResult {
            duration_s: 10.0,
            flows: vec![FlowStats {
                sent: 3,
                delivered: 3,
                delivered_bytes: 3072,
                sum_delay_s: 0.3,
                deliveries_s: vec![1.0, 2.0, 3.0],
                ..Default::default()
            }],
            nodes: vec![
                NodeStats::default(),
                NodeStats {
                    terminated_bytes: 3072,
                    ..Default::default()
                },
            ],
            events: 9,
        };
        let q = derive_metrics(&result, &[spec()], 10.0).unwrap();
        assert_eq!(q.pdr, 1.0);
        assert_eq!(q.jitter_s, Some(0.0));
        assert!((q.delay_s.unwrap() - 0.1).abs() < 1e-15);
        assert!((q.throughput_bps - 3072.0 * 8.0 / 10.0).abs() < 1e-9);
        assert_eq!(q.jain_index, Some(0.5));
        assert_eq!(q.cv_load, Some(1.0));
    }
}
