//! Desk-scale packet simulator: static routing, CBR traffic, per-node queues.

mod engine;
mod flows;
mod qos;
mod routing;

pub use engine::{
    run_simulation, run_simulation_timed, FlowStats, NodeStats, SimConfig, SimResult,
    LIGHT_S_PER_M,
};
pub use flows::{
    generate_flows, FlowSpec, TrafficSpec, DEFAULT_FLOWS, DEFAULT_PACKETS_TOTAL,
    DEFAULT_PACKET_BYTES, DESK_RATE_BPS, START_WINDOW_S, TESTBED_RATE_BPS,
};
pub use qos::{derive_metrics, flow_jitter, QosRecord};
pub use routing::{compute_routes, NextHop, RoutingTable};
