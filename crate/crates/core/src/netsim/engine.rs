//! Event-driven packet simulation over a static topology.
//!
//! Every node owns one drop-tail FIFO shared by all of its outgoing links and
//! a single radio. A transmission over edge `(u, v)` occupies `u` for
//! `bits / capacity(u, v)`; in half-duplex mode it also occupies `v`, so a node
//! cannot send while it receives. Radio time is handed out as reservations in
//! event order. Events are ordered by `(time, sequence number)`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::flows::FlowSpec;
use super::routing::RoutingTable;
use crate::error::{Error, Result};
use crate::topology::Topology;

/// Free-space propagation: seconds per meter at the speed of light.
pub const LIGHT_S_PER_M: f64 = 3.336e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub duration_s: f64,
    pub queue_capacity_pkts: usize,
    pub prop_delay_s_per_m: f64,
    pub seed: u64,
    pub node_half_duplex: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            duration_s: 50.0,
            queue_capacity_pkts: 100,
            prop_delay_s_per_m: LIGHT_S_PER_M,
            seed: 0,
            node_half_duplex: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration_s > 0.0) {
            return Err(Error::invalid("duration_s", "must be positive"));
        }
        if self.queue_capacity_pkts == 0 {
            return Err(Error::invalid("queue_capacity_pkts", "must be at least 1"));
        }
        if !(self.prop_delay_s_per_m >= 0.0) {
            return Err(Error::invalid("prop_delay_s_per_m", "must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FlowStats {
    pub sent: u64,
    pub delivered: u64,
    pub dropped_queue: u64,
    pub dropped_unreachable: u64,
    pub in_flight: u64,
    pub sum_delay_s: f64,
    pub min_delay_s: Option<f64>,
    pub max_delay_s: Option<f64>,
    pub delivered_bytes: u64,
    /// Delivery timestamps in arrival order.
    pub deliveries_s: Vec<f64>,
}

impl FlowStats {
    pub fn conserved(&self) -> bool {
        self.sent == self.delivered + self.dropped_queue + self.dropped_unreachable + self.in_flight
    }

    fn record_delay(&mut self, d: f64) {
        self.sum_delay_s += d;
        self.min_delay_s = Some(self.min_delay_s.map_or(d, |m| m.min(d)));
        self.max_delay_s = Some(self.max_delay_s.map_or(d, |m| m.max(d)));
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NodeStats {
    /// Bytes received as the final destination.
    pub terminated_bytes: u64,
    /// Bytes received for relaying.
    pub forwarded_bytes: u64,
    pub transmissions: u64,
    pub dropped_queue: u64,
}

impl NodeStats {
    pub fn received_bytes(&self) -> u64 {
        self.terminated_bytes + self.forwarded_bytes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub duration_s: f64,
    pub flows: Vec<FlowStats>,
    pub nodes: Vec<NodeStats>,
    pub events: u64,
}

impl SimResult {
    pub fn totals(&self) -> FlowStats {
        let mut t = FlowStats::default();
        for f in &self.flows {
            t.sent += f.sent;
            t.delivered += f.delivered;
            t.dropped_queue += f.dropped_queue;
            t.dropped_unreachable += f.dropped_unreachable;
            t.in_flight += f.in_flight;
            t.sum_delay_s += f.sum_delay_s;
            t.delivered_bytes += f.delivered_bytes;
        }
        t
    }

    pub fn node_loads(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.received_bytes() as f64).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Packet {
    flow: u32,
    created: f64,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Emit { flow: u32, index: u64 },
    TxDone { node: u32 },
    Arrive { packet: Packet, node: u32 },
}

struct Event {
    time: f64,
    seq: u64,
    kind: Kind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl Ord for Event {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Radio {
    queue: VecDeque<Packet>,
    /// Packet in service and its next hop.
    sending: Option<(Packet, u32, u32)>,
    free_at: f64,
}

struct Engine<'a> {
    topo: &'a Topology,
    flows: &'a [FlowSpec],
    routes: &'a RoutingTable,
    cfg: SimConfig,
    heap: BinaryHeap<Event>,
    seq: u64,
    radios: Vec<Radio>,
    flow_stats: Vec<FlowStats>,
    node_stats: Vec<NodeStats>,
    scheduled: Vec<u64>,
    events: u64,
}

impl<'a> Engine<'a> {
    fn push(&mut self, time: f64, kind: Kind) {
        self.heap.push(Event {
            time,
            seq: self.seq,
            kind,
        });
        self.seq += 1;
    }

    fn enqueue(&mut self, node: usize, packet: Packet, now: f64) {
        let radio = &mut self.radios[node];
        if radio.queue.len() >= self.cfg.queue_capacity_pkts {
            self.flow_stats[packet.flow as usize].dropped_queue += 1;
            self.node_stats[node].dropped_queue += 1;
            return;
        }
        radio.queue.push_back(packet);
        self.try_start(node, now);
    }

    fn try_start(&mut self, node: usize, now: f64) {
        if self.radios[node].sending.is_some() {
            return;
        }
        let Some(packet) = self.radios[node].queue.pop_front() else {
            return;
        };
        let dst = self.flows[packet.flow as usize].dst;
        let hop = self
            .routes
            .next_hop(node, dst)
            .expect("queued packet must have a route");
        let edge = &self.topo.edges[hop.edge];
        let service = self.flows[packet.flow as usize].packet_bits() / edge.capacity_bps;
        let mut start = now.max(self.radios[node].free_at);
        if self.cfg.node_half_duplex {
            start = start.max(self.radios[hop.node].free_at);
        }
        let end = start + service;
        self.radios[node].free_at = end;
        if self.cfg.node_half_duplex {
            self.radios[hop.node].free_at = end;
        }
        self.radios[node].sending = Some((packet, hop.node as u32, hop.edge as u32));
        self.node_stats[node].transmissions += 1;
        self.push(end, Kind::TxDone { node: node as u32 });
    }

    fn run(mut self) -> SimResult {
        let duration = self.cfg.duration_s;
        for (k, f) in self.flows.iter().enumerate() {
            let scheduled = self.scheduled[k];
            if !self.routes.is_reachable(f.src, f.dst) {
                self.flow_stats[k].sent = scheduled;
                self.flow_stats[k].dropped_unreachable = scheduled;
            } else if scheduled > 0 {
                self.push(
                    f.start_s,
                    Kind::Emit {
                        flow: k as u32,
                        index: 0,
                    },
                );
            }
        }

        while let Some(ev) = self.heap.peek() {
            if ev.time > duration {
                break;
            }
            let Event { time: now, kind, .. } = self.heap.pop().unwrap();
            self.events += 1;
            match kind {
                Kind::Emit { flow, index } => {
                    let f = self.flows[flow as usize];
                    self.flow_stats[flow as usize].sent += 1;
                    if index + 1 < self.scheduled[flow as usize] {
                        let next = f.start_s + (index + 1) as f64 * f.interval_s();
                        self.push(
                            next,
                            Kind::Emit {
                                flow,
                                index: index + 1,
                            },
                        );
                    }
                    self.enqueue(f.src, Packet { flow, created: now }, now);
                }
                Kind::TxDone { node } => {
                    let node = node as usize;
                    let (packet, next, edge) = self.radios[node]
                        .sending
                        .take()
                        .expect("TxDone without a packet in service");
                    let prop = self.topo.edges[edge as usize].distance_m * self.cfg.prop_delay_s_per_m;
                    self.push(now + prop, Kind::Arrive { packet, node: next });
                    self.try_start(node, now);
                }
                Kind::Arrive { packet, node } => {
                    let node = node as usize;
                    let f = &self.flows[packet.flow as usize];
                    let bytes = f.packet_bytes as u64;
                    if node == f.dst {
                        self.node_stats[node].terminated_bytes += bytes;
                        let stats = &mut self.flow_stats[packet.flow as usize];
                        stats.delivered += 1;
                        stats.delivered_bytes += bytes;
                        stats.deliveries_s.push(now);
                        stats.record_delay(now - packet.created);
                    } else {
                        self.node_stats[node].forwarded_bytes += bytes;
                        self.enqueue(node, packet, now);
                    }
                }
            }
        }

        // Whatever is still queued, on the air or propagating stays undelivered.
        for radio in &self.radios {
            for p in &radio.queue {
                self.flow_stats[p.flow as usize].in_flight += 1;
            }
            if let Some((p, _, _)) = radio.sending {
                self.flow_stats[p.flow as usize].in_flight += 1;
            }
        }
        for ev in self.heap.iter() {
            if let Kind::Arrive { packet, .. } = ev.kind {
                self.flow_stats[packet.flow as usize].in_flight += 1;
            }
        }

        SimResult {
            duration_s: duration,
            flows: self.flow_stats,
            nodes: self.node_stats,
            events: self.events,
        }
    }
}

/// Simulate `flows` over `topo` for `config.duration_s` seconds.
pub fn run_simulation(
    topo: &Topology,
    flows: &[FlowSpec],
    routes: &RoutingTable,
    config: &SimConfig,
) -> Result<SimResult> {
    config.validate()?;
    let n = topo.n_nodes();
    if routes.n_nodes() != n {
        return Err(Error::invalid(
            "routes",
            format!("routing table covers {} nodes, topology has {n}", routes.n_nodes()),
        ));
    }
    for (k, f) in flows.iter().enumerate() {
        for node in [f.src, f.dst] {
            if node >= n {
                return Err(Error::MissingNode { flow: k, node });
            }
        }
        f.validate()?;
    }
    let engine = Engine {
        topo,
        flows,
        routes,
        cfg: *config,
        heap: BinaryHeap::new(),
        seq: 0,
        radios: (0..n)
            .map(|_| Radio {
                queue: VecDeque::new(),
                sending: None,
                free_at: 0.0,
            })
            .collect(),
        flow_stats: vec![FlowStats::default(); flows.len()],
        node_stats: vec![NodeStats::default(); n],
        scheduled: flows
            .iter()
            .map(|f| f.scheduled_packets(config.duration_s))
            .collect(),
        events: 0,
    };
    Ok(engine.run())
}

/// [`run_simulation`] plus its wall-clock duration.
pub fn run_simulation_timed(
    topo: &Topology,
    flows: &[FlowSpec],
    routes: &RoutingTable,
    config: &SimConfig,
) -> Result<(SimResult, Duration)> {
    let started = Instant::now();
    let result = run_simulation(topo, flows, routes, config)?;
    Ok((result, started.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::{generate_points, FractalConfig};
    use crate::netsim::flows::{generate_flows, TrafficSpec};
    use crate::netsim::routing::compute_routes;
    use crate::topology::{build_radius_graph, place_points, CapacityModel, TopologyMeta};

    /// Nodes on a line `spacing_m` apart, consecutive ones linked at `capacity_bps`.
    fn line(n: usize, spacing_m: f64, capacity_bps: f64) -> Topology {
        let positions = (0..n).map(|k| [k as f64 * spacing_m, 0.0]).collect();
        let mut t = Topology::from_pairs(
            500.0,
            positions,
            (1..n).map(|k| (k - 1, k)),
            &CapacityModel::default(),
            TopologyMeta::default(),
        )
        .unwrap();
        for e in &mut t.edges {
            e.capacity_bps = capacity_bps;
        }
        t
    }

    fn cbr(src: usize, dst: usize, start_s: f64, rate_bps: f64) -> FlowSpec {
        FlowSpec {
            src,
            dst,
            start_s,
            rate_bps,
            packet_bytes: 1024,
            packets_total: 100_000,
        }
    }

    fn run(topo: &Topology, flows: &[FlowSpec], cfg: &SimConfig) -> SimResult {
        run_simulation(topo, flows, &compute_routes(topo), cfg).unwrap()
    }

    fn sweep_scenario(d: f64) -> (Topology, Vec<FlowSpec>) {
        let pts = generate_points(&FractalConfig::new(85, d).unwrap()).unwrap();
        let pos = place_points(&pts, 500.0).unwrap();
        let topo = build_radius_graph(&pos, 500.0, 250.0, &CapacityModel::default()).unwrap();
        let flows = generate_flows(85, &TrafficSpec::default(), 7).unwrap();
        (topo, flows)
    }

    #[test]
    fn single_link_delay_is_exact() {
        let topo = line(2, 10.0, 100e6);
        let flows = [cbr(0, 1, 0.25, 50e6)];
        let cfg = SimConfig {
            duration_s: 1.0,
            ..Default::default()
        };
        let r = run(&topo, &flows, &cfg);
        let f = &r.flows[0];
        let expected = 8192.0 / 100e6 + 10.0 * LIGHT_S_PER_M;
        assert_eq!(f.sent, flows[0].scheduled_packets(1.0));
        assert_eq!(f.dropped_queue, 0);
        assert_eq!(f.delivered + f.in_flight, f.sent);
        assert!(f.in_flight <= 1);
        assert!((f.min_delay_s.unwrap() - expected).abs() < 1e-9);
        assert!((f.max_delay_s.unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn multi_hop_delay_is_sum_of_hops() {
        let topo = line(4, 40.0, 100e6);
        let flows = [cbr(0, 3, 0.0, 10e6)];
        let cfg = SimConfig {
            duration_s: 2.0,
            ..Default::default()
        };
        let r = run(&topo, &flows, &cfg);
        let f = &r.flows[0];
        let expected = 3.0 * (8192.0 / 100e6 + 40.0 * LIGHT_S_PER_M);
        assert_eq!(f.dropped_queue, 0);
        assert!(f.delivered > 0);
        assert!((f.min_delay_s.unwrap() - expected).abs() < 1e-9);
        assert!((f.max_delay_s.unwrap() - expected).abs() < 1e-9);
        assert_eq!(r.nodes[1].forwarded_bytes, r.nodes[2].forwarded_bytes);
        assert_eq!(r.nodes[3].terminated_bytes, f.delivered_bytes);
    }

    #[test]
    fn two_senders_saturating_one_receiver_split_delivery() {
        // 0 and 2 each offer C towards 1; the receiver radio serves one at a time.
        let positions = vec![[0.0, 0.0], [10.0, 0.0], [20.0, 0.0]];
        let mut topo = Topology::from_pairs(
            500.0,
            positions,
            [(0, 1), (1, 2)],
            &CapacityModel::default(),
            TopologyMeta::default(),
        )
        .unwrap();
        let c = 10e6;
        for e in &mut topo.edges {
            e.capacity_bps = c;
        }
        let flows = [cbr(0, 1, 0.0, c), cbr(2, 1, 0.0003, c)];
        let cfg = SimConfig {
            duration_s: 20.0,
            ..Default::default()
        };
        let r = run(&topo, &flows, &cfg);
        for f in &r.flows {
            let pdr = f.delivered as f64 / f.sent as f64;
            assert!((pdr - 0.5).abs() <= 0.05, "pdr {pdr}");
            assert!(f.conserved());
        }
        let goodput = r.totals().delivered_bytes as f64 * 8.0 / cfg.duration_s;
        assert!((goodput - c).abs() / c < 0.01, "goodput {goodput}");
    }

    #[test]
    fn unreachable_flow_counts_every_scheduled_packet_as_lost() {
        let topo = Topology::from_pairs(
            500.0,
            vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]],
            [(0, 1)],
            &CapacityModel::default(),
            TopologyMeta::default(),
        )
        .unwrap();
        let flows = [cbr(0, 2, 1.0, 8192.0)];
        let cfg = SimConfig {
            duration_s: 10.0,
            ..Default::default()
        };
        let r = run(&topo, &flows, &cfg);
        assert_eq!(r.flows[0].sent, 9);
        assert_eq!(r.flows[0].dropped_unreachable, 9);
        assert_eq!(r.flows[0].delivered, 0);
    }

    #[test]
    fn missing_node_is_rejected() {
        let topo = line(2, 10.0, 1e6);
        let err = run_simulation(&topo, &[cbr(0, 5, 0.0, 1e3)], &compute_routes(&topo), &SimConfig::default());
        assert!(matches!(err, Err(Error::MissingNode { flow: 0, node: 5 })));
    }

    #[test]
    fn conservation_determinism_and_load_accounting() {
        for d in [1.0, 2.0, 6.5] {
            let (topo, flows) = sweep_scenario(d);
            let cfg = SimConfig::default();
            let a = run(&topo, &flows, &cfg);
            let b = run(&topo, &flows, &cfg);
            assert_eq!(a, b);
            assert!(a.flows.iter().all(FlowStats::conserved));
            let terminated: u64 = a.nodes.iter().map(|n| n.terminated_bytes).sum();
            assert_eq!(terminated, a.totals().delivered_bytes);
            for f in &a.flows {
                assert!(f.delivered <= f.sent);
                assert!(f.deliveries_s.iter().all(|&t| (0.0..=cfg.duration_s).contains(&t)));
                assert!(f.deliveries_s.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    #[test]
    fn deliveries_respect_route_lower_bound() {
        let (topo, flows) = sweep_scenario(6.5);
        let routes = compute_routes(&topo);
        let cfg = SimConfig::default();
        let r = run_simulation(&topo, &flows, &routes, &cfg).unwrap();
        for (spec, f) in flows.iter().zip(&r.flows) {
            let Some(path) = routes.path(spec.src, spec.dst) else {
                continue;
            };
            let bound: f64 = path
                .windows(2)
                .map(|w| {
                    let hop = routes.next_hop(w[0], spec.dst).unwrap();
                    let e = &topo.edges[hop.edge];
                    spec.packet_bits() / e.capacity_bps + e.distance_m * cfg.prop_delay_s_per_m
                })
                .sum();
            if let Some(min) = f.min_delay_s {
                assert!(min >= bound - 1e-12, "{min} < {bound}");
            }
            if let Some(&first) = f.deliveries_s.first() {
                assert!(first >= spec.start_s + bound - 1e-12);
            }
        }
    }

    #[test]
    fn larger_queue_never_lowers_delivery_behind_one_bottleneck() {
        // Several senders share the radio of node 1; everything beyond it is uncontended.
        let positions = vec![[0.0, 0.0], [10.0, 0.0], [20.0, 0.0], [10.0, 10.0], [10.0, -10.0], [30.0, 0.0]];
        let mut topo = Topology::from_pairs(
            500.0,
            positions,
            [(0, 1), (1, 2), (1, 3), (1, 4), (2, 5)],
            &CapacityModel::default(),
            TopologyMeta::default(),
        )
        .unwrap();
        for e in &mut topo.edges {
            e.capacity_bps = 10e6;
        }
        let flows = [
            cbr(0, 1, 0.0, 4e6),
            cbr(3, 1, 0.0001, 5e6),
            cbr(4, 1, 0.00037, 6e6),
            cbr(0, 1, 0.5, 2e6),
        ];
        let mut last = 0.0;
        for q in [1, 2, 5, 20, 100, 400] {
            let cfg = SimConfig {
                queue_capacity_pkts: q,
                duration_s: 10.0,
                ..Default::default()
            };
            let t = run(&topo, &flows, &cfg).totals();
            let pdr = t.delivered as f64 / t.sent as f64;
            assert!(pdr >= last, "queue {q}: {pdr} < {last}");
            last = pdr;
        }
    }

    #[test]
    fn rejects_bad_config() {
        let topo = line(2, 10.0, 1e6);
        let routes = compute_routes(&topo);
        for cfg in [
            SimConfig {
                duration_s: 0.0,
                ..Default::default()
            },
            SimConfig {
                queue_capacity_pkts: 0,
                ..Default::default()
            },
        ] {
            assert!(run_simulation(&topo, &[], &routes, &cfg).is_err());
        }
    }
}
