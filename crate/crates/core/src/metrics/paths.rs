use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;

use crate::topology::{Adjacency, Topology};

/// Hop counts from `source`; `usize::MAX` marks unreachable nodes.
pub fn bfs_hops(adj: &Adjacency, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for v in adj.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

#[derive(PartialEq)]
struct State {
    cost: f64,
    node: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over non-negative per-edge lengths indexed like `topo.edges`.
pub fn dijkstra(adj: &Adjacency, lengths: &[f64], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.adj.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::from([State {
        cost: 0.0,
        node: source,
    }]);
    while let Some(State { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        for &(v, e) in &adj.adj[node] {
            let next = cost + lengths[e];
            if next < dist[v] {
                dist[v] = next;
                heap.push(State {
                    cost: next,
                    node: v,
                });
            }
        }
    }
    dist
}

/// Per-edge length `1 / w` with `w = capacity / cap_bps` clamped to (0, 1].
pub fn inverse_weight_lengths(topo: &Topology, cap_bps: f64) -> Vec<f64> {
    topo.edges
        .iter()
        .map(|e| 1.0 / topo.normalized_weight(e, cap_bps))
        .collect()
}

fn source_efficiency_sum(
    adj: &Adjacency,
    weighted: Option<&[f64]>,
    source: usize,
) -> f64 {
    match weighted {
        None => bfs_hops(adj, source)
            .into_iter()
            .enumerate()
            .filter(|&(v, d)| v != source && d != usize::MAX)
            .map(|(_, d)| 1.0 / d as f64)
            .sum(),
        Some(lengths) => dijkstra(adj, lengths, source)
            .into_iter()
            .enumerate()
            .filter(|&(v, d)| v != source && d.is_finite())
            .map(|(_, d)| 1.0 / d)
            .sum(),
    }
}

/// Mean inverse shortest-path length over ordered pairs; unreachable pairs
/// contribute 0. Weighted lengths use `1 / w` per edge.
pub fn global_efficiency(topo: &Topology, weighted: bool, cap_bps: f64) -> f64 {
    efficiency_impl(topo, weighted, cap_bps, true)
}

/// Single-threaded reference for [`global_efficiency`].
pub fn global_efficiency_sequential(topo: &Topology, weighted: bool, cap_bps: f64) -> f64 {
    efficiency_impl(topo, weighted, cap_bps, false)
}

fn efficiency_impl(topo: &Topology, weighted: bool, cap_bps: f64, parallel: bool) -> f64 {
    let n = topo.n_nodes();
    if n < 2 {
        return 0.0;
    }
    let adj = topo.adjacency();
    let lengths = weighted.then(|| inverse_weight_lengths(topo, cap_bps));
    let lengths = lengths.as_deref();
    // Per-source sums are reduced in node order so the result is schedule independent.
    let per_source: Vec<f64> = if parallel {
        (0..n)
            .into_par_iter()
            .map(|s| source_efficiency_sum(&adj, lengths, s))
            .collect()
    } else {
        (0..n)
            .map(|s| source_efficiency_sum(&adj, lengths, s))
            .collect()
    };
    per_source.iter().sum::<f64>() / (n * (n - 1)) as f64
}
