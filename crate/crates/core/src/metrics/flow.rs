//! Unit-capacity max-flow for edge-disjoint path counts.
//!
//! Each undirected edge becomes a pair of opposing arcs that are each other's
//! residual, so a flow of one in either direction saturates the edge.

use std::collections::VecDeque;

use crate::topology::{Adjacency, Topology};

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    cap: u32,
    rev: usize,
}

/// Dinic's algorithm over an undirected multigraph.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    graph: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        Self {
            graph: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    pub fn from_topology(topo: &Topology) -> Self {
        let mut net = Self::new(topo.n_nodes());
        for e in &topo.edges {
            net.add_undirected(e.i, e.j, 1);
        }
        net
    }

    pub fn add_undirected(&mut self, u: usize, v: usize, cap: u32) {
        let ru = self.graph[v].len();
        let rv = self.graph[u].len();
        self.graph[u].push(Arc { to: v, cap, rev: ru });
        self.graph[v].push(Arc { to: u, cap, rev: rv });
    }

    fn bfs(&mut self, s: usize) {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for a in &self.graph[u] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: u32) -> u32 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.graph[u].len() {
            let a = self.graph[u][self.iter[u]];
            if a.cap > 0 && self.level[u] < self.level[a.to] {
                let d = self.dfs(a.to, t, pushed.min(a.cap));
                if d > 0 {
                    self.graph[u][self.iter[u]].cap -= d;
                    self.graph[a.to][a.rev].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    /// Maximum flow from `s` to `t`; consumes residual capacity.
    pub fn max_flow(&mut self, s: usize, t: usize) -> u32 {
        if s == t {
            return 0;
        }
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, u32::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Nodes reachable from `s` in the residual graph (source side of a min cut).
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for a in &self.graph[u] {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    queue.push_back(a.to);
                }
            }
        }
        seen
    }
}

/// Number of edge-disjoint paths between `u` and `v`.
pub fn edge_disjoint_paths(topo: &Topology, u: usize, v: usize) -> u32 {
    FlowNetwork::from_topology(topo).max_flow(u, v)
}

/// Gomory–Hu equivalent-flow tree (Gusfield): `parent[i]` and the min-cut
/// value `weight[i]` of the tree edge `(i, parent[i])`. Node 0 is the root.
pub fn equivalent_flow_tree(topo: &Topology) -> (Vec<usize>, Vec<u32>) {
    let n = topo.n_nodes();
    let base = FlowNetwork::from_topology(topo);
    let mut parent = vec![0usize; n];
    let mut weight = vec![0u32; n];
    for s in 1..n {
        let t = parent[s];
        let mut net = base.clone();
        weight[s] = net.max_flow(s, t);
        let side = net.source_side(s);
        for i in s + 1..n {
            if side[i] && parent[i] == t {
                parent[i] = s;
            }
        }
    }
    (parent, weight)
}

/// All-pairs edge connectivity as a dense matrix.
pub fn all_pairs_edp(topo: &Topology) -> Vec<Vec<u32>> {
    let n = topo.n_nodes();
    let (parent, weight) = equivalent_flow_tree(topo);
    let mut tree: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for i in 1..n {
        tree[i].push((parent[i], weight[i]));
        tree[parent[i]].push((i, weight[i]));
    }
    let mut out = vec![vec![0u32; n]; n];
    for src in 0..n {
        // Minimum edge weight along the tree path from src.
        let mut best = vec![u32::MAX; n];
        let mut stack = vec![src];
        let mut seen = vec![false; n];
        seen[src] = true;
        while let Some(u) = stack.pop() {
            for &(v, w) in &tree[u] {
                if !seen[v] {
                    seen[v] = true;
                    best[v] = best[u].min(w);
                    stack.push(v);
                }
            }
        }
        for v in 0..n {
            if v != src {
                out[src][v] = best[v];
            }
        }
    }
    out
}

/// Mean edge connectivity over unordered pairs; disconnected pairs count 0.
pub fn avg_edge_disjoint_paths(topo: &Topology) -> f64 {
    let n = topo.n_nodes();
    if n < 2 {
        return 0.0;
    }
    let table = all_pairs_edp(topo);
    let mut total = 0u64;
    for (u, row) in table.iter().enumerate() {
        for &value in &row[u + 1..] {
            total += value as u64;
        }
    }
    total as f64 / (n * (n - 1) / 2) as f64
}

/// Pairwise reference for [`avg_edge_disjoint_paths`]: one max-flow per pair.
pub fn avg_edge_disjoint_paths_pairwise(topo: &Topology) -> f64 {
    let n = topo.n_nodes();
    if n < 2 {
        return 0.0;
    }
    let base = FlowNetwork::from_topology(topo);
    let mut total = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            total += base.clone().max_flow(u, v) as u64;
        }
    }
    total as f64 / (n * (n - 1) / 2) as f64
}

/// Menger bound: `edp(u, v) <= min(deg u, deg v)`.
pub fn menger_bound_holds(topo: &Topology, table: &[Vec<u32>], adj: &Adjacency) -> bool {
    let n = topo.n_nodes();
    (0..n).all(|u| {
        (0..n)
            .filter(|&v| v != u)
            .all(|v| table[u][v] as usize <= adj.degree(u).min(adj.degree(v)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::test_graphs::{complete, cycle, from_pairs, path, random_graph};

    #[test]
    fn closed_forms() {
        assert_eq!(edge_disjoint_paths(&complete(4), 0, 3), 3);
        assert!((avg_edge_disjoint_paths(&complete(4)) - 3.0).abs() < 1e-12);
        assert!((avg_edge_disjoint_paths(&cycle(5)) - 2.0).abs() < 1e-12);
        assert!((avg_edge_disjoint_paths(&path(4)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disconnected_pairs_count_zero() {
        // two K2 components: pairs (0,1) and (2,3) have 1, four cross pairs 0.
        let t = from_pairs(4, &[(0, 1), (2, 3)]);
        assert!((avg_edge_disjoint_paths(&t) - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn flow_tree_matches_pairwise_maxflow() {
        for seed in 0..60 {
            let t = random_graph(12, 0.3, seed);
            let table = all_pairs_edp(&t);
            for u in 0..12 {
                for v in 0..12 {
                    if u != v {
                        assert_eq!(table[u][v], edge_disjoint_paths(&t, u, v), "seed {seed}");
                    }
                }
            }
            assert!(menger_bound_holds(&t, &table, &t.adjacency()));
            let a = avg_edge_disjoint_paths(&t);
            let b = avg_edge_disjoint_paths_pairwise(&t);
            assert!((a - b).abs() < 1e-12);
        }
    }
}
