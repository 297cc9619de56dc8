use serde::{Deserialize, Serialize};

use crate::metrics::bfs_hops;
use crate::topology::Topology;

/// One forwarding entry: the neighbor to hand the packet to and the edge used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NextHop {
    pub node: usize,
    pub edge: usize,
    /// Remaining hop count from the current node to the destination.
    pub hops: usize,
}

/// Static hop-count routes; `None` marks an unreachable destination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingTable {
    n: usize,
    entries: Vec<Option<NextHop>>,
}

impl RoutingTable {
    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn next_hop(&self, node: usize, dst: usize) -> Option<NextHop> {
        self.entries[node * self.n + dst]
    }

    pub fn is_reachable(&self, src: usize, dst: usize) -> bool {
        src == dst || self.next_hop(src, dst).is_some()
    }

    /// Full node sequence from `src` to `dst`, both included.
    pub fn path(&self, src: usize, dst: usize) -> Option<Vec<usize>> {
        let mut path = vec![src];
        let mut at = src;
        while at != dst {
            at = self.next_hop(at, dst)?.node;
            path.push(at);
        }
        Some(path)
    }
}

/// Shortest paths by hop count; among equal-length choices the smallest
/// next-hop id wins.
pub fn compute_routes(topo: &Topology) -> RoutingTable {
    let n = topo.n_nodes();
    let adj = topo.adjacency();
    let mut entries = vec![None; n * n];
    for dst in 0..n {
        let dist = bfs_hops(&adj, dst);
        for u in 0..n {
            if u == dst || dist[u] == usize::MAX {
                continue;
            }
            // adjacency lists are sorted by neighbor id
            entries[u * n + dst] = adj.adj[u]
                .iter()
                .find(|&&(v, _)| dist[v] + 1 == dist[u])
                .map(|&(v, e)| NextHop {
                    node: v,
                    edge: e,
                    hops: dist[u],
                });
        }
    }
    RoutingTable { n, entries }
}
