//! Structural and fairness metrics over a [`Topology`].

mod conductance;
mod correlation;
mod fairness;
mod flow;
mod paths;
mod spectral;

pub use conductance::{conductance_bruteforce, CONDUCTANCE_MAX_NODES};
pub use correlation::{correlation_matrix, pearson};
pub use fairness::{coefficient_of_variation, jains_index, LoadVector};
pub use flow::{
    all_pairs_edp, avg_edge_disjoint_paths, avg_edge_disjoint_paths_pairwise,
    edge_disjoint_paths, equivalent_flow_tree, menger_bound_holds, FlowNetwork,
};
pub use paths::{
    bfs_hops, dijkstra, global_efficiency, global_efficiency_sequential, inverse_weight_lengths,
};
pub use spectral::{
    algebraic_connectivity, laplacian, normalized_laplacian, sorted_eigenvalues, EIGEN_TOL,
};

use serde::{Deserialize, Serialize};

use crate::topology::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub efficiency_unweighted: f64,
    pub efficiency_weighted: f64,
    pub lambda2_unweighted: f64,
    pub lambda2_weighted: f64,
    pub avg_edp: f64,
    pub n_nodes: usize,
    pub n_edges: usize,
}

/// All structural metrics; weights are capacities normalized by `cap_bps`.
pub fn metric_report(topo: &Topology, cap_bps: f64, normalized_laplacian: bool) -> MetricReport {
    MetricReport {
        efficiency_unweighted: global_efficiency(topo, false, cap_bps),
        efficiency_weighted: global_efficiency(topo, true, cap_bps),
        lambda2_unweighted: algebraic_connectivity(topo, false, normalized_laplacian, cap_bps),
        lambda2_weighted: algebraic_connectivity(topo, true, normalized_laplacian, cap_bps),
        avg_edp: avg_edge_disjoint_paths(topo),
        n_nodes: topo.n_nodes(),
        n_edges: topo.n_edges(),
    }
}
