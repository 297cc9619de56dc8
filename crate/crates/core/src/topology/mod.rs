//! Node placement, radius graphs and the distance-to-capacity link model.

mod baselines;

pub use baselines::{
    gen_ba, gen_er, gen_grid, gen_tree, gen_ws, BaParams, ErParams, TreeParams, WsParams,
    DEFAULT_RETRY_CAP,
};

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fractal::PointSet;

/// Deployment side length used throughout the experiments, in meters.
pub const DEFAULT_AREA_M: f64 = 500.0;
/// Connectivity radius, in meters.
pub const DEFAULT_RADIUS_M: f64 = 250.0;

/// Log-distance path loss feeding a Shannon-capacity link rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CapacityModel {
    pub path_loss_exponent: f64,
    /// Loss at the 1 m reference distance.
    pub ref_loss_db: f64,
    pub tx_power_dbm: f64,
    pub noise_floor_dbm: f64,
    pub bandwidth_hz: f64,
    pub capacity_cap_bps: f64,
    pub capacity_floor_bps: f64,
}

impl Default for CapacityModel {
    fn default() -> Self {
        Self {
            path_loss_exponent: 3.0,
            ref_loss_db: 46.7,
            tx_power_dbm: 16.0,
            noise_floor_dbm: -94.0,
            bandwidth_hz: 20e6,
            capacity_cap_bps: 100e6,
            capacity_floor_bps: 1e3,
        }
    }
}

impl CapacityModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.path_loss_exponent > 0.0) {
            return Err(Error::invalid("path_loss_exponent", "must be positive"));
        }
        if !(self.bandwidth_hz > 0.0) {
            return Err(Error::invalid("bandwidth_hz", "must be positive"));
        }
        if !(self.capacity_cap_bps > 0.0) {
            return Err(Error::invalid("capacity_cap_bps", "must be positive"));
        }
        if !(self.capacity_floor_bps > 0.0 && self.capacity_floor_bps <= self.capacity_cap_bps) {
            return Err(Error::invalid(
                "capacity_floor_bps",
                "must be positive and not exceed the cap",
            ));
        }
        Ok(())
    }

    pub fn snr_db(&self, distance_m: f64) -> f64 {
        let path_loss_db = self.ref_loss_db + 10.0 * self.path_loss_exponent * distance_m.log10();
        self.tx_power_dbm - path_loss_db - self.noise_floor_dbm
    }

    /// Distance at which the link rate reaches the cap.
    pub fn cap_distance_m(&self) -> f64 {
        let snr_lin = (self.capacity_cap_bps / self.bandwidth_hz).exp2() - 1.0;
        let snr_db = 10.0 * snr_lin.log10();
        let loss = self.tx_power_dbm - self.noise_floor_dbm - snr_db;
        10f64.powf((loss - self.ref_loss_db) / (10.0 * self.path_loss_exponent))
    }
}

/// Link rate in bits per second for a link of the given length.
pub fn link_capacity(distance_m: f64, model: &CapacityModel) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::invalid(
            "distance_m",
            format!("link distance must be positive, got {distance_m}"),
        ));
    }
    let snr_lin = 10f64.powf(model.snr_db(distance_m) / 10.0);
    let shannon = model.bandwidth_hz * (1.0 + snr_lin).log2();
    Ok(shannon
        .min(model.capacity_cap_bps)
        .max(model.capacity_floor_bps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "EdgeRepr", into = "EdgeRepr")]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub distance_m: f64,
    pub capacity_bps: f64,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr(usize, usize, f64, f64);

impl From<EdgeRepr> for Edge {
    fn from(EdgeRepr(i, j, distance_m, capacity_bps): EdgeRepr) -> Self {
        Edge {
            i,
            j,
            distance_m,
            capacity_bps,
        }
    }
}

impl From<Edge> for EdgeRepr {
    fn from(e: Edge) -> Self {
        EdgeRepr(e.i, e.j, e.distance_m, e.capacity_bps)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TopologyMeta {
    pub generator: String,
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
}

/// Node positions plus an undirected, capacity-annotated edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub area_m: f64,
    pub positions: Vec<[f64; 2]>,
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub meta: TopologyMeta,
}

/// Neighbor lists of an undirected topology; `adj[u]` holds `(v, edge index)`.
#[derive(Debug, Clone)]
pub struct Adjacency {
    pub adj: Vec<Vec<(usize, usize)>>,
}

impl Adjacency {
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().map(|&(v, _)| v)
    }
}

impl Topology {
    /// Build from positions and an index-pair list, deriving distance and capacity.
    /// Pairs are normalized to `i < j`, deduplicated and sorted.
    pub fn from_pairs(
        area_m: f64,
        positions: Vec<[f64; 2]>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        model: &CapacityModel,
        meta: TopologyMeta,
    ) -> Result<Self> {
        let n = positions.len();
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::invalid("edges", format!("self-loop at node {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({a}, {b}) out of range for {n} nodes"),
                ));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut edges = Vec::with_capacity(norm.len());
        for (i, j) in norm {
            let distance_m = distance(positions[i], positions[j]);
            edges.push(Edge {
                i,
                j,
                distance_m,
                capacity_bps: link_capacity(distance_m.max(1.0), model)?,
            });
        }
        Ok(Self {
            area_m,
            positions,
            edges,
            meta,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.positions.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn adjacency(&self) -> Adjacency {
        let mut adj = vec![Vec::new(); self.n_nodes()];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.i].push((e.j, k));
            adj[e.j].push((e.i, k));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Adjacency { adj }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes()];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    pub fn mean_degree(&self) -> f64 {
        if self.n_nodes() == 0 {
            return 0.0;
        }
        2.0 * self.n_edges() as f64 / self.n_nodes() as f64
    }

    /// Edge weight `capacity / cap`, in (0, 1].
    pub fn normalized_weight(&self, edge: &Edge, cap_bps: f64) -> f64 {
        (edge.capacity_bps / cap_bps).min(1.0)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_nodes();
        if n <= 1 {
            return true;
        }
        component_sizes(&self.adjacency())[0] == n
    }

    /// Check the structural invariants: no self-loops, no duplicates, `i < j`,
    /// positive capacities, indices in range.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_nodes();
        let mut seen = std::collections::HashSet::new();
        for e in &self.edges {
            if e.i >= e.j || e.j >= n {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({}, {}) must satisfy i < j < {n}", e.i, e.j),
                ));
            }
            if !seen.insert((e.i, e.j)) {
                return Err(Error::invalid(
                    "edges",
                    format!("duplicate edge ({}, {})", e.i, e.j),
                ));
            }
            if !(e.capacity_bps > 0.0) {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({}, {}) has non-positive capacity", e.i, e.j),
                ));
            }
        }
        Ok(())
    }
}

/// A purely combinatorial graph: nodes on a unit circle, every edge at the
/// default capacity cap (normalized weight 1).
pub fn abstract_graph(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Topology {
    let positions = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n.max(1) as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    let cap = CapacityModel::default().capacity_cap_bps;
    let mut edges: Vec<Edge> = pairs
        .into_iter()
        .filter(|&(a, b)| a != b)
        .map(|(a, b)| Edge {
            i: a.min(b),
            j: a.max(b),
            distance_m: 1.0,
            capacity_bps: cap,
        })
        .collect();
    edges.sort_by_key(|e| (e.i, e.j));
    edges.dedup_by_key(|e| (e.i, e.j));
    Topology {
        area_m: 2.0,
        positions,
        edges,
        meta: TopologyMeta {
            generator: "abstract".into(),
            ..Default::default()
        },
    }
}

/// Sizes of connected components, largest first.
pub fn component_sizes(adj: &Adjacency) -> Vec<usize> {
    let n = adj.adj.len();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for v in adj.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Map a point cloud into `[0, area_m]^2`: center its bounding box on the area
/// center and scale uniformly so the longer side spans the full area.
pub fn place_points(points: &PointSet, area_m: f64) -> Result<Vec<[f64; 2]>> {
    place_coords(&points.points, area_m)
}

pub fn place_coords(points: &[[f64; 2]], area_m: f64) -> Result<Vec<[f64; 2]>> {
    if points.is_empty() {
        return Err(Error::invalid("points", "cannot place an empty point set"));
    }
    if !(area_m > 0.0) {
        return Err(Error::invalid("area_m", "must be positive"));
    }
    let (lo, hi) = bounding_box(points);
    let cx = 0.5 * (lo[0] + hi[0]);
    let cy = 0.5 * (lo[1] + hi[1]);
    let side = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let center = 0.5 * area_m;
    if side <= 0.0 {
        return Ok(vec![[center, center]; points.len()]);
    }
    let scale = area_m / side;
    Ok(points
        .iter()
        .map(|p| [center + (p[0] - cx) * scale, center + (p[1] - cy) * scale])
        .collect())
}

pub(crate) fn bounding_box(points: &[[f64; 2]]) -> ([f64; 2], [f64; 2]) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

/// Connect every pair within `radius_m` (inclusive).
pub fn build_radius_graph(
    positions: &[[f64; 2]],
    area_m: f64,
    radius_m: f64,
    model: &CapacityModel,
) -> Result<Topology> {
    if positions.len() < 2 {
        return Err(Error::invalid("positions", "need at least two nodes"));
    }
    if !(radius_m > 0.0) {
        return Err(Error::invalid("radius_m", "must be positive"));
    }
    model.validate()?;
    let n = positions.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if distance(positions[i], positions[j]) <= radius_m {
                pairs.push((i, j));
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("radius_m".to_string(), radius_m.into());
    Topology::from_pairs(
        area_m,
        positions.to_vec(),
        pairs,
        model,
        TopologyMeta {
            generator: "radius".into(),
            seed: 0,
            params,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(points: Vec<[f64; 2]>) -> PointSet {
        PointSet {
            d_frac: 2.0,
            n: points.len(),
            points,
        }
    }

    #[test]
    fn place_unit_square() {
        let p = place_points(&ps(vec![[0.0, 0.0], [1.0, 1.0], [0.5, 0.25]]), 500.0).unwrap();
        assert_eq!(p[0], [0.0, 0.0]);
        assert_eq!(p[1], [500.0, 500.0]);
        assert_eq!(p[2], [250.0, 125.0]);
    }

    #[test]
    fn place_single_point_and_coincident() {
        assert_eq!(
            place_points(&ps(vec![[3.0, -1.0]]), 500.0).unwrap(),
            vec![[250.0, 250.0]]
        );
        assert_eq!(
            place_points(&ps(vec![[1.0, 1.0], [1.0, 1.0]]), 500.0).unwrap(),
            vec![[250.0, 250.0]; 2]
        );
        assert!(place_points(&ps(vec![]), 500.0).is_err());
    }

    #[test]
    fn place_wide_box() {
        let p = place_points(&ps(vec![[0.0, 0.0], [2.0, 1.0]]), 500.0).unwrap();
        // scale 250, y extent 250 centered at 250
        assert_eq!(p[0], [0.0, 125.0]);
        assert_eq!(p[1], [500.0, 375.0]);
    }

    #[test]
    fn capacity_at_zero_snr_equals_bandwidth() {
        let m = CapacityModel::default();
        // snr_db = 0  <=>  10*3*log10(d) = 16 + 94 - 46.7
        let d = 10f64.powf(63.3 / 30.0);
        let c = link_capacity(d, &m).unwrap();
        assert!((c - m.bandwidth_hz).abs() < 1e-3, "{c}");
    }

    #[test]
    fn capacity_at_250m_matches_formula_chain() {
        // path loss = 46.7 + 30*log10(250) = 118.638200 dB
        // snr = 16 - 118.638200 + 94 = -8.638200 dB
        // 20e6 * log2(1 + 10^(snr/10)) = 3_700_319.815 bps
        let c = link_capacity(250.0, &CapacityModel::default()).unwrap();
        let pl = 46.7 + 30.0 * 250f64.log10();
        let snr = 10f64.powf((16.0 - pl + 94.0) / 10.0);
        let oracle = 20e6 * (1.0 + snr).ln() / std::f64::consts::LN_2;
        assert!((c - oracle).abs() < 1e-6);
        assert!((c - 3_700_319.815).abs() < 1e-2, "{c}");
    }

    #[test]
    fn capacity_monotone_then_capped() {
        let m = CapacityModel::default();
        let cap_d = m.cap_distance_m();
        assert!((link_capacity(cap_d, &m).unwrap() - m.capacity_cap_bps).abs() < 1.0);
        assert_eq!(link_capacity(cap_d * 0.5, &m).unwrap(), m.capacity_cap_bps);
        let mut prev = f64::INFINITY;
        let mut d = cap_d * 1.01;
        while d < 5_000.0 {
            let c = link_capacity(d, &m).unwrap();
            assert!(c < prev || c == m.capacity_floor_bps);
            prev = c;
            d *= 1.1;
        }
        assert!(link_capacity(0.0, &m).is_err());
        assert!(link_capacity(-3.0, &m).is_err());
        assert_eq!(link_capacity(1e9, &m).unwrap(), m.capacity_floor_bps);
    }

    #[test]
    fn radius_examples() {
        let m = CapacityModel::default();
        let t = build_radius_graph(&[[0.0, 0.0], [100.0, 0.0]], 500.0, 250.0, &m).unwrap();
        assert_eq!(t.n_edges(), 1);
        let t = build_radius_graph(&[[0.0, 0.0], [300.0, 0.0]], 500.0, 250.0, &m).unwrap();
        assert_eq!(t.n_edges(), 0);
        let t = build_radius_graph(&[[0.0, 0.0], [200.0, 0.0], [400.0, 0.0]], 500.0, 250.0, &m)
            .unwrap();
        let pairs: Vec<_> = t.edges.iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
        // tie at exactly the radius
        let t = build_radius_graph(&[[0.0, 0.0], [250.0, 0.0]], 500.0, 250.0, &m).unwrap();
        assert_eq!(t.n_edges(), 1);
        assert!(build_radius_graph(&[[0.0, 0.0]], 500.0, 250.0, &m).is_err());
    }

    #[test]
    fn coincident_nodes_keep_positive_capacity() {
        let m = CapacityModel::default();
        let t = build_radius_graph(&[[5.0, 5.0], [5.0, 5.0]], 500.0, 250.0, &m).unwrap();
        assert_eq!(t.edges[0].capacity_bps, m.capacity_cap_bps);
        t.validate().unwrap();
    }

    #[test]
    fn json_shape() {
        let m = CapacityModel::default();
        let t = build_radius_graph(&[[0.0, 0.0], [100.0, 0.0]], 500.0, 250.0, &m).unwrap();
        let v: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(v["edges"][0][0], 0);
        assert_eq!(v["edges"][0][1], 1);
        assert_eq!(v["edges"][0][2], 100.0);
        assert_eq!(v["meta"]["generator"], "radius");
        let back: Topology = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }
}
