//! Classical comparison topologies. Adjacency comes from each generative
//! model; positions only feed the capacity model.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CapacityModel, Topology, TopologyMeta};
use crate::error::{Error, Result};

/// Resampling budget for the stochastic generators.
pub const DEFAULT_RETRY_CAP: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErParams {
    pub n: usize,
    pub mean_degree: f64,
}

impl Default for ErParams {
    fn default() -> Self {
        Self {
            n: 85,
            mean_degree: 4.5,
        }
    }
}

impl ErParams {
    pub fn edge_probability(&self) -> f64 {
        self.mean_degree / (self.n as f64 - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WsParams {
    pub n: usize,
    pub k: usize,
    pub rewire_p: f64,
}

impl Default for WsParams {
    fn default() -> Self {
        Self {
            n: 85,
            k: 4,
            rewire_p: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaParams {
    pub n: usize,
    pub m: usize,
}

impl Default for BaParams {
    fn default() -> Self {
        Self { n: 85, m: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub branching: usize,
    pub height: u32,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            branching: 4,
            height: 3,
        }
    }
}

fn random_positions(n: usize, area_m: f64, rng: &mut ChaCha8Rng) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| [rng.random::<f64>() * area_m, rng.random::<f64>() * area_m])
        .collect()
}

/// Run `sample` with sub-seeds `seed, seed+1, ...` until the result is connected.
fn resample_connected(
    name: &str,
    seed: u64,
    retry_cap: u32,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> Result<Topology>,
) -> Result<Topology> {
    for attempt in 0..retry_cap {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut topo = sample(&mut rng)?;
        if topo.is_connected() {
            topo.meta.seed = seed;
            topo.meta
                .params
                .insert("attempts".into(), (attempt + 1).into());
            return Ok(topo);
        }
    }
    Err(Error::NotConnected {
        generator: name.to_string(),
        attempts: retry_cap,
    })
}

fn meta(generator: &str, seed: u64, params: impl Serialize) -> TopologyMeta {
    let params = match serde_json::to_value(params) {
        Ok(serde_json::Value::Object(map)) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    TopologyMeta {
        generator: generator.to_string(),
        seed,
        params,
    }
}

/// Erdős–Rényi G(n, p) with `p = mean_degree / (n - 1)`.
pub fn gen_er(
    params: ErParams,
    area_m: f64,
    model: &CapacityModel,
    seed: u64,
    retry_cap: u32,
) -> Result<Topology> {
    if params.n < 2 {
        return Err(Error::invalid("n", "ER needs at least two nodes"));
    }
    let p = params.edge_probability();
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(
            "mean_degree",
            format!("edge probability {p} outside (0, 1]"),
        ));
    }
    resample_connected("er", seed, retry_cap, |rng| {
        let positions = random_positions(params.n, area_m, rng);
        let mut pairs = Vec::new();
        for i in 0..params.n {
            for j in i + 1..params.n {
                if rng.random_bool(p) {
                    pairs.push((i, j));
                }
            }
        }
        Topology::from_pairs(area_m, positions, pairs, model, meta("er", seed, params))
    })
}

/// Watts–Strogatz: ring lattice with `k` nearest neighbors, each lattice edge
/// rewired with probability `rewire_p` to a uniformly chosen new endpoint.
pub fn gen_ws(
    params: WsParams,
    area_m: f64,
    model: &CapacityModel,
    seed: u64,
    retry_cap: u32,
) -> Result<Topology> {
    let WsParams { n, k, rewire_p } = params;
    if k < 2 || k % 2 != 0 {
        return Err(Error::invalid("k", format!("must be even and >= 2, got {k}")));
    }
    if k >= n {
        return Err(Error::invalid("k", format!("k = {k} must be below n = {n}")));
    }
    if !(0.0..=1.0).contains(&rewire_p) {
        return Err(Error::invalid("rewire_p", "must lie in [0, 1]"));
    }
    resample_connected("ws", seed, retry_cap, |rng| {
        let positions = random_positions(n, area_m, rng);
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        for i in 0..n {
            for j in 1..=k / 2 {
                edges.insert(key(i, (i + j) % n));
            }
        }
        for j in 1..=k / 2 {
            for i in 0..n {
                let old = key(i, (i + j) % n);
                if !rng.random_bool(rewire_p) {
                    continue;
                }
                let degree_i = edges.iter().filter(|&&(a, b)| a == i || b == i).count();
                if degree_i >= n - 1 {
                    continue;
                }
                let target = loop {
                    let w = rng.random_range(0..n);
                    if w != i && !edges.contains(&key(i, w)) {
                        break w;
                    }
                };
                if edges.remove(&old) {
                    edges.insert(key(i, target));
                }
            }
        }
        Topology::from_pairs(area_m, positions, edges, model, meta("ws", seed, params))
    })
}

/// Barabási–Albert preferential attachment from a complete seed of `m + 1` nodes.
pub fn gen_ba(
    params: BaParams,
    area_m: f64,
    model: &CapacityModel,
    seed: u64,
    retry_cap: u32,
) -> Result<Topology> {
    let BaParams { n, m } = params;
    if m == 0 {
        return Err(Error::invalid("m", "must be at least 1"));
    }
    if n <= m + 1 {
        return Err(Error::invalid("n", format!("n = {n} must exceed m + 1 = {}", m + 1)));
    }
    resample_connected("ba", seed, retry_cap, |rng| {
        let positions = random_positions(n, area_m, rng);
        let seed_size = m + 1;
        let mut pairs = Vec::new();
        // Each endpoint appears once per incident edge.
        let mut endpoints = Vec::new();
        for i in 0..seed_size {
            for j in i + 1..seed_size {
                pairs.push((i, j));
                endpoints.push(i);
                endpoints.push(j);
            }
        }
        for new in seed_size..n {
            let mut targets = BTreeSet::new();
            while targets.len() < m {
                targets.insert(endpoints[rng.random_range(0..endpoints.len())]);
            }
            for t in targets {
                pairs.push((t, new));
                endpoints.push(t);
                endpoints.push(new);
            }
        }
        Topology::from_pairs(area_m, positions, pairs, model, meta("ba", seed, params))
    })
}

/// 9x9 lattice with spacing `area/8` plus one node at the center of each of
/// the four corner cells, each tied to that cell's four lattice corners.
pub fn gen_grid(area_m: f64, model: &CapacityModel) -> Result<Topology> {
    const SIDE: usize = 9;
    let spacing = area_m / (SIDE - 1) as f64;
    let id = |r: usize, c: usize| r * SIDE + c;
    let mut positions = Vec::with_capacity(SIDE * SIDE + 4);
    for r in 0..SIDE {
        for c in 0..SIDE {
            positions.push([c as f64 * spacing, r as f64 * spacing]);
        }
    }
    let mut pairs = Vec::new();
    for r in 0..SIDE {
        for c in 0..SIDE {
            if c + 1 < SIDE {
                pairs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < SIDE {
                pairs.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let last = SIDE - 2;
    for (r, c) in [(0, 0), (0, last), (last, 0), (last, last)] {
        let center = positions.len();
        positions.push([(c as f64 + 0.5) * spacing, (r as f64 + 0.5) * spacing]);
        for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            pairs.push((center, id(r + dr, c + dc)));
        }
    }
    Topology::from_pairs(area_m, positions, pairs, model, meta("grid", 0, ()))
}

/// Balanced tree, breadth-first numbered, laid out on concentric rings.
pub fn gen_tree(params: TreeParams, area_m: f64, model: &CapacityModel) -> Result<Topology> {
    let TreeParams { branching, height } = params;
    if branching < 1 {
        return Err(Error::invalid("branching", "must be at least 1"));
    }
    if height < 1 {
        return Err(Error::invalid("height", "must be at least 1"));
    }
    let mut level_sizes = vec![1usize];
    for _ in 0..height {
        let next = level_sizes.last().unwrap() * branching;
        if next > 1_000_000 {
            return Err(Error::invalid("height", "tree too large"));
        }
        level_sizes.push(next);
    }
    let center = 0.5 * area_m;
    let outer = 0.48 * area_m;
    let mut positions = Vec::new();
    for (level, &count) in level_sizes.iter().enumerate() {
        let radius = outer * level as f64 / height as f64;
        for k in 0..count {
            let angle = std::f64::consts::TAU * (k as f64 + 0.5) / count as f64;
            positions.push([center + radius * angle.cos(), center + radius * angle.sin()]);
        }
    }
    let pairs = (1..positions.len()).map(|child| ((child - 1) / branching, child));
    Topology::from_pairs(area_m, positions, pairs, model, meta("tree", 0, params))
}
