//! Independent brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use fractal_mesh::topology::{abstract_graph, Topology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Connected G(n, p) graph, resampled until connected.
pub fn random_connected(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Topology {
    loop {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < p {
                    pairs.push((i, j));
                }
            }
        }
        let t = abstract_graph(n, pairs);
        if t.is_connected() {
            return t;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edge list as index pairs plus a per-node incidence list of edge ids.
fn incidence(t: &Topology) -> Vec<Vec<(usize, usize)>> {
    let mut inc = vec![Vec::new(); t.n_nodes()];
    for (k, e) in t.edges.iter().enumerate() {
        inc[e.i].push((e.j, k));
        inc[e.j].push((e.i, k));
    }
    inc
}

/// Every simple `s`-`t` path as a bitmask of edge ids, restricted to `allowed` edges.
fn simple_paths(inc: &[Vec<(usize, usize)>], s: usize, t: usize, allowed: u64) -> Vec<u64> {
    fn walk(
        inc: &[Vec<(usize, usize)>],
        u: usize,
        t: usize,
        allowed: u64,
        visited: u32,
        used: u64,
        out: &mut Vec<u64>,
    ) {
        if u == t {
            out.push(used);
            return;
        }
        for &(v, e) in &inc[u] {
            if allowed >> e & 1 == 1 && visited >> v & 1 == 0 {
                walk(inc, v, t, allowed, visited | 1 << v, used | 1 << e, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(inc, s, t, allowed, 1 << s, 0, &mut out);
    out
}

/// Largest number of pairwise edge-disjoint `s`-`t` paths, by exhaustive path packing.
pub fn edp_by_path_packing(t: &Topology, s: usize, dst: usize) -> u32 {
    assert!(t.n_edges() <= 64 && t.n_nodes() <= 32);
    let inc = incidence(t);
    fn live_degree(inc: &[Vec<(usize, usize)>], u: usize, allowed: u64) -> u32 {
        inc[u].iter().filter(|&&(_, e)| allowed >> e & 1 == 1).count() as u32
    }
    fn best(
        inc: &[Vec<(usize, usize)>],
        s: usize,
        t: usize,
        allowed: u64,
        memo: &mut HashMap<u64, u32>,
    ) -> u32 {
        if let Some(&v) = memo.get(&allowed) {
            return v;
        }
        // degree bound of this subproblem alone, so memoized values are exact
        let bound = live_degree(inc, s, allowed).min(live_degree(inc, t, allowed));
        let mut top = 0;
        for path in simple_paths(inc, s, t, allowed) {
            if top >= bound {
                break;
            }
            top = top.max(1 + best(inc, s, t, allowed & !path, memo));
        }
        memo.insert(allowed, top);
        top
    }
    let all = if t.n_edges() == 64 { u64::MAX } else { (1u64 << t.n_edges()) - 1 };
    best(&inc, s, dst, all, &mut HashMap::new())
}

/// min over nonempty proper subsets S of cut(S) / min(vol S, vol S̄), unit weights.
pub fn conductance_by_enumeration(t: &Topology) -> f64 {
    let n = t.n_nodes();
    assert!((2..=20).contains(&n));
    let deg = t.degrees();
    let mut phi = f64::INFINITY;
    for mask in 1u32..(1 << n) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let cut = t.edges.iter().filter(|e| inside(e.i) != inside(e.j)).count() as f64;
        let vol_s: usize = (0..n).filter(|&v| inside(v)).map(|v| deg[v]).sum();
        let vol_c: usize = (0..n).filter(|&v| !inside(v)).map(|v| deg[v]).sum();
        let denom = vol_s.min(vol_c) as f64;
        if denom > 0.0 {
            phi = phi.min(cut / denom);
        }
    }
    phi
}
