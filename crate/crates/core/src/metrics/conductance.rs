use crate::error::{Error, Result};
use crate::topology::Topology;

/// Largest graph the exhaustive conductance search accepts.
pub const CONDUCTANCE_MAX_NODES: usize = 14;

/// Exhaustive `min_S cut(S) / min(vol S, vol S̄)` with `vol` the degree sum.
/// Subsets whose smaller side has zero volume are skipped.
pub fn conductance_bruteforce(topo: &Topology) -> Result<f64> {
    let n = topo.n_nodes();
    if n > CONDUCTANCE_MAX_NODES {
        return Err(Error::OracleTooLarge {
            n,
            limit: CONDUCTANCE_MAX_NODES,
        });
    }
    if n < 2 {
        return Err(Error::Undefined("conductance needs at least two nodes"));
    }
    let degrees = topo.degrees();
    let total_vol: usize = degrees.iter().sum();
    let mut best: Option<f64> = None;
    // Node n-1 is pinned outside S; every bipartition appears exactly once.
    for mask in 1u32..(1 << (n - 1)) {
        let in_s = |v: usize| mask >> v & 1 == 1;
        let vol_s: usize = (0..n).filter(|&v| in_s(v)).map(|v| degrees[v]).sum();
        let smaller = vol_s.min(total_vol - vol_s);
        if smaller == 0 {
            continue;
        }
        let cut = topo
            .edges
            .iter()
            .filter(|e| in_s(e.i) != in_s(e.j))
            .count();
        let phi = cut as f64 / smaller as f64;
        best = Some(best.map_or(phi, |b: f64| b.min(phi)));
    }
    best.ok_or(Error::Undefined("conductance undefined for a graph without edges"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::test_graphs::{complete, from_pairs, path};

    #[test]
    fn single_edge() {
        assert_eq!(conductance_bruteforce(&path(2)).unwrap(), 1.0);
    }

    #[test]
    fn k4_is_two_thirds() {
        // 1-vs-3: cut 3 / vol 3 = 1; 2-vs-2: cut 4 / vol 6 = 2/3.
        let phi = conductance_bruteforce(&complete(4)).unwrap();
        assert!((phi - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn path6_split_in_the_middle() {
        // Splitting 0-1-2 | 3-4-5 cuts 1 edge with volume 5 per side.
        let phi = conductance_bruteforce(&path(6)).unwrap();
        assert!((phi - 0.2).abs() < 1e-12);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            conductance_bruteforce(&path(15)),
            Err(Error::OracleTooLarge { n: 15, .. })
        ));
        assert!(conductance_bruteforce(&from_pairs(3, &[])).is_err());
        assert_eq!(conductance_bruteforce(&from_pairs(4, &[(0, 1), (2, 3)])).unwrap(), 0.0);
    }
}
