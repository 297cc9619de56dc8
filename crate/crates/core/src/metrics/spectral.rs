//! Laplacian spectra via dense symmetric eigendecomposition.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::topology::Topology;

/// Eigenvalues with magnitude below this are treated as zero.
pub const EIGEN_TOL: f64 = 1e-9;

/// `L = D - A`, with `A` either 0/1 or normalized capacities.
pub fn laplacian(topo: &Topology, weighted: bool, cap_bps: f64) -> DMatrix<f64> {
    let n = topo.n_nodes();
    let mut l = DMatrix::zeros(n, n);
    for e in &topo.edges {
        let w = if weighted {
            topo.normalized_weight(e, cap_bps)
        } else {
            1.0
        };
        l[(e.i, e.j)] -= w;
        l[(e.j, e.i)] -= w;
        l[(e.i, e.i)] += w;
        l[(e.j, e.j)] += w;
    }
    l
}

/// `D^-1/2 L D^-1/2`; rows and columns of isolated nodes are left at zero.
pub fn normalized_laplacian(topo: &Topology, weighted: bool, cap_bps: f64) -> DMatrix<f64> {
    let l = laplacian(topo, weighted, cap_bps);
    let n = l.nrows();
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|i| {
            let d = l[(i, i)];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| l[(i, j)] * inv_sqrt[i] * inv_sqrt[j])
}

/// Eigenvalues in ascending order.
pub fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Second-smallest Laplacian eigenvalue; 0 for disconnected graphs.
pub fn algebraic_connectivity(
    topo: &Topology,
    weighted: bool,
    normalized: bool,
    cap_bps: f64,
) -> f64 {
    if topo.n_nodes() < 2 {
        return 0.0;
    }
    let m = if normalized {
        normalized_laplacian(topo, weighted, cap_bps)
    } else {
        laplacian(topo, weighted, cap_bps)
    };
    let lambda2 = sorted_eigenvalues(m)[1];
    if lambda2.abs() < EIGEN_TOL {
        0.0
    } else {
        lambda2.max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::test_graphs::{complete, cycle, from_pairs, path};

    #[test]
    fn closed_forms() {
        assert!((algebraic_connectivity(&path(2), false, false, 1.0) - 2.0).abs() < 1e-9);
        assert!((algebraic_connectivity(&complete(3), false, false, 1.0) - 3.0).abs() < 1e-9);
        assert!((algebraic_connectivity(&complete(7), false, false, 1.0) - 7.0).abs() < 1e-9);
        // C_n: 2 - 2cos(2π/n)
        let expected = 2.0 - 2.0 * (std::f64::consts::TAU / 8.0).cos();
        assert!((algebraic_connectivity(&cycle(8), false, false, 1.0) - expected).abs() < 1e-9);
    }

    #[test]
    fn normalized_complete_graph() {
        // Normalized Laplacian of K_n has λ2 = n / (n - 1).
        let l2 = algebraic_connectivity(&complete(5), false, true, 1.0);
        assert!((l2 - 1.25).abs() < 1e-9);
    }

    #[test]
    fn disconnected_is_zero() {
        let t = from_pairs(4, &[(0, 1), (2, 3)]);
        assert_eq!(algebraic_connectivity(&t, false, false, 1.0), 0.0);
        assert_eq!(algebraic_connectivity(&t, false, true, 1.0), 0.0);
        let isolated = from_pairs(3, &[(0, 1)]);
        assert_eq!(algebraic_connectivity(&isolated, false, true, 1.0), 0.0);
    }

    #[test]
    fn weighted_scales_with_weights() {
        let mut t = path(2);
        t.edges[0].capacity_bps = 25e6;
        assert!((algebraic_connectivity(&t, true, false, 100e6) - 0.5).abs() < 1e-9);
    }
}
