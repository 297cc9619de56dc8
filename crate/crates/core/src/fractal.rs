//! Recursive quadrant point generator with a prescribed fractal dimension.
//!
//! Every emitted node spawns four children on the diagonals at distance
//! `s' = s * 4^(-1/D)` along each axis, so each recursion level shrinks the
//! spatial scale by the ratio `b^-1` with `b = 4^(1/D)`. Levels `0..=k` hold
//! `(4^(k+1) - 1) / 3` points in total.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Branching factor of the quadrant recursion.
pub const BRANCHING: u64 = 4;

/// Root coordinate in the generator's native frame.
pub const ROOT: (f64, f64) = (0.5, 0.5);

/// Initial scale handed to the root.
pub const ROOT_SCALE: f64 = 0.5;

/// Child emission order: (+,+), (+,-), (-,+), (-,-).
const CHILD_OFFSETS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractalConfig {
    pub n: usize,
    pub d_frac: f64,
}

impl FractalConfig {
    pub fn new(n: usize, d_frac: f64) -> Result<Self> {
        let cfg = Self { n, d_frac };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("n", "node count must be at least 1"));
        }
        if !(self.d_frac.is_finite() && self.d_frac > 0.0) {
            return Err(Error::invalid(
                "d_frac",
                format!("fractal dimension must be positive, got {}", self.d_frac),
            ));
        }
        Ok(())
    }
}

/// Ordered point list in the generator frame, root first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub d_frac: f64,
    pub n: usize,
    pub points: Vec<[f64; 2]>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Number of points emitted by levels `0..=depth`.
pub fn node_count_at_depth(depth: u32) -> Result<u64> {
    // 4^(depth+1) must fit in u64.
    if depth >= 31 {
        return Err(Error::DepthOutOfRange { depth });
    }
    Ok((BRANCHING.pow(depth + 1) - 1) / 3)
}

/// Smallest depth whose full tree holds at least `n` points.
pub fn required_depth(n: usize) -> Result<u32> {
    if n == 0 {
        return Err(Error::invalid("n", "node count must be at least 1"));
    }
    let n = n as u64;
    let mut depth = 0;
    while node_count_at_depth(depth)? < n {
        depth += 1;
    }
    Ok(depth)
}

/// Scale of the next recursion level.
pub fn child_scale(s: f64, d_frac: f64) -> f64 {
    s * scale_ratio(d_frac)
}

/// `4^(-1/D)`.
pub fn scale_ratio(d_frac: f64) -> f64 {
    (-(BRANCHING as f64).ln() / d_frac).exp()
}

/// Emit the first `config.n` points of the depth-first quadrant recursion.
pub fn generate_points(config: &FractalConfig) -> Result<PointSet> {
    config.validate()?;
    let depth = required_depth(config.n)?;
    let ratio = scale_ratio(config.d_frac);

    let mut points = Vec::with_capacity(config.n);
    let mut walker = Walker {
        ratio,
        limit: config.n,
        out: &mut points,
    };
    walker.visit(ROOT.0, ROOT.1, ROOT_SCALE, depth);

    Ok(PointSet {
        d_frac: config.d_frac,
        n: config.n,
        points,
    })
}

/// Untruncated emission of a full tree of the given depth.
pub fn generate_full_tree(d_frac: f64, depth: u32) -> Result<Vec<[f64; 2]>> {
    let total = node_count_at_depth(depth)? as usize;
    FractalConfig::new(total, d_frac)?;
    let mut points = Vec::with_capacity(total);
    Walker {
        ratio: scale_ratio(d_frac),
        limit: usize::MAX,
        out: &mut points,
    }
    .visit(ROOT.0, ROOT.1, ROOT_SCALE, depth);
    Ok(points)
}

struct Walker<'a> {
    ratio: f64,
    limit: usize,
    out: &'a mut Vec<[f64; 2]>,
}

impl Walker<'_> {
    /// `levels_below` counts the levels still to emit beneath this node.
    fn visit(&mut self, x: f64, y: f64, s: f64, levels_below: u32) {
        if self.out.len() >= self.limit {
            return;
        }
        self.out.push([x, y]);
        if levels_below == 0 {
            return;
        }
        let child = s * self.ratio;
        for (dx, dy) in CHILD_OFFSETS {
            self.visit(x + dx * child, y + dy * child, child, levels_below - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_counts() {
        let expected = [1u64, 5, 21, 85, 341, 1365];
        for (depth, &count) in expected.iter().enumerate() {
            assert_eq!(node_count_at_depth(depth as u32).unwrap(), count);
        }
        assert!(matches!(
            node_count_at_depth(40),
            Err(Error::DepthOutOfRange { depth: 40 })
        ));
    }

    fn brute_depth(n: u64) -> u32 {
        (0..).find(|&k| (4u64.pow(k + 1) - 1) / 3 >= n).unwrap()
    }

    #[test]
    fn depth_matches_brute_force_and_log_formula() {
        assert_eq!(required_depth(85).unwrap(), 3);
        assert_eq!(required_depth(1).unwrap(), 0);
        assert_eq!(required_depth(100).unwrap(), brute_depth(100));
        assert_eq!(brute_depth(100), 4);
        for n in 1..5000u64 {
            let by_log = ((3.0 * n as f64 + 1.0).ln() / 4f64.ln() - 1.0 - 1e-12).ceil() as u32;
            assert_eq!(required_depth(n as usize).unwrap(), brute_depth(n), "n={n}");
            assert_eq!(by_log, brute_depth(n), "n={n}");
        }
        assert!(required_depth(0).is_err());
    }

    #[test]
    fn child_scale_values() {
        assert!((child_scale(0.5, 2.0) - 0.25).abs() < 1e-15);
        assert!((child_scale(0.5, 1.0) - 0.125).abs() < 1e-15);
        assert!((child_scale(0.25, 4.0) - 0.176_776_695).abs() < 1e-9);
    }

    #[test]
    fn five_points_at_d2() {
        let ps = generate_points(&FractalConfig::new(5, 2.0).unwrap()).unwrap();
        assert_eq!(
            ps.points,
            vec![
                [0.5, 0.5],
                [0.75, 0.75],
                [0.75, 0.25],
                [0.25, 0.75],
                [0.25, 0.25]
            ]
        );
    }

    #[test]
    fn single_root() {
        let ps = generate_points(&FractalConfig::new(1, 2.0).unwrap()).unwrap();
        assert_eq!(ps.points, vec![[0.5, 0.5]]);
    }

    #[test]
    fn full_tree_count_law() {
        for depth in 0..=6 {
            let pts = generate_full_tree(1.7, depth).unwrap();
            assert_eq!(pts.len() as u64, node_count_at_depth(depth).unwrap());
        }
    }

    #[test]
    fn depth_first_prefix() {
        // 6 points at D=2: root, first child, then first grandchild of the first child.
        let ps = generate_points(&FractalConfig::new(6, 2.0).unwrap()).unwrap();
        assert_eq!(ps.points[1], [0.75, 0.75]);
        assert_eq!(ps.points[2], [0.875, 0.875]);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(FractalConfig::new(0, 2.0).is_err());
        assert!(FractalConfig::new(5, 0.0).is_err());
        assert!(FractalConfig::new(5, -1.0).is_err());
        assert!(FractalConfig::new(5, f64::NAN).is_err());
        let bad = FractalConfig { n: 3, d_frac: -2.0 };
        assert!(generate_points(&bad).is_err());
    }
}
