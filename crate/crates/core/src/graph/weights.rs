use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CoherenceGraph;
use crate::error::{Error, Result};

/// Top of the integer consistency-rating scale (0 = inconsistent,
/// 10 = totally consistent).
pub const RATING_MAX: i64 = 10;

/// Maps a 0..=10 consistency rating linearly onto `[-1, 1]`.
pub fn rating_to_weight(rating: i64) -> Result<f64> {
    if !(0..=RATING_MAX).contains(&rating) {
        return Err(Error::InvalidRating(rating));
    }
    // (r - 5) / 5 as an integer numerator keeps every result at one decimal.
    Ok((rating - RATING_MAX / 2) as f64 / (RATING_MAX / 2) as f64)
}

/// The quantization codomain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightScale {
    levels: Vec<f64>,
    pub rating_max: i64,
}

impl Default for WeightScale {
    fn default() -> Self {
        WeightScale {
            levels: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            rating_max: RATING_MAX,
        }
    }
}

impl WeightScale {
    /// A custom level set. Levels must be sorted, symmetric about zero,
    /// contain zero, and lie in `[-1, 1]`.
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("weight scale: {m}")));
        if levels.is_empty() {
            return bad("no levels");
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return bad("levels must be strictly increasing");
        }
        if levels.iter().any(|l| !(-1.0..=1.0).contains(l)) {
            return bad("levels must lie in [-1, 1]");
        }
        let n = levels.len();
        if (0..n).any(|i| (levels[i] + levels[n - 1 - i]).abs() > 1e-12) {
            return bad("levels must be symmetric about 0");
        }
        if !levels.contains(&0.0) {
            return bad("levels must include 0");
        }
        Ok(WeightScale {
            levels,
            rating_max: RATING_MAX,
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Nearest level to `w`; equidistant candidates resolve away from zero.
    pub fn snap(&self, w: f64) -> f64 {
        let mut best = self.levels[0];
        let mut best_dist = (w - best).abs();
        for &level in &self.levels[1..] {
            let dist = (w - level).abs();
            let tie = (dist - best_dist).abs() <= 1e-12;
            if (dist < best_dist && !tie) || (tie && level.abs() > best.abs()) {
                best = level;
                best_dist = dist;
            }
        }
        best
    }
}

/// Snaps every weight to the nearest level of `scale`, dropping edges that
/// land on zero.
pub fn quantize(graph: &CoherenceGraph, scale: &WeightScale) -> CoherenceGraph {
    let edges: BTreeMap<(usize, usize), f64> = graph
        .edge_map()
        .iter()
        .filter_map(|(&key, &w)| {
            let q = scale.snap(w);
            (q != 0.0).then_some((key, q))
        })
        .collect();
    CoherenceGraph::from_parts(graph.propositions().to_vec(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rating_endpoints_and_midpoint() {
        assert_eq!(rating_to_weight(0).unwrap(), -1.0);
        assert_eq!(rating_to_weight(10).unwrap(), 1.0);
        assert_eq!(rating_to_weight(5).unwrap(), 0.0);
        assert_eq!(rating_to_weight(9).unwrap(), 0.8);
        assert_eq!(rating_to_weight(2).unwrap(), -0.6);
    }

    #[test]
    fn rating_out_of_range() {
        assert!(matches!(rating_to_weight(-1), Err(Error::InvalidRating(-1))));
        assert!(matches!(rating_to_weight(11), Err(Error::InvalidRating(11))));
    }

    #[test]
    fn rating_map_is_increasing_and_odd() {
        let w: Vec<f64> = (0..=10).map(|r| rating_to_weight(r).unwrap()).collect();
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        for k in 0..=5 {
            assert_eq!(w[5 + k], -w[5 - k]);
        }
    }

    #[test]
    fn snapping() {
        let s = WeightScale::default();
        assert_eq!(s.snap(0.6), 0.5);
        assert_eq!(s.snap(0.75), 1.0);
        assert_eq!(s.snap(-0.75), -1.0);
        assert_eq!(s.snap(0.25), 0.5);
        assert_eq!(s.snap(-0.25), -0.5);
        assert_eq!(s.snap(-0.2), 0.0);
        assert_eq!(s.snap(1.0), 1.0);
    }

    #[test]
    fn quantize_drops_zero_edges() {
        let g = CoherenceGraph::from_ids(
            &["a", "b", "c"],
            [("a", "b", 0.6), ("a", "c", -0.2), ("b", "c", 0.75)],
        )
        .unwrap();
        let q = quantize(&g, &WeightScale::default());
        assert_eq!(q.edge_count(), 2);
        assert_eq!(q.weight("a", "b"), 0.5);
        assert_eq!(q.weight("b", "c"), 1.0);
        assert!(!q.has_edge("a", "c"));
        assert_eq!(quantize(&q, &WeightScale::default()), q);
    }

    #[test]
    fn custom_scale_validation() {
        assert!(WeightScale::new(vec![-1.0, 0.0, 1.0]).is_ok());
        assert!(WeightScale::new(vec![-1.0, 0.0, 0.5]).is_err());
        assert!(WeightScale::new(vec![0.0, -1.0, 1.0]).is_err());
        assert!(WeightScale::new(vec![-2.0, 0.0, 2.0]).is_err());
        assert!(WeightScale::new(vec![-1.0, 1.0]).is_err());
    }
}
