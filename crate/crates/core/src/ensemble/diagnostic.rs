//! How fast does the median of `n` samples approach the median of all `N`?

use std::collections::HashSet;
use std::fmt::Write;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{l1, median_in_place, GraphEnsemble, PairTable};
use crate::error::{Error, Result};

pub const DEFAULT_SUBSAMPLE_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsampleDistances {
    pub n: usize,
    /// L1 distance from each subsample's median to the full median.
    pub distances: Vec<f64>,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Ensemble size `N`.
    pub samples: usize,
    pub subsample_cap: usize,
    pub seed: u64,
    /// One entry for each `n` in `2..N`.
    pub per_n: Vec<SubsampleDistances>,
}

impl ConvergenceReport {
    /// `n,distance` rows, one per subsample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,distance\n");
        for row in &self.per_n {
            for d in &row.distances {
                let _ = writeln!(out, "{},{}", row.n, d);
            }
        }
        out
    }

    pub fn median_curve(&self) -> Vec<(usize, f64)> {
        self.per_n.iter().map(|r| (r.n, r.median)).collect()
    }
}

/// `C(n, k)`, saturating at `cap + 1` once it exceeds `cap`.
pub(crate) fn binomial_capped(n: usize, k: usize, cap: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        // C(n, i) grows with i up to n/2.
        if c > cap as u128 {
            return cap + 1;
        }
    }
    c as usize
}

/// For each `1 < n < N`, measures `min(cap, C(N, n))` distinct subsamples.
///
/// When every subset fits under the cap all of them are used, in
/// lexicographic order; otherwise subsets are drawn uniformly without
/// replacement from a generator seeded with `seed`, rejecting repeats.
pub fn convergence_diagnostic(
    ensemble: &GraphEnsemble,
    subsample_cap: usize,
    seed: u64,
) -> Result<ConvergenceReport> {
    let total = ensemble.len();
    if total < 3 {
        return Err(Error::InsufficientSamples(total));
    }
    if subsample_cap == 0 {
        return Err(Error::InvalidParameter("subsample cap must be at least 1".into()));
    }
    let table = PairTable::new(ensemble);
    let everything: Vec<usize> = (0..total).collect();
    let reference = table.median(&everything);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut per_n = Vec::with_capacity(total - 2);
    for n in 2..total {
        let count = binomial_capped(total, n, subsample_cap);
        let subsets: Vec<Vec<usize>> = if count <= subsample_cap {
            (0..total).combinations(n).collect()
        } else {
            let mut seen = HashSet::with_capacity(subsample_cap);
            let mut picked = Vec::with_capacity(subsample_cap);
            while picked.len() < subsample_cap {
                let mut s = rand::seq::index::sample(&mut rng, total, n).into_vec();
                s.sort_unstable();
                if seen.insert(s.clone()) {
                    picked.push(s);
                }
            }
            picked
        };
        let distances: Vec<f64> = subsets
            .iter()
            .map(|s| l1(&table.median(s), &reference))
            .collect();
        let mut sorted = distances.clone();
        let median = median_in_place(&mut sorted);
        per_n.push(SubsampleDistances {
            n,
            min: sorted[0],
            median,
            max: sorted[sorted.len() - 1],
            distances,
        });
    }
    Ok(ConvergenceReport {
        samples: total,
        subsample_cap,
        seed,
        per_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CoherenceGraph;

    fn sample(w: f64) -> CoherenceGraph {
        CoherenceGraph::from_ids(&["a", "b", "c"], [("a", "b", w), ("b", "c", -0.5)]).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_capped(3, 2, 100), 3);
        assert_eq!(binomial_capped(30, 2, 1000), 435);
        assert_eq!(binomial_capped(30, 29, 100), 30);
        assert_eq!(binomial_capped(30, 15, 100), 101);
        assert_eq!(binomial_capped(5, 0, 100), 1);
    }

    #[test]
    fn three_samples_give_three_pairs() {
        let e = GraphEnsemble::new(vec![sample(1.0), sample(0.5), sample(0.0)]).unwrap();
        let r = convergence_diagnostic(&e, 100, 1).unwrap();
        assert_eq!(r.per_n.len(), 1);
        assert_eq!(r.per_n[0].n, 2);
        assert_eq!(r.per_n[0].distances.len(), 3);
        // Full median a-b = 0.5; pair medians 0.75, 0.5, 0.25.
        let mut d = r.per_n[0].distances.clone();
        d.sort_by(f64::total_cmp);
        assert_eq!(d, vec![0.0, 0.25, 0.25]);
        assert_eq!(r.to_csv().lines().count(), 4);
    }

    #[test]
    fn needs_three_samples() {
        let e = GraphEnsemble::new(vec![sample(1.0), sample(0.5)]).unwrap();
        assert!(matches!(
            convergence_diagnostic(&e, 100, 0),
            Err(Error::InsufficientSamples(2))
        ));
    }

    #[test]
    fn deterministic_under_seed() {
        let samples = (0..12).map(|k| sample(k as f64 / 12.0)).collect();
        let e = GraphEnsemble::new(samples).unwrap();
        let a = convergence_diagnostic(&e, 10, 42).unwrap();
        let b = convergence_diagnostic(&e, 10, 42).unwrap();
        assert_eq!(a, b);
        for row in &a.per_n {
            assert_eq!(row.distances.len(), binomial_capped(12, row.n, 10).min(10));
        }
    }
}
