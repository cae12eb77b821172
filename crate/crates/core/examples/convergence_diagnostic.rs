//! How quickly subsample medians approach the full median. Writes the
//! per-subsample distances as CSV to stdout.
//!
//!     cargo run --example convergence_diagnostic > distances.csv

use cdi::ensemble::{convergence_diagnostic, DEFAULT_SUBSAMPLE_CAP};
use cdi::synth::{planted_ensemble, random_graph, NoiseModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cdi::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let planted = random_graph(&mut rng, 12, 0.3, &[-1.0, -0.6, 0.6, 1.0]);
    let ensemble = planted_ensemble(&planted, 30, NoiseModel::default(), 17)?;
    let report = convergence_diagnostic(&ensemble, DEFAULT_SUBSAMPLE_CAP, 0)?;
    for row in &report.per_n {
        eprintln!(
            "n={:>2}  subsamples={:>3}  min {:>5.2}  median {:>5.2}  max {:>5.2}",
            row.n,
            row.distances.len(),
            row.min,
            row.median,
            row.max
        );
    }
    print!("{}", report.to_csv());
    Ok(())
}
