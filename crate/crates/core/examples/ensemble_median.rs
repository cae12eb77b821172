//! Aggregates noisy samples of a planted graph and measures how close the
//! median gets.
//!
//!     cargo run --example ensemble_median

use cdi::ensemble::{l1_distance, median_graph};
use cdi::synth::{planted_ensemble, random_graph, NoiseModel};
use cdi::{quantize, WeightScale};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cdi::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let planted = random_graph(&mut rng, 12, 0.3, &[-1.0, -0.6, 0.6, 1.0]);
    let ensemble = planted_ensemble(&planted, 30, NoiseModel::default(), 11)?;
    let median = median_graph(&ensemble);

    let mean_sample: f64 = ensemble
        .samples()
        .iter()
        .map(|s| l1_distance(s, &planted))
        .sum::<cdi::Result<f64>>()?
        / ensemble.len() as f64;
    println!("planted graph: {} edges", planted.edge_count());
    println!("mean sample distance to planted: {mean_sample:.2}");
    println!("median distance to planted:      {:.2}", l1_distance(&median, &planted)?);

    let q = quantize(&median, &WeightScale::default());
    println!("quantized median: {} edges, distance {:.2}", q.edge_count(), l1_distance(&q, &planted)?);
    Ok(())
}
