//! Chunk-parallel Monte-Carlo that reproduces the sequential oracle bit for bit.

use isac_core::fading::{FadingModel, McAccumulator, McEstimate, McProblem};
use isac_core::numerics::RandomStream;
use rayon::prelude::*;

pub fn monte_carlo(
    model: FadingModel,
    mean_snr: f64,
    kappa: f64,
    prior_var: f64,
    n_samples: u64,
    stream: &RandomStream,
) -> isac_core::Result<McEstimate> {
    if n_samples == 0 {
        return Err(isac_core::Error::InvalidArgument("n_samples must be at least 1"));
    }
    let problem = McProblem { model, mean_snr, kappa, prior_var };
    let parts: Vec<McAccumulator> = (0..McProblem::chunk_count(n_samples))
        .into_par_iter()
        .map(|i| problem.chunk(stream, n_samples, i))
        .collect();
    let mut total = McAccumulator::default();
    for p in &parts {
        total.merge(p);
    }
    total.finish()
}
