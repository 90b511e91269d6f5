//! Shared inputs for the benchmarks.

use dominance_core::{Component, MixtureModel, SampleSet};

/// Two samples of size `n` with a small location shift and rounded ties.
pub fn sample_pair(n: usize, seed: u64) -> (SampleSet, SampleSet) {
    let a = MixtureModel::gaussian(0.0, 1.0).expect("valid model");
    let b = MixtureModel::gaussian(0.2, 1.2).expect("valid model");
    let round = |s: SampleSet| SampleSet::new(s.values().iter().map(|v| (v * 1000.0).round() / 1000.0).collect());
    (
        round(a.sample(n, seed).expect("n > 0")).expect("finite"),
        round(b.sample(n, seed + 1).expect("n > 0")).expect("finite"),
    )
}

/// The bimodal-vs-unimodal pair used throughout the examples.
pub fn mixture_pair() -> (MixtureModel, MixtureModel) {
    let a = MixtureModel::gaussian(0.211325, 0.002).expect("valid model");
    let b = MixtureModel::new(vec![
        (Component::gaussian(0.21875, 0.002), 0.925),
        (Component::gaussian(0.04875, 0.002), 0.075),
    ])
    .expect("valid model");
    (a, b)
}
