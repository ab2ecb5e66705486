//! Fixtures shared by the criterion benches.

use rgreedy_core::{gen_random, RandomKind, WeightedMetricSpace};

/// Random graph instances of the given sizes, seeded by size.
pub fn graph_instances(sizes: &[usize]) -> Vec<(usize, WeightedMetricSpace)> {
    sizes
        .iter()
        .map(|&n| {
            (
                n,
                gen_random(n, RandomKind::RandomGraph, n as u64).expect("n >= 1"),
            )
        })
        .collect()
}

/// Euclidean instances of the given sizes, seeded by size.
pub fn square_instances(sizes: &[usize]) -> Vec<(usize, WeightedMetricSpace)> {
    sizes
        .iter()
        .map(|&n| {
            (
                n,
                gen_random(n, RandomKind::UnitSquarePoints, n as u64).expect("n >= 1"),
            )
        })
        .collect()
}
