//! Shared fixtures for the benchmarks.

use bis_core::generate::{gen_random, RightDegreeStyle};
use bis_core::BipartiteGraph;

pub const SEED: u64 = 20;

/// Random graph with left degree at most 5 and right degree at most 5.
pub fn bounded(n: usize) -> BipartiteGraph {
    gen_random(n, n, 5, RightDegreeStyle::Bounded(5), SEED).expect("valid parameters")
}

/// Random graph with left degree at most 5 and a few high-degree right hubs.
pub fn heavy(n: usize) -> BipartiteGraph {
    gen_random(n, n, 5, RightDegreeStyle::Heavy, SEED).expect("valid parameters")
}
