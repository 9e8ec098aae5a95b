#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ricci::generators::{random_connected_graph, random_measured_graph, random_tree};
use ricci::{MeasuredGraph, MetricAssignment};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_metric<R: Rng>(rng: &mut R, num_edges: usize, lo: f64, hi: f64) -> MetricAssignment {
    MetricAssignment::new((0..num_edges).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
}

/// Random tree with random measures in [0.5, 2).
pub fn weighted_tree<R: Rng>(rng: &mut R, num_vertices: usize) -> MeasuredGraph {
    let edges = random_tree(rng, num_vertices);
    random_measured_graph(rng, num_vertices, &edges, (0.5, 2.0)).unwrap()
}

/// Random connected graph with at least one cycle and random measures in [0.5, 2).
pub fn weighted_cyclic_graph<R: Rng>(rng: &mut R, num_vertices: usize) -> MeasuredGraph {
    let max_extra = num_vertices * (num_vertices - 1) / 2 - (num_vertices - 1);
    let extra = rng.gen_range(1..=max_extra.clamp(1, 2 * num_vertices));
    let edges = random_connected_graph(rng, num_vertices, extra);
    random_measured_graph(rng, num_vertices, &edges, (0.5, 2.0)).unwrap()
}

/// Weights in [1, 1.9): every path of two or more edges is longer than any
/// single edge, so the metric is non-degenerate on every graph.
pub fn nondegenerate_metric<R: Rng>(rng: &mut R, num_edges: usize) -> MetricAssignment {
    random_metric(rng, num_edges, 1.0, 1.9)
}
