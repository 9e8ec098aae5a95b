//! Path distance `d_ω` induced by an edge metric.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::Result;
use crate::graph::{MeasuredGraph, MetricAssignment};

#[derive(Copy, Clone, PartialEq)]
struct State {
    cost: f64,
    vertex: usize,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source`. Unreachable vertices get `f64::INFINITY`.
/// `excluded_edge` is treated as absent.
pub fn single_source(g: &MeasuredGraph, w: &MetricAssignment, source: usize, excluded_edge: Option<usize>) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.num_vertices()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(State {
        cost: 0.0,
        vertex: source,
    });
    while let Some(State { cost, vertex }) = heap.pop() {
        if cost > dist[vertex] {
            continue;
        }
        for (next, e) in g.neighbors(vertex) {
            if Some(e) == excluded_edge {
                continue;
            }
            let cand = cost + w[e];
            if cand < dist[next] {
                dist[next] = cand;
                heap.push(State {
                    cost: cand,
                    vertex: next,
                });
            }
        }
    }
    dist
}

/// `d_ω(u, v)`, or `+∞` if `v` is unreachable once `excluded_edge` is removed.
pub fn shortest_distance(
    g: &MeasuredGraph,
    w: &MetricAssignment,
    u: usize,
    v: usize,
    excluded_edge: Option<usize>,
) -> Result<f64> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    w.check_for(g)?;
    if let Some(e) = excluded_edge {
        g.check_edge(e)?;
    }
    if u == v {
        return Ok(0.0);
    }
    Ok(single_source(g, w, u, excluded_edge)[v])
}

/// Full distance matrix, one Dijkstra per vertex.
pub fn all_pairs(g: &MeasuredGraph, w: &MetricAssignment) -> Vec<Vec<f64>> {
    (0..g.num_vertices()).map(|s| single_source(g, w, s, None)).collect()
}
