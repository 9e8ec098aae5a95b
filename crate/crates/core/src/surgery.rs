//! Edge surgery: removal of edges that stopped being the unique shortest path
//! between their endpoints.

use serde::{Deserialize, Serialize};

use crate::distance::single_source;
use crate::error::{Result, RicciError};
use crate::graph::{MeasuredGraph, MetricAssignment};

/// Edges with `ω(e) ≥ d_alt(e) - SURGERY_TOL` are considered degenerate.
pub const SURGERY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgeryEvent {
    pub time: f64,
    /// Stable label of the removed edge (see [`MeasuredGraph::edge_label`]).
    pub removed_edge: String,
    pub edge_weight: f64,
    pub alternative_distance: f64,
}

/// Length of the shortest path between the endpoints of `e` that avoids `e`.
pub fn alternative_distance(g: &MeasuredGraph, w: &MetricAssignment, e: usize) -> f64 {
    let edge = g.edge(e);
    single_source(g, w, edge.u, Some(e))[edge.v]
}

/// Every edge that is not the strict unique shortest path between its endpoints,
/// in ascending index order.
pub fn surgery_scan(g: &MeasuredGraph, w: &MetricAssignment) -> Result<Vec<usize>> {
    w.check_for(g)?;
    Ok((0..g.num_edges())
        .filter(|&e| w[e] >= alternative_distance(g, w, e) - SURGERY_TOL)
        .collect())
}

#[derive(Debug, Clone)]
pub struct SurgeryOutcome {
    pub graph: MeasuredGraph,
    pub metric: MetricAssignment,
    pub events: Vec<SurgeryEvent>,
}

/// Removes violating edges one at a time, lowest index first, re-scanning after
/// each removal, until the metric is non-degenerate.
pub fn apply_surgery(g: &MeasuredGraph, w: &MetricAssignment, time: f64) -> Result<SurgeryOutcome> {
    let mut graph = g.clone();
    let mut metric = w.clone();
    let mut events = Vec::new();
    loop {
        let violating = surgery_scan(&graph, &metric)?;
        let Some(&e) = violating.first() else {
            break;
        };
        let alt = alternative_distance(&graph, &metric, e);
        let label = graph.edge_label(e);
        let reduced = graph
            .without_edge(e)
            .ok_or_else(|| RicciError::DisconnectedAfterSurgery {
                time,
                edge: label.clone(),
            })?;
        events.push(SurgeryEvent {
            time,
            removed_edge: label,
            edge_weight: metric[e],
            alternative_distance: alt,
        });
        metric = metric.without(e);
        graph = reduced;
    }
    Ok(SurgeryOutcome { graph, metric, events })
}
