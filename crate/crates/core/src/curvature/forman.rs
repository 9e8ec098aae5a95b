use std::collections::HashSet;

use crate::error::{Result, RicciError};
use crate::graph::{MeasuredGraph, MetricAssignment};

/// Weighted Forman curvature of edge `e` in the face-free graph.
///
/// `F(e) = m2(e)/m1(u) + m2(e)/m1(v) - Σ_{e_u∼u, e_u≠e} (m2(e_u)/m1(u))(ω(e_u)/ω(e)) - (same at v)`
pub fn forman_edge(g: &MeasuredGraph, w: &MetricAssignment, e: usize) -> Result<f64> {
    g.check_edge(e)?;
    w.check_for(g)?;
    Ok(forman_unchecked(g, w.as_slice(), e))
}

pub(crate) fn forman_unchecked(g: &MeasuredGraph, w: &[f64], e: usize) -> f64 {
    let edge = g.edge(e);
    let mut value = 0.0;
    for x in [edge.u, edge.v] {
        let m1 = g.m1(x);
        value += edge.m2 / m1;
        for &k in g.incident_edges(x) {
            if k != e {
                value -= g.m2(k) / m1 * (w[k] / w[e]);
            }
        }
    }
    value
}

/// A 2-dimensional cell complex: the base graph plus weighted 2-cells on cycles.
#[derive(Debug, Clone)]
pub struct TwoCellComplex {
    base: MeasuredGraph,
    cells: Vec<Cell>,
}

#[derive(Debug, Clone)]
struct Cell {
    cycle: Vec<usize>,
    edges: Vec<usize>,
    m3: f64,
}

impl TwoCellComplex {
    /// `cells` are `(cycle, m3)` with the cycle given as a closed vertex sequence
    /// (first vertex not repeated at the end).
    pub fn new(base: MeasuredGraph, cells: Vec<(Vec<usize>, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(cells.len());
        for (cycle, m3) in cells {
            let n = cycle.len();
            if n < 3 {
                return Err(RicciError::InvalidGraph(
                    "2-cell cycle needs at least 3 vertices".into(),
                ));
            }
            if !(m3 > 0.0 && m3.is_finite()) {
                return Err(RicciError::InvalidGraph(format!(
                    "2-cell measure must be positive, got {m3}"
                )));
            }
            let distinct: HashSet<_> = cycle.iter().collect();
            if distinct.len() != n {
                return Err(RicciError::InvalidGraph("2-cell cycle is not injective".into()));
            }
            for &v in &cycle {
                base.check_vertex(v)?;
            }
            let mut edges = Vec::with_capacity(n);
            for i in 0..n {
                let (a, b) = (cycle[i], cycle[(i + 1) % n]);
                let e = base.edge_between(a, b).ok_or_else(|| {
                    RicciError::InvalidGraph(format!(
                        "2-cell uses non-edge {}-{}",
                        base.vertex_id(a),
                        base.vertex_id(b)
                    ))
                })?;
                edges.push(e);
            }
            if !seen.insert(canonical_cycle(&cycle)) {
                return Err(RicciError::InvalidGraph("duplicate 2-cell".into()));
            }
            out.push(Cell { cycle, edges, m3 });
        }
        Ok(TwoCellComplex { base, cells: out })
    }

    pub fn base(&self) -> &MeasuredGraph {
        &self.base
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_cycle(&self, i: usize) -> &[usize] {
        &self.cells[i].cycle
    }
}

/// Rotation/reflection invariant key of a cycle.
fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let mut best: Option<Vec<usize>> = None;
    for start in 0..n {
        for dir in [1isize, -1] {
            let seq: Vec<usize> = (0..n)
                .map(|k| cycle[(start as isize + dir * k as isize).rem_euclid(n as isize) as usize])
                .collect();
            if best.as_ref().is_none_or(|b| seq < *b) {
                best = Some(seq);
            }
        }
    }
    best.unwrap_or_default()
}

/// Weighted Forman curvature of `e` in a 2-cell complex.
///
/// ```text
/// F(e) = Σ_{u≺e} m2(e)/m1(u) + Σ_{f≻e} m3(f)/m2(e)
///        - Σ_{e'≠e} ω(e')/ω(e) · | Σ_{u≺e,e'} m2(e')/m1(u) - Σ_{f≻e,e'} m3(f)/m2(e) |
/// ```
pub fn forman_cell_edge(k: &TwoCellComplex, w: &MetricAssignment, e: usize) -> Result<f64> {
    let g = &k.base;
    g.check_edge(e)?;
    w.check_for(g)?;
    let edge = g.edge(e);
    let m2e = edge.m2;
    let faces: Vec<&Cell> = k.cells.iter().filter(|c| c.edges.contains(&e)).collect();
    if faces.is_empty() {
        // no face contains e: every face term vanishes
        return Ok(forman_unchecked(g, w.as_slice(), e));
    }

    let mut value = m2e / g.m1(edge.u) + m2e / g.m1(edge.v);
    value += faces.iter().map(|c| c.m3).sum::<f64>() / m2e;

    for other in 0..g.num_edges() {
        if other == e {
            continue;
        }
        let vertex_term = g
            .edge(e)
            .shared_vertex(g.edge(other))
            .map_or(0.0, |x| g.m2(other) / g.m1(x));
        let face_term: f64 = faces
            .iter()
            .filter(|c| c.edges.contains(&other))
            .map(|c| c.m3)
            .sum::<f64>()
            / m2e;
        if vertex_term != 0.0 || face_term != 0.0 {
            value -= w[other] / w[e] * (vertex_term - face_term).abs();
        }
    }
    Ok(value)
}
