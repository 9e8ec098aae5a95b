//! Edge curvatures on measured weighted graphs.

mod forman;
mod lly;
mod transport;

use serde::{Deserialize, Serialize};

pub(crate) use forman::forman_unchecked;
pub use forman::{forman_cell_edge, forman_edge, TwoCellComplex};
pub use lly::{default_epsilon, lly_edge, lly_edge_with, lly_limit_estimate, LipschitzConstraints};
pub use transport::{kernel, wasserstein, ProbabilityKernel};

use crate::error::Result;
use crate::graph::{MeasuredGraph, MetricAssignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureKind {
    Forman,
    Lly,
}

/// Per-edge curvature values aligned with a graph's edge order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureVector {
    pub kind: CurvatureKind,
    pub values: Vec<f64>,
}

impl CurvatureVector {
    pub fn forman(g: &MeasuredGraph, w: &MetricAssignment) -> Result<Self> {
        w.check_for(g)?;
        Ok(CurvatureVector {
            kind: CurvatureKind::Forman,
            values: (0..g.num_edges())
                .map(|e| forman_unchecked(g, w.as_slice(), e))
                .collect(),
        })
    }

    pub fn lly(g: &MeasuredGraph, w: &MetricAssignment) -> Result<Self> {
        Ok(CurvatureVector {
            kind: CurvatureKind::Lly,
            values: (0..g.num_edges()).map(|e| lly_edge(g, w, e)).collect::<Result<_>>()?,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `Δf(x) = (1/m1(x)) Σ_{y∼x} m2(x,y) (f(y) − f(x))`.
pub fn laplacian_apply(g: &MeasuredGraph, f: &[f64], x: usize) -> Result<f64> {
    g.check_vertex(x)?;
    if f.len() != g.num_vertices() {
        return Err(crate::RicciError::InvalidParameter(format!(
            "function has {} values for {} vertices",
            f.len(),
            g.num_vertices()
        )));
    }
    let sum: f64 = g.neighbors(x).map(|(y, e)| g.m2(e) * (f[y] - f[x])).sum();
    Ok(sum / g.m1(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_named_graph, GraphFamily, MeasureMode};

    #[test]
    fn laplacian_kills_constants() {
        let g = build_named_graph(
            GraphFamily::Complete(4),
            &MeasureMode::NormalizedDeg1(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
        )
        .unwrap();
        let f = vec![2.5; 4];
        for x in 0..4 {
            assert_eq!(laplacian_apply(&g, &f, x).unwrap(), 0.0);
        }
    }

    #[test]
    fn laplacian_linear_on_path() {
        let g = build_named_graph(GraphFamily::Path(2), &MeasureMode::Uniform).unwrap();
        assert_eq!(laplacian_apply(&g, &[0.0, 1.0, 2.0], 1).unwrap(), 0.0);
    }

    #[test]
    fn laplacian_star_indicator() {
        let g = build_named_graph(GraphFamily::Star(3), &MeasureMode::Uniform).unwrap();
        assert_eq!(laplacian_apply(&g, &[0.0, 0.0, 0.0, 1.0], 0).unwrap(), 1.0);
        assert!(laplacian_apply(&g, &[0.0; 3], 0).is_err());
    }
}
