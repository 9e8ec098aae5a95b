//! Lazy random-walk kernels and the exact Wasserstein distance between them.

use crate::distance::single_source;
use crate::error::{Result, RicciError};
use crate::graph::{MeasuredGraph, MetricAssignment};
use crate::simplex::{LinearProgram, Relation};

/// `m_x^ε`: mass `1 - ε Deg(x)` at `x`, `ε m2(x,y)/m1(x)` at each neighbour `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityKernel {
    pub base_vertex: usize,
    pub epsilon: f64,
    /// `(vertex, mass)` pairs with positive mass, base vertex first.
    support: Vec<(usize, f64)>,
}

impl ProbabilityKernel {
    pub fn support(&self) -> &[(usize, f64)] {
        &self.support
    }

    pub fn mass(&self, v: usize) -> f64 {
        self.support.iter().find(|&&(y, _)| y == v).map_or(0.0, |&(_, m)| m)
    }

    pub fn total_mass(&self) -> f64 {
        self.support.iter().map(|&(_, m)| m).sum()
    }

    /// Point mass at `v`.
    pub fn dirac(v: usize) -> Self {
        ProbabilityKernel {
            base_vertex: v,
            epsilon: 0.0,
            support: vec![(v, 1.0)],
        }
    }
}

pub fn kernel(g: &MeasuredGraph, x: usize, epsilon: f64) -> Result<ProbabilityKernel> {
    g.check_vertex(x)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(RicciError::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let deg = g.deg_unchecked(x);
    if epsilon * deg >= 1.0 {
        return Err(RicciError::EpsilonTooLarge {
            vertex: g.vertex_id(x).to_string(),
            epsilon,
            limit: 1.0 / deg,
        });
    }
    let m1 = g.m1(x);
    let mut support = Vec::with_capacity(g.degree(x) + 1);
    support.push((x, 1.0 - epsilon * deg));
    support.extend(g.neighbors(x).map(|(y, e)| (y, epsilon * g.m2(e) / m1)));
    Ok(ProbabilityKernel {
        base_vertex: x,
        epsilon,
        support,
    })
}

/// Exact `W₁(μ, ν)` under the path metric `d_ω`, solved as a transport LP.
pub fn wasserstein(
    g: &MeasuredGraph,
    w: &MetricAssignment,
    mu: &ProbabilityKernel,
    nu: &ProbabilityKernel,
) -> Result<f64> {
    w.check_for(g)?;
    for &(v, _) in mu.support.iter().chain(&nu.support) {
        g.check_vertex(v)?;
    }
    let src = &mu.support;
    let dst = &nu.support;
    let (ns, nd) = (src.len(), dst.len());
    let mut cost = Vec::with_capacity(ns * nd);
    for &(u, _) in src {
        let dist = single_source(g, w, u, None);
        cost.extend(dst.iter().map(|&(v, _)| dist[v]));
    }
    let mut lp = LinearProgram::minimize(cost);
    for (i, &(_, m)) in src.iter().enumerate() {
        let terms: Vec<(usize, f64)> = (0..nd).map(|j| (i * nd + j, 1.0)).collect();
        lp.add_sparse(&terms, Relation::Eq, m);
    }
    for (j, &(_, m)) in dst.iter().enumerate() {
        let terms: Vec<(usize, f64)> = (0..ns).map(|i| (i * nd + j, 1.0)).collect();
        lp.add_sparse(&terms, Relation::Eq, m);
    }
    Ok(lp.solve()?.objective.max(0.0))
}
