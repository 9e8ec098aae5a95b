//! Lin-Lu-Yau curvature.
//!
//! [`lly_edge`] evaluates the limit-free characterisation
//!
//! ```text
//! κ(x, y) = inf { (Δf(x) − Δf(y)) / d(x, y) : f 1-Lipschitz, f(y) − f(x) = d(x, y) }
//! ```
//!
//! as an exact linear program. Lipschitz continuity for the path metric is
//! enforced edge by edge, which is equivalent because `d_ω` is the infimum over
//! paths. [`lly_limit_estimate`] evaluates `(1 − W(m_x^ε, m_y^ε)/d)/ε` directly
//! from the transport problem and serves as an independent check.

use crate::distance::single_source;
use crate::error::{Result, RicciError};
use crate::graph::{MeasuredGraph, MetricAssignment};
use crate::simplex::{LinearProgram, Relation};
use crate::surgery::SURGERY_TOL;

use super::transport::{kernel, wasserstein};

/// Constraint set used for the 1-Lipschitz condition in the LLY program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzConstraints {
    /// `|f(a) − f(b)| ≤ ω(a,b)` on every edge.
    EdgeWise,
    /// `|f(a) − f(b)| ≤ d_ω(a,b)` on every vertex pair.
    AllPairs,
}

pub fn lly_edge(g: &MeasuredGraph, w: &MetricAssignment, e: usize) -> Result<f64> {
    lly_edge_with(g, w, e, LipschitzConstraints::EdgeWise)
}

pub fn lly_edge_with(
    g: &MeasuredGraph,
    w: &MetricAssignment,
    e: usize,
    constraints: LipschitzConstraints,
) -> Result<f64> {
    g.check_edge(e)?;
    w.check_for(g)?;
    let edge = *g.edge(e);
    let (x, y) = (edge.u, edge.v);
    let alt = single_source(g, w, x, Some(e))[y];
    if w[e] >= alt - SURGERY_TOL {
        return Err(RicciError::DegenerateMetric {
            edge: e,
            weight: w[e],
            alternative: alt,
        });
    }
    let d = w[e];
    let n = g.num_vertices();

    // f(x) = 0 and f(y) = d are fixed; the remaining values are shifted by
    // `shift` (≥ every distance from x) so that the LP variables are ≥ 0.
    let shift: f64 = w.total();
    let mut var = vec![usize::MAX; n];
    let mut free = Vec::with_capacity(n - 2);
    for v in 0..n {
        if v != x && v != y {
            var[v] = free.len();
            free.push(v);
        }
    }
    let fixed = |v: usize| -> Option<f64> {
        if v == x {
            Some(0.0)
        } else if v == y {
            Some(d)
        } else {
            None
        }
    };

    // Δf(x) − Δf(y) as a linear form in f.
    let mut coef = vec![0.0; n];
    for (base, sign) in [(x, 1.0), (y, -1.0)] {
        let m1 = g.m1(base);
        for (z, k) in g.neighbors(base) {
            let a = sign * g.m2(k) / m1;
            coef[z] += a;
            coef[base] -= a;
        }
    }
    let mut constant = 0.0;
    let mut objective = vec![0.0; free.len()];
    for v in 0..n {
        match fixed(v) {
            Some(val) => constant += coef[v] * val,
            None => {
                objective[var[v]] = coef[v];
                constant -= coef[v] * shift;
            }
        }
    }

    let mut lp = LinearProgram::minimize(objective);
    let add_pair = |lp: &mut LinearProgram, a: usize, b: usize, bound: f64| {
        // |f(a) − f(b)| ≤ bound
        match (fixed(a), fixed(b)) {
            (None, None) => {
                lp.add_sparse(&[(var[a], 1.0), (var[b], -1.0)], Relation::Le, bound);
                lp.add_sparse(&[(var[b], 1.0), (var[a], -1.0)], Relation::Le, bound);
            }
            (None, Some(c)) | (Some(c), None) => {
                let v = if fixed(a).is_none() { a } else { b };
                // g(v) = f(v) + shift ∈ [c + shift − bound, c + shift + bound]
                lp.add_sparse(&[(var[v], 1.0)], Relation::Le, c + shift + bound);
                lp.add_sparse(&[(var[v], 1.0)], Relation::Ge, c + shift - bound);
            }
            (Some(_), Some(_)) => {}
        }
    };
    match constraints {
        LipschitzConstraints::EdgeWise => {
            for (k, ed) in g.edges().iter().enumerate() {
                add_pair(&mut lp, ed.u, ed.v, w[k]);
            }
        }
        LipschitzConstraints::AllPairs => {
            for a in 0..n {
                let dist = single_source(g, w, a, None);
                for b in a + 1..n {
                    add_pair(&mut lp, a, b, dist[b]);
                }
            }
        }
    }

    if free.is_empty() {
        return Ok(constant / d);
    }
    let sol = lp.solve()?;
    Ok((sol.objective + constant) / d)
}

/// `(1 − W(m_x^ε, m_y^ε) / d_ω(x, y)) / ε` for edge `e = (x, y)`.
pub fn lly_limit_estimate(g: &MeasuredGraph, w: &MetricAssignment, e: usize, epsilon: f64) -> Result<f64> {
    g.check_edge(e)?;
    w.check_for(g)?;
    let edge = g.edge(e);
    let mu = kernel(g, edge.u, epsilon)?;
    let nu = kernel(g, edge.v, epsilon)?;
    let d = single_source(g, w, edge.u, None)[edge.v];
    let wd = wasserstein(g, w, &mu, &nu)?;
    Ok((1.0 - wd / d) / epsilon)
}

/// `ε = 1 / (4 max_x Deg(x))`, inside the range where the estimate is exact.
pub fn default_epsilon(g: &MeasuredGraph) -> f64 {
    1.0 / (4.0 * g.max_deg_measure())
}
