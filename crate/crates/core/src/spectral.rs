//! Spectral analysis of the linear Forman flow `dω/dt = F ω`.
//!
//! `F` acts on edge weights. With `M = diag(√m2)` the matrix `F̃ = M F M⁻¹` is
//! symmetric, has non-negative off-diagonal entries and is irreducible on
//! connected graphs, so its top eigenvalue is simple with a positive
//! eigenvector. Everything about the long-time behaviour of the flow follows
//! from that eigenpair.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, RicciError};
use crate::graph::{MeasuredGraph, MetricAssignment};
use crate::jacobi::symmetric_eigen;

pub const DEFAULT_TOL_ZERO: f64 = 1e-9;
/// Minimum separation between the two largest eigenvalues.
pub const GAP_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct FlowMatrix {
    pub f: DMatrix<f64>,
    /// Diagonal of `M`, i.e. `√m2(e_i)`.
    pub m_sqrt: DVector<f64>,
    pub ftilde: DMatrix<f64>,
}

impl FlowMatrix {
    pub fn dim(&self) -> usize {
        self.f.nrows()
    }
}

pub fn build_flow_matrix(g: &MeasuredGraph) -> FlowMatrix {
    let n = g.num_edges();
    let mut f = DMatrix::zeros(n, n);
    let mut ft = DMatrix::zeros(n, n);
    for (i, e) in g.edges().iter().enumerate() {
        let d = -(e.m2 / g.m1(e.u) + e.m2 / g.m1(e.v));
        f[(i, i)] = d;
        ft[(i, i)] = d;
        for x in [e.u, e.v] {
            for &j in g.incident_edges(x) {
                if j != i {
                    f[(i, j)] = g.m2(j) / g.m1(x);
                    ft[(i, j)] = (e.m2 * g.m2(j)).sqrt() / g.m1(x);
                }
            }
        }
    }
    let ftilde = (&ft + ft.transpose()) * 0.5;
    let m_sqrt = DVector::from_iterator(n, (0..n).map(|i| g.m2(i).sqrt()));
    FlowMatrix { f, m_sqrt, ftilde }
}

/// Eigenpairs of `F̃` in ascending order; the last column is the Perron vector.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn perron_vector(&self) -> DVector<f64> {
        self.eigenvectors.column(self.dim() - 1).into_owned()
    }

    /// `λ_n − λ_{n−1}`, or `None` for a single edge.
    pub fn spectral_gap(&self) -> Option<f64> {
        let n = self.dim();
        (n > 1).then(|| self.eigenvalues[n - 1] - self.eigenvalues[n - 2])
    }
}

pub fn eigendecompose(fm: &FlowMatrix) -> Result<SpectralData> {
    perron_decompose(&fm.ftilde)
}

/// Full eigendecomposition of a symmetric irreducible matrix with
/// non-negative off-diagonal entries, with the top eigenvector sign-fixed.
pub fn perron_decompose(a: &DMatrix<f64>) -> Result<SpectralData> {
    let eig = symmetric_eigen(a)?;
    let n = eig.eigenvalues.len();
    if n == 0 {
        return Err(RicciError::InvalidParameter("empty matrix".into()));
    }
    let mut sd = SpectralData {
        eigenvalues: eig.eigenvalues,
        eigenvectors: eig.eigenvectors,
    };
    if let Some(gap) = sd.spectral_gap() {
        if gap <= GAP_TOL {
            return Err(RicciError::DegenerateSpectrum { gap });
        }
    }
    let mut col = sd.eigenvectors.column_mut(n - 1);
    let pivot = col
        .iter()
        .copied()
        .fold(0.0_f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if pivot < 0.0 {
        col.neg_mut();
    }
    for (index, &value) in col.iter().enumerate() {
        if value <= 0.0 {
            return Err(RicciError::PerronVectorNotPositive { index, value });
        }
    }
    Ok(sd)
}

/// `c[(i, l)] = c_i(e_l)`, so that `ω(t, e_l) = Σ_i c_i(e_l) e^{λ_i t}`.
pub fn flow_coefficients(sd: &SpectralData, fm: &FlowMatrix, w0: &MetricAssignment) -> Result<DMatrix<f64>> {
    let n = sd.dim();
    if w0.len() != n {
        return Err(RicciError::MetricLength {
            expected: n,
            found: w0.len(),
        });
    }
    let p = &sd.eigenvectors;
    let mw0 = DVector::from_iterator(n, (0..n).map(|j| w0[j] * fm.m_sqrt[j]));
    let proj = p.transpose() * mw0;
    Ok(DMatrix::from_fn(n, n, |i, l| p[(l, i)] * proj[i] / fm.m_sqrt[l]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceClass {
    /// Weights decay to zero.
    Vanishing,
    /// Weights converge to a positive limit.
    ConstantMetric,
    /// Weights grow without bound.
    Divergent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub classification: ConvergenceClass,
    pub lambda_max: f64,
    pub limiting_curvature: f64,
    /// Aligned with edge order; positive and summing to 1.
    pub limiting_normalized_metric: Vec<f64>,
    /// `c_n(e)`, reported only in the constant-metric case.
    pub limiting_weights: Option<Vec<f64>>,
    pub bounds: CurvatureBounds,
}

pub fn classify_lambda(lambda_max: f64, tol_zero: f64) -> ConvergenceClass {
    if lambda_max < -tol_zero {
        ConvergenceClass::Vanishing
    } else if lambda_max > tol_zero {
        ConvergenceClass::Divergent
    } else {
        ConvergenceClass::ConstantMetric
    }
}

/// `(p_n(e)/√m2(e))` normalised to sum 1.
pub fn limiting_normalized_metric(sd: &SpectralData, fm: &FlowMatrix) -> Vec<f64> {
    let p = sd.perron_vector();
    let raw: Vec<f64> = p.iter().zip(fm.m_sqrt.iter()).map(|(a, m)| a / m).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

pub fn classify_convergence(g: &MeasuredGraph, w0: &MetricAssignment, tol_zero: f64) -> Result<ConvergenceReport> {
    w0.check_for(g)?;
    if !(tol_zero >= 0.0 && tol_zero.is_finite()) {
        return Err(RicciError::InvalidParameter(format!(
            "tol_zero must be non-negative, got {tol_zero}"
        )));
    }
    let fm = build_flow_matrix(g);
    let sd = eigendecompose(&fm)?;
    let lambda_max = sd.lambda_max();
    let classification = classify_lambda(lambda_max, tol_zero);
    let limiting_weights = if classification == ConvergenceClass::ConstantMetric {
        let c = flow_coefficients(&sd, &fm, w0)?;
        let n = sd.dim();
        Some((0..n).map(|l| c[(n - 1, l)]).collect())
    } else {
        None
    };
    Ok(ConvergenceReport {
        classification,
        lambda_max,
        limiting_curvature: -lambda_max,
        limiting_normalized_metric: limiting_normalized_metric(&sd, &fm),
        limiting_weights,
        bounds: curvature_bounds(g),
    })
}

/// Gerschgorin bracket for the limiting curvature `−λ_max(F̃)`.
///
/// `upper = min_e D(e)` and `lower = min_e (D(e) − R(e))`, where
/// `D(e) = m2(e)/m1(u) + m2(e)/m1(v)` and `R(e)` is the off-diagonal row sum
/// of `F̃`.
pub fn curvature_bounds(g: &MeasuredGraph) -> CurvatureBounds {
    let mut lower = f64::INFINITY;
    let mut upper = f64::INFINITY;
    for (i, e) in g.edges().iter().enumerate() {
        let d = e.m2 / g.m1(e.u) + e.m2 / g.m1(e.v);
        let mut r = 0.0;
        for x in [e.u, e.v] {
            for &j in g.incident_edges(x) {
                if j != i {
                    r += (e.m2 * g.m2(j)).sqrt() / g.m1(x);
                }
            }
        }
        lower = lower.min(d - r);
        upper = upper.min(d);
    }
    CurvatureBounds { lower, upper }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseSolution {
    /// Largest eigenvalue of `F̃ + diag(κ)`.
    pub lambda_max: f64,
    /// Normalised metric realising the target, if one exists.
    pub metric: Option<MetricAssignment>,
}

/// Looks for a positive metric whose Forman curvature is `kappa`.
pub fn inverse_curvature(g: &MeasuredGraph, kappa: &[f64], tol: f64) -> Result<InverseSolution> {
    let n = g.num_edges();
    if kappa.len() != n {
        return Err(RicciError::MetricLength {
            expected: n,
            found: kappa.len(),
        });
    }
    if let Some(bad) = kappa.iter().position(|k| !k.is_finite()) {
        return Err(RicciError::InvalidParameter(format!(
            "target curvature of edge {bad} is not finite"
        )));
    }
    let fm = build_flow_matrix(g);
    let mut k = fm.ftilde.clone();
    for (i, &kv) in kappa.iter().enumerate() {
        k[(i, i)] += kv;
    }
    let sd = perron_decompose(&k)?;
    let lambda_max = sd.lambda_max();
    if lambda_max.abs() > tol {
        return Ok(InverseSolution {
            lambda_max,
            metric: None,
        });
    }
    let w = MetricAssignment::new(limiting_normalized_metric(&sd, &fm))?;
    Ok(InverseSolution {
        lambda_max,
        metric: Some(w),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeCase {
    /// Maximum degree at most 2: weights vanish, curvature tends to a positive value.
    PathCase,
    /// The star with three leaves: weights and curvature settle, curvature at 0.
    K13Case,
    /// Any other tree: weights blow up, curvature tends to a negative value.
    BigDegreeCase,
}

impl TreeCase {
    pub fn expected_class(self) -> ConvergenceClass {
        match self {
            TreeCase::PathCase => ConvergenceClass::Vanishing,
            TreeCase::K13Case => ConvergenceClass::ConstantMetric,
            TreeCase::BigDegreeCase => ConvergenceClass::Divergent,
        }
    }
}

pub fn classify_tree_uniform(g: &MeasuredGraph) -> Result<TreeCase> {
    if !g.is_tree() {
        return Err(RicciError::NotATree);
    }
    if !g.has_uniform_measure() {
        return Err(RicciError::NotUniformMeasure);
    }
    let mut degrees: Vec<usize> = (0..g.num_vertices()).map(|x| g.degree(x)).collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    Ok(if degrees[0] <= 2 {
        TreeCase::PathCase
    } else if degrees == [3, 1, 1, 1] {
        TreeCase::K13Case
    } else {
        TreeCase::BigDegreeCase
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::forman_edge;
    use crate::graph::{build_named_graph, GraphFamily, MeasureMode};
    use std::f64::consts::PI;

    fn uniform(family: GraphFamily) -> MeasuredGraph {
        build_named_graph(family, &MeasureMode::Uniform).unwrap()
    }

    #[test]
    fn p3_matrix_and_spectrum() {
        let fm = build_flow_matrix(&uniform(GraphFamily::Path(2)));
        assert_eq!(fm.f, DMatrix::from_row_slice(2, 2, &[-2.0, 1.0, 1.0, -2.0]));
        let sd = eigendecompose(&fm).unwrap();
        assert!((sd.eigenvalues[0] + 3.0).abs() < 1e-14);
        assert!((sd.eigenvalues[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn star_matrix_is_minus_three_plus_ones() {
        for n in 2..8 {
            let fm = build_flow_matrix(&uniform(GraphFamily::Star(n)));
            let expect = DMatrix::from_element(n, n, 1.0) - DMatrix::identity(n, n) * 3.0;
            assert_eq!(fm.f, expect);
            let sd = eigendecompose(&fm).unwrap();
            assert!((sd.lambda_max() - (n as f64 - 3.0)).abs() < 1e-12);
            let p = sd.perron_vector();
            for v in p.iter() {
                assert!((v - 1.0 / (n as f64).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normalized_path_entries() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let g = build_named_graph(GraphFamily::Path(4), &MeasureMode::NormalizedDeg1(a.to_vec())).unwrap();
        let fm = build_flow_matrix(&g);
        for i in 1..3 {
            let d = -(a[i] / (a[i - 1] + a[i]) + a[i] / (a[i] + a[i + 1]));
            assert!((fm.f[(i, i)] - d).abs() < 1e-15);
        }
        for i in 0..3 {
            let off = (a[i] * a[i + 1]).sqrt() / (a[i] + a[i + 1]);
            assert!((fm.ftilde[(i, i + 1)] - off).abs() < 1e-15);
        }
    }

    #[test]
    fn path_lambda_max() {
        for n in 1..12 {
            let sd = eigendecompose(&build_flow_matrix(&uniform(GraphFamily::Path(n)))).unwrap();
            let expect = -2.0 + 2.0 * (PI / (n as f64 + 1.0)).cos();
            assert!((sd.lambda_max() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn k13_coefficients_average_initial_weights() {
        let fm = build_flow_matrix(&uniform(GraphFamily::Star(3)));
        let sd = eigendecompose(&fm).unwrap();
        let w0 = MetricAssignment::new(vec![1.0, 2.0, 6.0]).unwrap();
        let c = flow_coefficients(&sd, &fm, &w0).unwrap();
        for l in 0..3 {
            assert!((c[(2, l)] - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn perron_initial_data_has_single_mode() {
        let g = build_named_graph(
            GraphFamily::Cycle(5),
            &MeasureMode::NormalizedDeg1(vec![1.0, 2.0, 3.0, 1.0, 2.0]),
        )
        .unwrap();
        let fm = build_flow_matrix(&g);
        let sd = eigendecompose(&fm).unwrap();
        let w0 = MetricAssignment::new(limiting_normalized_metric(&sd, &fm)).unwrap();
        let c = flow_coefficients(&sd, &fm, &w0).unwrap();
        for i in 0..4 {
            for l in 0..5 {
                assert!(c[(i, l)].abs() < 1e-14);
            }
        }
    }

    #[test]
    fn classification_examples() {
        let w = |n| MetricAssignment::constant(n, 1.0).unwrap();
        let r = classify_convergence(&uniform(GraphFamily::Path(5)), &w(5), DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(r.classification, ConvergenceClass::Vanishing);
        assert!((r.limiting_curvature - 2.0 * (1.0 - (PI / 6.0).cos())).abs() < 1e-12);
        let r = classify_convergence(&uniform(GraphFamily::Star(3)), &w(3), DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(r.classification, ConvergenceClass::ConstantMetric);
        assert!(r.limiting_weights.is_some());
        let r = classify_convergence(&uniform(GraphFamily::Star(6)), &w(6), DEFAULT_TOL_ZERO).unwrap();
        assert_eq!(r.classification, ConvergenceClass::Divergent);
        assert!((r.limiting_curvature + 3.0).abs() < 1e-12);
    }

    #[test]
    fn bounds_examples() {
        let b = curvature_bounds(&uniform(GraphFamily::Path(2)));
        assert_eq!((b.lower, b.upper), (1.0, 2.0));
        let b = curvature_bounds(&uniform(GraphFamily::Star(3)));
        assert!(b.lower <= 0.0 && b.upper >= 0.0);
        let b = curvature_bounds(&uniform(GraphFamily::Path(1)));
        assert_eq!((b.lower, b.upper), (2.0, 2.0));
        // the bracket must hold on a path with more than two edges
        let g = uniform(GraphFamily::Path(3));
        let b = curvature_bounds(&g);
        let lm = eigendecompose(&build_flow_matrix(&g)).unwrap().lambda_max();
        assert!(b.lower <= -lm && -lm <= b.upper);
    }

    #[test]
    fn inverse_examples() {
        let s = inverse_curvature(&uniform(GraphFamily::Star(3)), &[0.0; 3], 1e-9).unwrap();
        let w = s.metric.unwrap();
        for e in 0..3 {
            assert!((w[e] - 1.0 / 3.0).abs() < 1e-12);
        }
        let p3 = uniform(GraphFamily::Path(2));
        let s = inverse_curvature(&p3, &[1.0, 1.0], 1e-9).unwrap();
        let w = s.metric.unwrap();
        assert!((w[0] - 0.5).abs() < 1e-12 && (w[1] - 0.5).abs() < 1e-12);
        let s = inverse_curvature(&p3, &[0.0, 0.0], 1e-9).unwrap();
        assert!(s.metric.is_none());
        assert!((s.lambda_max + 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_realises_target() {
        let g = build_named_graph(
            GraphFamily::Star(4),
            &MeasureMode::NormalizedDeg1(vec![1.0, 2.0, 0.5, 3.0]),
        )
        .unwrap();
        let w = MetricAssignment::new(vec![0.4, 1.0, 2.5, 0.8]).unwrap();
        let kappa: Vec<f64> = (0..4).map(|e| forman_edge(&g, &w, e).unwrap()).collect();
        let s = inverse_curvature(&g, &kappa, 1e-9).unwrap();
        let r = s.metric.unwrap();
        for e in 0..4 {
            assert!((forman_edge(&g, &r, e).unwrap() - kappa[e]).abs() < 1e-9);
        }
    }

    #[test]
    fn tree_cases() {
        assert_eq!(
            classify_tree_uniform(&uniform(GraphFamily::Path(10))).unwrap(),
            TreeCase::PathCase
        );
        assert_eq!(
            classify_tree_uniform(&uniform(GraphFamily::Star(3))).unwrap(),
            TreeCase::K13Case
        );
        let spider = MeasuredGraph::uniform(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        assert_eq!(classify_tree_uniform(&spider).unwrap(), TreeCase::BigDegreeCase);
        let b = spider.line_graph_adjacency();
        let lm = symmetric_eigen(&b).unwrap().eigenvalues[3];
        assert!(lm > 2.17);
        assert_eq!(
            classify_tree_uniform(&uniform(GraphFamily::Cycle(4))),
            Err(RicciError::NotATree)
        );
        let g = build_named_graph(GraphFamily::Path(2), &MeasureMode::NormalizedDeg1(vec![1.0, 1.0])).unwrap();
        assert_eq!(classify_tree_uniform(&g), Err(RicciError::NotUniformMeasure));
    }
}
