//! Reference experiments: Forman/LLY flows on small stars, a degree-4 tree,
//! and paths and stars with `Deg ≡ 1`.
//!
//! All of these graphs are trees, where the Lin-Lu-Yau and Forman flows
//! coincide, so every run uses the exact spectral solution.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Result, RicciError};
use crate::flow::{forman_flow_exact, long_time_horizon, FlowTrajectory, FormanSolution};
use crate::graph::{MeasuredGraph, MetricAssignment};
use crate::spectral::{classify_convergence, ConvergenceClass, DEFAULT_TOL_ZERO};

/// Number of sample intervals on `[0, t*]`.
pub const SAMPLE_INTERVALS: usize = 1000;
pub const FIG2_DELTAS: [f64; 4] = [0.0, 0.01, 0.02, 0.03];
pub const SYMMETRY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2,
    Ex42,
    Ex43,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Fig1a,
        Figure::Fig1b,
        Figure::Fig1c,
        Figure::Fig1d,
        Figure::Fig2,
        Figure::Ex42,
        Figure::Ex43,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig1c => "fig1c",
            Figure::Fig1d => "fig1d",
            Figure::Fig2 => "fig2",
            Figure::Ex42 => "ex42",
            Figure::Ex43 => "ex43",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Figure::Fig1a => "K_{1,3}, uniform measure, initial weights (1,2,3)",
            Figure::Fig1b => "K_{1,3}, normalized measure with m2 = (1,2,3), unit initial weights",
            Figure::Fig1c => "K_{1,6}, uniform measure, initial weights (1,...,6)",
            Figure::Fig1d => "K_{1,6}, normalized measure with m2 = 1, unit initial weights",
            Figure::Fig2 => "8-vertex tree of maximum degree 4, uniform measure, initial weights 1/7 +- delta",
            Figure::Ex42 => "path with 5 edges, Deg = 1, m2 = (1,...,5), unit initial weights",
            Figure::Ex43 => "star with 5 edges, Deg = 1, m2 = (1,...,5), unit initial weights",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Figure {
    type Err = RicciError;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL.into_iter().find(|f| f.as_str() == s).ok_or_else(|| {
            RicciError::InvalidParameter(format!(
                "unknown figure `{s}` (expected one of fig1a, fig1b, fig1c, fig1d, fig2, ex42, ex43)"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeValue {
    pub edge: String,
    pub value: f64,
}

fn per_edge(g: &MeasuredGraph, values: &[f64]) -> Vec<EdgeValue> {
    values
        .iter()
        .enumerate()
        .map(|(e, &value)| EdgeValue {
            edge: g.edge_label(e),
            value,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub name: String,
    pub classification: ConvergenceClass,
    pub lambda_max: f64,
    pub limiting_curvature: f64,
    pub horizon: f64,
    pub initial_weights: Vec<EdgeValue>,
    pub limiting_normalized_metric: Vec<EdgeValue>,
    /// Limits `c_n(e)` of the raw weights when they converge to a positive metric.
    pub limiting_weights: Option<Vec<EdgeValue>>,
    pub final_normalized_weights: Vec<EdgeValue>,
    pub final_curvature: Vec<EdgeValue>,
}

#[derive(Debug, Clone)]
pub struct ReproductionRun {
    pub summary: RunSummary,
    pub trajectory: FlowTrajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct Reproduction {
    pub figure: Figure,
    pub runs: Vec<ReproductionRun>,
    pub checks: Vec<Check>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Star with centre `1` and leaves `2..=n+1`.
pub fn labelled_star(m2: &[f64], normalized: bool) -> Result<MeasuredGraph> {
    let n = m2.len();
    let ids = (1..=n + 1).map(|i| i.to_string()).collect();
    let mut m1 = vec![1.0; n + 1];
    if normalized {
        m1[0] = m2.iter().sum();
        m1[1..].copy_from_slice(m2);
    }
    MeasuredGraph::new(ids, m1, (0..n).map(|i| (0, i + 1, m2[i])).collect())
}

/// Path `1 - 2 - ... - n+1` with `m1(x) = Σ` incident `m2`.
pub fn labelled_normalized_path(m2: &[f64]) -> Result<MeasuredGraph> {
    let n = m2.len();
    let ids = (1..=n + 1).map(|i| i.to_string()).collect();
    let m1 = (0..=n)
        .map(|x| {
            let left = if x > 0 { m2[x - 1] } else { 0.0 };
            let right = if x < n { m2[x] } else { 0.0 };
            left + right
        })
        .collect();
    MeasuredGraph::new(ids, m1, (0..n).map(|i| (i, i + 1, m2[i])).collect())
}

/// The tree with edges 1-5, 2-5, 3-4, 4-5, 5-6, 6-7, 6-8 under uniform measures.
pub fn fig2_tree() -> Result<MeasuredGraph> {
    let vertices: Vec<(String, f64)> = (1..=8).map(|i| (i.to_string(), 1.0)).collect();
    let v: Vec<(&str, f64)> = vertices.iter().map(|(s, m)| (s.as_str(), *m)).collect();
    MeasuredGraph::from_labels(
        &v,
        &[
            ("1", "5", 1.0),
            ("2", "5", 1.0),
            ("3", "4", 1.0),
            ("4", "5", 1.0),
            ("5", "6", 1.0),
            ("6", "7", 1.0),
            ("6", "8", 1.0),
        ],
    )
}

/// `1/7 + δ` on even edge indices and `1/7 − δ` on odd ones.
pub fn fig2_initial_weights(delta: f64) -> Result<MetricAssignment> {
    MetricAssignment::new(
        (0..7)
            .map(|i| {
                if i % 2 == 0 {
                    1.0 / 7.0 + delta
                } else {
                    1.0 / 7.0 - delta
                }
            })
            .collect(),
    )
}

fn ramp(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64).collect()
}

pub fn run_case(name: &str, g: &MeasuredGraph, w0: &MetricAssignment) -> Result<ReproductionRun> {
    let report = classify_convergence(g, w0, DEFAULT_TOL_ZERO)?;
    let sol = FormanSolution::new(g, w0)?;
    let horizon = long_time_horizon(&sol.sd);
    let times: Vec<f64> = (0..=SAMPLE_INTERVALS)
        .map(|k| horizon * k as f64 / SAMPLE_INTERVALS as f64)
        .collect();
    let trajectory = forman_flow_exact(g, w0, &times)?;
    let last = trajectory.last();
    let summary = RunSummary {
        name: name.to_string(),
        classification: report.classification,
        lambda_max: report.lambda_max,
        limiting_curvature: report.limiting_curvature,
        horizon,
        initial_weights: per_edge(g, w0.as_slice()),
        limiting_normalized_metric: per_edge(g, &report.limiting_normalized_metric),
        limiting_weights: report.limiting_weights.as_deref().map(|w| per_edge(g, w)),
        final_normalized_weights: per_edge(g, last.weights.normalized().as_slice()),
        final_curvature: per_edge(g, &last.curvature.values),
    };
    Ok(ReproductionRun { summary, trajectory })
}

fn check(name: impl Into<String>, value: f64, passed: bool) -> Check {
    Check {
        name: name.into(),
        value,
        passed,
    }
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

fn class_check(run: &ReproductionRun, expected: ConvergenceClass) -> Check {
    check(
        format!("{}: classification {:?}", run.summary.name, expected).to_lowercase(),
        run.summary.lambda_max,
        run.summary.classification == expected,
    )
}

fn curvature_check(run: &ReproductionRun) -> Check {
    let k: Vec<f64> = run.summary.final_curvature.iter().map(|c| c.value).collect();
    let err = k
        .iter()
        .map(|v| (v - run.summary.limiting_curvature).abs())
        .fold(0.0, f64::max);
    check(
        format!("{}: final curvature equals -lambda_max", run.summary.name),
        err,
        err < SYMMETRY_TOL,
    )
}

pub fn reproduce(figure: Figure) -> Result<Reproduction> {
    let mut checks = Vec::new();
    let runs = match figure {
        Figure::Fig1a | Figure::Fig1c => {
            let n = if figure == Figure::Fig1a { 3 } else { 6 };
            let g = labelled_star(&vec![1.0; n], false)?;
            let run = run_case(figure.as_str(), &g, &MetricAssignment::new(ramp(n))?)?;
            let expected = if n == 3 {
                ConvergenceClass::ConstantMetric
            } else {
                ConvergenceClass::Divergent
            };
            checks.push(class_check(&run, expected));
            checks.push(curvature_check(&run));
            if let Some(limit) = &run.summary.limiting_weights {
                let mean = ramp(n).iter().sum::<f64>() / n as f64;
                let err = limit.iter().map(|w| (w.value - mean).abs()).fold(0.0, f64::max);
                checks.push(check(
                    "fig1a: weights converge to the mean initial weight",
                    err,
                    err < SYMMETRY_TOL,
                ));
            }
            vec![run]
        }
        Figure::Fig1b | Figure::Fig1d => {
            let m2 = if figure == Figure::Fig1b { ramp(3) } else { vec![1.0; 6] };
            let g = labelled_star(&m2, true)?;
            let run = run_case(figure.as_str(), &g, &MetricAssignment::constant(m2.len(), 1.0)?)?;
            checks.push(class_check(&run, ConvergenceClass::Vanishing));
            checks.push(curvature_check(&run));
            vec![run]
        }
        Figure::Fig2 => {
            let g = fig2_tree()?;
            let mut runs = Vec::new();
            for delta in FIG2_DELTAS {
                let name = format!("fig2_delta_{delta:.2}");
                runs.push(run_case(&name, &g, &fig2_initial_weights(delta)?)?);
            }
            for run in &runs {
                let w: Vec<f64> = run.summary.final_normalized_weights.iter().map(|c| c.value).collect();
                let d = (w[0] - w[1]).abs().max((w[5] - w[6]).abs());
                checks.push(check(
                    format!("{}: symmetric edges share limits", run.summary.name),
                    d,
                    d < SYMMETRY_TOL,
                ));
                checks.push(curvature_check(run));
                let k = run.summary.limiting_curvature;
                checks.push(check(
                    format!("{}: limiting curvature negative", run.summary.name),
                    k,
                    k < 0.0,
                ));
            }
            let finals: Vec<Vec<f64>> = runs
                .iter()
                .map(|r| r.summary.final_normalized_weights.iter().map(|c| c.value).collect())
                .collect();
            let across = (0..7)
                .map(|e| spread(&finals.iter().map(|f| f[e]).collect::<Vec<_>>()))
                .fold(0.0, f64::max);
            checks.push(check(
                "fig2: limits independent of delta",
                across,
                across < SYMMETRY_TOL,
            ));
            runs
        }
        Figure::Ex42 | Figure::Ex43 => {
            let g = if figure == Figure::Ex42 {
                labelled_normalized_path(&ramp(5))?
            } else {
                labelled_star(&ramp(5), true)?
            };
            let run = run_case(figure.as_str(), &g, &MetricAssignment::constant(5, 1.0)?)?;
            checks.push(check(
                format!("{figure}: lambda_max negative"),
                run.summary.lambda_max,
                run.summary.lambda_max < 0.0,
            ));
            checks.push(class_check(&run, ConvergenceClass::Vanishing));
            vec![run]
        }
    };
    Ok(Reproduction { figure, runs, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_ids_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.as_str().parse::<Figure>().unwrap(), f);
        }
        assert!("fig3".parse::<Figure>().is_err());
    }

    #[test]
    fn fig2_tree_shape() {
        let g = fig2_tree().unwrap();
        assert!(g.is_tree());
        assert_eq!(g.max_degree(), 4);
        assert_eq!(g.edge_label(0), "1-5");
        assert_eq!(g.edge_label(6), "6-8");
        let w = fig2_initial_weights(0.02).unwrap();
        assert!((w[0] - (1.0 / 7.0 + 0.02)).abs() < 1e-15);
        assert!((w[1] - (1.0 / 7.0 - 0.02)).abs() < 1e-15);
    }

    #[test]
    fn normalized_constructions_have_unit_degree() {
        let p = labelled_normalized_path(&ramp(5)).unwrap();
        let s = labelled_star(&ramp(5), true).unwrap();
        for g in [p, s] {
            for x in 0..g.num_vertices() {
                assert!((g.deg_measure(x).unwrap() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn every_figure_passes_its_checks() {
        for f in Figure::ALL {
            let r = reproduce(f).unwrap();
            for c in &r.checks {
                assert!(c.passed, "{f}: {} ({})", c.name, c.value);
            }
        }
    }
}
