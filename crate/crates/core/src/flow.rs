//! Curvature flows `dω/dt = −κ_ω ω`.
//!
//! The Forman flow is linear, `dω/dt = F ω`, and is solved in closed form
//! from the eigendecomposition of `F̃`. The Lin-Lu-Yau flow is integrated with
//! classical RK4, optionally with surgery on edges that stop being shortest
//! paths.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::curvature::CurvatureVector;
use crate::error::{Result, RicciError};
use crate::graph::{MeasuredGraph, MetricAssignment};
use crate::spectral::{build_flow_matrix, eigendecompose, flow_coefficients, FlowMatrix, SpectralData};
use crate::surgery::{apply_surgery, SurgeryEvent};

pub const DEFAULT_DT: f64 = 1e-3;
pub const MAX_HALVINGS: usize = 20;
/// Above this many edges only every `THIN_STRIDE`-th step is kept.
pub const THIN_EDGE_LIMIT: usize = 64;
pub const THIN_STRIDE: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    /// Index into [`FlowTrajectory::graph_snapshots`].
    pub graph_index: usize,
    pub weights: MetricAssignment,
    pub curvature: CurvatureVector,
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub samples: Vec<FlowSample>,
    pub surgeries: Vec<SurgeryEvent>,
    /// The input graph followed by the graph after each surgery.
    pub graph_snapshots: Vec<MeasuredGraph>,
}

impl FlowTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &FlowSample {
        self.samples.last().expect("trajectory has at least one sample")
    }

    pub fn graph_of(&self, sample: &FlowSample) -> &MeasuredGraph {
        &self.graph_snapshots[sample.graph_index]
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    for (i, &t) in times.iter().enumerate() {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(RicciError::InvalidParameter(format!(
                "sample time {t} must be finite and non-negative"
            )));
        }
        if i > 0 && t <= times[i - 1] {
            return Err(RicciError::InvalidParameter(
                "sample times must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

/// The spectral solution of the Forman flow, precomputed once per graph.
#[derive(Debug, Clone)]
pub struct FormanSolution {
    pub fm: FlowMatrix,
    pub sd: SpectralData,
    /// `c[(i, l)] = c_i(e_l)`.
    pub coefficients: DMatrix<f64>,
}

impl FormanSolution {
    pub fn new(g: &MeasuredGraph, w0: &MetricAssignment) -> Result<Self> {
        w0.check_for(g)?;
        let fm = build_flow_matrix(g);
        let sd = eigendecompose(&fm)?;
        let coefficients = flow_coefficients(&sd, &fm, w0)?;
        Ok(FormanSolution { fm, sd, coefficients })
    }

    /// `ω(t) e^{−λ_n t}`, which stays bounded for all `t`.
    pub fn scaled_weights(&self, t: f64) -> Vec<f64> {
        let n = self.sd.dim();
        let top = self.sd.lambda_max();
        let decay: Vec<f64> = self.sd.eigenvalues.iter().map(|l| ((l - top) * t).exp()).collect();
        (0..n)
            .map(|l| (0..n).map(|i| self.coefficients[(i, l)] * decay[i]).sum())
            .collect()
    }

    pub fn weights(&self, t: f64) -> Result<Vec<f64>> {
        let growth = (self.sd.lambda_max() * t).exp();
        let w: Vec<f64> = self.scaled_weights(t).into_iter().map(|v| v * growth).collect();
        if w.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(RicciError::Overflow(t));
        }
        Ok(w)
    }
}

/// Samples the exact solution `ω(t) = e^{tF} ω0` at `times`.
pub fn forman_flow_exact(g: &MeasuredGraph, w0: &MetricAssignment, times: &[f64]) -> Result<FlowTrajectory> {
    check_times(times)?;
    let sol = FormanSolution::new(g, w0)?;
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let weights = if t == 0.0 {
            w0.clone()
        } else {
            MetricAssignment::new(sol.weights(t)?)?
        };
        let curvature = CurvatureVector::forman(g, &weights)?;
        samples.push(FlowSample {
            t,
            graph_index: 0,
            weights,
            curvature,
        });
    }
    Ok(FlowTrajectory {
        samples,
        surgeries: Vec::new(),
        graph_snapshots: vec![g.clone()],
    })
}

/// Normalised Forman trajectory computed without ever forming `ω(t)`, so it
/// stays finite at horizons where the weights themselves over- or underflow.
/// Equal to `normalized_trajectory(forman_flow_exact(..))` whenever the latter
/// exists.
pub fn forman_flow_normalized(g: &MeasuredGraph, w0: &MetricAssignment, times: &[f64]) -> Result<FlowTrajectory> {
    check_times(times)?;
    let sol = FormanSolution::new(g, w0)?;
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let scaled = if t == 0.0 {
            w0.clone()
        } else {
            MetricAssignment::new(sol.scaled_weights(t))?
        };
        let curvature = CurvatureVector::forman(g, &scaled)?;
        samples.push(FlowSample {
            t,
            graph_index: 0,
            weights: scaled.normalized(),
            curvature,
        });
    }
    Ok(FlowTrajectory {
        samples,
        surgeries: Vec::new(),
        graph_snapshots: vec![g.clone()],
    })
}

fn lly_rhs(g: &MeasuredGraph, w: &[f64]) -> Result<Vec<f64>> {
    let ma = MetricAssignment::new(w.to_vec())?;
    let k = CurvatureVector::lly(g, &ma)?;
    Ok(k.values.iter().zip(w).map(|(k, w)| -k * w).collect())
}

fn axpy(w: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    w.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4_step(g: &MeasuredGraph, w: &[f64], k1: &[f64], h: f64) -> Result<Vec<f64>> {
    let k2 = lly_rhs(g, &axpy(w, h / 2.0, k1))?;
    let k3 = lly_rhs(g, &axpy(w, h / 2.0, &k2))?;
    let k4 = lly_rhs(g, &axpy(w, h, &k3))?;
    Ok((0..w.len())
        .map(|i| w[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// RK4 integration of `dω/dt = −κ^{LLY}_ω ω` on `[0, t_end]`.
///
/// With `surgery` enabled, edges that are no longer strictly shortest paths
/// are removed before every step. A step that drives a weight non-positive
/// (or, with surgery, makes the metric degenerate mid-step) is retried with
/// half the step size.
pub fn lly_flow_integrate(
    g: &MeasuredGraph,
    w0: &MetricAssignment,
    t_end: f64,
    dt: f64,
    surgery: bool,
) -> Result<FlowTrajectory> {
    w0.check_for(g)?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(RicciError::InvalidParameter(format!(
            "t_end must be finite and non-negative, got {t_end}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(RicciError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }

    let mut snapshots = vec![g.clone()];
    let mut events = Vec::new();
    let mut graph = g.clone();
    let mut w = w0.clone();
    let mut t = 0.0;

    let mut do_surgery = |graph: &mut MeasuredGraph, w: &mut MetricAssignment, t: f64| -> Result<bool> {
        let out = apply_surgery(graph, w, t)?;
        if out.events.is_empty() {
            return Ok(false);
        }
        *graph = out.graph;
        *w = out.metric;
        events.extend(out.events);
        Ok(true)
    };

    if surgery && do_surgery(&mut graph, &mut w, t)? {
        snapshots.push(graph.clone());
    }
    let mut kappa = CurvatureVector::lly(&graph, &w)?;
    let thin = g.num_edges() > THIN_EDGE_LIMIT;
    let mut samples = vec![FlowSample {
        t,
        graph_index: snapshots.len() - 1,
        weights: w.clone(),
        curvature: kappa.clone(),
    }];

    let end_tol = dt * 1e-9;
    let mut step = 0usize;
    while t < t_end - end_tol {
        let k1: Vec<f64> = kappa.values.iter().zip(w.as_slice()).map(|(k, w)| -k * w).collect();
        let mut h = dt.min(t_end - t);
        let mut halvings = 0;
        let next = loop {
            match rk4_step(&graph, w.as_slice(), &k1, h) {
                Ok(next) if next.iter().all(|v| *v > 0.0 && v.is_finite()) => break next,
                Ok(_) | Err(RicciError::NonPositiveWeight { .. }) => {}
                Err(RicciError::DegenerateMetric { .. }) if surgery => {}
                Err(e) => return Err(e),
            }
            if halvings == MAX_HALVINGS {
                return Err(RicciError::StepSizeTooLarge { time: t, halvings });
            }
            h /= 2.0;
            halvings += 1;
        };
        t = if h == t_end - t { t_end } else { t + h };
        w = MetricAssignment::new(next)?;
        step += 1;

        let mut cut = false;
        if surgery && do_surgery(&mut graph, &mut w, t)? {
            snapshots.push(graph.clone());
            cut = true;
        }
        kappa = CurvatureVector::lly(&graph, &w)?;
        let last = t >= t_end - end_tol;
        if !thin || step.is_multiple_of(THIN_STRIDE) || last || cut {
            samples.push(FlowSample {
                t,
                graph_index: snapshots.len() - 1,
                weights: w.clone(),
                curvature: kappa.clone(),
            });
        }
    }

    Ok(FlowTrajectory {
        samples,
        surgeries: events,
        graph_snapshots: snapshots,
    })
}

/// Rescales every sample so its weights sum to 1. Curvature is scale
/// invariant and is kept as is.
pub fn normalized_trajectory(traj: &FlowTrajectory) -> FlowTrajectory {
    FlowTrajectory {
        samples: traj
            .samples
            .iter()
            .map(|s| FlowSample {
                weights: s.weights.normalized(),
                ..s.clone()
            })
            .collect(),
        surgeries: traj.surgeries.clone(),
        graph_snapshots: traj.graph_snapshots.clone(),
    }
}

/// Fourth-order first-derivative weights on five equally spaced points,
/// indexed by the position of the evaluation point in the window.
const FIVE_POINT: [[f64; 5]; 5] = [
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
    [1.0, -8.0, 0.0, 8.0, -1.0],
    [-1.0, 6.0, -18.0, 10.0, 3.0],
    [3.0, -16.0, 36.0, -48.0, 25.0],
];

/// `max |dω/dt + κ ω|` over interior samples, with `dω/dt` from finite
/// differences: a five-point stencil where the spacing is uniform, the
/// three-point non-uniform formula elsewhere.
pub fn curvature_residual(traj: &FlowTrajectory, fm: &FlowMatrix) -> Result<f64> {
    let s = &traj.samples;
    if s.len() < 3 {
        return Err(RicciError::TooFewSamples(s.len()));
    }
    let n = fm.dim();
    if let Some(bad) = s.iter().find(|x| x.weights.len() != n) {
        return Err(RicciError::MetricLength {
            expected: n,
            found: bad.weights.len(),
        });
    }
    let t: Vec<f64> = s.iter().map(|x| x.t).collect();
    let uniform_from = |a: usize| -> bool {
        let h = t[a + 1] - t[a];
        (a..a + 4).all(|k| ((t[k + 1] - t[k]) - h).abs() <= 1e-9 * h)
    };
    let mut worst: f64 = 0.0;
    for k in 1..s.len() - 1 {
        let window = (s.len() >= 5)
            .then(|| k.saturating_sub(2).min(s.len() - 5))
            .filter(|&a| uniform_from(a));
        for l in 0..n {
            let f = |j: usize| s[j].weights[l];
            let deriv = match window {
                Some(a) => {
                    let h = t[a + 1] - t[a];
                    let c = &FIVE_POINT[k - a];
                    (0..5).map(|j| c[j] * f(a + j)).sum::<f64>() / (12.0 * h)
                }
                None => {
                    let h1 = t[k] - t[k - 1];
                    let h2 = t[k + 1] - t[k];
                    -h2 / (h1 * (h1 + h2)) * f(k - 1) + (h2 - h1) / (h1 * h2) * f(k) + h1 / (h2 * (h1 + h2)) * f(k + 1)
                }
            };
            worst = worst.max((deriv + s[k].curvature.values[l] * f(k)).abs());
        }
    }
    Ok(worst)
}

/// Time after which every subdominant mode of the Forman flow has decayed by
/// `e^{−40}` relative to the dominant one.
pub fn long_time_horizon(sd: &SpectralData) -> f64 {
    match sd.spectral_gap() {
        Some(gap) if gap > 0.0 => 40.0 / gap,
        _ => 40.0 / sd.lambda_max().abs(),
    }
}

/// Evenly spaced times `0, dt, 2dt, …` up to and including `t_end`.
pub fn time_grid(t_end: f64, dt: f64) -> Vec<f64> {
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let mut times: Vec<f64> = (0..steps).map(|k| k as f64 * dt).collect();
    times.push(t_end);
    times
}
