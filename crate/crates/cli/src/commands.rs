use std::fmt::{self, Write as _};
use std::path::Path;

use ricci::curvature::{default_epsilon, forman_edge, lly_edge, lly_limit_estimate};
use ricci::export::{format_float, surgery_csv, trajectory_csv};
use ricci::flow::{forman_flow_exact, lly_flow_integrate, long_time_horizon, time_grid};
use ricci::io::parse_graph;
use ricci::reproduce::{reproduce, Check, EdgeValue, Figure, RunSummary};
use ricci::spectral::{
    build_flow_matrix, classify_convergence, classify_tree_uniform, eigendecompose, inverse_curvature,
    ConvergenceClass, CurvatureBounds, TreeCase,
};
use ricci::{build_named_graph, GraphFamily, MeasureMode, MeasuredGraph, MetricAssignment, RicciError};
use serde::Serialize;

use crate::output::Artifact;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<RicciError> for CliError {
    fn from(e: RicciError) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Numerical(format!("cannot serialize output: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// A graph ready for computation, with the stem used in output file names.
pub struct Input {
    pub name: String,
    pub graph: MeasuredGraph,
    pub w0: MetricAssignment,
}

pub fn parse_family(spec: &str) -> CliResult<GraphFamily> {
    let (family, n) = spec
        .split_once(':')
        .ok_or_else(|| input_err(format!("named graph `{spec}` must look like family:n")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| input_err(format!("bad size `{n}` in named graph `{spec}`")))?;
    match family.trim() {
        "path" => Ok(GraphFamily::Path(n)),
        "star" => Ok(GraphFamily::Star(n)),
        "cycle" => Ok(GraphFamily::Cycle(n)),
        "complete" => Ok(GraphFamily::Complete(n)),
        other => Err(input_err(format!(
            "unknown graph family `{other}` (expected path, star, cycle or complete)"
        ))),
    }
}

fn parse_floats(list: &str, what: &str) -> CliResult<Vec<f64>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| input_err(format!("bad number `{s}` in {what}")))
        })
        .collect()
}

/// `uniform`, `normalized` (all edge measures 1) or `normalized:a1,a2,...`.
pub fn parse_measure(spec: &str, num_edges: usize) -> CliResult<MeasureMode> {
    match spec.split_once(':') {
        None if spec == "uniform" => Ok(MeasureMode::Uniform),
        None if spec == "normalized" => Ok(MeasureMode::NormalizedDeg1(vec![1.0; num_edges])),
        Some(("normalized", values)) => Ok(MeasureMode::NormalizedDeg1(parse_floats(values, "--measure")?)),
        _ => Err(input_err(format!(
            "unknown measure `{spec}` (expected uniform, normalized or normalized:a1,...)"
        ))),
    }
}

pub fn load_input(
    named: Option<&str>,
    path: Option<&Path>,
    measure: Option<&str>,
    omega: Option<&[f64]>,
) -> CliResult<Input> {
    let (name, graph, file_metric) = match (named, path) {
        (Some(spec), None) => {
            let family = parse_family(spec)?;
            let mode = parse_measure(measure.unwrap_or("uniform"), family.num_edges())?;
            let name = spec.replace(':', "");
            (name, build_named_graph(family, &mode)?, None)
        }
        (None, Some(p)) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| input_err(format!("cannot read {}: {e}", p.display())))?;
            let file = parse_graph(&text)?;
            let graph = match measure {
                Some(m) => file.graph.with_measure(&parse_measure(m, file.graph.num_edges())?)?,
                None => file.graph,
            };
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into());
            (name, graph, file.initial_metric)
        }
        _ => return Err(input_err("give exactly one of --named and --input")),
    };
    let w0 = match (omega, file_metric) {
        (Some(w), _) => MetricAssignment::new(w.to_vec())?,
        (None, Some(w)) => w,
        (None, None) => MetricAssignment::constant(graph.num_edges(), 1.0)?,
    };
    w0.check_for(&graph)?;
    Ok(Input { name, graph, w0 })
}

fn labelled(g: &MeasuredGraph, values: &[f64]) -> Vec<EdgeValue> {
    values
        .iter()
        .enumerate()
        .map(|(e, &value)| EdgeValue {
            edge: g.edge_label(e),
            value,
        })
        .collect()
}

pub const CURVATURE_HEADER: &str = "edge,forman,lly,lly_limit_estimate";

pub fn cmd_curvature(input: &Input) -> CliResult<Vec<Artifact>> {
    let (g, w) = (&input.graph, &input.w0);
    let eps = default_epsilon(g);
    let mut csv = String::from(CURVATURE_HEADER);
    csv.push('\n');
    for e in 0..g.num_edges() {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            g.edge_label(e),
            format_float(forman_edge(g, w, e)?),
            format_float(lly_edge(g, w, e)?),
            format_float(lly_limit_estimate(g, w, e, eps)?)
        );
    }
    Ok(vec![Artifact::csv(&format!("curvature_{}", input.name), csv)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    Lly,
}

pub struct FlowOptions {
    pub t_end: f64,
    pub dt: f64,
    pub surgery: bool,
    pub method: Method,
}

pub fn cmd_flow(input: &Input, opts: &FlowOptions) -> CliResult<Vec<Artifact>> {
    if !(opts.t_end >= 0.0 && opts.t_end.is_finite()) {
        return Err(input_err(format!(
            "--t-end must be finite and >= 0, got {}",
            opts.t_end
        )));
    }
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(input_err(format!("--dt must be finite and > 0, got {}", opts.dt)));
    }
    let traj = match opts.method {
        Method::Exact => forman_flow_exact(&input.graph, &input.w0, &time_grid(opts.t_end, opts.dt))?,
        Method::Lly => lly_flow_integrate(&input.graph, &input.w0, opts.t_end, opts.dt, opts.surgery)?,
    };
    let stem = format!("flow_{}", input.name);
    Ok(vec![
        Artifact::csv(&stem, trajectory_csv(&traj)),
        Artifact::csv(&format!("{stem}_surgery"), surgery_csv(&traj.surgeries)),
    ])
}

#[derive(Serialize)]
struct SpectrumReport {
    graph: String,
    eigenvalues: Vec<f64>,
    lambda_max: f64,
    spectral_gap: Option<f64>,
    perron_vector: Vec<EdgeValue>,
    horizon: f64,
}

pub fn cmd_spectrum(input: &Input) -> CliResult<Vec<Artifact>> {
    let sd = eigendecompose(&build_flow_matrix(&input.graph))?;
    let report = SpectrumReport {
        graph: input.name.clone(),
        eigenvalues: sd.eigenvalues.as_slice().to_vec(),
        lambda_max: sd.lambda_max(),
        spectral_gap: sd.spectral_gap(),
        perron_vector: labelled(&input.graph, sd.perron_vector().as_slice()),
        horizon: long_time_horizon(&sd),
    };
    Ok(vec![Artifact::json(&format!("spectrum_{}", input.name), &report)?])
}

#[derive(Serialize)]
struct ClassifyReport {
    graph: String,
    classification: ConvergenceClass,
    lambda_max: f64,
    limiting_curvature: f64,
    limiting_normalized_metric: Vec<EdgeValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limiting_weights: Option<Vec<EdgeValue>>,
    bounds: CurvatureBounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    tree_case: Option<TreeCase>,
}

pub fn cmd_classify(input: &Input, tol_zero: f64) -> CliResult<Vec<Artifact>> {
    let g = &input.graph;
    let r = classify_convergence(g, &input.w0, tol_zero)?;
    let tree_case = if g.is_tree() && g.has_uniform_measure() {
        Some(classify_tree_uniform(g)?)
    } else {
        None
    };
    let report = ClassifyReport {
        graph: input.name.clone(),
        classification: r.classification,
        lambda_max: r.lambda_max,
        limiting_curvature: r.limiting_curvature,
        limiting_normalized_metric: labelled(g, &r.limiting_normalized_metric),
        limiting_weights: r.limiting_weights.as_deref().map(|w| labelled(g, w)),
        bounds: r.bounds,
        tree_case,
    };
    Ok(vec![Artifact::json(&format!("classify_{}", input.name), &report)?])
}

#[derive(Serialize)]
struct InverseReport {
    graph: String,
    target_curvature: Vec<EdgeValue>,
    lambda_max: f64,
    solvable: bool,
    metric: Option<Vec<EdgeValue>>,
}

pub fn cmd_inverse(input: &Input, kappa: &[f64], tol_zero: f64) -> CliResult<Vec<Artifact>> {
    let g = &input.graph;
    let sol = inverse_curvature(g, kappa, tol_zero)?;
    let report = InverseReport {
        graph: input.name.clone(),
        target_curvature: labelled(g, kappa),
        lambda_max: sol.lambda_max,
        solvable: sol.metric.is_some(),
        metric: sol.metric.as_ref().map(|w| labelled(g, w.as_slice())),
    };
    Ok(vec![Artifact::json(&format!("inverse_{}", input.name), &report)?])
}

#[derive(Serialize)]
struct ReproduceReport<'a> {
    figure: &'a str,
    description: &'a str,
    passed: bool,
    checks: &'a [Check],
    runs: Vec<&'a RunSummary>,
}

/// Runs the figures concurrently. The summary JSON of each figure comes first
/// in its group, followed by one trajectory CSV per run.
pub fn cmd_reproduce(figures: &[Figure]) -> CliResult<(Vec<Artifact>, Vec<String>)> {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = figures.iter().map(|&f| s.spawn(move || reproduce(f))).collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(RicciError::InvalidParameter("worker panicked".into())))
            })
            .collect()
    });
    let mut artifacts = Vec::new();
    let mut failed = Vec::new();
    for (figure, result) in figures.iter().zip(results) {
        let rep = result?;
        let report = ReproduceReport {
            figure: figure.as_str(),
            description: figure.description(),
            passed: rep.passed(),
            checks: &rep.checks,
            runs: rep.runs.iter().map(|r| &r.summary).collect(),
        };
        artifacts.push(Artifact::json(&format!("reproduce_{figure}"), &report)?);
        for run in &rep.runs {
            artifacts.push(Artifact::csv(
                &format!("reproduce_{}", run.summary.name),
                trajectory_csv(&run.trajectory),
            ));
        }
        failed.extend(rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()));
    }
    Ok((artifacts, failed))
}
