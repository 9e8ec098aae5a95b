//! `ricci`: curvature, flows and spectral classification of measured graphs.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ricci::reproduce::Figure;
use ricci::spectral::DEFAULT_TOL_ZERO;

use commands::{CliError, CliResult, FlowOptions, Input, Method};

#[derive(Parser)]
#[command(
    name = "ricci",
    version,
    about = "Discrete Ricci curvature and curvature flows on measured graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in graph: path:N, star:N, cycle:N or complete:N
    #[arg(long, value_name = "FAMILY:N")]
    named: Option<String>,

    /// Graph file
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    source: Source,

    /// uniform, normalized or normalized:a1,a2,... (edge measures, Deg = 1)
    #[arg(long, value_name = "MODE")]
    measure: Option<String>,

    /// Initial weights, one per edge in edge order (default: file weights or all 1)
    #[arg(long, value_delimiter = ',', value_name = "W1,W2,...")]
    omega: Option<Vec<f64>>,

    /// Write `<command>_<name>.csv/.json` here instead of printing to stdout
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> CliResult<Input> {
        commands::load_input(
            self.source.named.as_deref(),
            self.source.input.as_deref(),
            self.measure.as_deref(),
            self.omega.as_deref(),
        )
    }
}

#[derive(Args)]
struct TolArgs {
    /// Threshold below which |lambda_max| counts as zero
    #[arg(long, env = "RICCI_TOL_ZERO", default_value_t = DEFAULT_TOL_ZERO)]
    tol_zero: f64,
}

impl TolArgs {
    fn get(&self) -> CliResult<f64> {
        if self.tol_zero >= 0.0 && self.tol_zero.is_finite() {
            Ok(self.tol_zero)
        } else {
            Err(CliError::Input(format!(
                "tolerance must be finite and >= 0, got {}",
                self.tol_zero
            )))
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Closed-form Forman flow
    Exact,
    /// Runge-Kutta integration of the Lin-Lu-Yau flow
    Lly,
}

#[derive(Subcommand)]
enum Command {
    /// Per-edge Forman and Lin-Lu-Yau curvature
    Curvature {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Evolve the weights and export the trajectory
    Flow {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 5.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Remove edges that stop being shortest paths (lly method)
        #[arg(long)]
        surgery: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
    },
    /// Eigenvalues and Perron vector of the flow matrix
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Long-time behaviour of the Forman flow
    Classify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Find a metric with prescribed Forman curvature
    Inverse {
        #[command(flatten)]
        graph: GraphArgs,
        /// Target curvature, one value per edge
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        kappa: Vec<f64>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Regenerate the data behind a figure or example: fig1a..fig1d, fig2, ex42, ex43 or all
    Reproduce {
        figure: String,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn emit(artifacts: &[output::Artifact], out: Option<&std::path::Path>) -> CliResult<()> {
    output::emit(artifacts, out).map_err(|e| CliError::Input(format!("cannot write output: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Curvature { graph } => emit(&commands::cmd_curvature(&graph.load()?)?, graph.out.as_deref()),
        Command::Flow {
            graph,
            t_end,
            dt,
            surgery,
            method,
        } => {
            let method = match method {
                MethodArg::Exact => Method::Exact,
                MethodArg::Lly => Method::Lly,
            };
            if surgery && method == Method::Exact {
                eprintln!("note: --surgery has no effect on the exact Forman flow");
            }
            let opts = FlowOptions {
                t_end,
                dt,
                surgery,
                method,
            };
            emit(&commands::cmd_flow(&graph.load()?, &opts)?, graph.out.as_deref())
        }
        Command::Spectrum { graph } => emit(&commands::cmd_spectrum(&graph.load()?)?, graph.out.as_deref()),
        Command::Classify { graph, tol } => emit(
            &commands::cmd_classify(&graph.load()?, tol.get()?)?,
            graph.out.as_deref(),
        ),
        Command::Inverse { graph, kappa, tol } => emit(
            &commands::cmd_inverse(&graph.load()?, &kappa, tol.get()?)?,
            graph.out.as_deref(),
        ),
        Command::Reproduce { figure, out } => {
            let figures = if figure == "all" {
                Figure::ALL.to_vec()
            } else {
                vec![figure.parse::<Figure>()?]
            };
            let (artifacts, failed) = commands::cmd_reproduce(&figures)?;
            match out.as_deref() {
                Some(dir) => emit(&artifacts, Some(dir))?,
                None => {
                    // summaries only; trajectories need --out
                    let summaries: Vec<_> = artifacts
                        .into_iter()
                        .filter(|a| a.file_name.ends_with(".json"))
                        .collect();
                    for a in &summaries {
                        emit(std::slice::from_ref(a), None)?;
                    }
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Numerical(format!(
                    "reproduction checks failed: {}",
                    failed.join("; ")
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ricci: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
