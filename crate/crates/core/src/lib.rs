//! Discrete Ricci curvature and Ricci flow on measured weighted graphs.
//!
//! The crate computes weighted Forman and Lin-Lu-Yau curvature on graphs
//! carrying vertex and edge measures, evolves the curvature flows
//! `dω/dt = −κ ω`, and analyses the linear Forman flow through the spectrum
//! of its symmetrised generator.

pub mod curvature;
pub mod distance;
pub mod error;
pub mod export;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod io;
pub mod jacobi;
pub mod reproduce;
pub mod simplex;
pub mod spectral;
pub mod surgery;

pub use error::{Result, RicciError};
pub use graph::{build_named_graph, GraphFamily, MeasureMode, MeasuredGraph, MetricAssignment};
