//! Deterministic text output for trajectories and tables.

use std::fmt::Write as _;

use crate::flow::FlowTrajectory;
use crate::surgery::SurgeryEvent;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits; `-0.0` becomes `0.0`.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest representation of `x` rounded to 12 significant digits.
pub fn format_float(x: f64) -> String {
    let r = round_significant(x);
    if r.is_finite() && r == r.trunc() && r.abs() < 1e15 {
        format!("{}", r as i64)
    } else {
        format!("{r:?}")
    }
}

pub const TRAJECTORY_HEADER: &str = "t,edge_id,omega,omega_normalized,kappa";
pub const SURGERY_HEADER: &str = "t,edge_id,omega,alt_distance";

pub fn trajectory_csv(traj: &FlowTrajectory) -> String {
    let mut out = String::new();
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &traj.samples {
        let g = traj.graph_of(s);
        let total = s.weights.total();
        for e in 0..s.weights.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                format_float(s.t),
                g.edge_label(e),
                format_float(s.weights[e]),
                format_float(s.weights[e] / total),
                format_float(s.curvature.values[e])
            );
        }
    }
    out
}

pub fn surgery_csv(events: &[SurgeryEvent]) -> String {
    let mut out = String::new();
    out.push_str(SURGERY_HEADER);
    out.push('\n');
    for ev in events {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_float(ev.time),
            ev.removed_edge,
            format_float(ev.edge_weight),
            format_float(ev.alternative_distance)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::forman_flow_exact;
    use crate::graph::{build_named_graph, GraphFamily, MeasureMode, MetricAssignment};

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(-1e-20 * 0.0), "0");
        assert_eq!(format_float(2.0), "2");
        assert_eq!(format_float(-3.0), "-3");
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(2.0f64.sqrt() * 1e-9), "1.41421356237e-9");
        assert_eq!(format_float(1e300), "1e300");
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn trajectory_table() {
        let g = build_named_graph(GraphFamily::Path(2), &MeasureMode::Uniform).unwrap();
        let w0 = MetricAssignment::new(vec![1.0, 3.0]).unwrap();
        let traj = forman_flow_exact(&g, &w0, &[0.0]).unwrap();
        let csv = trajectory_csv(&traj);
        assert_eq!(
            csv,
            "t,edge_id,omega,omega_normalized,kappa\n0,1-2,1,0.25,-1\n0,2-3,3,0.75,1.66666666667\n"
        );
    }
}
