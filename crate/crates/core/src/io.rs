//! Line-oriented graph files.
//!
//! ```text
//! # comment
//! graph <num_vertices> <num_edges>
//! vertex <id> <m1>
//! edge <id_u> <id_v> <m2> [<omega0>]
//! ```
//!
//! Edge order in the file fixes edge indices. Initial weights are optional but
//! must be given on every edge or on none.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Result, RicciError};
use crate::export::format_float;
use crate::graph::{MeasuredGraph, MetricAssignment};

#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: MeasuredGraph,
    pub initial_metric: Option<MetricAssignment>,
}

fn parse_err(line: usize, message: impl Into<String>) -> RicciError {
    RicciError::Parse {
        line,
        message: message.into(),
    }
}

fn number(line: usize, what: &str, token: &str) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| parse_err(line, format!("{what} `{token}` is not a number")))
}

fn count(line: usize, what: &str, token: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("{what} `{token}` is not a non-negative integer")))
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut header: Option<(usize, usize)> = None;
    let mut ids = Vec::new();
    let mut m1 = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut omegas: Vec<Option<f64>> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "graph" => {
                if header.is_some() {
                    return Err(parse_err(line_no, "duplicate `graph` header"));
                }
                if tokens.len() != 3 {
                    return Err(parse_err(line_no, "expected `graph <num_vertices> <num_edges>`"));
                }
                header = Some((
                    count(line_no, "vertex count", tokens[1])?,
                    count(line_no, "edge count", tokens[2])?,
                ));
            }
            _ if header.is_none() => {
                return Err(parse_err(
                    line_no,
                    "expected `graph <num_vertices> <num_edges>` header first",
                ));
            }
            "vertex" => {
                if tokens.len() != 3 {
                    return Err(parse_err(line_no, "expected `vertex <id> <m1>`"));
                }
                if !edges.is_empty() {
                    return Err(parse_err(line_no, "vertex lines must precede edge lines"));
                }
                let id = tokens[1].to_string();
                if index.contains_key(&id) {
                    return Err(parse_err(line_no, format!("duplicate vertex `{id}`")));
                }
                index.insert(id.clone(), ids.len());
                ids.push(id);
                m1.push(number(line_no, "vertex measure", tokens[2])?);
            }
            "edge" => {
                if !(4..=5).contains(&tokens.len()) {
                    return Err(parse_err(line_no, "expected `edge <u> <v> <m2> [<omega0>]`"));
                }
                let lookup = |t: &str| {
                    index
                        .get(t)
                        .copied()
                        .ok_or_else(|| parse_err(line_no, format!("unknown vertex `{t}`")))
                };
                let (u, v) = (lookup(tokens[1])?, lookup(tokens[2])?);
                edges.push((u, v, number(line_no, "edge measure", tokens[3])?));
                omegas.push(match tokens.get(4) {
                    Some(t) => Some(number(line_no, "initial weight", t)?),
                    None => None,
                });
            }
            other => return Err(parse_err(line_no, format!("unknown record `{other}`"))),
        }
    }

    let Some((nv, ne)) = header else {
        return Err(parse_err(0, "empty input: missing `graph` header"));
    };
    if ids.len() != nv {
        return Err(parse_err(
            0,
            format!("header declares {nv} vertices, found {}", ids.len()),
        ));
    }
    if edges.len() != ne {
        return Err(parse_err(
            0,
            format!("header declares {ne} edges, found {}", edges.len()),
        ));
    }
    let given = omegas.iter().filter(|o| o.is_some()).count();
    if given != 0 && given != omegas.len() {
        return Err(parse_err(0, "initial weights must be given on all edges or none"));
    }
    let graph = MeasuredGraph::new(ids, m1, edges)?;
    let initial_metric = if given == 0 {
        None
    } else {
        Some(MetricAssignment::new(omegas.into_iter().flatten().collect())?)
    };
    Ok(GraphFile { graph, initial_metric })
}

pub fn write_graph(g: &MeasuredGraph, w0: Option<&MetricAssignment>) -> Result<String> {
    if let Some(w) = w0 {
        w.check_for(g)?;
    }
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {}", g.num_vertices(), g.num_edges());
    for x in 0..g.num_vertices() {
        let _ = writeln!(out, "vertex {} {}", g.vertex_id(x), format_float(g.m1(x)));
    }
    for (i, e) in g.edges().iter().enumerate() {
        let _ = write!(
            out,
            "edge {} {} {}",
            g.vertex_id(e.u),
            g.vertex_id(e.v),
            format_float(e.m2)
        );
        if let Some(w) = w0 {
            let _ = write!(out, " {}", format_float(w[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "\
# a weighted triangle
graph 3 3
vertex a 1
vertex b 2.5
vertex c 1   # trailing comment
edge a b 1 0.5
edge b c 2 1
edge c a 1 1.2
";

    #[test]
    fn parses_and_round_trips() {
        let gf = parse_graph(TRIANGLE).unwrap();
        assert_eq!(gf.graph.num_edges(), 3);
        assert_eq!(gf.graph.m1(1), 2.5);
        assert_eq!(gf.initial_metric.as_ref().unwrap().as_slice(), &[0.5, 1.0, 1.2]);
        let text = write_graph(&gf.graph, gf.initial_metric.as_ref()).unwrap();
        let again = parse_graph(&text).unwrap();
        assert_eq!(again.graph.edges(), gf.graph.edges());
        assert_eq!(again.initial_metric, gf.initial_metric);
    }

    #[test]
    fn rejects_malformed_input() {
        let line_of = |text: &str| match parse_graph(text) {
            Err(RicciError::Parse { line, .. }) => Some(line),
            _ => None,
        };
        assert_eq!(line_of(""), Some(0));
        assert_eq!(line_of("vertex a 1\n"), Some(1));
        assert_eq!(line_of("graph 2 1\nvertex a 1\nvertex b x\n"), Some(3));
        assert_eq!(line_of("graph 2 1\nvertex a 1\nvertex b 1\nedge a z 1\n"), Some(4));
        assert_eq!(line_of("graph 2 1\nvertex a 1\nvertex b 1\n"), Some(0));
        assert_eq!(
            line_of("graph 3 2\nvertex a 1\nvertex b 1\nvertex c 1\nedge a b 1 1\nedge b c 1\n"),
            Some(0)
        );
        assert_eq!(line_of("graph 2 1\nvertex a 1\nvertex a 1\n"), Some(3));
        assert!(matches!(
            parse_graph("graph 3 1\nvertex a 1\nvertex b 1\nvertex c 1\nedge a b 1\n"),
            Err(RicciError::InvalidGraph(_))
        ));
    }
}
