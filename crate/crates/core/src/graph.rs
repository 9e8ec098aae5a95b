//! Measured weighted graphs.
//!
//! A [`MeasuredGraph`] is the static object `(V, E, m1, m2)`: a simple connected
//! graph with a positive measure on vertices and on edges. The evolving part,
//! the edge metric `ω`, lives separately in [`MetricAssignment`] so that one graph
//! can be paired with many metrics along a flow.
//!
//! Vertices and edges are addressed by dense indices. The order of `edges`
//! fixes the row/column order of every edge-indexed matrix in the crate.

use std::collections::{HashMap, VecDeque};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RicciError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub m2: f64,
}

impl Edge {
    pub fn has_endpoint(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`. `x` must be an endpoint.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    /// The vertex shared with `other`, if the two edges are adjacent and distinct.
    pub fn shared_vertex(&self, other: &Edge) -> Option<usize> {
        if self.u == other.u && self.v == other.v || self.u == other.v && self.v == other.u {
            return None;
        }
        if other.has_endpoint(self.u) {
            Some(self.u)
        } else if other.has_endpoint(self.v) {
            Some(self.v)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredGraph {
    ids: Vec<String>,
    m1: Vec<f64>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<usize>>,
    lookup: HashMap<String, usize>,
}

impl MeasuredGraph {
    /// Builds and validates a graph. `edges` are `(u, v, m2)` with vertex indices.
    pub fn new(ids: Vec<String>, m1: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(RicciError::InvalidGraph("graph has no vertices".into()));
        }
        if m1.len() != n {
            return Err(RicciError::InvalidGraph(format!(
                "{} vertex measures for {} vertices",
                m1.len(),
                n
            )));
        }
        let mut lookup = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if lookup.insert(id.clone(), i).is_some() {
                return Err(RicciError::InvalidGraph(format!("duplicate vertex `{id}`")));
            }
        }
        for (id, &m) in ids.iter().zip(&m1) {
            if !(m > 0.0 && m.is_finite()) {
                return Err(RicciError::InvalidGraph(format!(
                    "vertex `{id}` has non-positive measure {m}"
                )));
            }
        }
        if edges.is_empty() {
            return Err(RicciError::InvalidGraph("graph has no edges".into()));
        }

        let mut incidence = vec![Vec::new(); n];
        let mut seen = HashMap::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        for (k, &(u, v, m2)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(RicciError::InvalidGraph(format!(
                    "edge {k} references a vertex index out of range"
                )));
            }
            if u == v {
                return Err(RicciError::InvalidGraph(format!("edge {k} is a loop at `{}`", ids[u])));
            }
            if !(m2 > 0.0 && m2.is_finite()) {
                return Err(RicciError::InvalidGraph(format!(
                    "edge {}-{} has non-positive measure {m2}",
                    ids[u], ids[v]
                )));
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, k).is_some() {
                return Err(RicciError::InvalidGraph(format!("parallel edge {}-{}", ids[u], ids[v])));
            }
            incidence[u].push(k);
            incidence[v].push(k);
            out.push(Edge { u, v, m2 });
        }

        let g = MeasuredGraph {
            ids,
            m1,
            edges: out,
            incidence,
            lookup,
        };
        if !g.connected_without(None) {
            return Err(RicciError::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Convenience constructor from string labels.
    pub fn from_labels(vertices: &[(&str, f64)], edges: &[(&str, &str, f64)]) -> Result<Self> {
        let ids: Vec<String> = vertices.iter().map(|(id, _)| id.to_string()).collect();
        let m1 = vertices.iter().map(|&(_, m)| m).collect();
        let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
        let mut es = Vec::with_capacity(edges.len());
        for &(a, b, m2) in edges {
            let u = *index.get(a).ok_or_else(|| RicciError::UnknownVertex(a.into()))?;
            let v = *index.get(b).ok_or_else(|| RicciError::UnknownVertex(b.into()))?;
            es.push((u, v, m2));
        }
        Self::new(ids, m1, es)
    }

    /// Uniform-measure graph (`m1 ≡ m2 ≡ 1`) on vertices labelled `0..n`.
    pub fn uniform(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let ids = (0..num_vertices).map(|i| i.to_string()).collect();
        Self::new(
            ids,
            vec![1.0; num_vertices],
            edges.iter().map(|&(u, v)| (u, v, 1.0)).collect(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.lookup
            .get(id)
            .copied()
            .ok_or_else(|| RicciError::UnknownVertex(id.to_string()))
    }

    pub fn check_vertex(&self, x: usize) -> Result<()> {
        if x < self.num_vertices() {
            Ok(())
        } else {
            Err(RicciError::UnknownVertex(x.to_string()))
        }
    }

    pub fn check_edge(&self, e: usize) -> Result<()> {
        if e < self.num_edges() {
            Ok(())
        } else {
            Err(RicciError::UnknownEdge(e))
        }
    }

    pub fn m1(&self, x: usize) -> f64 {
        self.m1[x]
    }

    pub fn vertex_measures(&self) -> &[f64] {
        &self.m1
    }

    pub fn m2(&self, e: usize) -> f64 {
        self.edges[e].m2
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Indices of edges incident to `x`, ascending.
    pub fn incident_edges(&self, x: usize) -> &[usize] {
        &self.incidence[x]
    }

    /// Neighbours of `x` paired with the connecting edge index.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.incidence[x].iter().map(move |&e| (self.edges[e].other(x), e))
    }

    /// Combinatorial degree `d(x)`.
    pub fn degree(&self, x: usize) -> usize {
        self.incidence[x].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.incidence[a].iter().copied().find(|&e| self.edges[e].other(a) == b)
    }

    /// Stable human-readable edge name `"<id_u>-<id_v>"`; survives edge removal.
    pub fn edge_label(&self, e: usize) -> String {
        let edge = &self.edges[e];
        format!("{}-{}", self.ids[edge.u], self.ids[edge.v])
    }

    /// `Deg(x) = Σ_{y∼x} m2(x,y) / m1(x)`.
    pub fn deg_measure(&self, x: usize) -> Result<f64> {
        self.check_vertex(x)?;
        Ok(self.deg_unchecked(x))
    }

    pub(crate) fn deg_unchecked(&self, x: usize) -> f64 {
        let total: f64 = self.incidence[x].iter().map(|&e| self.edges[e].m2).sum();
        total / self.m1[x]
    }

    pub fn max_deg_measure(&self) -> f64 {
        (0..self.num_vertices())
            .map(|x| self.deg_unchecked(x))
            .fold(0.0, f64::max)
    }

    /// True iff `|E| = |V| - 1` (the graph is connected by construction).
    pub fn is_tree(&self) -> bool {
        self.num_edges() + 1 == self.num_vertices()
    }

    pub fn has_uniform_measure(&self) -> bool {
        self.m1.iter().all(|&m| m == 1.0) && self.edges.iter().all(|e| e.m2 == 1.0)
    }

    /// Line-graph adjacency: `B[i][j] = 1` iff distinct edges `e_i`, `e_j` share a vertex.
    pub fn line_graph_adjacency(&self) -> DMatrix<f64> {
        let n = self.num_edges();
        let mut b = DMatrix::zeros(n, n);
        for inc in &self.incidence {
            for (a, &i) in inc.iter().enumerate() {
                for &j in &inc[a + 1..] {
                    b[(i, j)] = 1.0;
                    b[(j, i)] = 1.0;
                }
            }
        }
        b
    }

    /// Replaces the measures. `m2` is indexed by edge; `m1` recomputed by `mode`.
    pub fn with_measure(&self, mode: &MeasureMode) -> Result<Self> {
        let m = self.num_edges();
        let (m1, m2): (Vec<f64>, Vec<f64>) = match mode {
            MeasureMode::Uniform => (vec![1.0; self.num_vertices()], vec![1.0; m]),
            MeasureMode::NormalizedDeg1(values) => {
                if values.len() != m {
                    return Err(RicciError::InvalidParameter(format!(
                        "normalized measure needs {m} edge measures, got {}",
                        values.len()
                    )));
                }
                let m1 = (0..self.num_vertices())
                    .map(|x| self.incidence[x].iter().map(|&e| values[e]).sum())
                    .collect();
                (m1, values.clone())
            }
        };
        Self::new(
            self.ids.clone(),
            m1,
            self.edges.iter().zip(m2).map(|(e, w)| (e.u, e.v, w)).collect(),
        )
    }

    /// The graph with edge `e` deleted, or `None` if that disconnects it.
    pub fn without_edge(&self, e: usize) -> Option<MeasuredGraph> {
        if !self.connected_without(Some(e)) || self.num_edges() == 1 {
            return None;
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != e)
            .map(|(_, ed)| (ed.u, ed.v, ed.m2))
            .collect();
        Self::new(self.ids.clone(), self.m1.clone(), edges).ok()
    }

    fn connected_without(&self, skip: Option<usize>) -> bool {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for (y, e) in self.neighbors(x) {
                if Some(e) != skip && !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == n
    }
}

/// Choice of vertex/edge measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MeasureMode {
    /// `m1 ≡ 1`, `m2 ≡ 1`.
    Uniform,
    /// `m2` from the given per-edge values, `m1(x) = Σ_{y∼x} m2(x,y)`, so `Deg ≡ 1`.
    NormalizedDeg1(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFamily {
    /// Path with `n` edges on vertices `1..=n+1`.
    Path(usize),
    /// Star `K_{1,n}` with centre `0` and leaves `1..=n`.
    Star(usize),
    /// Cycle on `n` vertices `1..=n`.
    Cycle(usize),
    /// Complete graph on `n` vertices `1..=n`.
    Complete(usize),
}

impl GraphFamily {
    pub fn num_edges(&self) -> usize {
        match *self {
            GraphFamily::Path(n) | GraphFamily::Star(n) | GraphFamily::Cycle(n) => n,
            GraphFamily::Complete(n) => n * n.saturating_sub(1) / 2,
        }
    }
}

pub fn build_named_graph(family: GraphFamily, mode: &MeasureMode) -> Result<MeasuredGraph> {
    let (ids, edges): (Vec<String>, Vec<(usize, usize)>) = match family {
        GraphFamily::Path(n) => {
            if n < 1 {
                return Err(RicciError::InvalidParameter("path needs at least 1 edge".into()));
            }
            (
                (1..=n + 1).map(|i| i.to_string()).collect(),
                (0..n).map(|i| (i, i + 1)).collect(),
            )
        }
        GraphFamily::Star(n) => {
            if n < 1 {
                return Err(RicciError::InvalidParameter("star needs at least 1 edge".into()));
            }
            (
                (0..=n).map(|i| i.to_string()).collect(),
                (1..=n).map(|i| (0, i)).collect(),
            )
        }
        GraphFamily::Cycle(n) => {
            if n < 3 {
                return Err(RicciError::InvalidParameter("cycle needs at least 3 vertices".into()));
            }
            (
                (1..=n).map(|i| i.to_string()).collect(),
                (0..n).map(|i| (i, (i + 1) % n)).collect(),
            )
        }
        GraphFamily::Complete(n) => {
            if n < 3 {
                return Err(RicciError::InvalidParameter(
                    "complete graph needs at least 3 vertices".into(),
                ));
            }
            let mut es = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    es.push((i, j));
                }
            }
            ((1..=n).map(|i| i.to_string()).collect(), es)
        }
    };
    let nv = ids.len();
    let skeleton = MeasuredGraph::new(
        ids,
        vec![1.0; nv],
        edges.into_iter().map(|(u, v)| (u, v, 1.0)).collect(),
    )?;
    skeleton.with_measure(mode)
}

/// Positive weight `ω(e)` per edge, aligned with a graph's edge order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricAssignment(Vec<f64>);

impl MetricAssignment {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((edge, &value)) = weights.iter().enumerate().find(|(_, w)| !(**w > 0.0 && w.is_finite())) {
            return Err(RicciError::NonPositiveWeight { edge, value });
        }
        Ok(MetricAssignment(weights))
    }

    pub fn constant(num_edges: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; num_edges])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Rescaled to sum 1.
    pub fn normalized(&self) -> MetricAssignment {
        let s = self.total();
        MetricAssignment(self.0.iter().map(|w| w / s).collect())
    }

    pub fn scaled(&self, c: f64) -> Result<MetricAssignment> {
        Self::new(self.0.iter().map(|w| w * c).collect())
    }

    pub fn without(&self, e: usize) -> MetricAssignment {
        let mut w = self.0.clone();
        w.remove(e);
        MetricAssignment(w)
    }

    pub fn check_for(&self, g: &MeasuredGraph) -> Result<()> {
        if self.len() == g.num_edges() {
            Ok(())
        } else {
            Err(RicciError::MetricLength {
                expected: g.num_edges(),
                found: self.len(),
            })
        }
    }
}

impl std::ops::Index<usize> for MetricAssignment {
    type Output = f64;

    fn index(&self, e: usize) -> &f64 {
        &self.0[e]
    }
}
