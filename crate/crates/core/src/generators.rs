//! Tree enumeration and random graph generation.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::graph::MeasuredGraph;

pub type EdgeList = Vec<(usize, usize)>;

/// All pairwise non-isomorphic trees with `num_edges` edges.
///
/// Rooted trees are listed as level sequences in reverse lexicographic order
/// and deduplicated by a canonical form rooted at the tree's centre.
pub fn enumerate_trees(num_edges: usize) -> Vec<EdgeList> {
    let n = num_edges + 1;
    if n < 2 {
        return Vec::new();
    }
    let mut levels: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    loop {
        let edges = edges_from_levels(&levels);
        if seen.insert(canonical_form(n, &edges)) {
            out.push(edges);
        }
        let Some(p) = (1..n).rev().find(|&i| levels[i] > 1) else {
            break;
        };
        let q = (0..p)
            .rev()
            .find(|&i| levels[i] == levels[p] - 1)
            .expect("parent level exists");
        for i in p..n {
            levels[i] = levels[i - (p - q)];
        }
    }
    out
}

fn edges_from_levels(levels: &[usize]) -> EdgeList {
    let mut last_at_level = vec![0usize; levels.len()];
    let mut edges = Vec::with_capacity(levels.len() - 1);
    for (i, &l) in levels.iter().enumerate() {
        if i > 0 {
            edges.push((last_at_level[l - 1], i));
        }
        last_at_level[l] = i;
    }
    edges
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Isomorphism-invariant string of a tree.
pub fn canonical_form(n: usize, edges: &[(usize, usize)]) -> String {
    let adj = adjacency(n, edges);
    centers(&adj)
        .into_iter()
        .map(|c| encode(&adj, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut children: Vec<String> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| encode(adj, u, v))
        .collect();
    children.sort();
    format!("({})", children.concat())
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in &adj[v] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer
}

/// A uniformly random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, num_vertices: usize) -> EdgeList {
    (1..num_vertices).map(|i| (rng.gen_range(0..i), i)).collect()
}

/// A random tree with a degree-3 vertex one of whose branches is a pendant
/// chain of length at least 2. Needs `num_vertices ≥ 5`.
pub fn random_spider_tree<R: Rng + ?Sized>(rng: &mut R, num_vertices: usize) -> EdgeList {
    assert!(num_vertices >= 5, "spider tree needs at least 5 vertices");
    let chain_len = rng.gen_range(2..=(num_vertices - 3).min(4));
    // centre 0; chain 1..=chain_len; branch roots b1, b2
    let mut edges = vec![(0, 1)];
    for i in 1..chain_len {
        edges.push((i, i + 1));
    }
    let b1 = chain_len + 1;
    let b2 = chain_len + 2;
    edges.push((0, b1));
    edges.push((0, b2));
    let mut attachable = vec![b1, b2];
    for v in chain_len + 3..num_vertices {
        let &p = attachable.choose(rng).expect("non-empty");
        edges.push((p, v));
        attachable.push(v);
    }
    relabel(rng, num_vertices, edges)
}

fn relabel<R: Rng + ?Sized>(rng: &mut R, n: usize, edges: EdgeList) -> EdgeList {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    edges.into_iter().map(|(a, b)| (perm[a], perm[b])).collect()
}

/// True if some vertex of degree exactly 3 has a neighbour starting a pendant
/// path (internal vertices of degree 2, ending in a leaf) with at least 2 edges.
pub fn has_degree3_pendant_chain(n: usize, edges: &[(usize, usize)]) -> bool {
    let adj = adjacency(n, edges);
    (0..n).filter(|&c| adj[c].len() == 3).any(|c| {
        adj[c].iter().any(|&first| {
            let (mut prev, mut cur, mut len) = (c, first, 1);
            while adj[cur].len() == 2 {
                let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = next;
                len += 1;
            }
            adj[cur].len() == 1 && len >= 2
        })
    })
}

/// A random spanning tree plus `extra_edges` distinct chords (as many as fit).
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, num_vertices: usize, extra_edges: usize) -> EdgeList {
    let tree = random_tree(rng, num_vertices);
    let mut edges = relabel(rng, num_vertices, tree);
    let mut present: BTreeSet<(usize, usize)> = edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut chords: Vec<(usize, usize)> = (0..num_vertices)
        .flat_map(|a| (a + 1..num_vertices).map(move |b| (a, b)))
        .filter(|p| !present.contains(p))
        .collect();
    chords.shuffle(rng);
    for c in chords.into_iter().take(extra_edges) {
        present.insert(c);
        edges.push(c);
    }
    edges
}

/// Graph with vertex and edge measures drawn uniformly from `range`.
pub fn random_measured_graph<R: Rng + ?Sized>(
    rng: &mut R,
    num_vertices: usize,
    edges: &[(usize, usize)],
    range: (f64, f64),
) -> Result<MeasuredGraph> {
    let ids = (0..num_vertices).map(|i| (i + 1).to_string()).collect();
    let m1 = (0..num_vertices).map(|_| rng.gen_range(range.0..range.1)).collect();
    let e = edges
        .iter()
        .map(|&(a, b)| (a, b, rng.gen_range(range.0..range.1)))
        .collect();
    MeasuredGraph::new(ids, m1, e)
}
