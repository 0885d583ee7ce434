//! Undirected simple graphs, the edge-list file format and exact-distance
//! neighborhoods.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} out of range for {n} vertices")]
    OutOfRange { line: usize, vertex: i64, n: usize },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("missing vertex count line")]
    MissingHeader,
    #[error("edge ({u}, {v}) invalid for {n} vertices")]
    InvalidEdge { u: usize, v: usize, n: usize },
}

/// Sorted, duplicate-free list of vertex indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Sorts and deduplicates `members`.
    pub fn from_unsorted(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn to_bitset(&self, n: usize) -> BitSet {
        let mut bits = BitSet::new(n);
        for &v in &self.0 {
            bits.insert(v);
        }
        bits
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

/// Undirected simple graph on vertices `0..n`.
///
/// Keeps sorted neighbor lists for traversal and one bit row per vertex for
/// constant-time adjacency queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    neighbors: Vec<Vec<usize>>,
    rows: Vec<BitSet>,
    n_edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            neighbors: vec![Vec::new(); n],
            rows: vec![BitSet::new(n); n],
            n_edges: 0,
        }
    }

    /// Builds a graph from unordered pairs; duplicates and both orientations
    /// collapse to a single edge.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(GraphError::InvalidEdge { u, v, n });
            }
            g.insert_edge(u, v);
        }
        g.finish();
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) {
        if self.rows[u].contains(v) {
            return;
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        self.neighbors[u].push(v);
        self.neighbors[v].push(u);
        self.n_edges += 1;
    }

    fn finish(&mut self) {
        for list in &mut self.neighbors {
            list.sort_unstable();
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.neighbors.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    #[inline]
    pub fn adj(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn adjacency_row(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n_vertices());
        Graph::from_edges(self.n_vertices(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("permutation of a valid graph")
    }

    /// Serializes in the edge-list format: the vertex count, then one `u v`
    /// line per edge with `u < v` in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.n_vertices()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        (!line.is_empty()).then_some((idx + 1, line))
    })
}

fn parse_int(token: &str, line: usize) -> Result<i64, GraphError> {
    token.parse::<i64>().map_err(|_| GraphError::Parse {
        line,
        msg: format!("expected an integer, found {token:?}"),
    })
}

/// Parses the edge-list format.
///
/// `#` starts a comment running to end of line and blank lines are skipped.
/// The first data line holds the vertex count, every further data line one
/// edge `u v`.
pub fn load_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = data_lines(text);
    let (header_line, header) = lines.next().ok_or(GraphError::MissingHeader)?;
    let mut tokens = header.split_whitespace();
    let n = parse_int(tokens.next().unwrap(), header_line)?;
    if n < 0 {
        return Err(GraphError::Parse {
            line: header_line,
            msg: format!("negative vertex count {n}"),
        });
    }
    if tokens.next().is_some() {
        return Err(GraphError::Parse {
            line: header_line,
            msg: "vertex count line must hold a single integer".into(),
        });
    }
    let n = n as usize;
    let mut g = Graph::empty(n);
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(GraphError::Parse {
                line,
                msg: format!("expected two vertex indices, found {} tokens", tokens.len()),
            });
        }
        let mut ends = [0usize; 2];
        for (slot, token) in ends.iter_mut().zip(&tokens) {
            let x = parse_int(token, line)?;
            if x < 0 || x as u64 >= n as u64 {
                return Err(GraphError::OutOfRange { line, vertex: x, n });
            }
            *slot = x as usize;
        }
        let [u, v] = ends;
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        g.insert_edge(u, v);
    }
    g.finish();
    Ok(g)
}

/// Breadth-first search from `source`, stopping after depth `max_depth`.
/// Returns the vertices grouped by distance `1..=max_depth`.
fn bfs_layers(g: &Graph, source: usize, max_depth: usize, dist: &mut [usize]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let mut layers = vec![Vec::new(); max_depth];
    let mut touched = vec![source];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let d = dist[u];
        if d == max_depth {
            continue;
        }
        for &v in g.neighbors(u) {
            if dist[v] == UNSEEN {
                dist[v] = d + 1;
                touched.push(v);
                layers[d].push(v);
                queue.push_back(v);
            }
        }
    }
    for v in touched {
        dist[v] = UNSEEN;
    }
    layers
}

/// Vertices at shortest-path distance exactly `k` from `i`.
pub fn k_ring(g: &Graph, i: usize, k: usize) -> VertexSet {
    assert!(k >= 1, "ring radius must be positive");
    assert!(i < g.n_vertices(), "vertex {i} out of range");
    let mut dist = vec![usize::MAX; g.n_vertices()];
    let mut layers = bfs_layers(g, i, k, &mut dist);
    VertexSet::from_unsorted(layers.pop().unwrap_or_default())
}

/// `k_ring(g, i, k)` for every vertex, one truncated BFS each.
pub fn k_rings_all(g: &Graph, k: usize) -> Vec<VertexSet> {
    rings_up_to(g, k).pop().expect("k >= 1")
}

/// Rings at every radius `1..=k`; element `r - 1` holds the radius-`r` rings.
pub fn rings_up_to(g: &Graph, k: usize) -> Vec<Vec<VertexSet>> {
    assert!(k >= 1, "ring radius must be positive");
    let n = g.n_vertices();
    let mut dist = vec![usize::MAX; n];
    let mut by_radius: Vec<Vec<VertexSet>> = (0..k).map(|_| Vec::with_capacity(n)).collect();
    for i in 0..n {
        for (r, layer) in bfs_layers(g, i, k, &mut dist).into_iter().enumerate() {
            by_radius[r].push(VertexSet::from_unsorted(layer));
        }
    }
    by_radius
}
