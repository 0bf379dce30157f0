//! Simple undirected graphs in compressed adjacency form, the edge-list text
//! format, BFS distances and the isometric-path predicate.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Distance reported for vertices that cannot be reached from the source.
pub const UNREACHABLE: usize = usize::MAX;

/// A simple undirected graph over the vertex ids `0..n`.
///
/// Neighbor lists are sorted and free of duplicates, so adjacency queries are
/// a binary search.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("missing `n m` header line")]
    MissingHeader,
    #[error("header announces {expected} edges but {found} edge lines were read")]
    EdgeCountMismatch { expected: usize, found: usize },
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse to one.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            degree[u] += 1;
            degree[v] += 1;
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; offsets[n]];
        for &(u, v) in edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }

        // Sort and dedup each list, compacting in place.
        let mut compact = Vec::with_capacity(n + 1);
        compact.push(0);
        let mut write = 0;
        for v in 0..n {
            let (start, end) = (offsets[v], offsets[v + 1]);
            targets[start..end].sort_unstable();
            let mut last = None;
            for read in start..end {
                let t = targets[read];
                if last != Some(t) {
                    targets[write] = t;
                    write += 1;
                    last = Some(t);
                }
            }
            compact.push(write);
        }
        targets.truncate(write);

        Ok(Self {
            offsets: compact,
            targets,
        })
    }

    /// The graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Index of the arc `u -> v` in the flat adjacency array, if the edge exists.
    pub fn arc_index(&self, u: usize, v: usize) -> Option<usize> {
        let start = self.offsets[u];
        self.neighbors(u).binary_search(&v).ok().map(|i| start + i)
    }

    /// Half-open range of arc indices leaving `v`.
    pub(crate) fn arc_range(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub(crate) fn arc_target(&self, arc: usize) -> usize {
        self.targets[arc]
    }

    pub(crate) fn arc_count(&self) -> usize {
        self.targets.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && v < self.vertex_count() && self.arc_index(u, v).is_some()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Induced subgraph on `keep`, relabelled to `0..keep.len()` in the given order.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = keep
            .iter()
            .flat_map(|&u| {
                let index = &index;
                self.neighbors(u)
                    .iter()
                    .filter(move |&&v| index[v] != usize::MAX && u < v)
                    .map(move |&v| (index[u], index[v]))
            })
            .collect();
        Graph::from_edges(keep.len(), &edges).expect("subgraph of a simple graph is simple")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// An ordered vertex sequence. A single vertex is the trivial path.
///
/// Nothing about the host graph is enforced on construction; use
/// [`is_isometric_path`] to check a sequence against a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsometricPath(Vec<usize>);

impl IsometricPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        Self(vertices)
    }

    pub fn trivial(v: usize) -> Self {
        Self(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Orientation with the smaller endpoint first.
    pub fn normalized(mut self) -> Self {
        if self.0.first() > self.0.last() {
            self.0.reverse();
        }
        self
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for IsometricPath {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for IsometricPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v`.
/// Lines starting with `#` and blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (a, b) = parse_pair(content, line)?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a == b {
                    return Err(ParseError::SelfLoop { line, vertex: a });
                }
                for vertex in [a, b] {
                    if vertex >= n {
                        return Err(ParseError::VertexOutOfRange { line, vertex, n });
                    }
                }
                edges.push((a, b));
            }
        }
    }

    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_edges(n, &edges).expect("edges validated while parsing"))
}

fn parse_pair(content: &str, line: usize) -> Result<(usize, usize), ParseError> {
    let malformed = |message: String| ParseError::Malformed { line, message };
    let mut tokens = content.split_whitespace();
    let mut next = || -> Result<usize, ParseError> {
        let tok = tokens
            .next()
            .ok_or_else(|| malformed("expected two integers".into()))?;
        tok.parse()
            .map_err(|_| malformed(format!("`{tok}` is not a vertex id")))
    };
    let pair = (next()?, next()?);
    if let Some(extra) = tokens.next() {
        return Err(malformed(format!("unexpected token `{extra}`")));
    }
    Ok(pair)
}

/// Renders a graph in the edge-list format accepted by [`parse_edge_list`].
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.edge_count() + 1));
    out.push_str(&format!("{} {}\n", g.vertex_count(), g.edge_count()));
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Unweighted shortest-path distances from `source`; [`UNREACHABLE`] marks
/// vertices in other components.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// BFS distance between two vertices, stopping as soon as `target` is reached.
pub fn distance(g: &Graph, source: usize, target: usize) -> usize {
    if source == target {
        return 0;
    }
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                if v == target {
                    return dist[v];
                }
                queue.push_back(v);
            }
        }
    }
    UNREACHABLE
}

/// The sequence is a simple walk along edges of `g` whose length equals the
/// BFS distance between its ends. Malformed sequences yield `false`.
pub fn is_isometric_path(g: &Graph, p: &IsometricPath) -> bool {
    walk_is_simple_path(g, p.vertices())
        && distance(g, p.vertices()[0], *p.vertices().last().unwrap()) == p.len() - 1
}

/// Non-empty, in range, pairwise distinct, consecutive vertices adjacent.
pub(crate) fn walk_is_simple_path(g: &Graph, vs: &[usize]) -> bool {
    let n = g.vertex_count();
    if vs.is_empty() || vs.iter().any(|&v| v >= n) {
        return false;
    }
    if vs.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
        return false;
    }
    let mut sorted = vs.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Connected components, each sorted ascending, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut part = Vec::new();
        while let Some(u) = stack.pop() {
            part.push(u);
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    parts
}
