//! Defining graphs of right-angled Artin groups.
//!
//! A [`SimplicialGraph`] is a finite simple graph whose vertex order is fixed
//! when it is parsed. That order is load-bearing: clique orientation, simplex
//! ordering and the sign conventions of every boundary matrix derive from it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on the number of vertices accepted by the parser.
pub const DEFAULT_MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("invalid vertex label {0:?} (expected [A-Za-z0-9_]+)")]
    InvalidLabel(String),
    #[error("edge {a}-{b} references undeclared vertex {missing}")]
    UndeclaredVertex {
        a: String,
        b: String,
        missing: String,
    },
    #[error("loop at vertex {0}")]
    Loop(String),
    #[error("duplicate vertex label {0}")]
    DuplicateVertex(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph has {count} vertices, limit is {limit}")]
    TooManyVertices { count: usize, limit: usize },
    #[error("vertex sets of the two graphs overlap at {0}")]
    LabelCollision(String),
}

impl GraphError {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::Syntax { .. } => "graph.syntax",
            GraphError::Json(_) => "graph.json",
            GraphError::InvalidLabel(_) => "graph.invalid_label",
            GraphError::UndeclaredVertex { .. } => "graph.undeclared_vertex",
            GraphError::Loop(_) => "graph.loop",
            GraphError::DuplicateVertex(_) => "graph.duplicate_vertex",
            GraphError::DuplicateEdge(..) => "graph.duplicate_edge",
            GraphError::Empty => "graph.empty",
            GraphError::TooManyVertices { .. } => "graph.too_many_vertices",
            GraphError::LabelCollision(_) => "graph.label_collision",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub max_vertices: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

/// Finite simple graph with labelled vertices in a fixed order.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    labels: Vec<String>,
    adjacency: Vec<Vec<bool>>,
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SimplicialGraph {
    /// Builds a graph from vertex indices. Edges must be distinct, loop-free
    /// and refer to existing vertices.
    pub fn from_indices(
        labels: Vec<String>,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        if labels.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !valid_label(l) {
                return Err(GraphError::InvalidLabel(l.clone()));
            }
            if !seen.insert(l.as_str()) {
                return Err(GraphError::DuplicateVertex(l.clone()));
            }
        }
        let n = labels.len();
        let mut adjacency = vec![vec![false; n]; n];
        for &(a, b) in edges {
            assert!(a < n && b < n, "edge endpoint out of range");
            if a == b {
                return Err(GraphError::Loop(labels[a].clone()));
            }
            if adjacency[a][b] {
                return Err(GraphError::DuplicateEdge(
                    labels[a].clone(),
                    labels[b].clone(),
                ));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        Ok(SimplicialGraph { labels, adjacency })
    }

    /// Builds a graph from labels, validating every edge endpoint.
    pub fn from_labels<S: AsRef<str>>(
        vertices: &[S],
        edges: &[(S, S)],
    ) -> Result<Self, GraphError> {
        let labels: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut idx_edges = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let lookup = |x: &str| {
                index.get(x).copied().ok_or_else(|| GraphError::UndeclaredVertex {
                    a: a.to_string(),
                    b: b.to_string(),
                    missing: x.to_string(),
                })
            };
            idx_edges.push((lookup(a)?, lookup(b)?));
        }
        Self::from_indices(labels, &idx_edges)
    }

    /// Edgeless graph `v0 .. v{n-1}`.
    pub fn edgeless(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        Self::from_indices(labels, &[]).expect("edgeless graph is valid")
    }

    /// Complete graph `v0 .. v{n-1}`.
    pub fn complete(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::from_indices(labels, &edges).expect("complete graph is valid")
    }

    /// Cycle `v0 - v1 - ... - v{n-1} - v0`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_indices(labels, &edges).expect("cycle is valid")
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("v{i}")).collect();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_indices(labels, &edges).expect("path is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v]
            .iter()
            .enumerate()
            .filter_map(|(u, &adj)| adj.then_some(u))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].iter().filter(|&&a| a).count()
    }

    /// Edges as index pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adjacency[a][b])
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.edge_count() == n * (n - 1) / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.edge_count() == 0
    }

    /// Induced subgraph on `subset`, keeping the order of `subset`.
    pub fn induced(&self, subset: &[usize]) -> SimplicialGraph {
        let labels = subset.iter().map(|&v| self.labels[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &a) in subset.iter().enumerate() {
            for (j, &b) in subset.iter().enumerate().skip(i + 1) {
                if self.adjacency[a][b] {
                    edges.push((i, j));
                }
            }
        }
        SimplicialGraph::from_indices(labels, &edges).expect("induced subgraph is valid")
    }

    /// Connected components of the subgraph induced on `subset`, each sorted,
    /// ordered by their smallest vertex.
    pub fn components_of(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let inside: BTreeSet<usize> = subset.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for &start in &inside {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if inside.contains(&u) && seen.insert(u) {
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Graph of the direct product `GX × GY`: disjoint union plus every cross
    /// edge. Fails if the label sets overlap.
    pub fn join(&self, other: &SimplicialGraph) -> Result<SimplicialGraph, GraphError> {
        if let Some(l) = self.labels.iter().find(|l| other.labels.contains(l)) {
            return Err(GraphError::LabelCollision(l.clone()));
        }
        let n = self.vertex_count();
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut edges = self.edges();
        edges.extend(other.edges().into_iter().map(|(a, b)| (a + n, b + n)));
        for a in 0..n {
            for b in 0..other.vertex_count() {
                edges.push((a, n + b));
            }
        }
        SimplicialGraph::from_indices(labels, &edges)
    }

    /// Like [`join`](Self::join), but suffixes every label with `_1` / `_2`
    /// when the two label sets overlap.
    pub fn join_relabeled(&self, other: &SimplicialGraph) -> SimplicialGraph {
        product_graph(&[self.clone(), other.clone()])
    }

    fn with_suffix(&self, suffix: &str) -> SimplicialGraph {
        SimplicialGraph {
            labels: self.labels.iter().map(|l| format!("{l}{suffix}")).collect(),
            adjacency: self.adjacency.clone(),
        }
    }

    /// Plain text serialization; `parse_graph` reads it back unchanged.
    pub fn to_plain(&self) -> String {
        let edges: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(a, b)| format!("{}-{}", self.labels[a], self.labels[b]))
            .collect();
        let edges = if edges.is_empty() {
            "edges:".to_string()
        } else {
            format!("edges: {}", edges.join(" "))
        };
        format!("vertices: {}\n{}\n", self.labels.join(" "), edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = JsonGraph {
            vertices: self.labels.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        };
        serde_json::to_value(doc).expect("graph serializes")
    }
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialGraph({})", self.to_plain().trim_end().replace('\n', "; "))
    }
}

/// Graph of a direct product of RAAGs: the iterated join. If any labels
/// collide, factor `i` gets the suffix `_{i+1}` on every label.
pub fn product_graph(factors: &[SimplicialGraph]) -> SimplicialGraph {
    assert!(!factors.is_empty(), "product of no factors");
    let mut seen = BTreeSet::new();
    let distinct = factors
        .iter()
        .flat_map(|f| f.labels.iter())
        .all(|l| seen.insert(l.as_str()));
    let renamed: Vec<SimplicialGraph> = if distinct {
        factors.to_vec()
    } else {
        factors
            .iter()
            .enumerate()
            .map(|(i, f)| f.with_suffix(&format!("_{}", i + 1)))
            .collect()
    };
    renamed[1..]
        .iter()
        .try_fold(renamed[0].clone(), |acc, f| acc.join(f))
        .expect("labels are distinct")
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<[String; 2]>,
}

/// Parses either the plain or the JSON graph format, chosen by the first
/// non-blank character.
pub fn parse_graph(text: &str) -> Result<SimplicialGraph, GraphError> {
    parse_graph_with(text, &ParseOptions::default())
}

pub fn parse_graph_with(text: &str, opts: &ParseOptions) -> Result<SimplicialGraph, GraphError> {
    let graph = if text.trim_start().starts_with('{') {
        parse_json(text)?
    } else {
        parse_plain(text)?
    };
    if graph.vertex_count() > opts.max_vertices {
        return Err(GraphError::TooManyVertices {
            count: graph.vertex_count(),
            limit: opts.max_vertices,
        });
    }
    Ok(graph)
}

fn parse_json(text: &str) -> Result<SimplicialGraph, GraphError> {
    let doc: JsonGraph = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    for v in &doc.vertices {
        if !valid_label(v) {
            return Err(GraphError::InvalidLabel(v.clone()));
        }
    }
    let edges: Vec<(&str, &str)> = doc
        .edges
        .iter()
        .map(|[a, b]| (a.as_str(), b.as_str()))
        .collect();
    let vertices: Vec<&str> = doc.vertices.iter().map(String::as_str).collect();
    SimplicialGraph::from_labels(&vertices, &edges)
}

fn parse_plain(text: &str) -> Result<SimplicialGraph, GraphError> {
    let mut vertices: Option<Vec<&str>> = None;
    let mut edges: Option<Vec<(&str, &str)>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| GraphError::Syntax {
            line: lineno,
            message,
        };
        if let Some(rest) = line.strip_prefix("vertices:") {
            if vertices.is_some() {
                return Err(syntax("repeated vertices line".into()));
            }
            let labels: Vec<&str> = rest.split_whitespace().collect();
            for l in &labels {
                if !valid_label(l) {
                    return Err(syntax(format!("invalid vertex label {l:?}")));
                }
            }
            vertices = Some(labels);
        } else if let Some(rest) = line.strip_prefix("edges:") {
            if edges.is_some() {
                return Err(syntax("repeated edges line".into()));
            }
            let mut list = Vec::new();
            for tok in rest.split_whitespace() {
                let mut parts = tok.split('-');
                match (parts.next(), parts.next(), parts.next()) {
                    (Some(a), Some(b), None) if valid_label(a) && valid_label(b) => {
                        list.push((a, b))
                    }
                    _ => return Err(syntax(format!("malformed edge {tok:?}"))),
                }
            }
            edges = Some(list);
        } else {
            return Err(syntax(format!("unrecognized line {line:?}")));
        }
    }
    let vertices = vertices.ok_or(GraphError::Syntax {
        line: 0,
        message: "missing vertices line".into(),
    })?;
    SimplicialGraph::from_labels(&vertices, &edges.unwrap_or_default())
}

/// Forbidden induced subgraph pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pattern {
    /// Induced 4-cycle (a square).
    C4,
    /// Induced path on 4 vertices (3 edges).
    P4,
    /// Induced cycle of the given length; lengths below 3 never match.
    Cycle(usize),
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::C4 => write!(f, "C4"),
            Pattern::P4 => write!(f, "P4"),
            Pattern::Cycle(n) => write!(f, "C{n}"),
        }
    }
}

/// Finds the lexicographically least vertex tuple (in declared order) that
/// induces `pattern`, listed along the path or cycle.
pub fn has_induced(graph: &SimplicialGraph, pattern: Pattern) -> Option<Vec<usize>> {
    let (len, closed) = match pattern {
        Pattern::C4 => (4, true),
        Pattern::P4 => (4, false),
        Pattern::Cycle(n) if n >= 3 => (n, true),
        Pattern::Cycle(_) => return None,
    };
    if graph.vertex_count() < len {
        return None;
    }
    let mut tuple = Vec::with_capacity(len);
    let mut used = vec![false; graph.vertex_count()];
    if extend_induced(graph, len, closed, &mut tuple, &mut used) {
        Some(tuple)
    } else {
        None
    }
}

fn extend_induced(
    g: &SimplicialGraph,
    len: usize,
    closed: bool,
    tuple: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    if tuple.len() == len {
        return true;
    }
    let k = tuple.len();
    for v in 0..g.vertex_count() {
        if used[v] {
            continue;
        }
        let ok = if k == 0 {
            true
        } else {
            let last = tuple[k - 1];
            let closing = closed && k == len - 1;
            g.adjacent(last, v)
                && tuple[..k - 1].iter().enumerate().all(|(i, &u)| {
                    if closing && i == 0 {
                        g.adjacent(u, v)
                    } else {
                        !g.adjacent(u, v)
                    }
                })
        };
        if ok {
            tuple.push(v);
            used[v] = true;
            if extend_induced(g, len, closed, tuple, used) {
                return true;
            }
            used[v] = false;
            tuple.pop();
        }
    }
    false
}

/// Perfect elimination ordering, if the graph is chordal.
///
/// Repeatedly removes a simplicial vertex of least original degree (ties by
/// declared order). Each vertex's later neighbours in the result form a clique.
pub fn perfect_elimination_order(graph: &SimplicialGraph) -> Option<Vec<usize>> {
    let n = graph.vertex_count();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let pick = (0..n)
            .filter(|&v| alive[v] && is_simplicial(graph, v, &alive))
            .min_by_key(|&v| (graph.degree(v), v))?;
        alive[pick] = false;
        order.push(pick);
    }
    Some(order)
}

fn is_simplicial(g: &SimplicialGraph, v: usize, alive: &[bool]) -> bool {
    let nbrs: Vec<usize> = g.neighbors(v).filter(|&u| alive[u]).collect();
    nbrs.iter()
        .enumerate()
        .all(|(i, &a)| nbrs[i + 1..].iter().all(|&b| g.adjacent(a, b)))
}

pub fn is_chordal(graph: &SimplicialGraph) -> bool {
    perfect_elimination_order(graph).is_some()
}

/// Checks that every vertex's later neighbours in `order` form a clique.
pub fn is_perfect_elimination_order(graph: &SimplicialGraph, order: &[usize]) -> bool {
    let n = graph.vertex_count();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    order.iter().enumerate().all(|(i, &v)| {
        let later: Vec<usize> = graph.neighbors(v).filter(|&u| pos[u] > i).collect();
        later
            .iter()
            .enumerate()
            .all(|(k, &a)| later[k + 1..].iter().all(|&b| graph.adjacent(a, b)))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub pattern: Pattern,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_droms: bool,
    pub is_chordal: bool,
    pub is_complete: bool,
    pub is_edgeless: bool,
    pub witness: Option<Witness>,
}

/// Droms test (no induced C4, no induced P4) plus chordality and shape flags.
pub fn classify(graph: &SimplicialGraph) -> Classification {
    let witness = [Pattern::C4, Pattern::P4].into_iter().find_map(|p| {
        has_induced(graph, p).map(|vs| Witness {
            pattern: p,
            vertices: vs.iter().map(|&v| graph.label(v).to_string()).collect(),
        })
    });
    Classification {
        is_droms: witness.is_none(),
        is_chordal: is_chordal(graph),
        is_complete: graph.is_complete(),
        is_edgeless: graph.is_edgeless(),
        witness,
    }
}

/// All cliques of a graph grouped by vertex count, including the empty one.
#[derive(Debug, Clone)]
pub struct CliqueTable {
    by_size: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl CliqueTable {
    /// Number of vertices of the largest clique.
    pub fn clique_number(&self) -> usize {
        self.by_size.len() - 1
    }

    /// Cliques with `k` vertices, each sorted, in lexicographic order.
    pub fn of_size(&self, k: usize) -> &[Vec<usize>] {
        self.by_size.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, k: usize) -> usize {
        self.of_size(k).len()
    }

    /// `n_k` for `k = 0..=ω`.
    pub fn counts(&self) -> Vec<usize> {
        self.by_size.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.by_size.iter().map(Vec::len).sum()
    }

    /// Position of a sorted clique within its size class.
    pub fn position(&self, clique: &[usize]) -> Option<usize> {
        self.index.get(clique.len())?.get(clique).copied()
    }
}

pub fn cliques(graph: &SimplicialGraph) -> CliqueTable {
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
    let mut current = Vec::new();
    let all: Vec<usize> = (0..graph.vertex_count()).collect();
    grow_cliques(graph, &mut current, &all, &mut by_size);
    for group in &mut by_size {
        group.sort();
    }
    let index = by_size
        .iter()
        .map(|group| {
            group
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), i))
                .collect()
        })
        .collect();
    CliqueTable { by_size, index }
}

fn grow_cliques(
    g: &SimplicialGraph,
    current: &mut Vec<usize>,
    candidates: &[usize],
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    for (i, &v) in candidates.iter().enumerate() {
        current.push(v);
        if out.len() <= current.len() {
            out.push(Vec::new());
        }
        out[current.len()].push(current.clone());
        let next: Vec<usize> = candidates[i + 1..]
            .iter()
            .copied()
            .filter(|&u| g.adjacent(v, u))
            .collect();
        grow_cliques(g, current, &next, out);
        current.pop();
    }
}
