//! Immutable simple undirected graphs in compressed adjacency form.

use std::fmt::Write as _;

use thiserror::Error;

use crate::field::FieldError;

/// Default cap on the number of vertices a generator may produce.
pub const DEFAULT_VERTEX_LIMIT: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph would have {requested} vertices, limit is {limit}")]
    Capacity { requested: u128, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("repeated edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("adjacency is not symmetric between {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("configuration model rejected {0} pairings in a row; lower the degree")]
    RejectionCapExceeded(usize),
    #[error("malformed edge list at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A simple undirected graph on the vertex set `0..n`.
///
/// Adjacency lists are sorted and free of loops and repeats. The graph never
/// changes after construction, so it can be shared freely between threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    regular: Option<usize>,
}

impl Graph {
    /// Builds a graph from per-vertex neighbor lists, validating that the
    /// lists describe a simple symmetric graph. Lists need not be sorted.
    pub fn from_adjacency(mut lists: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n = lists.len();
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            for w in list.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::DuplicateEdge(v.min(w[0]), v.max(w[0])));
                }
            }
            if let Some(&last) = list.last() {
                if last >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: last, n });
                }
            }
            if list.binary_search(&v).is_ok() {
                return Err(GraphError::SelfLoop(v));
            }
        }
        for (v, list) in lists.iter().enumerate() {
            for &u in list {
                if lists[u].binary_search(&v).is_err() {
                    return Err(GraphError::Asymmetric(v, u));
                }
            }
        }
        Ok(Self::from_sorted_lists(lists))
    }

    /// Builds a graph from an edge list. Each unordered pair may appear once.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        Self::from_adjacency(lists)
    }

    /// Trusted constructor for generators: lists must already be sorted,
    /// simple and symmetric.
    pub(crate) fn from_sorted_lists(lists: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for list in &lists {
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        let mut g = Graph {
            offsets,
            neighbors,
            regular: None,
        };
        g.regular = g.compute_regular();
        g
    }

    fn compute_regular(&self) -> Option<usize> {
        let n = self.n();
        if n == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Minimum degree, or 0 for the empty graph.
    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Maximum degree, or 0 for the empty graph.
    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        self.regular
    }

    pub fn isolated_vertex(&self) -> Option<usize> {
        (0..self.n()).find(|&v| self.degree(v) == 0)
    }

    pub fn require_no_isolated(&self) -> Result<(), GraphError> {
        match self.isolated_vertex() {
            Some(v) => Err(GraphError::IsolatedVertex(v)),
            None => Ok(()),
        }
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Re-checks every structural invariant. Generators are expected to pass
    /// this; it is mostly useful in tests.
    pub fn audit(&self) -> Result<(), GraphError> {
        let n = self.n();
        for v in 0..n {
            let list = self.neighbors(v);
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(GraphError::DuplicateEdge(v.min(w[0]), v.max(w[0])));
                }
            }
            for &u in list {
                if u >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: u, n });
                }
                if u == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if !self.has_edge(u, v) {
                    return Err(GraphError::Asymmetric(v, u));
                }
            }
        }
        if self.regular != self.compute_regular() {
            return Err(GraphError::InvalidParameter(
                "cached regularity does not match degrees".into(),
            ));
        }
        Ok(())
    }

    /// Serializes to the edge-list text format: a header line `n m`, then
    /// one `u v` line per edge with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + self.edge_count() * 12);
        let _ = writeln!(out, "{} {}", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the edge-list text format written by [`Graph::to_edge_list`].
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let [n, m] = parse_pair(header, hline + 1)?;
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            let [u, v] = parse_pair(line, idx + 1)?;
            if u >= v {
                return Err(GraphError::Parse {
                    line: idx + 1,
                    reason: format!("expected u < v, got {u} {v}"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 1,
                reason: format!("header promises {m} edges, found {}", edges.len()),
            });
        }
        Self::from_edges(n, &edges)
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<[usize; 2], GraphError> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or_else(|| GraphError::Parse {
            line: lineno,
            reason: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| GraphError::Parse {
            line: lineno,
            reason: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let pair = [next()?, next()?];
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line: lineno,
            reason: "trailing tokens".into(),
        });
    }
    Ok(pair)
}
