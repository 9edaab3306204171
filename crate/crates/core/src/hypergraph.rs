use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("edge {0} is empty")]
    EmptyEdge(usize),
    #[error("vertex {vertex} in edge {edge} is out of range for {n} vertices")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("malformed hypergraph at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A hypergraph on `0..n` whose edges are distinct nonempty sorted vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Sorts each edge and drops repeated vertices and repeated edges, keeping
    /// the first occurrence of every edge.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut kept = Vec::with_capacity(edges.len());
        for (i, mut edge) in edges.into_iter().enumerate() {
            edge.sort_unstable();
            edge.dedup();
            if edge.is_empty() {
                return Err(HypergraphError::EmptyEdge(i));
            }
            if let Some(&v) = edge.last().filter(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { edge: i, vertex: v, n });
            }
            if seen.insert(edge.clone()) {
                kept.push(edge);
            }
        }
        Ok(Hypergraph { n, edges: kept })
    }

    /// All `size`-subsets of `0..n` in lexicographic order.
    pub fn complete_uniform(n: usize, size: usize) -> Self {
        use itertools::Itertools;
        let edges = (0..n).combinations(size).collect();
        Hypergraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn min_edge_size(&self) -> Option<usize> {
        self.edges.iter().map(Vec::len).min()
    }

    /// Text format: header `n m`, then one line per edge listing its vertices.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        let perr = |line: usize, reason: &str| HypergraphError::Parse {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| perr(1, "header must be two integers"))?;
        let [n, m] = nums[..] else {
            return Err(perr(1, "header must be two integers"));
        };
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            let edge: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| perr(idx + 1, "edge must list integers"))?;
            edges.push(edge);
        }
        if edges.len() != m {
            return Err(perr(1, "edge count does not match header"));
        }
        Self::new(n, edges)
    }
}

/// The distinct open neighborhoods of `graph`, in order of first appearance.
pub fn neighborhood_hypergraph(graph: &Graph) -> Result<Hypergraph, GraphError> {
    graph.require_no_isolated()?;
    let mut seen = HashSet::with_capacity(graph.n());
    let mut edges = Vec::new();
    for v in 0..graph.n() {
        let nb = graph.neighbors(v);
        if seen.insert(nb) {
            edges.push(nb.to_vec());
        }
    }
    Ok(Hypergraph { n: graph.n(), edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_bipartite, cycle};

    #[test]
    fn c4_neighborhoods_dedup() {
        let h = neighborhood_hypergraph(&cycle(4).unwrap()).unwrap();
        assert_eq!(h.edges(), &[vec![1, 3], vec![0, 2]]);
    }

    #[test]
    fn k33_has_two_edges() {
        let h = neighborhood_hypergraph(&complete_bipartite(3).unwrap()).unwrap();
        assert_eq!(h.edges(), &[vec![3, 4, 5], vec![0, 1, 2]]);
    }

    #[test]
    fn c5_has_five_edges() {
        let h = neighborhood_hypergraph(&cycle(5).unwrap()).unwrap();
        assert_eq!(h.edges().len(), 5);
        assert!(h.edges().iter().all(|e| e.len() == 2));
    }

    #[test]
    fn isolated_vertex_rejected() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(
            neighborhood_hypergraph(&g),
            Err(GraphError::IsolatedVertex(2))
        );
    }

    #[test]
    fn new_validates_and_dedups() {
        let h = Hypergraph::new(4, vec![vec![2, 1], vec![1, 2], vec![3, 3, 0]]).unwrap();
        assert_eq!(h.edges(), &[vec![1, 2], vec![0, 3]]);
        assert_eq!(
            Hypergraph::new(3, vec![vec![]]),
            Err(HypergraphError::EmptyEdge(0))
        );
        assert!(matches!(
            Hypergraph::new(3, vec![vec![0, 3]]),
            Err(HypergraphError::VertexOutOfRange { vertex: 3, .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let h = Hypergraph::complete_uniform(5, 3);
        assert_eq!(h.edges().len(), 10);
        assert_eq!(Hypergraph::parse(&h.to_text()).unwrap(), h);
        assert!(Hypergraph::parse("3 2\n0 1\n").is_err());
    }
}
