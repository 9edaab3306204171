//! Exact validators for coupon colorings, injective colorings and total
//! domination. Everything else in the crate is tested against these.
//!
//! Neighborhoods are always open. On failure the witness reported is the one
//! attached to the lowest-indexed offending vertex.

use thiserror::Error;

use crate::coloring::Coloring;
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("coloring has {coloring} entries but the graph has {graph} vertices")]
    LengthMismatch { coloring: usize, graph: usize },
    #[error("vertex {vertex} has color {color}, outside 1..={k}")]
    ColorOutOfRange { vertex: usize, color: usize, k: usize },
    #[error("vertex {vertex} is out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// Outcome of a check: valid, or invalid with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check<W> {
    Valid,
    Invalid(W),
}

impl<W> Check<W> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Check::Valid)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Valid => None,
            Check::Invalid(w) => Some(w),
        }
    }
}

/// Vertex whose neighborhood lacks a color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MissingColor {
    pub vertex: usize,
    pub color: usize,
}

/// Path `u - middle - v` whose ends share a color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SharedColorPath {
    pub u: usize,
    pub middle: usize,
    pub v: usize,
}

fn check_length(g: &Graph, c: &Coloring) -> Result<(), VerifyError> {
    if c.len() != g.n() {
        return Err(VerifyError::LengthMismatch {
            coloring: c.len(),
            graph: g.n(),
        });
    }
    Ok(())
}

/// True iff every open neighborhood contains all of the colors `1..=k`.
///
/// Colors above `k` are an error; a coloring that simply never uses some
/// color in `1..=k` fails with that color as the witness.
pub fn check_coupon(g: &Graph, c: &Coloring, k: usize) -> Result<Check<MissingColor>, VerifyError> {
    check_length(g, c)?;
    if let Some(vertex) = (0..c.len()).find(|&v| c.color(v) > k) {
        return Err(VerifyError::ColorOutOfRange {
            vertex,
            color: c.color(vertex),
            k,
        });
    }
    // stamp[color] == v + 1 marks the color as seen around v
    let mut stamp = vec![0usize; k + 1];
    for v in 0..g.n() {
        let mark = v + 1;
        let mut seen = 0;
        for &u in g.neighbors(v) {
            let col = c.color(u);
            if stamp[col] != mark {
                stamp[col] = mark;
                seen += 1;
            }
        }
        if seen < k {
            let color = (1..=k).find(|&col| stamp[col] != mark).unwrap();
            return Ok(Check::Invalid(MissingColor { vertex: v, color }));
        }
    }
    Ok(Check::Valid)
}

/// True iff no two distinct neighbors of any vertex share a color.
pub fn check_injective(g: &Graph, c: &Coloring) -> Result<Check<SharedColorPath>, VerifyError> {
    check_length(g, c)?;
    let k = c.colors().iter().copied().max().unwrap_or(0);
    let mut owner = vec![(0usize, 0usize); k + 1];
    for w in 0..g.n() {
        let mark = w + 1;
        for &u in g.neighbors(w) {
            let col = c.color(u);
            let (m, first) = owner[col];
            if m == mark {
                return Ok(Check::Invalid(SharedColorPath {
                    u: first,
                    middle: w,
                    v: u,
                }));
            }
            owner[col] = (mark, u);
        }
    }
    Ok(Check::Valid)
}

/// True iff every vertex, members of `set` included, has a neighbor in `set`.
/// The witness is the lowest undominated vertex.
pub fn check_total_dominating(g: &Graph, set: &[usize]) -> Result<Check<usize>, VerifyError> {
    let mut member = vec![false; g.n()];
    for &v in set {
        if v >= g.n() {
            return Err(VerifyError::VertexOutOfRange { vertex: v, n: g.n() });
        }
        member[v] = true;
    }
    Ok(
        match (0..g.n()).find(|&v| !g.neighbors(v).iter().any(|&u| member[u])) {
            Some(v) => Check::Invalid(v),
            None => Check::Valid,
        },
    )
}

/// Plain (closed-neighborhood) domination: every vertex is in `set` or has a
/// neighbor there.
pub fn check_dominating(g: &Graph, set: &[usize]) -> Result<Check<usize>, VerifyError> {
    let mut member = vec![false; g.n()];
    for &v in set {
        if v >= g.n() {
            return Err(VerifyError::VertexOutOfRange { vertex: v, n: g.n() });
        }
        member[v] = true;
    }
    Ok(
        match (0..g.n()).find(|&v| !member[v] && !g.neighbors(v).iter().any(|&u| member[u])) {
            Some(v) => Check::Invalid(v),
            None => Check::Valid,
        },
    )
}
