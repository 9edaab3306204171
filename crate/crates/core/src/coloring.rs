use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("vertex {vertex} has color {color}, outside 1..={k}")]
    ColorOutOfRange { vertex: usize, color: usize, k: usize },
    #[error("malformed coloring at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// An assignment of colors `1..=k` to the vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    k: usize,
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(k: usize, colors: Vec<usize>) -> Result<Self, ColoringError> {
        if let Some((vertex, &color)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > k)
        {
            return Err(ColoringError::ColorOutOfRange { vertex, color, k });
        }
        Ok(Coloring { k, colors })
    }

    pub(crate) fn new_unchecked(k: usize, colors: Vec<usize>) -> Self {
        debug_assert!(colors.iter().all(|&c| (1..=k).contains(&c)));
        Coloring { k, colors }
    }

    /// Every vertex colored 1.
    pub fn monochromatic(n: usize) -> Self {
        Coloring {
            k: 1,
            colors: vec![1; n],
        }
    }

    /// Vertex `v` gets color `v + 1`.
    pub fn all_distinct(n: usize) -> Self {
        Coloring {
            k: n.max(1),
            colors: (1..=n).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Class sizes indexed by `color - 1`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.colors {
            sizes[c - 1] += 1;
        }
        sizes
    }

    /// Vertices of color `c`, ascending.
    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.colors[v] == c).collect()
    }

    pub fn distinct_colors(&self) -> usize {
        self.class_sizes().iter().filter(|&&s| s > 0).count()
    }

    /// Text format: header `n k`, then one `v c` line per vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.len() * 10);
        let _ = writeln!(out, "{} {}", self.len(), self.k);
        for (v, c) in self.colors.iter().enumerate() {
            let _ = writeln!(out, "{v} {c}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ColoringError> {
        let perr = |line: usize, reason: String| ColoringError::Parse { line, reason };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing header".into()))?;
        let [n, k] = two_ints(header).ok_or_else(|| perr(1, "expected `n k`".into()))?;
        let mut colors = vec![0; n];
        let mut filled = vec![false; n];
        let mut count = 0;
        for (idx, line) in lines {
            let [v, c] =
                two_ints(line).ok_or_else(|| perr(idx + 1, "expected `v c`".into()))?;
            if v >= n {
                return Err(perr(idx + 1, format!("vertex {v} out of range")));
            }
            if filled[v] {
                return Err(perr(idx + 1, format!("vertex {v} colored twice")));
            }
            filled[v] = true;
            colors[v] = c;
            count += 1;
        }
        if count != n {
            return Err(perr(1, format!("header promises {n} vertices, found {count}")));
        }
        Self::new(k, colors)
    }
}

fn two_ints(line: &str) -> Option<[usize; 2]> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    let a = it.next()?.ok()?;
    let b = it.next()?.ok()?;
    it.next().is_none().then_some([a, b])
}
