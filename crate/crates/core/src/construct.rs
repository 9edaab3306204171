//! Explicit colorings of Hamming graphs built from finite fields and Hamming
//! codes.
//!
//! Words are encoded as in [`crate::generators::hamming_graph`]: vertex `x`
//! has little-endian base-q digits, digit `j` being coordinate `j`.
//! Syndromes are encoded the same way (row `i` of the parity-check matrix is
//! digit `i`), and the color of a word is its syndrome encoding plus one.

use thiserror::Error;

use crate::coloring::Coloring;
use crate::field::{FieldError, FiniteField};
use crate::generators::checked_power;
use crate::graph::DEFAULT_VERTEX_LIMIT;

/// Largest exponent accepted by [`boolean_cube_coloring`] by default; `r = 4`
/// already colors the 65,536-vertex cube of dimension 16.
pub const MAX_CUBE_EXPONENT: u32 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("construction needs {requested} vertices, limit is {limit}")]
    Capacity { requested: u128, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("code has length {code_len} over GF({code_q}) but the target is H({len}, {q})")]
    DimensionMismatch {
        code_len: usize,
        code_q: usize,
        len: usize,
        q: usize,
    },
}

fn capacity(requested: Option<u128>) -> Result<usize, ConstructError> {
    let requested = requested.unwrap_or(u128::MAX);
    if requested > DEFAULT_VERTEX_LIMIT as u128 {
        return Err(ConstructError::Capacity {
            requested,
            limit: DEFAULT_VERTEX_LIMIT,
        });
    }
    Ok(requested as usize)
}

/// Coupon coloring of the cube `H(2^r, 2)` with `2^r` colors.
///
/// Coordinate `j` stands for field element `j` of GF(2^r); a vertex is colored
/// by one plus the field sum of the elements in its support. Flipping a single
/// coordinate adds that coordinate's element, so the `2^r` neighbors of any
/// vertex see every color exactly once.
pub fn boolean_cube_coloring(r: u32) -> Result<Coloring, ConstructError> {
    boolean_cube_coloring_with_limit(r, MAX_CUBE_EXPONENT)
}

pub fn boolean_cube_coloring_with_limit(r: u32, max_r: u32) -> Result<Coloring, ConstructError> {
    if r == 0 {
        return Err(ConstructError::InvalidParameter("r must be at least 1".into()));
    }
    // the cube of dimension 2^r has 2^(2^r) vertices
    let cube_size = |r: u32| {
        1usize
            .checked_shl(r)
            .and_then(|len| checked_power(2, len))
            .unwrap_or(u128::MAX)
    };
    if r > max_r {
        return Err(ConstructError::Capacity {
            requested: cube_size(r),
            limit: usize::try_from(cube_size(max_r)).unwrap_or(usize::MAX),
        });
    }
    let field = FiniteField::new(2, r)?;
    let len = field.order();
    let n = capacity(checked_power(2, len))?;
    let colors = (0..n)
        .map(|v| {
            let mut sum = 0;
            let mut bits = v;
            while bits != 0 {
                let coordinate = bits.trailing_zeros() as usize;
                sum = field.add(sum, coordinate);
                bits &= bits - 1;
            }
            sum + 1
        })
        .collect();
    Ok(Coloring::new_unchecked(len, colors))
}

/// Parity-check matrix of the Hamming code over GF(q) with `dim` rows.
///
/// Columns are the nonzero vectors of GF(q)^dim whose topmost nonzero entry
/// is 1, listed in lexicographic order reading each column top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HammingCode {
    field: FiniteField,
    dim: usize,
    columns: Vec<Vec<usize>>,
}

impl HammingCode {
    pub fn new(q: usize, dim: usize) -> Result<Self, ConstructError> {
        let field = FiniteField::with_order(q)?;
        if dim == 0 {
            return Err(ConstructError::InvalidParameter(
                "code dimension must be at least 1".into(),
            ));
        }
        let total = capacity(checked_power(q, dim))?;
        let len = (total - 1) / (q - 1);
        capacity(Some(len as u128))?;
        let mut columns = Vec::with_capacity(len);
        // Enumerate vectors with the top entry as the most significant digit,
        // which yields lexicographic order directly.
        for code in 1..total {
            let mut col = vec![0; dim];
            let mut x = code;
            for i in (0..dim).rev() {
                col[i] = x % q;
                x /= q;
            }
            if col.iter().find(|&&e| e != 0) == Some(&1) {
                columns.push(col);
            }
        }
        debug_assert_eq!(columns.len(), len);
        Ok(HammingCode { field, dim, columns })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    /// Number of rows, the dimension of the syndrome space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Code length `(q^dim - 1) / (q - 1)`.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Column `j`, top entry first.
    pub fn column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        self.columns[col][row]
    }

    /// Number of syndromes, `q^dim`.
    pub fn syndrome_count(&self) -> usize {
        self.q().pow(self.dim as u32)
    }

    /// Syndrome of the word with the given digits.
    pub fn syndrome(&self, word: &[usize]) -> Vec<usize> {
        let f = &self.field;
        let mut s = vec![0; self.dim];
        for (col, &x) in self.columns.iter().zip(word) {
            if x == 0 {
                continue;
            }
            for (si, &a) in s.iter_mut().zip(col) {
                *si = f.add(*si, f.mul(a, x));
            }
        }
        s
    }

    /// Little-endian base-q encoding of a syndrome vector.
    pub fn encode_syndrome(&self, s: &[usize]) -> usize {
        s.iter().rev().fold(0, |acc, &d| acc * self.q() + d)
    }

    /// Syndrome encoding of the word whose digits are those of `x`.
    pub fn syndrome_of_index(&self, x: usize) -> usize {
        let word = digits(x, self.q(), self.len());
        self.encode_syndrome(&self.syndrome(&word))
    }
}

pub(crate) fn digits(mut x: usize, q: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x % q);
        x /= q;
    }
    out
}

/// Injective coloring of `H(len, q)` by cosets of the Hamming code: the
/// color of a word is one plus its syndrome encoding.
pub fn syndrome_coloring(code: &HammingCode, len: usize, q: usize) -> Result<Coloring, ConstructError> {
    if len != code.len() || q != code.q() {
        return Err(ConstructError::DimensionMismatch {
            code_len: code.len(),
            code_q: code.q(),
            len,
            q,
        });
    }
    let n = capacity(checked_power(q, len))?;
    let top = len - 1;
    let place = q.pow(top as u32);
    // syndrome(x) = syndrome(x mod q^top) + digit_top * column_top
    let mut table: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut colors = Vec::with_capacity(n);
    for x in 0..n {
        let s = if x < place {
            code.syndrome(&digits(x, q, len))
        } else {
            let f = code.field();
            let digit = x / place;
            table[x % place]
                .iter()
                .zip(code.column(top))
                .map(|(&si, &a)| f.add(si, f.mul(a, digit)))
                .collect()
        };
        colors.push(code.encode_syndrome(&s) + 1);
        if x < place {
            table.push(s);
        }
    }
    Ok(Coloring::new_unchecked(code.syndrome_count(), colors))
}

/// Parameters of the block-concatenation coloring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConcatParams {
    /// Outer alphabet, a prime power.
    pub p: usize,
    /// Outer code dimension.
    pub r: usize,
    /// Inner alphabet, a prime power.
    pub q: usize,
    /// Inner code dimension.
    pub k: usize,
}

impl ConcatParams {
    pub fn outer_len(&self) -> usize {
        (self.p.pow(self.r as u32) - 1) / (self.p - 1)
    }

    pub fn inner_len(&self) -> usize {
        (self.q.pow(self.k as u32) - 1) / (self.q - 1)
    }

    /// Word length `outer_len * inner_len` of the colored Hamming graph.
    pub fn word_len(&self) -> usize {
        self.outer_len() * self.inner_len()
    }
}

/// Injective coloring of `H(n_p * n_q, q)` with at most `p^r` colors.
///
/// A word is cut into `n_p` blocks of `n_q` symbols. Each block is replaced by
/// its inner syndrome encoding, an element of `0..q^k` and so a symbol of
/// GF(p) because `q^k <= p`. The resulting outer word is colored by its outer
/// syndrome.
pub fn concatenated_coloring(params: ConcatParams) -> Result<Coloring, ConstructError> {
    let ConcatParams { p, r, q, k } = params;
    let outer = HammingCode::new(p, r)?;
    let inner = HammingCode::new(q, k)?;
    if inner.syndrome_count() > p {
        return Err(ConstructError::InvalidParameter(format!(
            "need q^k <= p, got {q}^{k} > {p}"
        )));
    }
    let (np, nq) = (outer.len(), inner.len());
    let n = capacity(checked_power(q, np * nq))?;
    let block_count = q.pow(nq as u32);
    let block_class: Vec<usize> = (0..block_count).map(|b| inner.syndrome_of_index(b)).collect();
    let colors = (0..n)
        .map(|x| {
            let mut rest = x;
            let outer_word: Vec<usize> = (0..np)
                .map(|_| {
                    let block = rest % block_count;
                    rest /= block_count;
                    block_class[block]
                })
                .collect();
            outer.encode_syndrome(&outer.syndrome(&outer_word)) + 1
        })
        .collect();
    Ok(Coloring::new_unchecked(outer.syndrome_count(), colors))
}
