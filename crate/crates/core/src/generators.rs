//! Generators for the graph families used throughout the crate.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::FiniteField;
use crate::graph::{Graph, GraphError, DEFAULT_VERTEX_LIMIT};

fn check_capacity(requested: u128, limit: usize) -> Result<usize, GraphError> {
    if requested > limit as u128 {
        Err(GraphError::Capacity { requested, limit })
    } else {
        Ok(requested as usize)
    }
}

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidParameter(msg.into())
}

/// `q^len`, or `None` on overflow.
pub(crate) fn checked_power(q: usize, len: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..len {
        acc = acc.checked_mul(q as u128)?;
    }
    Some(acc)
}

/// The Hamming graph on words of length `len` over an alphabet of size `q`.
///
/// Vertex `i` is the word whose little-endian base-q digits are those of `i`;
/// two words are adjacent when they differ in exactly one position.
pub fn hamming_graph(len: usize, q: usize) -> Result<Graph, GraphError> {
    hamming_graph_with_limit(len, q, DEFAULT_VERTEX_LIMIT)
}

pub fn hamming_graph_with_limit(len: usize, q: usize, limit: usize) -> Result<Graph, GraphError> {
    if len == 0 {
        return Err(invalid("Hamming word length must be at least 1"));
    }
    if q < 2 {
        return Err(invalid("Hamming alphabet size must be at least 2"));
    }
    let n = check_capacity(checked_power(q, len).unwrap_or(u128::MAX), limit)?;
    let places: Vec<usize> = (0..len).map(|j| q.pow(j as u32)).collect();
    let lists = (0..n)
        .map(|x| {
            let mut nb = Vec::with_capacity(len * (q - 1));
            for &place in &places {
                let digit = (x / place) % q;
                let base = x - digit * place;
                nb.extend((0..q).filter(|&t| t != digit).map(|t| base + t * place));
            }
            nb.sort_unstable();
            nb
        })
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(invalid("a cycle needs at least 3 vertices"));
    }
    let lists = (0..n)
        .map(|v| {
            let mut nb = vec![(v + 1) % n, (v + n - 1) % n];
            nb.sort_unstable();
            nb
        })
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}

/// `K_{d,d}` with parts `0..d` and `d..2d`.
pub fn complete_bipartite(d: usize) -> Result<Graph, GraphError> {
    if d == 0 {
        return Err(invalid("part size must be at least 1"));
    }
    let lists = (0..2 * d)
        .map(|v| if v < d { (d..2 * d).collect() } else { (0..d).collect() })
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}

/// The Paley graph on GF(q): `x ~ y` iff `x - y` is a nonzero square.
pub fn paley_graph(q: usize) -> Result<Graph, GraphError> {
    let field = FiniteField::with_order(q)?;
    if q % 4 != 1 {
        return Err(invalid(format!("Paley graphs need q = 1 mod 4, got {q}")));
    }
    let square = field.square_mask();
    let lists = (0..q)
        .map(|x| (0..q).filter(|&y| square[field.sub(x, y)]).collect())
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}

/// Bipartite incidence graph of the complete `d`-uniform hypergraph on `m`
/// points. Points are `0..m`; the `C(m, d)` edge-vertices follow in
/// lexicographic order of their subsets.
pub fn incidence_graph(m: usize, d: usize) -> Result<Graph, GraphError> {
    use itertools::Itertools;
    if d < 2 || d > m {
        return Err(invalid(format!("need 2 <= d <= m, got m={m} d={d}")));
    }
    let blocks = binomial(m, d);
    let total = check_capacity(blocks.saturating_add(m as u128), DEFAULT_VERTEX_LIMIT)?;
    let mut lists = vec![Vec::new(); total];
    for (i, subset) in (0..m).combinations(d).enumerate() {
        let id = m + i;
        for &x in &subset {
            lists[x].push(id);
        }
        lists[id] = subset;
    }
    Ok(Graph::from_sorted_lists(lists))
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// The `d`-regular graph whose `d` parts of size `n/d` each carry a perfect
/// matching, with a perfect matching between every pair of parts.
///
/// Vertex `a * (n/d) + i` is index `i` of part `a`. Inside a part, indices
/// `2j` and `2j+1` are matched; across parts equal indices are matched.
pub fn extremal_blowup(d: usize, n: usize) -> Result<Graph, GraphError> {
    if d == 0 || n == 0 || !n.is_multiple_of(d) || !(n / d).is_multiple_of(2) {
        return Err(invalid(format!(
            "need d | n with n/d even, got d={d} n={n}"
        )));
    }
    let size = n / d;
    check_capacity(n as u128, DEFAULT_VERTEX_LIMIT)?;
    let lists = (0..n)
        .map(|v| {
            let (part, idx) = (v / size, v % size);
            let mut nb: Vec<usize> = (0..d)
                .filter(|&b| b != part)
                .map(|b| b * size + idx)
                .collect();
            nb.push(part * size + (idx ^ 1));
            nb.sort_unstable();
            nb
        })
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}

/// Which random regular sampler to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularSampler {
    /// Configuration model with a full restart on any loop or repeated edge.
    /// Exactly uniform over simple `d`-regular graphs.
    Pairing,
    /// Repeated random matching of the remaining stubs, rejecting only the
    /// unsuitable pairs and restarting when stuck. Approximately uniform;
    /// usable at degrees where full rejection never terminates.
    Sequential,
    /// `Pairing` when its acceptance rate `exp(-(d^2-1)/4)` is at least
    /// `exp(-6)` (that is `d <= 5`), `Sequential` otherwise.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegularConfig {
    pub sampler: RegularSampler,
    /// Number of full restarts tolerated before giving up.
    pub max_attempts: usize,
}

impl Default for RegularConfig {
    fn default() -> Self {
        RegularConfig {
            sampler: RegularSampler::Auto,
            max_attempts: 100_000,
        }
    }
}

/// A random simple `d`-regular graph on `n` vertices, determined by `seed`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    random_regular_with(n, d, seed, &RegularConfig::default())
}

pub fn random_regular_with(
    n: usize,
    d: usize,
    seed: u64,
    config: &RegularConfig,
) -> Result<Graph, GraphError> {
    if !(n * d).is_multiple_of(2) {
        return Err(invalid(format!("n*d must be even, got n={n} d={d}")));
    }
    if d >= n {
        return Err(invalid(format!("degree {d} must be below n = {n}")));
    }
    check_capacity(n as u128, DEFAULT_VERTEX_LIMIT)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if d == 0 {
        return Ok(Graph::from_sorted_lists(vec![Vec::new(); n]));
    }
    let sampler = match config.sampler {
        RegularSampler::Auto if d <= 5 => RegularSampler::Pairing,
        RegularSampler::Auto => RegularSampler::Sequential,
        s => s,
    };
    for _ in 0..config.max_attempts {
        let edges = match sampler {
            RegularSampler::Pairing => try_pairing(n, d, &mut rng),
            _ => try_sequential(n, d, &mut rng),
        };
        if let Some(edges) = edges {
            let mut lists = vec![Vec::with_capacity(d); n];
            for (u, v) in edges {
                lists[u].push(v);
                lists[v].push(u);
            }
            for l in &mut lists {
                l.sort_unstable();
            }
            return Ok(Graph::from_sorted_lists(lists));
        }
    }
    Err(GraphError::RejectionCapExceeded(config.max_attempts))
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    stubs.shuffle(rng);
    let mut seen = HashSet::with_capacity(stubs.len() / 2);
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if u == v || !seen.insert((u, v)) {
            return None;
        }
        edges.push((u, v));
    }
    Some(edges)
}

fn try_sequential(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    let mut order = Vec::with_capacity(n * d / 2);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        stubs.shuffle(rng);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u != v && edges.insert((u, v)) {
                order.push((u, v));
            } else {
                *leftover.entry(u).or_default() += 1;
                *leftover.entry(v).or_default() += 1;
            }
        }
        if !has_suitable_pair(&edges, &leftover) {
            return None;
        }
        stubs = leftover
            .iter()
            .flat_map(|(&v, &c)| std::iter::repeat_n(v, c))
            .collect();
    }
    Some(order)
}

fn has_suitable_pair(edges: &HashSet<(usize, usize)>, leftover: &BTreeMap<usize, usize>) -> bool {
    if leftover.is_empty() {
        return true;
    }
    let verts: Vec<usize> = leftover.keys().copied().collect();
    verts
        .iter()
        .enumerate()
        .any(|(i, &u)| verts[i + 1..].iter().any(|&v| !edges.contains(&(u, v))))
}
