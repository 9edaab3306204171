//! Exponential-time exact solvers for desk-scale instances.
//!
//! Every solver runs under a [`SearchBudget`]. Running out of budget yields
//! [`Outcome::Unknown`] with the bounds established so far; a `Solved`
//! outcome is always exact and carries a witness.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::Coloring;
use crate::graph::{Graph, GraphError};
use crate::hypergraph::Hypergraph;

/// Most edges [`kw_condition`] will enumerate subsets of.
pub const KW_MAX_EDGES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("search budget must be positive")]
    InvalidBudget,
    #[error("hypergraph has no edges, so every number of colors is panchromatic")]
    NoEdges,
    #[error("{0} edges is too many for an exhaustive subset check (limit {KW_MAX_EDGES})")]
    TooManyEdges(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub wall_ms: u64,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, wall_ms: u64) -> Result<Self, ExactError> {
        if max_nodes == 0 || wall_ms == 0 {
            return Err(ExactError::InvalidBudget);
        }
        Ok(SearchBudget { max_nodes, wall_ms })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            wall_ms: 60_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<W> {
    Solved {
        value: usize,
        witness: W,
        stats: SearchStats,
    },
    Unknown {
        lower: usize,
        upper: usize,
        stats: SearchStats,
    },
}

impl<W> Outcome<W> {
    pub fn value(&self) -> Option<usize> {
        match self {
            Outcome::Solved { value, .. } => Some(*value),
            Outcome::Unknown { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Outcome::Solved { witness, .. } => Some(witness),
            Outcome::Unknown { .. } => None,
        }
    }

    pub fn stats(&self) -> SearchStats {
        match self {
            Outcome::Solved { stats, .. } | Outcome::Unknown { stats, .. } => *stats,
        }
    }

    /// `(lower, upper)`; equal when solved.
    pub fn bounds(&self) -> (usize, usize) {
        match self {
            Outcome::Solved { value, .. } => (*value, *value),
            Outcome::Unknown { lower, upper, .. } => (*lower, *upper),
        }
    }
}

#[derive(Debug)]
struct Exhausted;

struct Meter {
    nodes: u64,
    max_nodes: u64,
    start: Instant,
    limit: Duration,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Meter {
            nodes: 0,
            max_nodes: budget.max_nodes,
            start: Instant::now(),
            limit: Duration::from_millis(budget.wall_ms),
        }
    }

    #[inline]
    fn tick(&mut self) -> Result<(), Exhausted> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Exhausted);
        }
        if self.nodes.is_multiple_of(4096) && self.start.elapsed() > self.limit {
            return Err(Exhausted);
        }
        Ok(())
    }

    fn stats(&self) -> SearchStats {
        SearchStats {
            nodes: self.nodes,
            wall_ms: self.start.elapsed().as_millis() as u64,
        }
    }

    /// A child meter sharing this one's clock but capped at `nodes`.
    fn child(&self, nodes: u64) -> Meter {
        Meter {
            nodes: 0,
            max_nodes: nodes.min(self.max_nodes.saturating_sub(self.nodes)).max(1),
            start: self.start,
            limit: self.limit,
        }
    }
}

// ---------------------------------------------------------------------------
// Coupon coloring number
// ---------------------------------------------------------------------------

/// Backtracking search for a `k`-coupon coloring.
///
/// Vertices are colored in descending degree order. For every vertex `w` we
/// track how many neighbors are uncolored and how many colors are still absent
/// from its neighborhood; a branch dies as soon as some `w` has fewer
/// uncolored neighbors than absent colors.
struct CouponSearch<'a> {
    g: &'a Graph,
    k: usize,
    order: Vec<usize>,
    color: Vec<usize>,
    counts: Vec<u32>,
    uncolored: Vec<usize>,
    missing: Vec<usize>,
    usage: Vec<usize>,
}

impl<'a> CouponSearch<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        let n = g.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        CouponSearch {
            g,
            k,
            order,
            color: vec![0; n],
            counts: vec![0; n * (k + 1)],
            uncolored: (0..n).map(|v| g.degree(v)).collect(),
            missing: vec![k; n],
            usage: vec![0; k + 1],
        }
    }

    fn assign(&mut self, v: usize, c: usize) -> bool {
        let stride = self.k + 1;
        let mut ok = true;
        self.color[v] = c;
        self.usage[c] += 1;
        for &w in self.g.neighbors(v) {
            self.uncolored[w] -= 1;
            let slot = &mut self.counts[w * stride + c];
            if *slot == 0 {
                self.missing[w] -= 1;
            }
            *slot += 1;
            ok &= self.missing[w] <= self.uncolored[w];
        }
        ok
    }

    fn unassign(&mut self, v: usize, c: usize) {
        let stride = self.k + 1;
        self.color[v] = 0;
        self.usage[c] -= 1;
        for &w in self.g.neighbors(v) {
            self.uncolored[w] += 1;
            let slot = &mut self.counts[w * stride + c];
            *slot -= 1;
            if *slot == 0 {
                self.missing[w] += 1;
            }
        }
    }

    fn run(&mut self, depth: usize, max_used: usize, meter: &mut Meter) -> Result<bool, Exhausted> {
        meter.tick()?;
        if depth == self.order.len() {
            return Ok(true);
        }
        let v = self.order[depth];
        let mut candidates: Vec<usize> = (1..=self.k.min(max_used + 1)).collect();
        candidates.sort_by_key(|&c| (self.usage[c], c));
        for c in candidates {
            let feasible = self.assign(v, c);
            if feasible && self.run(depth + 1, max_used.max(c), meter)? {
                return Ok(true);
            }
            self.unassign(v, c);
        }
        Ok(false)
    }
}

fn find_coupon_coloring(g: &Graph, k: usize, meter: &mut Meter) -> Result<Option<Coloring>, Exhausted> {
    let mut search = CouponSearch::new(g, k);
    if search.run(0, 0, meter)? {
        Ok(Some(Coloring::new_unchecked(k, search.color)))
    } else {
        Ok(None)
    }
}

/// Exact coupon coloring number `χ_c(G)` and an optimal witness.
///
/// Searches `k` downward from the minimum degree. A level is skipped outright
/// when `k * γ_t(G) > n`, since each color class must be a total dominating
/// set.
pub fn exact_coupon_number(g: &Graph, budget: SearchBudget) -> Result<Outcome<Coloring>, ExactError> {
    g.require_no_isolated()?;
    let mut meter = Meter::new(budget);
    let n = g.n();
    let delta = g.min_degree();
    let gamma_lower = if delta >= 2 {
        let mut sub = meter.child(budget.max_nodes / 4);
        let bound = match dominating_search(g, Neighborhood::Open, &mut sub) {
            Ok(best) => best.len(),
            Err((lower, _)) => lower,
        };
        meter.nodes += sub.nodes;
        bound
    } else {
        1
    };
    for k in (2..=delta).rev() {
        if k * gamma_lower > n {
            continue;
        }
        match find_coupon_coloring(g, k, &mut meter) {
            Ok(Some(witness)) => {
                return Ok(Outcome::Solved {
                    value: k,
                    witness,
                    stats: meter.stats(),
                })
            }
            Ok(None) => {}
            Err(Exhausted) => {
                return Ok(Outcome::Unknown {
                    lower: 1,
                    upper: k,
                    stats: meter.stats(),
                })
            }
        }
    }
    Ok(Outcome::Solved {
        value: 1,
        witness: Coloring::monochromatic(n),
        stats: meter.stats(),
    })
}

/// Closes `χ_c(G) = δ(G)` from a witness alone: a valid `δ`-coupon coloring
/// meets the upper bound `χ_c <= δ`. Returns `None` if the witness does not
/// certify this.
pub fn certify_coupon_at_min_degree(g: &Graph, witness: &Coloring) -> Option<usize> {
    let delta = g.min_degree();
    if delta == 0 || witness.len() != g.n() || witness.k() != delta {
        return None;
    }
    crate::verify::check_coupon(g, witness, delta)
        .ok()
        .filter(|c| c.is_valid())
        .map(|_| delta)
}

// ---------------------------------------------------------------------------
// Injective coloring number
// ---------------------------------------------------------------------------

/// Conflict lists: `u` and `v` conflict when they share a neighbor.
fn conflict_lists(g: &Graph) -> Vec<Vec<usize>> {
    let mut lists = vec![Vec::new(); g.n()];
    for w in 0..g.n() {
        let nb = g.neighbors(w);
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                lists[a].push(b);
                lists[b].push(a);
            }
        }
    }
    for l in &mut lists {
        l.sort_unstable();
        l.dedup();
    }
    lists
}

/// DSatur backtracking for a proper `k`-coloring of a conflict graph.
struct DsaturSearch<'a> {
    adj: &'a [Vec<usize>],
    k: usize,
    color: Vec<usize>,
    // seen[v * (k+1) + c]: conflict neighbors of v colored c
    seen: Vec<u32>,
    saturation: Vec<usize>,
    remaining: usize,
}

impl<'a> DsaturSearch<'a> {
    fn new(adj: &'a [Vec<usize>], k: usize) -> Self {
        let n = adj.len();
        DsaturSearch {
            adj,
            k,
            color: vec![0; n],
            seen: vec![0; n * (k + 1)],
            saturation: vec![0; n],
            remaining: n,
        }
    }

    fn pick(&self) -> Option<usize> {
        (0..self.adj.len())
            .filter(|&v| self.color[v] == 0)
            .max_by_key(|&v| (self.saturation[v], self.adj[v].len(), std::cmp::Reverse(v)))
    }

    fn set(&mut self, v: usize, c: usize) {
        let stride = self.k + 1;
        self.color[v] = c;
        self.remaining -= 1;
        let adj = self.adj;
        for &u in &adj[v] {
            let slot = &mut self.seen[u * stride + c];
            if *slot == 0 {
                self.saturation[u] += 1;
            }
            *slot += 1;
        }
    }

    fn unset(&mut self, v: usize, c: usize) {
        let stride = self.k + 1;
        self.color[v] = 0;
        self.remaining += 1;
        let adj = self.adj;
        for &u in &adj[v] {
            let slot = &mut self.seen[u * stride + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    fn run(&mut self, max_used: usize, meter: &mut Meter) -> Result<bool, Exhausted> {
        meter.tick()?;
        let Some(v) = self.pick() else {
            return Ok(true);
        };
        let stride = self.k + 1;
        for c in 1..=self.k.min(max_used + 1) {
            if self.seen[v * stride + c] != 0 {
                continue;
            }
            self.set(v, c);
            if self.run(max_used.max(c), meter)? {
                return Ok(true);
            }
            self.unset(v, c);
        }
        Ok(false)
    }

    /// Colors greedily in DSatur order with as many colors as needed.
    fn greedy(adj: &[Vec<usize>]) -> Vec<usize> {
        let n = adj.len();
        let mut search = DsaturSearch::new(adj, n.max(1));
        while let Some(v) = search.pick() {
            let stride = search.k + 1;
            let c = (1..=search.k)
                .find(|&c| search.seen[v * stride + c] == 0)
                .expect("n colors always suffice");
            search.set(v, c);
        }
        search.color
    }
}

/// Exact injective coloring number `χ_i(G)` and an optimal witness.
///
/// Colors the conflict graph (pairs joined by a path of length two) and
/// searches upward from `Δ(G)`.
pub fn exact_injective_number(g: &Graph, budget: SearchBudget) -> Result<Outcome<Coloring>, ExactError> {
    let mut meter = Meter::new(budget);
    let n = g.n();
    if n == 0 {
        return Ok(Outcome::Solved {
            value: 0,
            witness: Coloring::new_unchecked(0, Vec::new()),
            stats: meter.stats(),
        });
    }
    let adj = conflict_lists(g);
    let greedy = DsaturSearch::greedy(&adj);
    let upper = greedy.iter().copied().max().unwrap_or(1);
    let lower = g.max_degree().max(1);
    for k in lower..upper {
        let mut search = DsaturSearch::new(&adj, k);
        match search.run(0, &mut meter) {
            Ok(true) => {
                return Ok(Outcome::Solved {
                    value: k,
                    witness: Coloring::new_unchecked(k, search.color),
                    stats: meter.stats(),
                })
            }
            Ok(false) => {}
            Err(Exhausted) => {
                return Ok(Outcome::Unknown {
                    lower: k,
                    upper,
                    stats: meter.stats(),
                })
            }
        }
    }
    Ok(Outcome::Solved {
        value: upper,
        witness: Coloring::new_unchecked(upper, greedy),
        stats: meter.stats(),
    })
}

// ---------------------------------------------------------------------------
// Domination
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Neighborhood {
    /// A vertex is dominated by its neighbors only.
    Open,
    /// A vertex also dominates itself.
    Closed,
}

struct DominationSearch<'a> {
    g: &'a Graph,
    mode: Neighborhood,
    cover: Vec<usize>,
    undominated: usize,
    excluded: Vec<bool>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    max_reach: usize,
}

impl<'a> DominationSearch<'a> {
    /// Vertices dominated by choosing `u`.
    fn reach(&self, u: usize) -> impl Iterator<Item = usize> + 'a {
        let g = self.g;
        let own = (self.mode == Neighborhood::Closed).then_some(u);
        g.neighbors(u).iter().copied().chain(own)
    }

    /// Candidates that would dominate `w`.
    fn dominators(&self, w: usize) -> impl Iterator<Item = usize> + 'a {
        self.reach(w)
    }

    fn gain(&self, u: usize) -> usize {
        self.reach(u).filter(|&x| self.cover[x] == 0).count()
    }

    fn add(&mut self, u: usize) {
        for x in self.reach(u) {
            if self.cover[x] == 0 {
                self.undominated -= 1;
            }
            self.cover[x] += 1;
        }
        self.chosen.push(u);
    }

    fn remove(&mut self, u: usize) {
        for x in self.reach(u) {
            self.cover[x] -= 1;
            if self.cover[x] == 0 {
                self.undominated += 1;
            }
        }
        self.chosen.pop();
    }

    fn greedy(&mut self) -> Vec<usize> {
        while self.undominated > 0 {
            let u = (0..self.g.n())
                .max_by_key(|&u| (self.gain(u), std::cmp::Reverse(u)))
                .unwrap();
            self.add(u);
        }
        let sol = self.chosen.clone();
        for &u in sol.iter().rev() {
            self.remove(u);
        }
        let mut sol = sol;
        sol.sort_unstable();
        sol
    }

    fn run(&mut self, meter: &mut Meter) -> Result<(), Exhausted> {
        meter.tick()?;
        if self.undominated == 0 {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
                self.best.sort_unstable();
            }
            return Ok(());
        }
        let lower = self.chosen.len() + self.undominated.div_ceil(self.max_reach);
        if lower >= self.best.len() {
            return Ok(());
        }
        // Branch on the undominated vertex with the fewest live dominators.
        let mut target = None;
        let mut fewest = usize::MAX;
        for w in 0..self.g.n() {
            if self.cover[w] != 0 {
                continue;
            }
            let live = self.dominators(w).filter(|&u| !self.excluded[u]).count();
            if live < fewest {
                fewest = live;
                target = Some(w);
                if live <= 1 {
                    break;
                }
            }
        }
        let w = target.expect("undominated vertex exists");
        if fewest == 0 {
            return Ok(());
        }
        let mut options: Vec<usize> = self.dominators(w).filter(|&u| !self.excluded[u]).collect();
        options.sort_by_key(|&u| (std::cmp::Reverse(self.gain(u)), u));
        let mut newly_excluded = Vec::with_capacity(options.len());
        let mut result = Ok(());
        for u in options {
            self.add(u);
            result = self.run(meter);
            self.remove(u);
            if result.is_err() {
                break;
            }
            self.excluded[u] = true;
            newly_excluded.push(u);
        }
        for u in newly_excluded {
            self.excluded[u] = false;
        }
        result
    }
}

/// The optimum, or on exhaustion the `(lower, upper)` bounds reached.
fn dominating_search(g: &Graph, mode: Neighborhood, meter: &mut Meter) -> Result<Vec<usize>, (usize, usize)> {
    let n = g.n();
    let max_reach = (g.max_degree() + usize::from(mode == Neighborhood::Closed)).max(1);
    let mut search = DominationSearch {
        g,
        mode,
        cover: vec![0; n],
        undominated: n,
        excluded: vec![false; n],
        chosen: Vec::new(),
        best: Vec::new(),
        max_reach,
    };
    search.best = search.greedy();
    match search.run(meter) {
        Ok(()) => Ok(search.best),
        Err(Exhausted) => Err((n.div_ceil(max_reach), search.best.len())),
    }
}

fn domination_outcome(g: &Graph, mode: Neighborhood, budget: SearchBudget) -> Outcome<Vec<usize>> {
    let mut meter = Meter::new(budget);
    match dominating_search(g, mode, &mut meter) {
        Ok(best) => Outcome::Solved {
            value: best.len(),
            witness: best,
            stats: meter.stats(),
        },
        Err((lower, upper)) => Outcome::Unknown {
            lower,
            upper,
            stats: meter.stats(),
        },
    }
}

/// Minimum total dominating set `γ_t(G)` by branch and bound from a greedy
/// upper bound.
pub fn min_total_dominating(g: &Graph, budget: SearchBudget) -> Result<Outcome<Vec<usize>>, ExactError> {
    g.require_no_isolated()?;
    Ok(domination_outcome(g, Neighborhood::Open, budget))
}

/// Minimum dominating set `γ(G)` (closed neighborhoods).
pub fn min_dominating(g: &Graph, budget: SearchBudget) -> Result<Outcome<Vec<usize>>, ExactError> {
    Ok(domination_outcome(g, Neighborhood::Closed, budget))
}

// ---------------------------------------------------------------------------
// Hypergraphs
// ---------------------------------------------------------------------------

/// Plain backtracking for a panchromatic `k`-coloring, vertices in index
/// order.
struct PanchromaticSearch<'a> {
    k: usize,
    vertices: Vec<usize>,
    incidence: Vec<Vec<usize>>,
    edge_sizes: Vec<usize>,
    color: Vec<usize>,
    // per edge: colors present with multiplicity
    present: Vec<Vec<u32>>,
    distinct: Vec<usize>,
    colored: Vec<usize>,
    _h: &'a Hypergraph,
}

impl<'a> PanchromaticSearch<'a> {
    fn new(h: &'a Hypergraph, k: usize) -> Self {
        let mut incidence = vec![Vec::new(); h.n()];
        for (e, edge) in h.edges().iter().enumerate() {
            for &v in edge {
                incidence[v].push(e);
            }
        }
        let vertices = (0..h.n()).filter(|&v| !incidence[v].is_empty()).collect();
        let m = h.edges().len();
        PanchromaticSearch {
            k,
            vertices,
            incidence,
            edge_sizes: h.edges().iter().map(Vec::len).collect(),
            color: vec![1; h.n()],
            present: vec![vec![0; k + 1]; m],
            distinct: vec![0; m],
            colored: vec![0; m],
            _h: h,
        }
    }

    fn edge_alive(&self, e: usize) -> bool {
        let open = self.edge_sizes[e] - self.colored[e];
        self.k - self.distinct[e] <= open
    }

    fn run(&mut self, idx: usize, max_used: usize, meter: &mut Meter) -> Result<bool, Exhausted> {
        meter.tick()?;
        if idx == self.vertices.len() {
            return Ok(true);
        }
        let v = self.vertices[idx];
        for c in 1..=self.k.min(max_used + 1) {
            self.color[v] = c;
            for i in 0..self.incidence[v].len() {
                let e = self.incidence[v][i];
                self.colored[e] += 1;
                if self.present[e][c] == 0 {
                    self.distinct[e] += 1;
                }
                self.present[e][c] += 1;
            }
            let alive = self.incidence[v].iter().all(|&e| self.edge_alive(e));
            if alive && self.run(idx + 1, max_used.max(c), meter)? {
                return Ok(true);
            }
            for i in 0..self.incidence[v].len() {
                let e = self.incidence[v][i];
                self.colored[e] -= 1;
                self.present[e][c] -= 1;
                if self.present[e][c] == 0 {
                    self.distinct[e] -= 1;
                }
            }
        }
        self.color[v] = 1;
        Ok(false)
    }
}

/// Largest `k` admitting a coloring in which every edge sees all `k` colors.
/// `k >= 2` exactly when the hypergraph has Property B.
pub fn panchromatic_number(h: &Hypergraph, budget: SearchBudget) -> Result<Outcome<Coloring>, ExactError> {
    let upper = h.min_edge_size().ok_or(ExactError::NoEdges)?;
    let mut meter = Meter::new(budget);
    let mut best = Coloring::monochromatic(h.n());
    for k in 2..=upper {
        let mut search = PanchromaticSearch::new(h, k);
        match search.run(0, 0, &mut meter) {
            Ok(true) => best = Coloring::new_unchecked(k, search.color),
            Ok(false) => {
                return Ok(Outcome::Solved {
                    value: k - 1,
                    witness: best,
                    stats: meter.stats(),
                })
            }
            Err(Exhausted) => {
                return Ok(Outcome::Unknown {
                    lower: k - 1,
                    upper,
                    stats: meter.stats(),
                })
            }
        }
    }
    Ok(Outcome::Solved {
        value: upper,
        witness: best,
        stats: meter.stats(),
    })
}

/// Kostochka–Woodall sufficient condition for a panchromatic `k`-coloring:
/// every edge has at least `k` vertices and every nonempty set `E` of edges
/// covers at least `(k - 1)|E| - k + 3` vertices.
///
/// The full edge set is tested first, so a violation there is reported even
/// for hypergraphs too large for the exhaustive subset scan.
pub fn kw_condition(h: &Hypergraph, k: usize) -> Result<bool, ExactError> {
    let edges = h.edges();
    if edges.iter().any(|e| e.len() < k) {
        return Ok(false);
    }
    let m = edges.len();
    if m == 0 {
        return Ok(true);
    }
    let k = k as i64;
    let holds = |covered: usize, count: usize| covered as i64 >= (k - 1) * count as i64 - k + 3;
    let mut all = vec![false; h.n()];
    for e in edges {
        for &v in e {
            all[v] = true;
        }
    }
    if !holds(all.iter().filter(|&&b| b).count(), m) {
        return Ok(false);
    }
    if m > KW_MAX_EDGES {
        return Err(ExactError::TooManyEdges(m));
    }
    // Gray-code walk over all subsets, maintaining cover counts.
    let mut cover = vec![0u32; h.n()];
    let mut covered = 0usize;
    let mut inside = vec![false; m];
    let mut count = 0usize;
    for step in 1u64..(1u64 << m) {
        let e = step.trailing_zeros() as usize;
        if inside[e] {
            inside[e] = false;
            count -= 1;
            for &v in &edges[e] {
                cover[v] -= 1;
                if cover[v] == 0 {
                    covered -= 1;
                }
            }
        } else {
            inside[e] = true;
            count += 1;
            for &v in &edges[e] {
                if cover[v] == 0 {
                    covered += 1;
                }
                cover[v] += 1;
            }
        }
        if !holds(covered, count) {
            return Ok(false);
        }
    }
    Ok(true)
}
