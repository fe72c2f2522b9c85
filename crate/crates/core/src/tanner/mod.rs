//! Tanner graphs: construction, induced subgraphs, syndromes and girth.
//!
//! Variables and checks are indexed densely from zero. Text formats on disk
//! use one-based ids, the conventional choice for alist files.

mod alist;
mod canon;
mod embed;
mod gf2;
mod qc;
mod text;

pub use alist::{load_alist, write_alist};
pub use canon::{canonical_form, canonical_labeling, colored_canonical_form, CanonicalCode, Labeling};
pub use embed::{embeds, find_embeddings, Embedding};
pub use gf2::{gf2_rank, nullspace_basis, BitMatrix};
pub use qc::{load_qc, qc_expand, tanner_155_64, QcCode, MAX_QC_NODES, TANNER_155_EXPONENTS};
pub use text::{parse_graph, parse_graphs, write_graph};
pub(crate) use text::{read_graph_block, significant_lines};

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Errors raised while constructing or querying a graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate edge between variable {var} and check {check}")]
    DuplicateEdge { var: usize, check: usize },
    #[error("check {0} has no neighbours")]
    IsolatedCheck(usize),
    #[error("variable id {id} out of range (graph has {len} variables)")]
    UnknownVariable { id: usize, len: usize },
    #[error("check id {id} out of range (graph has {len} checks)")]
    UnknownCheck { id: usize, len: usize },
    #[error("variable {0} listed twice")]
    RepeatedVariable(usize),
    #[error("vector length {got} does not match {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
}

/// Error from one of the line-oriented text loaders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Parameters of the regular code ensemble that profile graphs must respect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeEnsembleParams {
    pub d_v: usize,
    pub d_c_max: usize,
    pub girth_min: usize,
    /// Graphs holding a nonzero codeword of weight below this are excluded;
    /// 0 or 1 means no restriction. A code with minimum distance `d` only
    /// has such subgraphs for weights of `d` and above, so this is the
    /// ensemble of codes with minimum distance at least `min_distance`.
    pub min_distance: usize,
}

impl CodeEnsembleParams {
    pub fn new(d_v: usize, d_c_max: usize, girth_min: usize) -> Result<Self, String> {
        if d_v < 2 {
            return Err(format!("d_v must be at least 2, got {d_v}"));
        }
        if d_c_max < 2 {
            return Err(format!("d_c_max must be at least 2, got {d_c_max}"));
        }
        if girth_min < 4 || !girth_min.is_multiple_of(2) {
            return Err(format!("girth_min must be an even integer >= 4, got {girth_min}"));
        }
        Ok(CodeEnsembleParams {
            d_v,
            d_c_max,
            girth_min,
            min_distance: 0,
        })
    }

    pub fn with_min_distance(mut self, d: usize) -> Self {
        self.min_distance = d;
        self
    }

    /// Whether `g` belongs to the ensemble: variable degree `d_v`, check
    /// degree cap, girth and the minimum distance restriction.
    pub fn admits(&self, g: &TannerGraph) -> bool {
        g.var_adjacency().iter().all(|cs| cs.len() == self.d_v)
            && g.max_check_degree() <= self.d_c_max
            && g.girth().is_none_or(|x| x >= self.girth_min)
            && !g.has_codeword_below(self.min_distance)
    }

    /// Column-weight-three, girth-eight ensemble with check degree at most five.
    pub fn tanner_like() -> Self {
        CodeEnsembleParams {
            d_v: 3,
            d_c_max: 5,
            girth_min: 8,
            min_distance: 0,
        }
    }
}

/// A simple bipartite graph between variable and check nodes.
///
/// Adjacency lists are kept sorted. Every check has at least one neighbour.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TannerGraph {
    var_adj: Vec<Vec<usize>>,
    check_adj: Vec<Vec<usize>>,
}

impl fmt::Debug for TannerGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TannerGraph(n={}, m={}, ", self.num_variables(), self.num_checks())?;
        f.debug_list().entries(self.var_adj.iter()).finish()?;
        write!(f, ")")
    }
}

impl TannerGraph {
    /// The graph with no nodes.
    pub fn empty() -> Self {
        TannerGraph {
            var_adj: Vec::new(),
            check_adj: Vec::new(),
        }
    }

    pub fn from_edges(
        num_variables: usize,
        num_checks: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut var_adj = vec![Vec::new(); num_variables];
        for (v, c) in edges {
            if v >= num_variables {
                return Err(GraphError::UnknownVariable {
                    id: v,
                    len: num_variables,
                });
            }
            if c >= num_checks {
                return Err(GraphError::UnknownCheck {
                    id: c,
                    len: num_checks,
                });
            }
            var_adj[v].push(c);
        }
        Self::from_var_adjacency(num_checks, var_adj)
    }

    /// Builds a graph from per-variable check lists.
    pub fn from_var_adjacency(
        num_checks: usize,
        mut var_adj: Vec<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        // More checks than edges means an isolated check; catch it before
        // allocating, since `num_checks` may come straight from a file header.
        let edges: usize = var_adj.iter().map(Vec::len).sum();
        if num_checks > edges {
            let mut used: Vec<usize> = var_adj.iter().flatten().copied().filter(|&c| c < num_checks).collect();
            used.sort_unstable();
            used.dedup();
            let gap = used.iter().enumerate().find(|(i, &c)| *i != c).map_or(used.len(), |(i, _)| i);
            return Err(GraphError::IsolatedCheck(gap));
        }
        let mut check_adj = vec![Vec::new(); num_checks];
        for (v, checks) in var_adj.iter_mut().enumerate() {
            checks.sort_unstable();
            for w in checks.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::DuplicateEdge { var: v, check: w[0] });
                }
            }
            for &c in checks.iter() {
                if c >= num_checks {
                    return Err(GraphError::UnknownCheck {
                        id: c,
                        len: num_checks,
                    });
                }
                check_adj[c].push(v);
            }
        }
        if let Some(c) = check_adj.iter().position(|a| a.is_empty()) {
            return Err(GraphError::IsolatedCheck(c));
        }
        Ok(TannerGraph { var_adj, check_adj })
    }

    pub fn num_variables(&self) -> usize {
        self.var_adj.len()
    }

    pub fn num_checks(&self) -> usize {
        self.check_adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.var_adj.iter().map(Vec::len).sum()
    }

    /// Checks adjacent to variable `v`, sorted.
    #[inline]
    pub fn checks_of(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    /// Variables adjacent to check `c`, sorted.
    #[inline]
    pub fn vars_of(&self, c: usize) -> &[usize] {
        &self.check_adj[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_adj[v].len()
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_adj[c].len()
    }

    pub fn var_adjacency(&self) -> &[Vec<usize>] {
        &self.var_adj
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.var_adj
            .iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v, c)))
    }

    pub fn has_edge(&self, v: usize, c: usize) -> bool {
        self.var_adj[v].binary_search(&c).is_ok()
    }

    /// `Some(d)` when every variable has degree `d`.
    pub fn regular_var_degree(&self) -> Option<usize> {
        let d = self.var_adj.first()?.len();
        self.var_adj.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn max_check_degree(&self) -> usize {
        self.check_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Induced subgraph on `vs`: the given variables, every check adjacent to
    /// one of them, and all their edges. Variables keep the order of `vs`;
    /// checks keep their relative order in `self`.
    pub fn induced_subgraph(&self, vs: &[usize]) -> Result<TannerGraph, GraphError> {
        Ok(self.induced_subgraph_with_map(vs)?.0)
    }

    /// Like [`induced_subgraph`](Self::induced_subgraph), also returning the
    /// original id of every retained check.
    pub fn induced_subgraph_with_map(
        &self,
        vs: &[usize],
    ) -> Result<(TannerGraph, Vec<usize>), GraphError> {
        let n = self.num_variables();
        let mut seen = vec![false; n];
        for &v in vs {
            if v >= n {
                return Err(GraphError::UnknownVariable { id: v, len: n });
            }
            if seen[v] {
                return Err(GraphError::RepeatedVariable(v));
            }
            seen[v] = true;
        }
        let mut check_map = vec![usize::MAX; self.num_checks()];
        let mut kept: Vec<usize> = vs.iter().flat_map(|&v| self.var_adj[v].iter().copied()).collect();
        kept.sort_unstable();
        kept.dedup();
        for (i, &c) in kept.iter().enumerate() {
            check_map[c] = i;
        }
        let var_adj = vs
            .iter()
            .map(|&v| self.var_adj[v].iter().map(|&c| check_map[c]).collect())
            .collect();
        let g = TannerGraph::from_var_adjacency(kept.len(), var_adj)
            .expect("induced subgraph of a valid graph is valid");
        Ok((g, kept))
    }

    /// Returns a copy with one extra variable attached to `existing` checks
    /// plus `fresh` new degree-one checks (appended after the current checks).
    pub fn with_new_variable(&self, existing: &[usize], fresh: usize) -> TannerGraph {
        let mut var_adj = self.var_adj.clone();
        let m = self.num_checks();
        let mut adj: Vec<usize> = existing.to_vec();
        adj.extend(m..m + fresh);
        var_adj.push(adj);
        TannerGraph::from_var_adjacency(m + fresh, var_adj).expect("extension stays simple")
    }

    /// Applies a relabeling: variable `v` becomes `var_perm[v]`, check `c`
    /// becomes `check_perm[c]`.
    pub fn relabel(&self, var_perm: &[usize], check_perm: &[usize]) -> TannerGraph {
        let mut var_adj = vec![Vec::new(); self.num_variables()];
        for (v, cs) in self.var_adj.iter().enumerate() {
            var_adj[var_perm[v]] = cs.iter().map(|&c| check_perm[c]).collect();
        }
        TannerGraph::from_var_adjacency(self.num_checks(), var_adj).expect("relabeling is valid")
    }

    /// Parity of `x` over each check's neighbourhood.
    pub fn syndrome(&self, x: &[u8]) -> Result<Vec<u8>, GraphError> {
        if x.len() != self.num_variables() {
            return Err(GraphError::LengthMismatch {
                expected: self.num_variables(),
                got: x.len(),
            });
        }
        Ok(self
            .check_adj
            .iter()
            .map(|vs| vs.iter().fold(0u8, |acc, &v| acc ^ (x[v] & 1)))
            .collect())
    }

    /// Length of the shortest cycle, `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        girth_bounded(self, usize::MAX)
    }

    /// Whether some nonzero codeword containing `v` has weight below `limit`.
    /// A codeword here is a set of variables meeting every check an even
    /// number of times.
    pub fn has_codeword_through_below(&self, v: usize, limit: usize) -> bool {
        if limit <= 1 {
            return false;
        }
        let mut inside = vec![false; self.num_variables()];
        let mut count = vec![0usize; self.num_checks()];
        let mut size = 0usize;
        fn toggle(g: &TannerGraph, u: usize, on: bool, inside: &mut [bool], count: &mut [usize], size: &mut usize) {
            inside[u] = on;
            for &c in &g.var_adj[u] {
                if on {
                    count[c] += 1;
                } else {
                    count[c] -= 1;
                }
            }
            if on {
                *size += 1;
            } else {
                *size -= 1;
            }
        }
        // Every odd check needs one more member; branching on the members of
        // a single odd check is exhaustive.
        fn rec(g: &TannerGraph, limit: usize, inside: &mut [bool], count: &mut [usize], size: &mut usize) -> bool {
            let odd = (0..g.num_checks()).find(|&c| count[c] % 2 == 1);
            let Some(c) = odd else { return true };
            if *size + 1 >= limit {
                return false;
            }
            for &u in &g.check_adj[c] {
                if inside[u] {
                    continue;
                }
                toggle(g, u, true, inside, count, size);
                let hit = rec(g, limit, inside, count, size);
                toggle(g, u, false, inside, count, size);
                if hit {
                    return true;
                }
            }
            false
        }
        toggle(self, v, true, &mut inside, &mut count, &mut size);
        rec(self, limit, &mut inside, &mut count, &mut size)
    }

    /// Whether any nonzero codeword has weight below `limit`.
    pub fn has_codeword_below(&self, limit: usize) -> bool {
        (0..self.num_variables()).any(|v| self.has_codeword_through_below(v, limit))
    }

    /// Connected components, each as a sorted list of variables. Checks follow
    /// their variables.
    pub fn variable_components(&self) -> Vec<Vec<usize>> {
        let n = self.num_variables();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &c in &self.var_adj[v] {
                    for &u in &self.check_adj[c] {
                        if comp[u] == usize::MAX {
                            comp[u] = id;
                            members.push(u);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Distances (in edges) from check `src` to all checks, stopping at `limit`.
    /// Unreached checks get `usize::MAX`.
    pub fn check_distances(&self, src: usize, limit: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_checks()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(c) = queue.pop_front() {
            let d = dist[c];
            if d + 2 > limit {
                continue;
            }
            for &v in &self.check_adj[c] {
                for &c2 in &self.var_adj[v] {
                    if dist[c2] == usize::MAX {
                        dist[c2] = d + 2;
                        queue.push_back(c2);
                    }
                }
            }
        }
        dist
    }
}

/// Shortest cycle length, searching only cycles shorter than `bound`. Returns
/// `None` when no such cycle exists.
pub(crate) fn girth_bounded(g: &TannerGraph, bound: usize) -> Option<usize> {
    // Nodes: variables 0..n, checks n..n+m.
    let n = g.num_variables();
    let total = n + g.num_checks();
    let neighbours = |x: usize| -> Box<dyn Iterator<Item = usize> + '_> {
        if x < n {
            Box::new(g.var_adj[x].iter().map(move |&c| c + n))
        } else {
            Box::new(g.check_adj[x - n].iter().copied())
        }
    };
    let mut best = bound;
    let mut dist = vec![usize::MAX; total];
    let mut parent = vec![usize::MAX; total];
    let mut touched = Vec::new();
    for s in 0..total {
        for &t in &touched {
            dist[t] = usize::MAX;
            parent[t] = usize::MAX;
        }
        touched.clear();
        dist[s] = 0;
        touched.push(s);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if 2 * dist[x] + 1 >= best {
                break;
            }
            for y in neighbours(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    touched.push(y);
                    queue.push_back(y);
                } else if parent[x] != y {
                    let len = dist[x] + dist[y] + 1;
                    if len < best {
                        best = len;
                    }
                }
            }
        }
    }
    (best < bound).then_some(best)
}
