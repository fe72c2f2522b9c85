//! Canonical labeling of small bipartite graphs.
//!
//! Degree-one checks carry no structure beyond how many hang off each
//! variable, so they are folded into a per-variable count before the search.
//! Every connected component of the reduced graph is then labeled by
//! individualization-refinement with automorphism pruning, and components are
//! concatenated in sorted order. The result is exact: two graphs receive the
//! same code if and only if they are isomorphic by a map that sends variables
//! to variables, checks to checks, and preserves the optional variable colors.

use std::fmt;

use super::TannerGraph;

/// Isomorphism-invariant serialization of a (possibly colored) Tanner graph.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        hex::decode(s).ok().map(CanonicalCode)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// A canonical relabeling: variable `v` maps to `var_perm[v]`, check `c` to
/// `check_perm[c]`.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub var_perm: Vec<usize>,
    pub check_perm: Vec<usize>,
    pub code: CanonicalCode,
}

impl Labeling {
    pub fn apply(&self, g: &TannerGraph) -> TannerGraph {
        g.relabel(&self.var_perm, &self.check_perm)
    }

    pub fn map_vars(&self, vs: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = vs.iter().map(|&v| self.var_perm[v]).collect();
        out.sort_unstable();
        out
    }
}

pub fn canonical_form(g: &TannerGraph) -> CanonicalCode {
    canonical_labeling(g, None).code
}

/// Canonical code of `g` where variable `v` carries color `colors[v]`.
pub fn colored_canonical_form(g: &TannerGraph, colors: &[u32]) -> CanonicalCode {
    canonical_labeling(g, Some(colors)).code
}

pub fn canonical_labeling(g: &TannerGraph, colors: Option<&[u32]>) -> Labeling {
    let n = g.num_variables();
    let m = g.num_checks();
    let color = |v: usize| colors.map_or(0, |c| c[v]);
    let is_leaf: Vec<bool> = (0..m).map(|c| g.check_degree(c) == 1).collect();

    let mut labeled: Vec<(Vec<u32>, Vec<usize>, Vec<usize>)> = g
        .variable_components()
        .into_iter()
        .map(|vars| {
            let mut checks: Vec<usize> = vars
                .iter()
                .flat_map(|&v| g.checks_of(v).iter().copied())
                .filter(|&c| !is_leaf[c])
                .collect();
            checks.sort_unstable();
            checks.dedup();
            label_component(g, &vars, &checks, &is_leaf, &color)
        })
        .collect();
    labeled.sort_by(|a, b| a.0.cmp(&b.0));

    let mut var_perm = vec![usize::MAX; n];
    let mut check_perm = vec![usize::MAX; m];
    let (mut nv, mut nc) = (0, 0);
    for (_, vars, checks) in &labeled {
        for &v in vars {
            var_perm[v] = nv;
            nv += 1;
        }
        for &c in checks {
            check_perm[c] = nc;
            nc += 1;
        }
    }
    let mut by_new = vec![0; n];
    for v in 0..n {
        by_new[var_perm[v]] = v;
    }
    for &v in &by_new {
        for &c in g.checks_of(v) {
            if is_leaf[c] {
                check_perm[c] = nc;
                nc += 1;
            }
        }
    }
    debug_assert_eq!(nc, m);

    let relabeled = g.relabel(&var_perm, &check_perm);
    let mut bytes = Vec::with_capacity(8 + relabeled.num_edges() * 2);
    push_varint(&mut bytes, n as u64);
    push_varint(&mut bytes, m as u64);
    for &v in &by_new {
        push_varint(&mut bytes, color(v) as u64);
    }
    for v in 0..n {
        let cs = relabeled.checks_of(v);
        push_varint(&mut bytes, cs.len() as u64);
        for &c in cs {
            push_varint(&mut bytes, c as u64);
        }
    }
    Labeling {
        var_perm,
        check_perm,
        code: CanonicalCode(bytes),
    }
}

fn push_varint(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let b = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(b);
            return;
        }
        out.push(b | 0x80);
    }
}

/// Labels one component: returns its code and the variables and non-leaf
/// checks of the component in canonical order.
fn label_component(
    g: &TannerGraph,
    vars: &[usize],
    checks: &[usize],
    is_leaf: &[bool],
    color: &dyn Fn(usize) -> u32,
) -> (Vec<u32>, Vec<usize>, Vec<usize>) {
    let a = vars.len();
    let total = a + checks.len();
    let local_check = |c: usize| a + checks.binary_search(&c).expect("check in component");
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(total);
    let mut keys: Vec<[u32; 4]> = Vec::with_capacity(total);
    for &v in vars {
        let mut nb = Vec::new();
        let mut leaves = 0;
        for &c in g.checks_of(v) {
            if is_leaf[c] {
                leaves += 1;
            } else {
                nb.push(local_check(c));
            }
        }
        keys.push([0, color(v), leaves, nb.len() as u32]);
        adj.push(nb);
    }
    let local_var = |v: usize| vars.binary_search(&v).expect("variable in component");
    for &c in checks {
        let nb: Vec<usize> = g.vars_of(c).iter().map(|&v| local_var(v)).collect();
        keys.push([1, 0, 0, nb.len() as u32]);
        adj.push(nb);
    }

    let mut search = Search {
        adj: &adj,
        keys: &keys,
        best: None,
        autos: Vec::new(),
    };
    let mut colors = rank_keys(&keys);
    search.refine(&mut colors);
    search.descend(colors, &mut Vec::new());
    let (code, rank) = search.best.expect("search visits at least one leaf");

    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by_key(|&x| rank[x]);
    let var_order = order.iter().filter(|&&x| x < a).map(|&x| vars[x]).collect();
    let check_order = order.iter().filter(|&&x| x >= a).map(|&x| checks[x - a]).collect();
    (code, var_order, check_order)
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present") as u32)
        .collect()
}

struct Search<'a> {
    adj: &'a [Vec<usize>],
    keys: &'a [[u32; 4]],
    best: Option<(Vec<u32>, Vec<u32>)>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn cells(colors: &[u32]) -> usize {
        colors.iter().copied().max().map_or(0, |c| c as usize + 1)
    }

    /// Colour refinement to the coarsest equitable partition finer than `colors`.
    fn refine(&self, colors: &mut Vec<u32>) {
        let mut cells = Self::cells(colors);
        loop {
            let keys: Vec<(u32, Vec<u32>)> = (0..colors.len())
                .map(|x| {
                    let mut nb: Vec<u32> = self.adj[x].iter().map(|&y| colors[y]).collect();
                    nb.sort_unstable();
                    (colors[x], nb)
                })
                .collect();
            let next = rank_keys(&keys);
            let next_cells = Self::cells(&next);
            *colors = next;
            if next_cells == cells {
                return;
            }
            cells = next_cells;
        }
    }

    fn encode(&self, colors: &[u32]) -> Vec<u32> {
        let mut by_rank = vec![0; colors.len()];
        for (x, &c) in colors.iter().enumerate() {
            by_rank[c as usize] = x;
        }
        let mut out = Vec::new();
        for &x in &by_rank {
            out.extend_from_slice(&self.keys[x]);
            let mut nb: Vec<u32> = self.adj[x].iter().map(|&y| colors[y]).collect();
            nb.sort_unstable();
            out.extend(nb);
        }
        out
    }

    fn descend(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let total = colors.len();
        if Self::cells(&colors) == total {
            let code = self.encode(&colors);
            match &self.best {
                None => self.best = Some((code, colors)),
                Some((best, best_colors)) => match code.cmp(best) {
                    std::cmp::Ordering::Less => self.best = Some((code, colors)),
                    std::cmp::Ordering::Equal => {
                        let mut node_of_rank = vec![0; total];
                        for (y, &c) in best_colors.iter().enumerate() {
                            node_of_rank[c as usize] = y;
                        }
                        let auto: Vec<usize> = colors.iter().map(|&c| node_of_rank[c as usize]).collect();
                        if auto.iter().enumerate().any(|(x, &y)| x != y) {
                            self.autos.push(auto);
                        }
                    }
                    std::cmp::Ordering::Greater => {}
                },
            }
            return;
        }
        let mut sizes = vec![0usize; total];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = (0..total).find(|&c| sizes[c] > 1).expect("non-discrete partition") as u32;
        let cell: Vec<usize> = (0..total).filter(|&x| colors[x] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit(prefix, &explored, v) {
                continue;
            }
            let mut child: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(x, &c)| 2 * c + u32::from(x != v))
                .collect();
            child = rank_keys(&child);
            self.refine(&mut child);
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Whether `v` lies in the orbit of an explored vertex under the known
    /// automorphisms that fix `prefix` pointwise.
    fn same_orbit(&self, prefix: &[usize], explored: &[usize], v: usize) -> bool {
        let total = self.adj.len();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for auto in &self.autos {
            if prefix.iter().all(|&x| auto[x] == x) {
                any = true;
                for (x, &y) in auto.iter().enumerate() {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    if rx != ry {
                        parent[rx] = ry;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(num_checks: usize, adj: &[&[usize]]) -> TannerGraph {
        TannerGraph::from_var_adjacency(num_checks, adj.iter().map(|a| a.to_vec()).collect()).unwrap()
    }

    #[test]
    fn relabeling_invariance() {
        let g = graph(6, &[&[0, 1, 2], &[0, 3, 4], &[2, 3, 5]]);
        let h = g.relabel(&[2, 0, 1], &[5, 4, 3, 2, 1, 0]);
        assert_eq!(canonical_form(&g), canonical_form(&h));
        let lab = canonical_labeling(&g, None);
        assert_eq!(lab.apply(&g), canonical_labeling(&h, None).apply(&h));
    }

    #[test]
    fn path_and_star_of_sharings_differ() {
        // Path: v0-v1-v2-v3 via shared checks; star: v0 shares with v1, v2, v3.
        let path = graph(9, &[&[0, 3, 4], &[0, 1, 5], &[1, 2, 6], &[2, 7, 8]]);
        let star = graph(9, &[&[0, 1, 2], &[0, 3, 4], &[1, 5, 6], &[2, 7, 8]]);
        assert_ne!(canonical_form(&path), canonical_form(&star));
    }

    #[test]
    fn extra_leaf_check_changes_code() {
        let g = graph(2, &[&[0, 1], &[0]]);
        let h = graph(3, &[&[0, 1, 2], &[0]]);
        assert_ne!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn colors_are_respected() {
        let g = graph(5, &[&[0, 1, 2], &[0, 3, 4]]);
        let a = colored_canonical_form(&g, &[1, 0]);
        let b = colored_canonical_form(&g, &[0, 1]);
        assert_eq!(a, b);
        let three = graph(7, &[&[0, 1, 2], &[0, 3, 4], &[5, 6, 1]]);
        // Middle variable colored vs an end variable colored.
        assert_ne!(
            colored_canonical_form(&three, &[1, 0, 0]),
            colored_canonical_form(&three, &[0, 1, 0])
        );
    }

    #[test]
    fn symmetric_graph_is_fast() {
        // Twelve isolated variables: heavy symmetry handled by components.
        let adj: Vec<Vec<usize>> = (0..12).map(|v| vec![3 * v, 3 * v + 1, 3 * v + 2]).collect();
        let g = TannerGraph::from_var_adjacency(36, adj).unwrap();
        let _ = canonical_form(&g);
        // An 8-cycle ring with evenly spread leaves.
        let ring: Vec<Vec<usize>> = (0..8).map(|i| vec![i, (i + 1) % 8, 8 + i]).collect();
        let r = TannerGraph::from_var_adjacency(16, ring).unwrap();
        let lab = canonical_labeling(&r, None);
        assert_eq!(lab.apply(&r).num_edges(), 24);
    }
}
