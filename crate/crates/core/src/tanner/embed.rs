//! Subgraph embedding search (injective, edge-preserving maps).

use std::collections::HashSet;

use super::TannerGraph;

/// Pattern-to-host map: `vars[p]` is the image of pattern variable `p`,
/// `checks[c]` the image of pattern check `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub vars: Vec<usize>,
    pub checks: Vec<usize>,
}

impl Embedding {
    /// Image as sorted host variable and check sets.
    pub fn image(&self) -> (Vec<usize>, Vec<usize>) {
        let mut v = self.vars.clone();
        let mut c = self.checks.clone();
        v.sort_unstable();
        c.sort_unstable();
        (v, c)
    }
}

/// All embeddings of `pattern` into `host`, one per distinct image, such that
/// every `anchor` variable lands inside `target`. With `proper`, embeddings
/// covering all of `host` are dropped.
pub fn find_embeddings(
    pattern: &TannerGraph,
    anchor: &[usize],
    host: &TannerGraph,
    target: &[usize],
    proper: bool,
) -> Vec<Embedding> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    Matcher::new(pattern, anchor, host, target, proper).run(&mut |e| {
        if seen.insert(e.image()) {
            out.push(e.clone());
        }
        true
    });
    out
}

/// Whether at least one embedding exists (see [`find_embeddings`]).
pub fn embeds(
    pattern: &TannerGraph,
    anchor: &[usize],
    host: &TannerGraph,
    target: &[usize],
    proper: bool,
) -> bool {
    let mut found = false;
    Matcher::new(pattern, anchor, host, target, proper).run(&mut |_| {
        found = true;
        false
    });
    found
}

struct Matcher<'a> {
    pattern: &'a TannerGraph,
    host: &'a TannerGraph,
    is_anchor: Vec<bool>,
    in_target: Vec<bool>,
    target: Vec<usize>,
    order: Vec<usize>,
    proper: bool,
    var_map: Vec<usize>,
    check_map: Vec<usize>,
    host_var_used: Vec<bool>,
    host_check_used: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl<'a> Matcher<'a> {
    fn new(
        pattern: &'a TannerGraph,
        anchor: &[usize],
        host: &'a TannerGraph,
        target: &[usize],
        proper: bool,
    ) -> Self {
        let mut is_anchor = vec![false; pattern.num_variables()];
        for &a in anchor {
            is_anchor[a] = true;
        }
        let mut in_target = vec![false; host.num_variables()];
        for &t in target {
            in_target[t] = true;
        }
        let order = search_order(pattern, &is_anchor);
        Matcher {
            pattern,
            host,
            is_anchor,
            in_target,
            target: target.to_vec(),
            order,
            proper,
            var_map: vec![UNSET; pattern.num_variables()],
            check_map: vec![UNSET; pattern.num_checks()],
            host_var_used: vec![false; host.num_variables()],
            host_check_used: vec![false; host.num_checks()],
        }
    }

    fn run(&mut self, emit: &mut dyn FnMut(&Embedding) -> bool) {
        if self.pattern.num_variables() > self.host.num_variables()
            || self.pattern.num_checks() > self.host.num_checks()
        {
            return;
        }
        if self.is_anchor.iter().filter(|&&a| a).count() > self.target.len() {
            return;
        }
        self.extend(0, emit);
    }

    /// Returns false once the caller asked to stop.
    fn extend(&mut self, depth: usize, emit: &mut dyn FnMut(&Embedding) -> bool) -> bool {
        if depth == self.order.len() {
            return self.finish(emit);
        }
        let p = self.order[depth];
        let mapped_check = self.pattern.checks_of(p).iter().copied().find(|&c| self.check_map[c] != UNSET);
        let candidates: Vec<usize> = match mapped_check {
            Some(c) => self.host.vars_of(self.check_map[c]).to_vec(),
            None if self.is_anchor[p] => self.target.clone(),
            None => (0..self.host.num_variables()).collect(),
        };
        for h in candidates {
            if self.host_var_used[h]
                || (self.is_anchor[p] && !self.in_target[h])
                || self.host.var_degree(h) < self.pattern.var_degree(p)
            {
                continue;
            }
            // Already-mapped checks of p must be adjacent to h.
            let ok = self
                .pattern
                .checks_of(p)
                .iter()
                .all(|&c| self.check_map[c] == UNSET || self.host.has_edge(h, self.check_map[c]));
            if !ok {
                continue;
            }
            self.var_map[p] = h;
            self.host_var_used[h] = true;
            let mut free: Vec<usize> = self
                .pattern
                .checks_of(p)
                .iter()
                .copied()
                .filter(|&c| self.check_map[c] == UNSET)
                .collect();
            // Leaf checks of p are interchangeable: they go last and are
            // assigned in increasing host order.
            free.sort_by_key(|&c| self.pattern.check_degree(c) == 1);
            let keep_going = self.assign_checks(&free, 0, h, depth, emit);
            self.host_var_used[h] = false;
            self.var_map[p] = UNSET;
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn assign_checks(
        &mut self,
        free: &[usize],
        i: usize,
        h: usize,
        depth: usize,
        emit: &mut dyn FnMut(&Embedding) -> bool,
    ) -> bool {
        if i == free.len() {
            return self.extend(depth + 1, emit);
        }
        let c = free[i];
        let pat_deg = self.pattern.check_degree(c);
        let floor = match i.checked_sub(1) {
            Some(prev) if pat_deg == 1 && self.pattern.check_degree(free[prev]) == 1 => self.check_map[free[prev]] + 1,
            _ => 0,
        };
        for k in 0..self.host.checks_of(h).len() {
            let hc = self.host.checks_of(h)[k];
            if hc < floor || self.host_check_used[hc] || self.host.check_degree(hc) < pat_deg {
                continue;
            }
            self.check_map[c] = hc;
            self.host_check_used[hc] = true;
            let keep_going = self.assign_checks(free, i + 1, h, depth, emit);
            self.host_check_used[hc] = false;
            self.check_map[c] = UNSET;
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn finish(&mut self, emit: &mut dyn FnMut(&Embedding) -> bool) -> bool {
        if self.proper
            && self.pattern.num_variables() == self.host.num_variables()
            && self.pattern.num_checks() == self.host.num_checks()
        {
            return true;
        }
        // Pattern checks with no mapped neighbour cannot exist (no isolated
        // checks), so every check is assigned by now.
        debug_assert!(self.check_map.iter().all(|&c| c != UNSET));
        emit(&Embedding {
            vars: self.var_map.clone(),
            checks: self.check_map.clone(),
        })
    }
}

/// Variables ordered so that each one after the first of its component shares
/// a check with an earlier one; anchors are preferred.
fn search_order(pattern: &TannerGraph, is_anchor: &[bool]) -> Vec<usize> {
    let n = pattern.num_variables();
    let mut placed = vec![false; n];
    let mut touched = vec![false; pattern.num_checks()];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = pattern.checks_of(v).iter().filter(|&&c| touched[c]).count();
                (links, is_anchor[v], pattern.var_degree(v), std::cmp::Reverse(v))
            })
            .expect("unplaced variable remains");
        placed[next] = true;
        for &c in pattern.checks_of(next) {
            touched[c] = true;
        }
        order.push(next);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six_cycle() -> TannerGraph {
        TannerGraph::from_var_adjacency(6, vec![vec![0, 2, 3], vec![0, 1, 4], vec![1, 2, 5]]).unwrap()
    }

    #[test]
    fn identity_embedding_exists() {
        let g = six_cycle();
        let all: Vec<usize> = (0..3).collect();
        let embs = find_embeddings(&g, &all, &g, &all, false);
        assert!(!embs.is_empty());
        assert!(!embeds(&g, &all, &g, &all, true));
    }

    #[test]
    fn single_variable_lands_everywhere() {
        let single = TannerGraph::from_var_adjacency(3, vec![vec![0, 1, 2]]).unwrap();
        let g = six_cycle();
        let embs = find_embeddings(&single, &[], &g, &[], true);
        let mut vars: Vec<usize> = embs.iter().map(|e| e.vars[0]).collect();
        vars.sort_unstable();
        vars.dedup();
        assert_eq!(vars, vec![0, 1, 2]);
        assert_eq!(embs.len(), 3);
    }

    #[test]
    fn pair_into_six_cycle_three_images() {
        let pair = TannerGraph::from_var_adjacency(5, vec![vec![0, 1, 2], vec![0, 3, 4]]).unwrap();
        let g = six_cycle();
        assert_eq!(find_embeddings(&pair, &[], &g, &[], false).len(), 3);
        // Anchoring variable 0 of the pattern onto host variable 1 only.
        let anchored = find_embeddings(&pair, &[0], &g, &[1], false);
        assert_eq!(anchored.len(), 2);
        assert!(anchored.iter().all(|e| e.vars[0] == 1));
    }

    #[test]
    fn four_cycle_does_not_embed_into_girth_six() {
        let sq = TannerGraph::from_var_adjacency(4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert!(!embeds(&sq, &[], &six_cycle(), &[], false));
    }
}
