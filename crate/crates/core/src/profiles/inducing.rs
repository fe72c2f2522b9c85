use std::collections::HashSet;

use super::InducingSet;
use crate::tanner::{canonical_labeling, CodeEnsembleParams, TannerGraph};

/// Sets of existing checks a new variable may attach to: at most `d_v`
/// checks, each below the degree cap, pairwise far enough apart that no
/// cycle shorter than `girth_min` closes through the new variable.
pub(crate) fn attachment_sets(g: &TannerGraph, params: &CodeEnsembleParams) -> Vec<Vec<usize>> {
    let m = g.num_checks();
    let open: Vec<bool> = (0..m).map(|c| g.check_degree(c) < params.d_c_max).collect();
    // conflict[c] lists checks d with dist(c, d) < girth_min - 2.
    let limit = params.girth_min.saturating_sub(4);
    let conflict: Vec<Vec<bool>> = (0..m)
        .map(|c| {
            if !open[c] {
                return Vec::new();
            }
            g.check_distances(c, limit)
                .into_iter()
                .map(|d| d != usize::MAX && d + 2 < params.girth_min)
                .collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    let mut chosen = Vec::new();
    fn rec(
        start: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        open: &[bool],
        conflict: &[Vec<bool>],
        d_v: usize,
    ) {
        if chosen.len() == d_v {
            return;
        }
        for c in start..open.len() {
            if !open[c] || chosen.iter().any(|&x| conflict[x][c]) {
                continue;
            }
            chosen.push(c);
            out.push(chosen.clone());
            rec(c + 1, chosen, out, open, conflict, d_v);
            chosen.pop();
        }
    }
    rec(0, &mut chosen, &mut out, &open, &conflict, params.d_v);
    if params.min_distance > 1 {
        // Only a variable with no fresh (degree one) check can close a codeword.
        out.retain(|a| {
            a.len() < params.d_v || !g.with_new_variable(a, 0).has_codeword_through_below(g.num_variables(), params.min_distance)
        });
    }
    out
}

/// All pairwise non-isomorphic graphs on `k` variables of degree `d_v`
/// whose checks have degree at most `d_c_max` and whose girth is at least
/// `girth_min`, and without codewords below `min_distance`. Disconnected graphs are included. Graphs are returned in
/// canonical labeling, sorted by canonical code.
pub fn enumerate_inducing_sets(k: usize, params: &CodeEnsembleParams) -> Vec<InducingSet> {
    let mut level = vec![TannerGraph::empty()];
    for _ in 0..k {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for a in attachment_sets(g, params) {
                let h = g.with_new_variable(&a, params.d_v - a.len());
                let lab = canonical_labeling(&h, None);
                if seen.insert(lab.code.clone()) {
                    next.push((lab.code.clone(), lab.apply(&h)));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, g)| g).collect();
    }
    level.into_iter().map(InducingSet::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let p = CodeEnsembleParams::tanner_like();
        assert_eq!(enumerate_inducing_sets(1, &p).len(), 1);
        assert_eq!(enumerate_inducing_sets(2, &p).len(), 2);
        assert_eq!(enumerate_inducing_sets(3, &p).len(), 4);
    }

    #[test]
    fn members_respect_constraints() {
        let p = CodeEnsembleParams::tanner_like();
        for i in enumerate_inducing_sets(4, &p) {
            let g = &i.graph;
            assert_eq!(g.regular_var_degree(), Some(3));
            assert!(g.max_check_degree() <= 5);
            assert!(g.girth().is_none_or(|x| x >= 8));
        }
    }

    #[test]
    fn attachment_respects_girth() {
        let p = CodeEnsembleParams::new(3, 5, 6).unwrap();
        // Two variables sharing check 0: attaching to checks 1 and 3 closes a
        // 6-cycle, allowed at girth 6 but not at girth 8.
        let g = TannerGraph::from_var_adjacency(5, vec![vec![0, 1, 2], vec![0, 3, 4]]).unwrap();
        assert!(attachment_sets(&g, &p).contains(&vec![1, 3]));
        assert!(!attachment_sets(&g, &CodeEnsembleParams::tanner_like()).contains(&vec![1, 3]));
        // Two checks of the same variable would close a 4-cycle.
        assert!(!attachment_sets(&g, &p).contains(&vec![1, 2]));
    }
}
