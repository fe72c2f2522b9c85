use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use super::{attachment_sets, InducingSet, ProfileError, TrappingSet, TrappingSetProfile};
use crate::tanner::{
    canonical_labeling, colored_canonical_form, embeds, find_embeddings, CanonicalCode, CodeEnsembleParams,
    TannerGraph,
};
use crate::tbf::{indicator, CheckState, Decoder, TbfAlgorithm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileConfig {
    pub n_max: usize,
    pub params: CodeEnsembleParams,
    /// Stop after decoding this many candidate graphs.
    pub max_candidates: Option<usize>,
    /// Only run the first this-many outer rounds (iteration targets).
    pub max_rounds: Option<usize>,
}

impl ProfileConfig {
    pub fn new(n_max: usize, params: CodeEnsembleParams) -> Self {
        ProfileConfig {
            n_max,
            params,
            max_candidates: None,
            max_rounds: None,
        }
    }
}

/// Per-algorithm decode result: `Some(l)` converged at iteration `l`.
type Convergence = Vec<Option<usize>>;

/// Decodes with the first `k` variables initially corrupt under every
/// algorithm.
fn convergence(algs: &[TbfAlgorithm], g: &TannerGraph, j: &[usize], dec: &mut Decoder) -> Convergence {
    let y = indicator(g.num_variables(), j);
    algs.iter()
        .map(|a| match dec.run(a, g, &y) {
            (true, l) => Some(l),
            (false, _) => None,
        })
        .collect()
}

/// Whether some algorithm's trajectory on the graph reaches iteration `t`.
fn eligible(algs: &[TbfAlgorithm], conv: &Convergence, t: usize) -> bool {
    algs.iter()
        .zip(conv)
        .any(|(a, c)| t <= a.max_iters() && c.is_none_or(|l| l >= t))
}

/// Check-state trajectories `z^1..=z^t` for each algorithm that gets that
/// far on `g`.
fn trajectories(algs: &[TbfAlgorithm], g: &TannerGraph, j: &[usize], t: usize) -> Vec<Option<Vec<Vec<CheckState>>>> {
    let y = indicator(g.num_variables(), j);
    let mut dec = Decoder::new();
    algs.iter()
        .map(|a| {
            if t > a.max_iters() {
                return None;
            }
            let mut z = Vec::with_capacity(t);
            dec.run_observed(a, g, &y, |l, _, zs| {
                if let Some(zs) = zs {
                    if l <= t {
                        z.push(zs.to_vec());
                    }
                }
            });
            (z.len() >= t).then_some(z)
        })
        .collect()
}

/// Whether a new variable attached to checks `a` plus fresh checks becomes
/// corrupt exactly at iteration `t` under algorithm `alg`, given the host
/// trajectory `z` (which the new variable cannot influence while correct).
fn corrupt_first_at(alg: &TbfAlgorithm, z: &[Vec<CheckState>], a: &[usize], t: usize) -> bool {
    let d_v = alg.d_v();
    let fresh = d_v - a.len();
    let mut w = alg.delta_v(0);
    if z.len() < t {
        return false;
    }
    let xi = alg.rule().xi_index();
    for (l, zl) in z.iter().enumerate().take(t) {
        let mut counts = [0usize; 4];
        for &c in a {
            counts[zl[c].index()] += 1;
        }
        let fresh_state = if l == 0 { alg.delta_c(0) } else { CheckState::PrevSat };
        counts[fresh_state.index()] += fresh;
        w = alg.rule().apply_indexed(w, xi.index_of_counts(counts[0], counts[1], counts[2]));
        let corrupt = w.bit() == 1;
        if corrupt != (l + 1 == t) {
            return false;
        }
    }
    true
}

/// Attachment sets for which the new variable qualifies at iteration `t`
/// under at least one algorithm.
fn qualifying(
    algs: &[TbfAlgorithm],
    g: &TannerGraph,
    j: &[usize],
    t: usize,
    params: &CodeEnsembleParams,
    first_only: bool,
) -> Vec<Vec<usize>> {
    let trajs = trajectories(algs, g, j, t);
    if trajs.iter().all(Option::is_none) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for a in attachment_sets(g, params) {
        let ok = algs
            .iter()
            .zip(&trajs)
            .any(|(alg, z)| z.as_ref().is_some_and(|z| corrupt_first_at(alg, z, &a, t)));
        if ok {
            out.push(a);
            if first_only {
                break;
            }
        }
    }
    out
}

fn colors(n: usize, j: &[usize]) -> Vec<u32> {
    let mut c = vec![0u32; n];
    for &v in j {
        c[v] = 1;
    }
    c
}

/// All graphs (up to isomorphism fixing `inducing`) obtained by adding one
/// variable to `k_graph` that is corrupt at the end of iteration `t` and
/// correct at every earlier iteration, when decoding with `inducing`
/// initially corrupt.
pub fn expand_candidates(
    k_graph: &TannerGraph,
    inducing: &[usize],
    alg: &TbfAlgorithm,
    target_iter: usize,
    params: &CodeEnsembleParams,
    n_max: usize,
) -> Vec<TannerGraph> {
    if target_iter == 0 || k_graph.num_variables() >= n_max {
        return Vec::new();
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in qualifying(std::slice::from_ref(alg), k_graph, inducing, target_iter, params, false) {
        let u = k_graph.with_new_variable(&a, params.d_v - a.len());
        if seen.insert(colored_canonical_form(&u, &colors(u.num_variables(), inducing))) {
            out.push(u);
        }
    }
    out
}

fn all_fail(algs: &[TbfAlgorithm], g: &TannerGraph, j: &[usize], dec: &mut Decoder) -> bool {
    let y = indicator(g.num_variables(), j);
    algs.iter().all(|a| !dec.run(a, g, &y).0)
}

/// Minimality test against members found so far: `u` (failing with `j`)
/// is a trapping set unless some member embeds into a proper subgraph of `u`
/// with one of its inducing subsets mapped onto `j`.
fn minimal_against<'a>(u: &TannerGraph, j: &[usize], found: impl IntoIterator<Item = &'a TrappingSet>) -> bool {
    !found.into_iter().any(|s| {
        s.size() < u.num_variables()
            && s.inducing_embeddings
                .iter()
                .any(|j2| embeds(&s.graph, j2, u, j, true))
    })
}

/// Minimality test for a failing graph `u` with inducing subset `j`.
///
/// `found` must already hold every trapping set smaller than `u`; a member
/// larger than `u` signals an out-of-order call and is an error, as is a
/// `j` that does not induce `inducing` or on which `alg` converges.
pub fn is_trapping_set(
    u: &TannerGraph,
    j: &[usize],
    alg: &TbfAlgorithm,
    found: &TrappingSetProfile,
    inducing: &InducingSet,
) -> Result<bool, ProfileError> {
    let sub = u
        .induced_subgraph(j)
        .map_err(|e| ProfileError::Precondition(e.to_string()))?;
    if canonical_labeling(&sub, None).code != inducing.code {
        return Err(ProfileError::Precondition("j does not induce the inducing set".into()));
    }
    if !all_fail(std::slice::from_ref(alg), u, j, &mut Decoder::new()) {
        return Err(ProfileError::Precondition("decoding converges on u".into()));
    }
    if let Some(big) = found.members.values().find(|s| s.size() > u.num_variables()) {
        return Err(ProfileError::Precondition(format!(
            "found holds a {}-variable member, larger than u ({} variables)",
            big.size(),
            u.num_variables()
        )));
    }
    Ok(minimal_against(u, j, found.members.values()))
}

/// Union over algorithms of per-variable corruption iterations.
fn witness(algs: &[TbfAlgorithm], g: &TannerGraph, j: &[usize]) -> Vec<Vec<usize>> {
    let y = indicator(g.num_variables(), j);
    let mut dec = Decoder::new();
    let mut hist: Vec<Vec<usize>> = vec![Vec::new(); g.num_variables()];
    for a in algs {
        let out = dec.decode_received(a, g, &y);
        for (h, o) in hist.iter_mut().zip(out.corruption_history) {
            h.extend(o);
        }
    }
    for h in &mut hist {
        h.sort_unstable();
        h.dedup();
    }
    hist
}

fn make_member(algs: &[TbfAlgorithm], inducing: &InducingSet, u: &TannerGraph, j: &[usize]) -> (CanonicalCode, TrappingSet) {
    let lab = canonical_labeling(u, None);
    let graph = lab.apply(u);
    let mut dec = Decoder::new();
    let mut subsets: Vec<Vec<usize>> = find_embeddings(&inducing.graph, &[], &graph, &[], false)
        .into_iter()
        .map(|e| e.image().0)
        .filter(|jj| all_fail(algs, &graph, jj, &mut dec))
        .collect();
    subsets.sort();
    subsets.dedup();
    let witness_set = lab.map_vars(j);
    debug_assert!(subsets.contains(&witness_set));
    let witness = witness(algs, &graph, &witness_set);
    (
        lab.code,
        TrappingSet {
            graph,
            inducing_embeddings: subsets,
            witness_set,
            witness,
        },
    )
}

struct Node {
    graph: TannerGraph,
    conv: Convergence,
}

struct Builder<'a> {
    algs: &'a [TbfAlgorithm],
    cfg: &'a ProfileConfig,
    j: Vec<usize>,
    nodes: Vec<Node>,
    seen: HashSet<CanonicalCode>,
    failing: Vec<(usize, CanonicalCode, TannerGraph)>,
    decoded: usize,
    complete: bool,
    closed: bool,
}

impl Builder<'_> {
    fn budget_left(&self) -> usize {
        self.cfg.max_candidates.map_or(usize::MAX, |b| b.saturating_sub(self.decoded))
    }

    /// Runs every round; returns false when the budget ran out.
    fn run(&mut self) -> bool {
        let max_t = self.algs.iter().map(|a| a.max_iters()).max().unwrap_or(0);
        let rounds = self.cfg.max_rounds.map_or(max_t, |r| r.min(max_t));
        for t in 1..=rounds {
            if !self.round(t) {
                return false;
            }
        }
        // A capped run is still complete if the skipped rounds would add
        // nothing.
        for t in rounds + 1..=max_t {
            let blocked = self.nodes.iter().any(|n| {
                n.graph.num_variables() < self.cfg.n_max
                    && eligible(self.algs, &n.conv, t)
                    && !qualifying(self.algs, &n.graph, &self.j, t, &self.cfg.params, true).is_empty()
            });
            if blocked {
                self.complete = false;
                break;
            }
        }
        true
    }

    fn round(&mut self, t: usize) -> bool {
        let n_max = self.cfg.n_max;
        let mut frontier: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if eligible(self.algs, &node.conv, t) {
                frontier.entry(node.graph.num_variables()).or_default().push(i);
            }
        }
        while let Some((size, idxs)) = frontier.pop_first() {
            if size >= n_max {
                if self.closed {
                    let (algs, j, params) = (self.algs, &self.j, &self.cfg.params);
                    let nodes = &self.nodes;
                    let open = idxs
                        .par_iter()
                        .any(|&i| !qualifying(algs, &nodes[i].graph, j, t, params, true).is_empty());
                    if open {
                        self.closed = false;
                    }
                }
                continue;
            }
            let (algs, j, params) = (self.algs, &self.j, &self.cfg.params);
            let nodes = &self.nodes;
            let generated: Vec<Vec<(CanonicalCode, TannerGraph)>> = idxs
                .par_iter()
                .map(|&i| {
                    let g = &nodes[i].graph;
                    let col = colors(g.num_variables() + 1, j);
                    qualifying(algs, g, j, t, params, false)
                        .into_iter()
                        .map(|a| {
                            let u = g.with_new_variable(&a, params.d_v - a.len());
                            (colored_canonical_form(&u, &col), u)
                        })
                        .collect()
                })
                .collect();
            let mut fresh = Vec::new();
            for (code, u) in generated.into_iter().flatten() {
                if !self.seen.contains(&code) {
                    self.seen.insert(code.clone());
                    fresh.push((code, u));
                }
            }
            let left = self.budget_left();
            let out_of_budget = fresh.len() > left;
            fresh.truncate(left);
            self.decoded += fresh.len();
            let results: Vec<Convergence> = fresh
                .par_iter()
                .map_init(Decoder::new, |dec, (_, u)| convergence(algs, u, j, dec))
                .collect();
            for ((code, u), conv) in fresh.into_iter().zip(results) {
                if conv.iter().any(Option::is_some) {
                    let idx = self.nodes.len();
                    if eligible(self.algs, &conv, t) {
                        frontier.entry(size + 1).or_default().push(idx);
                    }
                    self.nodes.push(Node { graph: u, conv });
                } else {
                    self.failing.push((size + 1, code, u));
                }
            }
            if out_of_budget {
                return false;
            }
        }
        true
    }
}

fn build(algs: &[TbfAlgorithm], inducing: &InducingSet, cfg: &ProfileConfig) -> Result<TrappingSetProfile, ProfileError> {
    if algs.is_empty() {
        return Err(ProfileError::Config("no algorithms given".into()));
    }
    let d_v = cfg.params.d_v;
    if let Some(a) = algs.iter().find(|a| a.d_v() != d_v) {
        return Err(ProfileError::Config(format!(
            "algorithm {} has degree {}, ensemble has {d_v}",
            a.id(),
            a.d_v()
        )));
    }
    let ig = &inducing.graph;
    if ig.var_adjacency().iter().any(|cs| cs.len() != d_v) {
        return Err(ProfileError::Config("inducing set is not variable-regular with degree d_v".into()));
    }
    if !cfg.params.admits(ig) {
        return Err(ProfileError::Config("inducing set violates the ensemble constraints".into()));
    }
    let k = inducing.size();
    if cfg.n_max < k {
        return Err(ProfileError::Config(format!("n_max = {} is below |V(I)| = {k}", cfg.n_max)));
    }
    let algorithm_id = algs.iter().map(|a| a.id()).collect::<Vec<_>>().join("+");
    let mut profile = TrappingSetProfile {
        algorithm_id,
        inducing: inducing.clone(),
        n_max: cfg.n_max,
        params: cfg.params,
        members: BTreeMap::new(),
        complete: true,
        closed: true,
        emission: Vec::new(),
    };
    let j: Vec<usize> = (0..k).collect();
    let mut dec = Decoder::new();
    let conv = convergence(algs, ig, &j, &mut dec);
    if conv.iter().all(Option::is_none) {
        let (code, member) = make_member(algs, inducing, ig, &j);
        profile.emission.push(code.clone());
        profile.members.insert(code, member);
        return Ok(profile);
    }
    let mut b = Builder {
        algs,
        cfg,
        j: j.clone(),
        nodes: vec![Node { graph: ig.clone(), conv }],
        seen: HashSet::from([colored_canonical_form(ig, &colors(k, &j))]),
        failing: Vec::new(),
        decoded: 0,
        complete: true,
        closed: true,
    };
    if !b.run() {
        b.complete = false;
    }
    profile.complete = b.complete;
    profile.closed = b.closed;

    let mut failing = std::mem::take(&mut b.failing);
    failing.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    let mut start = 0;
    while start < failing.len() {
        let size = failing[start].0;
        let end = start + failing[start..].iter().take_while(|f| f.0 == size).count();
        let members = &profile.members;
        let decided: Vec<bool> = failing[start..end]
            .par_iter()
            .map(|(_, _, u)| minimal_against(u, &j, members.values()))
            .collect();
        for ((_, _, u), keep) in failing[start..end].iter().zip(decided) {
            if !keep {
                continue;
            }
            let (code, member) = make_member(algs, inducing, u, &j);
            if !profile.members.contains_key(&code) {
                profile.emission.push(code.clone());
                profile.members.insert(code, member);
            }
        }
        start = end;
    }
    Ok(profile)
}

/// Trapping set profile of `alg` for inducing set `inducing`, restricted to
/// graphs with at most `cfg.n_max` variables.
pub fn build_profile(alg: &TbfAlgorithm, inducing: &InducingSet, cfg: &ProfileConfig) -> Result<TrappingSetProfile, ProfileError> {
    build(std::slice::from_ref(alg), inducing, cfg)
}

/// Decoder-level profile: members are minimal graphs on which every
/// algorithm in `algs` fails. A new variable qualifies for expansion when
/// any algorithm corrupts it at the target iteration.
pub fn joint_profile(algs: &[TbfAlgorithm], inducing: &InducingSet, cfg: &ProfileConfig) -> Result<TrappingSetProfile, ProfileError> {
    build(algs, inducing, cfg)
}
