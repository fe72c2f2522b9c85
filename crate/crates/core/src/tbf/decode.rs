use super::{check_update, CheckState, TbfAlgorithm, VarState};
use crate::tanner::TannerGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub converged: bool,
    pub iterations: usize,
    pub final_bits: Vec<u8>,
    /// Per variable, the iterations `l` (from 0) at which its bit was 1.
    pub corruption_history: Vec<Vec<usize>>,
}

impl DecodeOutcome {
    /// Whether every variable was corrupt at some iteration.
    pub fn all_corrupt_at_some_iteration(&self) -> bool {
        self.corruption_history.iter().all(|h| !h.is_empty())
    }
}

/// Full state trajectory of one decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeTrace {
    pub outcome: DecodeOutcome,
    /// `var_states[l]` is `w^l` for `l = 0..=iterations`.
    pub var_states: Vec<Vec<VarState>>,
    /// `check_states[l - 1]` is `z^l`, the check states read by iteration
    /// `l`, for `l = 1..=iterations`.
    pub check_states: Vec<Vec<CheckState>>,
}

/// Reusable buffers for repeated decoding.
#[derive(Debug, Default, Clone)]
pub struct Decoder {
    w: Vec<VarState>,
    w_next: Vec<VarState>,
    s_prev: Vec<u8>,
    s_cur: Vec<u8>,
    z: Vec<CheckState>,
}

fn syndrome_into(g: &TannerGraph, w: &[VarState], s: &mut [u8]) -> bool {
    let mut zero = true;
    for (c, out) in s.iter_mut().enumerate() {
        let mut p = 0u8;
        for &v in g.vars_of(c) {
            p ^= w[v].bit();
        }
        *out = p;
        zero &= p == 0;
    }
    zero
}

impl Decoder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs the algorithm on received word `y` and returns `(converged,
    /// iterations)`; `observe(l, w^l, z^l)` is called for `l = 0` (with no
    /// check states) and after every iteration.
    pub fn run_observed(
        &mut self,
        alg: &TbfAlgorithm,
        g: &TannerGraph,
        y: &[u8],
        mut observe: impl FnMut(usize, &[VarState], Option<&[CheckState]>),
    ) -> (bool, usize) {
        let n = g.num_variables();
        let m = g.num_checks();
        assert_eq!(y.len(), n, "received word length must match the graph");
        assert!(
            g.var_adjacency().iter().all(|cs| cs.len() == alg.d_v()),
            "every variable degree must equal the rule degree {}",
            alg.d_v()
        );
        let rule = alg.rule();
        let xi = rule.xi_index();
        self.w.clear();
        self.w.extend(y.iter().map(|&b| alg.delta_v(b)));
        self.w_next.resize(n, VarState::StrongZero);
        self.s_prev.resize(m, 0);
        self.s_cur.resize(m, 0);
        observe(0, &self.w, None);
        if syndrome_into(g, &self.w, &mut self.s_prev) {
            return (true, 0);
        }
        self.z.clear();
        self.z.extend(self.s_prev.iter().map(|&s| alg.delta_c(s)));
        for l in 1..=alg.max_iters() {
            for v in 0..n {
                let mut counts = [0usize; 4];
                for &c in g.checks_of(v) {
                    counts[self.z[c].index()] += 1;
                }
                let i = xi.index_of_counts(counts[0], counts[1], counts[2]);
                self.w_next[v] = rule.apply_indexed(self.w[v], i);
            }
            std::mem::swap(&mut self.w, &mut self.w_next);
            observe(l, &self.w, Some(&self.z));
            if syndrome_into(g, &self.w, &mut self.s_cur) {
                return (true, l);
            }
            for c in 0..m {
                self.z[c] = check_update(self.s_prev[c], self.s_cur[c]);
            }
            std::mem::swap(&mut self.s_prev, &mut self.s_cur);
        }
        (false, alg.max_iters())
    }

    pub fn run(&mut self, alg: &TbfAlgorithm, g: &TannerGraph, y: &[u8]) -> (bool, usize) {
        self.run_observed(alg, g, y, |_, _, _| {})
    }

    /// Decision bits after the last [`run`](Self::run).
    pub fn bits(&self) -> Vec<u8> {
        self.w.iter().map(|w| w.bit()).collect()
    }

    pub fn decode_received(&mut self, alg: &TbfAlgorithm, g: &TannerGraph, y: &[u8]) -> DecodeOutcome {
        let mut history = vec![Vec::new(); g.num_variables()];
        let (converged, iterations) = self.run_observed(alg, g, y, |l, w, _| {
            for (h, s) in history.iter_mut().zip(w) {
                if s.bit() == 1 {
                    h.push(l);
                }
            }
        });
        DecodeOutcome {
            converged,
            iterations,
            final_bits: self.bits(),
            corruption_history: history,
        }
    }

    pub fn decode_traced(&mut self, alg: &TbfAlgorithm, g: &TannerGraph, y: &[u8]) -> DecodeTrace {
        let mut var_states = Vec::new();
        let mut check_states = Vec::new();
        let mut history = vec![Vec::new(); g.num_variables()];
        let (converged, iterations) = self.run_observed(alg, g, y, |l, w, z| {
            for (h, s) in history.iter_mut().zip(w) {
                if s.bit() == 1 {
                    h.push(l);
                }
            }
            var_states.push(w.to_vec());
            if let Some(z) = z {
                check_states.push(z.to_vec());
            }
        });
        DecodeTrace {
            outcome: DecodeOutcome {
                converged,
                iterations,
                final_bits: self.bits(),
                corruption_history: history,
            },
            var_states,
            check_states,
        }
    }
}

/// Indicator vector of `corrupt` over `n` positions.
///
/// # Panics
/// If an id is out of range.
pub fn indicator(n: usize, corrupt: &[usize]) -> Vec<u8> {
    let mut y = vec![0u8; n];
    for &v in corrupt {
        assert!(v < n, "variable {v} out of range for {n} variables");
        y[v] = 1;
    }
    y
}

/// Decodes the all-zero codeword received with bits `corrupt0` flipped.
///
/// # Panics
/// If a variable id is out of range or the graph is not regular with the
/// rule's degree.
pub fn decode(alg: &TbfAlgorithm, g: &TannerGraph, corrupt0: &[usize]) -> DecodeOutcome {
    Decoder::new().decode_received(alg, g, &indicator(g.num_variables(), corrupt0))
}

pub fn decode_traced(alg: &TbfAlgorithm, g: &TannerGraph, corrupt0: &[usize]) -> DecodeTrace {
    Decoder::new().decode_traced(alg, g, &indicator(g.num_variables(), corrupt0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbf::{ladder_rule, FlipRule};

    fn alg(threshold: usize) -> TbfAlgorithm {
        TbfAlgorithm::with_defaults(ladder_rule(3, threshold), 10).unwrap()
    }

    fn two_var_graph() -> TannerGraph {
        // Two variables sharing check 0, each with two private checks.
        TannerGraph::from_var_adjacency(5, vec![vec![0, 1, 2], vec![0, 3, 4]]).unwrap()
    }

    #[test]
    fn error_free_converges_immediately() {
        let g = two_var_graph();
        let out = decode(&alg(2), &g, &[]);
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.final_bits, vec![0, 0]);
    }

    #[test]
    fn single_error_hand_trace() {
        // Variable 0 corrupt: w^0 = (1s, 0s); s^0 = checks 0,1,2 unsatisfied.
        // z^1 = (1p,1p,1p,0p,0p). Variable 0 sees 3 unsatisfied: 1s -> 1w.
        // Variable 1 sees one unsatisfied (below threshold 2): stays 0s.
        // s^1 unchanged, z^2 = all 1p on 0..3. Variable 0: 1w -> 0w, so
        // s^2 = 0 and the decoder converges at iteration 2.
        let g = two_var_graph();
        let t = decode_traced(&alg(2), &g, &[0]);
        assert!(t.outcome.converged);
        assert_eq!(t.outcome.iterations, 2);
        assert_eq!(t.var_states[1], vec![VarState::WeakOne, VarState::StrongZero]);
        assert_eq!(t.var_states[2], vec![VarState::WeakZero, VarState::StrongZero]);
        use CheckState::*;
        assert_eq!(t.check_states[0], vec![PrevUnsat, PrevUnsat, PrevUnsat, PrevSat, PrevSat]);
        assert_eq!(t.check_states[1], vec![PrevUnsat, PrevUnsat, PrevUnsat, PrevSat, PrevSat]);
        assert_eq!(t.outcome.corruption_history, vec![vec![0, 1], vec![]]);
        assert_eq!(crate::tbf::xi_at(1, &t.check_states[0], &g).0, [2, 0, 1, 0]);
    }

    #[test]
    fn non_flipping_stub_never_converges() {
        let stub = TbfAlgorithm::unvalidated(FlipRule::from_fn(3, |w, _| w), 4, VarState::StrongZero, CheckState::PrevSat).unwrap();
        let out = decode(&stub, &two_var_graph(), &[1]);
        assert!(!out.converged);
        assert_eq!(out.iterations, 4);
        assert_eq!(out.corruption_history[1], vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn restart_from_output_converges_at_zero() {
        let g = crate::tanner::tanner_155_64().graph;
        let a = alg(2);
        let out = decode(&a, &g, &[0, 40]);
        assert!(out.converged);
        let again = Decoder::new().decode_received(&a, &g, &out.final_bits);
        assert_eq!(again.iterations, 0);
    }
}
