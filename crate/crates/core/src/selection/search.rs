//! Seeded local search for rules that correct every error of weight up to `t`.
//!
//! Two stages. A cheap guide first: with a quasi-cyclic guide code, mutations
//! are accepted while they do not increase the (weighted) number of
//! orbit-representative error patterns of weight up to `t` the rule fails on.
//! Once that count reaches zero, the search keeps it there and minimises a
//! penalty over the trapping set profiles of every inducing set of size up
//! to `t`, where small members cost most. A penalty of zero means every
//! profile is empty, complete and closed: the rule provably corrects all such
//! errors on every graph of the ensemble.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SelectionError;
use crate::decoder::{exhaustive_weight_sweep, ParallelDecoder};
use crate::profiles::{build_profile, enumerate_inducing_sets, InducingSet, ProfileConfig};
use crate::tanner::{CodeEnsembleParams, QcCode};
use crate::tbf::{FlipRule, RuleFamily, TbfAlgorithm, VarState};

#[derive(Debug, Clone)]
pub struct CorrectorSearch {
    pub family: RuleFamily,
    /// Largest error weight to correct.
    pub t: usize,
    pub params: CodeEnsembleParams,
    pub n_max: usize,
    pub lmax: usize,
    pub seed: u64,
    /// Mutations tried in each stage.
    pub guide_steps: usize,
    pub profile_steps: usize,
    pub guide: Option<QcCode>,
    /// Candidate budget per profile during the search.
    pub max_candidates: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        id: u128,
        algorithm: TbfAlgorithm,
        /// Accepted and rejected mutations, both stages.
        steps: usize,
    },
    Exhausted {
        best_id: u128,
        penalty: u64,
        steps: usize,
    },
}

fn guide_failures(alg: &TbfAlgorithm, qc: &QcCode, t: usize) -> u64 {
    let d = ParallelDecoder::new(vec![alg.clone()]).expect("one algorithm");
    let scale = |e: usize| 1u64.checked_shl(16 * e as u32).unwrap_or(u64::MAX);
    let mut total = 0u64;
    for w in 1..=t {
        let r = exhaustive_weight_sweep(&qc.graph, &d, w, Some(qc), u128::MAX).expect("no budget");
        let f = r.failures.len() as u64;
        // Lower weights dominate; stop at the first failing weight.
        total = total.saturating_add(f.saturating_mul(scale(t - w)));
        if f > 0 {
            total = total.saturating_add(scale(t - w + 1));
            break;
        }
    }
    total
}

fn penalty(alg: &TbfAlgorithm, sets: &[InducingSet], cfg: &ProfileConfig) -> Result<u64, SelectionError> {
    let mut s = 0u64;
    for i in sets {
        let p = build_profile(alg, i, cfg)?;
        for (size, count) in p.size_histogram() {
            s += count as u64 * (1u64 << (16usize.saturating_sub(size)));
        }
        if !p.complete || !p.closed {
            s += 1;
        }
    }
    Ok(s)
}

fn mutate(family: &RuleFamily, rule: &FlipRule, rng: &mut ChaCha8Rng, max_changes: usize) -> Option<FlipRule> {
    let mut strong = rule.row(VarState::StrongZero);
    let mut weak = rule.row(VarState::WeakZero);
    for _ in 0..rng.random_range(1..=max_changes) {
        let i = rng.random_range(0..family.xi_index().len());
        let allowed = family.allowed_pairs(i);
        let (a, b) = allowed[rng.random_range(0..allowed.len())];
        strong[i] = a;
        weak[i] = b;
    }
    FlipRule::from_rows(family.d_v(), &strong, &weak).ok()
}

/// Runs the search; identical inputs give identical results.
pub fn search_corrector(cfg: &CorrectorSearch) -> Result<SearchOutcome, SelectionError> {
    let fam = &cfg.family;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let make = |r: &FlipRule| TbfAlgorithm::with_defaults(r.clone(), cfg.lmax).ok();
    let mut steps = 0usize;
    let (mut cur, mut alg) = loop {
        steps += 1;
        let r = fam.rule_from_id(rng.random_range(0..fam.size())).expect("id in range");
        if let Some(a) = make(&r) {
            break (r, a);
        }
    };
    let guide_ok = |a: &TbfAlgorithm| cfg.guide.as_ref().is_none_or(|qc| guide_failures(a, qc, cfg.t) == 0);
    if let Some(qc) = &cfg.guide {
        let mut best = guide_failures(&alg, qc, cfg.t);
        for _ in 0..cfg.guide_steps {
            if best == 0 {
                break;
            }
            steps += 1;
            let Some(cand) = mutate(fam, &cur, &mut rng, 3) else { continue };
            let Some(a) = make(&cand) else { continue };
            let f = guide_failures(&a, qc, cfg.t);
            if f <= best {
                best = f;
                cur = cand;
                alg = a;
            }
        }
    }
    let sets: Vec<InducingSet> = (1..=cfg.t).flat_map(|k| enumerate_inducing_sets(k, &cfg.params)).collect();
    let mut pcfg = ProfileConfig::new(cfg.n_max, cfg.params);
    pcfg.max_candidates = cfg.max_candidates;
    let mut best = if guide_ok(&alg) { penalty(&alg, &sets, &pcfg)? } else { u64::MAX };
    for _ in 0..cfg.profile_steps {
        if best == 0 {
            break;
        }
        steps += 1;
        let Some(cand) = mutate(fam, &cur, &mut rng, 2) else { continue };
        let Some(a) = make(&cand) else { continue };
        if !guide_ok(&a) {
            continue;
        }
        let p = penalty(&a, &sets, &pcfg)?;
        if p <= best {
            best = p;
            cur = cand;
            alg = a;
        }
    }
    let id = fam.rule_to_id(&cur).expect("search stays inside the family");
    Ok(if best == 0 {
        SearchOutcome::Found { id, algorithm: alg, steps }
    } else {
        SearchOutcome::Exhausted {
            best_id: id,
            penalty: best,
            steps,
        }
    })
}
