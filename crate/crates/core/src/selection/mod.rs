//! Ranking single algorithms by their trapping set profiles and picking
//! collections that complement each other in a parallel decoder.
//!
//! An algorithm is judged by its worst inducing set: the smallest trapping
//! set it can be trapped by. Small trapping sets are the likeliest to occur in
//! a code, so a larger minimum is better; ties fall to how many inducing sets
//! attain that minimum, then to the check-node counts of the smallest
//! members (a member with more checks has fewer cycles and is likelier to be
//! present in a random graph), then to the member count, then to the id.

mod search;

pub use search::{search_corrector, CorrectorSearch, SearchOutcome};

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::profiles::{
    build_profile, enumerate_inducing_sets, filter_profile_by_code, InducingSet, ProfileConfig, ProfileError,
    TrappingSetProfile,
};
use crate::tanner::{CodeEnsembleParams, TannerGraph};
use crate::tbf::TbfAlgorithm;

pub use crate::profiles::joint_profile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("the exponent polynomial is not divisible by 3 at d_v = {0}")]
    NonIntegral(usize),
    #[error("exponent overflows at d_v = {0}")]
    Overflow(usize),
    #[error("d_v must be at least 1")]
    ZeroDegree,
    #[error("requested {requested} algorithms from a pool of {available}")]
    PoolTooSmall { requested: usize, available: usize },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Base-2 logarithm of the bound on the number of TBF algorithms with
/// variable degree `d_v`: `(2 d^3 + 12 d^2 + 22 d + 15) / 3`.
pub fn upper_bound_exponent(d_v: usize) -> Result<u64, SelectionError> {
    if d_v == 0 {
        return Err(SelectionError::ZeroDegree);
    }
    let d = d_v as u64;
    let poly = (|| {
        let d2 = d.checked_mul(d)?;
        let d3 = d2.checked_mul(d)?;
        2u64.checked_mul(d3)?
            .checked_add(12u64.checked_mul(d2)?)?
            .checked_add(22u64.checked_mul(d)?)?
            .checked_add(15)
    })()
    .ok_or(SelectionError::Overflow(d_v))?;
    if poly % 3 != 0 {
        return Err(SelectionError::NonIntegral(d_v));
    }
    Ok(poly / 3)
}

/// Smallest member size of one profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum NMin {
    Finite(usize),
    /// Empty up to `n_max`, but the enumeration was cut short; the true value
    /// is at least this.
    AtLeast(usize),
    /// Empty, complete and closed.
    Infinite,
}

impl NMin {
    fn rank(self) -> u64 {
        match self {
            NMin::Finite(n) => 2 * n as u64,
            NMin::AtLeast(n) => 2 * n as u64 + 1,
            NMin::Infinite => u64::MAX,
        }
    }

    pub fn of(profile: &TrappingSetProfile) -> NMin {
        match profile.n_min() {
            Some(n) => NMin::Finite(n),
            None if profile.complete && profile.closed => NMin::Infinite,
            None => NMin::AtLeast(profile.n_max + 1),
        }
    }
}

impl PartialOrd for NMin {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NMin {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl std::fmt::Display for NMin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NMin::Finite(n) => write!(f, "{n}"),
            NMin::AtLeast(n) => write!(f, ">={n}"),
            NMin::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetScore {
    /// Canonical code of the inducing set, hex.
    pub inducing: String,
    pub inducing_size: usize,
    pub n_min: NMin,
    pub members: usize,
    /// `(size, count)` pairs.
    pub size_histogram: Vec<(usize, usize)>,
    /// Largest check count among the smallest members (0 when empty).
    pub min_member_checks: usize,
    /// Check counts summed over all members.
    pub check_sum: usize,
    pub complete: bool,
    pub closed: bool,
}

impl SetScore {
    pub fn of(profile: &TrappingSetProfile) -> SetScore {
        let n_min = NMin::of(profile);
        let smallest = profile.n_min();
        let min_member_checks = profile
            .members
            .values()
            .filter(|m| Some(m.size()) == smallest)
            .map(|m| m.graph.num_checks())
            .max()
            .unwrap_or(0);
        SetScore {
            inducing: profile.inducing.code.to_string(),
            inducing_size: profile.inducing.size(),
            n_min,
            members: profile.len(),
            size_histogram: profile.size_histogram().into_iter().collect(),
            min_member_checks,
            check_sum: profile.members.values().map(|m| m.graph.num_checks()).sum(),
            complete: profile.complete,
            closed: profile.closed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgorithmScore {
    pub algorithm_id: String,
    pub sets: Vec<SetScore>,
    /// Some profile hit a budget or round cap.
    pub partial: bool,
}

impl AlgorithmScore {
    pub fn from_profiles(algorithm_id: String, profiles: &[TrappingSetProfile]) -> AlgorithmScore {
        AlgorithmScore {
            algorithm_id,
            sets: profiles.iter().map(SetScore::of).collect(),
            partial: profiles.iter().any(|p| !p.complete),
        }
    }

    /// Minimum over inducing sets of `n_min`; `Infinite` with no sets.
    pub fn worst_n_min(&self) -> NMin {
        self.sets.iter().map(|s| s.n_min).min().unwrap_or(NMin::Infinite)
    }

    pub fn total_members(&self) -> usize {
        self.sets.iter().map(|s| s.members).sum()
    }

    fn tie_stats(&self) -> (usize, usize) {
        let w = self.worst_n_min();
        let at_worst: Vec<&SetScore> = self.sets.iter().filter(|s| s.n_min == w).collect();
        let checks = at_worst.iter().map(|s| s.min_member_checks).max().unwrap_or(0);
        (at_worst.len(), checks)
    }

    /// Quality order: `Less` means `self` is the better algorithm.
    pub fn compare(&self, other: &AlgorithmScore) -> Ordering {
        let (na, ca) = self.tie_stats();
        let (nb, cb) = other.tie_stats();
        other
            .worst_n_min()
            .cmp(&self.worst_n_min())
            .then(na.cmp(&nb))
            .then(ca.cmp(&cb))
            .then(self.total_members().cmp(&other.total_members()))
            .then_with(|| self.algorithm_id.cmp(&other.algorithm_id))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algorithm {} worst_n_min {} members {}{}", self.algorithm_id, self.worst_n_min(), self.total_members(), if self.partial { " partial" } else { "" });
        for set in &self.sets {
            let hist: Vec<String> = set.size_histogram.iter().map(|(k, c)| format!("{k}:{c}")).collect();
            let _ = writeln!(
                s,
                "  inducing {} k={} n_min={} members={} hist=[{}] checks={} complete={} closed={}",
                set.inducing,
                set.inducing_size,
                set.n_min,
                set.members,
                hist.join(" "),
                set.min_member_checks,
                set.complete,
                set.closed
            );
        }
        s
    }
}

/// Builds the profile of `alg` for every inducing set and summarises them.
pub fn score_algorithm(
    alg: &TbfAlgorithm,
    inducing: &[InducingSet],
    cfg: &ProfileConfig,
) -> Result<AlgorithmScore, ProfileError> {
    let profiles = inducing
        .iter()
        .map(|i| build_profile(alg, i, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlgorithmScore::from_profiles(alg.id(), &profiles))
}

/// Scores many algorithms in parallel, returned in input order.
pub fn score_all(
    algs: &[TbfAlgorithm],
    inducing: &[InducingSet],
    cfg: &ProfileConfig,
) -> Result<Vec<AlgorithmScore>, ProfileError> {
    algs.par_iter().map(|a| score_algorithm(a, inducing, cfg)).collect()
}

/// Answer of [`corrects_all_weight`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Correction {
    /// Every profile is empty, complete and closed.
    Corrects,
    /// Some profile has a member: a concrete failing graph exists.
    Fails { inducing: String, n_min: usize },
    /// All profiles are empty but some enumeration was cut short, so larger
    /// trapping sets are not ruled out.
    Indeterminate { open_sets: usize },
}

impl Correction {
    pub fn is_corrects(&self) -> bool {
        matches!(self, Correction::Corrects)
    }
}

/// Whether `alg` corrects every weight-`t` error pattern on every graph of
/// the ensemble described by `params`.
pub fn corrects_all_weight(
    alg: &TbfAlgorithm,
    t: usize,
    params: &CodeEnsembleParams,
    n_max: usize,
) -> Result<Correction, ProfileError> {
    if t == 0 {
        return Ok(Correction::Corrects);
    }
    let cfg = ProfileConfig::new(n_max.max(t), *params);
    let mut open_sets = 0;
    for i in enumerate_inducing_sets(t, params) {
        let p = build_profile(alg, &i, &cfg)?;
        if let Some(n) = p.n_min() {
            return Ok(Correction::Fails {
                inducing: i.code.to_string(),
                n_min: n,
            });
        }
        if !(p.complete && p.closed) {
            open_sets += 1;
        }
    }
    Ok(if open_sets == 0 { Correction::Corrects } else { Correction::Indeterminate { open_sets } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionMode {
    /// Start from the best single score, then repeatedly add the algorithm
    /// whose joint profile with those already chosen is best.
    #[default]
    GreedyJointProfile,
}

/// Joint profile statistics of one collection over all inducing sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JointScore {
    pub worst_n_min: NMin,
    pub members: usize,
    pub check_sum: usize,
    pub sets: Vec<SetScore>,
    /// Hex codes of jointly uncorrected trapping sets, per inducing set.
    pub uncorrected: Vec<Vec<String>>,
}

impl JointScore {
    fn of(profiles: &[TrappingSetProfile]) -> JointScore {
        let sets: Vec<SetScore> = profiles.iter().map(SetScore::of).collect();
        JointScore {
            worst_n_min: sets.iter().map(|s| s.n_min).min().unwrap_or(NMin::Infinite),
            members: sets.iter().map(|s| s.members).sum(),
            check_sum: sets.iter().map(|s| s.check_sum).sum(),
            uncorrected: profiles.iter().map(|p| p.emission.iter().map(|c| c.to_string()).collect()).collect(),
            sets,
        }
    }

    /// `Less` means `self` is the better collection.
    pub fn compare(&self, other: &JointScore) -> Ordering {
        other
            .worst_n_min
            .cmp(&self.worst_n_min)
            .then(self.members.cmp(&other.members))
            .then(self.check_sum.cmp(&other.check_sum))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionRound {
    pub added: String,
    pub joint: JointScore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionResult {
    /// Chosen ids in selection order.
    pub ids: Vec<String>,
    /// Indices into the candidate slice, same order.
    pub indices: Vec<usize>,
    pub rounds: Vec<SelectionRound>,
}

impl SelectionResult {
    pub fn final_joint(&self) -> Option<&JointScore> {
        self.rounds.last().map(|r| &r.joint)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("selection results serialise")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, r) in self.rounds.iter().enumerate() {
            let _ = writeln!(
                s,
                "round {} add {} joint_worst_n_min {} joint_members {} joint_checks {}",
                i + 1,
                r.added,
                r.joint.worst_n_min,
                r.joint.members,
                r.joint.check_sum
            );
        }
        if let Some(j) = self.final_joint() {
            for (set, unc) in j.sets.iter().zip(&j.uncorrected) {
                let _ = writeln!(s, "uncorrected inducing {} k={} n_min={} members={}", set.inducing, set.inducing_size, set.n_min, set.members);
                for c in unc {
                    let _ = writeln!(s, "  {c}");
                }
            }
        }
        s
    }
}

/// Settings shared by the selection rounds.
#[derive(Debug, Clone)]
pub struct SelectionConfig<'a> {
    pub inducing: Vec<InducingSet>,
    pub profile: ProfileConfig,
    pub mode: SelectionMode,
    /// When set, joint profiles only count trapping sets present in this code.
    pub code: Option<&'a TannerGraph>,
}

/// Joint statistics of `algs` under `cfg`.
pub fn joint_score(algs: &[TbfAlgorithm], cfg: &SelectionConfig<'_>) -> Result<JointScore, ProfileError> {
    let profiles = cfg
        .inducing
        .iter()
        .map(|i| {
            let p = joint_profile(algs, i, &cfg.profile)?;
            Ok(match cfg.code {
                Some(code) => filter_profile_by_code(&p, code),
                None => p,
            })
        })
        .collect::<Result<Vec<_>, ProfileError>>()?;
    Ok(JointScore::of(&profiles))
}

/// Picks `p` algorithms from `candidates` (each with its score). The result
/// does not depend on candidate order; duplicate ids are considered once.
pub fn select_parallel(
    candidates: &[(TbfAlgorithm, AlgorithmScore)],
    p: usize,
    cfg: &SelectionConfig<'_>,
) -> Result<SelectionResult, SelectionError> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| candidates[a].1.compare(&candidates[b].1).then(a.cmp(&b)));
    order.dedup_by(|a, b| candidates[*a].1.algorithm_id == candidates[*b].1.algorithm_id);
    if p > order.len() {
        return Err(SelectionError::PoolTooSmall {
            requested: p,
            available: order.len(),
        });
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(p);
    let mut rounds = Vec::with_capacity(p);
    while chosen.len() < p {
        let pool: Vec<usize> = order.iter().copied().filter(|i| !chosen.contains(i)).collect();
        let pool = if chosen.is_empty() { vec![pool[0]] } else { pool };
        let scored = pool
            .par_iter()
            .map(|&i| {
                let algs: Vec<TbfAlgorithm> = chosen.iter().chain([&i]).map(|&j| candidates[j].0.clone()).collect();
                joint_score(&algs, cfg).map(|s| (i, s))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let (best, joint) = scored
            .into_iter()
            .min_by(|(a, sa), (b, sb)| {
                sa.compare(sb)
                    .then_with(|| candidates[*a].1.algorithm_id.cmp(&candidates[*b].1.algorithm_id))
            })
            .expect("pool is non-empty");
        chosen.push(best);
        rounds.push(SelectionRound {
            added: candidates[best].1.algorithm_id.clone(),
            joint,
        });
    }
    Ok(SelectionResult {
        ids: chosen.iter().map(|&i| candidates[i].1.algorithm_id.clone()).collect(),
        indices: chosen,
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbf::{CheckState, FlipRule, VarState};

    #[test]
    fn exponent_bound() {
        assert_eq!(upper_bound_exponent(3).unwrap(), 81);
        assert_eq!(upper_bound_exponent(4).unwrap(), 141);
        assert_eq!(upper_bound_exponent(0), Err(SelectionError::ZeroDegree));
        for d in 1..=20u64 {
            let c = (d + 3) * (d + 2) * (d + 1) / 6;
            assert_eq!(upper_bound_exponent(d as usize).unwrap(), 4 * c + 1);
        }
        assert!(upper_bound_exponent(usize::MAX).is_err());
    }

    #[test]
    fn nmin_order() {
        assert!(NMin::Finite(5) < NMin::AtLeast(5));
        assert!(NMin::AtLeast(5) < NMin::Finite(6));
        assert!(NMin::AtLeast(100) < NMin::Infinite);
    }

    #[test]
    fn base_case_and_weight_zero() {
        let p = CodeEnsembleParams::tanner_like();
        // Never changes state, so every error stays.
        let lazy = TbfAlgorithm::unvalidated(FlipRule::from_fn(3, |w, _| w), 5, VarState::StrongZero, CheckState::PrevSat).unwrap();
        let sets = enumerate_inducing_sets(1, &p);
        let s = score_algorithm(&lazy, &sets, &ProfileConfig::new(3, p)).unwrap();
        assert_eq!(s.worst_n_min(), NMin::Finite(1));
        assert_eq!(corrects_all_weight(&lazy, 0, &p, 3).unwrap(), Correction::Corrects);
    }
}
