//! Trapping set profiles: inducing-set enumeration, recursive profile
//! construction, the minimality test, and the sufficient condition for
//! convergence that a complete profile provides.
//!
//! A profile member is a graph `S` together with the variable subsets `J`
//! (each inducing a copy of the inducing set `I`) on which decoding with `J`
//! initially corrupt fails, such that no proper induced subgraph of `S`
//! containing `J` also fails.

mod build;
mod checks;
mod format;
mod inducing;

pub use build::{build_profile, expand_candidates, is_trapping_set, joint_profile, ProfileConfig};
pub use checks::{check_sufficient_condition, filter_profile_by_code};
pub use format::{parse_inducing_sets, parse_profile, parse_profiles, write_inducing_sets, write_profile, write_profiles};
pub use inducing::enumerate_inducing_sets;
pub(crate) use inducing::attachment_sets;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tanner::{canonical_labeling, CanonicalCode, CodeEnsembleParams, TannerGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("profile is incomplete; the convergence guarantee needs a complete, closed profile")]
    Incomplete,
}

/// A candidate inducing set, kept in canonical labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducingSet {
    pub graph: TannerGraph,
    pub code: CanonicalCode,
}

impl InducingSet {
    pub fn new(graph: TannerGraph) -> Self {
        let lab = canonical_labeling(&graph, None);
        InducingSet {
            graph: lab.apply(&graph),
            code: lab.code,
        }
    }

    pub fn size(&self) -> usize {
        self.graph.num_variables()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrappingSet {
    /// Canonically labeled graph.
    pub graph: TannerGraph,
    /// Every sorted variable subset inducing a copy of `I` on which decoding
    /// fails.
    pub inducing_embeddings: Vec<Vec<usize>>,
    /// The subset the witness was recorded for.
    pub witness_set: Vec<usize>,
    /// Per variable, the iterations at which it was corrupt while decoding
    /// with `witness_set` initially corrupt (union over algorithms for
    /// decoder-level profiles).
    pub witness: Vec<Vec<usize>>,
}

impl TrappingSet {
    pub fn size(&self) -> usize {
        self.graph.num_variables()
    }

    /// Every variable is corrupt at some recorded iteration.
    pub fn witness_covers_all(&self) -> bool {
        self.witness.len() == self.graph.num_variables() && self.witness.iter().all(|h| !h.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrappingSetProfile {
    /// Algorithm id, or ids joined by `+` for a decoder-level profile.
    pub algorithm_id: String,
    pub inducing: InducingSet,
    pub n_max: usize,
    pub params: CodeEnsembleParams,
    pub members: BTreeMap<CanonicalCode, TrappingSet>,
    /// Enumeration ran to exhaustion (no budget or round cap cut it short).
    pub complete: bool,
    /// No reachable graph was cut off by `n_max`, so the member set would not
    /// grow with a larger bound.
    pub closed: bool,
    /// Member codes in the order they were decided.
    pub emission: Vec<CanonicalCode>,
}

impl TrappingSetProfile {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Smallest member size, `None` for an empty profile.
    pub fn n_min(&self) -> Option<usize> {
        self.members.values().map(|m| m.size()).min()
    }

    /// Member counts by variable count.
    pub fn size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for m in self.members.values() {
            *h.entry(m.size()).or_insert(0) += 1;
        }
        h
    }
}
