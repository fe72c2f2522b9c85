use super::{ProfileError, TrappingSetProfile};
use crate::tanner::{canonical_form, embeds, TannerGraph};

/// Whether no superset of `corrupt0` induces a profile member in `g` (with a
/// member's inducing subset mapped onto `corrupt0`). A `true` answer
/// guarantees convergence; `false` does not imply failure.
///
/// Requires a complete and closed profile whose inducing set is the
/// subgraph induced by `corrupt0`.
pub fn check_sufficient_condition(
    g: &TannerGraph,
    corrupt0: &[usize],
    profile: &TrappingSetProfile,
) -> Result<bool, ProfileError> {
    if !profile.complete || !profile.closed {
        return Err(ProfileError::Incomplete);
    }
    let sub = g
        .induced_subgraph(corrupt0)
        .map_err(|e| ProfileError::Precondition(e.to_string()))?;
    if canonical_form(&sub) != profile.inducing.code {
        return Err(ProfileError::Precondition(
            "corrupt0 does not induce the profile's inducing set".into(),
        ));
    }
    let hit = profile.members.values().any(|s| {
        s.inducing_embeddings
            .iter()
            .any(|j| embeds(&s.graph, j, g, corrupt0, false))
    });
    Ok(!hit)
}

/// Drops members that do not occur as subgraphs of `code_graph`.
pub fn filter_profile_by_code(profile: &TrappingSetProfile, code_graph: &TannerGraph) -> TrappingSetProfile {
    let mut out = profile.clone();
    out.members.retain(|_, s| embeds(&s.graph, &[], code_graph, &[], false));
    out.emission.retain(|c| out.members.contains_key(c));
    out
}
