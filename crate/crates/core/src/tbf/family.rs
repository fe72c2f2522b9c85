//! Constrained rule families with a ranking bijection.
//!
//! A family is the set of symmetric, irreducible rules whose zero-side
//! entries satisfy a list of per-tuple constraints. Irreducibility only
//! depends on which of the six zero-side transitions appear somewhere in the
//! table, so the family can be counted and ranked exactly with a dynamic
//! program over (tuple position, transitions used so far).

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::rule::{mask_irreducible, transition_bit};
use super::{validate_rule, FlipRule, VarState, XiIndex, XiTuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("rule id {id} out of range (family has {size} rules)")]
    IdOutOfRange { id: u128, size: u128 },
    #[error("family size exceeds 2^128")]
    TooLarge,
    #[error("unknown family constraint {0:?}")]
    UnknownConstraint(String),
}

/// Local constraint on the pair `(f(0s, xi), f(0w, xi))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleConstraint {
    /// If a strong zero flips to a one, a weak zero flips too.
    Monotone,
    /// With every neighbour satisfied, a strong zero stays put and a weak
    /// zero does not flip.
    QuietWhenSatisfied,
    /// A strong zero only flips with a strict majority of unsatisfied
    /// neighbours; a weak zero needs at least one.
    MajorityToFlip,
    /// A strong zero never becomes a strong one in a single step.
    NoStrongJump,
    /// With every neighbour unsatisfied, a weak zero flips.
    FlipWhenAllUnsatisfied,
    /// Strength never decreases towards the current bit while most
    /// neighbours are unsatisfied: a weak zero does not become strong when
    /// the unsatisfied count is a strict majority.
    NoReassuranceUnderAlarm,
}

impl RuleConstraint {
    pub const ALL: [RuleConstraint; 6] = [
        RuleConstraint::Monotone,
        RuleConstraint::QuietWhenSatisfied,
        RuleConstraint::MajorityToFlip,
        RuleConstraint::NoStrongJump,
        RuleConstraint::FlipWhenAllUnsatisfied,
        RuleConstraint::NoReassuranceUnderAlarm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleConstraint::Monotone => "monotone",
            RuleConstraint::QuietWhenSatisfied => "quiet",
            RuleConstraint::MajorityToFlip => "majority",
            RuleConstraint::NoStrongJump => "no-jump",
            RuleConstraint::FlipWhenAllUnsatisfied => "alarm",
            RuleConstraint::NoReassuranceUnderAlarm => "no-reassure",
        }
    }

    pub fn allows(self, d_v: usize, xi: XiTuple, strong: VarState, weak: VarState) -> bool {
        let unsat = xi.unsatisfied();
        let one = |w: VarState| w.bit() == 1;
        match self {
            RuleConstraint::Monotone => !one(strong) || one(weak),
            RuleConstraint::QuietWhenSatisfied => unsat > 0 || (strong == VarState::StrongZero && !one(weak)),
            RuleConstraint::MajorityToFlip => (!one(strong) || 2 * unsat > d_v) && (!one(weak) || unsat >= 1),
            RuleConstraint::NoStrongJump => strong != VarState::StrongOne,
            RuleConstraint::FlipWhenAllUnsatisfied => unsat < d_v || one(weak),
            RuleConstraint::NoReassuranceUnderAlarm => 2 * unsat <= d_v || weak != VarState::StrongZero,
        }
    }
}

impl fmt::Display for RuleConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleConstraint {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| FamilyError::UnknownConstraint(s.to_string()))
    }
}

/// Parses a comma-separated constraint list; empty means unconstrained.
pub fn parse_constraints(text: &str) -> Result<Vec<RuleConstraint>, FamilyError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty() && *s != "none")
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone)]
pub struct RuleFamily {
    d_v: usize,
    constraints: Vec<RuleConstraint>,
    xi: XiIndex,
    /// Allowed (strong-zero, weak-zero) images per tuple, in lexicographic order.
    choices: Vec<Vec<(VarState, VarState, u8)>>,
    /// `counts[i][mask]`: completions of positions `i..` that make the final
    /// transition set irreducible, given transitions `mask` used so far.
    counts: Vec<[u128; 64]>,
}

impl RuleFamily {
    pub fn new(d_v: usize, constraints: &[RuleConstraint]) -> Result<Self, FamilyError> {
        let xi = XiIndex::new(d_v);
        let mut choices = Vec::with_capacity(xi.len());
        for &t in xi.tuples() {
            let mut here = Vec::new();
            for s in VarState::ALL {
                for w in VarState::ALL {
                    if constraints.iter().all(|c| c.allows(d_v, t, s, w)) {
                        let mask = transition_bit(VarState::StrongZero, s).map_or(0, |b| 1 << b)
                            | transition_bit(VarState::WeakZero, w).map_or(0, |b| 1 << b);
                        here.push((s, w, mask));
                    }
                }
            }
            choices.push(here);
        }
        let mut counts = vec![[0u128; 64]; xi.len() + 1];
        for mask in 0..64u8 {
            counts[xi.len()][mask as usize] = u128::from(mask_irreducible(mask));
        }
        for i in (0..xi.len()).rev() {
            for mask in 0..64usize {
                let mut total: u128 = 0;
                for &(_, _, m) in &choices[i] {
                    total = total
                        .checked_add(counts[i + 1][mask | m as usize])
                        .ok_or(FamilyError::TooLarge)?;
                }
                counts[i][mask] = total;
            }
        }
        let mut constraints = constraints.to_vec();
        constraints.sort_by_key(|c| RuleConstraint::ALL.iter().position(|x| x == c));
        constraints.dedup();
        Ok(RuleFamily {
            d_v,
            constraints,
            xi,
            choices,
            counts,
        })
    }

    pub fn d_v(&self) -> usize {
        self.d_v
    }

    pub fn constraints(&self) -> &[RuleConstraint] {
        &self.constraints
    }

    /// Canonical text form of the constraint list.
    pub fn label(&self) -> String {
        if self.constraints.is_empty() {
            return "none".into();
        }
        self.constraints.iter().map(|c| c.name()).collect::<Vec<_>>().join(",")
    }

    pub fn xi_index(&self) -> &XiIndex {
        &self.xi
    }

    /// Allowed `(f(0s, xi), f(0w, xi))` pairs at tuple position `i`.
    pub fn allowed_pairs(&self, i: usize) -> Vec<(VarState, VarState)> {
        self.choices[i].iter().map(|&(s, w, _)| (s, w)).collect()
    }

    pub fn size(&self) -> u128 {
        self.counts[0][0]
    }

    /// The `id`-th rule in lexicographic order of the interleaved table
    /// `f(0s, xi_1), f(0w, xi_1), f(0s, xi_2), ...`.
    pub fn rule_from_id(&self, mut id: u128) -> Result<FlipRule, FamilyError> {
        if id >= self.size() {
            return Err(FamilyError::IdOutOfRange { id, size: self.size() });
        }
        let mut mask = 0usize;
        let mut strong = Vec::with_capacity(self.xi.len());
        let mut weak = Vec::with_capacity(self.xi.len());
        for i in 0..self.xi.len() {
            let mut picked = false;
            for &(s, w, m) in &self.choices[i] {
                let c = self.counts[i + 1][mask | m as usize];
                if id < c {
                    strong.push(s);
                    weak.push(w);
                    mask |= m as usize;
                    picked = true;
                    break;
                }
                id -= c;
            }
            debug_assert!(picked, "ranking tables are consistent");
        }
        Ok(FlipRule::from_rows(self.d_v, &strong, &weak).expect("rows have family length"))
    }

    /// Inverse of [`rule_from_id`](Self::rule_from_id); `None` when the rule
    /// is not in the family.
    pub fn rule_to_id(&self, rule: &FlipRule) -> Option<u128> {
        if rule.d_v() != self.d_v || !validate_rule(rule).is_valid() {
            return None;
        }
        let mut id = 0u128;
        let mut mask = 0usize;
        for i in 0..self.xi.len() {
            let s = rule.apply_indexed(VarState::StrongZero, i);
            let w = rule.apply_indexed(VarState::WeakZero, i);
            let pos = self.choices[i].iter().position(|&(a, b, _)| a == s && b == w)?;
            for &(_, _, m) in &self.choices[i][..pos] {
                id += self.counts[i + 1][mask | m as usize];
            }
            mask |= self.choices[i][pos].2 as usize;
        }
        Some(id)
    }

    pub fn contains(&self, rule: &FlipRule) -> bool {
        self.rule_to_id(rule).is_some()
    }
}

/// `rule_from_id` over a family given by its constraint list.
pub fn rule_from_id(id: u128, d_v: usize, constraints: &[RuleConstraint]) -> Result<FlipRule, FamilyError> {
    RuleFamily::new(d_v, constraints)?.rule_from_id(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct count of valid rules for d_v = 1 (4 tuples, 16^4 tables).
    fn brute_force_count(d_v: usize, constraints: &[RuleConstraint]) -> u128 {
        let xi = XiIndex::new(d_v);
        let n = xi.len();
        let mut total = 0;
        for code in 0..16u64.pow(n as u32) {
            let mut strong = Vec::new();
            let mut weak = Vec::new();
            let mut c = code;
            for _ in 0..n {
                strong.push(VarState::from_index((c % 4) as u8));
                weak.push(VarState::from_index((c / 4 % 4) as u8));
                c /= 16;
            }
            let ok = xi.tuples().iter().enumerate().all(|(i, &t)| {
                constraints.iter().all(|k| k.allows(d_v, t, strong[i], weak[i]))
            });
            if ok && validate_rule(&FlipRule::from_rows(d_v, &strong, &weak).unwrap()).is_valid() {
                total += 1;
            }
        }
        total
    }

    #[test]
    fn counts_match_brute_force() {
        for cs in [vec![], vec![RuleConstraint::Monotone], vec![RuleConstraint::Monotone, RuleConstraint::QuietWhenSatisfied]] {
            let fam = RuleFamily::new(1, &cs).unwrap();
            assert_eq!(fam.size(), brute_force_count(1, &cs), "{cs:?}");
        }
    }

    #[test]
    fn first_rule_and_bijection() {
        let fam = RuleFamily::new(1, &[]).unwrap();
        let first = fam.rule_from_id(0).unwrap();
        assert_eq!(fam.rule_to_id(&first), Some(0));
        for id in 0..fam.size() {
            let r = fam.rule_from_id(id).unwrap();
            assert!(validate_rule(&r).is_valid());
            assert_eq!(fam.rule_to_id(&r), Some(id));
        }
        assert!(matches!(fam.rule_from_id(fam.size()), Err(FamilyError::IdOutOfRange { .. })));
    }

    #[test]
    fn unconstrained_bound() {
        let fam = RuleFamily::new(3, &[]).unwrap();
        // Symmetry alone gives 16^20 = 2^80 tables; irreducibility removes some.
        assert!(fam.size() < 1u128 << 80);
        assert!(fam.size() > 1u128 << 79);
        assert!(matches!(RuleFamily::new(4, &[]), Err(FamilyError::TooLarge)));
    }

    #[test]
    fn constraint_parsing() {
        let cs = parse_constraints("monotone, quiet").unwrap();
        assert_eq!(cs, vec![RuleConstraint::Monotone, RuleConstraint::QuietWhenSatisfied]);
        assert!(parse_constraints("none").unwrap().is_empty());
        assert!(parse_constraints("bogus").is_err());
    }
}
