//! Two-bit bit flipping algorithms: state alphabets, rule tables, rule
//! families and the synchronous decode loop.

mod algorithm;
mod decode;
mod family;
mod rule;
mod states;
mod xi;

pub use algorithm::{parse_algorithms, write_algorithms, TbfAlgorithm};
pub use decode::{decode, decode_traced, indicator, DecodeOutcome, DecodeTrace, Decoder};
pub use family::{parse_constraints, rule_from_id, FamilyError, RuleConstraint, RuleFamily};
pub use rule::{ladder_rule, validate_rule, FlipRule, ValidationReport};
pub use states::{check_update, CheckState, VarState};
pub use xi::{enumerate_xi, xi_at, XiIndex, XiTuple};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("invalid rule: {} symmetry violation(s), irreducible = {}", .0.symmetry_violations.len(), .0.irreducible)]
    Invalid(ValidationReport),
    #[error("{0}")]
    Parameter(String),
}
