use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{validate_rule, CheckState, FlipRule, RuleError, VarState};
use crate::tanner::{significant_lines, ParseError};

/// A complete decoder instance: rule, iteration limit and the two
/// initialization maps. `delta_v` and `delta_c` hold the images of 0; the
/// images of 1 are their mirrors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TbfAlgorithm {
    rule: FlipRule,
    max_iters: usize,
    delta_v: VarState,
    delta_c: CheckState,
}

impl TbfAlgorithm {
    pub fn new(rule: FlipRule, max_iters: usize, delta_v: VarState, delta_c: CheckState) -> Result<Self, RuleError> {
        let report = validate_rule(&rule);
        if !report.is_valid() {
            return Err(RuleError::Invalid(report));
        }
        Self::unvalidated(rule, max_iters, delta_v, delta_c)
    }

    /// Like [`new`](Self::new) but accepts rules that fail validation, for
    /// test oracles and diagnostics. Parameter checks still apply.
    pub fn unvalidated(rule: FlipRule, max_iters: usize, delta_v: VarState, delta_c: CheckState) -> Result<Self, RuleError> {
        if max_iters == 0 {
            return Err(RuleError::Parameter("lmax must be at least 1".into()));
        }
        if delta_v.bit() != 0 {
            return Err(RuleError::Parameter(format!("delta_v must be 0s or 0w, got {delta_v}")));
        }
        if !delta_c.satisfied() {
            return Err(RuleError::Parameter(format!("delta_c must be 0p or 0n, got {delta_c}")));
        }
        Ok(TbfAlgorithm {
            rule,
            max_iters,
            delta_v,
            delta_c,
        })
    }

    /// `(0s, 1s)` and `(0p, 1p)` initialization.
    pub fn with_defaults(rule: FlipRule, max_iters: usize) -> Result<Self, RuleError> {
        Self::new(rule, max_iters, VarState::StrongZero, CheckState::PrevSat)
    }

    pub fn rule(&self) -> &FlipRule {
        &self.rule
    }

    pub fn max_iters(&self) -> usize {
        self.max_iters
    }

    pub fn d_v(&self) -> usize {
        self.rule.d_v()
    }

    /// Initial variable state for received bit `y`.
    #[inline]
    pub fn delta_v(&self, y: u8) -> VarState {
        if y & 1 == 0 {
            self.delta_v
        } else {
            self.delta_v.complement()
        }
    }

    /// Initial check state for syndrome bit `s`.
    #[inline]
    pub fn delta_c(&self, s: u8) -> CheckState {
        if s & 1 == 0 {
            self.delta_c
        } else {
            CheckState::ALL[self.delta_c.index() + 2]
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "lmax={}", self.max_iters);
        let _ = writeln!(s, "delta_v={}", self.delta_v);
        let _ = writeln!(s, "delta_c={}", self.delta_c);
        s.push_str(&self.rule.to_text());
        s
    }

    /// Short stable identifier: the first 16 hex digits of the SHA-256 of
    /// [`to_text`](Self::to_text).
    pub fn id(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        hex::encode(&digest[..8])
    }

    fn parse_block<'a>(first: (usize, &'a str), lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<Self, ParseError> {
        let field = |name: &str, line: (usize, &'a str)| -> Result<(usize, &'a str), ParseError> {
            let (l, text) = line;
            let value = text
                .strip_prefix(name)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| ParseError::new(l, format!("expected `{name}=...`, got {text:?}")))?;
            Ok((l, value.trim()))
        };
        let (l, lmax) = field("lmax", first)?;
        let max_iters: usize = lmax
            .parse()
            .map_err(|_| ParseError::new(l, format!("bad lmax {lmax:?}")))?;
        let mut next = |what: &str, last: usize| {
            lines
                .next()
                .ok_or_else(|| ParseError::new(last + 1, format!("unexpected end of input: missing {what}")))
        };
        let (l, dv) = field("delta_v", next("delta_v line", l)?)?;
        let delta_v: VarState = dv.parse().map_err(|e| ParseError::new(l, e))?;
        let (l, dc) = field("delta_c", next("delta_c line", l)?)?;
        let delta_c: CheckState = dc.parse().map_err(|e| ParseError::new(l, e))?;
        let rule_head = next("rule", l)?;
        let rule = FlipRule::parse_lines(rule_head, lines)?;
        TbfAlgorithm::new(rule, max_iters, delta_v, delta_c).map_err(|e| ParseError::new(first.0, e.to_string()))
    }

    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let mut algs = parse_algorithms(text)?;
        match algs.len() {
            1 => Ok(algs.pop().expect("one algorithm")),
            k => Err(ParseError::new(1, format!("expected exactly one algorithm, found {k}"))),
        }
    }
}

/// Parses a file of one or more algorithm blocks (a parallel decoder).
pub fn parse_algorithms(text: &str) -> Result<Vec<TbfAlgorithm>, ParseError> {
    let mut lines = significant_lines(text);
    let mut out = Vec::new();
    while let Some(first) = lines.next() {
        out.push(TbfAlgorithm::parse_block(first, &mut lines)?);
    }
    Ok(out)
}

pub fn write_algorithms(algs: &[TbfAlgorithm]) -> String {
    let mut s = String::new();
    for (i, a) in algs.iter().enumerate() {
        let _ = writeln!(s, "# algorithm {} id {}", i + 1, a.id());
        s.push_str(&a.to_text());
    }
    s
}
