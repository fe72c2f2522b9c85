use std::fmt::Write as _;

use super::{VarState, XiIndex, XiTuple};
use crate::tanner::ParseError;

/// Variable node update `f`: a total table over (state, tuple).
///
/// Entries are stored for all four states. Rules built with
/// [`FlipRule::symmetric`] derive the one-side rows from the zero-side rows;
/// [`FlipRule::from_fn`] accepts arbitrary tables so that invalid rules can
/// be represented and reported by [`validate_rule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipRule {
    xi: XiIndex,
    table: Vec<VarState>,
}

/// Outcome of [`validate_rule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    /// Entries `(w, xi)` with `f(complement(w), xi) != complement(f(w, xi))`,
    /// listed once per pair with `w` on the zero side.
    pub symmetry_violations: Vec<(VarState, XiTuple)>,
    pub irreducible: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.symmetry_violations.is_empty() && self.irreducible
    }
}

impl FlipRule {
    pub fn from_fn(d_v: usize, mut f: impl FnMut(VarState, XiTuple) -> VarState) -> Self {
        let xi = XiIndex::new(d_v);
        let mut table = Vec::with_capacity(4 * xi.len());
        for &t in xi.tuples() {
            for w in VarState::ALL {
                table.push(f(w, t));
            }
        }
        FlipRule { xi, table }
    }

    /// Rule given by its strong-zero and weak-zero rows, mirrored by symmetry.
    pub fn symmetric(d_v: usize, mut zero_side: impl FnMut(VarState, XiTuple) -> VarState) -> Self {
        Self::from_fn(d_v, |w, t| {
            if w.bit() == 0 {
                zero_side(w, t)
            } else {
                zero_side(w.complement(), t).complement()
            }
        })
    }

    /// Rule from explicit rows (in tuple order) for strong zero and weak zero.
    pub fn from_rows(d_v: usize, strong_zero: &[VarState], weak_zero: &[VarState]) -> Result<Self, String> {
        let n = XiIndex::new(d_v).len();
        if strong_zero.len() != n || weak_zero.len() != n {
            return Err(format!(
                "rows must have {n} entries for d_v = {d_v}, got {} and {}",
                strong_zero.len(),
                weak_zero.len()
            ));
        }
        let xi = XiIndex::new(d_v);
        Ok(Self::symmetric(d_v, |w, t| {
            let i = xi.index(t).expect("tuple in range");
            match w {
                VarState::StrongZero => strong_zero[i],
                _ => weak_zero[i],
            }
        }))
    }

    pub fn d_v(&self) -> usize {
        self.xi.d_v()
    }

    pub fn xi_index(&self) -> &XiIndex {
        &self.xi
    }

    #[inline]
    pub fn apply_indexed(&self, w: VarState, xi_idx: usize) -> VarState {
        self.table[xi_idx * 4 + w.index()]
    }

    pub fn apply(&self, w: VarState, xi: XiTuple) -> VarState {
        let i = self.xi.index(xi).expect("tuple degree matches rule");
        self.apply_indexed(w, i)
    }

    /// Row for state `w` in tuple order.
    pub fn row(&self, w: VarState) -> Vec<VarState> {
        (0..self.xi.len()).map(|i| self.apply_indexed(w, i)).collect()
    }

    /// Text form: `dv=<k>`, then the strong-zero row and the weak-zero row.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dv={}", self.d_v());
        for w in [VarState::StrongZero, VarState::WeakZero] {
            let row: Vec<&str> = self.row(w).iter().map(|x| x.symbol()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    /// Parses the three rule lines starting at the `dv=` line.
    pub(crate) fn parse_lines<'a>(
        first: (usize, &'a str),
        lines: &mut impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<Self, ParseError> {
        let (l, head) = first;
        let d_v: usize = head
            .strip_prefix("dv=")
            .and_then(|x| x.trim().parse().ok())
            .filter(|&d| (1..=16).contains(&d))
            .ok_or_else(|| ParseError::new(l, format!("expected `dv=<k>` with 1 <= k <= 16, got {head:?}")))?;
        let n = XiIndex::new(d_v).len();
        let mut rows = Vec::new();
        let mut last = l;
        for name in ["strong-zero", "weak-zero"] {
            let (l, text) = lines
                .next()
                .ok_or_else(|| ParseError::new(last + 1, format!("unexpected end of input: missing {name} row")))?;
            last = l;
            let row = text
                .split_whitespace()
                .map(|t| t.parse::<VarState>().map_err(|e| ParseError::new(l, e)))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != n {
                return Err(ParseError::new(l, format!("{name} row needs {n} entries, got {}", row.len())));
            }
            rows.push(row);
        }
        FlipRule::from_rows(d_v, &rows[0], &rows[1]).map_err(|e| ParseError::new(last, e))
    }

    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let mut lines = crate::tanner::significant_lines(text);
        let first = lines
            .next()
            .ok_or_else(|| ParseError::new(1, "unexpected end of input: missing `dv=` line"))?;
        let rule = Self::parse_lines(first, &mut lines)?;
        if let Some((l, _)) = lines.next() {
            return Err(ParseError::new(l, "trailing content after rule"));
        }
        Ok(rule)
    }
}

/// Index of the 6 non-loop transitions leaving a zero-side state, used as
/// bit positions by the family machinery.
pub(crate) fn transition_bit(from: VarState, to: VarState) -> Option<u8> {
    use VarState::*;
    match (from, to) {
        (StrongZero, WeakZero) => Some(0),
        (StrongZero, WeakOne) => Some(1),
        (StrongZero, StrongOne) => Some(2),
        (WeakZero, StrongZero) => Some(3),
        (WeakZero, WeakOne) => Some(4),
        (WeakZero, StrongOne) => Some(5),
        _ => None,
    }
}

/// Whether the state digraph generated by the zero-side transitions in
/// `mask` (and their mirrors) is strongly connected.
pub(crate) fn mask_irreducible(mask: u8) -> bool {
    let mut adj = [[false; 4]; 4];
    for from in [VarState::StrongZero, VarState::WeakZero] {
        for to in VarState::ALL {
            if let Some(b) = transition_bit(from, to) {
                if mask >> b & 1 == 1 {
                    adj[from.index()][to.index()] = true;
                    adj[from.complement().index()][to.complement().index()] = true;
                }
            }
        }
    }
    strongly_connected(&adj)
}

fn strongly_connected(adj: &[[bool; 4]; 4]) -> bool {
    let reach = |forward: bool| {
        let mut seen = [false; 4];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for y in 0..4 {
                let e = if forward { adj[x][y] } else { adj[y][x] };
                if e && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    reach(true) && reach(false)
}

/// Checks symmetry and irreducibility of `rule`.
pub fn validate_rule(rule: &FlipRule) -> ValidationReport {
    let mut symmetry_violations = Vec::new();
    let mut adj = [[false; 4]; 4];
    for (i, &t) in rule.xi.tuples().iter().enumerate() {
        for w in VarState::ALL {
            let to = rule.apply_indexed(w, i);
            if to != w {
                adj[w.index()][to.index()] = true;
            }
            if w.bit() == 0 && rule.apply_indexed(w.complement(), i) != to.complement() {
                symmetry_violations.push((w, t));
            }
        }
    }
    ValidationReport {
        symmetry_violations,
        irreducible: strongly_connected(&adj),
    }
}

/// Strength-ladder rule: with at least `threshold` unsatisfied neighbours a
/// node climbs one step towards the opposite bit (0s -> 0w -> 1w), otherwise
/// it steps back towards strong (0w -> 0s).
pub fn ladder_rule(d_v: usize, threshold: usize) -> FlipRule {
    FlipRule::symmetric(d_v, |w, t| {
        let up = t.unsatisfied() >= threshold;
        match (w, up) {
            (VarState::StrongZero, true) => VarState::WeakZero,
            (VarState::StrongZero, false) => VarState::StrongZero,
            (_, true) => VarState::WeakOne,
            (_, false) => VarState::StrongZero,
        }
    })
}
