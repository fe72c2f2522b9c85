use std::fmt;

use super::CheckState;
use crate::tanner::TannerGraph;

/// Counts of neighbouring checks in states 0p, 0n, 1p, 1n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XiTuple(pub [u8; 4]);

impl XiTuple {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    /// Number of unsatisfied neighbours (previously or newly).
    pub fn unsatisfied(&self) -> usize {
        self.0[2] as usize + self.0[3] as usize
    }
}

impl fmt::Display for XiTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// All 4-tuples of non-negative integers summing to `d_v`, in lexicographic
/// order.
pub fn enumerate_xi(d_v: usize) -> Vec<XiTuple> {
    let d = d_v as u8;
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            for c in 0..=d - a - b {
                out.push(XiTuple([a, b, c, d - a - b - c]));
            }
        }
    }
    out
}

/// Constant-time map from a tuple to its position in [`enumerate_xi`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiIndex {
    d_v: usize,
    tuples: Vec<XiTuple>,
    lookup: Vec<u16>,
}

impl XiIndex {
    pub fn new(d_v: usize) -> Self {
        let tuples = enumerate_xi(d_v);
        let side = d_v + 1;
        let mut lookup = vec![u16::MAX; side * side * side];
        for (i, t) in tuples.iter().enumerate() {
            let [a, b, c, _] = t.0;
            lookup[(a as usize * side + b as usize) * side + c as usize] = i as u16;
        }
        XiIndex { d_v, tuples, lookup }
    }

    pub fn d_v(&self) -> usize {
        self.d_v
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[XiTuple] {
        &self.tuples
    }

    #[inline]
    pub fn index_of_counts(&self, a: usize, b: usize, c: usize) -> usize {
        let side = self.d_v + 1;
        self.lookup[(a * side + b) * side + c] as usize
    }

    pub fn index(&self, xi: XiTuple) -> Option<usize> {
        if xi.degree() != self.d_v {
            return None;
        }
        let [a, b, c, _] = xi.0;
        Some(self.index_of_counts(a as usize, b as usize, c as usize))
    }
}

/// Tuple seen by variable `v` given the current check states.
pub fn xi_at(v: usize, check_states: &[CheckState], g: &TannerGraph) -> XiTuple {
    let mut t = [0u8; 4];
    for &c in g.checks_of(v) {
        t[check_states[c].index()] += 1;
    }
    XiTuple(t)
}
