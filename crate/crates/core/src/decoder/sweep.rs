//! Exhaustive decoding of every error pattern of one weight.
//!
//! For a quasi-cyclic code the simultaneous cyclic shift inside every block
//! is an automorphism, so one pattern per shift orbit suffices. The orbit
//! representative is the lexicographically smallest sorted pattern; its first
//! element always sits at offset 0 of its block, which is how the enumeration
//! below avoids touching other patterns.

use rayon::prelude::*;
use thiserror::Error;

use super::{FailureRecord, ParallelDecoder};
use crate::tanner::{QcCode, TannerGraph};
use crate::tbf::{indicator, Decoder};

const CHUNK: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("{patterns} patterns to decode exceeds the budget of {budget}")]
    Budget { patterns: u128, budget: u128 },
    #[error("{0}")]
    Shift(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub weight: usize,
    /// Patterns actually decoded (orbit representatives when reduced).
    pub decoded: u128,
    /// Patterns covered, counting every orbit member.
    pub covered: u128,
    pub orbit_reduced: bool,
    /// Wrong frames, one per decoded pattern.
    pub failures: Vec<FailureRecord>,
    /// Wrong patterns counting every orbit member.
    pub failing_patterns: u128,
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of patterns the sweep would decode: `C(n, weight)`, or the number
/// of shift orbits (by Burnside's lemma) for circulant size `p` on `n = blocks * p`.
pub fn sweep_pattern_count(n: usize, weight: usize, p: Option<usize>) -> u128 {
    match p {
        None | Some(0) | Some(1) => binomial(n as u128, weight as u128),
        Some(p) => {
            let blocks = n / p;
            let mut fixed: u128 = 0;
            for k in 0..p {
                let g = gcd(k, p);
                let cycle = p / g;
                if weight.is_multiple_of(cycle) {
                    fixed += binomial((blocks * g) as u128, (weight / cycle) as u128);
                }
            }
            fixed / p as u128
        }
    }
}

fn shifted(qc: &QcCode, pattern: &[usize], k: usize) -> Vec<usize> {
    let mut s: Vec<usize> = pattern.iter().map(|&v| qc.shift_var(v, k)).collect();
    s.sort_unstable();
    s
}

fn is_representative(qc: &QcCode, pattern: &[usize]) -> bool {
    let p = qc.circulant;
    let block = pattern[0] / p;
    pattern
        .iter()
        .take_while(|&&v| v / p == block)
        .skip(1)
        .all(|&u| shifted(qc, pattern, p - u % p).as_slice() >= pattern)
}

fn orbit_size(qc: &QcCode, pattern: &[usize]) -> u128 {
    let p = qc.circulant;
    (1..p)
        .find(|&k| p.is_multiple_of(k) && shifted(qc, pattern, k) == pattern)
        .unwrap_or(p) as u128
}

/// Advances `c` (sorted, values below `n`) to the next combination.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lazily produces the patterns to decode.
struct Patterns<'a> {
    n: usize,
    weight: usize,
    qc: Option<&'a QcCode>,
    current: Option<Vec<usize>>,
}

impl<'a> Patterns<'a> {
    fn new(n: usize, weight: usize, qc: Option<&'a QcCode>) -> Self {
        let current = (weight <= n).then(|| (0..weight).collect());
        Patterns { n, weight, qc, current }
    }

    /// Advances, skipping to the next block-aligned first element in orbit mode.
    fn advance(&mut self) {
        let Some(c) = self.current.as_mut() else { return };
        let head = c.first().copied();
        if !next_combination(c, self.n) {
            self.current = None;
            return;
        }
        if let (Some(qc), Some(h)) = (self.qc, head) {
            if c[0] != h {
                let next = (h / qc.circulant + 1) * qc.circulant;
                if next + self.weight > self.n {
                    self.current = None;
                } else {
                    for (i, x) in c.iter_mut().enumerate() {
                        *x = next + i;
                    }
                }
            }
        }
    }
}

impl Iterator for Patterns<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let c = self.current.clone()?;
            self.advance();
            match self.qc {
                Some(qc) if !c.is_empty() && !is_representative(qc, &c) => continue,
                _ => return Some(c),
            }
        }
    }
}

/// Decodes every weight-`weight` error pattern on the all-zero codeword with
/// all algorithms of `d`. With `shift`, only one pattern per cyclic-shift
/// orbit is decoded; `shift` must describe `g`. Refuses when the number of
/// patterns exceeds `budget`.
pub fn exhaustive_weight_sweep(
    g: &TannerGraph,
    d: &ParallelDecoder,
    weight: usize,
    shift: Option<&QcCode>,
    budget: u128,
) -> Result<SweepReport, SweepError> {
    let n = g.num_variables();
    if let Some(qc) = shift {
        if qc.graph != *g {
            return Err(SweepError::Shift("the quasi-cyclic description does not match the graph".into()));
        }
    }
    let p = shift.map(|q| q.circulant);
    let patterns = sweep_pattern_count(n, weight, p);
    if patterns > budget {
        return Err(SweepError::Budget { patterns, budget });
    }
    let mut report = SweepReport {
        weight,
        decoded: 0,
        covered: 0,
        orbit_reduced: shift.is_some(),
        failures: Vec::new(),
        failing_patterns: 0,
    };
    let mut source = Patterns::new(n, weight, shift);
    loop {
        let chunk: Vec<Vec<usize>> = source.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let results: Vec<(u128, Option<FailureRecord>)> = chunk
            .into_par_iter()
            .map_init(Decoder::new, |dec, e| {
                let size = if weight == 0 { 1 } else { shift.map_or(1, |qc| orbit_size(qc, &e)) };
                let out = d.decode_received(g, &indicator(n, &e), false, dec);
                let ok = out.success() && out.final_bits.iter().all(|&b| b == 0);
                (size, (!ok).then(|| FailureRecord::new(g, e, &out)))
            })
            .collect();
        for (size, r) in results {
            report.decoded += 1;
            report.covered += size;
            if let Some(r) = r {
                report.failing_patterns += size;
                report.failures.push(r);
            }
        }
    }
    Ok(report)
}
