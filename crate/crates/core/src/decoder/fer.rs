//! Monte Carlo frame error rate over the binary symmetric channel.
//!
//! Every trial draws from its own ChaCha8 stream keyed by (seed, crossover
//! index, trial), so results do not depend on worker count or scheduling.
//! Trials run in parallel chunks and are merged in trial order; the stop rule
//! is applied in that order too.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::Serialize;

use super::{FailureRecord, ParallelDecoder};
use crate::tanner::{nullspace_basis, TannerGraph};
use crate::tbf::Decoder;

const CHUNK: u64 = 2048;

/// Generator for one trial.
pub fn trial_rng(seed: u64, alpha_index: usize, trial: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(alpha_index as u64).to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    key[24..].copy_from_slice(b"bsc-fer\0");
    ChaCha8Rng::from_seed(key)
}

/// Sorted error positions for `n` uses of a BSC with crossover `alpha`,
/// drawn through geometric gaps between flips.
pub fn bsc_sample<R: Rng + ?Sized>(n: usize, alpha: f64, rng: &mut R) -> Vec<usize> {
    assert!((0.0..=1.0).contains(&alpha), "crossover probability {alpha} outside [0, 1]");
    if alpha == 0.0 || n == 0 {
        return Vec::new();
    }
    let gaps = Geometric::new(alpha).expect("alpha is in (0, 1]");
    let mut out = Vec::new();
    let mut pos = 0u64;
    loop {
        pos = pos.saturating_add(gaps.sample(rng));
        if pos >= n as u64 {
            return out;
        }
        out.push(pos as usize);
        pos += 1;
    }
}

/// Wilson score interval at 95%, `(0, 1)` with no trials.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    /// Stop a crossover point once this many frame errors are seen (0: never).
    pub min_frame_errors: u64,
    pub max_trials: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CodewordMode {
    /// All-zero codeword; enough for these decoders, which treat codewords
    /// symmetrically.
    #[default]
    AllZero,
    /// Uniform random codeword per trial, as a check of that symmetry.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FerConfig {
    pub alphas: Vec<f64>,
    pub stop: StopRule,
    pub seed: u64,
    pub codewords: CodewordMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FerPoint {
    pub alpha: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub fer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FerFailure {
    pub alpha_index: usize,
    pub alpha: f64,
    pub trial: u64,
    pub record: FailureRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FerReport {
    pub points: Vec<FerPoint>,
    pub failures: Vec<FerFailure>,
}

impl FerReport {
    pub const CSV_HEADER: &'static str = "alpha,trials,frame_errors,fer,ci_low,ci_high";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for p in &self.points {
            let _ = writeln!(s, "{},{},{},{},{},{}", p.alpha, p.trials, p.frame_errors, p.fer, p.ci_low, p.ci_high);
        }
        s
    }

    /// One line per wrong frame, positions one-based.
    pub fn failure_log(&self) -> String {
        let mut s = String::new();
        for f in &self.failures {
            let pos: Vec<String> = f.record.positions.iter().map(|p| (p + 1).to_string()).collect();
            let kind = if f.record.is_decoding_failure() { "failure" } else { "miscorrection" };
            let _ = writeln!(
                s,
                "{kind} alpha={} trial={} weight={} positions={} converged={} code={}",
                f.alpha,
                f.trial,
                f.record.positions.len(),
                pos.join(","),
                f.record.flags(),
                f.record.code
            );
        }
        s
    }
}

fn run_trial(
    g: &TannerGraph,
    d: &ParallelDecoder,
    basis: &[Vec<u8>],
    alpha: f64,
    rng: &mut ChaCha8Rng,
    dec: &mut Decoder,
) -> Option<FailureRecord> {
    let n = g.num_variables();
    // Error first, so both codeword modes see the same error patterns.
    let e = bsc_sample(n, alpha, rng);
    let mut x = vec![0u8; n];
    for b in basis {
        if rng.random::<bool>() {
            x.iter_mut().zip(b).for_each(|(xi, bi)| *xi ^= bi);
        }
    }
    let mut y = x.clone();
    for &p in &e {
        y[p] ^= 1;
    }
    let out = d.decode_received(g, &y, true, dec);
    if out.success() && out.final_bits == x {
        None
    } else {
        Some(FailureRecord::new(g, e, &out))
    }
}

/// Estimates the frame error rate of `d` on `g` at each crossover in `cfg`.
/// A frame is wrong when no algorithm converges or the output differs from
/// the transmitted codeword.
pub fn run_fer(g: &TannerGraph, d: &ParallelDecoder, cfg: &FerConfig) -> FerReport {
    let basis = match cfg.codewords {
        CodewordMode::AllZero => Vec::new(),
        CodewordMode::Random => nullspace_basis(g),
    };
    let mut points = Vec::with_capacity(cfg.alphas.len());
    let mut failures = Vec::new();
    for (ai, &alpha) in cfg.alphas.iter().enumerate() {
        let mut trials = 0u64;
        let mut errors = 0u64;
        let target = cfg.stop.min_frame_errors;
        'chunks: while trials < cfg.stop.max_trials && (target == 0 || errors < target) {
            let end = (trials + CHUNK).min(cfg.stop.max_trials);
            let results: Vec<Option<FailureRecord>> = (trials..end)
                .into_par_iter()
                .map_init(Decoder::new, |dec, t| {
                    run_trial(g, d, &basis, alpha, &mut trial_rng(cfg.seed, ai, t), dec)
                })
                .collect();
            for (t, r) in (trials..end).zip(results) {
                trials = t + 1;
                if let Some(record) = r {
                    errors += 1;
                    failures.push(FerFailure {
                        alpha_index: ai,
                        alpha,
                        trial: t,
                        record,
                    });
                    if target > 0 && errors >= target {
                        break 'chunks;
                    }
                }
            }
        }
        let (ci_low, ci_high) = wilson_interval(errors, trials);
        points.push(FerPoint {
            alpha,
            trials,
            frame_errors: errors,
            fer: if trials == 0 { 0.0 } else { errors as f64 / trials as f64 },
            ci_low,
            ci_high,
        });
    }
    FerReport { points, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bsc_edge_cases() {
        let mut rng = trial_rng(1, 0, 0);
        assert!(bsc_sample(100, 0.0, &mut rng).is_empty());
        assert_eq!(bsc_sample(10, 1.0, &mut rng), (0..10).collect::<Vec<_>>());
        let s = bsc_sample(1000, 0.3, &mut rng);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|&p| p < 1000));
    }

    #[test]
    fn bsc_half_is_roughly_half() {
        let mut rng = trial_rng(7, 3, 11);
        let n = 100_000;
        let k = bsc_sample(n, 0.5, &mut rng).len() as f64;
        let sd = (n as f64 * 0.25).sqrt();
        assert!((k - n as f64 / 2.0).abs() < 5.0 * sd, "{k}");
    }

    #[test]
    fn streams_are_independent_of_order() {
        let a: Vec<u64> = (0..5).map(|t| trial_rng(9, 1, t).random()).collect();
        let b: Vec<u64> = (0..5).rev().map(|t| trial_rng(9, 1, t).random()).collect();
        assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
        assert_ne!(trial_rng(9, 1, 0).random::<u64>(), trial_rng(9, 2, 0).random::<u64>());
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 100);
        assert!(lo.abs() < 1e-15);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5 && (0.5 - lo - (hi - 0.5)).abs() < 1e-12);
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
    }
}
