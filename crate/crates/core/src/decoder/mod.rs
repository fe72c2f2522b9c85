//! Parallel multi-algorithm decoding and its evaluation harness: BSC Monte
//! Carlo frame error rate estimation and exhaustive low-weight sweeps.

mod fer;
mod sweep;

pub use fer::{bsc_sample, run_fer, trial_rng, wilson_interval, CodewordMode, FerConfig, FerFailure, FerPoint, FerReport, StopRule};
pub use sweep::{exhaustive_weight_sweep, sweep_pattern_count, SweepError, SweepReport};

use thiserror::Error;

use crate::tanner::{canonical_form, CanonicalCode, TannerGraph};
use crate::tbf::{indicator, Decoder, TbfAlgorithm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecoderError {
    #[error("a parallel decoder needs at least one algorithm")]
    Empty,
    #[error("algorithms disagree on variable degree ({0} vs {1})")]
    MixedDegree(usize, usize),
}

/// Algorithms that all decode the same received word; the first one to
/// converge supplies the output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelDecoder {
    algorithms: Vec<TbfAlgorithm>,
}

impl ParallelDecoder {
    pub fn new(algorithms: Vec<TbfAlgorithm>) -> Result<Self, DecoderError> {
        let first = algorithms.first().ok_or(DecoderError::Empty)?.d_v();
        if let Some(a) = algorithms.iter().find(|a| a.d_v() != first) {
            return Err(DecoderError::MixedDegree(first, a.d_v()));
        }
        Ok(ParallelDecoder { algorithms })
    }

    pub fn algorithms(&self) -> &[TbfAlgorithm] {
        &self.algorithms
    }

    pub fn len(&self) -> usize {
        self.algorithms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algorithms.is_empty()
    }

    /// Sum of the per-algorithm iteration limits.
    pub fn total_iteration_budget(&self) -> usize {
        self.algorithms.iter().map(|a| a.max_iters()).sum()
    }

    /// Decodes `y`. With `short_circuit`, algorithms after the first
    /// converging one are skipped and reported as not run.
    pub fn decode_received(&self, g: &TannerGraph, y: &[u8], short_circuit: bool, dec: &mut Decoder) -> ParallelOutcome {
        let mut per_algorithm = Vec::with_capacity(self.algorithms.len());
        let mut winner = None;
        let mut final_bits = Vec::new();
        for (i, a) in self.algorithms.iter().enumerate() {
            if short_circuit && winner.is_some() {
                break;
            }
            let (converged, iterations) = dec.run(a, g, y);
            per_algorithm.push(AlgorithmRun { converged, iterations });
            if converged && winner.is_none() {
                winner = Some(i);
                final_bits = dec.bits();
            }
        }
        if winner.is_none() {
            final_bits = dec.bits();
        }
        ParallelOutcome {
            winner,
            final_bits,
            per_algorithm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgorithmRun {
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelOutcome {
    /// Index of the lowest-index converging algorithm.
    pub winner: Option<usize>,
    /// Output of the winner, or of the last algorithm run when none converged.
    pub final_bits: Vec<u8>,
    pub per_algorithm: Vec<AlgorithmRun>,
}

impl ParallelOutcome {
    pub fn success(&self) -> bool {
        self.winner.is_some()
    }
}

/// Runs every algorithm on the all-zero codeword with `corrupt0` flipped.
pub fn decode_parallel(d: &ParallelDecoder, g: &TannerGraph, corrupt0: &[usize]) -> ParallelOutcome {
    d.decode_received(g, &indicator(g.num_variables(), corrupt0), false, &mut Decoder::new())
}

/// A frame the decoder got wrong: either every algorithm failed to converge
/// or the output is a codeword other than the one sent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureRecord {
    /// Sorted error positions.
    pub positions: Vec<usize>,
    /// Per-algorithm convergence flags (all false for a decoding failure).
    pub converged: Vec<bool>,
    /// Canonical code of the subgraph induced by the error positions.
    pub code: CanonicalCode,
}

impl FailureRecord {
    pub(crate) fn new(g: &TannerGraph, mut positions: Vec<usize>, outcome: &ParallelOutcome) -> Self {
        positions.sort_unstable();
        let code = canonical_form(&g.induced_subgraph(&positions).expect("positions are in range"));
        FailureRecord {
            positions,
            converged: outcome.per_algorithm.iter().map(|r| r.converged).collect(),
            code,
        }
    }

    /// Every algorithm failed to converge (as opposed to a miscorrection).
    pub fn is_decoding_failure(&self) -> bool {
        self.converged.iter().all(|&c| !c)
    }

    pub fn flags(&self) -> String {
        self.converged.iter().map(|&c| if c { '1' } else { '0' }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbf::{ladder_rule, CheckState, FlipRule, VarState};

    fn stuck() -> TbfAlgorithm {
        TbfAlgorithm::unvalidated(FlipRule::from_fn(3, |w, _| w), 5, VarState::StrongZero, CheckState::PrevSat).unwrap()
    }

    #[test]
    fn lowest_index_success_wins() {
        let g = crate::tanner::tanner_155_64().graph;
        let good = TbfAlgorithm::with_defaults(ladder_rule(3, 2), 10).unwrap();
        let d = ParallelDecoder::new(vec![stuck(), stuck(), good.clone(), good]).unwrap();
        let out = decode_parallel(&d, &g, &[7]);
        assert_eq!(out.winner, Some(2));
        assert_eq!(out.per_algorithm.len(), 4);
        assert!(!out.per_algorithm[0].converged && !out.per_algorithm[1].converged);
        assert!(out.final_bits.iter().all(|&b| b == 0));
        let empty = decode_parallel(&d, &g, &[]);
        assert_eq!(empty.winner, Some(0));
        assert_eq!(empty.per_algorithm[0].iterations, 0);
        assert_eq!(d.total_iteration_budget(), 30);
    }

    #[test]
    fn empty_decoder_rejected() {
        assert_eq!(ParallelDecoder::new(vec![]), Err(DecoderError::Empty));
    }
}
