//! Seeded instance corpora shared by the CLI, the acceptance suite, and
//! the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::election::{gen_balanced, gen_random, ElectionInstance};
use crate::rational::Rational;

/// Configuration of a random corpus; sizes are drawn uniformly from the
/// inclusive ranges, independently per trial.
#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub trials: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
}

impl CorpusConfig {
    /// The desk-scale corpus used throughout the verification suite.
    pub fn standard(trials: usize, seed: u64) -> Self {
        CorpusConfig { trials, m_min: 2, m_max: 5, n_min: 2, n_max: 6, seed }
    }
}

/// Deterministic corpus of random instances.
pub fn random_corpus(cfg: &CorpusConfig) -> Vec<ElectionInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.trials)
        .map(|_| {
            let m = rng.gen_range(cfg.m_min..=cfg.m_max);
            let n = rng.gen_range(cfg.n_min..=cfg.n_max);
            gen_random(m, n, rng.gen())
        })
        .collect()
}

/// Deterministic corpus of margin-balanced instances: every pairwise
/// margin within `eps` of 1/2.
pub fn balanced_corpus(
    trials: usize,
    candidate_choices: &[usize],
    voters: usize,
    eps: &Rational,
    seed: u64,
) -> Vec<ElectionInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let m = candidate_choices[rng.gen_range(0..candidate_choices.len())];
            gen_balanced(m, voters, eps, rng.gen())
        })
        .collect()
}
