//! Voting rules under metric preferences, with an exact LP-based
//! worst-case-distortion oracle.
//!
//! The crate has three layers:
//!
//! * election bookkeeping in exact rational arithmetic
//!   ([`election`], [`metrics`]),
//! * the rules themselves ([`rules`], [`mixtures`]) — dictatorships,
//!   veto rules, Maximal Lotteries, consensus builders, uncovered-set
//!   dictatorships, and their mixtures,
//! * evaluation ([`distortion`], [`lp`]) — per-instance worst-case
//!   distortion as a linear program over consistent metrics, plus an
//!   adversarial search over biased metrics that lower-bounds it.
//!
//! Corpus sweeps and the per-reference-candidate LPs are data-parallel via
//! rayon (default `parallel` feature); disabling the feature yields a fully
//! sequential build with identical results.

pub mod corpus;
pub mod distortion;
pub mod election;
pub mod exec;
pub mod lp;
pub mod metrics;
pub mod mixtures;
pub mod rational;
pub mod rules;

pub use election::{
    gen_balanced, gen_radius_lb, gen_random, gen_rcb_lb, CandidateDistribution, DiagonalMode,
    ElectionInstance, PairwiseMatrix, VoterBlock,
};
pub use metrics::{BiasedVector, MetricSpace, StepFunction};
pub use rules::RuleSpec;

#[cfg(test)]
pub(crate) mod testutil {
    use rand::Rng;

    use crate::election::{CandidateDistribution, ElectionInstance};
    use crate::metrics::BiasedVector;
    use crate::rational::{rat, rat_int, Rational};
    use num_traits::Zero;

    /// Two candidates, two disagreeing voters.
    pub fn fig1() -> ElectionInstance {
        ElectionInstance::parse("2 2\n1 0 1\n1 1 0\n").unwrap()
    }

    /// a≻b≻c, b≻c≻a, c≻a≻b.
    pub fn three_cycle() -> ElectionInstance {
        ElectionInstance::parse("3 3\n1 0 1 2\n1 1 2 0\n1 2 0 1\n").unwrap()
    }

    /// Random nonnegative offsets with a random reference candidate;
    /// denominators kept small so identities stay cheap to verify.
    pub fn rand_biased(e: &ElectionInstance, rng: &mut impl Rng) -> BiasedVector {
        let m = e.candidate_count();
        let i_star = rng.gen_range(0..m);
        let x = (0..m)
            .map(|c| if c == i_star { Rational::zero() } else { rat(rng.gen_range(0..=16), 4) })
            .collect();
        BiasedVector::new(x, i_star).unwrap()
    }

    /// Random exact distribution with denominator 24.
    pub fn rand_rational_dist(m: usize, rng: &mut impl Rng) -> CandidateDistribution {
        let mut cuts: Vec<i64> = (0..m - 1).map(|_| rng.gen_range(0..=24)).collect();
        cuts.push(0);
        cuts.push(24);
        cuts.sort_unstable();
        let p = cuts.windows(2).map(|w| rat(w[1] - w[0], 24)).collect();
        CandidateDistribution::exact(p)
    }

    /// n-1 voters rank 0≻1, one voter ranks 1≻0.
    pub fn disagreeing_pair(n: usize) -> ElectionInstance {
        let mut voters = vec![(rat_int(1), vec![0usize, 1]); n - 1];
        voters.push((rat_int(1), vec![1, 0]));
        ElectionInstance::new(2, voters).unwrap()
    }
}
