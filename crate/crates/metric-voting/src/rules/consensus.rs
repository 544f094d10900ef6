//! The consensus-builder rule.
//!
//! For each voter the deterministic builder loop walks the voter's ranking
//! from the bottom up. The candidate under consideration eliminates every
//! still-standing candidate the voter prefers over it that it beats with
//! margin at least `beta`; if the voter prefers nobody who survived, the
//! candidate under consideration is chosen. The rule output is the
//! weight-mixture of the per-voter choices.

use num_traits::Zero;

use crate::election::{CandidateDistribution, DiagonalMode, ElectionInstance, PairwiseMatrix};
use crate::rational::Rational;

use super::{check_beta_open_interval, RuleError};

pub fn rcb(instance: &ElectionInstance, beta: &Rational) -> Result<CandidateDistribution, RuleError> {
    check_beta_open_interval(beta)?;
    let margins = instance.margins(DiagonalMode::Zero);
    let mut p = vec![Rational::zero(); instance.candidate_count()];
    for (v, block) in instance.voters().iter().enumerate() {
        let choice = builder_choice(instance, margins, v, beta);
        p[choice] += &block.weight;
    }
    Ok(CandidateDistribution::exact(p))
}

/// The candidate chosen when block `v` is the consensus builder.
pub(crate) fn builder_choice(
    instance: &ElectionInstance,
    margins: &PairwiseMatrix,
    v: usize,
    beta: &Rational,
) -> usize {
    let ranking = &instance.voters()[v].ranking;
    let m = ranking.len();
    let mut eliminated = vec![false; m];
    let mut cur = m - 1;
    loop {
        let i = ranking[cur];
        for &j in &ranking[..cur] {
            if !eliminated[j] && margins.margin(i, j) >= beta {
                eliminated[j] = true;
            }
        }
        match (0..cur).rev().find(|&p| !eliminated[ranking[p]]) {
            Some(next) => cur = next,
            None => return i,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::gen_random;
    use crate::rational::{rat, rat_int};
    use crate::rules::{random_dictatorship, weighted_uncovered_set};
    use crate::testutil::three_cycle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_cycle_builders() {
        // builder 0 (a≻b≻c): c eliminates a, then b survives -> b; etc.
        let e = three_cycle();
        let p = rcb(&e, &rat(3, 5)).unwrap().probs_exact();
        assert_eq!(p, vec![rat(1, 3), rat(1, 3), rat(1, 3)]);
        let margins = e.margins(DiagonalMode::Zero);
        assert_eq!(builder_choice(&e, margins, 0, &rat(3, 5)), 1);
        assert_eq!(builder_choice(&e, margins, 1, &rat(3, 5)), 2);
        assert_eq!(builder_choice(&e, margins, 2, &rat(3, 5)), 0);
    }

    #[test]
    fn high_beta_degenerates_to_random_dictatorship() {
        // all margins < 0.99, so nothing is ever eliminated
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 10 {
            let e = gen_random(rng.gen_range(2..=4), rng.gen_range(4..=6), rng.gen());
            let margins = e.margins(DiagonalMode::Zero);
            let m = e.candidate_count();
            let max_margin = (0..m)
                .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| margins.margin(i, j).clone())
                .max()
                .unwrap();
            if max_margin >= rat(99, 100) {
                continue;
            }
            assert_eq!(rcb(&e, &rat(99, 100)).unwrap(), random_dictatorship(&e));
            checked += 1;
        }
    }

    #[test]
    fn choices_stay_in_the_uncovered_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let e = gen_random(rng.gen_range(2..=5), rng.gen_range(2..=6), rng.gen());
            let beta = rat(rng.gen_range(51..=99), 100);
            let u = weighted_uncovered_set(&e, &beta).unwrap();
            let p = rcb(&e, &beta).unwrap();
            for c in p.support() {
                assert!(u.contains(&c), "builder chose {c} outside {u:?}");
            }
        }
    }

    #[test]
    fn rejects_beta_outside_open_interval() {
        let e = three_cycle();
        assert!(rcb(&e, &rat(1, 2)).is_err());
        assert!(rcb(&e, &rat_int(1)).is_err());
    }
}
