//! Random dictatorship on a directed maximal independent set.
//!
//! Two elimination passes over a fixed candidate order build an independent
//! set of the beta-majority digraph that reaches every vertex in at most
//! two steps; the rule then outputs a weight-random voter's favorite
//! survivor.

use num_traits::Zero;

use crate::election::{CandidateDistribution, DiagonalMode, ElectionInstance, PairwiseMatrix};
use crate::rational::Rational;

use super::{check_beta_open_interval, RuleError};

/// Survivors of the forward/backward elimination passes.
pub fn rddmis_survivors(
    margins: &PairwiseMatrix,
    beta: &Rational,
    order: &[usize],
) -> Vec<usize> {
    let m = margins.size();
    let mut eliminated = vec![false; m];
    for (pos, &a) in order.iter().enumerate() {
        if eliminated[a] {
            continue;
        }
        for &b in &order[pos + 1..] {
            if !eliminated[b] && margins.margin(a, b) >= beta {
                eliminated[b] = true;
            }
        }
    }
    for pos in (0..order.len()).rev() {
        let a = order[pos];
        if eliminated[a] {
            continue;
        }
        for &b in &order[..pos] {
            if !eliminated[b] && margins.margin(a, b) >= beta {
                eliminated[b] = true;
            }
        }
    }
    (0..m).filter(|&c| !eliminated[c]).collect()
}

pub fn rddmis(
    instance: &ElectionInstance,
    beta: &Rational,
    order: &[usize],
) -> Result<CandidateDistribution, RuleError> {
    check_beta_open_interval(beta)?;
    let m = instance.candidate_count();
    if order.len() != m {
        return Err(RuleError::Parameter("candidate order must cover all candidates".into()));
    }
    let mut seen = vec![false; m];
    for &c in order {
        if c >= m || seen[c] {
            return Err(RuleError::Parameter("candidate order is not a permutation".into()));
        }
        seen[c] = true;
    }
    let margins = instance.margins(DiagonalMode::Zero);
    let survivors = rddmis_survivors(margins, beta, order);
    let mut alive = vec![false; m];
    for &c in &survivors {
        alive[c] = true;
    }
    let mut p = vec![Rational::zero(); m];
    for block in instance.voters() {
        let favorite = block
            .ranking
            .iter()
            .copied()
            .find(|&c| alive[c])
            .expect("survivor set is non-empty");
        p[favorite] += &block.weight;
    }
    Ok(CandidateDistribution::exact(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::gen_random;
    use crate::rational::rat;
    use crate::rules::random_dictatorship;
    use crate::testutil::three_cycle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_cycle_two_pass_trace() {
        // forward: a eliminates b; backward: c eliminates a -> {c}
        let e = three_cycle();
        let order = [0, 1, 2];
        let survivors = rddmis_survivors(e.margins(DiagonalMode::Zero), &rat(3, 5), &order);
        assert_eq!(survivors, vec![2]);
        assert_eq!(
            rddmis(&e, &rat(3, 5), &order).unwrap(),
            CandidateDistribution::point_mass(3, 2)
        );
    }

    #[test]
    fn empty_digraph_keeps_everyone() {
        let e = three_cycle();
        // beta above every margin: no edges, survivors = all
        let beta = rat(9, 10);
        let order = [0, 1, 2];
        let survivors = rddmis_survivors(e.margins(DiagonalMode::Zero), &beta, &order);
        assert_eq!(survivors, vec![0, 1, 2]);
        assert_eq!(rddmis(&e, &beta, &order).unwrap(), random_dictatorship(&e));
    }

    #[test]
    fn survivors_are_independent_and_two_step_dominating() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let e = gen_random(rng.gen_range(2..=6), rng.gen_range(2..=6), rng.gen());
            let beta = rat(rng.gen_range(51..=99), 100);
            let m = e.candidate_count();
            let margins = e.margins(DiagonalMode::Zero);
            let order: Vec<usize> = (0..m).collect();
            let survivors = rddmis_survivors(margins, &beta, &order);
            assert!(!survivors.is_empty());
            let edge = |a: usize, b: usize| a != b && margins.margin(a, b) >= &beta;
            for &a in &survivors {
                for &b in &survivors {
                    assert!(!edge(a, b), "survivors {a}->{b} not independent");
                }
            }
            for v in 0..m {
                if survivors.contains(&v) {
                    continue;
                }
                let reachable = survivors.iter().any(|&u| {
                    edge(u, v) || (0..m).any(|w| edge(u, w) && edge(w, v))
                });
                assert!(reachable, "{v} not reachable in two steps");
            }
        }
    }

    #[test]
    fn order_validation() {
        let e = three_cycle();
        assert!(rddmis(&e, &rat(3, 5), &[0, 1]).is_err());
        assert!(rddmis(&e, &rat(3, 5), &[0, 0, 1]).is_err());
        assert!(rddmis(&e, &rat(1, 2), &[0, 1, 2]).is_err());
    }
}
