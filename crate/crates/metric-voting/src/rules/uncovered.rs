//! The weighted uncovered set and random dictatorship restricted to it.
//!
//! `a` covers `b` at level `beta` when `s[a][b] >= beta` and every
//! candidate that beta-beats `a` also beta-beats `b`. The covering
//! relation is transitive and acyclic, so the uncovered set is non-empty
//! and every covered candidate is covered by an uncovered one.

use num_traits::Zero;

use crate::election::{CandidateDistribution, DiagonalMode, ElectionInstance};
use crate::rational::Rational;

use super::{check_beta_half_closed, check_beta_open_interval, RuleError};

/// All pairs `(a, b)` such that `a` covers `b`. Accepts `beta` in
/// `[1/2, 1)`; at exactly 1/2 this is the classical uncovered set.
pub fn covering_relation(
    instance: &ElectionInstance,
    beta: &Rational,
) -> Result<Vec<(usize, usize)>, RuleError> {
    check_beta_half_closed(beta)?;
    let margins = instance.margins(DiagonalMode::Zero);
    let m = instance.candidate_count();
    let beats = |a: usize, b: usize| margins.margin(a, b) >= beta;
    let mut pairs = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if a == b || !beats(a, b) {
                continue;
            }
            if (0..m).filter(|&c| c != a && beats(c, a)).all(|c| beats(c, b)) {
                pairs.push((a, b));
            }
        }
    }
    debug_assert!(is_acyclic(m, &pairs), "covering relation must be acyclic");
    Ok(pairs)
}

fn is_acyclic(m: usize, pairs: &[(usize, usize)]) -> bool {
    let mut indegree = vec![0usize; m];
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in pairs {
        adj[a].push(b);
        indegree[b] += 1;
    }
    let mut queue: Vec<usize> = (0..m).filter(|&c| indegree[c] == 0).collect();
    let mut seen = 0;
    while let Some(c) = queue.pop() {
        seen += 1;
        for &b in &adj[c] {
            indegree[b] -= 1;
            if indegree[b] == 0 {
                queue.push(b);
            }
        }
    }
    seen == m
}

/// Candidates covered by no other candidate.
pub fn weighted_uncovered_set(
    instance: &ElectionInstance,
    beta: &Rational,
) -> Result<Vec<usize>, RuleError> {
    let pairs = covering_relation(instance, beta)?;
    let m = instance.candidate_count();
    let mut covered = vec![false; m];
    for (_, b) in pairs {
        covered[b] = true;
    }
    Ok((0..m).filter(|&c| !covered[c]).collect())
}

/// Chooses a voter by weight and outputs their favorite candidate in the
/// weighted uncovered set.
pub fn radius(instance: &ElectionInstance, beta: &Rational) -> Result<CandidateDistribution, RuleError> {
    check_beta_open_interval(beta)?;
    let u = weighted_uncovered_set(instance, beta)?;
    assert!(!u.is_empty(), "the uncovered set is never empty");
    let mut in_u = vec![false; instance.candidate_count()];
    for &c in &u {
        in_u[c] = true;
    }
    let mut p = vec![Rational::zero(); instance.candidate_count()];
    for block in instance.voters() {
        let favorite = block
            .ranking
            .iter()
            .copied()
            .find(|&c| in_u[c])
            .expect("uncovered set is non-empty");
        p[favorite] += &block.weight;
    }
    Ok(CandidateDistribution::exact(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{gen_radius_lb, gen_random};
    use crate::rational::{rat, rat_int};
    use crate::testutil::three_cycle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn adversarial_family_uncovers_u_and_rival() {
        let beta = rat(7, 10);
        let e = gen_radius_lb(&beta, 5).unwrap();
        let u = weighted_uncovered_set(&e, &beta).unwrap();
        assert_eq!(u, vec![1, 2, 3, 4, 5, 6], "everything but the best candidate");
    }

    #[test]
    fn three_cycle_is_fully_uncovered() {
        let e = three_cycle();
        let u = weighted_uncovered_set(&e, &rat(3, 5)).unwrap();
        assert_eq!(u, vec![0, 1, 2]);
        assert_eq!(
            radius(&e, &rat(3, 5)).unwrap().probs_exact(),
            vec![rat(1, 3), rat(1, 3), rat(1, 3)]
        );
    }

    #[test]
    fn strict_condorcet_winner_covers_everyone() {
        let e = crate::election::ElectionInstance::parse("3 3\n1 1 0 2\n1 1 2 0\n1 1 0 2\n")
            .unwrap();
        let u = weighted_uncovered_set(&e, &rat(3, 5)).unwrap();
        assert_eq!(u, vec![1]);
        assert_eq!(radius(&e, &rat(3, 5)).unwrap(), CandidateDistribution::point_mass(3, 1));
    }

    #[test]
    fn radius_on_adversarial_family_avoids_best_and_rival() {
        let beta = rat(7, 10);
        let e = gen_radius_lb(&beta, 5).unwrap();
        let p = radius(&e, &beta).unwrap().probs_exact();
        assert!(p[0].is_zero() && p[1].is_zero());
        for j in 2..7 {
            assert_eq!(p[j], rat(1, 5));
        }
    }

    #[test]
    fn covering_is_transitive_and_acyclic_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let e = gen_random(rng.gen_range(2..=5), rng.gen_range(2..=6), rng.gen());
            let beta = rat(rng.gen_range(50..=99), 100);
            let pairs = covering_relation(&e, &beta).unwrap();
            let covers = |a: usize, b: usize| pairs.contains(&(a, b));
            let m = e.candidate_count();
            for a in 0..m {
                assert!(!covers(a, a));
                for b in 0..m {
                    for c in 0..m {
                        if covers(a, b) && covers(b, c) {
                            assert!(covers(a, c), "transitivity {a}->{b}->{c}");
                        }
                    }
                }
            }
            // every covered candidate is covered by an uncovered one
            let u = weighted_uncovered_set(&e, &beta).unwrap();
            for b in 0..m {
                if !u.contains(&b) {
                    assert!(u.iter().any(|&a| covers(a, b)), "{b} lacks an uncovered coverer");
                }
            }
        }
    }

    #[test]
    fn beta_range_validation() {
        let e = three_cycle();
        assert!(weighted_uncovered_set(&e, &rat(1, 2)).is_ok(), "closed at 1/2");
        assert!(weighted_uncovered_set(&e, &rat(49, 100)).is_err());
        assert!(radius(&e, &rat(1, 2)).is_err(), "the rule itself needs beta > 1/2");
        assert!(radius(&e, &rat_int(1)).is_err());
    }
}
