//! Maximal Lotteries: the row strategy of a Nash equilibrium of the
//! pairwise-majority game (payoff `s[i][j]` with a 1/2 diagonal).

use crate::election::{CandidateDistribution, DiagonalMode, ElectionInstance};
use crate::lp::{solve_zero_sum, GameSolution};

use super::RuleError;

pub fn maximal_lotteries(instance: &ElectionInstance) -> Result<CandidateDistribution, RuleError> {
    Ok(maximal_lotteries_game(instance)?.row_strategy)
}

/// Full equilibrium (both strategies plus the game value), for callers
/// that want the certificate.
pub fn maximal_lotteries_game(instance: &ElectionInstance) -> Result<GameSolution, RuleError> {
    let payoff = instance.margins(DiagonalMode::Half).rows().to_vec();
    Ok(solve_zero_sum(&payoff)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::testutil::{fig1, three_cycle};
    use num_traits::One;

    #[test]
    fn condorcet_winner_gets_point_mass() {
        // candidate 1 beats both others with margin 2/3
        let e = crate::election::ElectionInstance::parse("3 3\n1 1 0 2\n1 1 2 0\n1 0 1 2\n")
            .unwrap();
        let p = maximal_lotteries(&e).unwrap().probs_exact();
        assert!(p[1].is_one(), "{p:?}");
    }

    #[test]
    fn three_cycle_is_uniform() {
        let p = maximal_lotteries(&three_cycle()).unwrap().probs_exact();
        assert_eq!(p, vec![rat(1, 3), rat(1, 3), rat(1, 3)]);
    }

    #[test]
    fn constant_game_accepts_any_equilibrium() {
        let e = fig1();
        let game = maximal_lotteries_game(&e).unwrap();
        assert_eq!(game.exact_value, Some(rat(1, 2)));
        let payoff = e.margins(crate::election::DiagonalMode::Half).rows().to_vec();
        assert!(game.best_response_gain(&payoff) <= 1e-12);
    }

    #[test]
    fn game_value_is_half_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let e = crate::election::gen_random(rng.gen_range(2..=5), rng.gen_range(2..=6), rng.gen());
            let game = maximal_lotteries_game(&e).unwrap();
            assert_eq!(game.exact_value, Some(rat(1, 2)), "majority games are constant-sum");
        }
    }

    #[test]
    fn single_candidate_degenerates() {
        let e = crate::election::ElectionInstance::parse("1 1\n1 0\n").unwrap();
        let p = maximal_lotteries(&e).unwrap().probs_exact();
        assert_eq!(p, vec![rat_int(1)]);
    }
}
