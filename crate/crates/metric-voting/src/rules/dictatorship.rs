//! Random Dictatorship and Smart Dictatorship.

use num_traits::One;

use crate::election::{CandidateDistribution, ElectionInstance};
use crate::rational::Rational;

/// Chooses candidate `i` with probability `plu(i)`.
pub fn random_dictatorship(instance: &ElectionInstance) -> CandidateDistribution {
    instance.plurality()
}

/// Chooses candidate `i` with probability proportional to
/// `plu(i) / (1 - plu(i))`. A candidate ranked first by everyone gets the
/// whole mass.
pub fn smart_dictatorship(instance: &ElectionInstance) -> CandidateDistribution {
    let plu = match instance.plurality() {
        CandidateDistribution::Exact(p) => p,
        CandidateDistribution::Approx(_) => unreachable!("plurality is exact"),
    };
    if let Some(unanimous) = plu.iter().position(|p| p.is_one()) {
        return CandidateDistribution::point_mass(plu.len(), unanimous);
    }
    let one = Rational::one();
    let weights: Vec<Rational> = plu.iter().map(|p| p / (&one - p)).collect();
    let total: Rational = weights.iter().sum();
    CandidateDistribution::exact(weights.into_iter().map(|w| w / &total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::gen_radius_lb;
    use crate::rational::{rat, rat_int};
    use crate::testutil::fig1;
    use num_traits::One;

    #[test]
    fn rd_on_disagreeing_pair_is_uniform() {
        assert_eq!(
            random_dictatorship(&fig1()),
            CandidateDistribution::exact(vec![rat(1, 2), rat(1, 2)])
        );
    }

    #[test]
    fn rd_point_mass_on_unanimous_instance() {
        let e = crate::election::ElectionInstance::parse("3 2\n1 1 0 2\n2 1 2 0\n").unwrap();
        assert_eq!(random_dictatorship(&e), CandidateDistribution::point_mass(3, 1));
    }

    #[test]
    fn rd_on_adversarial_family_reads_off_blocks() {
        let beta = rat(7, 10);
        let e = gen_radius_lb(&beta, 5).unwrap();
        let p = random_dictatorship(&e).probs_exact();
        assert_eq!(p[0], rat(3, 10), "the best candidate gets the 1-beta block");
        assert_eq!(p[1], rat_int(0));
        for j in 2..7 {
            assert_eq!(p[j], rat(7, 50), "beta/|U| per member");
        }
    }

    #[test]
    fn smart_rd_is_symmetric_on_fig1() {
        assert_eq!(
            smart_dictatorship(&fig1()),
            CandidateDistribution::exact(vec![rat(1, 2), rat(1, 2)])
        );
    }

    #[test]
    fn smart_rd_reweights_plurality() {
        // plu = (2/3, 1/3, 0) -> proportional to (2, 1/2, 0) -> (4/5, 1/5, 0)
        let e = crate::election::ElectionInstance::parse("3 3\n1 0 1 2\n1 0 2 1\n1 1 2 0\n")
            .unwrap();
        assert_eq!(
            smart_dictatorship(&e),
            CandidateDistribution::exact(vec![rat(4, 5), rat(1, 5), rat_int(0)])
        );
    }

    #[test]
    fn smart_rd_guards_unanimous_top() {
        let e = crate::election::ElectionInstance::parse("2 2\n1 0 1\n1 0 1\n").unwrap();
        let p = smart_dictatorship(&e).probs_exact();
        assert!(p[0].is_one());
    }
}
