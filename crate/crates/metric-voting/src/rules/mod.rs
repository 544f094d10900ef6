//! The voting rules: dictatorships, veto rules, Maximal Lotteries,
//! the consensus builder, uncovered-set dictatorships, and the two-pass
//! independent-set rule. Every rule returns its exact output distribution
//! over candidates; nothing is sampled.

mod consensus;
mod dictatorship;
mod independent;
mod matching;
mod ml;
mod uncovered;
mod veto;

pub use consensus::rcb;
pub use dictatorship::{random_dictatorship, smart_dictatorship};
pub use independent::{rddmis, rddmis_survivors};
pub use matching::{
    domination_graph_member, hopcroft_karp, matching_uncovered_member, matching_uncovered_set,
};
pub use ml::{maximal_lotteries, maximal_lotteries_game};
pub use uncovered::{covering_relation, radius, weighted_uncovered_set};
pub use veto::{k_round_plurality_veto, plurality_veto, unit_expansion};

use crate::election::{CandidateDistribution, ElectionInstance};
use crate::lp::LpError;
use crate::mixtures;
use crate::rational::{parse_rational, rat_to_f64, Rational};

#[derive(Debug, thiserror::Error)]
pub enum RuleError {
    #[error("invalid rule parameter: {0}")]
    Parameter(String),
    #[error("cannot parse rule spec `{spec}`: {message}")]
    Spec { spec: String, message: String },
    #[error("unit expansion needs {0} virtual voters, over the 10^6 cap")]
    ExpansionTooLarge(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

pub(crate) fn check_beta_open_interval(beta: &Rational) -> Result<(), RuleError> {
    let half = Rational::new(1.into(), 2.into());
    if *beta <= half || *beta >= num_traits::One::one() {
        return Err(RuleError::Parameter(format!(
            "beta = {} must lie strictly inside (1/2, 1)",
            crate::rational::format_rational(beta)
        )));
    }
    Ok(())
}

pub(crate) fn check_beta_half_closed(beta: &Rational) -> Result<(), RuleError> {
    let half = Rational::new(1.into(), 2.into());
    if *beta < half || *beta >= num_traits::One::one() {
        return Err(RuleError::Parameter(format!(
            "beta = {} must lie in [1/2, 1)",
            crate::rational::format_rational(beta)
        )));
    }
    Ok(())
}

/// A parsed rule specification, one per CLI rule string.
///
/// Grammar: `ml | rd | smart_rd | pv | kpv:k=<int> | rcb:beta=<rat|float>
/// | radius:beta=<rat|float> | rddmis:beta=<rat|float> | mix_rcb
/// | mix_radius:B=<float>`.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleSpec {
    RandomDictatorship,
    SmartDictatorship,
    PluralityVeto,
    KRoundPluralityVeto { k: usize },
    MaximalLotteries,
    Rcb { beta: Rational },
    Radius { beta: Rational },
    Rddmis { beta: Rational },
    MixMlRcb,
    MixMlRadius { b: f64 },
}

impl RuleSpec {
    pub fn parse(spec: &str) -> Result<Self, RuleError> {
        let err = |message: &str| RuleError::Spec { spec: spec.to_string(), message: message.into() };
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let param = |key: &str| -> Result<Rational, RuleError> {
            let arg = arg.ok_or_else(|| err(&format!("expected `{key}=<value>`")))?;
            let (k, v) = arg.split_once('=').ok_or_else(|| err("expected `key=value`"))?;
            if k != key {
                return Err(err(&format!("unknown parameter `{k}`, expected `{key}`")));
            }
            parse_rational(v).map_err(|e| err(&e.to_string()))
        };
        let rule = match head {
            "ml" => RuleSpec::MaximalLotteries,
            "rd" => RuleSpec::RandomDictatorship,
            "smart_rd" => RuleSpec::SmartDictatorship,
            "pv" => RuleSpec::PluralityVeto,
            "kpv" => {
                let k = param("k")?;
                if !k.is_integer() || k < num_traits::Zero::zero() {
                    return Err(err("k must be a nonnegative integer"));
                }
                let k: usize = k
                    .to_integer()
                    .try_into()
                    .map_err(|_| err("k out of range"))?;
                RuleSpec::KRoundPluralityVeto { k }
            }
            "rcb" => {
                let beta = param("beta")?;
                check_beta_open_interval(&beta)?;
                RuleSpec::Rcb { beta }
            }
            "radius" => {
                let beta = param("beta")?;
                check_beta_open_interval(&beta)?;
                RuleSpec::Radius { beta }
            }
            "rddmis" => {
                let beta = param("beta")?;
                check_beta_open_interval(&beta)?;
                RuleSpec::Rddmis { beta }
            }
            "mix_rcb" => RuleSpec::MixMlRcb,
            "mix_radius" => {
                let b = rat_to_f64(&param("B")?);
                if !(0.5 < b && b < 1.0) {
                    return Err(err("B must lie strictly inside (1/2, 1)"));
                }
                RuleSpec::MixMlRadius { b }
            }
            _ => return Err(err("unknown rule")),
        };
        if arg.is_some()
            && matches!(
                rule,
                RuleSpec::MaximalLotteries
                    | RuleSpec::RandomDictatorship
                    | RuleSpec::SmartDictatorship
                    | RuleSpec::PluralityVeto
                    | RuleSpec::MixMlRcb
            )
        {
            return Err(err("rule takes no parameters"));
        }
        Ok(rule)
    }

    /// Canonical spec string (parse-compatible).
    pub fn name(&self) -> String {
        match self {
            RuleSpec::RandomDictatorship => "rd".into(),
            RuleSpec::SmartDictatorship => "smart_rd".into(),
            RuleSpec::PluralityVeto => "pv".into(),
            RuleSpec::KRoundPluralityVeto { k } => format!("kpv:k={k}"),
            RuleSpec::MaximalLotteries => "ml".into(),
            RuleSpec::Rcb { beta } => format!("rcb:beta={}", crate::rational::format_rational(beta)),
            RuleSpec::Radius { beta } => {
                format!("radius:beta={}", crate::rational::format_rational(beta))
            }
            RuleSpec::Rddmis { beta } => {
                format!("rddmis:beta={}", crate::rational::format_rational(beta))
            }
            RuleSpec::MixMlRcb => "mix_rcb".into(),
            RuleSpec::MixMlRadius { b } => format!("mix_radius:B={b}"),
        }
    }

    /// Runs the rule. Veto rules use the natural voter order; the two-pass
    /// independent-set rule uses candidate index order.
    pub fn evaluate(&self, instance: &ElectionInstance) -> Result<CandidateDistribution, RuleError> {
        match self {
            RuleSpec::RandomDictatorship => Ok(random_dictatorship(instance)),
            RuleSpec::SmartDictatorship => Ok(smart_dictatorship(instance)),
            RuleSpec::PluralityVeto => {
                let units = unit_expansion(instance)?;
                let order: Vec<usize> = (0..units.len()).collect();
                let winner = plurality_veto(instance, &order)?;
                Ok(CandidateDistribution::point_mass(instance.candidate_count(), winner))
            }
            RuleSpec::KRoundPluralityVeto { k } => {
                let units = unit_expansion(instance)?;
                let order: Vec<usize> = (0..units.len()).collect();
                k_round_plurality_veto(instance, &order, *k)
            }
            RuleSpec::MaximalLotteries => maximal_lotteries(instance),
            RuleSpec::Rcb { beta } => rcb(instance, beta),
            RuleSpec::Radius { beta } => radius(instance, beta),
            RuleSpec::Rddmis { beta } => {
                let order: Vec<usize> = (0..instance.candidate_count()).collect();
                rddmis(instance, beta, &order)
            }
            RuleSpec::MixMlRcb => mixtures::mix_ml_rcb(instance),
            RuleSpec::MixMlRadius { b } => mixtures::mix_ml_radius(instance, *b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parses_rule_specs() {
        assert_eq!(RuleSpec::parse("ml").unwrap(), RuleSpec::MaximalLotteries);
        assert_eq!(RuleSpec::parse("kpv:k=3").unwrap(), RuleSpec::KRoundPluralityVeto { k: 3 });
        assert_eq!(RuleSpec::parse("rcb:beta=3/5").unwrap(), RuleSpec::Rcb { beta: rat(3, 5) });
        assert_eq!(
            RuleSpec::parse("radius:beta=0.7").unwrap(),
            RuleSpec::Radius { beta: rat(7, 10) }
        );
        assert_eq!(
            RuleSpec::parse("mix_radius:B=0.876353").unwrap(),
            RuleSpec::MixMlRadius { b: 0.876353 }
        );
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            "nope",
            "rcb",
            "rcb:beta=1/2",
            "rcb:beta=1",
            "kpv:k=-1",
            "kpv:k=0.5",
            "ml:x=1",
            "mix_radius:B=1.5",
            "radius:gamma=0.7",
        ] {
            assert!(RuleSpec::parse(bad).is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn names_round_trip() {
        for spec in [
            "ml",
            "rd",
            "smart_rd",
            "pv",
            "kpv:k=2",
            "rcb:beta=3/5",
            "radius:beta=7/10",
            "rddmis:beta=2/3",
            "mix_rcb",
        ] {
            let parsed = RuleSpec::parse(spec).unwrap();
            assert_eq!(RuleSpec::parse(&parsed.name()).unwrap(), parsed);
        }
    }
}
