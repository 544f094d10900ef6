//! Plurality Veto and its k-round variant.
//!
//! Both procedures walk over individual voters, so rational-weight
//! instances are first expanded into virtual unit voters by the least
//! common multiple of the weight denominators (capped at 10^6).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::election::{CandidateDistribution, ElectionInstance};
use crate::rational::rat_int;

use super::RuleError;

const EXPANSION_CAP: u64 = 1_000_000;

/// Expands weighted blocks into unit voters; entry `u` of the returned
/// vector is the voter-block index behind unit `u`.
pub fn unit_expansion(instance: &ElectionInstance) -> Result<Vec<usize>, RuleError> {
    let mut lcm = BigInt::one();
    for block in instance.voters() {
        lcm = lcm.lcm(block.weight.denom());
    }
    let total = lcm.to_u64().filter(|&t| t <= EXPANSION_CAP);
    let Some(_) = total else {
        return Err(RuleError::ExpansionTooLarge(lcm.to_string()));
    };
    let mut units = Vec::new();
    for (v, block) in instance.voters().iter().enumerate() {
        let count = (block.weight.numer() * &lcm / block.weight.denom())
            .to_u64()
            .expect("count fits after cap check");
        if units.len() as u64 + count > EXPANSION_CAP {
            return Err(RuleError::ExpansionTooLarge(format!(">{EXPANSION_CAP}")));
        }
        units.extend(std::iter::repeat(v).take(count as usize));
    }
    Ok(units)
}

/// Runs the full veto process: every candidate starts with its plurality
/// count; each voter in `order` decrements their least favorite candidate
/// that still has positive score. Returns the last candidate with positive
/// score.
pub fn plurality_veto(instance: &ElectionInstance, order: &[usize]) -> Result<usize, RuleError> {
    let units = unit_expansion(instance)?;
    let (mut scores, _) = initial_scores(instance, &units);
    check_order(order, units.len())?;
    let mut last = usize::MAX;
    for &unit in order {
        last = veto_step(instance, units[unit], &mut scores)?;
    }
    Ok(last)
}

/// Runs `k` vetoes by the first `k` voters in `order`, then returns the
/// distribution proportional to the remaining scores. At `k = n` this
/// degenerates to a point mass on the full veto winner.
pub fn k_round_plurality_veto(
    instance: &ElectionInstance,
    order: &[usize],
    k: usize,
) -> Result<CandidateDistribution, RuleError> {
    let units = unit_expansion(instance)?;
    let n = units.len();
    check_order(order, n)?;
    if k > n {
        return Err(RuleError::Parameter(format!("k = {k} exceeds the {n} voters")));
    }
    if k == n {
        let winner = plurality_veto(instance, order)?;
        return Ok(CandidateDistribution::point_mass(instance.candidate_count(), winner));
    }
    let (mut scores, _) = initial_scores(instance, &units);
    for &unit in &order[..k] {
        veto_step(instance, units[unit], &mut scores)?;
    }
    let remaining = rat_int((n - k) as i64);
    let p = scores.into_iter().map(|s| rat_int(s as i64) / &remaining).collect();
    Ok(CandidateDistribution::exact(p))
}

fn initial_scores(instance: &ElectionInstance, units: &[usize]) -> (Vec<u64>, u64) {
    let mut scores = vec![0u64; instance.candidate_count()];
    for &v in units {
        scores[instance.voters()[v].ranking[0]] += 1;
    }
    (scores, units.len() as u64)
}

fn veto_step(
    instance: &ElectionInstance,
    block: usize,
    scores: &mut [u64],
) -> Result<usize, RuleError> {
    let ranking = &instance.voters()[block].ranking;
    let target = ranking
        .iter()
        .rev()
        .copied()
        .find(|&c| scores[c] > 0)
        .expect("total score stays positive until the last veto");
    scores[target] -= 1;
    Ok(target)
}

fn check_order(order: &[usize], n: usize) -> Result<(), RuleError> {
    if order.len() != n {
        return Err(RuleError::Parameter(format!(
            "order covers {} voters, expected {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &u in order {
        if u >= n || seen[u] {
            return Err(RuleError::Parameter("order is not a permutation of the voters".into()));
        }
        seen[u] = true;
    }
    Ok(())
}
