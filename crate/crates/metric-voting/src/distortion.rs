//! Exact per-instance worst-case distortion of a candidate distribution,
//! plus the biased-metric evaluators and an adversarial search that
//! lower-bounds the oracle.
//!
//! The oracle maximizes, per reference candidate, the expected social cost
//! of the distribution over all distance matrices that are consistent with
//! the ballots and satisfy the four-point closure
//! `d[i][u] <= d[i][v] + d[j][v] + d[j][u]`, normalized so the reference
//! candidate has social cost one. The maximum over reference candidates is
//! the distortion; any feasible point of the LP extends to a pseudometric,
//! and the adversarial biased-metric search certifies tightness from below.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::election::{CandidateDistribution, ElectionInstance};
use crate::exec;
use crate::lp::{solve_lp, Constraint, LinearProgram, LpError, LpStatus, Relation};
use crate::metrics::{
    biased_metric, is_consistent_tol, social_cost, BiasedVector, MetricSpace,
};
use crate::rational::{rat, rat_from_f64, rat_to_f64, Rational};
use crate::rules::{maximal_lotteries, RuleError};

/// Closure rows are generated lazily above this family size.
const FULL_CLOSURE_LIMIT: usize = 5_000;

/// Violation threshold for lazy closure generation.
const SEPARATION_TOL: f64 = 1e-9;

/// Lazy working-set sizing: keep the LP small by adding at most this many
/// rows per round and shedding slack rows beyond the retention limit.
const ROWS_PER_ROUND: usize = 3_000;
const WORKING_SET_LIMIT: usize = 9_000;
const MAX_LAZY_ROUNDS: usize = 300;

#[derive(Debug, thiserror::Error)]
pub enum DistortionError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("witness validation failed: {0}")]
    Witness(String),
    #[error("subset enumeration capped at 15 candidates, instance has {0}")]
    SubsetCap(usize),
}

/// Worst-case distortion of a distribution on one instance, together with
/// the maximizing metric.
#[derive(Debug, Clone)]
pub struct DistortionReport {
    pub value: f64,
    pub witness_i_star: usize,
    pub witness_metric: MetricSpace,
    pub per_candidate_costs: Vec<f64>,
}

impl fmt::Display for DistortionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "value {:.9}", self.value)?;
        writeln!(f, "i_star {}", self.witness_i_star)?;
        let costs: Vec<String> =
            self.per_candidate_costs.iter().map(|c| format!("{c:.9}")).collect();
        writeln!(f, "cost {}", costs.join(" "))?;
        for row in self.witness_metric.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{:.9}", rat_to_f64(v))).collect();
            writeln!(f, "d {}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A common bottom set: candidates ranked below everything else by every
/// single voter. Mass there makes the distortion infinite (those
/// candidates may drift arbitrarily far in a consistent metric).
fn unbounded_certificate(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
) -> Option<Vec<usize>> {
    let m = instance.candidate_count();
    let first = &instance.voters()[0].ranking;
    for len in 1..m {
        let tail: HashSet<usize> = first[m - len..].iter().copied().collect();
        let shared = instance
            .voters()
            .iter()
            .all(|b| b.ranking[m - len..].iter().all(|c| tail.contains(c)));
        if shared && tail.iter().any(|&c| dist.prob_f64(c) > 1e-15) {
            return Some(first[m - len..].to_vec());
        }
    }
    None
}

/// Exact worst-case distortion of `dist` on `instance`.
pub fn exact_distortion(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
) -> Result<DistortionReport, DistortionError> {
    let m = instance.candidate_count();
    assert_eq!(dist.len(), m, "distribution dimension mismatch");
    if let Some(tail) = unbounded_certificate(instance, dist) {
        return Ok(infinite_report(instance, dist, &tail));
    }
    // cheap exact lower bound from the canonical two-level offset
    // vectors; any reference whose LP relaxation falls below it cannot
    // attain the maximum and is abandoned early
    let prune_below = two_level_floor(instance, dist) - 1e-6;
    let outcomes =
        exec::map_range(m, |i_star| reference_lp(instance, dist, i_star, prune_below));
    let mut best: Option<(f64, usize, Vec<Vec<f64>>)> = None;
    for (i_star, outcome) in outcomes.into_iter().enumerate() {
        let Some((value, d)) = outcome? else { continue };
        if best.as_ref().map_or(true, |(v, _, _)| value > *v) {
            best = Some((value, i_star, d));
        }
    }
    let (value, i_star, d) = best.expect("the floor is attained by some reference");
    let witness = MetricSpace::from_f64(&d).map_err(|e| DistortionError::Witness(e.to_string()))?;
    let report = DistortionReport {
        value,
        witness_i_star: i_star,
        per_candidate_costs: (0..m)
            .map(|c| rat_to_f64(&social_cost(instance, &witness, c)))
            .collect(),
        witness_metric: witness,
    };
    validate_report(instance, dist, &report)?;
    Ok(report)
}

fn infinite_report(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
    tail: &[usize],
) -> DistortionReport {
    let m = instance.candidate_count();
    let k = instance.block_count();
    let two = rat(2, 1);
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|c| {
            let v = if tail.contains(&c) { two.clone() } else { Rational::zero() };
            vec![v; k]
        })
        .collect();
    let witness = MetricSpace::new(rows).expect("certificate metric is valid");
    let costs = (0..m).map(|c| rat_to_f64(&social_cost(instance, &witness, c))).collect();
    let i_star = (0..m).find(|c| !tail.contains(c)).expect("tail is a strict subset");
    debug_assert!(is_consistent_tol(instance, &witness, &Rational::zero()));
    let _ = dist;
    DistortionReport {
        value: f64::INFINITY,
        witness_i_star: i_star,
        witness_metric: witness,
        per_candidate_costs: costs,
    }
}

/// Best ratio over the all-twos biased vector per reference candidate.
/// Always a valid distortion lower bound, and exactly what the reference
/// LPs are pruned against.
fn two_level_floor(instance: &ElectionInstance, dist: &CandidateDistribution) -> f64 {
    let m = instance.candidate_count();
    let two = rat(2, 1);
    (0..m)
        .map(|i_star| {
            let x = BiasedVector::new(
                (0..m).map(|c| if c == i_star { Rational::zero() } else { two.clone() }).collect(),
                i_star,
            )
            .expect("two-level vector is valid");
            biased_ratio(instance, &x, dist)
        })
        .fold(1.0_f64, f64::max)
}

/// Builds and solves the LP for one reference candidate; returns the
/// optimal expected cost (the distortion restricted to this reference) and
/// the witness distances. Returns `None` when the relaxation value drops
/// below `prune_below` (the reference cannot attain the maximum).
fn reference_lp(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
    i_star: usize,
    prune_below: f64,
) -> Result<Option<(f64, Vec<Vec<f64>>)>, DistortionError> {
    let m = instance.candidate_count();
    let k = instance.block_count();
    let var = |c: usize, v: usize| c * k + v;
    let weights: Vec<f64> = instance.voters().iter().map(|b| rat_to_f64(&b.weight)).collect();
    let probs = dist.probs_exact();

    let closure_terms = |i: usize, u: usize, j: usize, v: usize| {
        vec![
            (var(i, u), 1.0),
            (var(i, v), -1.0),
            (var(j, v), -1.0),
            (var(j, u), -1.0),
        ]
    };
    let closure_row = |quad: &(usize, usize, usize, usize)| Constraint {
        terms: closure_terms(quad.0, quad.1, quad.2, quad.3),
        relation: Relation::Le,
        rhs: 0.0,
    };
    let residual = |d: &[Vec<f64>], q: &(usize, usize, usize, usize)| {
        d[q.0][q.1] - d[q.0][q.3] - d[q.2][q.3] - d[q.2][q.1]
    };

    let build = |working: &[(usize, usize, usize, usize)]| {
        let mut lp = LinearProgram::new();
        for c in 0..m {
            let p = &probs[c];
            for v in 0..k {
                let obj = rat_to_f64(&(p * rat_from_f64(weights[v])));
                lp.add_var(obj);
            }
        }
        // ranking consistency: adjacent pairs suffice
        for (v, block) in instance.voters().iter().enumerate() {
            for w in block.ranking.windows(2) {
                lp.add_constraint(
                    vec![(var(w[0], v), 1.0), (var(w[1], v), -1.0)],
                    Relation::Le,
                    0.0,
                );
            }
        }
        // normalization: the reference candidate costs exactly 1
        lp.add_constraint(
            (0..k).map(|v| (var(i_star, v), weights[v])).collect(),
            Relation::Eq,
            1.0,
        );
        for quad in working {
            let row = closure_row(quad);
            lp.add_constraint(row.terms, row.relation, row.rhs);
        }
        lp
    };

    let full = m.saturating_sub(1) * m * k.saturating_sub(1) * k <= FULL_CLOSURE_LIMIT;
    let mut working: Vec<(usize, usize, usize, usize)> = Vec::new();
    if full {
        for i in 0..m {
            for j in 0..m {
                for u in 0..k {
                    for v in 0..k {
                        if i != j && u != v {
                            working.push((i, u, j, v));
                        }
                    }
                }
            }
        }
    } else if k >= 2 {
        // anchor rows through the reference candidate around a voter ring;
        // together with the infinite-distortion precheck these bound the
        // objective of every relaxation the loop ever solves
        for i in 0..m {
            if i == i_star {
                continue;
            }
            for u in 0..k {
                working.push((i, u, i_star, (u + 1) % k));
            }
        }
        // hub seeding: worst-case metrics route mass-carrying candidates
        // through blocks that rank the reference near the top, so those
        // rows are the likely binding set
        let mut hubs: Vec<usize> = (0..k).collect();
        hubs.sort_by_key(|&v| (instance.position(v, i_star), v));
        hubs.truncate(8);
        for c in 0..m {
            if c == i_star || !probs[c].is_positive() {
                continue;
            }
            for u in 0..k {
                for &v in &hubs {
                    if v != u {
                        working.push((c, u, i_star, v));
                    }
                }
            }
        }
        working.sort_unstable();
        working.dedup();
    }
    let anchor_len = working.len();
    let mut in_working: HashSet<(usize, usize, usize, usize)> = working.iter().copied().collect();

    let trace = std::env::var_os("MVOTE_TRACE").is_some();
    for round in 0..MAX_LAZY_ROUNDS {
        let lp = build(&working);
        let t0 = std::time::Instant::now();
        let outcome = solve_lp(&lp)?;
        if trace {
            eprintln!(
                "ref {i_star} round {round}: {} rows, value {:.6}, solve {:?}",
                lp.num_constraints(),
                outcome.value,
                t0.elapsed()
            );
        }
        if outcome.status != LpStatus::Optimal {
            return Err(DistortionError::Lp(LpError::Numerical(format!(
                "reference LP for candidate {i_star} reported {:?}",
                outcome.status
            ))));
        }
        // every working set is a relaxation, so its value upper-bounds the
        // final value for this reference
        if outcome.value < prune_below {
            return Ok(None);
        }
        let d = unpack(&outcome.solution, m, k);
        let violations = separate_closure(&d, &in_working);
        if violations.is_empty() {
            return Ok(Some((outcome.value, d)));
        }
        if working.len() + violations.len().min(ROWS_PER_ROUND) > WORKING_SET_LIMIT {
            // shed slack rows; anchors stay
            let (anchors, lazy) = working.split_at(anchor_len);
            let kept: Vec<_> = lazy
                .iter()
                .copied()
                .filter(|q| residual(&d, q) > -1e-6)
                .collect();
            working = anchors.to_vec();
            working.extend(kept);
            in_working = working.iter().copied().collect();
        }
        for quad in violations.into_iter().take(ROWS_PER_ROUND) {
            if in_working.insert(quad) {
                working.push(quad);
            }
        }
    }
    Err(DistortionError::Lp(LpError::Numerical(format!(
        "closure generation for reference {i_star} did not settle within {MAX_LAZY_ROUNDS} rounds"
    ))))
}

fn unpack(solution: &[f64], m: usize, k: usize) -> Vec<Vec<f64>> {
    (0..m).map(|c| solution[c * k..(c + 1) * k].to_vec()).collect()
}

/// Scans the full closure family for violated rows, strongest first. For
/// each `(i, u, v)` only the most violated partner `j` is reported.
fn separate_closure(
    d: &[Vec<f64>],
    added: &HashSet<(usize, usize, usize, usize)>,
) -> Vec<(usize, usize, usize, usize)> {
    let m = d.len();
    let k = d[0].len();
    let mut found: Vec<(f64, (usize, usize, usize, usize))> = Vec::new();
    for u in 0..k {
        for v in 0..k {
            if u == v {
                continue;
            }
            // two smallest values of d[j][v] + d[j][u]
            let mut best = (f64::INFINITY, usize::MAX);
            let mut second = (f64::INFINITY, usize::MAX);
            for j in 0..m {
                let s = d[j][v] + d[j][u];
                if s < best.0 {
                    second = best;
                    best = (s, j);
                } else if s < second.0 {
                    second = (s, j);
                }
            }
            for i in 0..m {
                let (bound, j) = if best.1 == i { second } else { best };
                if j == usize::MAX {
                    continue;
                }
                let violation = d[i][u] - d[i][v] - bound;
                if violation > SEPARATION_TOL && !added.contains(&(i, u, j, v)) {
                    found.push((violation, (i, u, j, v)));
                }
            }
        }
    }
    found.sort_by(|a, b| b.0.total_cmp(&a.0));
    found.into_iter().map(|(_, row)| row).collect()
}

fn validate_report(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
    report: &DistortionReport,
) -> Result<(), DistortionError> {
    let tol = rat_from_f64(1e-7);
    if !is_consistent_tol(instance, &report.witness_metric, &tol) {
        return Err(DistortionError::Witness("witness violates ranking consistency".into()));
    }
    if let Err((i, u, j, v)) = report.witness_metric.check_path_closure(&tol) {
        return Err(DistortionError::Witness(format!(
            "witness violates closure at ({i},{u},{j},{v})"
        )));
    }
    let sc_star = report.per_candidate_costs[report.witness_i_star];
    if (sc_star - 1.0).abs() > 1e-6 {
        return Err(DistortionError::Witness(format!(
            "reference cost {sc_star} strayed from the normalization"
        )));
    }
    let expected: f64 = (0..dist.len())
        .map(|j| dist.prob_f64(j) * report.per_candidate_costs[j])
        .sum();
    let ratio = expected / sc_star;
    if (ratio - report.value).abs() > 1e-8 * report.value.max(1.0) {
        return Err(DistortionError::Witness(format!(
            "witness ratio {ratio} disagrees with the LP value {}",
            report.value
        )));
    }
    if report.value < 1.0 - 1e-9 {
        return Err(DistortionError::Witness(format!("distortion {} below 1", report.value)));
    }
    Ok(())
}

/// Expected-cost ratio of `dist` under the biased metric for `x`:
/// `1 + 2 L / R`, with the degenerate `R = 0` cases resolved by the exact
/// values (ratio 1 when nothing moves, infinite when mass sits at positive
/// offsets that no voter ever inverts).
pub fn biased_ratio(
    instance: &ElectionInstance,
    x: &BiasedVector,
    dist: &CandidateDistribution,
) -> f64 {
    match biased_ratio_exact(instance, x, dist) {
        Some(r) => rat_to_f64(&r),
        None => f64::INFINITY,
    }
}

/// Exact ratio; `None` encodes an infinite ratio.
pub(crate) fn biased_ratio_exact(
    instance: &ElectionInstance,
    x: &BiasedVector,
    dist: &CandidateDistribution,
) -> Option<Rational> {
    let d = biased_metric(instance, x);
    let sc_star = social_cost(instance, &d, x.i_star());
    let probs = dist.probs_exact();
    let loss: Rational = (0..instance.candidate_count())
        .map(|j| &probs[j] * (social_cost(instance, &d, j) - &sc_star))
        .sum();
    if sc_star.is_zero() {
        if loss.is_zero() {
            Some(Rational::one())
        } else {
            None
        }
    } else {
        Some(Rational::one() + loss / sc_star)
    }
}

/// One violated instance of the finite constraint family.
#[derive(Debug, Clone)]
pub struct FancyViolation {
    pub subset: Vec<usize>,
    pub i_star: usize,
    pub lhs: f64,
    pub rhs: f64,
}

/// Enumerates every proper nonempty candidate subset `I` and reference
/// `i_star` in `I`, reporting the pairs where
/// `sum_{j outside I} s[I > j] p_j > lambda (1 - s[i_star > I^c])`.
pub fn fancy_constraints_check(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
    lambda: f64,
) -> Result<Vec<FancyViolation>, DistortionError> {
    let m = instance.candidate_count();
    if m > 15 {
        return Err(DistortionError::SubsetCap(m));
    }
    let lambda = rat_from_f64(lambda);
    let slack = rat_from_f64(1e-12);
    let probs = dist.probs_exact();
    let mut violations = Vec::new();
    for mask in 1u32..((1u32 << m) - 1) {
        let inside: Vec<usize> = (0..m).filter(|&c| mask & (1 << c) != 0).collect();
        let outside: Vec<usize> = (0..m).filter(|&c| mask & (1 << c) == 0).collect();
        // per block: deepest position of I and shallowest position of I^c
        let stats: Vec<(usize, usize)> = (0..instance.block_count())
            .map(|v| {
                let max_in = inside.iter().map(|&c| instance.position(v, c)).max().unwrap();
                let min_out = outside.iter().map(|&c| instance.position(v, c)).min().unwrap();
                (max_in, min_out)
            })
            .collect();
        let lhs: Rational = outside
            .iter()
            .map(|&j| {
                let s_ij: Rational = instance
                    .voters()
                    .iter()
                    .enumerate()
                    .filter(|(v, _)| stats[*v].0 < instance.position(*v, j))
                    .map(|(_, b)| b.weight.clone())
                    .sum();
                s_ij * &probs[j]
            })
            .sum();
        for &i_star in &inside {
            let s_star: Rational = instance
                .voters()
                .iter()
                .enumerate()
                .filter(|(v, _)| instance.position(*v, i_star) < stats[*v].1)
                .map(|(_, b)| b.weight.clone())
                .sum();
            let rhs = &lambda * (Rational::one() - s_star);
            if lhs > &rhs + &slack {
                violations.push(FancyViolation {
                    subset: inside.clone(),
                    i_star,
                    lhs: rat_to_f64(&lhs),
                    rhs: rat_to_f64(&rhs),
                });
            }
        }
    }
    Ok(violations)
}

#[derive(Clone, PartialEq)]
enum Ratio {
    Finite(Rational),
    Infinite,
}

impl Ratio {
    fn better_than(&self, other: &Ratio) -> bool {
        match (self, other) {
            (Ratio::Infinite, Ratio::Infinite) => false,
            (Ratio::Infinite, _) => true,
            (_, Ratio::Infinite) => false,
            (Ratio::Finite(a), Ratio::Finite(b)) => a > b,
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Ratio::Finite(r) => rat_to_f64(r),
            Ratio::Infinite => f64::INFINITY,
        }
    }
}

fn eval_ratio(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
    x: &BiasedVector,
    budget: &mut usize,
) -> Option<Ratio> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    Some(match biased_ratio_exact(instance, x, dist) {
        Some(r) => Ratio::Finite(r),
        None => Ratio::Infinite,
    })
}

/// Adversarial lower-bound search: evaluates the canonical two-level
/// offset vectors (offsets in `{0, 2}`) for every reference candidate and
/// polishes each with exact coordinate-wise line search. `budget` caps the
/// number of ratio evaluations. Always at most the exact distortion.
pub fn search_worst_biased(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
    budget: usize,
) -> (BiasedVector, f64) {
    let m = instance.candidate_count();
    let mut budget = budget;
    let zero = BiasedVector::new(vec![Rational::zero(); m], 0).expect("valid");
    let mut best: (BiasedVector, Ratio) = (zero, Ratio::Finite(Rational::one()));
    if m == 1 {
        return (best.0, 1.0);
    }
    'outer: for i_star in 0..m {
        let others: Vec<usize> = (0..m).filter(|&c| c != i_star).collect();
        let masks: Vec<u64> = if others.len() <= 11 {
            (1..(1u64 << others.len())).collect()
        } else {
            // singletons, the full set, and a deterministic spread
            let mut ms: Vec<u64> = (0..others.len() as u64).map(|b| 1 << b).collect();
            ms.push((1 << others.len()) - 1);
            let mut state = 0x9e3779b97f4a7c15u64;
            while ms.len() < 512 {
                state = state.wrapping_mul(0xbf58476d1ce4e5b9).wrapping_add(0x94d049bb133111eb);
                ms.push(state & ((1 << others.len()) - 1));
            }
            ms.retain(|&w| w != 0);
            ms
        };
        for mask in masks {
            let x = BiasedVector::new(
                (0..m)
                    .map(|c| {
                        if c != i_star && others.iter().position(|&o| o == c).map_or(
                            false,
                            |bit| mask & (1 << bit) != 0,
                        ) {
                            rat(2, 1)
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect(),
                i_star,
            )
            .expect("two-level vector is valid");
            let Some(mut cur) = eval_ratio(instance, dist, &x, &mut budget) else {
                break 'outer;
            };
            let mut x = x;
            if matches!(cur, Ratio::Infinite) {
                return (x, f64::INFINITY);
            }
            // coordinate ascent with exact per-coordinate breakpoints
            for _ in 0..4 {
                let mut improved = false;
                for &c in &others {
                    let mut best_here = cur.clone();
                    let mut best_t: Option<Rational> = None;
                    for t in coordinate_breakpoints(instance, dist, &x, c) {
                        let cand = x.with_offset(c, t.clone());
                        let Some(val) = eval_ratio(instance, dist, &cand, &mut budget) else {
                            break 'outer;
                        };
                        if matches!(val, Ratio::Infinite) {
                            return (cand, f64::INFINITY);
                        }
                        if val.better_than(&best_here) {
                            best_here = val;
                            best_t = Some(t);
                        }
                    }
                    if let Some(t) = best_t {
                        x = x.with_offset(c, t);
                        cur = best_here;
                        improved = true;
                    }
                }
                if !improved {
                    break;
                }
            }
            if cur.better_than(&best.1) {
                best = (x, cur);
            }
        }
    }
    let value = best.1.to_f64();
    (best.0, value)
}

/// Candidate values for one coordinate of the ratio: the kinks of the
/// piecewise-rational one-dimensional slice. Both the numerator and the
/// denominator of the ratio are piecewise linear in `x_c` with kinks only
/// where a per-voter max/min switches terms.
fn coordinate_breakpoints(
    instance: &ElectionInstance,
    dist: &CandidateDistribution,
    x: &BiasedVector,
    c: usize,
) -> Vec<Rational> {
    let mut cands: Vec<Rational> = vec![Rational::zero()];
    for (k, off) in x.offsets().iter().enumerate() {
        if k != c {
            cands.push(off.clone());
        }
    }
    let two = rat(2, 1);
    for (v, block) in instance.voters().iter().enumerate() {
        let pos_c = instance.position(v, c);
        // max inversion among pairs avoiding c
        let mut a_v = Rational::zero();
        let mut pref_max: Option<Rational> = None;
        for &j in &block.ranking {
            if j == c {
                continue;
            }
            let xj = x.offset(j).clone();
            if let Some(ref pm) = pref_max {
                let gap = pm - &xj;
                if gap > a_v {
                    a_v = gap;
                }
            }
            pref_max = Some(match pref_max {
                Some(pm) => pm.max(xj),
                None => xj,
            });
        }
        let below_min = block.ranking[pos_c + 1..]
            .iter()
            .map(|&j| x.offset(j).clone())
            .min();
        let above_max = block.ranking[..pos_c].iter().map(|&j| x.offset(j).clone()).max();
        if let Some(m1) = &below_min {
            cands.push(&a_v + m1);
        }
        if let Some(m2) = &above_max {
            cands.push(m2 - &a_v);
        }
        if let (Some(m1), Some(m2)) = (&below_min, &above_max) {
            cands.push((m1 + m2) / &two);
        }
        // kinks of the loss terms: suffix minima excluding c
        for (p, &j) in block.ranking.iter().enumerate() {
            if p > pos_c || dist.prob_f64(j) <= 0.0 {
                continue;
            }
            if let Some(b) = block.ranking[p..]
                .iter()
                .filter(|&&k| k != c)
                .map(|&k| x.offset(k).clone())
                .min()
            {
                cands.push(b);
            }
        }
    }
    cands.retain(|t| !t.is_negative());
    cands.sort();
    cands.dedup();
    // probe past the last kink; the tail piece is monotone toward its limit
    if let Some(last) = cands.last().cloned() {
        cands.push(last * &two + rat(4, 1));
    }
    cands
}

/// Verifies the pointwise sandwich for the Maximal Lotteries distribution:
/// at every breakpoint `t`, `ell(D, t) <= P(I_t^c)/2 <= r(t)` within 1e-8.
pub fn ml_pointwise_check(
    instance: &ElectionInstance,
    x: &BiasedVector,
) -> Result<bool, RuleError> {
    let dist = maximal_lotteries(instance)?;
    let r = crate::metrics::r_curve(instance, x);
    let ell = crate::metrics::ell_curve(instance, x, &dist);
    let probs = dist.probs_exact();
    let tol = rat_from_f64(1e-8);
    let two = rat(2, 1);
    let mut points: Vec<Rational> = r.starts().to_vec();
    points.extend_from_slice(ell.starts());
    points.sort();
    points.dedup();
    for t in &points {
        let outside_mass: Rational = (0..instance.candidate_count())
            .filter(|&k| x.offset(k) > t)
            .map(|k| probs[k].clone())
            .sum();
        let half_mass = outside_mass / &two;
        if *ell.value_at(t) > &half_mass + &tol {
            return Ok(false);
        }
        if half_mass > r.value_at(t) + &tol {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{gen_radius_lb, gen_random};
    use crate::rational::rat_int;
    use crate::rules::{radius, random_dictatorship};
    use crate::testutil::{disagreeing_pair, fig1, rand_biased, rand_rational_dist, three_cycle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn disagreeing_pair_randomized_and_deterministic() {
        let e = fig1();
        let uniform = CandidateDistribution::exact(vec![rat(1, 2), rat(1, 2)]);
        let report = exact_distortion(&e, &uniform).unwrap();
        assert!((report.value - 2.0).abs() <= 1e-8, "{}", report.value);
        for winner in 0..2 {
            let pm = CandidateDistribution::point_mass(2, winner);
            let report = exact_distortion(&e, &pm).unwrap();
            assert!((report.value - 3.0).abs() <= 1e-8, "{}", report.value);
        }
    }

    #[test]
    fn random_dictatorship_matches_closed_form() {
        for n in [2usize, 3, 4] {
            let e = disagreeing_pair(n);
            let report = exact_distortion(&e, &random_dictatorship(&e)).unwrap();
            let expected = 3.0 - 2.0 / n as f64;
            assert!((report.value - expected).abs() <= 1e-8, "n={n}: {}", report.value);
        }
    }

    #[test]
    fn report_witness_is_reusable() {
        let e = fig1();
        let pm = CandidateDistribution::point_mass(2, 1);
        let report = exact_distortion(&e, &pm).unwrap();
        let text = report.to_string();
        assert!(text.starts_with("value 3.0"), "{text}");
        assert_eq!(text.lines().count(), 3 + 2);
    }

    #[test]
    fn unbounded_when_mass_sits_on_common_bottom() {
        // both voters rank candidate 2 last
        let e = crate::election::ElectionInstance::parse("3 2\n1 0 1 2\n1 1 0 2\n").unwrap();
        let d = CandidateDistribution::exact(vec![rat(1, 2), rat(1, 4), rat(1, 4)]);
        let report = exact_distortion(&e, &d).unwrap();
        assert!(report.value.is_infinite());
        let (x, found) = search_worst_biased(&e, &d, 10_000);
        assert!(found.is_infinite());
        assert!(x.offset(2).is_positive());
    }

    #[test]
    fn biased_ratio_examples() {
        let e = fig1();
        let x = BiasedVector::new(vec![rat_int(0), rat_int(2)], 0).unwrap();
        let d = CandidateDistribution::exact(vec![rat(1, 2), rat(1, 2)]);
        assert!((biased_ratio(&e, &x, &d) - 2.0).abs() <= 1e-12);
        let zero = BiasedVector::new(vec![rat_int(0), rat_int(0)], 0).unwrap();
        assert!((biased_ratio(&e, &zero, &d) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn biased_ratio_on_adversarial_family() {
        let beta = rat(7, 10);
        let q = 50usize;
        let e = gen_radius_lb(&beta, q).unwrap();
        let m = e.candidate_count();
        let x = BiasedVector::new(
            (0..m).map(|c| if c == 0 { rat_int(0) } else { rat_int(2) }).collect(),
            0,
        )
        .unwrap();
        let d = radius(&e, &beta).unwrap();
        let got = biased_ratio(&e, &x, &d);
        assert!(got > 1.0 + 2.0 / 0.7 - 0.05, "{got}");
    }

    #[test]
    fn search_finds_the_deterministic_witness() {
        let e = fig1();
        let pm = CandidateDistribution::point_mass(2, 1);
        let (x, value) = search_worst_biased(&e, &pm, 10_000);
        assert!((value - 3.0).abs() <= 1e-9, "{value}");
        assert_eq!(x.i_star(), 0);
    }

    #[test]
    fn search_never_exceeds_the_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let e = gen_random(rng.gen_range(2..=4), rng.gen_range(2..=5), rng.gen());
            let d = rand_rational_dist(e.candidate_count(), &mut rng);
            let report = exact_distortion(&e, &d).unwrap();
            let (_, found) = search_worst_biased(&e, &d, 30_000);
            if report.value.is_infinite() {
                assert!(found.is_infinite());
            } else {
                assert!(found <= report.value + 1e-6, "{found} vs {}", report.value);
            }
        }
    }

    #[test]
    fn fancy_constraints_hold_for_random_dictatorship() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let e = gen_random(rng.gen_range(2..=5), rng.gen_range(2..=6), rng.gen());
            let d = random_dictatorship(&e);
            assert!(fancy_constraints_check(&e, &d, 1.0).unwrap().is_empty());
        }
    }

    #[test]
    fn fancy_constraints_flag_bad_distributions() {
        // all mass on the condorcet loser violates lambda = 1 somewhere
        let e = crate::election::ElectionInstance::parse("2 3\n1 0 1\n1 0 1\n1 1 0\n").unwrap();
        let pm = CandidateDistribution::point_mass(2, 1);
        let violations = fancy_constraints_check(&e, &pm, 0.4).unwrap();
        assert!(!violations.is_empty());
    }

    #[test]
    fn subset_cap_is_enforced() {
        let e = gen_random(16, 2, 1);
        let d = random_dictatorship(&e);
        assert!(matches!(
            fancy_constraints_check(&e, &d, 1.0),
            Err(DistortionError::SubsetCap(16))
        ));
    }

    #[test]
    fn ml_pointwise_sandwich_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let e = gen_random(rng.gen_range(2..=5), rng.gen_range(2..=5), rng.gen());
            let x = rand_biased(&e, &mut rng);
            assert!(ml_pointwise_check(&e, &x).unwrap());
        }
        // hand-checked three-cycle curves
        let e = three_cycle();
        let x = BiasedVector::new(vec![rat_int(0), rat_int(1), rat_int(2)], 0).unwrap();
        assert!(ml_pointwise_check(&e, &x).unwrap());
    }
}
