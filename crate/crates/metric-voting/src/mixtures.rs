//! Mixed rules: Maximal Lotteries with probability `p`, otherwise a
//! beta-parameterized rule with `beta` drawn from a density on `(1/2, B)`.
//!
//! The beta-rule output is piecewise constant in `beta`, jumping only where
//! `beta` crosses a realized pairwise margin. Partitioning `(1/2, B)` at
//! those margins and weighting each cell by its closed-form density mass
//! therefore computes the mixture distribution with no sampling error.

use num_traits::One;

use crate::election::{CandidateDistribution, DiagonalMode, ElectionInstance};
use crate::rational::{rat, rat_from_f64, rat_to_f64, Rational};
use crate::rules::{maximal_lotteries, radius, rcb, RuleError};

/// Sub-intervals of `(1/2, B)` on which every beta-rule is constant.
#[derive(Debug, Clone)]
pub struct BetaPartition {
    intervals: Vec<(Rational, Rational)>,
}

impl BetaPartition {
    /// Splits `(1/2, b_upper)` at the instance's distinct pairwise margins.
    pub fn new(instance: &ElectionInstance, b_upper: &Rational) -> Self {
        let half = rat(1, 2);
        assert!(*b_upper > half && *b_upper < Rational::one());
        let margins = instance.margins(DiagonalMode::Zero);
        let m = instance.candidate_count();
        let mut cuts: Vec<Rational> = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .map(|(i, j)| margins.margin(i, j).clone())
            .filter(|s| *s > half && *s < *b_upper)
            .collect();
        cuts.sort();
        cuts.dedup();
        let mut points = vec![half];
        points.extend(cuts);
        points.push(b_upper.clone());
        let intervals = points.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        BetaPartition { intervals }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaRuleKind {
    Rcb,
    Radius,
}

/// Density for the beta draw on `(1/2, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaDensity {
    Uniform,
    /// `rho(beta) = p / ((1 - p)(1 - beta^2))`, the density that cancels
    /// the adversarial term when paired with Maximal Lotteries at
    /// probability `p`.
    RhoRadius { p: f64 },
}

fn artanh(x: f64) -> f64 {
    0.5 * ((1.0 + x) / (1.0 - x)).ln()
}

/// `integral of 1/(1-b^2) over (lo, hi)` in closed form.
fn inv_one_minus_sq_mass(lo: f64, hi: f64) -> f64 {
    artanh(hi) - artanh(lo)
}

impl BetaDensity {
    fn mass(&self, lo: &Rational, hi: &Rational, b_upper: &Rational) -> f64 {
        match self {
            BetaDensity::Uniform => {
                rat_to_f64(&((hi - lo) / (b_upper - rat(1, 2))))
            }
            BetaDensity::RhoRadius { p } => {
                p / (1.0 - p) * inv_one_minus_sq_mass(rat_to_f64(lo), rat_to_f64(hi))
            }
        }
    }
}

/// Integrates the beta-rule over `(1/2, B)` under `density`, returning the
/// exact mixture distribution (binary64 because the density masses are
/// transcendental).
pub fn integrate_rule_over_beta(
    instance: &ElectionInstance,
    kind: BetaRuleKind,
    density: BetaDensity,
    b_upper: &Rational,
) -> Result<CandidateDistribution, RuleError> {
    let half = rat(1, 2);
    if *b_upper <= half || *b_upper >= Rational::one() {
        return Err(RuleError::Parameter("B must lie strictly inside (1/2, 1)".into()));
    }
    let partition = BetaPartition::new(instance, b_upper);
    let m = instance.candidate_count();
    let mut acc = vec![0.0_f64; m];
    for (lo, hi) in partition.intervals() {
        let midpoint = (lo + hi) / rat(2, 1);
        let cell = match kind {
            BetaRuleKind::Rcb => rcb(instance, &midpoint)?,
            BetaRuleKind::Radius => radius(instance, &midpoint)?,
        };
        let mass = density.mass(lo, hi, b_upper);
        for (j, a) in acc.iter_mut().enumerate() {
            *a += mass * cell.prob_f64(j);
        }
    }
    Ok(CandidateDistribution::approx(acc))
}

/// The Maximal Lotteries weight that makes the matched density integrate
/// to one on `(1/2, B)`: `p = 1 / (1 + integral of 1/(1-b^2))`.
pub fn ml_weight_for_radius_mix(b_upper: f64) -> f64 {
    1.0 / (1.0 + inv_one_minus_sq_mass(0.5, b_upper))
}

fn combine(
    ml: &CandidateDistribution,
    other: &CandidateDistribution,
    p: f64,
) -> CandidateDistribution {
    let probs = (0..ml.len())
        .map(|j| p * ml.prob_f64(j) + (1.0 - p) * other.prob_f64(j))
        .collect();
    CandidateDistribution::approx(probs)
}

/// Maximal Lotteries with probability `1/sqrt(2)`, otherwise the consensus
/// builder at a uniform `beta` over `(1/2, sqrt(2) - 1/2)`.
pub fn mix_ml_rcb(instance: &ElectionInstance) -> Result<CandidateDistribution, RuleError> {
    let p = std::f64::consts::FRAC_1_SQRT_2;
    let b_upper = rat_from_f64(std::f64::consts::SQRT_2 - 0.5);
    let ml = maximal_lotteries(instance)?;
    let cons = integrate_rule_over_beta(instance, BetaRuleKind::Rcb, BetaDensity::Uniform, &b_upper)?;
    Ok(combine(&ml, &cons, p))
}

/// Maximal Lotteries with probability `p(B)`, otherwise the uncovered-set
/// dictatorship at `beta` drawn from the matched density on `(1/2, B)`.
pub fn mix_ml_radius(
    instance: &ElectionInstance,
    b_upper: f64,
) -> Result<CandidateDistribution, RuleError> {
    if !(0.5 < b_upper && b_upper < 1.0) {
        return Err(RuleError::Parameter("B must lie strictly inside (1/2, 1)".into()));
    }
    let p = ml_weight_for_radius_mix(b_upper);
    let ml = maximal_lotteries(instance)?;
    let rad = integrate_rule_over_beta(
        instance,
        BetaRuleKind::Radius,
        BetaDensity::RhoRadius { p },
        &rat_from_f64(b_upper),
    )?;
    Ok(combine(&ml, &rad, p))
}

/// Worst-case distortion guarantee of the mixed rule as a function of the
/// upper sampling endpoint `B`.
pub fn distortion_bound_curve(kind: BetaRuleKind, b_upper: f64) -> f64 {
    assert!(0.5 < b_upper && b_upper < 1.0);
    let lambda = match kind {
        BetaRuleKind::Rcb => 1.0 / (b_upper + 0.5) + 0.5 * (b_upper - 0.5),
        BetaRuleKind::Radius => {
            let gain = ((1.0 + b_upper) / 1.5).ln();
            1.0 - gain / (1.0 + inv_one_minus_sq_mass(0.5, b_upper))
        }
    };
    1.0 + 2.0 * lambda
}

/// Golden-section minimizer of [`distortion_bound_curve`] over `(1/2, 1)`.
pub fn minimize_distortion_bound(kind: BetaRuleKind) -> (f64, f64) {
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut lo = 0.5 + 1e-9;
    let mut hi = 1.0 - 1e-9;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = distortion_bound_curve(kind, x1);
    let mut f2 = distortion_bound_curve(kind, x2);
    while hi - lo > 1e-9 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = distortion_bound_curve(kind, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = distortion_bound_curve(kind, x2);
        }
    }
    let b = 0.5 * (lo + hi);
    (b, distortion_bound_curve(kind, b))
}
