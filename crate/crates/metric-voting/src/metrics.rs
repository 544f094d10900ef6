//! Candidate-voter pseudometrics, consistency checks, biased metrics, and
//! the step-function machinery (`r`/`R` and `ell`/`L`) used by the
//! distortion analyses.
//!
//! A metric is stored as an m-by-k matrix of candidate-to-voter-block
//! distances. Validity is the bipartite restriction of a pseudometric: all
//! entries nonnegative plus the four-point closure
//! `d[i][u] <= d[i][v] + d[j][v] + d[j][u]`.

use num_traits::{Signed, Zero};

use crate::election::{CandidateDistribution, DiagonalMode, ElectionInstance};
use crate::rational::{format_rational, Rational};

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}")]
    Dimensions(String),
    #[error("negative distance at candidate {candidate}, voter block {block}")]
    NegativeDistance { candidate: usize, block: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("degenerate biased metric: R = 0")]
    DegenerateR,
}

/// Candidate-to-voter-block distance matrix (exact rationals; binary64
/// witnesses convert losslessly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    /// d[candidate][voter block]
    d: Vec<Vec<Rational>>,
}

impl MetricSpace {
    pub fn new(d: Vec<Vec<Rational>>) -> Result<Self, MetricsError> {
        if d.is_empty() || d[0].is_empty() {
            return Err(MetricsError::Dimensions("empty distance matrix".into()));
        }
        let k = d[0].len();
        for (c, row) in d.iter().enumerate() {
            if row.len() != k {
                return Err(MetricsError::Dimensions(format!(
                    "row {c} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (v, entry) in row.iter().enumerate() {
                if entry.is_negative() {
                    return Err(MetricsError::NegativeDistance { candidate: c, block: v });
                }
            }
        }
        Ok(MetricSpace { d })
    }

    pub fn from_f64(d: &[Vec<f64>]) -> Result<Self, MetricsError> {
        let rows = d
            .iter()
            .map(|row| row.iter().map(|&x| Rational::from_float(x.max(0.0)).expect("finite")).collect())
            .collect();
        MetricSpace::new(rows)
    }

    pub fn candidate_count(&self) -> usize {
        self.d.len()
    }

    pub fn block_count(&self) -> usize {
        self.d[0].len()
    }

    pub fn dist(&self, candidate: usize, block: usize) -> &Rational {
        &self.d[candidate][block]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.d
    }

    /// Checks the four-point closure `d[i][u] <= d[i][v] + d[j][v] + d[j][u] + tol`
    /// over all ordered quadruples; returns the first violation.
    pub fn check_path_closure(&self, tol: &Rational) -> Result<(), (usize, usize, usize, usize)> {
        let m = self.candidate_count();
        let k = self.block_count();
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                for u in 0..k {
                    for v in 0..k {
                        if u == v {
                            continue;
                        }
                        let bound = &self.d[i][v] + &self.d[j][v] + &self.d[j][u] + tol;
                        if self.d[i][u] > bound {
                            return Err((i, u, j, v));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses the metric file format: a `m k` header then `m` lines of `k`
    /// nonnegative rationals (row = candidate).
    pub fn parse(text: &str) -> Result<Self, MetricsError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(idx, l)| (idx + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (no, header) =
            lines.next().ok_or(MetricsError::Parse { line: 0, message: "empty input".into() })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(MetricsError::Parse { line: no, message: "expected `m k` header".into() });
        }
        let m: usize = parts[0]
            .parse()
            .map_err(|_| MetricsError::Parse { line: no, message: "bad candidate count".into() })?;
        let k: usize = parts[1]
            .parse()
            .map_err(|_| MetricsError::Parse { line: no, message: "bad voter count".into() })?;
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            let (no, line) = lines.next().ok_or(MetricsError::Parse {
                line: no,
                message: format!("expected {m} distance rows"),
            })?;
            let row: Vec<Rational> = line
                .split_whitespace()
                .map(|t| {
                    crate::rational::parse_rational(t)
                        .map_err(|e| MetricsError::Parse { line: no, message: e.to_string() })
                })
                .collect::<Result<_, _>>()?;
            if row.len() != k {
                return Err(MetricsError::Parse {
                    line: no,
                    message: format!("expected {k} entries, got {}", row.len()),
                });
            }
            rows.push(row);
        }
        MetricSpace::new(rows)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("{} {}\n", self.candidate_count(), self.block_count());
        for row in &self.d {
            let parts: Vec<String> = row.iter().map(format_rational).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Nonnegative candidate offsets with `x[i_star] = 0`; parameterizes the
/// extremal consistent metric for reference candidate `i_star`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasedVector {
    x: Vec<Rational>,
    i_star: usize,
}

impl BiasedVector {
    pub fn new(x: Vec<Rational>, i_star: usize) -> Result<Self, MetricsError> {
        if i_star >= x.len() {
            return Err(MetricsError::Dimensions(format!("i_star {i_star} out of range")));
        }
        if !x[i_star].is_zero() {
            return Err(MetricsError::Dimensions("x[i_star] must be 0".into()));
        }
        if x.iter().any(|v| v.is_negative()) {
            return Err(MetricsError::Dimensions("offsets must be nonnegative".into()));
        }
        Ok(BiasedVector { x, i_star })
    }

    pub fn i_star(&self) -> usize {
        self.i_star
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.x
    }

    pub fn offset(&self, c: usize) -> &Rational {
        &self.x[c]
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Replaces one offset (used by the adversarial coordinate search).
    pub fn with_offset(&self, c: usize, value: Rational) -> BiasedVector {
        assert!(c != self.i_star && !value.is_negative());
        let mut x = self.x.clone();
        x[c] = value;
        BiasedVector { x, i_star: self.i_star }
    }
}

/// Weight-averaged distance from candidate `i` to the voters.
pub fn social_cost(instance: &ElectionInstance, d: &MetricSpace, i: usize) -> Rational {
    assert_eq!(d.candidate_count(), instance.candidate_count(), "candidate count mismatch");
    assert_eq!(d.block_count(), instance.block_count(), "voter block count mismatch");
    instance
        .voters()
        .iter()
        .enumerate()
        .map(|(v, block)| &block.weight * d.dist(i, v))
        .sum()
}

/// True iff every voter block's ranking is non-increasing in preference and
/// non-decreasing in distance (ties allowed).
pub fn is_consistent(instance: &ElectionInstance, d: &MetricSpace) -> bool {
    is_consistent_tol(instance, d, &Rational::zero())
}

/// Consistency with slack, for binary64-derived witnesses.
pub fn is_consistent_tol(instance: &ElectionInstance, d: &MetricSpace, tol: &Rational) -> bool {
    instance.voters().iter().enumerate().all(|(v, block)| {
        block
            .ranking
            .windows(2)
            .all(|w| d.dist(w[0], v) <= &(d.dist(w[1], v) + tol))
    })
}

/// The biased metric for offsets `x`: for each voter block,
/// `d(i_star, v) = max over ranked pairs i above j of (x_i - x_j) / 2` and
/// `d(c, v) = d(i_star, v) + min over k ranked at-or-below c of x_k`.
pub fn biased_metric(instance: &ElectionInstance, x: &BiasedVector) -> MetricSpace {
    assert_eq!(x.len(), instance.candidate_count());
    let m = instance.candidate_count();
    let k = instance.block_count();
    let mut d = vec![vec![Rational::zero(); k]; m];
    let two = Rational::from_integer(2.into());
    for (v, block) in instance.voters().iter().enumerate() {
        // suffix minima of x along the ranking (candidate itself included)
        let mut suffix_min = vec![Rational::zero(); m];
        for (p, &c) in block.ranking.iter().enumerate().rev() {
            suffix_min[p] = if p + 1 < m {
                x.offset(c).min(&suffix_min[p + 1]).clone()
            } else {
                x.offset(c).clone()
            };
        }
        // max over ranked pairs (i above j) of x_i - x_j; at least 0 via i = j
        let mut max_gap = Rational::zero();
        for (p, &c) in block.ranking.iter().enumerate() {
            let gap = x.offset(c) - &suffix_min[p];
            if gap > max_gap {
                max_gap = gap;
            }
        }
        let base = max_gap / &two;
        for (p, &c) in block.ranking.iter().enumerate() {
            d[c][v] = &base + &suffix_min[p];
        }
    }
    MetricSpace::new(d).expect("biased metric entries are nonnegative")
}

/// A right-continuous, eventually-zero step function on `[0, ∞)`.
///
/// `levels[i]` applies on `[starts[i], starts[i+1])`; the final level
/// applies on `[starts.last(), ∞)` and must be zero for the integral to be
/// finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    starts: Vec<Rational>,
    levels: Vec<Rational>,
    integral: Rational,
}

impl StepFunction {
    fn new(starts: Vec<Rational>, levels: Vec<Rational>) -> Self {
        assert_eq!(starts.len(), levels.len());
        assert!(!starts.is_empty() && starts[0].is_zero(), "must start at 0");
        assert!(starts.windows(2).all(|w| w[0] < w[1]), "starts must increase");
        assert!(levels.last().unwrap().is_zero(), "final level must be 0");
        let integral = starts
            .windows(2)
            .zip(&levels)
            .map(|(w, level)| level * (&w[1] - &w[0]))
            .sum();
        StepFunction { starts, levels, integral }
    }

    pub fn starts(&self) -> &[Rational] {
        &self.starts
    }

    pub fn levels(&self) -> &[Rational] {
        &self.levels
    }

    pub fn integral(&self) -> &Rational {
        &self.integral
    }

    pub fn value_at(&self, t: &Rational) -> &Rational {
        assert!(!t.is_negative());
        match self.starts.binary_search(t) {
            Ok(idx) => &self.levels[idx],
            Err(idx) => &self.levels[idx - 1],
        }
    }
}

/// Builds a step function from unsorted `(threshold, weight)` jumps where
/// the function value at `t` is the total weight of thresholds `> t`.
fn survival_step(points: Vec<(Rational, Rational)>) -> StepFunction {
    let mut thresholds: Vec<Rational> =
        points.iter().filter(|(t, _)| t.is_positive()).map(|(t, _)| t.clone()).collect();
    thresholds.sort();
    thresholds.dedup();
    let mut starts = vec![Rational::zero()];
    starts.extend(thresholds);
    let levels = starts
        .iter()
        .map(|s| points.iter().filter(|(t, _)| t > s).map(|(_, w)| w.clone()).sum())
        .collect();
    StepFunction::new(starts, levels)
}

/// The cost curve of the reference candidate: `r(t)` is the weight of
/// voters with some ranked pair `i` above `j` and `x_i - x_j > t`. Its
/// integral `R` equals twice the social cost of `i_star` under the biased
/// metric.
pub fn r_curve(instance: &ElectionInstance, x: &BiasedVector) -> StepFunction {
    assert_eq!(x.len(), instance.candidate_count());
    let points = instance
        .voters()
        .iter()
        .map(|block| {
            let mut suffix_min: Option<Rational> = None;
            let mut max_gap = Rational::zero();
            for &c in block.ranking.iter().rev() {
                let sm = match suffix_min {
                    Some(ref prev) => x.offset(c).min(prev).clone(),
                    None => x.offset(c).clone(),
                };
                let gap = x.offset(c) - &sm;
                if gap > max_gap {
                    max_gap = gap;
                }
                suffix_min = Some(sm);
            }
            (max_gap, block.weight.clone())
        })
        .collect();
    survival_step(points)
}

/// The loss curve of a distribution: on each interval between consecutive
/// offset values, the level is `sum over j outside I_t of s[I_t > j] p_j`
/// where `I_t` is the set of candidates with offset at most `t`.
pub fn ell_curve(
    instance: &ElectionInstance,
    x: &BiasedVector,
    dist: &CandidateDistribution,
) -> StepFunction {
    assert_eq!(x.len(), instance.candidate_count());
    assert_eq!(dist.len(), instance.candidate_count());
    let m = instance.candidate_count();
    let p = dist.probs_exact();
    let mut starts: Vec<Rational> = x.offsets().to_vec();
    starts.push(Rational::zero());
    starts.sort();
    starts.dedup();
    let levels: Vec<Rational> = starts
        .iter()
        .map(|s| {
            let inside: Vec<usize> = (0..m).filter(|&c| x.offset(c) <= s).collect();
            let outside: Vec<usize> = (0..m).filter(|&c| x.offset(c) > s).collect();
            outside
                .iter()
                .map(|&j| {
                    let sij: Rational = instance
                        .voters()
                        .iter()
                        .enumerate()
                        .filter(|(v, _)| {
                            inside.iter().all(|&i| instance.prefers(*v, i, j))
                        })
                        .map(|(_, block)| block.weight.clone())
                        .sum();
                    sij * &p[j]
                })
                .sum()
        })
        .collect();
    StepFunction::new(starts, levels)
}

/// The crossing point of the cost curve with level `beta`, normalized by
/// `R`: returns `min { t : r(t) < beta } / R`, taking the rightmost point
/// of any flat intersection segment. Errors when `R = 0`.
pub fn alpha_of_beta(
    instance: &ElectionInstance,
    x: &BiasedVector,
    beta: &Rational,
) -> Result<Rational, MetricsError> {
    let r = r_curve(instance, x);
    let big_r = r.integral().clone();
    if big_r.is_zero() {
        return Err(MetricsError::DegenerateR);
    }
    let idx = r
        .levels()
        .iter()
        .position(|level| level < beta)
        .expect("final level is 0 < beta");
    Ok(&r.starts()[idx] / &big_r)
}

/// Checks the consistency parameterization: every candidate `k` with
/// `s[k][i_star] >= beta` must have offset `x_k <= alpha * R`.
pub fn check_ab_consistent(
    instance: &ElectionInstance,
    x: &BiasedVector,
    alpha: &Rational,
    beta: &Rational,
) -> bool {
    let margins = instance.margins(DiagonalMode::Zero);
    let d = biased_metric(instance, x);
    let big_r = social_cost(instance, &d, x.i_star()) * Rational::from_integer(2.into());
    let bound = alpha * &big_r;
    (0..instance.candidate_count())
        .filter(|&k| k != x.i_star() && margins.margin(k, x.i_star()) >= beta)
        .all(|k| *x.offset(k) <= bound)
}

/// Pairwise variant used by the two-pass independent-set rule: every pair
/// with `s[k][i] >= beta` must satisfy `x_k - x_i <= alpha * R`.
pub fn check_ab_consistent_pairwise(
    instance: &ElectionInstance,
    x: &BiasedVector,
    alpha: &Rational,
    beta: &Rational,
) -> bool {
    let margins = instance.margins(DiagonalMode::Zero);
    let d = biased_metric(instance, x);
    let big_r = social_cost(instance, &d, x.i_star()) * Rational::from_integer(2.into());
    let bound = alpha * &big_r;
    let m = instance.candidate_count();
    (0..m).all(|k| {
        (0..m)
            .filter(|&i| i != k && margins.margin(k, i) >= beta)
            .all(|i| x.offset(k) - x.offset(i) <= bound)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::gen_random;
    use crate::rational::{rat, rat_int};
    use crate::testutil::{fig1, rand_biased, rand_rational_dist};
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig1_metric() -> MetricSpace {
        // d(a,v1)=0, d(b,v1)=2, d(a,v2)=1, d(b,v2)=1
        MetricSpace::new(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(2), rat_int(1)],
        ])
        .unwrap()
    }

    #[test]
    fn social_cost_of_fig1_metric() {
        let e = fig1();
        let d = fig1_metric();
        assert_eq!(social_cost(&e, &d, 0), rat(1, 2));
        assert_eq!(social_cost(&e, &d, 1), rat(3, 2));
    }

    #[test]
    fn social_cost_all_zero_metric() {
        let e = fig1();
        let d = MetricSpace::new(vec![vec![rat_int(0); 2]; 2]).unwrap();
        assert!(social_cost(&e, &d, 0).is_zero());
        assert!(social_cost(&e, &d, 1).is_zero());
        assert!(is_consistent(&e, &d), "ties are allowed");
    }

    #[test]
    fn consistency_checks() {
        let e = fig1();
        assert!(is_consistent(&e, &fig1_metric()));
        let bad = MetricSpace::new(vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(0), rat_int(1)],
        ])
        .unwrap();
        assert!(!is_consistent(&e, &bad), "voter 0 ranks candidate 0 first");
    }

    #[test]
    fn biased_metric_on_fig1() {
        let e = fig1();
        let x = BiasedVector::new(vec![rat_int(0), rat_int(2)], 0).unwrap();
        let d = biased_metric(&e, &x);
        assert_eq!(*d.dist(0, 0), rat_int(0));
        assert_eq!(*d.dist(1, 0), rat_int(2));
        assert_eq!(*d.dist(0, 1), rat_int(1));
        assert_eq!(*d.dist(1, 1), rat_int(1));
    }

    #[test]
    fn biased_metric_all_zero_offsets() {
        let e = gen_random(4, 5, 11);
        let x = BiasedVector::new(vec![rat_int(0); 4], 2).unwrap();
        let d = biased_metric(&e, &x);
        assert!(d.rows().iter().all(|row| row.iter().all(|v| v.is_zero())));
    }

    #[test]
    fn biased_metric_is_valid_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let m = rng.gen_range(2..=5);
            let n = rng.gen_range(2..=6);
            let e = gen_random(m, n, rng.gen());
            let x = rand_biased(&e, &mut rng);
            let d = biased_metric(&e, &x);
            assert!(is_consistent(&e, &d));
            assert!(d.check_path_closure(&Rational::zero()).is_ok());
        }
    }

    #[test]
    fn r_curve_on_fig1() {
        let e = fig1();
        let x = BiasedVector::new(vec![rat_int(0), rat_int(2)], 0).unwrap();
        let r = r_curve(&e, &x);
        assert_eq!(r.starts(), &[rat_int(0), rat_int(2)]);
        assert_eq!(r.levels(), &[rat(1, 2), rat_int(0)]);
        assert_eq!(*r.integral(), rat_int(1));
        // R = 2 SC(i*)
        let d = biased_metric(&e, &x);
        assert_eq!(*r.integral(), social_cost(&e, &d, 0) * rat_int(2));
    }

    #[test]
    fn r_curve_zero_offsets() {
        let e = fig1();
        let x = BiasedVector::new(vec![rat_int(0), rat_int(0)], 0).unwrap();
        let r = r_curve(&e, &x);
        assert!(r.integral().is_zero());
        assert!(r.value_at(&rat_int(0)).is_zero());
    }

    #[test]
    fn ell_curve_on_fig1() {
        let e = fig1();
        let x = BiasedVector::new(vec![rat_int(0), rat_int(2)], 0).unwrap();
        let dist = CandidateDistribution::exact(vec![rat(1, 2), rat(1, 2)]);
        let ell = ell_curve(&e, &x, &dist);
        assert_eq!(*ell.integral(), rat(1, 2));
        // point mass on i_star is identically zero
        let pm = CandidateDistribution::point_mass(2, 0);
        let ell0 = ell_curve(&e, &x, &pm);
        assert!(ell0.integral().is_zero());
        assert!(ell0.levels().iter().all(|l| l.is_zero()));
    }

    #[test]
    fn integral_identities_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let two = rat_int(2);
        for _ in 0..60 {
            let m = rng.gen_range(2..=5);
            let n = rng.gen_range(2..=6);
            let e = gen_random(m, n, rng.gen());
            let x = rand_biased(&e, &mut rng);
            let dist = rand_rational_dist(m, &mut rng);
            let d = biased_metric(&e, &x);
            let sc_star = social_cost(&e, &d, x.i_star());
            assert_eq!(*r_curve(&e, &x).integral(), &sc_star * &two);
            let p = dist.probs_exact();
            let expected: Rational = (0..m)
                .map(|j| &p[j] * (social_cost(&e, &d, j) - &sc_star))
                .sum();
            assert_eq!(*ell_curve(&e, &x, &dist).integral(), expected);
        }
    }

    #[test]
    fn alpha_of_beta_on_fig1() {
        let e = fig1();
        let x = BiasedVector::new(vec![rat_int(0), rat_int(2)], 0).unwrap();
        // r(0) = 1/2 < 0.6, so the crossing is at t = 0
        assert_eq!(alpha_of_beta(&e, &x, &rat(3, 5)).unwrap(), rat_int(0));
        // r jumps below 0.4 only at t = 2; R = 1
        assert_eq!(alpha_of_beta(&e, &x, &rat(2, 5)).unwrap(), rat_int(2));
        let zero = BiasedVector::new(vec![rat_int(0), rat_int(0)], 0).unwrap();
        assert!(matches!(alpha_of_beta(&e, &zero, &rat(3, 5)), Err(MetricsError::DegenerateR)));
    }

    #[test]
    fn ab_consistency_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let e = gen_random(rng.gen_range(2..=5), rng.gen_range(2..=6), rng.gen());
            let x = rand_biased(&e, &mut rng);
            let beta = rat(rng.gen_range(51..100), 100);
            // all biased metrics are (1/beta, beta)-consistent
            assert!(check_ab_consistent(&e, &x, &beta.recip(), &beta));
            let zero =
                BiasedVector::new(vec![rat_int(0); e.candidate_count()], x.i_star()).unwrap();
            assert!(check_ab_consistent(&e, &zero, &rat_int(0), &beta));
            // alpha from the crossing point is consistent by construction
            if let Ok(alpha) = alpha_of_beta(&e, &x, &beta) {
                assert!(check_ab_consistent(&e, &x, &alpha, &beta));
                assert!(check_ab_consistent_pairwise(&e, &x, &alpha, &beta));
            }
        }
    }

    #[test]
    fn ab_consistency_fails_on_adversarial_family() {
        let beta = rat(7, 10);
        let e = crate::election::gen_radius_lb(&beta, 5).unwrap();
        let m = e.candidate_count();
        let x = BiasedVector::new(
            (0..m).map(|c| if c == 0 { rat_int(0) } else { rat_int(2) }).collect(),
            0,
        )
        .unwrap();
        // SC(best) = beta, R = 2 beta; the rival's offset 2 exceeds 0.01 R
        let d = biased_metric(&e, &x);
        assert_eq!(social_cost(&e, &d, 0), beta);
        assert!(!check_ab_consistent(&e, &x, &rat(1, 100), &beta));
    }

    #[test]
    fn metric_file_round_trip() {
        let d = fig1_metric();
        let parsed = MetricSpace::parse(&d.to_file_string()).unwrap();
        assert_eq!(parsed, d);
        assert!(MetricSpace::parse("2 2\n1 2\n3\n").is_err());
        assert!(MetricSpace::new(vec![vec![rat_int(-1)]]).is_err());
    }

    #[test]
    fn embedding_hardness_transfer() {
        // Metrics from explicit L1 point embeddings: lifting the
        // candidate-to-optimum distances into a biased vector never
        // decreases any cost gap and never increases the optimum's cost.
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..40 {
            let m = rng.gen_range(2..=5);
            let n = rng.gen_range(2..=6);
            let cand: Vec<(Rational, Rational)> =
                (0..m).map(|_| (rat(rng.gen_range(0..40), 8), rat(rng.gen_range(0..40), 8))).collect();
            let voter: Vec<(Rational, Rational)> =
                (0..n).map(|_| (rat(rng.gen_range(0..40), 8), rat(rng.gen_range(0..40), 8))).collect();
            let l1 = |a: &(Rational, Rational), b: &(Rational, Rational)| {
                (&a.0 - &b.0).abs() + (&a.1 - &b.1).abs()
            };
            let rows: Vec<Vec<Rational>> =
                cand.iter().map(|c| voter.iter().map(|v| l1(c, v)).collect()).collect();
            let voters = (0..n)
                .map(|v| {
                    let mut order: Vec<usize> = (0..m).collect();
                    order.sort_by(|&a, &b| rows[a][v].cmp(&rows[b][v]).then(a.cmp(&b)));
                    (Rational::one(), order)
                })
                .collect();
            let e = ElectionInstance::new(m, voters).unwrap();
            let d = MetricSpace::new(rows.clone()).unwrap();
            assert!(is_consistent(&e, &d));
            let i_star = (0..m)
                .min_by(|&a, &b| social_cost(&e, &d, a).cmp(&social_cost(&e, &d, b)))
                .unwrap();
            let x = BiasedVector::new(
                (0..m).map(|c| l1(&cand[c], &cand[i_star])).collect(),
                i_star,
            )
            .unwrap();
            let dhat = biased_metric(&e, &x);
            let sc = |metric: &MetricSpace, c: usize| social_cost(&e, metric, c);
            assert!(sc(&dhat, i_star) <= sc(&d, i_star));
            for j in 0..m {
                assert!(
                    sc(&dhat, j) - sc(&dhat, i_star) >= sc(&d, j) - sc(&d, i_star),
                    "gap shrank for candidate {j}"
                );
            }
        }
    }
}
