//! Zero-sum matrix games via the maximin LP.
//!
//! Small games (all the pairwise-majority games this crate builds at desk
//! scale) are solved in exact rational arithmetic, so returned equilibria
//! carry exact certificates. Larger games fall back to the sparse binary64
//! backend with a 1e-8 certificate check.

use num_traits::{Signed, Zero};

use crate::election::CandidateDistribution;
use crate::rational::{rat_to_f64, Rational};

use super::dense::{solve_dense, DenseOutcome};
use super::{solve_lp, LinearProgram, LpError, LpStatus, Relation};

/// Cap on the exact-arithmetic path; beyond this the binary64 backend is
/// used.
const EXACT_SIZE_LIMIT: usize = 32;

/// An equilibrium of a zero-sum matrix game; `value` is the row player's
/// guaranteed payoff.
#[derive(Debug, Clone)]
pub struct GameSolution {
    pub value: f64,
    pub row_strategy: CandidateDistribution,
    pub col_strategy: CandidateDistribution,
    /// Set when the game was solved exactly.
    pub exact_value: Option<Rational>,
}

impl GameSolution {
    /// Largest payoff any pure deviation gains over the equilibrium value,
    /// for either player. Nonpositive (up to solver noise) at equilibrium.
    pub fn best_response_gain(&self, payoff: &[Vec<Rational>]) -> f64 {
        let n = payoff.len();
        let row = self.row_strategy.probs_f64();
        let col = self.col_strategy.probs_f64();
        let payoff_f: Vec<Vec<f64>> =
            payoff.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect();
        // column player deviates: wants to push the row payoff low
        let col_gain = (0..n)
            .map(|j| {
                let v: f64 = (0..n).map(|i| row[i] * payoff_f[i][j]).sum();
                self.value - v
            })
            .fold(f64::NEG_INFINITY, f64::max);
        // row player deviates: wants payoff above the value
        let row_gain = (0..n)
            .map(|i| {
                let v: f64 = (0..n).map(|j| payoff_f[i][j] * col[j]).sum();
                v - self.value
            })
            .fold(f64::NEG_INFINITY, f64::max);
        col_gain.max(row_gain)
    }
}

/// Solves the zero-sum game with the given row-player payoff matrix.
pub fn solve_zero_sum(payoff: &[Vec<Rational>]) -> Result<GameSolution, LpError> {
    let n = payoff.len();
    assert!(n > 0 && payoff.iter().all(|r| r.len() == n), "square payoff matrix required");
    if n <= EXACT_SIZE_LIMIT {
        solve_exact(payoff)
    } else {
        solve_approx(payoff)
    }
}

fn solve_exact(payoff: &[Vec<Rational>]) -> Result<GameSolution, LpError> {
    let (value, row) = maximin_exact(payoff)?;
    let transposed_neg = transpose_neg(payoff);
    let (neg_value, col) = maximin_exact(&transposed_neg)?;
    debug_assert_eq!(value, -neg_value.clone(), "LP duality gap in exact arithmetic");
    // exact certificate: the row strategy guarantees `value` against every
    // pure column, and symmetrically for the column strategy
    let n = payoff.len();
    for j in 0..n {
        let got: Rational = (0..n).map(|i| &row[i] * &payoff[i][j]).sum();
        debug_assert!(got >= value, "row guarantee broken at column {j}");
    }
    for i in 0..n {
        let got: Rational = (0..n).map(|j| &payoff[i][j] * &col[j]).sum();
        debug_assert!(got <= value, "column guarantee broken at row {i}");
    }
    Ok(GameSolution {
        value: rat_to_f64(&value),
        row_strategy: CandidateDistribution::exact(row),
        col_strategy: CandidateDistribution::exact(col),
        exact_value: Some(value),
    })
}

/// Maximin LP for the row player: maximize `v` subject to
/// `sum_i p_i payoff[i][j] >= v` for every column `j` and `sum p = 1`.
/// Payoffs are shifted to be positive so `v >= 0` can be assumed.
fn maximin_exact(payoff: &[Vec<Rational>]) -> Result<(Rational, Vec<Rational>), LpError> {
    let n = payoff.len();
    let min_entry = payoff.iter().flatten().min().expect("nonempty");
    let shift = if min_entry.is_negative() || min_entry.is_zero() {
        Rational::from_integer(1.into()) - min_entry
    } else {
        Rational::zero()
    };
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = num_traits::One::one();
    let mut rows = Vec::with_capacity(n + 1);
    for j in 0..n {
        let mut coeffs = vec![Rational::zero(); n + 1];
        for i in 0..n {
            coeffs[i] = &payoff[i][j] + &shift;
        }
        coeffs[n] = -Rational::from_integer(1.into());
        rows.push((coeffs, Relation::Ge, Rational::zero()));
    }
    let mut coeffs = vec![Rational::from_integer(1.into()); n];
    coeffs.push(Rational::zero());
    rows.push((coeffs, Relation::Eq, num_traits::One::one()));
    match solve_dense(n + 1, &objective, &rows) {
        Ok(DenseOutcome::Optimal { value, mut solution }) => {
            solution.truncate(n);
            Ok((value - shift, solution))
        }
        Ok(other) => Err(LpError::Numerical(format!("maximin LP returned {other:?}"))),
        Err(e) => Err(LpError::Numerical(e.to_string())),
    }
}

fn transpose_neg(payoff: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = payoff.len();
    (0..n)
        .map(|j| (0..n).map(|i| -payoff[i][j].clone()).collect())
        .collect()
}

fn solve_approx(payoff: &[Vec<Rational>]) -> Result<GameSolution, LpError> {
    let payoff_f: Vec<Vec<f64>> =
        payoff.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect();
    let value = maximin_approx(&payoff_f, true)?;
    let neg_t: Vec<Vec<f64>> = {
        let n = payoff_f.len();
        (0..n).map(|j| (0..n).map(|i| -payoff_f[i][j]).collect()).collect()
    };
    let col_value = maximin_approx(&neg_t, true)?;
    let solution = GameSolution {
        value: value.0,
        row_strategy: CandidateDistribution::approx(value.1),
        col_strategy: CandidateDistribution::approx(col_value.1),
        exact_value: None,
    };
    let gain = solution.best_response_gain(payoff);
    if gain > 1e-8 {
        return Err(LpError::Numerical(format!(
            "equilibrium certificate failed: best response gains {gain:.3e}"
        )));
    }
    Ok(solution)
}

fn maximin_approx(payoff: &[Vec<f64>], normalize: bool) -> Result<(f64, Vec<f64>), LpError> {
    let n = payoff.len();
    let min_entry = payoff.iter().flatten().cloned().fold(f64::INFINITY, f64::min);
    let shift = if min_entry <= 0.0 { 1.0 - min_entry } else { 0.0 };
    let mut lp = LinearProgram::new();
    for _ in 0..n {
        lp.add_var(0.0);
    }
    let v = lp.add_var(1.0);
    for j in 0..n {
        let mut terms: Vec<(usize, f64)> =
            (0..n).map(|i| (i, payoff[i][j] + shift)).collect();
        terms.push((v, -1.0));
        lp.add_constraint(terms, Relation::Ge, 0.0);
    }
    lp.add_constraint((0..n).map(|i| (i, 1.0)).collect(), Relation::Eq, 1.0);
    let out = solve_lp(&lp)?;
    if out.status != LpStatus::Optimal {
        return Err(LpError::Numerical(format!("maximin LP status {:?}", out.status)));
    }
    let mut strategy: Vec<f64> = out.solution[..n].to_vec();
    if normalize {
        for p in strategy.iter_mut() {
            *p = p.max(0.0);
        }
        let total: f64 = strategy.iter().sum();
        for p in strategy.iter_mut() {
            *p /= total;
        }
    }
    Ok((out.value - shift, strategy))
}
