//! Dense two-phase simplex, generic over the scalar.
//!
//! Used in exact rational mode for small problems (pairwise-majority games,
//! reference solutions) and in binary64 mode as a cross-check for the
//! sparse production backend. Bland's rule keeps it cycle-free; problem
//! sizes here are tiny, so the O(rows*cols) pivots are irrelevant.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Signed;

use crate::rational::Rational;

use super::Relation;

pub trait SimplexScalar:
    Clone
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Comparison tolerance; exactly zero for exact scalars.
    fn eps() -> Self;
    fn abs_val(&self) -> Self;
}

impl SimplexScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn eps() -> Self {
        1e-9
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl SimplexScalar for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn eps() -> Self {
        num_traits::Zero::zero()
    }
    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DenseOutcome<T> {
    Optimal { value: T, solution: Vec<T> },
    Infeasible,
    Unbounded,
}

#[derive(Debug, thiserror::Error)]
#[error("simplex failed to converge within the iteration cap")]
pub struct DenseError;

/// Maximizes `objective . x` subject to `rows` and `x >= 0`.
pub fn solve_dense<T: SimplexScalar>(
    num_vars: usize,
    objective: &[T],
    rows: &[(Vec<T>, Relation, T)],
) -> Result<DenseOutcome<T>, DenseError> {
    assert_eq!(objective.len(), num_vars);
    let m = rows.len();
    // Normalize to nonnegative right-hand sides.
    let mut norm: Vec<(Vec<T>, Relation, T)> = Vec::with_capacity(m);
    for (coeffs, rel, rhs) in rows {
        assert_eq!(coeffs.len(), num_vars);
        if *rhs < T::zero() {
            let flipped = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            norm.push((
                coeffs.iter().map(|c| -c.clone()).collect(),
                flipped,
                -rhs.clone(),
            ));
        } else {
            norm.push((coeffs.clone(), *rel, rhs.clone()));
        }
    }
    // Column layout: structural | slack/surplus | artificial.
    let mut n_slack = 0usize;
    let mut n_art = 0usize;
    for (_, rel, _) in &norm {
        match rel {
            Relation::Le => n_slack += 1,
            Relation::Ge => {
                n_slack += 1;
                n_art += 1;
            }
            Relation::Eq => n_art += 1,
        }
    }
    let total = num_vars + n_slack + n_art;
    let mut tableau: Vec<Vec<T>> = vec![vec![T::zero(); total + 1]; m];
    let mut basis: Vec<usize> = vec![0; m];
    let mut art_cols: Vec<usize> = Vec::with_capacity(n_art);
    let mut slack_idx = num_vars;
    let mut art_idx = num_vars + n_slack;
    for (r, (coeffs, rel, rhs)) in norm.iter().enumerate() {
        for (c, v) in coeffs.iter().enumerate() {
            tableau[r][c] = v.clone();
        }
        tableau[r][total] = rhs.clone();
        match rel {
            Relation::Le => {
                tableau[r][slack_idx] = T::one();
                basis[r] = slack_idx;
                slack_idx += 1;
            }
            Relation::Ge => {
                tableau[r][slack_idx] = -T::one();
                slack_idx += 1;
                tableau[r][art_idx] = T::one();
                basis[r] = art_idx;
                art_cols.push(art_idx);
                art_idx += 1;
            }
            Relation::Eq => {
                tableau[r][art_idx] = T::one();
                basis[r] = art_idx;
                art_cols.push(art_idx);
                art_idx += 1;
            }
        }
    }

    let iter_cap = 200 + 50 * (m + total);

    if n_art > 0 {
        // Phase 1: maximize -sum(artificials).
        let mut cost = vec![T::zero(); total];
        for &c in &art_cols {
            cost[c] = -T::one();
        }
        let mut obj_row = reduced_costs(&tableau, &basis, &cost, total);
        run_simplex(&mut tableau, &mut basis, &mut obj_row, total, iter_cap, None)?;
        let phase1: T = basis
            .iter()
            .zip(tableau.iter())
            .filter(|(b, _)| art_cols.contains(b))
            .map(|(_, row)| row[total].clone())
            .fold(T::zero(), |acc, v| acc + v);
        if phase1 > T::eps() {
            return Ok(DenseOutcome::Infeasible);
        }
        // Pivot remaining artificials out of the basis where possible.
        for r in 0..m {
            if art_cols.contains(&basis[r]) {
                if let Some(c) = (0..num_vars + n_slack)
                    .find(|&c| tableau[r][c].abs_val() > T::eps())
                {
                    pivot(&mut tableau, &mut basis, r, c);
                }
            }
        }
    }

    // Phase 2 with the real objective; artificial columns are barred.
    let mut cost = vec![T::zero(); total];
    for (c, v) in objective.iter().enumerate() {
        cost[c] = v.clone();
    }
    let mut obj_row = reduced_costs(&tableau, &basis, &cost, total);
    let barred: Vec<usize> = art_cols;
    let unbounded =
        run_simplex(&mut tableau, &mut basis, &mut obj_row, total, iter_cap, Some(&barred))?;
    if unbounded {
        return Ok(DenseOutcome::Unbounded);
    }
    let mut solution = vec![T::zero(); num_vars];
    for (r, &b) in basis.iter().enumerate() {
        if b < num_vars {
            solution[b] = tableau[r][total].clone();
        }
    }
    let value = objective
        .iter()
        .zip(&solution)
        .map(|(c, x)| c.clone() * x.clone())
        .fold(T::zero(), |acc, v| acc + v);
    Ok(DenseOutcome::Optimal { value, solution })
}

/// Reduced-cost row `c_j - c_B B^{-1} A_j` for the current basis.
fn reduced_costs<T: SimplexScalar>(
    tableau: &[Vec<T>],
    basis: &[usize],
    cost: &[T],
    total: usize,
) -> Vec<T> {
    let mut row = vec![T::zero(); total + 1];
    for (c, v) in cost.iter().enumerate() {
        row[c] = v.clone();
    }
    for (r, &b) in basis.iter().enumerate() {
        if cost[b] != T::zero() {
            let factor = cost[b].clone();
            for c in 0..=total {
                row[c] = row[c].clone() - factor.clone() * tableau[r][c].clone();
            }
        }
    }
    row
}

/// Bland's rule iterations. Returns true when the objective is unbounded.
fn run_simplex<T: SimplexScalar>(
    tableau: &mut Vec<Vec<T>>,
    basis: &mut Vec<usize>,
    obj_row: &mut Vec<T>,
    total: usize,
    iter_cap: usize,
    barred: Option<&[usize]>,
) -> Result<bool, DenseError> {
    for _ in 0..iter_cap {
        let entering = (0..total).find(|&c| {
            obj_row[c] > T::eps() && barred.map_or(true, |b| !b.contains(&c))
        });
        let Some(col) = entering else {
            return Ok(false);
        };
        let mut leave: Option<(usize, T)> = None;
        for r in 0..tableau.len() {
            if tableau[r][col] > T::eps() {
                let ratio = tableau[r][total].clone() / tableau[r][col].clone();
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Ok(true);
        };
        pivot_with_obj(tableau, basis, obj_row, row, col);
    }
    Err(DenseError)
}

fn pivot_with_obj<T: SimplexScalar>(
    tableau: &mut [Vec<T>],
    basis: &mut [usize],
    obj_row: &mut [T],
    row: usize,
    col: usize,
) {
    let total = tableau[0].len() - 1;
    let pivot_val = tableau[row][col].clone();
    for c in 0..=total {
        tableau[row][c] = tableau[row][c].clone() / pivot_val.clone();
    }
    for r in 0..tableau.len() {
        if r != row && tableau[r][col] != T::zero() {
            let factor = tableau[r][col].clone();
            for c in 0..=total {
                tableau[r][c] = tableau[r][c].clone() - factor.clone() * tableau[row][c].clone();
            }
        }
    }
    if obj_row[col] != T::zero() {
        let factor = obj_row[col].clone();
        for c in 0..=total {
            obj_row[c] = obj_row[c].clone() - factor.clone() * tableau[row][c].clone();
        }
    }
    basis[row] = col;
}

fn pivot<T: SimplexScalar>(tableau: &mut [Vec<T>], basis: &mut [usize], row: usize, col: usize) {
    let total = tableau[0].len() - 1;
    let pivot_val = tableau[row][col].clone();
    for c in 0..=total {
        tableau[row][c] = tableau[row][c].clone() / pivot_val.clone();
    }
    for r in 0..tableau.len() {
        if r != row && tableau[r][col] != T::zero() {
            let factor = tableau[r][col].clone();
            for c in 0..=total {
                tableau[r][c] = tableau[r][c].clone() - factor.clone() * tableau[row][c].clone();
            }
        }
    }
    basis[row] = col;
}
