//! Linear-programming substrate: a generic LP front end backed by a sparse
//! revised simplex, a dense reference simplex, and a zero-sum matrix-game
//! solver on top of them.

pub mod dense;
mod zero_sum;

pub use dense::{solve_dense, DenseOutcome, SimplexScalar};
pub use zero_sum::{solve_zero_sum, GameSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    /// Sparse `(variable, coefficient)` terms.
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A maximization LP with per-variable bounds (default `[0, ∞)`).
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    objective: Vec<f64>,
    bounds: Vec<(f64, f64)>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Objective value; meaningful only when `status == Optimal`.
    pub value: f64,
    /// Variable values; empty unless `status == Optimal`.
    pub solution: Vec<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum LpError {
    #[error("non-finite coefficient in {0}")]
    NonFinite(String),
    #[error("LP solver failure: {0}")]
    Numerical(String),
}

impl LinearProgram {
    pub fn new() -> Self {
        LinearProgram::default()
    }

    pub fn add_var(&mut self, objective: f64) -> usize {
        self.add_var_bounded(objective, 0.0, f64::INFINITY)
    }

    pub fn add_var_bounded(&mut self, objective: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(objective);
        self.bounds.push((lower, upper));
        self.objective.len() - 1
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, f64)>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint { terms, relation, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        for (idx, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(LpError::NonFinite(format!("constraint {idx} rhs")));
            }
            for &(var, coef) in &c.terms {
                if var >= self.num_vars() {
                    return Err(LpError::Numerical(format!(
                        "constraint {idx} references unknown variable {var}"
                    )));
                }
                if !coef.is_finite() {
                    return Err(LpError::NonFinite(format!("constraint {idx}")));
                }
            }
        }
        Ok(())
    }
}

fn to_microlp(lp: &LinearProgram) -> (microlp::Problem, Vec<microlp::Variable>) {
    let mut problem = microlp::Problem::new(microlp::OptimizationDirection::Maximize);
    let vars: Vec<microlp::Variable> = lp
        .objective
        .iter()
        .zip(&lp.bounds)
        .map(|(&obj, &(lo, hi))| problem.add_var(obj, (lo, hi)))
        .collect();
    for c in &lp.constraints {
        let expr: Vec<(microlp::Variable, f64)> =
            c.terms.iter().map(|&(v, coef)| (vars[v], coef)).collect();
        let op = match c.relation {
            Relation::Le => microlp::ComparisonOp::Le,
            Relation::Eq => microlp::ComparisonOp::Eq,
            Relation::Ge => microlp::ComparisonOp::Ge,
        };
        problem.add_constraint(expr, op, c.rhs);
    }
    (problem, vars)
}

/// Solves with the sparse revised-simplex backend. Statuses are reported,
/// never silently wrong: a solver breakdown surfaces as `LpError`.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let (problem, vars) = to_microlp(lp);
    match problem.solve() {
        Ok(solution) => {
            let values: Vec<f64> = vars.iter().map(|v| *solution.var_value(*v)).collect();
            Ok(LpOutcome { status: LpStatus::Optimal, value: solution.objective(), solution: values })
        }
        Err(microlp::Error::Infeasible) => {
            Ok(LpOutcome { status: LpStatus::Infeasible, value: f64::NAN, solution: vec![] })
        }
        Err(microlp::Error::Unbounded) => {
            Ok(LpOutcome { status: LpStatus::Unbounded, value: f64::INFINITY, solution: vec![] })
        }
        Err(microlp::Error::InternalError(msg)) => Err(LpError::Numerical(msg)),
    }
}

/// An LP that accepts additional constraints after solving, re-solving
/// incrementally. Used for lazy row generation in the distortion oracle.
pub struct IncrementalSolver {
    vars: Vec<microlp::Variable>,
    state: IncrementalState,
}

enum IncrementalState {
    Fresh(microlp::Problem),
    Solved(microlp::Solution),
    Failed,
}

impl IncrementalSolver {
    pub fn new(lp: &LinearProgram) -> Result<Self, LpError> {
        lp.validate()?;
        let (problem, vars) = to_microlp(lp);
        Ok(IncrementalSolver { vars, state: IncrementalState::Fresh(problem) })
    }

    fn outcome_from(&self, result: Result<microlp::Solution, microlp::Error>) -> Result<(IncrementalState, LpOutcome), LpError> {
        match result {
            Ok(solution) => {
                let values: Vec<f64> =
                    self.vars.iter().map(|v| *solution.var_value(*v)).collect();
                let outcome = LpOutcome {
                    status: LpStatus::Optimal,
                    value: solution.objective(),
                    solution: values,
                };
                Ok((IncrementalState::Solved(solution), outcome))
            }
            Err(microlp::Error::Infeasible) => Ok((
                IncrementalState::Failed,
                LpOutcome { status: LpStatus::Infeasible, value: f64::NAN, solution: vec![] },
            )),
            Err(microlp::Error::Unbounded) => Ok((
                IncrementalState::Failed,
                LpOutcome { status: LpStatus::Unbounded, value: f64::INFINITY, solution: vec![] },
            )),
            Err(microlp::Error::InternalError(msg)) => Err(LpError::Numerical(msg)),
        }
    }

    pub fn solve(&mut self) -> Result<LpOutcome, LpError> {
        let state = std::mem::replace(&mut self.state, IncrementalState::Failed);
        let result = match state {
            IncrementalState::Fresh(problem) => problem.solve(),
            IncrementalState::Solved(solution) => Ok(solution),
            IncrementalState::Failed => {
                return Err(LpError::Numerical("solver in failed state".into()))
            }
        };
        let (state, outcome) = self.outcome_from(result)?;
        self.state = state;
        Ok(outcome)
    }

    /// Adds one constraint and re-solves from the previous basis.
    pub fn add_constraint(
        &mut self,
        terms: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> Result<LpOutcome, LpError> {
        let state = std::mem::replace(&mut self.state, IncrementalState::Failed);
        let solution = match state {
            IncrementalState::Fresh(problem) => {
                self.state = IncrementalState::Fresh(problem);
                self.solve()?;
                match std::mem::replace(&mut self.state, IncrementalState::Failed) {
                    IncrementalState::Solved(s) => s,
                    _ => return Err(LpError::Numerical("base LP not optimal".into())),
                }
            }
            IncrementalState::Solved(s) => s,
            IncrementalState::Failed => {
                return Err(LpError::Numerical("solver in failed state".into()))
            }
        };
        let expr: Vec<(microlp::Variable, f64)> =
            terms.into_iter().map(|(v, coef)| (self.vars[v], coef)).collect();
        let op = match relation {
            Relation::Le => microlp::ComparisonOp::Le,
            Relation::Eq => microlp::ComparisonOp::Eq,
            Relation::Ge => microlp::ComparisonOp::Ge,
        };
        let result = solution.add_constraint(expr, op, rhs);
        let (state, outcome) = self.outcome_from(result)?;
        self.state = state;
        Ok(outcome)
    }
}

/// Dense reference solve of the same LP (binary64 two-phase simplex).
/// Variable bounds other than `[0, ∞)` become explicit rows.
pub fn solve_lp_dense(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![0.0; n];
        for &(v, coef) in &c.terms {
            coeffs[v] += coef;
        }
        rows.push((coeffs, c.relation, c.rhs));
    }
    for (v, &(lo, hi)) in lp.bounds.iter().enumerate() {
        if lo != 0.0 {
            let mut coeffs = vec![0.0; n];
            coeffs[v] = 1.0;
            rows.push((coeffs, Relation::Ge, lo));
        }
        if hi.is_finite() {
            let mut coeffs = vec![0.0; n];
            coeffs[v] = 1.0;
            rows.push((coeffs, Relation::Le, hi));
        }
    }
    let objective: Vec<f64> = lp.objective.clone();
    match solve_dense(n, &objective, &rows) {
        Ok(DenseOutcome::Optimal { value, solution }) => {
            Ok(LpOutcome { status: LpStatus::Optimal, value, solution })
        }
        Ok(DenseOutcome::Infeasible) => {
            Ok(LpOutcome { status: LpStatus::Infeasible, value: f64::NAN, solution: vec![] })
        }
        Ok(DenseOutcome::Unbounded) => {
            Ok(LpOutcome { status: LpStatus::Unbounded, value: f64::INFINITY, solution: vec![] })
        }
        Err(e) => Err(LpError::Numerical(e.to_string())),
    }
}
