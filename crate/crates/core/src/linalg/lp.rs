//! Exact two-phase simplex over an [`ExactScalar`] field.
//!
//! Problems are in equality standard form: `A x = b`, `x ≥ 0`, optionally
//! maximising `cᵀx`. Pivoting follows Bland's rule, so the method terminates on
//! degenerate problems (and the decoder LPs here are highly degenerate).
//!
//! Every answer carries something checkable:
//! * feasible: a witness `x` with `A x = b` exactly;
//! * infeasible: a Farkas vector `y` with `yᵀA ≤ 0` and `yᵀb > 0`;
//! * optimal: the dual `y` with `yᵀA ≥ c` and `yᵀb` equal to the optimum.

use serde::Serialize;

use super::{Matrix, Vector};
use crate::error::{AlcError, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem<T> {
    pub constraint_matrix: Matrix<T>,
    pub rhs: Vector<T>,
    pub objective: Option<Vector<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    pub witness: Option<Vector<T>>,
    pub certificate: Option<Vector<T>>,
    pub value: Option<T>,
}

impl<T: ExactScalar> LpProblem<T> {
    pub fn feasibility(constraint_matrix: Matrix<T>, rhs: Vector<T>) -> Self {
        Self {
            constraint_matrix,
            rhs,
            objective: None,
        }
    }

    pub fn maximize(constraint_matrix: Matrix<T>, rhs: Vector<T>, objective: Vector<T>) -> Self {
        Self {
            constraint_matrix,
            rhs,
            objective: Some(objective),
        }
    }

    pub fn num_constraints(&self) -> usize {
        self.constraint_matrix.rows()
    }

    pub fn num_variables(&self) -> usize {
        self.constraint_matrix.cols()
    }

    fn check_dims(&self) -> Result<()> {
        let (m, n) = self.constraint_matrix.shape();
        if self.rhs.len() != m {
            return Err(AlcError::MalformedLp(format!(
                "rhs has length {} but the constraint matrix has {m} rows",
                self.rhs.len()
            )));
        }
        if let Some(c) = &self.objective {
            if c.len() != n {
                return Err(AlcError::MalformedLp(format!(
                    "objective has length {} but there are {n} variables",
                    c.len()
                )));
            }
        }
        Ok(())
    }

    /// `yᵀA`.
    fn row_combination(&self, y: &Vector<T>) -> Vec<T> {
        let a = &self.constraint_matrix;
        (0..a.cols())
            .map(|j| {
                (0..a.rows()).fold(T::zero(), |acc, i| {
                    acc + y[i].clone() * a[(i, j)].clone()
                })
            })
            .collect()
    }

    /// True if `x ≥ 0` and `A x = b` hold exactly.
    pub fn is_witness(&self, x: &Vector<T>) -> bool {
        if x.len() != self.num_variables() || x.iter().any(|v| *v < T::zero()) {
            return false;
        }
        self.constraint_matrix
            .mul_vec(x)
            .map(|ax| ax == self.rhs)
            .unwrap_or(false)
    }

    /// True if `yᵀA ≤ 0` and `yᵀb > 0` hold exactly.
    pub fn is_farkas_certificate(&self, y: &Vector<T>) -> bool {
        if y.len() != self.num_constraints() {
            return false;
        }
        let ya = self.row_combination(y);
        let yb = y.dot(&self.rhs).expect("length checked");
        ya.iter().all(|v| *v <= T::zero()) && yb > T::zero()
    }

    /// True if `y` is dual feasible (`yᵀA ≥ c`) with `yᵀb = value`.
    pub fn is_optimality_certificate(&self, y: &Vector<T>, value: &T) -> bool {
        let Some(c) = &self.objective else {
            return false;
        };
        if y.len() != self.num_constraints() {
            return false;
        }
        let ya = self.row_combination(y);
        let yb = y.dot(&self.rhs).expect("length checked");
        ya.iter().zip(c.iter()).all(|(l, r)| l >= r) && yb == *value
    }
}

impl<T: ExactScalar> LpOutcome<T> {
    /// Re-checks every claim the outcome makes against `problem`.
    pub fn verify(&self, problem: &LpProblem<T>) -> bool {
        match self.status {
            LpStatus::Feasible => {
                let Some(x) = &self.witness else {
                    return false;
                };
                if !problem.is_witness(x) {
                    return false;
                }
                match (&problem.objective, &self.value, &self.certificate) {
                    (None, _, _) => true,
                    (Some(c), Some(v), Some(y)) => {
                        x.dot(c).map(|cx| cx == *v).unwrap_or(false)
                            && problem.is_optimality_certificate(y, v)
                    }
                    _ => false,
                }
            }
            LpStatus::Infeasible => self
                .certificate
                .as_ref()
                .is_some_and(|y| problem.is_farkas_certificate(y)),
            LpStatus::Unbounded => problem.objective.is_some(),
        }
    }
}

/// Decides `A x = b, x ≥ 0`.
pub fn solve_feasibility<T: ExactScalar>(problem: &LpProblem<T>) -> Result<LpOutcome<T>> {
    problem.check_dims()?;
    if problem.objective.is_some() {
        return Err(AlcError::MalformedLp(
            "feasibility problems take no objective".into(),
        ));
    }
    let mut tab = Tableau::new(problem);
    match tab.phase_one() {
        PhaseOne::Infeasible(y) => Ok(LpOutcome {
            status: LpStatus::Infeasible,
            witness: None,
            certificate: Some(y),
            value: None,
        }),
        PhaseOne::Feasible => Ok(LpOutcome {
            status: LpStatus::Feasible,
            witness: Some(tab.primal()),
            certificate: None,
            value: None,
        }),
    }
}

/// Maximises `cᵀx` subject to `A x = b, x ≥ 0`.
pub fn solve_lp_max<T: ExactScalar>(problem: &LpProblem<T>) -> Result<LpOutcome<T>> {
    problem.check_dims()?;
    let Some(objective) = &problem.objective else {
        return Err(AlcError::MalformedLp(
            "maximisation requires an objective".into(),
        ));
    };
    let mut tab = Tableau::new(problem);
    if let PhaseOne::Infeasible(y) = tab.phase_one() {
        return Ok(LpOutcome {
            status: LpStatus::Infeasible,
            witness: None,
            certificate: Some(y),
            value: None,
        });
    }
    match tab.phase_two(objective) {
        PhaseTwo::Unbounded => Ok(LpOutcome {
            status: LpStatus::Unbounded,
            witness: None,
            certificate: None,
            value: None,
        }),
        PhaseTwo::Optimal { value, dual } => Ok(LpOutcome {
            status: LpStatus::Feasible,
            witness: Some(tab.primal()),
            certificate: Some(dual),
            value: Some(value),
        }),
    }
}

enum PhaseOne<T> {
    Feasible,
    Infeasible(Vector<T>),
}

enum PhaseTwo<T> {
    Unbounded,
    Optimal { value: T, dual: Vector<T> },
}

/// Dense tableau `B⁻¹[A | I | b]` with one artificial per row. The artificial
/// block always holds `B⁻¹`, which is where dual vectors are read from.
struct Tableau<T> {
    m: usize,
    n: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    /// Reduced costs for all `n + m` columns.
    cost: Vec<T>,
    /// Negated objective value of the current basis.
    cost_rhs: T,
    basis: Vec<usize>,
    /// `-1` for rows negated so that `b ≥ 0`.
    flipped: Vec<bool>,
}

impl<T: ExactScalar> Tableau<T> {
    fn new(problem: &LpProblem<T>) -> Self {
        let (m, n) = problem.constraint_matrix.shape();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut flipped = Vec::with_capacity(m);
        for i in 0..m {
            let neg = problem.rhs[i] < T::zero();
            let mut row: Vec<T> = problem.constraint_matrix.row(i).to_vec();
            let mut b = problem.rhs[i].clone();
            if neg {
                row.iter_mut().for_each(|v| *v = -v.clone());
                b = -b;
            }
            row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
            rows.push(row);
            rhs.push(b);
            flipped.push(neg);
        }
        Self {
            m,
            n,
            rows,
            rhs,
            cost: vec![T::zero(); n + m],
            cost_rhs: T::zero(),
            basis: (n..n + m).collect(),
            flipped,
        }
    }

    fn sign(&self, i: usize) -> T {
        if self.flipped[i] {
            -T::one()
        } else {
            T::one()
        }
    }

    /// Loads costs `c` (length `n + m`) and prices out the current basis.
    fn set_costs(&mut self, c: &[T]) {
        self.cost = c.to_vec();
        self.cost_rhs = T::zero();
        for i in 0..self.m {
            let cb = c[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                self.cost[j] = self.cost[j].clone() - cb.clone() * v.clone();
            }
            self.cost_rhs = self.cost_rhs.clone() - cb * self.rhs[i].clone();
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v = v.clone() / p.clone();
            }
            self.rhs[r] = self.rhs[r].clone() / p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.rows[i][col].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let f = self.cost[col].clone();
        if !f.is_zero() {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.cost_rhs = self.cost_rhs.clone() - f * pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Bland's-rule primal simplex over columns `< limit`. Returns `false`
    /// when an entering column has no positive entry (unbounded).
    fn run(&mut self, limit: usize) -> bool {
        loop {
            let Some(col) = (0..limit).find(|&j| self.cost[j] < T::zero()) else {
                return true;
            };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][col];
                if *a <= T::zero() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }

    fn phase_one(&mut self) -> PhaseOne<T> {
        let (n, m) = (self.n, self.m);
        let costs: Vec<T> = (0..n + m)
            .map(|j| if j < n { T::zero() } else { T::one() })
            .collect();
        self.set_costs(&costs);
        let bounded = self.run(n + m);
        debug_assert!(bounded, "phase one is bounded below by zero");
        let infeasibility = -self.cost_rhs.clone();
        if infeasibility > T::zero() {
            // artificial reduced cost is 1 - y_i
            let y = (0..m)
                .map(|i| (T::one() - self.cost[n + i].clone()) * self.sign(i))
                .collect();
            return PhaseOne::Infeasible(Vector::new(y));
        }
        // Drive zero-valued artificials out of the basis where possible; rows
        // where no original column is nonzero are redundant and keep theirs.
        for r in 0..m {
            if self.basis[r] >= n {
                if let Some(col) = (0..n).find(|&j| !self.rows[r][j].is_zero()) {
                    self.pivot(r, col);
                }
            }
        }
        PhaseOne::Feasible
    }

    fn phase_two(&mut self, objective: &Vector<T>) -> PhaseTwo<T> {
        let (n, m) = (self.n, self.m);
        // minimise -c; artificials cost nothing and never re-enter
        let costs: Vec<T> = (0..n + m)
            .map(|j| if j < n { -objective[j].clone() } else { T::zero() })
            .collect();
        self.set_costs(&costs);
        if !self.run(n) {
            return PhaseTwo::Unbounded;
        }
        let value = self.cost_rhs.clone();
        let dual = (0..m)
            .map(|i| self.cost[n + i].clone() * self.sign(i))
            .collect();
        PhaseTwo::Optimal {
            value,
            dual: Vector::new(dual),
        }
    }

    fn primal(&self) -> Vector<T> {
        let mut x = Vector::zeros(self.n);
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::{RMatrix, RVector, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mat(rows: usize, cols: usize, v: &[i64]) -> RMatrix {
        RMatrix::from_ratios(rows, cols, v, 1)
    }

    #[test]
    fn identity_system_is_feasible() {
        let p = LpProblem::feasibility(mat(2, 2, &[1, 0, 0, 1]), RVector::from_ratios(&[1, 2], 1));
        let out = solve_feasibility(&p).unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        assert_eq!(out.witness.clone().unwrap().into_vec(), vec![q(1), q(2)]);
        assert!(out.verify(&p));
    }

    #[test]
    fn negative_requirement_is_infeasible_with_certificate() {
        // x1 + x2 = -1 has no nonnegative solution
        let p = LpProblem::feasibility(mat(1, 2, &[1, 1]), RVector::from_ratios(&[-1], 1));
        let out = solve_feasibility(&p).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(out.verify(&p));
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        let p = LpProblem::feasibility(
            mat(3, 3, &[1, 1, 0, 2, 2, 0, 0, 1, 1]),
            RVector::from_ratios(&[1, 2, 1], 1),
        );
        let out = solve_feasibility(&p).unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        assert!(out.verify(&p));
    }

    #[test]
    fn maximize_simple() {
        let p = LpProblem::maximize(
            mat(1, 2, &[1, 1]),
            RVector::from_ratios(&[1], 1),
            RVector::from_ratios(&[1, 0], 1),
        );
        let out = solve_lp_max(&p).unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        assert_eq!(out.value, Some(q(1)));
        assert_eq!(out.witness.clone().unwrap().into_vec(), vec![q(1), q(0)]);
        assert!(out.verify(&p));
    }

    #[test]
    fn maximize_over_infeasible_region() {
        let p = LpProblem::maximize(
            mat(2, 1, &[1, 1]),
            RVector::from_ratios(&[1, 2], 1),
            RVector::from_ratios(&[0], 1),
        );
        let out = solve_lp_max(&p).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(out.verify(&p));
    }

    #[test]
    fn unbounded_is_detected() {
        let p = LpProblem::maximize(
            mat(1, 2, &[1, -1]),
            RVector::from_ratios(&[0], 1),
            RVector::from_ratios(&[1, 0], 1),
        );
        assert_eq!(solve_lp_max(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn malformed_problems_are_rejected() {
        let p = LpProblem::feasibility(mat(1, 2, &[1, 1]), RVector::from_ratios(&[1, 1], 1));
        assert!(solve_feasibility(&p).is_err());
        let p = LpProblem::feasibility(mat(1, 2, &[1, 1]), RVector::from_ratios(&[1], 1));
        assert!(solve_lp_max(&p).is_err());
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's cycling example (max form) in equality form with slacks;
        // optimum x1 = x3 = 1.
        let a = RMatrix::from_ratios(
            3,
            7,
            &[
                1, -32, -4, 36, 4, 0, 0, //
                2, -48, -2, 12, 0, 4, 0, //
                0, 0, 4, 0, 0, 0, 4,
            ],
            4,
        );
        let b = RVector::from_ratios(&[0, 0, 1], 1);
        let c = RVector::from_ratios(&[3, -80, 2, -24, 0, 0, 0], 4);
        let p = LpProblem::maximize(a, b, c);
        let out = solve_lp_max(&p).unwrap();
        assert_eq!(out.value, Some(Rational::from_ratio(5, 4)));
        assert!(out.verify(&p));
    }
}
