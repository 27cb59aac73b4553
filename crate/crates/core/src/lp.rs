//! Exact rational linear programming.
//!
//! A dense two-phase simplex with Bland's rule. Every outcome carries a
//! certificate that [`verify_certificate`] re-checks with plain arithmetic:
//!
//! * `Optimal`: a feasible point and a dual vector whose objective equals the
//!   primal value (strong duality, exactly).
//! * `Unbounded`: a feasible point and an improving recession direction.
//! * `Infeasible`: a Farkas vector.
//!
//! Dual and Farkas vectors are stated for the *maximization* form of the
//! problem (a minimization is read as maximizing the negated objective), one
//! entry per row:
//!
//! * dual `y`: `y_i >= 0` on `<=` rows, `(Aᵀy)_j >= c_j` on nonnegative
//!   variables, `(Aᵀy)_j = c_j` on free variables, `bᵀy = cᵀx`;
//! * Farkas `y`: `y_i >= 0` on `<=` rows, `(Aᵀy)_j >= 0` on nonnegative
//!   variables, `(Aᵀy)_j = 0` on free variables, `bᵀy < 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{Rational, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarBound {
    Free,
    Nonnegative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub coeffs: Vector,
    pub relation: Relation,
    pub rhs: Rational,
}

/// An LP over ℚⁿ. Construction checks that every row matches the objective's
/// dimension, so a built instance is always well formed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearProgram {
    direction: Direction,
    objective: Vector,
    rows: Vec<Constraint>,
    bounds: Vec<VarBound>,
}

impl LinearProgram {
    /// An LP with no rows; all variables start out free.
    pub fn new(direction: Direction, objective: Vector) -> Self {
        let n = objective.dim();
        LinearProgram {
            direction,
            objective,
            rows: Vec::new(),
            bounds: vec![VarBound::Free; n],
        }
    }

    pub fn maximize(objective: Vector) -> Self {
        Self::new(Direction::Maximize, objective)
    }

    pub fn minimize(objective: Vector) -> Self {
        Self::new(Direction::Minimize, objective)
    }

    pub fn with_bounds(mut self, bounds: Vec<VarBound>) -> Result<Self> {
        if bounds.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: bounds.len(),
            });
        }
        self.bounds = bounds;
        Ok(self)
    }

    pub fn all_nonnegative(mut self) -> Self {
        self.bounds = vec![VarBound::Nonnegative; self.num_vars()];
        self
    }

    pub fn set_bound(&mut self, var: usize, bound: VarBound) {
        self.bounds[var] = bound;
    }

    pub fn add_constraint(&mut self, coeffs: Vector, relation: Relation, rhs: Rational) -> Result<()> {
        coeffs.check_dim(self.num_vars())?;
        self.rows.push(Constraint { coeffs, relation, rhs });
        Ok(())
    }

    pub fn add_le(&mut self, coeffs: Vector, rhs: Rational) -> Result<()> {
        self.add_constraint(coeffs, Relation::Le, rhs)
    }

    pub fn add_eq(&mut self, coeffs: Vector, rhs: Rational) -> Result<()> {
        self.add_constraint(coeffs, Relation::Eq, rhs)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn objective(&self) -> &Vector {
        &self.objective
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn bounds(&self) -> &[VarBound] {
        &self.bounds
    }

    pub fn num_vars(&self) -> usize {
        self.objective.dim()
    }

    /// Objective of the equivalent maximization.
    fn max_objective(&self) -> Vector {
        match self.direction {
            Direction::Maximize => self.objective.clone(),
            Direction::Minimize => -&self.objective,
        }
    }

    pub fn is_feasible_point(&self, x: &Vector) -> bool {
        if x.dim() != self.num_vars() {
            return false;
        }
        let bounds_ok = self
            .bounds
            .iter()
            .zip(x)
            .all(|(b, xj)| *b == VarBound::Free || !xj.is_negative());
        bounds_ok
            && self.rows.iter().all(|row| {
                let lhs = row.coeffs.dot_unchecked(x);
                match row.relation {
                    Relation::Le => lhs <= row.rhs,
                    Relation::Eq => lhs == row.rhs,
                }
            })
    }

    pub fn solve(&self) -> LpOutcome {
        Simplex::new(self).run()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LpOutcome {
    Optimal {
        point: Vector,
        /// Objective value in the LP's own direction.
        value: Rational,
        dual: Vec<Rational>,
    },
    Unbounded {
        point: Vector,
        ray: Vector,
    },
    Infeasible {
        farkas: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&Vector> {
        match self {
            LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible { .. } => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }
}

/// `Aᵀy` for the given rows.
fn transpose_times(lp: &LinearProgram, y: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); lp.num_vars()];
    for (row, yi) in lp.rows.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(&row.coeffs) {
            *o += &(a * yi);
        }
    }
    out
}

fn row_multipliers_ok(lp: &LinearProgram, y: &[Rational]) -> bool {
    y.len() == lp.rows.len()
        && lp
            .rows
            .iter()
            .zip(y)
            .all(|(row, yi)| row.relation == Relation::Eq || !yi.is_negative())
}

/// Re-checks an outcome's certificate against `lp` with exact arithmetic.
pub fn verify_certificate(lp: &LinearProgram, outcome: &LpOutcome) -> bool {
    let c = lp.max_objective();
    match outcome {
        LpOutcome::Optimal { point, value, dual } => {
            if !lp.is_feasible_point(point) || !row_multipliers_ok(lp, dual) {
                return false;
            }
            if lp.objective.dot_unchecked(point) != *value {
                return false;
            }
            let aty = transpose_times(lp, dual);
            let dual_feasible = lp.bounds.iter().zip(aty.iter().zip(&c)).all(|(b, (s, cj))| match b {
                VarBound::Free => s == cj,
                VarBound::Nonnegative => s >= cj,
            });
            let dual_value: Rational = lp.rows.iter().zip(dual).map(|(r, yi)| &r.rhs * yi).sum();
            dual_feasible && dual_value == c.dot_unchecked(point)
        }
        LpOutcome::Unbounded { point, ray } => {
            if !lp.is_feasible_point(point) || ray.dim() != lp.num_vars() {
                return false;
            }
            let ray_bounds_ok = lp
                .bounds
                .iter()
                .zip(ray)
                .all(|(b, d)| *b == VarBound::Free || !d.is_negative());
            let ray_rows_ok = lp.rows.iter().all(|row| {
                let ad = row.coeffs.dot_unchecked(ray);
                match row.relation {
                    Relation::Le => !ad.is_positive(),
                    Relation::Eq => ad.is_zero(),
                }
            });
            ray_bounds_ok && ray_rows_ok && c.dot_unchecked(ray).is_positive()
        }
        LpOutcome::Infeasible { farkas } => {
            if !row_multipliers_ok(lp, farkas) {
                return false;
            }
            let aty = transpose_times(lp, farkas);
            let cols_ok = lp.bounds.iter().zip(&aty).all(|(b, s)| match b {
                VarBound::Free => s.is_zero(),
                VarBound::Nonnegative => !s.is_negative(),
            });
            let bty: Rational = lp.rows.iter().zip(farkas).map(|(r, yi)| &r.rhs * yi).sum();
            cols_ok && bty.is_negative()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColumnKind {
    /// Positive part of variable `j`.
    Plus(usize),
    /// Negative part of free variable `j`.
    Minus(usize),
    Slack,
    Artificial,
}

/// Dense tableau over the standard form `A z = b, z >= 0, b >= 0`.
///
/// Columns are ordered structural, slack, artificial; the artificial block
/// starts as the identity, so at every step it holds the basis inverse. That
/// is where the dual and Farkas vectors are read from.
struct Simplex<'a> {
    lp: &'a LinearProgram,
    kinds: Vec<ColumnKind>,
    art_start: usize,
    /// `-1` where the row was negated to make its right-hand side nonnegative.
    row_sign: Vec<bool>,
    tableau: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram) -> Self {
        let m = lp.rows.len();
        let mut kinds = Vec::new();
        for (j, b) in lp.bounds.iter().enumerate() {
            kinds.push(ColumnKind::Plus(j));
            if *b == VarBound::Free {
                kinds.push(ColumnKind::Minus(j));
            }
        }
        let slack_rows: Vec<usize> = (0..m).filter(|&i| lp.rows[i].relation == Relation::Le).collect();
        let slack_start = kinds.len();
        kinds.extend(slack_rows.iter().map(|_| ColumnKind::Slack));
        let art_start = kinds.len();
        kinds.extend((0..m).map(|_| ColumnKind::Artificial));
        let ncols = kinds.len();

        let mut tableau = vec![vec![Rational::zero(); ncols]; m];
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        for (i, row) in lp.rows.iter().enumerate() {
            let negate = row.rhs.is_negative();
            let signed = |v: Rational| if negate { -v } else { v };
            for (col, kind) in kinds[..slack_start].iter().enumerate() {
                tableau[i][col] = match *kind {
                    ColumnKind::Plus(j) => signed(row.coeffs[j].clone()),
                    ColumnKind::Minus(j) => signed(-&row.coeffs[j]),
                    _ => unreachable!(),
                };
            }
            if let Some(pos) = slack_rows.iter().position(|&r| r == i) {
                tableau[i][slack_start + pos] = signed(Rational::one());
            }
            tableau[i][art_start + i] = Rational::one();
            rhs.push(signed(row.rhs.clone()));
            row_sign.push(negate);
        }
        Simplex {
            lp,
            kinds,
            art_start,
            row_sign,
            tableau,
            rhs,
            basis: (art_start..art_start + m).collect(),
        }
    }

    fn ncols(&self) -> usize {
        self.kinds.len()
    }

    fn reduced_cost(&self, costs: &[Rational], col: usize) -> Rational {
        let mut d = costs[col].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !costs[b].is_zero() && !self.tableau[r][col].is_zero() {
                d = d - &costs[b] * &self.tableau[r][col];
            }
        }
        d
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.tableau[row][col].clone();
        for v in self.tableau[row].iter_mut() {
            if !v.is_zero() {
                *v = &*v / &p;
            }
        }
        self.rhs[row] = &self.rhs[row] / &p;
        let pivot_row = self.tableau[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.tableau.len() {
            if r == row {
                continue;
            }
            let factor = self.tableau[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in self.tableau[r].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &(&factor * pv);
                }
            }
            self.rhs[r] = &self.rhs[r] - &(&factor * &pivot_rhs);
        }
        self.basis[row] = col;
    }

    /// Primal simplex with Bland's rule; artificial columns never enter.
    fn optimize(&mut self, costs: &[Rational]) -> PhaseEnd {
        loop {
            let entering = (0..self.art_start).find(|&j| self.reduced_cost(costs, j).is_positive());
            let Some(col) = entering else {
                return PhaseEnd::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.tableau.len() {
                let a = &self.tableau[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return PhaseEnd::Unbounded(col),
            }
        }
    }

    /// `c_Bᵀ B⁻¹`, mapped back through the row negations.
    fn row_multipliers(&self, costs: &[Rational]) -> Vec<Rational> {
        (0..self.tableau.len())
            .map(|i| {
                let col = self.art_start + i;
                let y: Rational = self
                    .basis
                    .iter()
                    .enumerate()
                    .filter(|(r, &b)| !costs[b].is_zero() && !self.tableau[*r][col].is_zero())
                    .map(|(r, &b)| &costs[b] * &self.tableau[r][col])
                    .sum();
                if self.row_sign[i] {
                    -y
                } else {
                    y
                }
            })
            .collect()
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.ncols()];
        for (r, &b) in self.basis.iter().enumerate() {
            z[b] = self.rhs[r].clone();
        }
        z
    }

    fn to_original(&self, z: &[Rational]) -> Vector {
        let mut x = vec![Rational::zero(); self.lp.num_vars()];
        for (kind, zj) in self.kinds.iter().zip(z) {
            match *kind {
                ColumnKind::Plus(j) => x[j] += zj,
                ColumnKind::Minus(j) => x[j] = &x[j] - zj,
                _ => {}
            }
        }
        Vector::new(x).expect("at least one variable")
    }

    fn run(mut self) -> LpOutcome {
        let ncols = self.ncols();
        let mut phase1 = vec![Rational::zero(); ncols];
        for c in phase1[self.art_start..].iter_mut() {
            *c = -Rational::one();
        }
        // Phase one is bounded below by zero, so it always ends optimal.
        self.optimize(&phase1);
        let infeasibility: Rational = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&b, _)| b >= self.art_start)
            .map(|(_, v)| v)
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible {
                farkas: self.row_multipliers(&phase1),
            };
        }

        // Drive zero-level artificials out where a structural or slack
        // column can replace them. Rows that cannot are linearly dependent
        // and keep their artificial at zero forever.
        for r in 0..self.tableau.len() {
            if self.basis[r] >= self.art_start {
                if let Some(col) = (0..self.art_start).find(|&j| !self.tableau[r][j].is_zero()) {
                    self.pivot(r, col);
                }
            }
        }

        let c = self.lp.max_objective();
        let phase2: Vec<Rational> = self
            .kinds
            .iter()
            .map(|k| match *k {
                ColumnKind::Plus(j) => c[j].clone(),
                ColumnKind::Minus(j) => -&c[j],
                _ => Rational::zero(),
            })
            .collect();
        match self.optimize(&phase2) {
            PhaseEnd::Optimal => {
                let point = self.to_original(&self.column_values());
                let value = self.lp.objective.dot_unchecked(&point);
                LpOutcome::Optimal {
                    point,
                    value,
                    dual: self.row_multipliers(&phase2),
                }
            }
            PhaseEnd::Unbounded(col) => {
                let point = self.to_original(&self.column_values());
                let mut dz = vec![Rational::zero(); ncols];
                dz[col] = Rational::one();
                for (r, &b) in self.basis.iter().enumerate() {
                    dz[b] = -&self.tableau[r][col];
                }
                LpOutcome::Unbounded {
                    point,
                    ray: self.to_original(&dz),
                }
            }
        }
    }
}
