//! Polyhedral convex sets with the origin in their interior.
//!
//! `K = {x : <a_i, x> <= 1}` is kept in irredundant right-hand-side-one form,
//! which makes the polar available for free: `K* = conv({0} ∪ {a_i})`, and the
//! rows themselves are exactly the exposed points of `K*` that lie in `K̂`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, VarBound};
use crate::rational::{Rational, Vector};

/// `{x ∈ ℚⁿ : <a_i, x> <= 1 for every row a_i}`, irredundant.
///
/// The only way to build one is through [`HPolyhedron::normalize`] (or the
/// JSON form, which calls it), so the invariants always hold: rows are
/// nonzero, distinct, irredundant, and there is at least one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHPolyhedron", into = "RawHPolyhedron")]
pub struct HPolyhedron {
    dim: usize,
    rows: Vec<Vector>,
}

/// Wire form: `{"dim": n, "rows": [[...]], "rhs": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHPolyhedron {
    pub dim: usize,
    pub rows: Vec<Vector>,
    pub rhs: Vec<Rational>,
}

impl TryFrom<RawHPolyhedron> for HPolyhedron {
    type Error = Error;

    fn try_from(raw: RawHPolyhedron) -> Result<Self> {
        if raw.dim == 0 {
            return Err(Error::Malformed("dim must be positive".into()));
        }
        for row in &raw.rows {
            row.check_dim(raw.dim)?;
        }
        HPolyhedron::normalize(raw.rows, raw.rhs)
    }
}

impl From<HPolyhedron> for RawHPolyhedron {
    fn from(h: HPolyhedron) -> Self {
        let rhs = vec![Rational::one(); h.rows.len()];
        RawHPolyhedron { dim: h.dim, rows: h.rows, rhs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub position: Position,
    /// Rows with `<a_i, x> = 1`; only filled on the boundary.
    pub tight_rows: Vec<usize>,
}

impl MembershipVerdict {
    /// True for interior and boundary points.
    pub fn is_member(&self) -> bool {
        self.position != Position::Outside
    }
}

/// `rec(K) = {x : <a_i, x> <= 0 for every row}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecessionCone {
    rows: Vec<Vector>,
}

impl RecessionCone {
    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        if let Some(first) = self.rows.first() {
            x.check_dim(first.dim())?;
        }
        Ok(self.rows.iter().all(|a| !a.dot_unchecked(x).is_positive()))
    }
}

/// A point `x̄` with `<a_i, x̄> = 1` and `<a_j, x̄> <= 1 - margin` for `j != i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExposedWitness {
    pub row: usize,
    pub point: Vector,
    pub margin: Rational,
}

fn check_common_dim(rows: &[Vector]) -> Result<usize> {
    let dim = rows
        .first()
        .ok_or_else(|| Error::Malformed("at least one row is required".into()))?
        .dim();
    for row in rows {
        row.check_dim(dim)?;
    }
    Ok(dim)
}

/// `max <objective, x>` subject to `<a, x> <= 1` for every `a` in `rows`.
fn maximize_over(dim: usize, rows: &[&Vector], objective: &Vector) -> LpOutcome {
    let mut lp = LinearProgram::maximize(objective.clone());
    for a in rows {
        lp.add_le((*a).clone(), Rational::one()).expect("rows share the dimension");
    }
    debug_assert_eq!(lp.num_vars(), dim);
    lp.solve()
}

/// Drops zero rows, duplicates and LP-redundant rows from `{x : <a_i, x> <= 1}`.
///
/// Row `i` survives iff maximizing `<a_i, x>` over the other surviving rows
/// is unbounded or exceeds one. Rows are tested in order against everything
/// still present, so the result is a subset of the input in input order.
pub fn remove_redundancy(rows: Vec<Vector>) -> Result<HPolyhedron> {
    let dim = check_common_dim(&rows)?;
    let mut kept: Vec<Vector> = Vec::with_capacity(rows.len());
    for row in rows {
        if !row.is_zero() && !kept.contains(&row) {
            kept.push(row);
        }
    }
    let mut i = 0;
    while i < kept.len() {
        let others: Vec<&Vector> = kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, a)| a).collect();
        let redundant = match maximize_over(dim, &others, &kept[i]) {
            LpOutcome::Optimal { value, .. } => value <= Rational::one(),
            LpOutcome::Unbounded { .. } => false,
            // The origin satisfies every row, so this cannot happen.
            LpOutcome::Infeasible { .. } => unreachable!("origin is always feasible"),
        };
        if redundant {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    if kept.is_empty() {
        return Err(Error::ImproperSet);
    }
    Ok(HPolyhedron { dim, rows: kept })
}

impl HPolyhedron {
    /// Canonical form of `{x : <row_i, x> <= rhs_i}`.
    ///
    /// Each right-hand side must be positive (the origin must be interior);
    /// rows are scaled to right-hand side one, then cleaned by
    /// [`remove_redundancy`].
    pub fn normalize(raw_rows: Vec<Vector>, raw_rhs: Vec<Rational>) -> Result<Self> {
        if raw_rows.len() != raw_rhs.len() {
            return Err(Error::Malformed(format!(
                "{} rows but {} right-hand sides",
                raw_rows.len(),
                raw_rhs.len()
            )));
        }
        check_common_dim(&raw_rows)?;
        let mut scaled = Vec::with_capacity(raw_rows.len());
        for (row, (a, b)) in raw_rows.into_iter().zip(raw_rhs).enumerate() {
            if !b.is_positive() {
                return Err(Error::OriginNotInterior { row, rhs: b });
            }
            scaled.push(a.scale(&b.recip()?));
        }
        remove_redundancy(scaled)
    }

    /// `{x : <a_i, x> <= 1}` for the given rows.
    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        remove_redundancy(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// `max_i <a_i, x>`; may be negative.
    pub(crate) fn max_row_value(&self, x: &Vector) -> Rational {
        self.rows
            .iter()
            .map(|a| a.dot_unchecked(x))
            .max()
            .expect("at least one row")
    }

    /// `K* = conv({0} ∪ rows)`.
    pub fn polar(&self) -> VPolytope {
        let mut points = Vec::with_capacity(self.rows.len() + 1);
        points.push(Vector::zeros(self.dim));
        points.extend(self.rows.iter().cloned());
        VPolytope { dim: self.dim, points }
    }

    /// The exposed points of `K*` lying in `K̂`, which are exactly the rows.
    pub fn khat_points(&self) -> &[Vector] {
        &self.rows
    }

    pub fn membership(&self, x: &Vector) -> Result<MembershipVerdict> {
        x.check_dim(self.dim)?;
        let one = Rational::one();
        let values: Vec<Rational> = self.rows.iter().map(|a| a.dot_unchecked(x)).collect();
        let max = values.iter().max().expect("at least one row");
        let verdict = if *max > one {
            MembershipVerdict { position: Position::Outside, tight_rows: Vec::new() }
        } else if *max == one {
            let tight_rows = values.iter().enumerate().filter(|(_, v)| **v == one).map(|(i, _)| i).collect();
            MembershipVerdict { position: Position::Boundary, tight_rows }
        } else {
            MembershipVerdict { position: Position::Interior, tight_rows: Vec::new() }
        };
        Ok(verdict)
    }

    pub fn recession_cone(&self) -> RecessionCone {
        RecessionCone { rows: self.rows.clone() }
    }

    pub fn in_recession(&self, x: &Vector) -> Result<bool> {
        x.check_dim(self.dim)?;
        Ok(self.rows.iter().all(|a| !a.dot_unchecked(x).is_positive()))
    }

    /// True iff the recession cone is `{0}`.
    pub fn is_bounded(&self) -> bool {
        (0..self.dim).all(|k| {
            let e = Vector::unit(self.dim, k);
            [-&e, e].into_iter().all(|dir| {
                let mut lp = LinearProgram::maximize(dir);
                for a in &self.rows {
                    lp.add_le(a.clone(), Rational::zero()).expect("same dimension");
                }
                lp.solve().is_optimal()
            })
        })
    }

    /// `sup_{x ∈ K} <v, x>`: `None` when unbounded.
    pub fn support_of_set(&self, v: &Vector) -> Result<Option<Rational>> {
        v.check_dim(self.dim)?;
        let rows: Vec<&Vector> = self.rows.iter().collect();
        Ok(match maximize_over(self.dim, &rows, v) {
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Unbounded { .. } => None,
            LpOutcome::Infeasible { .. } => unreachable!("origin is always feasible"),
        })
    }

    /// Finds `x̄` on the facet of row `i` that is strictly inside every other
    /// row, by maximizing a slack margin `ε <= 1`.
    pub fn exposed_witness(&self, i: usize) -> Result<ExposedWitness> {
        if i >= self.rows.len() {
            return Err(Error::RowOutOfRange { row: i, rows: self.rows.len() });
        }
        let n = self.dim;
        let extend = |a: &Vector, eps: i64| {
            let mut e = a.entries().to_vec();
            e.push(Rational::from(eps));
            Vector::new(e).expect("nonempty")
        };
        // Variables: x (free), then ε (nonnegative).
        let mut lp = LinearProgram::maximize(Vector::unit(n + 1, n));
        lp.set_bound(n, VarBound::Nonnegative);
        lp.add_eq(extend(&self.rows[i], 0), Rational::one()).expect("dim n+1");
        for (j, a) in self.rows.iter().enumerate() {
            if j != i {
                lp.add_le(extend(a, 1), Rational::one()).expect("dim n+1");
            }
        }
        lp.add_le(Vector::unit(n + 1, n), Rational::one()).expect("dim n+1");
        match lp.solve() {
            LpOutcome::Optimal { point, value, .. } if value.is_positive() => {
                let point = Vector::new(point.entries()[..n].to_vec()).expect("n >= 1");
                Ok(ExposedWitness { row: i, point, margin: value })
            }
            LpOutcome::Optimal { value, .. } => Err(Error::RowNotExposed { row: i, margin: value }),
            _ => Err(Error::RowNotExposed { row: i, margin: Rational::zero() }),
        }
    }
}

/// `conv(points)`; the list need not be vertex-minimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVPolytope", into = "RawVPolytope")]
pub struct VPolytope {
    dim: usize,
    points: Vec<Vector>,
}

/// Wire form: `{"dim": n, "points": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVPolytope {
    pub dim: usize,
    pub points: Vec<Vector>,
}

impl TryFrom<RawVPolytope> for VPolytope {
    type Error = Error;

    fn try_from(raw: RawVPolytope) -> Result<Self> {
        let v = VPolytope::new(raw.points)?;
        if v.dim != raw.dim {
            return Err(Error::DimensionMismatch { expected: raw.dim, found: v.dim });
        }
        Ok(v)
    }
}

impl From<VPolytope> for RawVPolytope {
    fn from(v: VPolytope) -> Self {
        RawVPolytope { dim: v.dim, points: v.points }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum HullMembership {
    /// Nonnegative multipliers summing to one that reproduce the point.
    Inside { multipliers: Vec<Rational> },
    /// `<normal, p> > offset >= <normal, q>` for every stored point `q`.
    Outside { normal: Vector, offset: Rational },
}

impl HullMembership {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullMembership::Inside { .. })
    }
}

impl VPolytope {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        let dim = points
            .first()
            .ok_or_else(|| Error::Malformed("a polytope needs at least one point".into()))?
            .dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        Ok(VPolytope { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    /// `max_v <v, x>` over the stored points.
    pub fn support(&self, x: &Vector) -> Result<Rational> {
        x.check_dim(self.dim)?;
        Ok(self.points.iter().map(|v| v.dot_unchecked(x)).max().expect("nonempty"))
    }

    /// The same maximum computed as an LP over convex multipliers.
    pub fn support_lp(&self, x: &Vector) -> Result<Rational> {
        x.check_dim(self.dim)?;
        let objective = Vector::new(self.points.iter().map(|v| v.dot_unchecked(x)).collect())?;
        let k = self.points.len();
        let mut lp = LinearProgram::maximize(objective).all_nonnegative();
        lp.add_eq(Vector::new(vec![Rational::one(); k])?, Rational::one())?;
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => Ok(value),
            other => unreachable!("simplex of multipliers is nonempty and compact: {other:?}"),
        }
    }

    /// Decides `p ∈ conv(points)` with a certificate either way.
    ///
    /// When outside, the separator maximizes `<c, p> - γ` over `|c_k| <= 1`,
    /// which picks a deterministic, well-scaled normal.
    pub fn hull_membership(&self, p: &Vector) -> Result<HullMembership> {
        p.check_dim(self.dim)?;
        let k = self.points.len();
        let mut lp = LinearProgram::maximize(Vector::zeros(k)).all_nonnegative();
        lp.add_eq(Vector::new(vec![Rational::one(); k])?, Rational::one())?;
        for coord in 0..self.dim {
            let row = Vector::new(self.points.iter().map(|v| v[coord].clone()).collect())?;
            lp.add_eq(row, p[coord].clone())?;
        }
        if let LpOutcome::Optimal { point, .. } = lp.solve() {
            return Ok(HullMembership::Inside { multipliers: point.into_entries() });
        }

        // Variables: c (free, box-bounded), then γ (free).
        let n = self.dim;
        let mut obj = p.entries().to_vec();
        obj.push(-Rational::one());
        let mut sep = LinearProgram::maximize(Vector::new(obj)?);
        for v in &self.points {
            let mut row = v.entries().to_vec();
            row.push(-Rational::one());
            sep.add_le(Vector::new(row)?, Rational::zero())?;
        }
        for coord in 0..n {
            let e = Vector::unit(n + 1, coord);
            sep.add_le(e.clone(), Rational::one())?;
            sep.add_le(-&e, Rational::one())?;
        }
        match sep.solve() {
            LpOutcome::Optimal { point, value, .. } if value.is_positive() => {
                let normal = Vector::new(point.entries()[..n].to_vec())?;
                Ok(HullMembership::Outside { normal, offset: point[n].clone() })
            }
            other => unreachable!("membership LP infeasible but no separator found: {other:?}"),
        }
    }
}
