use thiserror::Error;

use crate::rational::Vector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("vectors must have at least one coordinate")]
    EmptyVector,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A row `<a, x> <= b` with `b <= 0`: the origin is not an interior point.
    #[error("origin not interior: row {row} has right-hand side {rhs} <= 0")]
    OriginNotInterior { row: usize, rhs: crate::Rational },

    /// Every row was trivial, so the set is all of space.
    #[error("improper set: no nontrivial rows remain (the set is the whole space)")]
    ImproperSet,

    #[error("f is not interior to the body: row {row} has slack {slack}")]
    FNotInterior { row: usize, slack: crate::Rational },

    #[error("row {row} is not an exposed point of the polar (margin {margin})")]
    RowNotExposed { row: usize, margin: crate::Rational },

    #[error("row index {row} out of range for {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },

    #[error("point {0} lies in the recession cone")]
    InRecessionCone(Vector),

    #[error("candidate set does not have the polyhedron as its polar")]
    NotUnitBall,

    #[error("body is not S-free: lattice point {witness} lies in its interior")]
    NotSFree { witness: Vector },

    #[error("invalid corner instance: {0}")]
    InvalidInstance(String),

    #[error("search radius must be at least 1")]
    InvalidRadius,
}
