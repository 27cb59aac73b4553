//! Exact polar duality, gauges and minimal sublinear functions for polyhedra
//! containing the origin in their interior, with intersection cuts for the
//! corner relaxation built on top.
//!
//! All arithmetic is over ℚ with arbitrary-precision integers.

pub mod cuts;
pub mod error;
pub mod lp;
pub mod polyhedra;
pub mod rational;
pub mod sampling;
pub mod sublinear;

pub use error::{Error, Result};
pub use polyhedra::{HPolyhedron, VPolytope};
pub use rational::{Rational, Vector};
pub use sublinear::SupportFunction;
