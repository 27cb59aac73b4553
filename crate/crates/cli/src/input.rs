//! Reading JSON instances with positioned diagnostics.

use std::fs;
use std::io::{self, Read};
use std::path::Path;

use polarcut::cuts::{BodySpec, CornerInstance, Cut};
use polarcut::polyhedra::RawHPolyhedron;
use polarcut::{HPolyhedron, Vector};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::error::Category;
use serde_json::Value;

/// Anything wrong with the input itself: unreadable, malformed, or not
/// matching the schema. Maps to exit status 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl InputError {
    fn from_path_error(err: serde_path_to_error::Error<serde_json::Error>) -> Self {
        let path = err.path().to_string();
        let inner = err.into_inner();
        match inner.classify() {
            Category::Syntax | Category::Eof | Category::Io => InputError(format!("malformed JSON: {inner}")),
            Category::Data if path == "." => InputError(format!("invalid input: {inner}")),
            Category::Data => InputError(format!("invalid input at `{path}`: {inner}")),
        }
    }
}

/// File contents, or standard input for `-`.
pub fn read_source(path: &Path) -> Result<String, InputError> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| InputError(format!("cannot read standard input: {e}")))?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, InputError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(InputError::from_path_error)?;
    de.end().map_err(|e| InputError(format!("malformed JSON: {e}")))?;
    Ok(value)
}

fn from_value<T: DeserializeOwned>(value: Value) -> Result<T, InputError> {
    serde_path_to_error::deserialize(value).map_err(InputError::from_path_error)
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    parse(&read_source(path)?)
}

/// `{"dim", "rows", "rhs", "points"}` for `gauge` and `rho`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsInput {
    pub dim: usize,
    pub rows: Vec<Vector>,
    pub rhs: Vec<polarcut::Rational>,
    pub points: Vec<Vector>,
}

impl PointsInput {
    pub fn split(self) -> Result<(HPolyhedron, Vec<Vector>), InputError> {
        let raw = RawHPolyhedron { dim: self.dim, rows: self.rows, rhs: self.rhs };
        let h = HPolyhedron::try_from(raw).map_err(|e| InputError(format!("invalid input: {e}")))?;
        for (i, x) in self.points.iter().enumerate() {
            x.check_dim(h.dim()).map_err(|e| InputError(format!("invalid input at `points[{i}]`: {e}")))?;
        }
        Ok((h, self.points))
    }
}

/// `verify` accepts one polyhedron or a list of them.
pub fn load_polyhedra(path: &Path) -> Result<Vec<HPolyhedron>, InputError> {
    let value: Value = load(path)?;
    if value.is_array() {
        from_value(value)
    } else {
        Ok(vec![from_value(value)?])
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyInput {
    pub instance: CornerInstance,
    pub body: BodySpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutInput {
    pub instance: CornerInstance,
    pub cut: Cut,
}
