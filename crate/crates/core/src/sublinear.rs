//! Gauge, minimal sublinear function and polyhedral support functions.
//!
//! For `K = {x : <a_i, x> <= 1}` (irredundant):
//!
//! * the gauge `γ_K(x) = max(0, max_i <a_i, x>)` is the support function of
//!   `K* = conv({0} ∪ {a_i})`, the largest sublinear function with unit ball `K`;
//! * `ρ_K(x) = max_i <a_i, x>` is the support function of `K̂`, the smallest
//!   one. It is negative on part of the recession cone.
//!
//! Any other sublinear function with unit ball `K` is encoded as the support
//! function `σ_C` of a finite point set `C`, and must sit between the two.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyhedra::{HPolyhedron, VPolytope};
use crate::rational::{Rational, Vector};

/// `γ_K(x) = inf{t > 0 : x/t ∈ K}`.
pub fn gauge_eval(h: &HPolyhedron, x: &Vector) -> Result<Rational> {
    x.check_dim(h.dim())?;
    Ok(h.max_row_value(x).max(Rational::zero()))
}

/// `ρ_K(x) = max_i <a_i, x>`.
pub fn rho_eval(h: &HPolyhedron, x: &Vector) -> Result<Rational> {
    x.check_dim(h.dim())?;
    Ok(h.max_row_value(x))
}

/// `σ_C(x) = max_{v ∈ C} <v, x>` for a finite generator `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportFunction {
    generator: VPolytope,
}

impl SupportFunction {
    pub fn new(generator: VPolytope) -> Self {
        SupportFunction { generator }
    }

    pub fn from_points(points: Vec<Vector>) -> Result<Self> {
        Ok(SupportFunction::new(VPolytope::new(points)?))
    }

    pub fn generator(&self) -> &VPolytope {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn eval(&self, x: &Vector) -> Result<Rational> {
        self.generator.support(x)
    }
}

pub fn support_eval(c: &SupportFunction, x: &Vector) -> Result<Rational> {
    c.eval(x)
}

/// Decides whether `{x : σ_C(x) <= 1} = K`, i.e. `K = C*`.
///
/// Equivalent to `conv(K̂) ⊆ conv(C) ⊆ K*`: every row of `h` must be in
/// `conv(C)`, and every generator `v` must satisfy `sup_{x∈K} <x, v> <= 1`.
pub fn check_unit_ball(c: &SupportFunction, h: &HPolyhedron) -> Result<bool> {
    if c.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: c.dim() });
    }
    for a in h.rows() {
        if !c.generator.hull_membership(a)?.is_inside() {
            return Ok(false);
        }
    }
    for v in c.generator.points() {
        match h.support_of_set(v)? {
            Some(value) if value <= Rational::one() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Rows of `h` plus `count` random exact convex combinations of `{0} ∪ rows`.
///
/// Always satisfies [`check_unit_ball`]: the rows put `conv(K̂)` inside, and
/// every extra point is in `K*` by construction.
pub fn random_valid_c(h: &HPolyhedron, seed: u64, count: usize) -> SupportFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polar = h.polar();
    let mut points: Vec<Vector> = h.rows().to_vec();
    for _ in 0..count {
        let weights: Vec<i64> = loop {
            let w: Vec<i64> = polar.points().iter().map(|_| rng.random_range(0..=6)).collect();
            if w.iter().any(|&x| x > 0) {
                break w;
            }
        };
        let total = Rational::from(weights.iter().sum::<i64>());
        let mut p = Vector::zeros(h.dim());
        for (w, vertex) in weights.iter().zip(polar.points()) {
            if *w > 0 {
                p = &p + &vertex.scale(&(Rational::from(*w) / &total));
            }
        }
        points.push(p);
    }
    SupportFunction::from_points(points).expect("rows are nonempty")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: Vector,
    pub rho: Rational,
    pub sigma: Rational,
    pub gamma: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub passed: bool,
    pub samples_checked: usize,
    pub violations: Vec<Violation>,
}

impl SandwichReport {
    fn from_violations(samples_checked: usize, violations: Vec<Violation>) -> Self {
        SandwichReport { passed: violations.is_empty(), samples_checked, violations }
    }
}

/// Checks `ρ_K <= σ_C <= γ_K` at every sample; `C` must pass
/// [`check_unit_ball`] first.
pub fn sandwich_check(h: &HPolyhedron, c: &SupportFunction, samples: &[Vector]) -> Result<SandwichReport> {
    if !check_unit_ball(c, h)? {
        return Err(Error::NotUnitBall);
    }
    let mut violations = Vec::new();
    for x in samples {
        let rho = rho_eval(h, x)?;
        let sigma = c.eval(x)?;
        let gamma = gauge_eval(h, x)?;
        if !(rho <= sigma && sigma <= gamma) {
            violations.push(Violation { x: x.clone(), rho, sigma, gamma });
        }
    }
    Ok(SandwichReport::from_violations(samples.len(), violations))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub samples_checked: usize,
    pub failures: Vec<Vector>,
}

impl CheckReport {
    fn from_failures(samples_checked: usize, failures: Vec<Vector>) -> Self {
        CheckReport { passed: failures.is_empty(), samples_checked, failures }
    }
}

/// `K = {x : ρ_K(x) <= 1}` at every sample, and `ρ_K(x/γ(x)) = 1` whenever
/// `γ(x) > 0`.
pub fn reconstruct_check(h: &HPolyhedron, samples: &[Vector]) -> Result<CheckReport> {
    let one = Rational::one();
    let mut failures = Vec::new();
    for x in samples {
        let member = h.membership(x)?.is_member();
        let rho = rho_eval(h, x)?;
        let mut ok = member == (rho <= one);
        let gamma = gauge_eval(h, x)?;
        if gamma.is_positive() {
            let scaled = x.scale(&gamma.recip()?);
            ok &= rho_eval(h, &scaled)? == one;
        }
        if !ok {
            failures.push(x.clone());
        }
    }
    Ok(CheckReport::from_failures(samples.len(), failures))
}

/// Off the recession cone, `ρ_K(x) = γ_K(x) = sup_{y ∈ K*} <x, y>`, the last
/// computed by LP over convex multipliers of the polar's generators.
pub fn lemma_notrec_check(h: &HPolyhedron, x: &Vector) -> Result<bool> {
    if h.in_recession(x)? {
        return Err(Error::InRecessionCone(x.clone()));
    }
    let rho = rho_eval(h, x)?;
    let gamma = gauge_eval(h, x)?;
    let sup = h.polar().support_lp(x)?;
    Ok(rho == gamma && gamma == sup)
}

/// Runs [`lemma_notrec_check`] on every sample outside the recession cone.
pub fn lemma_notrec_suite(h: &HPolyhedron, samples: &[Vector]) -> Result<CheckReport> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for x in samples {
        if h.in_recession(x)? {
            continue;
        }
        checked += 1;
        if !lemma_notrec_check(h, x)? {
            failures.push(x.clone());
        }
    }
    Ok(CheckReport::from_failures(checked, failures))
}
