//! Intersection cuts for the corner relaxation
//! `x = f + Σ_j r^j s_j, x ∈ S = P ∩ ℤⁿ, s >= 0`.
//!
//! A polyhedral body `B` with `f` in its interior is shifted to
//! `K = B - f = {x : <a_i, x> <= 1}` and yields the coefficients
//! `α_j = ψ_B(r^j) = max_i <a_i, r^j>`. When `B` has no point of `S` in its
//! interior the cut `Σ α_j s_j >= 1` is valid.
//!
//! `S` is infinite, so every lattice search here is confined to the box
//! `‖z - round(f)‖_∞ <= R` and every verdict is reported as holding on that
//! region only.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::polyhedra::HPolyhedron;
use crate::rational::{Rational, Vector};
use crate::sublinear::{check_unit_ball, gauge_eval, rho_eval, SandwichReport, SupportFunction, Violation};

pub const DEFAULT_RADIUS: u32 = 5;

/// `P = {x : <p_i, x> <= b_i}` with arbitrary right-hand sides. No rows means ℝⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronP {
    #[serde(default)]
    pub rows: Vec<Vector>,
    #[serde(default)]
    pub rhs: Vec<Rational>,
}

impl PolyhedronP {
    pub fn whole_space() -> Self {
        PolyhedronP::default()
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(a, b)| a.dot_unchecked(x) <= *b)
    }

    /// True when no row actually constrains anything.
    pub fn is_whole_space(&self) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(a, b)| a.is_zero() && !b.is_negative())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCornerInstance {
    dim: usize,
    f: Vector,
    rays: Vec<Vector>,
    #[serde(rename = "P", default)]
    p: PolyhedronP,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCornerInstance", into = "RawCornerInstance")]
pub struct CornerInstance {
    dim: usize,
    f: Vector,
    rays: Vec<Vector>,
    p: PolyhedronP,
}

impl TryFrom<RawCornerInstance> for CornerInstance {
    type Error = Error;

    fn try_from(raw: RawCornerInstance) -> Result<Self> {
        let inst = CornerInstance::new(raw.f, raw.rays, raw.p)?;
        if inst.dim != raw.dim {
            return Err(Error::DimensionMismatch { expected: raw.dim, found: inst.dim });
        }
        Ok(inst)
    }
}

impl From<CornerInstance> for RawCornerInstance {
    fn from(c: CornerInstance) -> Self {
        RawCornerInstance { dim: c.dim, f: c.f, rays: c.rays, p: c.p }
    }
}

impl CornerInstance {
    /// `f ∈ conv(S)` is not checked.
    pub fn new(f: Vector, rays: Vec<Vector>, p: PolyhedronP) -> Result<Self> {
        let dim = f.dim();
        if f.is_integral() {
            return Err(Error::InvalidInstance("f must have a fractional coordinate".into()));
        }
        if rays.is_empty() {
            return Err(Error::InvalidInstance("at least one ray is required".into()));
        }
        for r in &rays {
            r.check_dim(dim)?;
        }
        if p.rows.len() != p.rhs.len() {
            return Err(Error::InvalidInstance(format!(
                "P has {} rows but {} right-hand sides",
                p.rows.len(),
                p.rhs.len()
            )));
        }
        for a in &p.rows {
            a.check_dim(dim)?;
        }
        Ok(CornerInstance { dim, f, rays, p })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f(&self) -> &Vector {
        &self.f
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn p(&self) -> &PolyhedronP {
        &self.p
    }

    pub fn in_s(&self, z: &Vector) -> bool {
        z.is_integral() && self.p.contains(z)
    }

    /// The same instance with every ray multiplied by `t`.
    pub fn with_scaled_rays(&self, t: &Rational) -> Self {
        CornerInstance {
            rays: self.rays.iter().map(|r| r.scale(t)).collect(),
            ..self.clone()
        }
    }

    /// Points of `S` in the search box, in search order (see [`box_points`]).
    pub fn lattice_points(&self, radius: u32) -> Result<Vec<Vector>> {
        Ok(box_points(&self.f.round_half_up(), radius)?
            .into_iter()
            .filter(|z| self.p.contains(z))
            .collect())
    }
}

/// Integer points with `‖z - center‖_∞ <= radius`, ordered by distance to
/// `center`, then lexicographically. The first hit of any search is thus the
/// same for every radius that contains it.
fn box_points(center: &Vector, radius: u32) -> Result<Vec<Vector>> {
    if radius == 0 {
        return Err(Error::InvalidRadius);
    }
    let r = i64::from(radius);
    let n = center.dim();
    let base: Vec<BigInt> = center.iter().map(Rational::floor).collect();
    let mut offsets = vec![-r; n];
    let mut out = Vec::new();
    loop {
        let z = base
            .iter()
            .zip(&offsets)
            .map(|(c, o)| Rational::from_integer(c + o))
            .collect();
        let shell = offsets.iter().map(|o| o.abs()).max().unwrap_or(0);
        out.push((shell, Vector::new(z).expect("dim >= 1")));
        let mut k = n;
        loop {
            if k == 0 {
                out.sort_by_key(|(shell, _)| *shell);
                return Ok(out.into_iter().map(|(_, z)| z).collect());
            }
            k -= 1;
            if offsets[k] < r {
                offsets[k] += 1;
                break;
            }
            offsets[k] = -r;
        }
    }
}

/// Wire form of a body: `{"rows": [[...]], "rhs": [...]}` in x-space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub rows: Vec<Vector>,
    pub rhs: Vec<Rational>,
}

/// A polyhedron `B = {x : <b_i, x> <= β_i}` with `f` strictly inside, and its
/// translate `K = B - f` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SFreeBody {
    spec: BodySpec,
    k: HPolyhedron,
}

/// `K = {x - f : x ∈ B}`: rows `b_i` with right-hand sides `β_i - <b_i, f>`,
/// normalized.
pub fn translate_to_k(rows: &[Vector], rhs: &[Rational], f: &Vector) -> Result<HPolyhedron> {
    if rows.len() != rhs.len() {
        return Err(Error::Malformed(format!("{} rows but {} right-hand sides", rows.len(), rhs.len())));
    }
    let mut shifted = Vec::with_capacity(rhs.len());
    for (i, (a, b)) in rows.iter().zip(rhs).enumerate() {
        let slack = b - &a.dot(f)?;
        if !slack.is_positive() {
            return Err(Error::FNotInterior { row: i, slack });
        }
        shifted.push(slack);
    }
    HPolyhedron::normalize(rows.to_vec(), shifted)
}

impl SFreeBody {
    pub fn new(spec: BodySpec, f: &Vector) -> Result<Self> {
        let k = translate_to_k(&spec.rows, &spec.rhs, f)?;
        Ok(SFreeBody { spec, k })
    }

    pub fn spec(&self) -> &BodySpec {
        &self.spec
    }

    /// `B - f` in canonical form.
    pub fn k(&self) -> &HPolyhedron {
        &self.k
    }

    /// `B ∩ {<c, x> <= d}`, re-centered on the same `f`.
    pub fn intersect(&self, row: Vector, rhs: Rational, f: &Vector) -> Result<Self> {
        let mut spec = self.spec.clone();
        spec.rows.push(row);
        spec.rhs.push(rhs);
        SFreeBody::new(spec, f)
    }

    /// Strict interior test in x-space, through `K`.
    fn interior_contains(&self, x: &Vector, f: &Vector) -> bool {
        let shifted = x - f;
        self.k.rows().iter().all(|a| a.dot_unchecked(&shifted) < Rational::one())
    }
}

/// `ψ_B(r) = max_i <a_i, r>`.
pub fn psi_b(k: &HPolyhedron, r: &Vector) -> Result<Rational> {
    rho_eval(k, r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub alpha: Vec<Rational>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SFreeVerdict {
    FreeOnRegion { radius: u32 },
    Witness { z: Vector },
}

impl SFreeVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, SFreeVerdict::FreeOnRegion { .. })
    }
}

/// Looks for a point of `S` in the interior of `B` inside the search box;
/// reports the first one in search order.
pub fn is_s_free(body: &SFreeBody, inst: &CornerInstance, radius: u32) -> Result<SFreeVerdict> {
    body.k.rows()[0].check_dim(inst.dim)?;
    let witness = inst
        .lattice_points(radius)?
        .into_iter()
        .find(|z| body.interior_contains(z, &inst.f));
    Ok(match witness {
        Some(z) => SFreeVerdict::Witness { z },
        None => SFreeVerdict::FreeOnRegion { radius },
    })
}

/// `α_j = ψ_B(r^j)`, refused with a witness when `B` is not S-free on the
/// search region.
pub fn generate_cut(inst: &CornerInstance, body: &SFreeBody, radius: u32) -> Result<Cut> {
    if let SFreeVerdict::Witness { z } = is_s_free(body, inst, radius)? {
        return Err(Error::NotSFree { witness: z });
    }
    let alpha = inst.rays.iter().map(|r| psi_b(&body.k, r)).collect::<Result<Vec<_>>>()?;
    Ok(Cut {
        alpha,
        provenance: format!(
            "psi_B of a body with {} facets around f = {}; S-free on radius {radius}",
            body.k.num_rows(),
            inst.f
        ),
    })
}

/// `min Σ α_j s_j` subject to `Σ r^j s_j = x - f`, `s >= 0`.
pub fn cut_lp(inst: &CornerInstance, cut: &Cut, x: &Vector) -> Result<LinearProgram> {
    if cut.alpha.len() != inst.rays.len() {
        return Err(Error::DimensionMismatch { expected: inst.rays.len(), found: cut.alpha.len() });
    }
    let target = x.checked_sub(&inst.f)?;
    let mut lp = LinearProgram::minimize(Vector::new(cut.alpha.clone())?).all_nonnegative();
    for coord in 0..inst.dim {
        let row = Vector::new(inst.rays.iter().map(|r| r[coord].clone()).collect())?;
        lp.add_eq(row, target[coord].clone())?;
    }
    Ok(lp)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CutValidity {
    ValidOnRegion {
        radius: u32,
        /// Lattice points of `S` in the box that some `s >= 0` reaches.
        reachable_points: usize,
        /// Smallest `Σ α_j s_j` over reachable points, when there are any.
        min_value: Option<Rational>,
    },
    Violated {
        x: Vector,
        s: Vector,
        value: Option<Rational>,
        /// Set when `Σ α_j s_j` is unbounded below at `x`.
        ray: Option<Vector>,
    },
}

impl CutValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, CutValidity::ValidOnRegion { .. })
    }
}

/// Solves the cut LP at every point of `S` in the box; the first point (in
/// search order) where the cut value drops below one is reported.
pub fn check_cut_validity(inst: &CornerInstance, cut: &Cut, radius: u32) -> Result<CutValidity> {
    let one = Rational::one();
    let mut reachable = 0;
    let mut min_value: Option<Rational> = None;
    for x in inst.lattice_points(radius)? {
        match cut_lp(inst, cut, &x)?.solve() {
            LpOutcome::Infeasible { .. } => {}
            LpOutcome::Optimal { point, value, .. } => {
                if value < one {
                    return Ok(CutValidity::Violated { x, s: point, value: Some(value), ray: None });
                }
                reachable += 1;
                if min_value.as_ref().is_none_or(|m| value < *m) {
                    min_value = Some(value);
                }
            }
            LpOutcome::Unbounded { point, ray } => {
                return Ok(CutValidity::Violated { x, s: point, value: None, ray: Some(ray) });
            }
        }
    }
    Ok(CutValidity::ValidOnRegion { radius, reachable_points: reachable, min_value })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalityReport {
    pub certified: bool,
    /// Set when `B` is unbounded or `P` is not the whole space: the facet
    /// condition is then only a heuristic.
    pub heuristic: bool,
    pub radius: u32,
    /// Per facet of `K = B - f`: a point of `S` in its relative interior.
    pub facet_witnesses: Vec<Option<Vector>>,
    pub uncertified_facets: Vec<usize>,
}

/// Sufficient condition for maximality: every facet of `B` has a point of `S`
/// in its relative interior (tight on that facet only) within the box.
///
/// Never claims non-maximality; failing facets are "uncertified".
pub fn maximality_certificate(body: &SFreeBody, inst: &CornerInstance, radius: u32) -> Result<MaximalityReport> {
    if let SFreeVerdict::Witness { z } = is_s_free(body, inst, radius)? {
        return Err(Error::NotSFree { witness: z });
    }
    let one = Rational::one();
    let points = inst.lattice_points(radius)?;
    let rows = body.k.rows();
    let facet_witnesses: Vec<Option<Vector>> = (0..rows.len())
        .map(|i| {
            points
                .iter()
                .find(|z| {
                    let shifted = *z - &inst.f;
                    rows.iter().enumerate().all(|(j, a)| {
                        let v = a.dot_unchecked(&shifted);
                        if j == i {
                            v == one
                        } else {
                            v < one
                        }
                    })
                })
                .cloned()
        })
        .collect();
    let uncertified_facets: Vec<usize> =
        facet_witnesses.iter().enumerate().filter(|(_, w)| w.is_none()).map(|(i, _)| i).collect();
    Ok(MaximalityReport {
        certified: uncertified_facets.is_empty(),
        heuristic: !body.k.is_bounded() || !inst.p.is_whole_space(),
        radius,
        facet_witnesses,
        uncertified_facets,
    })
}

/// `ψ_B <= σ_C` at every sample, for `C` with `{σ_C <= 1} = B - f`.
pub fn minimal_function_compare(body: &SFreeBody, c: &SupportFunction, samples: &[Vector]) -> Result<SandwichReport> {
    if !check_unit_ball(c, &body.k)? {
        return Err(Error::NotUnitBall);
    }
    let mut violations = Vec::new();
    for r in samples {
        let psi = psi_b(&body.k, r)?;
        let sigma = c.eval(r)?;
        if psi > sigma {
            let gamma = gauge_eval(&body.k, r)?;
            violations.push(Violation { x: r.clone(), rho: psi, sigma, gamma });
        }
    }
    Ok(SandwichReport { passed: violations.is_empty(), samples_checked: samples.len(), violations })
}
