//! Seeded generators for random instances and sample points.
//!
//! Everything here is deterministic in the seed, so a failing property run
//! can be replayed exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::lp::{LinearProgram, LpOutcome};
use crate::polyhedra::HPolyhedron;
use crate::rational::{Rational, Vector};
use crate::sublinear::gauge_eval;

fn random_rational(rng: &mut impl Rng, num: i64, max_den: i64) -> Rational {
    Rational::new(rng.random_range(-num..=num), rng.random_range(1..=max_den)).expect("positive denominator")
}

fn random_vector(rng: &mut impl Rng, dim: usize, num: i64, max_den: i64) -> Vector {
    Vector::new((0..dim).map(|_| random_rational(rng, num, max_den)).collect()).expect("dim >= 1")
}

/// A canonical polyhedron from `raw_rows` random rows with small integer
/// entries and positive right-hand sides.
///
/// About half the draws force the first coordinate of every row to be
/// nonnegative, so `-e₁` is a recession direction and the set is unbounded.
pub fn random_hpolyhedron(rng: &mut impl Rng, dim: usize, raw_rows: usize) -> HPolyhedron {
    let unbounded = rng.random_bool(0.5);
    loop {
        let rows: Vec<Vector> = (0..raw_rows)
            .map(|_| {
                let mut entries: Vec<Rational> =
                    (0..dim).map(|_| Rational::from(rng.random_range(-4..=4))).collect();
                if unbounded {
                    entries[0] = entries[0].abs();
                }
                Vector::new(entries).expect("dim >= 1")
            })
            .collect();
        let rhs: Vec<Rational> = (0..raw_rows).map(|_| Rational::from(rng.random_range(1..=4))).collect();
        match HPolyhedron::normalize(rows, rhs) {
            Ok(h) => return h,
            Err(Error::ImproperSet) => continue,
            Err(e) => unreachable!("generated rows are well formed: {e}"),
        }
    }
}

/// `count` random canonical polyhedra in dimensions 1–4 with 3–10 raw rows.
pub fn random_corpus(seed: u64, count: usize) -> Vec<HPolyhedron> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let dim = rng.random_range(1..=4);
            let rows = rng.random_range(3..=10);
            random_hpolyhedron(&mut rng, dim, rows)
        })
        .collect()
}

/// A point of `rec(K)` near direction `d`: `d` or `-d` if either lies in the
/// cone, otherwise the LP maximizer of `<d, x>` over the cone cut by the unit
/// box (possibly the origin when the cone is trivial).
fn recession_point(h: &HPolyhedron, d: &Vector) -> Vector {
    if h.in_recession(d).expect("same dim") {
        return d.clone();
    }
    let flipped = -d;
    if h.in_recession(&flipped).expect("same dim") {
        return flipped;
    }
    let n = h.dim();
    let mut lp = LinearProgram::maximize(d.clone());
    for a in h.rows() {
        lp.add_le(a.clone(), Rational::zero()).expect("same dim");
    }
    for k in 0..n {
        let e = Vector::unit(n, k);
        lp.add_le(-&e, Rational::one()).expect("same dim");
        lp.add_le(e, Rational::one()).expect("same dim");
    }
    match lp.solve() {
        LpOutcome::Optimal { point, .. } => point,
        other => unreachable!("box-bounded cone LP is feasible and bounded: {other:?}"),
    }
}

/// Deterministic mix of integer grid points, random rational directions,
/// gauge-scaled boundary points and recession-cone points, in rotation.
pub fn sample_points(h: &HPolyhedron, seed: u64, count: usize) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = h.dim();
    (0..count)
        .map(|i| match i % 4 {
            0 => Vector::new((0..n).map(|_| Rational::from(rng.random_range(-3..=3))).collect()).expect("dim >= 1"),
            1 => random_vector(&mut rng, n, 6, 4),
            2 => {
                let d = random_vector(&mut rng, n, 6, 4);
                let gamma = gauge_eval(h, &d).expect("same dim");
                if gamma.is_positive() {
                    d.scale(&gamma.recip().expect("positive"))
                } else {
                    d
                }
            }
            _ => {
                let d = random_vector(&mut rng, n, 6, 4);
                recession_point(h, &d)
            }
        })
        .collect()
}
