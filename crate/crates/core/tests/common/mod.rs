//! Generators and independent oracles shared by the integration suites.

#![allow(dead_code)]

use polarcut::cuts::{BodySpec, CornerInstance, PolyhedronP, SFreeBody};
use polarcut::lp::{LinearProgram, Relation, VarBound};
use polarcut::{Rational, Vector};
use rand::Rng;

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn v(xs: &[i64]) -> Vector {
    Vector::from_i64s(xs)
}

pub fn vs(xs: &[&str]) -> Vector {
    Vector::parse(xs).unwrap()
}

fn small(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    Rational::from(rng.random_range(lo..=hi))
}

/// A random LP with at most 6 variables and at most 10 rows whose feasible
/// region is bounded, so it is either optimal or infeasible.
///
/// Nonnegative variables are bounded by one positive-weight row; each free
/// variable gets an explicit `|x_j| <= U` pair of rows. Remaining rows are
/// random `<=`/`=` rows with right-hand sides of either sign.
pub fn random_bounded_lp(rng: &mut impl Rng) -> LinearProgram {
    let n = rng.random_range(1..=6usize);
    let free: Vec<bool> = (0..n).map(|_| rng.random_bool(0.2)).collect();
    let n_free = free.iter().filter(|&&f| f).count();
    // Free variables need two bounding rows each; keep the total at <= 10.
    let free: Vec<bool> = if 1 + 2 * n_free > 10 { vec![false; n] } else { free };
    let n_free = free.iter().filter(|&&f| f).count();
    let budget = 10 - 1 - 2 * n_free;
    let extra = rng.random_range(0..=budget);

    let objective = Vector::new((0..n).map(|_| small(rng, -5, 5)).collect()).unwrap();
    let mut lp = if rng.random_bool(0.5) {
        LinearProgram::maximize(objective)
    } else {
        LinearProgram::minimize(objective)
    };
    let bounds = free.iter().map(|&f| if f { VarBound::Free } else { VarBound::Nonnegative }).collect();
    lp = lp.with_bounds(bounds).unwrap();

    let weights = Vector::new((0..n).map(|_| small(rng, 1, 4)).collect()).unwrap();
    lp.add_le(weights, small(rng, 1, 12)).unwrap();
    for (j, &is_free) in free.iter().enumerate() {
        if is_free {
            let u = small(rng, 1, 6);
            lp.add_le(Vector::unit(n, j), u.clone()).unwrap();
            lp.add_le(-&Vector::unit(n, j), u).unwrap();
        }
    }
    for _ in 0..extra {
        let coeffs = Vector::new((0..n).map(|_| small(rng, -4, 4)).collect()).unwrap();
        let rhs = small(rng, -6, 10);
        let rel = if rng.random_bool(0.2) { Relation::Eq } else { Relation::Le };
        lp.add_constraint(coeffs, rel, rhs).unwrap();
    }
    lp
}

/// Solves the square system `M x = b` by Gauss–Jordan elimination; `None`
/// when singular.
pub fn solve_square(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        let p = m[col][col].clone();
        for entry in m[col][col..].iter_mut() {
            *entry = &*entry / &p;
        }
        b[col] = &b[col] / &p;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (entry, pv) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *entry = &*entry - &(&factor * pv);
                }
                b[r] = &b[r] - &(&factor * &b[col]);
            }
        }
    }
    Some(b)
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + n - k) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Best objective over all basic feasible solutions, found by making every
/// n-subset of constraints (rows and sign bounds) tight. `None` if no basic
/// solution is feasible. Decisive for pointed, bounded feasible regions.
pub fn brute_force_value(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.num_vars();
    let mut constraints: Vec<(Vec<Rational>, Rational)> = lp
        .rows()
        .iter()
        .map(|r| (r.coeffs.entries().to_vec(), r.rhs.clone()))
        .collect();
    for (j, b) in lp.bounds().iter().enumerate() {
        if *b == VarBound::Nonnegative {
            constraints.push((Vector::unit(n, j).into_entries(), Rational::zero()));
        }
    }
    let mut best: Option<Rational> = None;
    combinations(constraints.len(), n, |subset| {
        let m = subset.iter().map(|&i| constraints[i].0.clone()).collect();
        let b = subset.iter().map(|&i| constraints[i].1.clone()).collect();
        let Some(x) = solve_square(m, b) else { return };
        let x = Vector::new(x).unwrap();
        if !lp.is_feasible_point(&x) {
            return;
        }
        let value = lp.objective().dot(&x).unwrap();
        let better = match (&best, lp.direction()) {
            (None, _) => true,
            (Some(b), polarcut::lp::Direction::Maximize) => value > *b,
            (Some(b), polarcut::lp::Direction::Minimize) => value < *b,
        };
        if better {
            best = Some(value);
        }
    });
    best
}

/// One entry of the 2-D cut corpus: an instance, an S-free body around its
/// `f`, and a strictly smaller body obtained by one extra row.
pub struct CutCase {
    pub instance: CornerInstance,
    pub body: SFreeBody,
    pub shrunk: SFreeBody,
    pub label: String,
}

/// `(name, rows, rhs, vertices)`; splits have no vertices.
type Body = (&'static str, Vec<Vector>, Vec<Rational>, Vec<Vector>);

/// Lattice-free bodies in the plane.
fn base_bodies() -> Vec<Body> {
    vec![
        ("split x1", vec![v(&[1, 0]), v(&[-1, 0])], vec![q("1"), q("0")], vec![]),
        ("split x1+x2", vec![v(&[1, 1]), v(&[-1, -1])], vec![q("1"), q("0")], vec![]),
        ("split x1-2x2", vec![v(&[1, -2]), v(&[-1, 2])], vec![q("1"), q("0")], vec![]),
        (
            "triangle 2-simplex",
            vec![v(&[-1, 0]), v(&[0, -1]), v(&[1, 1])],
            vec![q("0"), q("0"), q("2")],
            vec![v(&[0, 0]), v(&[2, 0]), v(&[0, 2])],
        ),
        (
            "unit square",
            vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])],
            vec![q("1"), q("0"), q("1"), q("0")],
            vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])],
        ),
        (
            "tilted square",
            vec![v(&[-1, -1]), v(&[1, -1]), v(&[1, 1]), v(&[-1, 1])],
            vec![q("0"), q("1"), q("2"), q("1")],
            vec![vs(&["1/2", "-1/2"]), vs(&["3/2", "1/2"]), vs(&["1/2", "3/2"]), vs(&["-1/2", "1/2"])],
        ),
    ]
}

fn random_fraction(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.random_range(1..=4), 5).unwrap()
}

/// Seeded 2-D instances over `S = ℤ²` with bodies from a small
/// catalog of lattice-free sets, translated by random integer vectors.
pub fn cut_corpus(rng: &mut impl Rng, count: usize) -> Vec<CutCase> {
    let catalog = base_bodies();
    (0..count)
        .map(|i| {
            let (name, rows, rhs, vertices) = &catalog[i % catalog.len()];
            let shift = v(&[rng.random_range(-2..=2), rng.random_range(-2..=2)]);
            let f_local = if vertices.is_empty() {
                // Inside the slab 0 < <a_0, x> < 1.
                loop {
                    let f = Vector::new(vec![random_fraction(rng), random_fraction(rng)]).unwrap();
                    let t = rows[0].dot(&f).unwrap();
                    let slab = rhs[0].clone();
                    if t < slab && t > -&rhs[1] && !f.is_integral() {
                        break f;
                    }
                }
            } else {
                // Strictly positive convex combination of the vertices.
                loop {
                    let w: Vec<i64> = vertices.iter().map(|_| rng.random_range(1..=5)).collect();
                    let total = Rational::from(w.iter().sum::<i64>());
                    let mut f = Vector::zeros(2);
                    for (wi, p) in w.iter().zip(vertices) {
                        f = &f + &p.scale(&(Rational::from(*wi) / &total));
                    }
                    if !f.is_integral() {
                        break f;
                    }
                }
            };
            let f = &f_local + &shift;
            let shifted_rhs: Vec<Rational> =
                rows.iter().zip(rhs).map(|(a, b)| b + &a.dot(&shift).unwrap()).collect();
            let spec = BodySpec { rows: rows.clone(), rhs: shifted_rhs };
            let n_rays = rng.random_range(2..=5);
            let rays: Vec<Vector> = (0..n_rays)
                .map(|_| loop {
                    let r = Vector::new(vec![
                        Rational::new(rng.random_range(-3..=3), rng.random_range(1..=3)).unwrap(),
                        Rational::new(rng.random_range(-3..=3), rng.random_range(1..=3)).unwrap(),
                    ])
                    .unwrap();
                    if !r.is_zero() {
                        break r;
                    }
                })
                .collect();
            let instance = CornerInstance::new(f.clone(), rays, PolyhedronP::whole_space()).unwrap();
            let body = SFreeBody::new(spec, &f).unwrap();
            let c = loop {
                let c = v(&[rng.random_range(-2..=2), rng.random_range(-2..=2)]);
                if !c.is_zero() {
                    break c;
                }
            };
            let t = Rational::new(rng.random_range(1..=4), 4).unwrap();
            let shrunk_rhs = &t + &c.dot(&f).unwrap();
            let shrunk = body.intersect(c, shrunk_rhs, &f).unwrap();
            CutCase { instance, body, shrunk, label: format!("{name} + {shift}") }
        })
        .collect()
}
