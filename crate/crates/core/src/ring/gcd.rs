//! Greatest common divisors through the ideal lattice.
//!
//! The ideal `(x, y)` is the Z-lattice spanned by `x, xω, y, yω`. After a
//! Hermite reduction to a 2-basis, a Lagrange reduction under the norm form
//! yields a shortest nonzero vector. Since the ideal is principal, its
//! shortest vectors are exactly the generators, which have norm equal to the
//! lattice index. Nothing here depends on the ring being Euclidean.

use super::{Field, QuadInt};
use crate::error::{Error, Result};

type Vector = (i128, i128);

fn quad_form(field: &Field, v: Vector) -> i128 {
    let (c0, c1) = field.omega_square();
    v.0 * v.0 + c1 as i128 * v.0 * v.1 - c0 as i128 * v.1 * v.1
}

/// Twice the bilinear form associated with the norm.
fn twice_bilinear(field: &Field, u: Vector, v: Vector) -> i128 {
    let (c0, c1) = field.omega_square();
    2 * u.0 * v.0 + c1 as i128 * (u.0 * v.1 + u.1 * v.0) - 2 * c0 as i128 * u.1 * v.1
}

fn round_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    (2 * num + den).div_euclid(2 * den)
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a.rem_euclid(b));
    }
    a.abs()
}

/// Hermite basis `{(h, 0), (p, q)}` with `h, q > 0` and `0 <= p < h`.
fn hermite_basis(rows: &mut Vec<Vector>) -> (Vector, Vector) {
    rows.retain(|&(a, b)| a != 0 || b != 0);
    loop {
        let mut with_b: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].1 != 0).collect();
        if with_b.len() <= 1 {
            break;
        }
        with_b.sort_by_key(|&i| rows[i].1.abs());
        let pivot = rows[with_b[0]];
        for &i in &with_b[1..] {
            let m = rows[i].1.div_euclid(pivot.1);
            rows[i] = (rows[i].0 - m * pivot.0, rows[i].1 - m * pivot.1);
        }
    }
    let top = rows
        .iter()
        .copied()
        .find(|r| r.1 != 0)
        .expect("ideal lattice of a nonzero element has rank 2");
    let top = if top.1 < 0 { (-top.0, -top.1) } else { top };
    let h = rows
        .iter()
        .filter(|r| r.1 == 0)
        .fold(0, |acc, r| gcd_i128(acc, r.0));
    debug_assert!(h > 0);
    ((h, 0), (top.0.rem_euclid(h), top.1))
}

fn shortest_vector(field: &Field, b1: Vector, b2: Vector) -> Vector {
    let (mut u, mut v) = (b1, b2);
    if quad_form(field, u) > quad_form(field, v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let m = round_div(twice_bilinear(field, u, v), 2 * quad_form(field, u));
        v = (v.0 - m * u.0, v.1 - m * u.1);
        if quad_form(field, v) >= quad_form(field, u) {
            return u;
        }
        std::mem::swap(&mut u, &mut v);
    }
}

fn ideal_generator(field: &Field, gens: &[QuadInt]) -> QuadInt {
    let omega = QuadInt::new(0, 1);
    let mut rows: Vec<Vector> = gens
        .iter()
        .flat_map(|&g| [g, field.mul(g, omega)])
        .map(|g| (g.a as i128, g.b as i128))
        .collect();
    let (b1, b2) = hermite_basis(&mut rows);
    let s = shortest_vector(field, b1, b2);
    let g = QuadInt::new(s.0 as i64, s.1 as i64);
    debug_assert_eq!(field.norm(g) as i128, b1.0 * b2.1, "generator norm equals lattice index");
    field.canonical(g).expect("nonzero generator")
}

/// Canonical generator of the ideal `(x, y)`.
pub fn gcd(field: &Field, x: QuadInt, y: QuadInt) -> Result<QuadInt> {
    match (x.is_zero(), y.is_zero()) {
        (true, true) => Err(Error::ZeroElement("gcd")),
        (false, true) => field.canonical(x),
        (true, false) => field.canonical(y),
        (false, false) => Ok(ideal_generator(field, &[x, y])),
    }
}

/// Canonical generator of the ideal spanned by all of `xs`.
pub fn gcd_all(field: &Field, xs: &[QuadInt]) -> Result<QuadInt> {
    let nonzero: Vec<QuadInt> = xs.iter().copied().filter(|x| !x.is_zero()).collect();
    match nonzero.len() {
        0 => Err(Error::ZeroElement("gcd")),
        1 => field.canonical(nonzero[0]),
        _ => Ok(ideal_generator(field, &nonzero)),
    }
}

/// Canonical generator of `(x) ∩ (y)`.
pub fn lcm(field: &Field, x: QuadInt, y: QuadInt) -> Result<QuadInt> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroElement("lcm"));
    }
    let g = gcd(field, x, y)?;
    let q = field.div_exact(x, g).expect("gcd divides its argument");
    field.canonical(field.mul(q, y))
}
