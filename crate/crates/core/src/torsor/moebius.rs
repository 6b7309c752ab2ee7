//! Moebius inversion of the 27 coprimality conditions.

use rayon::prelude::*;

use super::{CoprimalityGraph, HeightBound, Vertex, CYCLIC};
use crate::error::{Error, Result};
use crate::ring::{factor, lcm, Field, QuadInt};

/// Coefficients of `x⁰ … x⁹`.
pub type Polynomial = Vec<i64>;

fn poly_mul(p: &[i64], q: &[i64]) -> Polynomial {
    let mut out = vec![0; p.len() + q.len() - 1];
    for (i, &a) in p.iter().enumerate() {
        for (j, &b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn pad(mut p: Polynomial) -> Polynomial {
    p.resize(10, 0);
    p
}

fn non_edge_masks() -> Vec<u16> {
    CoprimalityGraph::non_edges()
        .into_iter()
        .map(|(u, v)| 1 << u.index() | 1 << v.index())
        .collect()
}

/// `A(x)` as a sum over vertex subsets `S`, each weighted by
/// `(1-x)^{9-|S|} x^{|S|}` times the inner sum over indicators supported
/// on the non-edges inside `S`. That inner sum is `(μ̃(0) + μ̃(1))^m = 0^m`
/// with `m` the number of such non-edges.
pub fn moebius_polynomial_reduced() -> Polynomial {
    let masks = non_edge_masks();
    let mut total = vec![0i64; 10];
    for s in 0u16..1 << 9 {
        let inside = masks.iter().filter(|&&m| m & s == m).count() as u32;
        let inner = 0i64.pow(inside);
        if inner == 0 {
            continue;
        }
        let k = s.count_ones() as usize;
        let mut term = vec![1i64];
        for _ in 0..9 - k {
            term = poly_mul(&term, &[1, -1]);
        }
        for _ in 0..k {
            term = poly_mul(&term, &[0, 1]);
        }
        for (t, c) in total.iter_mut().zip(term) {
            *t += inner * c;
        }
    }
    total
}

/// `A(x)` summed over all `2²⁷` indicator vectors on the non-edges.
///
/// The covered vertex set of an indicator vector is looked up in two
/// tables, one for the low 14 non-edges and one for the high 13.
pub fn moebius_polynomial_direct() -> Polynomial {
    const LOW: usize = 14;
    let masks = non_edge_masks();
    let table = |edges: &[u16]| -> Vec<u16> {
        (0usize..1 << edges.len())
            .map(|m| {
                edges
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| m >> i & 1 == 1)
                    .fold(0, |acc, (_, &e)| acc | e)
            })
            .collect()
    };
    let low = table(&masks[..LOW]);
    let high = table(&masks[LOW..]);
    let counts = (0..high.len())
        .into_par_iter()
        .map(|h| {
            let mut c = [0i64; 10];
            let hi_cover = high[h];
            let hi_sign = (h.count_ones() & 1) as usize;
            for (l, &lo_cover) in low.iter().enumerate() {
                let degree = (hi_cover | lo_cover).count_ones() as usize;
                if (l.count_ones() as usize + hi_sign) & 1 == 0 {
                    c[degree] += 1;
                } else {
                    c[degree] -= 1;
                }
            }
            c
        })
        .reduce(
            || [0i64; 10],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    pad(counts.to_vec())
}

/// Largest bound accepted by [`count_moebius_tiny`].
pub const MOEBIUS_TINY_MAX_BOUND: u64 = 10;

/// Canonical elements with `μ ≠ 0` and norm at most `b`, with `μ`.
fn squarefree(field: &Field, b: u64) -> Vec<(QuadInt, u64, i64)> {
    field
        .canonical_elements(b)
        .into_iter()
        .filter_map(|(x, n)| {
            let fac = factor(field, x).expect("nonzero");
            fac.factors
                .iter()
                .all(|&(_, e)| e == 1)
                .then(|| (x, n, if fac.factors.len() % 2 == 0 { 1 } else { -1 }))
        })
        .collect()
}

/// Number of canonical tuples `z` with the monomial bounds on
/// `y_v = r_v z_v`, depending only on the norms `r[v]` and on
/// `per_norm[m]`, the number of canonical elements of norm `m`.
fn count_multiples(r: &[u64; 9], per_norm: &[u64], b: u64) -> u64 {
    fn go(level: usize, y: &mut [u64; 9], r: &[u64; 9], per_norm: &[u64], b: u64) -> u64 {
        let monomials_ok = |y: &[u64; 9]| {
            CYCLIC.iter().all(|&(j, k, l)| {
                let p = |a, c| y[Vertex::pair(a, c).index()];
                let m = y[Vertex::single(j).index()].pow(3) as u128
                    * p(j, k) as u128
                    * p(j, l) as u128
                    * (p(k, j) as u128).pow(2)
                    * (p(l, j) as u128).pow(2);
                m <= b as u128
            })
        };
        if !monomials_ok(y) {
            return 0;
        }
        if level == 9 {
            return 1;
        }
        let mut total = 0;
        for m in 1..per_norm.len() as u64 {
            if per_norm[m as usize] == 0 {
                continue;
            }
            let n = r[level] * m;
            if n > b {
                break;
            }
            y[level] = n;
            total += per_norm[m as usize] * go(level + 1, y, r, per_norm, b);
        }
        y[level] = 1;
        total
    }
    let mut y = [1u64; 9];
    go(0, &mut y, r, per_norm, b)
}

/// `N(B)` as `w² Σ_d ∏ μ(d_α) · #{canonical y : r_v | y_v, y ∈ M(B)}`, the
/// sum running over canonical `d` indexed by the 27 non-edges and `r_v`
/// the lcm of the `d_α` with `v ∈ α`.
///
/// Since `∏_v N(y_v) ≤ B` inside `M(B)`, only `d` with `∏_v N(r_v) ≤ B`
/// contribute. The number of such `d` grows very fast, hence the cap
/// [`MOEBIUS_TINY_MAX_BOUND`].
pub fn count_moebius_tiny(field: &Field, bound: HeightBound) -> Result<i64> {
    let b = bound.floor();
    if b > MOEBIUS_TINY_MAX_BOUND {
        return Err(Error::OutOfRange {
            what: "Moebius counter bound",
            value: b.to_string(),
            expected: "at most 10",
        });
    }
    if b == 0 {
        return Ok(0);
    }
    let mut per_norm = vec![0u64; b as usize + 1];
    for (_, n) in field.canonical_elements(b) {
        per_norm[n as usize] += 1;
    }
    let ds = squarefree(field, b);
    let pairs = CoprimalityGraph::non_edges();

    struct Dfs<'a> {
        field: &'a Field,
        ds: &'a [(QuadInt, u64, i64)],
        pairs: &'a [(Vertex, Vertex)],
        per_norm: &'a [u64],
        b: u64,
    }
    impl Dfs<'_> {
        fn run(&self, alpha: usize, r: &mut [QuadInt; 9], sign: i64) -> i64 {
            let norms = r.map(|x| self.field.norm(x) as u64);
            if norms.iter().product::<u64>() > self.b {
                return 0;
            }
            if alpha == self.pairs.len() {
                return sign * count_multiples(&norms, self.per_norm, self.b) as i64;
            }
            let (u, v) = self.pairs[alpha];
            let mut total = 0;
            for &(d, _, mu) in self.ds {
                let saved = (r[u.index()], r[v.index()]);
                r[u.index()] = lcm(self.field, saved.0, d).expect("nonzero");
                r[v.index()] = lcm(self.field, saved.1, d).expect("nonzero");
                total += self.run(alpha + 1, r, sign * mu);
                (r[u.index()], r[v.index()]) = saved;
            }
            total
        }
    }

    let dfs = Dfs {
        field,
        ds: &ds,
        pairs: &pairs,
        per_norm: &per_norm,
        b,
    };
    let w = field.w() as i64;
    Ok(w * w * dfs.run(0, &mut [QuadInt::ONE; 9], 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsor::count_torsor9;

    fn expected() -> Polynomial {
        let mut p = vec![1i64, 7, 1];
        for _ in 0..7 {
            p = poly_mul(&p, &[1, -1]);
        }
        pad(p)
    }

    #[test]
    fn reduced_polynomial() {
        let a = moebius_polynomial_reduced();
        assert_eq!(a, expected());
        assert_eq!(a[0], 1);
        assert_eq!(a.iter().sum::<i64>(), 0);
    }

    #[test]
    fn direct_polynomial() {
        let a = moebius_polynomial_direct();
        assert_eq!(a, moebius_polynomial_reduced());
        assert_eq!(a[0], 1);
        assert!(a.iter().map(|c| c.unsigned_abs()).sum::<u64>() <= 1 << 27);
    }

    #[test]
    fn tiny_counter_matches_enumeration() {
        for n in [-1, -3, -7] {
            let f = Field::new(n).unwrap();
            for b in [1, 2, 4, 8] {
                let bound = HeightBound::integer(b).unwrap();
                assert_eq!(
                    count_moebius_tiny(&f, bound).unwrap(),
                    count_torsor9(&f, bound) as i64,
                    "n={n} B={b}"
                );
            }
        }
        let f = Field::new(-1).unwrap();
        assert!(count_moebius_tiny(&f, HeightBound::integer(11).unwrap()).is_err());
    }
}
