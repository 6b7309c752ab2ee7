//! Direct enumeration of points on `x0³ = x1·x2·x3`, independent of the
//! torsor.

use rayon::prelude::*;

use super::HeightBound;
use crate::ring::{divisors, factor, gcd_all, Field, QuadInt};

/// Points with `x0` fixed: ordered canonical divisor pairs of `x0³`, every
/// unit pair, primitive quadruples only.
fn points_over(field: &Field, x0: QuadInt, b: u64) -> u64 {
    let cube = field.pow(x0, 3);
    let mut ds = divisors(field, cube).expect("x0 is nonzero");
    ds.retain(|&d| field.norm(d) <= b as u128);
    debug_assert_eq!(
        factor(field, x0).unwrap().power(field, 3).divisor_count(),
        crate::ring::divisor_count(field, cube).unwrap()
    );
    let mut count = 0;
    for &d1 in &ds {
        for &d2 in &ds {
            let Some(d3) = field.div_exact(cube, field.mul(d1, d2)) else {
                continue;
            };
            if field.norm(d3) > b as u128 {
                continue;
            }
            for &u1 in field.units() {
                for &u2 in field.units() {
                    let x1 = field.mul(u1, d1);
                    let x2 = field.mul(u2, d2);
                    let x3 = field
                        .div_exact(cube, field.mul(x1, x2))
                        .expect("unit multiples of divisors divide");
                    debug_assert_eq!(field.product([x1, x2, x3]), cube);
                    let g = gcd_all(field, &[x0, x1, x2, x3]).expect("nonzero coordinates");
                    if field.is_unit(g) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// `N(B)` by enumerating `x0` and splitting `x0³` into three factors.
///
/// Each point of the open subset has exactly one primitive representative
/// with canonical `x0`, and its height is the largest coordinate norm.
pub fn count_divisor_oracle(field: &Field, bound: HeightBound) -> u64 {
    let b = bound.floor();
    field
        .canonical_elements(b)
        .into_par_iter()
        .map(|(x0, _)| points_over(field, x0, b))
        .sum()
}
