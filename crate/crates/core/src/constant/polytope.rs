//! The polytope `t ≥ 0`, `t_{j,k} + t_{j,l} + 2t_{k,j} + 2t_{l,j} ≤ 1` in
//! `ℝ⁶`, and its volume from lattice point counts of dilations.
//!
//! Its vertices have denominators 1, 2, 3 and 4, so the Ehrhart
//! quasi-polynomial has period dividing 12 and is a genuine polynomial on
//! multiples of 12.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Variable order `(t12, t21, t13, t31, t23, t32)`.
pub const VARIABLES: [(usize, usize); 6] = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];

/// Dilation step on which the Ehrhart function is a polynomial.
pub const PERIOD: u64 = 12;

/// Whether `t` lies in `k·P`, with the constraint left-hand sides computed
/// from the index triples.
pub fn contains(t: &[u64; 6], k: u64) -> bool {
    let at = |j: usize, l: usize| {
        let i = VARIABLES.iter().position(|&v| v == (j, l)).expect("valid pair");
        t[i]
    };
    [(1, 2, 3), (2, 3, 1), (3, 1, 2)]
        .iter()
        .all(|&(j, k2, l)| at(j, k2) + at(j, l) + 2 * at(k2, j) + 2 * at(l, j) <= k)
}

/// Lattice points of `k·P`, summing the innermost variable in closed form.
pub fn lattice_count(k: u64) -> u64 {
    let k = k as i64;
    let mut total: u64 = 0;
    for t12 in 0..=k / 2 {
        for t21 in 0..=((k - t12) / 2).min(k - 2 * t12) {
            for t13 in 0..=(k - t12 - 2 * t21).min(k / 2) {
                for t31 in 0..=((k - t12 - 2 * t21 - t13) / 2).min(k - 2 * t13) {
                    let c2 = k - 2 * t12 - t21;
                    let c3 = k - 2 * t13 - t31;
                    for t32 in 0..=(c2 / 2).min(c3) {
                        // t23 <= c2 - 2 t32 and 2 t23 <= c3 - t32.
                        let top = (c2 - 2 * t32).min((c3 - t32) / 2);
                        total += (top + 1) as u64;
                    }
                }
            }
        }
    }
    total
}

fn binomial_poly(i: usize) -> Vec<Ratio<i128>> {
    // t (t-1) ... (t-i+1) / i!
    let mut p = vec![Ratio::one()];
    for r in 0..i {
        let mut next = vec![Ratio::zero(); p.len() + 1];
        for (d, c) in p.iter().enumerate() {
            next[d + 1] += *c;
            next[d] -= *c * Ratio::from_integer(r as i128);
        }
        p = next.into_iter().map(|c| c / Ratio::from_integer(r as i128 + 1)).collect();
    }
    p
}

/// Exact coefficients (degree 0 to 6, in the dilation factor `k`) of the
/// Ehrhart polynomial of `scale·P` on multiples of [`PERIOD`].
///
/// Fits Newton's forward differences at `k = 0, 12, …, 72` and checks the
/// prediction at `k = 84`.
pub fn ehrhart_polynomial(scale: u64) -> Result<Vec<Ratio<i128>>> {
    let counts: Vec<i128> = (0..=7).map(|t| lattice_count(scale * PERIOD * t) as i128).collect();
    let mut diffs = Vec::with_capacity(8);
    let mut row = counts.clone();
    while !row.is_empty() {
        diffs.push(row[0]);
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    if diffs[7] != 0 {
        return Err(Error::Interpolation(format!(
            "seventh difference {} is nonzero; counts {counts:?}",
            diffs[7]
        )));
    }
    // Polynomial in t = k / 12, then rescale.
    let mut in_t = vec![Ratio::zero(); 7];
    for (i, &d) in diffs.iter().take(7).enumerate() {
        for (deg, c) in binomial_poly(i).into_iter().enumerate() {
            in_t[deg] += c * Ratio::from_integer(d);
        }
    }
    Ok(in_t
        .into_iter()
        .enumerate()
        .map(|(deg, c)| c / Ratio::from_integer((PERIOD as i128).pow(deg as u32)))
        .collect())
}

/// Volume of `scale·P` as the leading Ehrhart coefficient.
pub fn lattice_volume(scale: u64) -> Result<Ratio<i128>> {
    Ok(ehrhart_polynomial(scale)?[6])
}

pub fn polytope_volume() -> Result<Ratio<i128>> {
    lattice_volume(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(k: u64) -> u64 {
        let mut n = 0;
        let mut t = [0u64; 6];
        loop {
            if contains(&t, k) {
                n += 1;
            }
            let mut i = 0;
            loop {
                if i == 6 {
                    return n;
                }
                t[i] += 1;
                if t[i] <= k {
                    break;
                }
                t[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn small_dilations() {
        for k in 0..=4 {
            assert_eq!(lattice_count(k), brute(k), "k={k}");
        }
        assert_eq!(lattice_count(0), 1);
        assert_eq!(lattice_count(2), 10);
    }

    #[test]
    fn volume() {
        let p = ehrhart_polynomial(1).unwrap();
        assert_eq!(p[6], Ratio::new(1, 2880));
        assert_eq!(p[0], Ratio::one());
        let at = |k: i128| p.iter().rev().fold(Ratio::zero(), |acc, c| acc * Ratio::from_integer(k) + c);
        assert_eq!(at(24), Ratio::from_integer(lattice_count(24) as i128));
    }
}
