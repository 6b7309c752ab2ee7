//! Lattice point counts in the norm ellipses `N(x) <= C`.

use crate::ring::Field;

/// Nonzero elements with `norm <= C`.
pub fn circle_count(field: &Field, c: f64) -> u64 {
    if !(c >= 1.0) {
        return 0;
    }
    let c = c.floor() as u64;
    let mut total = 0u64;
    // Rows b and -b are exchanged by x -> -x.
    let mut b = 0;
    loop {
        let (lo, hi) = field.row_range(b, c as i128);
        if lo > hi {
            if field.delta_squared() as i128 * b * b > 4 * c as i128 {
                break;
            }
        } else {
            let row = (hi - lo + 1) as u64;
            total += if b == 0 { row } else { 2 * row };
        }
        b += 1;
    }
    total - 1
}

/// `hist[m]` = number of elements of norm exactly `m`, for `m <= bound`.
pub fn norm_histogram(field: &Field, bound: u64) -> Vec<u64> {
    let mut hist = vec![0u64; bound as usize + 1];
    field.scan_ellipse(bound, |x, m| {
        hist[m as usize] += if x.b == 0 { 1 } else { 2 };
    });
    hist
}

/// `Σ N(x)^a` over nonzero `x` with `N(x) <= B`.
pub fn power_sum(field: &Field, bound: f64, a: f64) -> f64 {
    if !(bound >= 1.0) {
        return 0.0;
    }
    let hist = norm_histogram(field, bound.floor() as u64);
    hist.iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &k)| k > 0)
        .map(|(m, &k)| k as f64 * (m as f64).powf(a))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::QuadInt;

    #[test]
    fn small_counts() {
        let f = Field::new(-1).unwrap();
        assert_eq!(circle_count(&f, 1.0), 4);
        assert_eq!(circle_count(&f, 2.0), 8);
        assert_eq!(circle_count(&f, 5.0), 20);
        let e = Field::new(-3).unwrap();
        assert_eq!(circle_count(&e, 1.0), 6);
        for f in Field::all() {
            assert_eq!(circle_count(&f, 0.5), 0);
            assert_eq!(circle_count(&f, 0.0), 0);
        }
    }

    #[test]
    fn matches_brute_force() {
        for f in Field::all() {
            for c in [3u64, 17, 60, 250] {
                let mut brute = 0;
                for b in -40i64..=40 {
                    for a in -40i64..=40 {
                        let n = f.norm(QuadInt::new(a, b));
                        if n >= 1 && n <= c as u128 {
                            brute += 1;
                        }
                    }
                }
                assert_eq!(circle_count(&f, c as f64), brute, "{f} C={c}");
                let hist = norm_histogram(&f, c);
                assert_eq!(hist[0], 1);
                assert_eq!(hist.iter().skip(1).sum::<u64>(), brute);
            }
        }
    }

    #[test]
    fn power_sum_exponent_zero() {
        let f = Field::new(-7).unwrap();
        assert_eq!(power_sum(&f, 1000.0, 0.0), circle_count(&f, 1000.0) as f64);
    }
}
