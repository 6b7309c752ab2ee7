use serde::Serialize;

use super::primes::primes_above;
use super::{Field, QuadInt};
use crate::error::{Error, Result};

/// `unit · ∏ prime^exponent`, primes canonical, pairwise non-associate and
/// sorted by norm then coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub unit: QuadInt,
    pub factors: Vec<(QuadInt, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self, field: &Field) -> QuadInt {
        self.factors
            .iter()
            .fold(self.unit, |acc, &(p, e)| field.mul(acc, field.pow(p, e)))
    }

    /// Factorization of `x^k` given that of `x`.
    pub fn power(&self, field: &Field, k: u32) -> Factorization {
        Factorization {
            unit: field.pow(self.unit, k),
            factors: self.factors.iter().map(|&(p, e)| (p, e * k)).collect(),
        }
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }
}

fn rational_prime_factors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d as u64);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(u64::try_from(n).expect("prime factor fits in u64"));
    }
    out
}

/// Factors `norm(x)` over Z by trial division and distributes each rational
/// prime among the canonical primes above it by exact division.
pub fn factor(field: &Field, x: QuadInt) -> Result<Factorization> {
    if x.is_zero() {
        return Err(Error::ZeroElement("factor"));
    }
    let mut rest = x;
    let mut factors = Vec::new();
    for p in rational_prime_factors(field.norm(x)) {
        let (_, above) = primes_above(field, p)?;
        for pi in above {
            let mut e = 0;
            while let Some(q) = field.div_exact(rest, pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                factors.push((pi, e));
            }
        }
    }
    debug_assert!(field.is_unit(rest));
    factors.sort_unstable_by_key(|&(p, _)| (field.norm(p), p));
    Ok(Factorization { unit: rest, factors })
}

/// All canonical divisors, one per divisor ideal, in no particular order.
pub fn divisors(field: &Field, x: QuadInt) -> Result<Vec<QuadInt>> {
    let fac = factor(field, x)?;
    let mut out = vec![QuadInt::ONE];
    for &(p, e) in &fac.factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for &d in &out {
            let mut acc = d;
            next.push(acc);
            for _ in 0..e {
                acc = field.mul(acc, p);
                next.push(acc);
            }
        }
        out = next;
    }
    Ok(out
        .into_iter()
        .map(|d| field.canonical(d).expect("nonzero divisor"))
        .collect())
}

pub fn divisor_count(field: &Field, x: QuadInt) -> Result<u64> {
    Ok(factor(field, x)?.divisor_count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_divisors(field: &Field, x: QuadInt) -> Vec<QuadInt> {
        field
            .canonical_elements(field.norm(x) as u64)
            .into_iter()
            .map(|(d, _)| d)
            .filter(|&d| field.divides(d, x))
            .collect()
    }

    #[test]
    fn factor_two_in_gaussian_integers() {
        let f = Field::new(-1).unwrap();
        let fac = factor(&f, QuadInt::rational(2)).unwrap();
        assert_eq!(fac.unit, QuadInt::new(0, -1));
        assert_eq!(fac.factors, vec![(QuadInt::new(1, 1), 2)]);
        assert_eq!(fac.reconstruct(&f), QuadInt::rational(2));
    }

    #[test]
    fn factor_five_splits() {
        let f = Field::new(-1).unwrap();
        let fac = factor(&f, QuadInt::rational(5)).unwrap();
        assert_eq!(fac.factors, vec![(QuadInt::new(1, 2), 1), (QuadInt::new(2, 1), 1)]);
        assert_eq!(fac.reconstruct(&f), QuadInt::rational(5));
    }

    #[test]
    fn units_have_empty_factorization() {
        for f in Field::all() {
            for &u in f.units() {
                let fac = factor(&f, u).unwrap();
                assert!(fac.factors.is_empty());
                assert_eq!(fac.unit, u);
                assert_eq!(divisors(&f, u).unwrap(), vec![QuadInt::ONE]);
                assert_eq!(divisor_count(&f, u).unwrap(), 1);
            }
        }
        assert!(factor(&Field::new(-1).unwrap(), QuadInt::ZERO).is_err());
    }

    #[test]
    fn divisors_of_four_and_ten() {
        let f = Field::new(-1).unwrap();
        let four = QuadInt::rational(4);
        let mut ds = divisors(&f, four).unwrap();
        ds.sort_unstable();
        let mut expected = brute_divisors(&f, four);
        expected.sort_unstable();
        assert_eq!(ds, expected);
        assert_eq!(
            expected,
            vec![QuadInt::new(1, 0), QuadInt::new(1, 1), QuadInt::new(2, 0), QuadInt::new(2, 2), QuadInt::new(4, 0)]
        );
        assert_eq!(divisor_count(&f, four).unwrap(), 5);

        let five = QuadInt::rational(5);
        assert_eq!(divisor_count(&f, five).unwrap(), 4);
        assert_eq!(brute_divisors(&f, five).len(), 4);

        // 10 = -i (1+i)^2 (1+2i)(2+i): exponents (2, 1, 1).
        let ten = QuadInt::rational(10);
        assert_eq!(brute_divisors(&f, ten).len(), 12);
        assert_eq!(divisor_count(&f, ten).unwrap(), 12);
    }

    #[test]
    fn every_small_gaussian_integer_reconstructs() {
        let f = Field::new(-1).unwrap();
        let mut seen = 0;
        for b in -100i64..=100 {
            for a in -100i64..=100 {
                let x = QuadInt::new(a, b);
                let n = f.norm(x);
                if n == 0 || n > 10_000 {
                    continue;
                }
                let fac = factor(&f, x).unwrap();
                assert_eq!(fac.reconstruct(&f), x);
                assert!(fac.factors.iter().all(|&(p, _)| f.is_canonical(p)));
                seen += 1;
            }
        }
        assert!(seen > 31_000);
    }

    #[test]
    fn divisor_lists_match_trial_division() {
        for f in Field::all() {
            for (x, _) in f.canonical_elements(120).into_iter().step_by(7) {
                let mut ds = divisors(&f, x).unwrap();
                ds.sort_unstable();
                let mut expected = brute_divisors(&f, x);
                expected.sort_unstable();
                assert_eq!(ds, expected, "{f} {x}");
            }
        }
    }
}
