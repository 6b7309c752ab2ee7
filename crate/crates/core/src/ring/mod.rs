//! Arithmetic in the ring of integers of an imaginary quadratic field with
//! class number one.
//!
//! Elements are stored as integer coordinates `a + b·ω` over the integral
//! basis `{1, ω}`, where `ω = √n` for `n ≡ 2, 3 (mod 4)` and
//! `ω = (1 + √n)/2` for `n ≡ 1 (mod 4)`. In both cases `ω² = c0 + c1·ω`
//! with small integer `c0, c1`, which is all the multiplication needs.
//!
//! Coordinates are `i64`; products are formed in `i128` and narrowed with a
//! panic on overflow. For height bounds up to [`crate::MAX_BOUND`] every
//! quantity met by the counting code stays far inside these limits.

mod factor;
mod gcd;
mod primes;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

pub use factor::{divisor_count, divisors, factor, Factorization};
pub use gcd::{gcd, gcd_all, lcm};
pub use primes::{
    cache_path, is_rational_prime, load_or_sieve, primes_up_to, rational_primes_up_to, read_prime_file,
    splitting_type, write_prime_file, Prime, PrimeCache, SplittingType,
};

/// The nine admissible values of `n` (Heegner numbers with sign).
pub const CLASS_NUMBER_ONE: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaKind {
    /// `ω = √n`, used when `n ≡ 2, 3 (mod 4)`.
    SquareRoot,
    /// `ω = (1 + √n)/2`, used when `n ≡ 1 (mod 4)`.
    HalfInteger,
}

/// An algebraic integer `a + b·ω`. The meaning of `ω` comes from the
/// [`Field`] the element is used with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct QuadInt {
    pub a: i64,
    pub b: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { a: 0, b: 0 };
    pub const ONE: QuadInt = QuadInt { a: 1, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        QuadInt { a, b }
    }

    pub const fn rational(a: i64) -> Self {
        QuadInt { a, b: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}w"),
            (a, b) if b < 0 => write!(f, "{a}-{}w", -b),
            (a, b) => write!(f, "{a}+{b}w"),
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        QuadInt::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        QuadInt::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(-self.a, -self.b)
    }
}

fn narrow(v: i128) -> i64 {
    i64::try_from(v).expect("QuadInt coordinate overflow")
}

/// One of the nine imaginary quadratic fields `Q(√n)` with class number one,
/// together with the constants that enter the leading constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Field {
    n: i64,
    w: u32,
    disc: i64,
    omega: OmegaKind,
    /// `ω² = c0 + c1·ω`.
    c0: i64,
    c1: i64,
}

impl Field {
    pub fn new(n: i64) -> Result<Field> {
        if !CLASS_NUMBER_ONE.contains(&n) {
            return Err(Error::UnsupportedField(n));
        }
        let w = match n {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        let field = if n.rem_euclid(4) == 1 {
            Field {
                n,
                w,
                disc: n,
                omega: OmegaKind::HalfInteger,
                c0: (n - 1) / 4,
                c1: 1,
            }
        } else {
            Field {
                n,
                w,
                disc: 4 * n,
                omega: OmegaKind::SquareRoot,
                c0: n,
                c1: 0,
            }
        };
        Ok(field)
    }

    /// All nine admissible fields, ordered by decreasing `n`.
    pub fn all() -> impl Iterator<Item = Field> {
        CLASS_NUMBER_ONE
            .iter()
            .map(|&n| Field::new(n).expect("admissible field"))
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// Number of roots of unity in the ring of integers.
    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn omega_kind(&self) -> OmegaKind {
        self.omega
    }

    /// `Δ = √|disc|` as `coefficient · √radicand` with squarefree radicand.
    pub fn delta(&self) -> (i64, i64) {
        match self.omega {
            OmegaKind::HalfInteger => (1, -self.n),
            OmegaKind::SquareRoot if self.n == -1 => (2, 1),
            OmegaKind::SquareRoot => (2, -self.n),
        }
    }

    /// `Δ² = |disc|`, exact.
    pub fn delta_squared(&self) -> u64 {
        self.disc.unsigned_abs()
    }

    pub fn delta_f64(&self) -> f64 {
        (self.delta_squared() as f64).sqrt()
    }

    pub fn class_number(&self) -> u32 {
        1
    }

    pub fn regulator(&self) -> u32 {
        1
    }

    /// Numbers of real embeddings and pairs of complex embeddings.
    pub fn signature(&self) -> (u32, u32) {
        (0, 1)
    }

    /// Unit rank `r + s - 1`.
    pub fn unit_rank(&self) -> u32 {
        let (r, s) = self.signature();
        r + s - 1
    }

    pub fn mul(&self, x: QuadInt, y: QuadInt) -> QuadInt {
        let (a, b, c, d) = (x.a as i128, x.b as i128, y.a as i128, y.b as i128);
        let bd = b * d;
        QuadInt::new(
            narrow(a * c + bd * self.c0 as i128),
            narrow(a * d + b * c + bd * self.c1 as i128),
        )
    }

    pub fn pow(&self, x: QuadInt, e: u32) -> QuadInt {
        (0..e).fold(QuadInt::ONE, |acc, _| self.mul(acc, x))
    }

    pub fn product<I: IntoIterator<Item = QuadInt>>(&self, xs: I) -> QuadInt {
        xs.into_iter().fold(QuadInt::ONE, |acc, x| self.mul(acc, x))
    }

    /// Galois conjugate.
    pub fn conj(&self, x: QuadInt) -> QuadInt {
        QuadInt::new(x.a + self.c1 * x.b, -x.b)
    }

    /// The norm `|σ(x)|²`, always a nonnegative integer.
    pub fn norm(&self, x: QuadInt) -> u128 {
        let (a, b) = (x.a as i128, x.b as i128);
        let v = a * a + self.c1 as i128 * a * b - self.c0 as i128 * b * b;
        debug_assert!(v >= 0);
        v as u128
    }

    pub fn is_unit(&self, x: QuadInt) -> bool {
        self.norm(x) == 1
    }

    /// `x / y` if `y` divides `x` exactly.
    pub fn div_exact(&self, x: QuadInt, y: QuadInt) -> Option<QuadInt> {
        let n = self.norm(y) as i128;
        if n == 0 {
            return None;
        }
        let yc = self.conj(y);
        let (a, b, c, d) = (x.a as i128, x.b as i128, yc.a as i128, yc.b as i128);
        let bd = b * d;
        let re = a * c + bd * self.c0 as i128;
        let om = a * d + b * c + bd * self.c1 as i128;
        if re % n != 0 || om % n != 0 {
            return None;
        }
        Some(QuadInt::new(narrow(re / n), narrow(om / n)))
    }

    pub fn divides(&self, d: QuadInt, x: QuadInt) -> bool {
        self.div_exact(x, d).is_some()
    }

    /// Complex embedding with positive imaginary part of `ω`.
    pub fn embed(&self, x: QuadInt) -> (f64, f64) {
        let root = (-self.n as f64).sqrt();
        match self.omega {
            OmegaKind::SquareRoot => (x.a as f64, x.b as f64 * root),
            OmegaKind::HalfInteger => (x.a as f64 + x.b as f64 / 2.0, x.b as f64 * root / 2.0),
        }
    }

    /// The `w` roots of unity, starting at 1 and ordered by argument.
    pub fn units(&self) -> &'static [QuadInt] {
        const PM: [QuadInt; 2] = [QuadInt::new(1, 0), QuadInt::new(-1, 0)];
        const GAUSS: [QuadInt; 4] = [
            QuadInt::new(1, 0),
            QuadInt::new(0, 1),
            QuadInt::new(-1, 0),
            QuadInt::new(0, -1),
        ];
        // ω = (1 + √-3)/2 is a primitive sixth root of unity.
        const EISENSTEIN: [QuadInt; 6] = [
            QuadInt::new(1, 0),
            QuadInt::new(0, 1),
            QuadInt::new(-1, 1),
            QuadInt::new(-1, 0),
            QuadInt::new(0, -1),
            QuadInt::new(1, -1),
        ];
        match self.w {
            4 => &GAUSS,
            6 => &EISENSTEIN,
            _ => &PM,
        }
    }

    /// Whether `x` lies in the fundamental sector `[0, 2π/w)`.
    ///
    /// The sector is decided by integer sign tests: for every admissible field
    /// it reduces to `b > 0 || (b == 0 && a > 0)` when `w = 2` and to
    /// `a > 0 && b >= 0` when `w ∈ {4, 6}`.
    pub fn is_canonical(&self, x: QuadInt) -> bool {
        match self.w {
            2 => x.b > 0 || (x.b == 0 && x.a > 0),
            _ => x.a > 0 && x.b >= 0,
        }
    }

    /// The unique associate of `x` in the fundamental sector, together with
    /// the unit `u` such that `canonical = u·x`.
    pub fn canonical_associate(&self, x: QuadInt) -> Result<(QuadInt, QuadInt)> {
        if x.is_zero() {
            return Err(Error::ZeroElement("canonical_associate"));
        }
        let found = self
            .units()
            .iter()
            .map(|&u| (self.mul(u, x), u))
            .find(|&(c, _)| self.is_canonical(c))
            .expect("the sectors of the w units tile the plane");
        Ok(found)
    }

    /// Shorthand for the canonical associate when the unit is not needed.
    pub fn canonical(&self, x: QuadInt) -> Result<QuadInt> {
        self.canonical_associate(x).map(|(c, _)| c)
    }

    /// `(re, im)` coefficient pair of `ω²`; mostly useful to the lattice code.
    pub(crate) fn omega_square(&self) -> (i64, i64) {
        (self.c0, self.c1)
    }

    /// All canonical elements with `1 <= norm <= bound`, sorted by norm and
    /// then by coordinates.
    pub fn canonical_elements(&self, bound: u64) -> Vec<(QuadInt, u64)> {
        let mut out = Vec::new();
        self.scan_ellipse(bound, |x, norm| {
            if norm >= 1 && self.is_canonical(x) {
                out.push((x, norm));
            }
        });
        out.sort_unstable_by_key(|&(x, norm)| (norm, x));
        out
    }

    /// Visits every lattice point with `norm <= bound` having `b >= 0`.
    ///
    /// Every canonical element has `b >= 0`, so this covers the canonical
    /// sector. Rows are delimited with an integer square root and the end
    /// points are corrected with exact norm evaluations.
    pub(crate) fn scan_ellipse<F: FnMut(QuadInt, u64)>(&self, bound: u64, mut visit: F) {
        let dabs = self.delta_squared() as i128;
        let c = bound as i128;
        let mut b: i128 = 0;
        while dabs * b * b <= 4 * c {
            let (lo, hi) = self.row_range(b, c);
            for a in lo..=hi {
                let x = QuadInt::new(a as i64, b as i64);
                visit(x, self.norm(x) as u64);
            }
            b += 1;
        }
    }

    /// Inclusive range of `a` with `norm(a + bω) <= c` for fixed `b`, or an
    /// empty range.
    pub(crate) fn row_range(&self, b: i128, c: i128) -> (i128, i128) {
        // a² + c1·b·a - c0·b² - c <= 0; discriminant 4c + disc·b².
        let disc = self.disc as i128;
        let d = 4 * c + disc * b * b;
        if d < 0 {
            return (1, 0);
        }
        let s = isqrt_u128(d as u128) as i128;
        let c1b = self.c1 as i128 * b;
        let norm = |a: i128| a * a + c1b * a - self.c0 as i128 * b * b;
        let mut lo = (-c1b - s).div_euclid(2) - 1;
        let mut hi = (-c1b + s).div_euclid(2) + 1;
        while norm(lo) > c {
            lo += 1;
        }
        while norm(hi) > c {
            hi -= 1;
        }
        (lo, hi)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.n)
    }
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn icbrt_u64(n: u64) -> u64 {
    let mut x = (n as f64).cbrt() as u64;
    while x > 0 && (x as u128).pow(3) > n as u128 {
        x -= 1;
    }
    while ((x + 1) as u128).pow(3) <= n as u128 {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_constants() {
        let gauss = Field::new(-1).unwrap();
        assert_eq!((gauss.w(), gauss.delta(), gauss.disc()), (4, (2, 1), -4));
        let eis = Field::new(-3).unwrap();
        assert_eq!((eis.w(), eis.delta(), eis.disc()), (6, (1, 3), -3));
        for f in Field::all() {
            let (k, r) = f.delta();
            assert_eq!((k * k * r) as u64, f.delta_squared());
            assert_eq!(f.delta_squared(), f.disc().unsigned_abs());
            assert_eq!(f.w() == 4, f.n() == -1);
            assert_eq!(f.w() == 6, f.n() == -3);
            assert_eq!(f.unit_rank(), 0);
        }
        assert!(matches!(Field::new(-5), Err(Error::UnsupportedField(-5))));
        assert!(Field::new(2).is_err());
    }

    #[test]
    fn norms() {
        let gauss = Field::new(-1).unwrap();
        assert_eq!(gauss.norm(QuadInt::new(1, 1)), 2);
        let eis = Field::new(-3).unwrap();
        assert_eq!(eis.norm(QuadInt::new(0, 1)), 1);
        let f = Field::new(-19).unwrap();
        let x = QuadInt::new(1, 2);
        let (re, im) = f.embed(x);
        let float_norm = re * re + im * im;
        let exact = f.norm(x) as f64;
        assert!((float_norm - exact).abs() <= 1e-6 * exact);
    }

    #[test]
    fn units_have_norm_one_and_close_under_multiplication() {
        for f in Field::all() {
            let units = f.units();
            assert_eq!(units.len() as u32, f.w());
            for &u in units {
                assert!(f.is_unit(u));
                for &v in units {
                    assert!(units.contains(&f.mul(u, v)));
                }
            }
        }
    }

    #[test]
    fn canonical_associate_examples() {
        let gauss = Field::new(-1).unwrap();
        let (c, u) = gauss.canonical_associate(QuadInt::rational(-3)).unwrap();
        assert_eq!(c, QuadInt::rational(3));
        assert_eq!(gauss.mul(u, QuadInt::rational(-3)), c);

        let f = Field::new(-2).unwrap();
        let (c, _) = f.canonical_associate(QuadInt::new(-1, -1)).unwrap();
        assert_eq!(c, QuadInt::new(1, 1));

        assert!(gauss.canonical_associate(QuadInt::ZERO).is_err());
    }

    #[test]
    fn canonical_sector_matches_argument() {
        for f in Field::all() {
            let sector = 2.0 * std::f64::consts::PI / f.w() as f64;
            for a in -12..=12 {
                for b in -12..=12 {
                    let x = QuadInt::new(a, b);
                    if x.is_zero() {
                        continue;
                    }
                    let (re, im) = f.embed(x);
                    let arg = im.atan2(re).rem_euclid(2.0 * std::f64::consts::PI);
                    // Boundary rays are exact in integer arithmetic; only check interior points.
                    if (arg - sector).abs() > 1e-9 && arg > 1e-9 {
                        assert_eq!(f.is_canonical(x), arg < sector, "{f} {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn exactly_one_associate_is_canonical() {
        let eis = Field::new(-3).unwrap();
        let mut state = 0x2545_f491_4f6c_dd1d_u64;
        for _ in 0..50 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let x = QuadInt::new((state % 201) as i64 - 100, ((state >> 20) % 201) as i64 - 100);
            if x.is_zero() {
                continue;
            }
            let hits = eis
                .units()
                .iter()
                .filter(|&&u| eis.is_canonical(eis.mul(u, x)))
                .count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn exact_division() {
        let gauss = Field::new(-1).unwrap();
        let two = QuadInt::rational(2);
        assert_eq!(gauss.div_exact(two, QuadInt::new(1, 1)), Some(QuadInt::new(1, -1)));
        assert_eq!(gauss.div_exact(QuadInt::rational(3), QuadInt::new(1, 1)), None);
    }

    #[test]
    fn canonical_elements_are_complete() {
        for f in Field::all() {
            let listed = f.canonical_elements(60);
            let mut brute = Vec::new();
            for a in -20i64..=20 {
                for b in -20i64..=20 {
                    let x = QuadInt::new(a, b);
                    let n = f.norm(x);
                    if (1..=60).contains(&n) && f.is_canonical(x) {
                        brute.push((x, n as u64));
                    }
                }
            }
            brute.sort_unstable_by_key(|&(x, n)| (n, x));
            assert_eq!(listed, brute, "{f}");
        }
    }

    #[test]
    fn integer_roots() {
        for n in 0..2000u64 {
            let r = icbrt_u64(n);
            assert!(r.pow(3) <= n && (r + 1).pow(3) > n);
            let s = isqrt_u128(n as u128);
            assert!(s * s <= n as u128 && (s + 1) * (s + 1) > n as u128);
        }
        assert_eq!(icbrt_u64(100_000_000), 464);
    }
}
