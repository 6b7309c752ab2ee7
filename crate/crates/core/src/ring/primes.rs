//! Rational prime decomposition, prime-ideal sieving and the on-disk cache.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use super::{isqrt_u128, Field, QuadInt};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

/// A canonical prime element together with its norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Prime {
    pub element: QuadInt,
    pub norm: u64,
}

pub fn is_rational_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Sieve of Eratosthenes.
pub fn rational_primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut b = base as u128 % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Decomposition law: ramified iff `p | disc`, otherwise split or inert
/// according to the Kronecker symbol `(disc / p)`.
pub fn splitting_type(field: &Field, p: u64) -> Result<SplittingType> {
    if !is_rational_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let disc = field.disc();
    if disc.rem_euclid(p as i64) == 0 {
        return Ok(SplittingType::Ramified);
    }
    let residue = if p == 2 {
        // disc ≡ 1 (mod 4) here; (d/2) = +1 iff d ≡ ±1 (mod 8).
        matches!(disc.rem_euclid(8), 1 | 7)
    } else {
        pow_mod(disc.rem_euclid(p as i64) as u64, (p - 1) / 2, p) == 1
    };
    Ok(if residue {
        SplittingType::Split
    } else {
        SplittingType::Inert
    })
}

/// All canonical elements of norm exactly `m`, found by scanning the rows
/// `b >= 0` of the norm-form ellipse and solving the quadratic in `a`.
pub(crate) fn elements_of_norm(field: &Field, m: u64) -> Vec<QuadInt> {
    let (c0, c1) = field.omega_square();
    let disc = field.disc() as i128;
    let mut found = Vec::new();
    let mut b: i128 = 0;
    loop {
        let d = 4 * m as i128 + disc * b * b;
        if d < 0 {
            break;
        }
        let s = isqrt_u128(d as u128) as i128;
        if s * s == d {
            for root in [s, -s] {
                let num = -(c1 as i128) * b + root;
                if num.rem_euclid(2) == 0 {
                    let x = QuadInt::new((num / 2) as i64, b as i64);
                    debug_assert_eq!(
                        field.norm(x),
                        m as u128,
                        "c0={c0} c1={c1} b={b} root={root}"
                    );
                    found.push(field.canonical(x).expect("nonzero"));
                }
            }
        }
        b += 1;
    }
    found.sort_unstable();
    found.dedup();
    found
}

/// Canonical primes above the rational prime `p`, sorted by coordinates.
pub(crate) fn primes_above(field: &Field, p: u64) -> Result<(SplittingType, Vec<QuadInt>)> {
    let kind = splitting_type(field, p)?;
    let primes = match kind {
        SplittingType::Inert => vec![QuadInt::rational(p as i64)],
        SplittingType::Split | SplittingType::Ramified => elements_of_norm(field, p),
    };
    let expected = if kind == SplittingType::Split { 2 } else { 1 };
    assert_eq!(primes.len(), expected, "{field}: primes above {p}");
    Ok((kind, primes))
}

/// One canonical prime per prime ideal of norm at most `bound`, sorted by
/// norm and then by coordinates.
pub fn primes_up_to(field: &Field, bound: u64) -> Vec<Prime> {
    let mut out = Vec::new();
    for p in rational_primes_up_to(bound) {
        let (kind, above) = primes_above(field, p).expect("sieve yields primes");
        let norm = match kind {
            SplittingType::Inert => match p.checked_mul(p) {
                Some(n) if n <= bound => n,
                _ => continue,
            },
            _ => p,
        };
        out.extend(above.into_iter().map(|element| Prime { element, norm }));
    }
    out.sort_unstable_by_key(|pr| (pr.norm, pr.element));
    out
}

/// Process-wide memo of prime lists, one per field.
///
/// Readers share the current list; a request beyond the cached bound takes
/// the write lock and replaces the list with a larger sieve.
#[derive(Debug, Default)]
pub struct PrimeCache {
    tables: RwLock<HashMap<i64, Arc<(u64, Vec<Prime>)>>>,
}

impl PrimeCache {
    pub fn global() -> &'static PrimeCache {
        static CACHE: OnceLock<PrimeCache> = OnceLock::new();
        CACHE.get_or_init(PrimeCache::default)
    }

    fn covering(&self, field: &Field, bound: u64) -> Option<Arc<(u64, Vec<Prime>)>> {
        let tables = self.tables.read().expect("prime cache poisoned");
        tables
            .get(&field.n())
            .filter(|t| t.0 >= bound)
            .cloned()
    }

    pub fn primes_up_to(&self, field: &Field, bound: u64) -> Vec<Prime> {
        let table = match self.covering(field, bound) {
            Some(t) => t,
            None => {
                let mut tables = self.tables.write().expect("prime cache poisoned");
                let entry = tables.entry(field.n()).or_insert_with(|| Arc::new((0, Vec::new())));
                if entry.0 < bound {
                    *entry = Arc::new((bound, primes_up_to(field, bound)));
                }
                entry.clone()
            }
        };
        let end = table.1.partition_point(|p| p.norm <= bound);
        table.1[..end].to_vec()
    }

    /// Seeds the cache with a list read from disk.
    pub fn insert(&self, field: &Field, bound: u64, primes: Vec<Prime>) {
        let mut tables = self.tables.write().expect("prime cache poisoned");
        let replace = tables.get(&field.n()).map_or(true, |t| t.0 < bound);
        if replace {
            tables.insert(field.n(), Arc::new((bound, primes)));
        }
    }
}

fn header(field: &Field, bound: u64) -> String {
    format!("# qprimes v1 n={} bound={}", field.n(), bound)
}

pub fn write_prime_file<W: Write>(out: W, field: &Field, bound: u64, primes: &[Prime]) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "{}", header(field, bound))?;
    for p in primes {
        writeln!(out, "{} {} {}", p.element.a, p.element.b, p.norm)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a prime list. Returns `Ok(None)` when the header does not match the
/// requested field and bound, so the caller can re-sieve.
pub fn read_prime_file<R: BufRead>(input: R, field: &Field, bound: u64) -> Result<Option<Vec<Prime>>> {
    let mut lines = input.lines();
    let first = lines.next().transpose()?;
    if first.as_deref().map(str::trim_end) != Some(header(field, bound).as_str()) {
        return Ok(None);
    }
    let mut primes = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<i64>()
                .map_err(|e| Error::CacheFormat(format!("line {}: {e}", i + 2)))
        };
        if fields.len() != 3 {
            return Err(Error::CacheFormat(format!("line {}: expected `a b norm`", i + 2)));
        }
        let element = QuadInt::new(parse(fields[0])?, parse(fields[1])?);
        let norm = parse(fields[2])? as u64;
        if field.norm(element) != norm as u128 || !field.is_canonical(element) {
            return Err(Error::CacheFormat(format!("line {}: {element} is not a canonical prime of norm {norm}", i + 2)));
        }
        primes.push(Prime { element, norm });
    }
    Ok(Some(primes))
}

pub fn cache_path(dir: &Path, field: &Field) -> PathBuf {
    dir.join(format!("qprimes_n{}.txt", field.n()))
}

/// Loads the prime list for `(field, bound)` from `dir`, sieving and
/// rewriting the file when it is missing or its header does not match.
pub fn load_or_sieve(dir: &Path, field: &Field, bound: u64) -> Result<Vec<Prime>> {
    let path = cache_path(dir, field);
    if let Ok(file) = File::open(&path) {
        if let Some(primes) = read_prime_file(BufReader::new(file), field, bound)? {
            return Ok(primes);
        }
    }
    let primes = primes_up_to(field, bound);
    std::fs::create_dir_all(dir)?;
    write_prime_file(File::create(&path)?, field, bound, &primes)?;
    Ok(primes)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducible canonical elements up to `bound`, by trial division.
    fn brute_primes(field: &Field, bound: u64) -> Vec<Prime> {
        let elems = field.canonical_elements(bound);
        elems
            .iter()
            .filter(|&&(x, n)| {
                n > 1
                    && !elems
                        .iter()
                        .any(|&(d, m)| m > 1 && m < n && field.divides(d, x))
            })
            .map(|&(element, norm)| Prime { element, norm })
            .collect()
    }

    #[test]
    fn splitting_in_gaussian_integers() {
        let f = Field::new(-1).unwrap();
        assert_eq!(splitting_type(&f, 5).unwrap(), SplittingType::Split);
        assert_eq!(splitting_type(&f, 2).unwrap(), SplittingType::Ramified);
        assert_eq!(splitting_type(&f, 3).unwrap(), SplittingType::Inert);
        assert!(matches!(splitting_type(&f, 9), Err(Error::NotPrime(9))));
    }

    #[test]
    fn two_splits_exactly_when_disc_is_one_mod_eight() {
        for f in Field::all() {
            let kind = splitting_type(&f, 2).unwrap();
            let expected = match f.disc().rem_euclid(8) {
                1 => SplittingType::Split,
                5 => SplittingType::Inert,
                _ => SplittingType::Ramified,
            };
            assert_eq!(kind, expected, "{f}");
        }
    }

    #[test]
    fn gaussian_primes_to_ten() {
        let f = Field::new(-1).unwrap();
        let primes = primes_up_to(&f, 10);
        let norms: Vec<u64> = primes.iter().map(|p| p.norm).collect();
        assert_eq!(norms, vec![2, 5, 5, 9]);
        assert_eq!(primes, brute_primes(&f, 10));
        assert!(primes_up_to(&f, 1).is_empty());
    }

    #[test]
    fn eisenstein_primes_to_three() {
        let f = Field::new(-3).unwrap();
        let primes = primes_up_to(&f, 3);
        assert_eq!(primes.len(), 1);
        assert_eq!(primes[0].norm, 3);
        assert_eq!(primes, brute_primes(&f, 3));
    }

    #[test]
    fn sieve_matches_trial_division_in_every_field() {
        for f in Field::all() {
            assert_eq!(primes_up_to(&f, 400), brute_primes(&f, 400), "{f}");
        }
    }

    #[test]
    fn restriction_is_a_prefix() {
        let f = Field::new(-7).unwrap();
        let big = primes_up_to(&f, 2000);
        for x in [0, 2, 50, 999, 1024] {
            let small: Vec<Prime> = big.iter().copied().filter(|p| p.norm <= x).collect();
            assert_eq!(small, primes_up_to(&f, x));
            assert_eq!(small, PrimeCache::global().primes_up_to(&f, x));
        }
    }

    #[test]
    fn cache_file_round_trip_and_header_mismatch() {
        let f = Field::new(-2).unwrap();
        let primes = primes_up_to(&f, 300);
        let mut buf = Vec::new();
        write_prime_file(&mut buf, &f, 300, &primes).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# qprimes v1 n=-2 bound=300\n"));
        assert_eq!(text.lines().nth(1), Some("0 1 2"));
        assert_eq!(read_prime_file(&buf[..], &f, 300).unwrap(), Some(primes));
        assert_eq!(read_prime_file(&buf[..], &f, 301).unwrap(), None);
        let other = Field::new(-1).unwrap();
        assert_eq!(read_prime_file(&buf[..], &other, 300).unwrap(), None);
    }

    #[test]
    fn corrupt_cache_is_an_error() {
        let f = Field::new(-1).unwrap();
        let text = "# qprimes v1 n=-1 bound=10\n1 1 3\n";
        assert!(matches!(
            read_prime_file(text.as_bytes(), &f, 10),
            Err(Error::CacheFormat(_))
        ));
    }

    #[test]
    fn load_or_sieve_rewrites_stale_files() {
        let dir = tempfile::tempdir().unwrap();
        let f = Field::new(-11).unwrap();
        let first = load_or_sieve(dir.path(), &f, 100).unwrap();
        assert_eq!(first, primes_up_to(&f, 100));
        let second = load_or_sieve(dir.path(), &f, 200).unwrap();
        assert_eq!(second, primes_up_to(&f, 200));
        let text = std::fs::read_to_string(cache_path(dir.path(), &f)).unwrap();
        assert!(text.starts_with("# qprimes v1 n=-11 bound=200"));
    }
}
