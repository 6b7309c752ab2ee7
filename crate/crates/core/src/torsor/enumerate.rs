//! Exhaustive enumeration of canonical torsor tuples.
//!
//! Every pair variable `y_{j,k}` occurs squared in the monomial `M_k`, and
//! every single variable occurs cubed, so all nine norms are at most `√B`.
//! One table of canonical elements up to that norm, with prime supports,
//! serves every level of the search.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{CoprimalityGraph, HeightBound, Vertex};
use crate::ring::{factor, icbrt_u64, isqrt_u128, Field, PrimeCache, QuadInt};

/// Pair variables after the three singles, with `(j, k)` such that the
/// variable has exponent 1 in `M_j` and exponent 2 in `M_k`.
const PAIR_ORDER: [(Vertex, usize, usize); 6] = [
    (Vertex::Y21, 1, 0),
    (Vertex::Y31, 2, 0),
    (Vertex::Y32, 2, 1),
    (Vertex::Y13, 0, 2),
    (Vertex::Y12, 0, 1),
    (Vertex::Y23, 1, 2),
];

/// Canonical elements of norm at most `max_norm`, sorted by `(norm, x)`,
/// each with the ids of the prime ideals dividing it.
#[derive(Debug, Clone)]
pub struct ElementTable {
    elements: Vec<QuadInt>,
    norms: Vec<u64>,
    offsets: Vec<u32>,
    support: Vec<u32>,
    prime_count: usize,
}

impl ElementTable {
    pub fn new(field: &Field, max_norm: u64) -> ElementTable {
        let primes = PrimeCache::global().primes_up_to(field, max_norm);
        let ids: HashMap<QuadInt, u32> = primes
            .iter()
            .enumerate()
            .map(|(i, p)| (p.element, i as u32))
            .collect();
        let listed = field.canonical_elements(max_norm);
        let mut table = ElementTable {
            elements: Vec::with_capacity(listed.len()),
            norms: Vec::with_capacity(listed.len()),
            offsets: Vec::with_capacity(listed.len() + 1),
            support: Vec::new(),
            prime_count: primes.len(),
        };
        table.offsets.push(0);
        for (x, n) in listed {
            let fac = factor(field, x).expect("canonical elements are nonzero");
            table
                .support
                .extend(fac.factors.iter().map(|(p, _)| ids[p]));
            table.offsets.push(table.support.len() as u32);
            table.elements.push(x);
            table.norms.push(n);
        }
        table
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> QuadInt {
        self.elements[i]
    }

    pub fn norm(&self, i: usize) -> u64 {
        self.norms[i]
    }

    pub fn prime_count(&self) -> usize {
        self.prime_count
    }

    /// Prime ids dividing element `i`, in increasing norm order.
    pub fn support(&self, i: usize) -> &[u32] {
        &self.support[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    /// Number of leading entries with norm at most `bound`.
    pub fn prefix_len(&self, bound: u64) -> usize {
        self.norms.partition_point(|&n| n <= bound)
    }
}

/// Search state of one worker. `owner[p]` is the set of vertices, as a
/// bitmask, whose current value is divisible by prime `p`.
struct Search<'a> {
    table: &'a ElementTable,
    owner: Vec<u16>,
    forbidden: [u16; 9],
}

impl<'a> Search<'a> {
    fn new(table: &'a ElementTable) -> Self {
        let all = (1u16 << 9) - 1;
        let forbidden = Vertex::ALL.map(|v| all & !CoprimalityGraph::neighbour_mask(v) & !(1 << v.index()));
        Search {
            table,
            owner: vec![0; table.prime_count()],
            forbidden,
        }
    }

    #[inline]
    fn admissible(&self, v: Vertex, i: usize) -> bool {
        let mask = self.forbidden[v.index()];
        self.table
            .support(i)
            .iter()
            .all(|&p| self.owner[p as usize] & mask == 0)
    }

    #[inline]
    fn assign(&mut self, v: Vertex, i: usize) {
        for &p in self.table.support(i) {
            self.owner[p as usize] |= 1 << v.index();
        }
    }

    #[inline]
    fn release(&mut self, v: Vertex, i: usize) {
        for &p in self.table.support(i) {
            self.owner[p as usize] &= !(1 << v.index());
        }
    }

    fn count_singles(&mut self, singles: [usize; 3], bound: u64) -> u64 {
        let mut residual = [bound; 3];
        for (j, &i) in singles.iter().enumerate() {
            let n = self.table.norm(i);
            residual[j] /= n * n * n;
            self.assign(Vertex::single(j + 1), i);
        }
        let total = self.count_pairs(0, residual);
        for (j, &i) in singles.iter().enumerate() {
            self.release(Vertex::single(j + 1), i);
        }
        total
    }

    fn count_pairs(&mut self, level: usize, residual: [u64; 3]) -> u64 {
        let (v, once, twice) = PAIR_ORDER[level];
        let limit = residual[once].min(isqrt_u128(residual[twice] as u128) as u64);
        let end = self.table.prefix_len(limit);
        if level + 1 == PAIR_ORDER.len() {
            return (0..end).filter(|&i| self.admissible(v, i)).count() as u64;
        }
        let mut total = 0;
        for i in 0..end {
            if !self.admissible(v, i) {
                continue;
            }
            let n = self.table.norm(i);
            let mut next = residual;
            next[once] /= n;
            next[twice] /= n * n;
            self.assign(v, i);
            total += self.count_pairs(level + 1, next);
            self.release(v, i);
        }
        total
    }
}

/// Pairwise coprime triples `(y1, y2, y3)` of table indices with each norm
/// at most `∛B`.
fn single_triples(table: &ElementTable, bound: u64) -> Vec<[usize; 3]> {
    let end = table.prefix_len(icbrt_u64(bound));
    let disjoint = |i: usize, j: usize| {
        let (a, b) = (table.support(i), table.support(j));
        a.iter().all(|p| !b.contains(p))
    };
    let mut out = Vec::new();
    for i1 in 0..end {
        for i2 in 0..end {
            if !disjoint(i1, i2) {
                continue;
            }
            for i3 in 0..end {
                let cube = [i1, i2, i3].iter().map(|&i| table.norm(i).pow(3)).max();
                if cube > Some(bound) {
                    continue;
                }
                if disjoint(i1, i3) && disjoint(i2, i3) {
                    out.push([i1, i2, i3]);
                }
            }
        }
    }
    out
}

/// `N(B)` by enumeration of canonical coprime torsor tuples, times `w²`.
///
/// Work is split over the triples `(y1, y2, y3)` on the current rayon pool.
pub fn count_torsor9(field: &Field, bound: HeightBound) -> u64 {
    let b = bound.floor();
    if b == 0 {
        return 0;
    }
    let table = ElementTable::new(field, isqrt_u128(b as u128) as u64);
    count_with_table(field, &table, b)
}

pub(crate) fn count_with_table(field: &Field, table: &ElementTable, b: u64) -> u64 {
    let canonical: u64 = single_triples(table, b)
        .into_par_iter()
        .map_init(|| Search::new(table), |s, triple| s.count_singles(triple, b))
        .sum();
    let w = field.w() as u64;
    canonical * w * w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsor::{is_coprime, psi2, TorsorTuple};

    fn gauss() -> Field {
        Field::new(-1).unwrap()
    }

    #[test]
    fn table_supports_match_factorization() {
        let f = Field::new(-7).unwrap();
        let t = ElementTable::new(&f, 200);
        assert_eq!(t.len(), f.canonical_elements(200).len());
        assert_eq!(t.element(0), QuadInt::ONE);
        assert!(t.support(0).is_empty());
        for i in 0..t.len() {
            let fac = factor(&f, t.element(i)).unwrap();
            assert_eq!(t.support(i).len(), fac.factors.len());
        }
        assert_eq!(t.prefix_len(1), 1);
        assert_eq!(t.prefix_len(0), 0);
    }

    #[test]
    fn small_bounds() {
        let f = gauss();
        assert_eq!(count_torsor9(&f, HeightBound::new(0.5).unwrap()), 0);
        assert_eq!(count_torsor9(&f, HeightBound::integer(1).unwrap()), 16);
        let e = Field::new(-3).unwrap();
        assert_eq!(count_torsor9(&e, HeightBound::integer(1).unwrap()), 36);
    }

    /// Unoptimized recount: all canonical 9-tuples with norms up to `√B`,
    /// filtered by the height of `Ψ₂` and the gcd-based coprimality test.
    fn naive(field: &Field, b: u64) -> u64 {
        let s = isqrt_u128(b as u128) as u64;
        let elems: Vec<QuadInt> = field.canonical_elements(s).into_iter().map(|(x, _)| x).collect();
        let mut count = 0;
        let mut idx = [0usize; 9];
        loop {
            let y = TorsorTuple::new(idx.map(|i| elems[i])).unwrap();
            let c = psi2(field, &y).unwrap();
            if c[1..].iter().all(|&x| field.norm(x) <= b as u128) && is_coprime(field, &y) {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == 9 {
                    let w = field.w() as u64;
                    return count * w * w;
                }
                idx[k] += 1;
                if idx[k] < elems.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn agrees_with_naive_recount() {
        for n in [-1, -2, -3, -7] {
            let f = Field::new(n).unwrap();
            for b in [1, 4, 9, 12] {
                assert_eq!(count_torsor9(&f, HeightBound::integer(b).unwrap()), naive(&f, b), "n={n} B={b}");
            }
        }
    }
}
