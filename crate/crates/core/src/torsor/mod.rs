//! The torsor parameterization of `x0³ = x1·x2·x3`, the coprimality graph,
//! the height, and the counting backends.
//!
//! Variables are indexed by the nine vertices `(1), (2), (3), (j,k)` of the
//! coprimality graph. Statements involving `(j, k, l)` range over the cyclic
//! triples `(1,2,3), (2,3,1), (3,1,2)`.

mod enumerate;
mod moebius;
mod oracle;

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{gcd, gcd_all, Field, QuadInt};
use crate::MAX_BOUND;

pub use enumerate::{count_torsor9, ElementTable};
pub use moebius::{count_moebius_tiny, Polynomial, moebius_polynomial_direct, moebius_polynomial_reduced, MOEBIUS_TINY_MAX_BOUND};
pub use oracle::count_divisor_oracle;

pub const CYCLIC: [(usize, usize, usize); 3] = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Vertex {
    Y1,
    Y2,
    Y3,
    Y12,
    Y21,
    Y13,
    Y31,
    Y23,
    Y32,
}

impl Vertex {
    pub const ALL: [Vertex; 9] = [
        Vertex::Y1,
        Vertex::Y2,
        Vertex::Y3,
        Vertex::Y12,
        Vertex::Y21,
        Vertex::Y13,
        Vertex::Y31,
        Vertex::Y23,
        Vertex::Y32,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// `(j)` for `j ∈ {1, 2, 3}`.
    pub fn single(j: usize) -> Vertex {
        [Vertex::Y1, Vertex::Y2, Vertex::Y3][j - 1]
    }

    /// `(j,k)` for distinct `j, k ∈ {1, 2, 3}`.
    pub fn pair(j: usize, k: usize) -> Vertex {
        match (j, k) {
            (1, 2) => Vertex::Y12,
            (2, 1) => Vertex::Y21,
            (1, 3) => Vertex::Y13,
            (3, 1) => Vertex::Y31,
            (2, 3) => Vertex::Y23,
            (3, 2) => Vertex::Y32,
            _ => panic!("no vertex ({j},{k})"),
        }
    }

    pub fn label(self) -> &'static str {
        ["(1)", "(2)", "(3)", "(1,2)", "(2,1)", "(1,3)", "(3,1)", "(2,3)", "(3,2)"][self.index()]
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The 9-cycle `(1)–(2,1)–(1,2)–(2)–(3,2)–(2,3)–(3)–(1,3)–(3,1)–(1)`.
///
/// Its edges join variables that may share prime factors; every one of the
/// 27 non-edges is a pair that must be coprime.
#[derive(Debug, Clone, Copy, Default)]
pub struct CoprimalityGraph;

impl CoprimalityGraph {
    pub const CYCLE: [Vertex; 9] = [
        Vertex::Y1,
        Vertex::Y21,
        Vertex::Y12,
        Vertex::Y2,
        Vertex::Y32,
        Vertex::Y23,
        Vertex::Y3,
        Vertex::Y13,
        Vertex::Y31,
    ];

    pub fn edges() -> [(Vertex, Vertex); 9] {
        std::array::from_fn(|i| (Self::CYCLE[i], Self::CYCLE[(i + 1) % 9]))
    }

    pub fn adjacent(u: Vertex, v: Vertex) -> bool {
        Self::edges()
            .iter()
            .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Unordered non-adjacent pairs, each listed once with the smaller
    /// vertex first.
    pub fn non_edges() -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(27);
        for (i, &u) in Vertex::ALL.iter().enumerate() {
            for &v in &Vertex::ALL[i + 1..] {
                if !Self::adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Bitmask over [`Vertex::index`] of the two neighbours of `v`.
    pub fn neighbour_mask(v: Vertex) -> u16 {
        Self::edges().iter().fold(0, |m, &(a, b)| {
            if a == v {
                m | 1 << b.index()
            } else if b == v {
                m | 1 << a.index()
            } else {
                m
            }
        })
    }
}

/// Nonzero values for all nine vertices, stored in [`Vertex::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TorsorTuple([QuadInt; 9]);

impl TorsorTuple {
    pub fn new(values: [QuadInt; 9]) -> Result<Self> {
        if values.iter().any(|y| y.is_zero()) {
            return Err(Error::ZeroElement("torsor tuple"));
        }
        Ok(TorsorTuple(values))
    }

    pub fn ones() -> Self {
        TorsorTuple([QuadInt::ONE; 9])
    }

    pub fn with(mut self, v: Vertex, value: QuadInt) -> Result<Self> {
        if value.is_zero() {
            return Err(Error::ZeroElement("torsor tuple"));
        }
        self.0[v.index()] = value;
        Ok(self)
    }

    pub fn values(&self) -> &[QuadInt; 9] {
        &self.0
    }
}

impl Index<Vertex> for TorsorTuple {
    type Output = QuadInt;
    fn index(&self, v: Vertex) -> &QuadInt {
        &self.0[v.index()]
    }
}

/// Four projective coordinates `(x0 : x1 : x2 : x3)`.
pub type Coords = [QuadInt; 4];

/// A point of the open subset `x0·x1·x2·x3 ≠ 0`, stored as its unique
/// primitive representative with canonical `x0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SurfacePoint(Coords);

impl SurfacePoint {
    pub fn new(field: &Field, coords: Coords) -> Result<Self> {
        if coords.iter().any(|x| x.is_zero()) {
            return Err(Error::ZeroElement("surface point coordinate"));
        }
        let cube = field.pow(coords[0], 3);
        let rhs = field.product(coords[1..].iter().copied());
        if cube != rhs {
            return Err(Error::OutOfRange {
                what: "point",
                value: format!("{coords:?}"),
                expected: "x0^3 = x1 x2 x3",
            });
        }
        let g = gcd_all(field, &coords)?;
        let (_, unit) = field.canonical_associate(coords[0])?;
        let scaled = coords.map(|x| field.mul(unit, field.div_exact(x, g).expect("gcd divides")));
        Ok(SurfacePoint(scaled))
    }

    pub fn coords(&self) -> &Coords {
        &self.0
    }
}

fn nonzero(values: &[QuadInt], what: &'static str) -> Result<()> {
    if values.iter().any(|y| y.is_zero()) {
        Err(Error::ZeroElement(what))
    } else {
        Ok(())
    }
}

/// Coordinates `(∏ all, y_j³·y_{j,k}·y_{j,l}·y_{k,j}²·y_{l,j}²)` for a
/// full tuple; the three public maps are specializations.
fn torsor_coords(field: &Field, y: &TorsorTuple) -> Coords {
    let mut out = [QuadInt::ONE; 4];
    out[0] = field.product(y.values().iter().copied());
    for (j, k, l) in CYCLIC {
        let p = |a, b| y[Vertex::pair(a, b)];
        let sq = |x| field.mul(x, x);
        out[j] = field.product([
            field.pow(y[Vertex::single(j)], 3),
            p(j, k),
            p(j, l),
            sq(p(k, j)),
            sq(p(l, j)),
        ]);
    }
    out
}

/// `(y12·y31·y23, y12·y31², y23·y12², y31·y23²)`.
pub fn psi0(field: &Field, y23: QuadInt, y31: QuadInt, y12: QuadInt) -> Result<Coords> {
    nonzero(&[y23, y31, y12], "psi0")?;
    let y = TorsorTuple::ones()
        .with(Vertex::Y23, y23)?
        .with(Vertex::Y31, y31)?
        .with(Vertex::Y12, y12)?;
    Ok(torsor_coords(field, &y))
}

/// Input order `(y12, y21, y13, y31, y23, y32)`.
pub fn psi1(field: &Field, y: [QuadInt; 6]) -> Result<Coords> {
    nonzero(&y, "psi1")?;
    let mut full = [QuadInt::ONE; 9];
    full[3..].copy_from_slice(&y);
    Ok(torsor_coords(field, &TorsorTuple(full)))
}

pub fn psi2(field: &Field, y: &TorsorTuple) -> Result<Coords> {
    nonzero(y.values(), "psi2")?;
    Ok(torsor_coords(field, y))
}

/// Anticanonical height: the largest coordinate norm of the primitive
/// representative. Finite places contribute 1 on primitive tuples since the
/// class number is one.
pub fn height(field: &Field, x: &Coords) -> Result<u128> {
    let g = gcd_all(field, x)?;
    Ok(x.iter()
        .map(|&c| field.norm(field.div_exact(c, g).expect("gcd divides")))
        .max()
        .unwrap_or(0))
}

/// Whether `gcd(y_u, y_v)` is a unit for all 27 non-adjacent pairs.
pub fn is_coprime(field: &Field, y: &TorsorTuple) -> bool {
    CoprimalityGraph::non_edges().into_iter().all(|(u, v)| {
        let g = gcd(field, y[u], y[v]).expect("tuple entries are nonzero");
        field.is_unit(g)
    })
}

/// A height bound `B >= 0`.
///
/// Norms are integers, so `norm <= B` is decided against `floor(B)`; the
/// original value is kept for reporting and for `B·(log B)⁶`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeightBound {
    value: f64,
    floor: u64,
}

impl HeightBound {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::OutOfRange {
                what: "height bound",
                value: value.to_string(),
                expected: "a finite number >= 0",
            });
        }
        let floor = value.floor() as u64;
        if floor > MAX_BOUND {
            return Err(Error::BoundTooLarge(floor));
        }
        Ok(HeightBound { value, floor })
    }

    pub fn integer(b: u64) -> Result<Self> {
        if b > MAX_BOUND {
            return Err(Error::BoundTooLarge(b));
        }
        Ok(HeightBound {
            value: b as f64,
            floor: b,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn floor(&self) -> u64 {
        self.floor
    }
}

impl FromStr for HeightBound {
    type Err = Error;

    /// Accepts integers (`100000`) as well as decimal or scientific
    /// notation (`0.5`, `1e5`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(b) = s.parse::<u64>() {
            return HeightBound::integer(b);
        }
        let value: f64 = s.parse().map_err(|_| Error::OutOfRange {
            what: "height bound",
            value: s.to_string(),
            expected: "an integer or decimal number",
        })?;
        HeightBound::new(value)
    }
}

impl fmt::Display for HeightBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value == self.floor as f64 {
            write!(f, "{}", self.floor)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> Field {
        Field::new(-1).unwrap()
    }

    #[test]
    fn graph_shape() {
        let edges = CoprimalityGraph::edges();
        assert_eq!(edges.len(), 9);
        assert_eq!(CoprimalityGraph::non_edges().len(), 27);
        for v in Vertex::ALL {
            assert_eq!(CoprimalityGraph::neighbour_mask(v).count_ones(), 2, "{v}");
        }
        // Walking neighbours from (1) visits every vertex before returning.
        let mut seen = vec![Vertex::Y1];
        let mut cur = Vertex::Y1;
        let mut prev = None;
        loop {
            let next = Vertex::ALL
                .into_iter()
                .find(|&v| CoprimalityGraph::adjacent(cur, v) && Some(v) != prev)
                .unwrap();
            if next == Vertex::Y1 {
                break;
            }
            seen.push(next);
            prev = Some(cur);
            cur = next;
        }
        assert_eq!(seen.len(), 9);
        assert!(CoprimalityGraph::adjacent(Vertex::Y1, Vertex::Y21));
        assert!(CoprimalityGraph::adjacent(Vertex::Y1, Vertex::Y31));
        assert!(!CoprimalityGraph::adjacent(Vertex::Y1, Vertex::Y2));
    }

    #[test]
    fn psi_on_all_ones() {
        let f = gauss();
        let one = QuadInt::ONE;
        assert_eq!(psi0(&f, one, one, one).unwrap(), [one; 4]);
        assert_eq!(psi1(&f, [one; 6]).unwrap(), [one; 4]);
        assert_eq!(psi2(&f, &TorsorTuple::ones()).unwrap(), [one; 4]);
        assert!(psi0(&f, QuadInt::ZERO, one, one).is_err());
    }

    #[test]
    fn psi0_direct_evaluation() {
        let f = gauss();
        let t = QuadInt::new(1, 1);
        let one = QuadInt::ONE;
        let c = psi0(&f, t, one, one).unwrap();
        assert_eq!(c, [t, one, t, QuadInt::new(0, 2)]);
    }

    #[test]
    fn psi1_reduces_to_psi0() {
        let f = Field::new(-7).unwrap();
        let (y12, y23, y31) = (QuadInt::new(2, 1), QuadInt::new(-1, 3), QuadInt::new(4, 0));
        let one = QuadInt::ONE;
        assert_eq!(
            psi1(&f, [y12, one, one, y31, y23, one]).unwrap(),
            psi0(&f, y23, y31, y12).unwrap()
        );
    }

    #[test]
    fn psi2_direct_evaluation() {
        let f = gauss();
        let t = QuadInt::new(1, 1);
        let y = TorsorTuple::ones().with(Vertex::Y1, t).unwrap();
        let c = psi2(&f, &y).unwrap();
        // y1 occurs only in coordinates 0 and 1.
        assert_eq!(c, [t, f.pow(t, 3), QuadInt::ONE, QuadInt::ONE]);
    }

    #[test]
    fn height_examples() {
        let f = gauss();
        assert_eq!(height(&f, &[QuadInt::rational(2); 4]).unwrap(), 1);
        let one = QuadInt::ONE;
        assert_eq!(height(&f, &[one, one, one, QuadInt::new(1, 1)]).unwrap(), 2);
        assert!(height(&f, &[QuadInt::ZERO; 4]).is_err());
    }

    #[test]
    fn coprimality_examples() {
        let f = gauss();
        let t = QuadInt::new(1, 1);
        assert!(is_coprime(&f, &TorsorTuple::ones()));
        let bad = TorsorTuple::ones().with(Vertex::Y1, t).unwrap().with(Vertex::Y2, t).unwrap();
        assert!(!is_coprime(&f, &bad));
        let good = TorsorTuple::ones().with(Vertex::Y1, t).unwrap().with(Vertex::Y21, t).unwrap();
        for (u, v) in CoprimalityGraph::non_edges() {
            assert!(f.is_unit(gcd(&f, good[u], good[v]).unwrap()), "{u} {v}");
        }
        assert!(is_coprime(&f, &good));
    }

    #[test]
    fn surface_point_normalization() {
        let f = gauss();
        let i = QuadInt::new(0, 1);
        let two = QuadInt::rational(2);
        // 2i·(1 : 1 : 1 : 1) scaled so that x0 = 2i; x1 x2 x3 = (2i)^3 = -8i.
        let coords = [f.mul(two, i), f.mul(two, i), f.mul(two, i), f.mul(two, i)];
        let p = SurfacePoint::new(&f, coords).unwrap();
        assert_eq!(p.coords(), &[QuadInt::ONE; 4]);
        assert!(SurfacePoint::new(&f, [QuadInt::ONE, two, QuadInt::ONE, QuadInt::ONE]).is_err());
    }

    #[test]
    fn bound_parsing() {
        let b: HeightBound = "1e5".parse().unwrap();
        assert_eq!(b.floor(), 100_000);
        let b: HeightBound = "0.5".parse().unwrap();
        assert_eq!(b.floor(), 0);
        assert_eq!(b.to_string(), "0.5");
        let b: HeightBound = "100".parse().unwrap();
        assert_eq!(b.to_string(), "100");
        assert!("-1".parse::<HeightBound>().is_err());
        assert!("1e9".parse::<HeightBound>().is_err());
        assert!("abc".parse::<HeightBound>().is_err());
    }
}
