//! Exact identities and cross-checks runnable from the command line.

use std::time::Instant;

use clap::ValueEnum;
use num_rational::Ratio;
use toric_cubic::constant::{
    alpha_value, archimedean_density, circle_count, leading_constant, polytope_volume, PlaceKind,
};
use toric_cubic::torsor::{
    count_divisor_oracle, count_moebius_tiny, count_torsor9, moebius_polynomial_direct, moebius_polynomial_reduced,
    psi2, HeightBound, TorsorTuple,
};
use toric_cubic::{Field, QuadInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn expected_moebius() -> Vec<i64> {
    let mut p = vec![1i64, 7, 1];
    for _ in 0..7 {
        let mut next = vec![0; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c;
        }
        p = next;
    }
    p
}

fn backend_grid(level: Level) -> Vec<(i64, u64)> {
    let mut grid = Vec::new();
    let small: &[u64] = match level {
        Level::Fast => &[1, 5, 10, 50],
        Level::Full => &[1, 5, 10, 50, 100],
    };
    for f in Field::all() {
        grid.extend(small.iter().map(|&b| (f.n(), b)));
    }
    if level == Level::Full {
        for n in [-1, -2, -3] {
            grid.extend([500, 1000].map(|b| (n, b)));
        }
    }
    grid
}

/// Deterministic pseudo-random tuples for the cube identity.
fn sample_tuples(field: &Field, count: usize) -> Vec<TorsorTuple> {
    let elems: Vec<QuadInt> = field.canonical_elements(30).into_iter().map(|(x, _)| x).collect();
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    (0..count)
        .map(|_| {
            let values = [(); 9].map(|_| {
                let x = elems[(next() % elems.len() as u64) as usize];
                field.mul(x, field.units()[(next() % field.w() as u64) as usize])
            });
            TorsorTuple::new(values).expect("nonzero entries")
        })
        .collect()
}

pub fn run(level: Level, mut report: impl FnMut(&Check)) -> bool {
    let mut all = true;
    let mut emit = |c: Check| {
        all &= c.passed;
        report(&c);
    };

    let reduced = moebius_polynomial_reduced();
    let mut expected = expected_moebius();
    expected.resize(reduced.len(), 0);
    emit(check(
        "moebius polynomial (reduced)",
        reduced == expected,
        format!("{reduced:?}"),
    ));
    let t = Instant::now();
    let direct = moebius_polynomial_direct();
    emit(check(
        "moebius polynomial (2^27 sum)",
        direct == reduced,
        format!("{direct:?} in {:.1?}", t.elapsed()),
    ));

    match polytope_volume() {
        Ok(v) => emit(check("polytope volume", v == Ratio::new(1, 2880), v.to_string())),
        Err(e) => emit(check("polytope volume", false, e.to_string())),
    }
    let alpha = alpha_value();
    emit(check("alpha", alpha == Ratio::new(1, 25920), alpha.to_string()));

    for (kind, target) in [
        (PlaceKind::Complex, 36.0 * std::f64::consts::PI.powi(2)),
        (PlaceKind::Real, 36.0),
    ] {
        let d = archimedean_density(kind);
        emit(check(
            format!("archimedean density {kind:?}"),
            (d / target - 1.0).abs() <= 1e-3,
            format!("{d:.12}"),
        ));
    }

    for f in Field::all() {
        let ok = sample_tuples(&f, 200).iter().all(|y| {
            let c = psi2(&f, y).expect("nonzero tuple");
            f.pow(c[0], 3) == f.product(c[1..].iter().copied())
        });
        emit(check(format!("cube identity n={}", f.n()), ok, "200 tuples"));
    }

    for f in Field::all() {
        let ones = circle_count(&f, 1.0);
        emit(check(
            format!("circle count C=1 n={}", f.n()),
            ones == f.w() as u64,
            ones.to_string(),
        ));
        match leading_constant(&f, 1000) {
            Ok(b) => emit(check(
                format!("constant assembly n={}", f.n()),
                true,
                format!("c(X=1000) = {:.12e}", f64::from(b.c_value)),
            )),
            Err(e) => emit(check(format!("constant assembly n={}", f.n()), false, e.to_string())),
        }
    }

    for (n, b) in backend_grid(level) {
        let f = Field::new(n).expect("admissible field");
        let bound = HeightBound::integer(b).expect("small bound");
        let torsor = count_torsor9(&f, bound);
        let oracle = count_divisor_oracle(&f, bound);
        emit(check(
            format!("backends n={n} B={b}"),
            torsor == oracle,
            format!("torsor9 {torsor}, oracle {oracle}"),
        ));
    }

    if level == Level::Full {
        let f = Field::new(-1).expect("admissible field");
        for b in 1..=5 {
            let bound = HeightBound::integer(b).expect("small bound");
            let torsor = count_torsor9(&f, bound) as i64;
            let moebius = count_moebius_tiny(&f, bound).expect("tiny bound");
            emit(check(
                format!("moebius counter n=-1 B={b}"),
                torsor == moebius,
                format!("torsor9 {torsor}, moebius {moebius}"),
            ));
        }
    }
    all
}
