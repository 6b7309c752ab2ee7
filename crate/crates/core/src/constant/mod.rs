//! The predicted leading constant `c = 2⁷π⁹/(6!·w⁷·Δ⁹) · ω` and its
//! ingredients.
//!
//! `ω = ∏_p (1 - q)⁷ (1 + 7q + q²)` with `q = 1/N(p)`, over the prime
//! ideals of the field. Constants are assembled in double-double
//! arithmetic (about 106 bits).

mod density;
mod lattice;
mod polytope;

use num_rational::Ratio;
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::ring::{Field, Prime, PrimeCache};

pub use density::{archimedean_density, density_integrand, log_density_integral, PlaceKind};
pub use lattice::{circle_count, norm_histogram, power_sum};
pub use polytope::{contains, ehrhart_polynomial, lattice_count, lattice_volume, polytope_volume, PERIOD, VARIABLES};

/// `C` in `|log f(q)| <= C q²` on `(0, 1/2]`: twice the value 28 that the
/// grid check in the tests confirms. The supremum of `|log f(q)|/q²` is the
/// limit 27 at `q → 0`.
pub const TAIL_CONSTANT: f64 = 56.0;

fn check_q(q: Ratio<i64>) -> Result<()> {
    if q <= Ratio::from_integer(0) || q > Ratio::new(1, 2) {
        return Err(Error::OutOfRange {
            what: "Euler factor argument",
            value: q.to_string(),
            expected: "0 < q <= 1/2",
        });
    }
    Ok(())
}

/// `(1-q)⁷(1+7q+q²)` exactly.
pub fn euler_factor_exact(q: Ratio<i64>) -> Result<Ratio<i128>> {
    check_q(q)?;
    let q = Ratio::new(*q.numer() as i128, *q.denom() as i128);
    let one = Ratio::from_integer(1);
    let mut out = one + q * 7 + q * q;
    for _ in 0..7 {
        out *= one - q;
    }
    Ok(out)
}

/// `(1-q)⁷(1+7q+q²)` in double-double precision.
pub fn euler_factor(q: Ratio<i64>) -> Result<TwoFloat> {
    check_q(q)?;
    Ok(factor_of_norm_ratio(TwoFloat::from(*q.numer()) / TwoFloat::from(*q.denom())))
}

fn factor_of_norm_ratio(q: TwoFloat) -> TwoFloat {
    let one = TwoFloat::from(1.0);
    (one - q).powi(7) * (one + q * 7.0 + q * q)
}

/// Partial Euler product over the prime ideals of norm at most `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerProduct {
    pub bound: u64,
    pub primes: usize,
    #[serde(serialize_with = "as_f64")]
    pub partial: TwoFloat,
    /// Upper bound on `|log(ω / partial)|`.
    pub tail_bound: f64,
}

impl EulerProduct {
    /// Upper bound on `|ω / partial - 1|`.
    pub fn relative_tail(&self) -> f64 {
        self.tail_bound.exp_m1()
    }
}

/// `C Σ_{N(p) > X} N(p)^{-2}` with at most two prime ideals per norm value,
/// bounded by `2C Σ_{m > X} m^{-2} < 2C / ⌊X⌋`.
pub fn euler_tail_bound(bound: u64) -> f64 {
    if bound < 1 {
        return f64::INFINITY;
    }
    2.0 * TAIL_CONSTANT / bound as f64
}

/// Euler product over a given prime list, which must hold every prime ideal
/// of norm at most `bound`.
pub fn euler_product_over(primes: &[Prime], bound: u64) -> EulerProduct {
    let used: Vec<&Prime> = primes.iter().filter(|p| p.norm <= bound).collect();
    let partial = used.iter().fold(TwoFloat::from(1.0), |acc, p| {
        acc * factor_of_norm_ratio(TwoFloat::from(1.0) / TwoFloat::from(p.norm))
    });
    EulerProduct {
        bound,
        primes: used.len(),
        partial,
        tail_bound: euler_tail_bound(bound),
    }
}

pub fn euler_product(field: &Field, bound: u64) -> EulerProduct {
    euler_product_over(&PrimeCache::global().primes_up_to(field, bound), bound)
}

/// `α = (1/120) / (3!)³`, checked against `1/(36·6!)`.
pub fn alpha_value() -> Ratio<i64> {
    let alpha = Ratio::new(1, 120) / Ratio::from_integer(6i64.pow(3));
    assert_eq!(alpha, Ratio::new(1, 36 * 720));
    alpha
}

/// `Δ⁹ = |disc|⁴·√|disc|`.
fn delta_ninth(field: &Field) -> TwoFloat {
    let d = TwoFloat::from(field.delta_squared());
    d.powi(4) * d.sqrt()
}

/// `2⁷π⁹ / (6!·w⁷·Δ⁹)`.
pub fn closed_form_prefactor(field: &Field) -> TwoFloat {
    let pi = twofloat::consts::PI;
    let w = TwoFloat::from(field.w() as u64);
    TwoFloat::from(128.0) * pi.powi(9) / (TwoFloat::from(720.0) * w.powi(7) * delta_ninth(field))
}

/// `9^q/(4·6!) · (2^r (2π)^s / Δ)⁹ · (hR/w)⁷ · ω`.
pub fn general_assembly(field: &Field, omega: TwoFloat) -> TwoFloat {
    let pi = twofloat::consts::PI;
    let (r, s) = field.signature();
    let q = field.unit_rank();
    let delta = delta_ninth(field);
    let place = TwoFloat::from(2.0).powi(r as i32) * (TwoFloat::from(2.0) * pi).powi(s as i32);
    let hr = TwoFloat::from((field.class_number() * field.regulator()) as u64);
    let w = TwoFloat::from(field.w() as u64);
    TwoFloat::from(9.0).powi(q as i32) / TwoFloat::from(4.0 * 720.0) * place.powi(9) / delta
        * (hr / w).powi(7)
        * omega
}

/// `α·δ·(residue of ζ_K)⁷·Δ⁻²·d_∞·ω` with `δ = 1` and the complex density
/// from quadrature.
pub fn tamagawa_assembly(field: &Field, omega: TwoFloat, density: f64) -> TwoFloat {
    let pi = twofloat::consts::PI;
    let alpha = alpha_value();
    let alpha = TwoFloat::from(*alpha.numer()) / TwoFloat::from(*alpha.denom());
    let delta = TwoFloat::from(field.delta_squared()).sqrt();
    let w = TwoFloat::from(field.w() as u64);
    let residue = TwoFloat::from(2.0) * pi / (w * delta);
    alpha * residue.powi(7) / delta.powi(2) * TwoFloat::from(density) * omega
}

fn as_f64<S: Serializer>(x: &TwoFloat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(f64::from(*x))
}

fn as_string<S: Serializer, T: std::fmt::Display>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Every ingredient of the predicted constant for one field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantBreakdown {
    pub field: i64,
    pub w: u32,
    pub disc: i64,
    #[serde(serialize_with = "as_string")]
    pub alpha: Ratio<i64>,
    pub euler_bound: u64,
    pub euler_primes: usize,
    #[serde(serialize_with = "as_f64")]
    pub euler_partial: TwoFloat,
    pub euler_tail_bound: f64,
    #[serde(serialize_with = "as_f64")]
    pub closed_form_prefactor: TwoFloat,
    #[serde(serialize_with = "as_f64")]
    pub assembled_general: TwoFloat,
    pub archimedean_density: f64,
    #[serde(serialize_with = "as_f64")]
    pub assembled_tamagawa: TwoFloat,
    #[serde(serialize_with = "as_f64")]
    pub c_value: TwoFloat,
}

/// Relative tolerance between the closed form and the general assembly.
pub const ASSEMBLY_TOLERANCE: f64 = 1e-12;

fn relative_gap(a: TwoFloat, b: TwoFloat) -> f64 {
    f64::from(((a - b) / b).abs())
}

/// Fills a [`ConstantBreakdown`] from a partial Euler product.
pub fn leading_constant_from(field: &Field, euler: EulerProduct) -> Result<ConstantBreakdown> {
    if euler.bound < 2 {
        return Err(Error::OutOfRange {
            what: "Euler bound",
            value: euler.bound.to_string(),
            expected: "at least 2",
        });
    }
    let prefactor = closed_form_prefactor(field);
    let c_value = prefactor * euler.partial;
    let general = general_assembly(field, euler.partial);
    if relative_gap(general, c_value) > ASSEMBLY_TOLERANCE {
        return Err(Error::ConstantMismatch {
            closed_form: c_value.into(),
            general: general.into(),
        });
    }
    let density = archimedean_density(PlaceKind::Complex);
    Ok(ConstantBreakdown {
        field: field.n(),
        w: field.w(),
        disc: field.disc(),
        alpha: alpha_value(),
        euler_bound: euler.bound,
        euler_primes: euler.primes,
        euler_partial: euler.partial,
        euler_tail_bound: euler.tail_bound,
        closed_form_prefactor: prefactor,
        assembled_general: general,
        archimedean_density: density,
        assembled_tamagawa: tamagawa_assembly(field, euler.partial, density),
        c_value,
    })
}

pub fn leading_constant(field: &Field, euler_bound: u64) -> Result<ConstantBreakdown> {
    if euler_bound < 2 {
        return Err(Error::OutOfRange {
            what: "Euler bound",
            value: euler_bound.to_string(),
            expected: "at least 2",
        });
    }
    leading_constant_from(field, euler_product(field, euler_bound))
}

/// `c·B·(log B)⁶`, zero for `B <= 1`.
pub fn predicted_count(c: f64, bound: f64) -> f64 {
    if bound <= 1.0 {
        0.0
    } else {
        c * bound * bound.ln().powi(6)
    }
}
