//! Rational points of bounded height on the toric cubic surface
//! `x0³ = x1·x2·x3` over the nine imaginary quadratic fields of class
//! number one.
//!
//! * [`ring`]: exact arithmetic in the ring of integers (norms, canonical
//!   associates, lattice gcd, primes, factorization).
//! * [`torsor`]: the torsor parameterization, the coprimality graph and the
//!   two counting backends.
//! * [`constant`]: the predicted leading constant and its exactly checkable
//!   ingredients.

pub mod error;
pub mod ring;
pub mod torsor;
pub mod constant;

pub use error::{Error, Result};
pub use ring::{Field, QuadInt};

/// Largest height bound accepted by the counting code.
///
/// With `B <= 10^8` every norm met during counting is at most `B³ = 10^24`
/// and every coordinate at most about `2·B^{3/2}`, so coordinates fit in
/// `i64` and norms and products in 128-bit integers.
pub const MAX_BOUND: u64 = 100_000_000;
