//! Exact arithmetic in cyclotomic fields ℚ(ζₙ).
//!
//! A [`CycloNum`] stores its coordinates over the power basis
//! `1, ζₙ, …, ζₙ^{φ(n)−1}` after reduction modulo the n-th cyclotomic
//! polynomial, so equality of two values of the same order is coordinate
//! equality. Values of different orders are compared and combined inside
//! ℚ(ζ_lcm).

mod cyclo;
pub mod poly;
pub mod qmat;
mod serial;

pub use cyclo::CycloNum;
pub use qmat::QMatrix;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Shorthand for a rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `ζₙ^k`.
pub fn zeta(n: u32, k: i64) -> CycloNum {
    CycloNum::root_of_unity(n, k)
}
