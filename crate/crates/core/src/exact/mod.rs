//! Exact arithmetic substrate: rationals, Laurent polynomials, rational
//! functions built from them, truncated q-series and small exact matrices.

pub mod arith;
pub mod linalg;
pub mod qseries;
pub mod ratexpr;
pub mod symexpr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use qseries::QSeries;
pub use ratexpr::RatExpr;
pub use symexpr::{assign, Assignment, Exps, SymExpr, Var};

/// The coefficient field of everything symbolic.
pub type ExactScalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("variable `{0}` has no assigned value")]
    MissingVariable(Var),
    #[error("variable `{0}` is zero but occurs with a negative exponent")]
    ZeroToNegativePower(Var),
    #[error("variable `{0}` may not carry a negative exponent")]
    NegativeExponent(Var),
    #[error("replacement is not a single term and cannot be inverted")]
    NotInvertible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible q-series levels {0} and {1}")]
    LevelMismatch(u64, u64),
}

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn int(n: i64) -> BigRational {
    rat(n, 1)
}

/// Lossy conversion for numeric routes.
pub fn to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
