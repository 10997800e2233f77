//! Quotients of Laurent polynomials.
//!
//! No gcd is ever taken: equality is decided by cross-multiplication, which
//! is exact and needs no factorization.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Assignment, ExactError, SymExpr, Var};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatExpr {
    pub num: SymExpr,
    pub den: SymExpr,
}

impl RatExpr {
    pub fn new(num: SymExpr, den: SymExpr) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self { num, den })
    }

    pub fn poly(num: SymExpr) -> Self {
        Self {
            num,
            den: SymExpr::one(),
        }
    }

    pub fn zero() -> Self {
        Self::poly(SymExpr::zero())
    }

    pub fn one() -> Self {
        Self::poly(SymExpr::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Equality as rational functions.
    pub fn equals(&self, other: &RatExpr) -> bool {
        (&self.num * &other.den - &other.num * &self.den).is_zero()
    }

    /// Numerator of `self - other` over the common denominator; zero iff the
    /// two are equal.
    pub fn difference_numerator(&self, other: &RatExpr) -> SymExpr {
        &self.num * &other.den - &other.num * &self.den
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, at: &Assignment) -> Result<BigRational, ExactError> {
        let d = self.den.eval(at)?;
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self.num.eval(at)? / d)
    }

    pub fn substitute(&self, var: Var, replacement: &SymExpr) -> Result<Self, ExactError> {
        let num = self.num.substitute(var, replacement)?;
        let den = self.den.substitute(var, replacement)?;
        Self::new(num, den)
    }

    /// Multiplies by a constant.
    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

impl From<SymExpr> for RatExpr {
    fn from(s: SymExpr) -> Self {
        RatExpr::poly(s)
    }
}

impl Add<&RatExpr> for &RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        if self.den == rhs.den {
            return RatExpr {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        RatExpr {
            num: &self.num * &rhs.den + &rhs.num * &self.den,
            den: &self.den * &rhs.den,
        }
    }
}

impl Sub<&RatExpr> for &RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        self + &(-rhs)
    }
}

impl Mul<&RatExpr> for &RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        RatExpr {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

impl Div<&RatExpr> for &RatExpr {
    type Output = Result<RatExpr, ExactError>;
    fn div(self, rhs: &RatExpr) -> Result<RatExpr, ExactError> {
        RatExpr::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $m(self, rhs: RatExpr) -> RatExpr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatExpr> for RatExpr {
            type Output = RatExpr;
            fn $m(self, rhs: &RatExpr) -> RatExpr {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == SymExpr::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::symexpr::sym::*;
    use super::super::{assign, rat};
    use super::*;

    #[test]
    fn cross_multiplied_equality() {
        // (p^2 - 1)/(p - 1) == p + 1
        let a = RatExpr::new(p().pow(2) - int(1), p() - int(1)).unwrap();
        let b = RatExpr::poly(p() + int(1));
        assert!(a.equals(&b));
        assert!(!a.equals(&RatExpr::poly(p())));
    }

    #[test]
    fn field_operations() {
        let a = RatExpr::new(int(1), p() + int(1)).unwrap();
        let b = RatExpr::new(int(1), p() - int(1)).unwrap();
        let s = &a + &b;
        let expect = RatExpr::new(p() * int(2), p().pow(2) - int(1)).unwrap();
        assert!(s.equals(&expect));
        let q = (&a / &b).unwrap();
        let at = assign(&[(Var::P, 3)]);
        assert_eq!(q.eval(&at).unwrap(), rat(1, 2));
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RatExpr::new(int(1), int(0)).is_err());
        let a = RatExpr::new(int(1), p() - int(2)).unwrap();
        assert_eq!(
            a.eval(&assign(&[(Var::P, 2)])),
            Err(ExactError::DivisionByZero)
        );
    }
}
