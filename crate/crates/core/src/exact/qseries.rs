//! Truncated formal q-expansions with exact coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::arith::{bernoulli_numbers, sigma};
use super::{int, ExactError};

/// Default number of stored coefficients.
pub const DEFAULT_PRECISION: usize = 32;

/// `sum_{n < precision} coeffs[n] q^n`, carrying weight and level tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    pub weight: i32,
    pub level: u64,
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn new(weight: i32, level: u64, coeffs: Vec<BigRational>) -> Self {
        assert!(level >= 1, "level must be positive");
        assert!(!coeffs.is_empty(), "precision must be positive");
        Self {
            weight,
            level,
            coeffs,
        }
    }

    pub fn from_ints(weight: i32, level: u64, coeffs: &[i64]) -> Self {
        Self::new(weight, level, coeffs.iter().map(|&c| int(c)).collect())
    }

    /// Coefficients are known for exponents below this bound.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `q^n`; `None` beyond the precision.
    pub fn coeff(&self, n: usize) -> Option<&BigRational> {
        self.coeffs.get(n)
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let n = precision.min(self.precision());
        Self::new(self.weight, self.level, self.coeffs[..n].to_vec())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(
            self.weight,
            self.level,
            self.coeffs.iter().map(|x| x * c).collect(),
        )
    }

    /// Checked product; weights add and precision is the minimum.
    pub fn try_mul(&self, rhs: &QSeries) -> Result<QSeries, ExactError> {
        let level = combine_levels(self.level, rhs.level)?;
        let prec = self.precision().min(rhs.precision());
        let mut out = vec![BigRational::zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(prec - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(QSeries::new(self.weight + rhs.weight, level, out))
    }

    /// Checked sum. Weights must agree unless one side is zero.
    pub fn try_add(&self, rhs: &QSeries) -> Result<QSeries, ExactError> {
        let level = combine_levels(self.level, rhs.level)?;
        let prec = self.precision().min(rhs.precision());
        let out = (0..prec)
            .map(|n| &self.coeffs[n] + &rhs.coeffs[n])
            .collect();
        Ok(QSeries::new(self.weight, level, out))
    }

    pub fn pow(&self, n: u32) -> Result<QSeries, ExactError> {
        let mut one = vec![BigRational::zero(); self.precision()];
        one[0] = BigRational::one();
        let mut acc = QSeries::new(0, self.level, one);
        for _ in 0..n {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Level-1 Eisenstein series `E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n`.
    pub fn eisenstein(k: u32, precision: usize) -> Self {
        assert!(k >= 4 && k.is_multiple_of(2), "E_k needs even k >= 4");
        let bk = bernoulli_numbers(k as usize)[k as usize].clone();
        let factor = -int(2 * k as i64) / bk;
        let mut c = vec![BigRational::one()];
        for n in 1..precision {
            c.push(&factor * BigRational::from(sigma(k - 1, n as u64)));
        }
        Self::new(k as i32, 1, c)
    }

    /// `Delta = (E4^3 - E6^2)/1728`.
    pub fn delta(precision: usize) -> Self {
        let e4 = Self::eisenstein(4, precision);
        let e6 = Self::eisenstein(6, precision);
        let d = &e4.pow(3).unwrap() - &e6.pow(2).unwrap();
        d.scale(&BigRational::new(BigInt::one(), BigInt::from(1728)))
    }

    /// `Delta = q prod (1 - q^n)^24`, an independent route.
    pub fn delta_product(precision: usize) -> Self {
        let mut c = vec![BigInt::zero(); precision];
        if precision > 1 {
            c[1] = BigInt::one();
        }
        for n in 1..precision {
            for _ in 0..24 {
                for i in (n..precision).rev() {
                    let t = c[i - n].clone();
                    c[i] -= t;
                }
            }
        }
        Self::new(12, 1, c.into_iter().map(BigRational::from).collect())
    }

    /// Numeric value at `q` (|q| < 1) with the stored coefficients.
    pub fn eval(&self, q: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * q + super::to_f64(c);
        }
        acc
    }
}

fn combine_levels(a: u64, b: u64) -> Result<u64, ExactError> {
    // level-1 series are compatible with everything
    if a == b || b == 1 {
        Ok(a)
    } else if a == 1 {
        Ok(b)
    } else {
        Err(ExactError::LevelMismatch(a, b))
    }
}

impl Mul<&QSeries> for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.try_mul(rhs).expect("incompatible q-series levels")
    }
}

impl Add<&QSeries> for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.try_add(rhs).expect("incompatible q-series levels")
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-BigRational::one())
    }
}

impl Sub<&QSeries> for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    #[test]
    fn eisenstein_leading_terms() {
        let e4 = QSeries::eisenstein(4, 4);
        assert_eq!(e4.coeffs()[1], int(240));
        assert_eq!(e4.coeffs()[2], int(240 * 9));
        let e6 = QSeries::eisenstein(6, 3);
        assert_eq!(e6.coeffs()[1], int(-504));
        let sq = &e4 * &e4;
        assert_eq!(sq.coeffs()[0], int(1));
        assert_eq!(sq.weight, 8);
        // E4^2 = E8
        assert_eq!(sq, QSeries::eisenstein(8, 4));
    }

    #[test]
    fn delta_two_routes() {
        let d = QSeries::delta(32);
        assert_eq!(d.coeffs()[0], int(0));
        assert_eq!(d.coeffs()[1], int(1));
        assert_eq!(d.coeffs()[2], int(-24));
        assert_eq!(d.coeffs()[11], int(534612));
        assert_eq!(d, QSeries::delta_product(32));
    }

    #[test]
    fn weight_18_eigenform() {
        let f = &QSeries::eisenstein(6, 8) * &QSeries::delta(8);
        assert_eq!(f.weight, 18);
        assert_eq!(f.coeffs()[2], int(-528));
        assert_eq!(f.coeffs()[3], int(-4284));
        // multiplicativity of the eigenvalues
        assert_eq!(&f.coeffs()[2] * &f.coeffs()[3], f.coeffs()[6]);
    }

    #[test]
    fn precision_is_minimum() {
        let a = QSeries::eisenstein(4, 10);
        let b = QSeries::eisenstein(6, 7);
        assert_eq!((&a * &b).precision(), 7);
        assert_eq!((&a + &b).precision(), 7);
    }

    #[test]
    fn level_mismatch() {
        let a = QSeries::from_ints(2, 2, &[1, 1]);
        let b = QSeries::from_ints(2, 3, &[1, 1]);
        assert_eq!(a.try_mul(&b), Err(ExactError::LevelMismatch(2, 3)));
        let c = QSeries::from_ints(2, 1, &[1, 1]);
        assert_eq!(a.try_mul(&c).unwrap().level, 2);
    }

    fn schoolbook(a: &[i64], b: &[i64]) -> Vec<i64> {
        let n = a.len().min(b.len());
        let mut out = vec![0i64; n];
        for k in 0..n {
            for i in 0..=k {
                out[k] += a[i] * b[k - i];
            }
        }
        out
    }

    proptest! {
        #[test]
        fn mul_matches_schoolbook(
            a in proptest::collection::vec(-50i64..50, 1..30),
            b in proptest::collection::vec(-50i64..50, 1..30),
        ) {
            let qa = QSeries::from_ints(0, 1, &a);
            let qb = QSeries::from_ints(0, 1, &b);
            let got = &qa * &qb;
            let want: Vec<BigRational> = schoolbook(&a, &b).into_iter().map(|x| rat(x, 1)).collect();
            prop_assert_eq!(got.coeffs(), &want[..]);
        }
    }
}
