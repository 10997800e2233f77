//! Hurwitz class numbers and Cohen's function `H(r, N)`.

use num_integer::Roots;
use num_rational::BigRational;
use num_traits::Zero;

use super::JacobiError;
use crate::exact::arith::{
    divisors, fundamental_part, kronecker, l_value_one_minus, mobius, sigma, zeta_one_minus,
};
use crate::exact::{int, rat};

/// `H(D)` by enumerating reduced forms `ax^2 + bxy + cy^2` of discriminant
/// `-D`, including imprimitive ones; forms equivalent to `a(x^2+y^2)` count
/// 1/2 and to `a(x^2+xy+y^2)` count 1/3. `H(0) = -1/12`.
pub fn hurwitz_class_number(d: i64) -> Result<BigRational, JacobiError> {
    if d < 0 {
        return Err(JacobiError::NegativeDiscriminant(d));
    }
    if d == 0 {
        return Ok(rat(-1, 12));
    }
    if d % 4 == 1 || d % 4 == 2 {
        return Ok(BigRational::zero());
    }
    let mut total = BigRational::zero();
    // reduced: |b| <= a <= c, so 3a^2 <= D
    let amax = (d / 3).sqrt() + 1;
    for a in 1..=amax {
        for b in -a..=a {
            let num = b * b + d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            // boundary forms are counted once with b >= 0
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            total += if a == b && b == c {
                rat(1, 3)
            } else if b == 0 && a == c {
                rat(1, 2)
            } else {
                int(1)
            };
        }
    }
    Ok(total)
}

/// Cohen's `H(r, N)`: `zeta(1-2r)` at `N = 0`; otherwise, writing
/// `(-1)^r N = D0 f^2` with `D0` fundamental,
/// `L(1-r, chi_D0) * sum_{d | f} mu(d) chi_D0(d) d^{r-1} sigma_{2r-1}(f/d)`,
/// and zero when `(-1)^r N` is not a discriminant.
pub fn cohen_h(r: u32, n: i64) -> Result<BigRational, JacobiError> {
    if n < 0 {
        return Err(JacobiError::NegativeDiscriminant(n));
    }
    if n == 0 {
        return Ok(zeta_one_minus(2 * r as usize));
    }
    let disc = if r.is_multiple_of(2) { n } else { -n };
    if disc.rem_euclid(4) > 1 {
        return Ok(BigRational::zero());
    }
    let (d0, f) = fundamental_part(disc);
    let l = l_value_one_minus(r as usize, d0);
    let mut s = BigRational::zero();
    for d in divisors(f) {
        let mu = mobius(d);
        let chi = kronecker(d0, d);
        if mu == 0 || chi == 0 {
            continue;
        }
        let dr = num_traits::pow(num_bigint::BigInt::from(d), r as usize - 1);
        let term = BigRational::from(dr * sigma(2 * r - 1, f / d));
        s += int(mu * chi) * term;
    }
    Ok(l * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_small() {
        assert_eq!(hurwitz_class_number(0).unwrap(), rat(-1, 12));
        assert_eq!(hurwitz_class_number(3).unwrap(), rat(1, 3));
        assert_eq!(hurwitz_class_number(4).unwrap(), rat(1, 2));
        assert_eq!(hurwitz_class_number(1).unwrap(), rat(0, 1));
        assert_eq!(hurwitz_class_number(2).unwrap(), rat(0, 1));
        assert_eq!(hurwitz_class_number(7).unwrap(), rat(1, 1));
        assert_eq!(hurwitz_class_number(8).unwrap(), rat(1, 1));
        assert_eq!(hurwitz_class_number(12).unwrap(), rat(4, 3));
        assert_eq!(hurwitz_class_number(15).unwrap(), rat(2, 1));
        assert_eq!(hurwitz_class_number(16).unwrap(), rat(3, 2));
        assert_eq!(hurwitz_class_number(23).unwrap(), rat(3, 1));
        assert!(hurwitz_class_number(-3).is_err());
    }

    #[test]
    fn cohen_matches_hurwitz() {
        for d in 0..=100 {
            assert_eq!(
                cohen_h(1, d).unwrap(),
                hurwitz_class_number(d).unwrap(),
                "D={d}"
            );
        }
    }

    #[test]
    fn cohen_values() {
        assert_eq!(cohen_h(3, 0).unwrap(), rat(-1, 252));
        assert_eq!(cohen_h(3, 3).unwrap(), rat(-2, 9));
        assert_eq!(cohen_h(3, 4).unwrap(), rat(-1, 2));
        assert_eq!(cohen_h(5, 0).unwrap(), rat(-1, 132));
        // congruence obstruction
        assert_eq!(cohen_h(3, 1).unwrap(), rat(0, 1));
        assert_eq!(cohen_h(3, 6).unwrap(), rat(0, 1));
        assert_eq!(cohen_h(2, 2).unwrap(), rat(0, 1));
    }
}
