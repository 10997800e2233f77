//! Elementary number theory on machine integers with exact rational outputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{int, rat};

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// `sigma_k(n) = sum_{d | n} d^k`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|d| num_traits::pow(BigInt::from(d), k as usize))
        .sum()
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Kronecker symbol `(a/n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i64 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i64;
    for (p, e) in factorize(n) {
        let s = if p == 2 {
            if a % 2 == 0 {
                0
            } else {
                match a.rem_euclid(8) {
                    1 | 7 => 1,
                    _ => -1,
                }
            }
        } else {
            legendre(a, p)
        };
        if e % 2 == 1 {
            result *= s;
        } else if s == 0 {
            result = 0;
        }
    }
    result
}

fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let r = mod_pow(a, (p - 1) / 2, p);
    if r == 1 {
        1
    } else {
        -1
    }
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128 % m as u128;
    let mut b128 = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m as u128;
        }
        b128 = b128 * b128 % m as u128;
        e >>= 1;
    }
    b = r as u64;
    b
}

/// Writes a discriminant `d` (`d ≡ 0, 1 mod 4`, `d != 0`) as `d0 * f^2` with
/// `d0` fundamental.
pub fn fundamental_part(d: i64) -> (i64, u64) {
    assert!(d != 0 && d.rem_euclid(4) <= 1, "not a discriminant: {d}");
    let mut core = d.signum();
    let mut f = 1u64;
    for (p, e) in factorize(d.unsigned_abs()) {
        core *= (p as i64).pow(e % 2);
        f *= p.pow(e / 2);
    }
    // core is the squarefree part; fix up to a fundamental discriminant
    if core.rem_euclid(4) == 1 {
        (core, f)
    } else {
        debug_assert!(f.is_multiple_of(2));
        (4 * core, f / 2)
    }
}

/// Extended gcd: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); n + 1];
    b[0] = BigRational::one();
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += bj * BigRational::from(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b[m] = -acc / BigRational::from(BigInt::from(m + 1));
    }
    b
}

/// Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_poly(n: usize, x: &BigRational) -> BigRational {
    let b = bernoulli_numbers(n);
    let mut acc = BigRational::zero();
    let mut binom = BigInt::one();
    for (j, bj) in b.iter().enumerate() {
        acc += BigRational::from(binom.clone()) * bj * num_traits::pow(x.clone(), n - j);
        binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `zeta(1 - n)` for `n >= 2`, exactly: `-B_n / n`.
pub fn zeta_one_minus(n: usize) -> BigRational {
    assert!(n >= 2);
    -bernoulli_numbers(n)[n].clone() / int(n as i64)
}

/// Generalized Bernoulli number `B_{n,chi}` for the Kronecker character of
/// the fundamental discriminant `d0`.
pub fn generalized_bernoulli(n: usize, d0: i64) -> BigRational {
    let f = d0.unsigned_abs();
    let mut acc = BigRational::zero();
    for a in 1..=f {
        let chi = kronecker(d0, a);
        if chi != 0 {
            acc += int(chi) * bernoulli_poly(n, &rat(a as i64, f as i64));
        }
    }
    acc * num_traits::pow(int(f as i64), n - 1)
}

/// Dirichlet `L(1 - r, chi_{d0})` for `r >= 1`, via `-B_{r,chi}/r`.
pub fn l_value_one_minus(r: usize, d0: i64) -> BigRational {
    if d0 == 1 {
        if r == 1 {
            // zeta(0)
            return rat(-1, 2);
        }
        return zeta_one_minus(r);
    }
    -generalized_bernoulli(r, d0) / int(r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert_eq!(b[7], rat(0, 1));
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_one_minus(6), rat(-1, 252));
        assert_eq!(zeta_one_minus(10), rat(-1, 132));
        assert_eq!(zeta_one_minus(2), rat(-1, 12));
    }

    #[test]
    fn l_values() {
        assert_eq!(l_value_one_minus(1, -3), rat(1, 3));
        assert_eq!(l_value_one_minus(1, -4), rat(1, 2));
        assert_eq!(l_value_one_minus(3, -3), rat(-2, 9));
        assert_eq!(l_value_one_minus(3, -4), rat(-1, 2));
        // chi_{-7}: class number 1, two units
        assert_eq!(l_value_one_minus(1, -7), rat(1, 1));
    }

    #[test]
    fn fundamental_parts() {
        assert_eq!(fundamental_part(-3), (-3, 1));
        assert_eq!(fundamental_part(-12), (-3, 2));
        assert_eq!(fundamental_part(-16), (-4, 2));
        assert_eq!(fundamental_part(-4), (-4, 1));
        assert_eq!(fundamental_part(-32), (-8, 2));
        assert_eq!(fundamental_part(-27), (-3, 3));
        assert_eq!(fundamental_part(8), (8, 1));
        assert_eq!(fundamental_part(1), (1, 1));
        assert_eq!(fundamental_part(-20), (-20, 1));
    }

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-3, 3), 0);
        assert_eq!(kronecker(5, 4), 1);
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn divisor_functions() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(sigma(1, 6), BigInt::from(12));
        assert_eq!(sigma(3, 2), BigInt::from(9));
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert!(is_squarefree(6) && !is_squarefree(12));
        assert!(is_prime(97) && !is_prime(91));
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(3, 7), (12, -5), (-9, 4), (0, 5)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g, gcd(a, b).abs());
        }
    }
}
