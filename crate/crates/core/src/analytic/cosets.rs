//! Right coset representatives of `Gamma_0(N)` in `SL_2(Z)` for square-free `N`.

use super::{AnalyticError, Mat2};
use crate::exact::arith::{divisors, ext_gcd, is_squarefree};

/// `A_{q,j} = [[beta, 1], [q gamma, N/q]] [[0, -1], [1, j]]` for `q | N`,
/// `0 <= j < q`, with `beta N/q - q gamma = 1`.
pub fn coset_reps_gamma0(level: u64) -> Result<Vec<Mat2>, AnalyticError> {
    if level == 0 {
        return Err(AnalyticError::InvalidInput("level must be positive".into()));
    }
    if !is_squarefree(level) {
        return Err(AnalyticError::NotSquareFree(level));
    }
    let mut reps = Vec::new();
    for q in divisors(level) {
        let qi = q as i64;
        let r = level as i64 / qi;
        let (g, s, t) = ext_gcd(r, qi);
        debug_assert_eq!(g, 1);
        let left = Mat2::new(s, 1, -t * qi, r);
        debug_assert_eq!(left.det(), 1);
        for j in 0..qi {
            reps.push(left.mul(&Mat2::new(0, -1, 1, j)));
        }
    }
    Ok(reps)
}

/// Whether `Gamma_0(N) a = Gamma_0(N) b`, i.e. `a b^{-1}` has `N | c`.
pub fn gamma0_equivalent(a: &Mat2, b: &Mat2, level: u64) -> bool {
    a.mul(&b.adjugate()).c.rem_euclid(level as i64) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn index(n: u64) -> u64 {
        crate::exact::arith::factorize(n)
            .iter()
            .fold(n, |acc, (p, _)| acc / p * (p + 1))
    }

    #[test]
    fn representatives() {
        let one = coset_reps_gamma0(1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(gamma0_equivalent(&one[0], &Mat2::IDENTITY, 1));
        for n in [1u64, 2, 3, 5, 6, 10, 15, 30] {
            let reps = coset_reps_gamma0(n).unwrap();
            assert_eq!(reps.len() as u64, index(n));
            for (i, a) in reps.iter().enumerate() {
                assert_eq!(a.det(), 1);
                for b in &reps[..i] {
                    assert!(!gamma0_equivalent(a, b, n), "N={n}: {a:?} ~ {b:?}");
                }
            }
        }
        assert_eq!(coset_reps_gamma0(6).unwrap().len(), 12);
        assert!(matches!(
            coset_reps_gamma0(12),
            Err(AnalyticError::NotSquareFree(12))
        ));
    }

    #[test]
    fn representatives_cover() {
        // every bottom row (c, d) lands in some coset
        let n = 6;
        let reps = coset_reps_gamma0(n).unwrap();
        for c in -12i64..=12 {
            for d in -12i64..=12 {
                if crate::exact::arith::gcd(c, d) != 1 {
                    continue;
                }
                let (_, s, t) = ext_gcd(d, c);
                let g = Mat2::new(s, -t, c, d);
                assert_eq!(g.det(), 1);
                assert_eq!(
                    reps.iter().filter(|r| gamma0_equivalent(&g, r, n)).count(),
                    1
                );
            }
        }
    }
}
