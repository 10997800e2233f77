//! Small dense matrices: cofactor determinants over any commutative ring and
//! exact rank over the rationals.

use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::Zero;

/// Determinant by Laplace expansion along the first row. Meant for the 3x3
/// and 4x4 symbolic matrices, where it avoids any division.
pub fn cofactor_det<T>(m: &[Vec<T>]) -> T
where
    T: Clone,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    let n = m.len();
    assert!(
        n >= 1 && m.iter().all(|r| r.len() == n),
        "square matrix required"
    );
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<T> = None;
    for j in 0..n {
        let minor: Vec<Vec<T>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &cofactor_det(&minor);
        acc = Some(match acc {
            // j = 0 comes first, so the sign of the first term is +
            None => term,
            Some(a) if j % 2 == 0 => &a + &term,
            Some(a) => &a - &term,
        });
    }
    acc.unwrap()
}

/// Rank by Gaussian elimination over the rationals.
pub fn rank(m: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in (r + 1)..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for k in c..cols {
                let t = &f * &a[r][k];
                a[i][k] -= t;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Determinant by elimination over the rationals; an independent route to
/// [`cofactor_det`].
pub fn det_elimination(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::from_integer(1.into());
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if piv != c {
            a.swap(c, piv);
            det = -det;
        }
        det *= &a[c][c];
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for k in c..n {
                let t = &f * &a[c][k];
                a[i][k] -= t;
            }
        }
    }
    det
}
