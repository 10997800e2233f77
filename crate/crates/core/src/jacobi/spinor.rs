//! Hecke eigenvalues of the lift at `p^j` from the spinor Euler factor, and the
//! transfer of Petersson norms from the lift back to the Jacobi form.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::JacobiError;
use crate::exact::arith::{factorize, is_squarefree};
use crate::exact::{SymExpr, Var};

/// Eigenvalues `lam_F(p^j)` for `j = 0..=jmax`, as expressions in the
/// elliptic eigenvalue `lam_f`.
#[derive(Clone, Debug, Serialize)]
pub struct EulerData {
    pub p: u64,
    pub k: u32,
    pub lam_f: SymExpr,
    pub lam_big_f: Vec<SymExpr>,
}

fn pw(p: u64, e: u32) -> SymExpr {
    SymExpr::constant(BigRational::from(num_traits::pow(
        BigInt::from(p),
        e as usize,
    )))
}

/// Expands `1 / ((1 - p^{k-1}X)(1 - p^{k-2}X)(1 - aX)(1 - bX))` with
/// `a + b = lam_f`, `ab = p^{2k-3}`, then multiplies by `1 - p^{2k-4}X^2` to
/// strip the zeta factor of the arithmetic normalization.
pub fn spinor_coeffs(
    lam_f: &SymExpr,
    p: u64,
    k: u32,
    jmax: usize,
) -> Result<EulerData, JacobiError> {
    if jmax > 4 {
        return Err(JacobiError::JmaxTooLarge(jmax));
    }
    if k < 3 {
        return Err(JacobiError::UnsupportedWeight(k));
    }
    let a = pw(p, k - 1);
    let b = pw(p, k - 2);
    let ab = pw(p, 2 * k - 3);
    let s = &a + &b;
    // elementary symmetric functions of the four Satake parameters
    let e1 = &s + lam_f;
    let e2 = &a * &b + &s * lam_f + ab.clone();
    let e3 = &a * &b * lam_f.clone() + &s * &ab;
    let e4 = &a * &b * ab.clone();
    let mut h: Vec<SymExpr> = Vec::with_capacity(jmax + 1);
    for j in 0..=jmax {
        let at = |i: usize| -> SymExpr {
            if j >= i {
                h[j - i].clone()
            } else {
                SymExpr::zero()
            }
        };
        let hj = if j == 0 {
            SymExpr::one()
        } else {
            &e1 * &at(1) - &e2 * &at(2) + &e3 * &at(3) - &e4 * &at(4)
        };
        h.push(hj);
    }
    let zeta = pw(p, 2 * k - 4);
    let lam_big_f = (0..=jmax)
        .map(|j| {
            if j >= 2 {
                &h[j] - &(&zeta * &h[j - 2])
            } else {
                h[j].clone()
            }
        })
        .collect();
    Ok(EulerData {
        p,
        k,
        lam_f: lam_f.clone(),
        lam_big_f,
    })
}

/// Outcome of [`characterization_check`].
#[derive(Clone, Debug, Serialize)]
pub struct CharacterizationReport {
    pub p: u64,
    pub k: u32,
    pub holds: bool,
    pub lam_p: SymExpr,
    pub lam_p2_euler: SymExpr,
    pub lam_p2_target: SymExpr,
    pub difference: SymExpr,
    /// The relation `lam_F(p) = lam_f + p^{k-1} + p^{k-2}` read off the expansion.
    pub linear_relation_holds: bool,
}

/// Compares `lam_F(p^2)` from the Euler factor with
/// `lam_F(p)^2 - (p^{k-1} + p^{k-2}) lam_F(p) + p^{2k-2}`, as polynomials.
pub fn characterization_check(e: &EulerData) -> Result<CharacterizationReport, JacobiError> {
    if e.lam_big_f.len() < 3 {
        return Err(JacobiError::InvalidTable("need jmax >= 2".into()));
    }
    let s = pw(e.p, e.k - 1) + pw(e.p, e.k - 2);
    let lam_p = e.lam_big_f[1].clone();
    let target = &lam_p * &lam_p - &s * &lam_p + pw(e.p, 2 * e.k - 2);
    let diff = &e.lam_big_f[2] - &target;
    let linear = (&lam_p - &(&e.lam_f + &s)).is_zero();
    Ok(CharacterizationReport {
        p: e.p,
        k: e.k,
        holds: diff.is_zero() && linear,
        lam_p,
        lam_p2_euler: e.lam_big_f[2].clone(),
        lam_p2_target: target,
        difference: diff,
        linear_relation_holds: linear,
    })
}

/// Symbolic elliptic eigenvalue, for identities in `lam_f`.
pub fn lam_symbol() -> SymExpr {
    SymExpr::var(Var::Lam)
}

/// `<phi_F, phi_F>` from `<F, F>`:
/// `(4 pi)^k pi^2 / (zeta(2) Gamma(k) L(k, f)) * N^{-2}
///  * prod_{p | N} (1 - 1/p)^{-2} (1 + 1/p)^{-1} * <F, F>`.
pub fn petersson_transfer(norm_f_sq: f64, k: u32, n: u64, l_k_f: f64) -> Result<f64, JacobiError> {
    if !(norm_f_sq > 0.0) {
        return Err(JacobiError::NonPositive("<F,F>"));
    }
    if !(l_k_f > 0.0) {
        return Err(JacobiError::NonPositive("L(k,f)"));
    }
    if k == 0 {
        return Err(JacobiError::NonPositive("k"));
    }
    if n == 0 {
        return Err(JacobiError::NonPositive("N"));
    }
    if !is_squarefree(n) {
        return Err(JacobiError::NotSquareFree(n));
    }
    let zeta2 = PI * PI / 6.0;
    let gamma_k: f64 = (1..k).map(f64::from).product();
    let mut c = (4.0 * PI).powi(k as i32) * PI * PI / (zeta2 * gamma_k * l_k_f);
    c /= (n as f64).powi(2);
    for (p, _) in factorize(n) {
        let q = 1.0 / p as f64;
        c /= (1.0 - q).powi(2) * (1.0 + q);
    }
    Ok(c * norm_f_sq)
}
