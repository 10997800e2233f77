//! The 4x4 matrix `M_p` of Petersson pairings among `F`, `F|U(p)`, `F|W_p`
//! and `F|U(p)W_p`, normalized by `<F,F>`, together with the old-basis data
//! built from it.
//!
//! Entries live in `Q(p, rho, lam, lamp)` with denominators that are powers
//! of `mu(p)`; they are carried as [`RatExpr`]. Determinants are taken of the
//! polynomial matrix `mu(p) * M_p` so that no division happens during
//! expansion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exact::linalg::{cofactor_det, rank};
use crate::exact::symexpr::sym::{int, lam, lamp, mu, p, p_pow, rho, rho_pow};
use crate::exact::{Assignment, ExactError, RatExpr, SymExpr, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InnerError {
    #[error("index ({0},{1}) out of range")]
    Index(usize, usize),
    #[error("denominator of {0} vanishes identically")]
    ZeroDenominator(&'static str),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn over_mu(num: SymExpr) -> RatExpr {
    RatExpr::new(num, mu()).expect("mu(p) is nonzero")
}

/// Numerator of each entry of `mu(p) * M_p`, indexed from 0.
fn scaled_entry(i: usize, j: usize) -> SymExpr {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    let one = int(1);
    let m12 = p().pow(3) * lam();
    let m13 = p().pow(3) * rho_pow(-1) * lam();
    let m22 = p().pow(2) * (p() - int(1)) * lam().pow(2) + rho().pow(2) * p_pow(-4) * mu();
    let m23 = p().pow(3)
        * rho_pow(-1)
        * (lam().pow(2) - (&one + p_pow(-1)) * lamp() + rho().pow(2) * p_pow(-5) * (p() + int(1)));
    let m24 = lam()
        * p().pow(3)
        * rho_pow(-1)
        * (lam().pow(2) - (int(2) + p_pow(-1)) * lamp()
            + rho().pow(2) * p_pow(-5) * (p() + int(1)) * (p() + int(2)));
    match (i, j) {
        // W_p is an isometry
        (0, 0) | (2, 2) => mu(),
        (0, 1) => m12,
        (0, 2) => m13,
        // closure by W_p-unitarity: <F1,F4> = <F3,F2>
        (0, 3) => m23,
        (1, 1) => m22,
        (1, 2) => m23,
        (1, 3) => m24,
        // <F3,F4> = <F1,F2>
        (2, 3) => m12,
        // <F4,F4> = <F2,F2>
        (3, 3) => m22,
        _ => unreachable!(),
    }
}

/// `<F_i, F_j> / <F, F>` for `1 <= i, j <= 4`.
pub fn mp_entry(i: usize, j: usize) -> Result<RatExpr, InnerError> {
    if !(1..=4).contains(&i) || !(1..=4).contains(&j) {
        return Err(InnerError::Index(i, j));
    }
    Ok(over_mu(scaled_entry(i - 1, j - 1)))
}

/// The symmetric matrix `M_p` with the basis order `(F, F|U, F|W, F|UW)`.
#[derive(Clone, Debug, Serialize)]
pub struct InnerProductMatrix {
    pub entries: Vec<Vec<RatExpr>>,
    pub ordering: [&'static str; 4],
}

impl InnerProductMatrix {
    pub fn build() -> Self {
        let entries = (1..=4)
            .map(|i| (1..=4).map(|j| mp_entry(i, j).unwrap()).collect())
            .collect();
        Self {
            entries,
            ordering: ["F", "F|U(p)", "F|W_p", "F|U(p)W_p"],
        }
    }

    /// Exact rational matrix at a point.
    pub fn eval(&self, at: &Assignment) -> Result<Vec<Vec<BigRational>>, ExactError> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.eval(at)).collect())
            .collect()
    }

    /// `u^T M v` for coefficient vectors over `Q(p, rho, ...)`.
    pub fn pair(&self, u: &[RatExpr], v: &[RatExpr]) -> RatExpr {
        let mut acc = RatExpr::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                acc = acc + ui * &self.entries[i][j] * vj;
            }
        }
        acc
    }
}

fn scaled_matrix(n: usize) -> Vec<Vec<SymExpr>> {
    (0..n)
        .map(|i| (0..n).map(|j| scaled_entry(i, j)).collect())
        .collect()
}

/// `det M_p` by cofactor expansion.
pub fn det_mp() -> RatExpr {
    RatExpr::new(cofactor_det(&scaled_matrix(4)), mu().pow(4)).unwrap()
}

/// The leading 3x3 principal minor of `M_p`.
pub fn leading_minor3() -> RatExpr {
    RatExpr::new(cofactor_det(&scaled_matrix(3)), mu().pow(3)).unwrap()
}

/// `p^5 lam^2 - p^4 (p+1)^2 lamp + (p^2+2)(p+1)^2 rho^2`, the factor shared
/// by the determinant and the leading minor.
fn common_factor() -> SymExpr {
    let pp1sq = (p() + int(1)).pow(2);
    p().pow(5) * lam().pow(2) - p().pow(4) * &pp1sq * lamp()
        + (p().pow(2) + int(2)) * pp1sq * rho().pow(2)
}

/// `(rho/p + rho/p^2)`, i.e. `p^{k-1} + p^{k-2}`.
fn a_plus_b() -> SymExpr {
    rho() * p_pow(-1) + rho() * p_pow(-2)
}

/// The closed factored form of `det M_p`, expanded.
pub fn det_mp_factored() -> RatExpr {
    let x = common_factor();
    let c = rho().pow(2) * p_pow(-2);
    let f_plus = lamp() + a_plus_b() * lam() + &c;
    let f_minus = lamp() - a_plus_b() * lam() + &c;
    let num = rho_pow(-4) * x.pow(2) * f_plus * f_minus;
    let den = (p().pow(2) + int(1)).pow(4) * (p() + int(1)).pow(4);
    RatExpr::new(num, den).unwrap()
}

/// The closed factored form of the leading minor, expanded.
pub fn leading_minor3_factored() -> RatExpr {
    let inner = p() * lam().pow(2)
        - (p().pow(2) + int(1)) * lamp()
        - rho().pow(2) * p_pow(-2)
        - rho().pow(2);
    let num = -(rho_pow(-2) * inner * common_factor());
    let den = (p().pow(2) + int(1)) * mu().pow(2);
    RatExpr::new(num, den).unwrap()
}

/// The value of `lamp` forced by the lift: `(p^{k-1}+p^{k-2}) lam - p^{2k-2}`.
pub fn sk_lamp() -> SymExpr {
    a_plus_b() * lam() - rho().pow(2) * p_pow(-2)
}

pub fn apply_sk(e: &RatExpr) -> RatExpr {
    e.substitute(Var::LamP, &sk_lamp())
        .expect("lamp occurs only with nonnegative exponents")
}

/// One sampled point of the rank check.
#[derive(Clone, Debug, Serialize)]
pub struct RankSample {
    pub p: u64,
    pub k: u32,
    pub lam: String,
    pub lamp: String,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub seed: u64,
    pub det_vanishes_under_sk: bool,
    pub minor_nonzero_under_sk: bool,
    pub sk_points: usize,
    pub sk_rank3: usize,
    pub generic_points: usize,
    pub generic_rank4: usize,
    pub failures: Vec<RankSample>,
    pub holds: bool,
}

/// Point `(p, rho = p^k, lam, lamp)` as an assignment.
pub fn point(pv: u64, k: u32, lam_v: &BigRational, lamp_v: &BigRational) -> Assignment {
    let mut a = Assignment::new();
    a.insert(Var::P, BigRational::from(BigInt::from(pv)));
    a.insert(
        Var::Rho,
        BigRational::from(num_traits::pow(BigInt::from(pv), k as usize)),
    );
    a.insert(Var::Lam, lam_v.clone());
    a.insert(Var::LamP, lamp_v.clone());
    a
}

/// Exact rank of `M_p` at a point.
pub fn rank_at(pv: u64, k: u32, lam_v: &BigRational, lamp_v: &BigRational) -> usize {
    let m = InnerProductMatrix::build();
    rank(&m.eval(&point(pv, k, lam_v, lamp_v)).unwrap())
}

/// `lam = lam_f + p^{k-1} + p^{k-2}` and the lift value of `lamp`.
pub fn sk_point(pv: u64, k: u32, lam_f: &BigInt) -> (BigRational, BigRational) {
    let pk1 = num_traits::pow(BigInt::from(pv), k as usize - 1);
    let pk2 = num_traits::pow(BigInt::from(pv), k as usize - 2);
    let lam_v = lam_f + &pk1 + &pk2;
    let at = point(
        pv,
        k,
        &BigRational::from(lam_v.clone()),
        &BigRational::zero(),
    );
    let lamp_v = sk_lamp().eval(&at).unwrap();
    (BigRational::from(lam_v), lamp_v)
}

/// Symbolic vanishing of `det M_p` on the lift locus, nonvanishing of the
/// leading minor there, and exact ranks at seeded sample points.
pub fn sk_rank_check(seed: u64, n_sk: usize, n_generic: usize) -> RankReport {
    let det_sk = apply_sk(&det_mp());
    let minor_sk = apply_sk(&leading_minor3());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut sk_rank3 = 0;
    let m = InnerProductMatrix::build();
    for _ in 0..n_sk {
        let pv = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let k = 2 * rng.gen_range(2u32..=10);
        // |lam_f| < 2 p^{k - 3/2}, i.e. lam_f^2 < 4 p^{2k-3}
        let bound = 2.0 * (pv as f64).powf(k as f64 - 1.5);
        let span = bound.floor().min(1e15) as i64;
        let lam_f = BigInt::from(rng.gen_range(-span..=span));
        let (l, lp) = sk_point(pv, k, &lam_f);
        let r = rank(&m.eval(&point(pv, k, &l, &lp)).unwrap());
        if r == 3 {
            sk_rank3 += 1;
        } else {
            failures.push(sample(pv, k, &l, &lp, r));
        }
    }
    let mut generic_rank4 = 0;
    for _ in 0..n_generic {
        let pv = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let k = 2 * rng.gen_range(2u32..=10);
        let l = BigRational::new(
            rng.gen_range(-1000i64..1000).into(),
            rng.gen_range(1i64..20).into(),
        );
        let lp = BigRational::new(
            rng.gen_range(-1000i64..1000).into(),
            rng.gen_range(1i64..20).into(),
        );
        let r = rank(&m.eval(&point(pv, k, &l, &lp)).unwrap());
        if r == 4 {
            generic_rank4 += 1;
        } else {
            failures.push(sample(pv, k, &l, &lp, r));
        }
    }
    let det_vanishes_under_sk = det_sk.is_zero();
    let minor_nonzero_under_sk = !minor_sk.is_zero();
    RankReport {
        seed,
        det_vanishes_under_sk,
        minor_nonzero_under_sk,
        sk_points: n_sk,
        sk_rank3,
        generic_points: n_generic,
        generic_rank4,
        holds: det_vanishes_under_sk && minor_nonzero_under_sk && failures.is_empty(),
        failures,
    }
}

fn sample(pv: u64, k: u32, l: &BigRational, lp: &BigRational, rank: usize) -> RankSample {
    RankSample {
        p: pv,
        k,
        lam: l.to_string(),
        lamp: lp.to_string(),
        rank,
    }
}

fn coeffs(v: [SymExpr; 4]) -> Vec<RatExpr> {
    v.into_iter().map(RatExpr::poly).collect()
}

/// The quadratic `A c^2 + B c + C = ||F1 + c F2 - F3 - c F4||^2 / <F,F>`
/// and its double root.
#[derive(Clone, Debug, Serialize)]
pub struct OldformRelation {
    pub a: RatExpr,
    pub b: RatExpr,
    pub c: RatExpr,
    /// `-B / 2A`.
    pub c_old: RatExpr,
    pub discriminant_vanishes_under_sk: bool,
    pub root_matches_under_sk: bool,
}

pub fn oldform_relation() -> OldformRelation {
    let m = InnerProductMatrix::build();
    // ||w + c u||^2 with w = F1 - F3 and u = F2 - F4
    let w = coeffs([int(1), int(0), int(-1), int(0)]);
    let u = coeffs([int(0), int(1), int(0), int(-1)]);
    let a = m.pair(&u, &u);
    let b = m.pair(&w, &u).scale(&BigRational::from_integer(2.into()));
    let c = m.pair(&w, &w);
    let two = RatExpr::poly(int(2));
    let four = RatExpr::poly(int(4));
    let disc = &b * &b - &four * &a * &c;
    let c_old = (&(-&b) / &(&two * &a)).expect("A is not identically zero");
    // -B (rho p^-2 - lam) - 2A == 0 on the lift locus
    let shift = RatExpr::poly(rho() * p_pow(-2) - lam());
    let cross = &(-&b) * &shift - &two * &a;
    OldformRelation {
        discriminant_vanishes_under_sk: apply_sk(&disc).is_zero(),
        root_matches_under_sk: apply_sk(&cross).is_zero(),
        a,
        b,
        c,
        c_old,
    }
}

/// Coefficients of `G1 = F1 - F3/p`, `G2 = F2 - p^{k-1} F1`,
/// `G3 = F3 - F1/p` in the `F` basis.
pub fn g_vectors() -> [Vec<RatExpr>; 3] {
    let minus_inv_p = -p_pow(-1);
    [
        coeffs([int(1), int(0), minus_inv_p.clone(), int(0)]),
        coeffs([-(rho() * p_pow(-1)), int(1), int(0), int(0)]),
        coeffs([minus_inv_p, int(0), int(1), int(0)]),
    ]
}

/// `<G_i, G_j> / <F1, F1>` by bilinear expansion through `M_p`.
pub fn g_inner(i: usize, j: usize) -> Result<RatExpr, InnerError> {
    if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(InnerError::Index(i, j));
    }
    let m = InnerProductMatrix::build();
    let g = g_vectors();
    Ok(m.pair(&g[i - 1], &g[j - 1]))
}

fn rx(num: SymExpr, den: SymExpr) -> RatExpr {
    RatExpr::new(num, den).unwrap()
}

/// The closed forms of `<G_i, G_j>`, written independently of `M_p`.
pub fn g_inner_closed(i: usize, j: usize) -> Result<RatExpr, InnerError> {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    let pp1 = p() + int(1);
    let p2p1 = p().pow(2) + int(1);
    let mu_rho = mu() * rho();
    let out = match (i, j) {
        (1, 1) | (3, 3) => {
            RatExpr::poly(int(1) + p_pow(-2)) - rx(int(2) * lam() * p().pow(2), mu_rho)
        }
        (1, 2) => {
            rx(lamp() * p(), rho() * &p2p1) - rx(lam().pow(2) * p().pow(2), mu_rho)
                + rx(p() * lam(), pp1)
                - rx(rho() * p_pow(-3) * (p().pow(4) + p().pow(2) + int(1)), p2p1)
        }
        (1, 3) => rx(p() * lam(), rho() * pp1) - RatExpr::poly(int(2) * p_pow(-1)),
        (2, 2) => {
            rx(p().pow(2) * (p() - int(1)) * lam().pow(2), mu())
                - rx(int(2) * rho() * p().pow(2) * lam(), mu())
                + RatExpr::poly(rho().pow(2) * p_pow(-4) + rho().pow(2) * p_pow(-2))
        }
        (2, 3) => {
            rx(lam().pow(2) * p().pow(3), mu_rho)
                - rx(int(2) * p().pow(2) * lam(), mu())
                - rx(lamp() * p().pow(2), rho() * &p2p1)
                + rx(rho() * p_pow(-2) * (p().pow(2) + int(2)), p2p1)
        }
        _ => return Err(InnerError::Index(i, j)),
    };
    Ok(out)
}

/// Data of the `W_p`-invariant old basis `G_± = G1 ± G3`.
#[derive(Clone, Debug, Serialize)]
pub struct OldBasisData {
    pub g_inner: Vec<Vec<RatExpr>>,
    pub a_plus: RatExpr,
    pub a_minus: RatExpr,
    pub c_old: RatExpr,
    /// `<G_+, G_->` vanishes identically.
    pub plus_minus_orthogonal: bool,
}

pub fn wp_basis_coeffs() -> Result<OldBasisData, InnerError> {
    let g: Vec<Vec<RatExpr>> = (1..=3)
        .map(|i| (1..=3).map(|j| g_inner(i, j).unwrap()).collect())
        .collect();
    let two = RatExpr::poly(int(2));
    let plus_norm = &g[0][0] + &(&two * &g[0][2]) + g[2][2].clone();
    let minus_norm = &g[0][0] - &(&two * &g[0][2]) + g[2][2].clone();
    if plus_norm.is_zero() {
        return Err(InnerError::ZeroDenominator("a_plus"));
    }
    if minus_norm.is_zero() {
        return Err(InnerError::ZeroDenominator("a_minus"));
    }
    let a_plus = (&(&g[1][0] + &g[1][2]) / &plus_norm)?;
    let a_minus = (&(&g[1][0] - &g[1][2]) / &minus_norm)?;
    // <G1+G3, G1-G3> = <G1,G1> - <G3,G3>
    let pm = &g[0][0] - &g[2][2];
    Ok(OldBasisData {
        plus_minus_orthogonal: pm.is_zero(),
        g_inner: g,
        a_plus,
        a_minus,
        c_old: oldform_relation().c_old,
    })
}

/// Evaluates a rational function on the lift locus at `(p, k, lam_f)`.
pub fn eval_on_sk(e: &RatExpr, pv: u64, k: u32, lam_f: i64) -> Result<BigRational, ExactError> {
    let (l, lp) = sk_point(pv, k, &BigInt::from(lam_f));
    e.eval(&point(pv, k, &l, &lp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn entry_examples() {
        let e13 = mp_entry(1, 3).unwrap();
        let expect = rx(p().pow(3) * rho_pow(-1) * lam(), mu());
        assert!(e13.equals(&expect));
        let e22 = mp_entry(2, 2).unwrap();
        let expect = rx(
            p().pow(2) * (p() - int(1)) * lam().pow(2) + rho().pow(2) * p_pow(-4) * mu(),
            mu(),
        );
        assert!(e22.equals(&expect));
        assert!(mp_entry(3, 3).unwrap().equals(&RatExpr::one()));
        assert!(mp_entry(1, 1).unwrap().equals(&RatExpr::one()));
        assert_eq!(mp_entry(0, 1).unwrap_err(), InnerError::Index(0, 1));
        assert_eq!(mp_entry(2, 5).unwrap_err(), InnerError::Index(2, 5));
    }

    #[test]
    fn symmetric() {
        for i in 1..=4 {
            for j in 1..=4 {
                assert!(mp_entry(i, j).unwrap().equals(&mp_entry(j, i).unwrap()));
            }
        }
    }

    #[test]
    fn determinant_and_minor_match_factored_forms() {
        assert!(det_mp().equals(&det_mp_factored()));
        assert!(leading_minor3().equals(&leading_minor3_factored()));
    }

    #[test]
    fn determinant_at_a_point_two_routes() {
        let at = point(2, 4, &rat(1, 1), &rat(1, 1));
        let sym = det_mp().eval(&at).unwrap();
        let m = InnerProductMatrix::build().eval(&at).unwrap();
        assert_eq!(sym, crate::exact::linalg::det_elimination(&m));
        assert_eq!(sym, det_mp_factored().eval(&at).unwrap());
    }

    #[test]
    fn lift_locus() {
        assert!(apply_sk(&det_mp()).is_zero());
        assert!(!apply_sk(&leading_minor3()).is_zero());
        // the substituted relation itself
        let rel = RatExpr::poly(lamp() - sk_lamp());
        assert!(apply_sk(&rel).is_zero());
    }

    #[test]
    fn rank_examples() {
        let l = rat(3i64.pow(9) + 3i64.pow(8) + 10, 1);
        let (l2, lp) = sk_point(3, 10, &BigInt::from(10));
        assert_eq!(l, l2);
        assert_eq!(rank_at(3, 10, &l, &lp), 3);
        assert_eq!(rank_at(3, 10, &rat(1, 1), &rat(1, 1)), 4);
    }

    #[test]
    fn rank_check_small() {
        let r = sk_rank_check(7, 10, 10);
        assert!(r.holds, "{:?}", r.failures);
    }

    #[test]
    fn oldform_quadratic() {
        let o = oldform_relation();
        assert!(o.discriminant_vanishes_under_sk);
        assert!(o.root_matches_under_sk);
        let two = RatExpr::poly(int(2));
        let four = RatExpr::poly(int(4));
        let m = |i, j| mp_entry(i, j).unwrap();
        assert!(o.a.equals(&(&two * &(m(2, 2) - m(2, 4)))));
        assert!(o.b.equals(&(&four * &(m(1, 2) - m(2, 3)))));
        assert!(o.c.equals(&(&two * &(RatExpr::one() - m(1, 3)))));
        // c_old = 1/(2^8 - lam) at p = 2, k = 10
        let lam_f = -10;
        let lam_v = 512 + 256 + lam_f;
        let got = eval_on_sk(&o.c_old, 2, 10, lam_f).unwrap();
        assert_eq!(got, rat(1, 256 - lam_v));
    }

    #[test]
    fn oldform_root_numeric() {
        let o = oldform_relation();
        for (pv, k, lf) in [(3u64, 10u32, 10i64), (5, 6, 3)] {
            let got = eval_on_sk(&o.c_old, pv, k, lf).unwrap();
            let lam_v = BigRational::from(sk_point(pv, k, &BigInt::from(lf)).0);
            let pk2 = rat((pv as i64).pow(k - 2), 1);
            assert_eq!(got, (pk2 - lam_v).recip());
        }
    }

    #[test]
    fn g_inner_cross_validation() {
        for i in 1..=3 {
            for j in i..=3 {
                let a = g_inner(i, j).unwrap();
                let b = g_inner_closed(i, j).unwrap();
                assert!(a.equals(&b), "<G{i},G{j}>");
            }
        }
        assert!(g_inner(0, 1).is_err());
    }

    #[test]
    fn g_inner_closed_rejects_wrong_formula() {
        let wrong = g_inner_closed(1, 3).unwrap() + RatExpr::poly(p_pow(-2));
        assert!(!wrong.equals(&g_inner(1, 3).unwrap()));
    }

    #[test]
    fn old_basis() {
        let d = wp_basis_coeffs().unwrap();
        assert!(d.plus_minus_orthogonal);
        let num = &d.g_inner[1][0] + &d.g_inner[1][2];
        let two = RatExpr::poly(int(2));
        let den = &d.g_inner[0][0] + &(&two * &d.g_inner[0][2]) + d.g_inner[2][2].clone();
        assert!(d.a_plus.equals(&(&num / &den).unwrap()));
        let v = eval_on_sk(&d.a_plus, 3, 10, 10).unwrap();
        assert_eq!(v, rat(-128926893, 56867));
        for (pv, k, lf) in [(2u64, 10u32, -528i64), (3, 10, 10), (5, 6, 3), (7, 8, 0)] {
            for den in [&d.a_minus.den, &d.a_plus.den] {
                let v = eval_on_sk(&RatExpr::poly(den.clone()), pv, k, lf).unwrap();
                assert!(!v.is_zero());
            }
        }
    }
}
