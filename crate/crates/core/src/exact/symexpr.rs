//! Multivariate Laurent polynomials over the rationals in the fixed alphabet
//! `(p, rho, lam, lamp, x0, x1, x2)`.
//!
//! `rho` stands for `p^k`, so every `p^{k+c}` becomes `rho * p^c` and a single
//! expression covers all weights at once.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{rat, ExactError};

/// Number of variables in the alphabet.
pub const NVARS: usize = 7;

/// Exponent vector, one entry per [`Var`] in alphabet order.
pub type Exps = [i32; NVARS];

/// The variable alphabet. The declaration order is the canonical term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    P,
    Rho,
    Lam,
    LamP,
    X0,
    X1,
    X2,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::P,
        Var::Rho,
        Var::Lam,
        Var::LamP,
        Var::X0,
        Var::X1,
        Var::X2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Variables that only ever appear with nonnegative exponents.
    pub fn polynomial_only(self) -> bool {
        matches!(self, Var::Lam | Var::LamP | Var::X0)
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::Rho => "rho",
            Var::Lam => "lam",
            Var::LamP => "lamp",
            Var::X0 => "x0",
            Var::X1 => "x1",
            Var::X2 => "x2",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point at which to evaluate a [`SymExpr`].
pub type Assignment = BTreeMap<Var, BigRational>;

/// Builds an assignment from integer values.
pub fn assign(pairs: &[(Var, i64)]) -> Assignment {
    pairs.iter().map(|&(v, x)| (v, rat(x, 1))).collect()
}

/// Canonical Laurent polynomial. Zero coefficients are never stored, so two
/// expressions are equal iff their term maps are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymExpr {
    terms: BTreeMap<Exps, BigRational>,
}

fn check_exps(e: &Exps) -> Result<(), ExactError> {
    for v in Var::ALL {
        if v.polynomial_only() && e[v.index()] < 0 {
            return Err(ExactError::NegativeExponent(v));
        }
    }
    Ok(())
}

impl SymExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut s = Self::zero();
        s.add_term([0; NVARS], c);
        s
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n, 1))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::constant(rat(n, d))
    }

    /// Single term `c * prod v^e`. Fails if a polynomial-only variable gets a
    /// negative exponent.
    pub fn monomial(c: BigRational, exps: Exps) -> Result<Self, ExactError> {
        check_exps(&exps)?;
        let mut s = Self::zero();
        s.add_term(exps, c);
        Ok(s)
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    /// `v^e`; panics on a negative power of a polynomial-only variable, which
    /// is a programming error rather than a data error.
    pub fn var_pow(v: Var, e: i32) -> Self {
        let mut exps = [0; NVARS];
        exps[v.index()] = e;
        Self::monomial(BigRational::one(), exps)
            .expect("negative power of polynomial-only variable")
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the expression is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&[0; NVARS]).cloned(),
            _ => None,
        }
    }

    /// Whether variable `v` occurs at all.
    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.index()] != 0)
    }

    fn add_term(&mut self, exps: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse of a single-term expression.
    pub fn inverse_monomial(&self) -> Result<Self, ExactError> {
        if self.terms.len() != 1 {
            return Err(ExactError::NotInvertible);
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let mut inv = [0; NVARS];
        for i in 0..NVARS {
            inv[i] = -e[i];
        }
        Self::monomial(c.recip(), inv).map_err(|_| ExactError::NotInvertible)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, at: &Assignment) -> Result<BigRational, ExactError> {
        let mut total = BigRational::zero();
        for (exps, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = exps[v.index()];
                if e == 0 {
                    continue;
                }
                let x = at.get(&v).ok_or(ExactError::MissingVariable(v))?;
                if e < 0 && x.is_zero() {
                    return Err(ExactError::ZeroToNegativePower(v));
                }
                t *= rat_pow(x, e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Replaces `var` by `replacement` everywhere. Negative powers of `var`
    /// require `replacement` to be a single term.
    pub fn substitute(&self, var: Var, replacement: &SymExpr) -> Result<Self, ExactError> {
        let idx = var.index();
        let min_e = self.terms.keys().map(|e| e[idx]).min().unwrap_or(0);
        let inv = if min_e < 0 {
            Some(replacement.inverse_monomial()?)
        } else {
            None
        };
        let mut pos_cache: BTreeMap<i32, SymExpr> = BTreeMap::new();
        let mut power = |e: i32| -> SymExpr {
            if let Some(s) = pos_cache.get(&e) {
                return s.clone();
            }
            let s = if e >= 0 {
                replacement.pow(e as u32)
            } else {
                inv.as_ref().unwrap().pow((-e) as u32)
            };
            pos_cache.insert(e, s.clone());
            s
        };
        let mut out = Self::zero();
        for (exps, c) in &self.terms {
            let mut rest = *exps;
            rest[idx] = 0;
            let base = Self::monomial(c.clone(), rest)?;
            out = out + &base * &power(exps[idx]);
        }
        Ok(out)
    }

    /// Largest exponent of `v` (0 for the zero expression).
    pub fn degree_in(&self, v: Var) -> i32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }
}

pub(crate) fn rat_pow(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl From<i64> for SymExpr {
    fn from(n: i64) -> Self {
        SymExpr::int(n)
    }
}

impl From<BigRational> for SymExpr {
    fn from(c: BigRational) -> Self {
        SymExpr::constant(c)
    }
}

impl Add<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn add(self, rhs: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul<&SymExpr> for &SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: &SymExpr) -> SymExpr {
        let mut out = SymExpr::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0; NVARS];
                for i in 0..NVARS {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        SymExpr {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<SymExpr> for SymExpr {
            type Output = SymExpr;
            fn $m(self, rhs: SymExpr) -> SymExpr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SymExpr> for SymExpr {
            type Output = SymExpr;
            fn $m(self, rhs: &SymExpr) -> SymExpr {
                (&self).$m(rhs)
            }
        }
        impl $tr<SymExpr> for &SymExpr {
            type Output = SymExpr;
            fn $m(self, rhs: SymExpr) -> SymExpr {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        -&self
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (exps, c) in &self.terms {
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let is_const = exps.iter().all(|&e| e == 0);
            if !a.is_one() || is_const {
                write!(f, "{}", a)?;
                if !is_const {
                    f.write_str("*")?;
                }
            }
            let mut first_var = true;
            for v in Var::ALL {
                let e = exps[v.index()];
                if e == 0 {
                    continue;
                }
                if !first_var {
                    f.write_str("*")?;
                }
                first_var = false;
                if e == 1 {
                    write!(f, "{}", v)?;
                } else {
                    write!(f, "{}^{}", v, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Wire form of one term.
#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Exps,
    num: String,
    den: String,
}

impl Serialize for SymExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(e, c)| TermJson {
                exponents: *e,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = Vec::<TermJson>::deserialize(d)?;
        let mut out = SymExpr::zero();
        for t in v {
            let n: BigInt = t.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = t.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            check_exps(&t.exponents).map_err(D::Error::custom)?;
            out.add_term(t.exponents, BigRational::new(n, den));
        }
        Ok(out)
    }
}

/// Shorthands used throughout the symbolic modules.
pub mod sym {
    use super::{SymExpr, Var};

    pub fn p() -> SymExpr {
        SymExpr::var(Var::P)
    }
    pub fn p_pow(e: i32) -> SymExpr {
        SymExpr::var_pow(Var::P, e)
    }
    pub fn rho() -> SymExpr {
        SymExpr::var(Var::Rho)
    }
    pub fn rho_pow(e: i32) -> SymExpr {
        SymExpr::var_pow(Var::Rho, e)
    }
    pub fn lam() -> SymExpr {
        SymExpr::var(Var::Lam)
    }
    pub fn lamp() -> SymExpr {
        SymExpr::var(Var::LamP)
    }
    pub fn x0() -> SymExpr {
        SymExpr::var(Var::X0)
    }
    pub fn x1() -> SymExpr {
        SymExpr::var(Var::X1)
    }
    pub fn x2() -> SymExpr {
        SymExpr::var(Var::X2)
    }
    pub fn int(n: i64) -> SymExpr {
        SymExpr::int(n)
    }
    pub fn frac(n: i64, d: i64) -> SymExpr {
        SymExpr::frac(n, d)
    }
    /// `mu(p) = (p+1)(p^2+1)`.
    pub fn mu() -> SymExpr {
        (p() + int(1)) * (p().pow(2) + int(1))
    }
}

#[cfg(test)]
mod tests {
    use super::sym::*;
    use super::*;

    #[test]
    fn eval_examples() {
        let e = p() * rho() - lam();
        let at = assign(&[(Var::P, 2), (Var::Rho, 1024), (Var::Lam, 0)]);
        assert_eq!(e.eval(&at).unwrap(), rat(2048, 1));
        assert_eq!(p_pow(-1).eval(&assign(&[(Var::P, 3)])).unwrap(), rat(1, 3));
        assert_eq!(mu().eval(&assign(&[(Var::P, 2)])).unwrap(), rat(15, 1));
    }

    #[test]
    fn eval_errors() {
        let e = p() + lam();
        assert_eq!(
            e.eval(&assign(&[(Var::P, 1)])),
            Err(ExactError::MissingVariable(Var::Lam))
        );
        assert_eq!(
            p_pow(-2).eval(&assign(&[(Var::P, 0)])),
            Err(ExactError::ZeroToNegativePower(Var::P))
        );
        // a zero base with a positive exponent is fine
        assert_eq!(p().eval(&assign(&[(Var::P, 0)])).unwrap(), rat(0, 1));
    }

    #[test]
    fn substitution_examples() {
        let repl = (rho() * p_pow(-1) + rho() * p_pow(-2)) * lam() - rho().pow(2) * p_pow(-2);
        let e = lamp() - &repl;
        assert!(e.substitute(Var::LamP, &repl).unwrap().is_zero());
        let sq = lam().pow(2);
        assert_eq!(sq.substitute(Var::Lam, &lam()).unwrap(), sq);
        assert_eq!(
            (x1() * x2()).substitute(Var::X1, &x2()).unwrap(),
            x2().pow(2)
        );
    }

    #[test]
    fn substitution_into_negative_power() {
        let e = p_pow(-2) + p();
        let r = e.substitute(Var::P, &(rho() * int(3))).unwrap();
        let expect = rho_pow(-2) * frac(1, 9) + rho() * int(3);
        assert_eq!(r, expect);
        assert_eq!(
            e.substitute(Var::P, &(p() + int(1))),
            Err(ExactError::NotInvertible)
        );
        // the inverse of lam would need a negative lam exponent
        assert_eq!(e.substitute(Var::P, &lam()), Err(ExactError::NotInvertible));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let e = (p() + int(1)) * (p() - int(1)) - p().pow(2) + int(1);
        assert!(e.is_zero());
        assert_eq!(e.num_terms(), 0);
    }

    #[test]
    fn monomial_rejects_negative_lambda() {
        let mut e = [0; NVARS];
        e[Var::Lam.index()] = -1;
        assert!(SymExpr::monomial(rat(1, 1), e).is_err());
    }

    #[test]
    fn json_roundtrip_is_sorted() {
        let e = x2() + p_pow(-1) * lam() * frac(3, 7) + int(2);
        let s = serde_json::to_string(&e).unwrap();
        let back: SymExpr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 3);
        assert_eq!(arr[0]["exponents"][0], -1);
        assert_eq!(arr[0]["num"], "3");
        assert_eq!(arr[0]["den"], "7");
    }

    #[test]
    fn json_rejects_bad_terms() {
        let bad = r#"[{"exponents":[0,0,-1,0,0,0,0],"num":"1","den":"1"}]"#;
        assert!(serde_json::from_str::<SymExpr>(bad).is_err());
        let bad = r#"[{"exponents":[0,0,0,0,0,0,0],"num":"1","den":"0"}]"#;
        assert!(serde_json::from_str::<SymExpr>(bad).is_err());
    }

    #[test]
    fn display() {
        let e = p().pow(2) * lam() * int(-3) + frac(1, 2);
        assert_eq!(e.to_string(), "1/2 - 3*p^2*lam");
    }
}
