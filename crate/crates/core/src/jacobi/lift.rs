//! Fourier coefficients of the level-1 lift and the Maaß relations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{JacobiError, JacobiForm};
use crate::exact::arith::{divisors, gcd};

/// Coefficients `A(n, r, m)` of a degree-2 form at `T = [[n, r/2], [r/2, m]]`.
///
/// Entries cover `n, m >= 1` with `4nm <= dmax` and `r^2 < 4nm`. This box is
/// closed under the lookups of the Maaß relation, which only ever lowers
/// `nm` and moves entries into the `m = 1` column.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelCoeffTable {
    pub weight: i32,
    pub level: u64,
    pub dmax: i64,
    pub entries: BTreeMap<(i64, i64, i64), BigRational>,
}

impl SiegelCoeffTable {
    pub fn empty(weight: i32, dmax: i64) -> Self {
        Self {
            weight,
            level: 1,
            dmax,
            entries: BTreeMap::new(),
        }
    }

    /// `A(n, r, m)`; zero for non-positive-definite `T`, `None` if not stored.
    pub fn get(&self, n: i64, r: i64, m: i64) -> Option<BigRational> {
        if n <= 0 || m <= 0 || 4 * n * m - r * r <= 0 {
            return Some(BigRational::zero());
        }
        self.entries.get(&(n, r, m)).cloned()
    }
}

fn power(a: u64, e: i32) -> BigRational {
    BigRational::from(num_traits::pow(BigInt::from(a), e as usize))
}

/// `A(n, r, m) = sum_{a | (n, r, m)} a^{k-1} c((4nm - r^2)/a^2)`.
pub fn sk_lift(phi: &JacobiForm, dmax: i64) -> Result<SiegelCoeffTable, JacobiError> {
    if phi.index != 1 {
        return Err(JacobiError::IndexNotOne(phi.index));
    }
    if phi.level != 1 {
        return Err(JacobiError::LevelNotOne(phi.level));
    }
    if dmax > phi.dmax {
        return Err(JacobiError::PrecisionExhausted {
            needed: dmax,
            dmax: phi.dmax,
        });
    }
    let mut table = SiegelCoeffTable::empty(phi.weight, dmax);
    for n in 1..=dmax / 4 {
        for m in 1..=dmax / (4 * n) {
            let nm4 = 4 * n * m;
            let rmax = ((nm4 - 1) as f64).sqrt() as i64 + 1;
            for r in -rmax..=rmax {
                let d = nm4 - r * r;
                if d <= 0 {
                    continue;
                }
                let g = gcd(gcd(n, r), m).unsigned_abs();
                let mut acc = BigRational::zero();
                for a in divisors(g) {
                    let ai = a as i64;
                    acc += power(a, phi.weight - 1) * phi.c_disc(d / (ai * ai))?;
                }
                table.entries.insert((n, r, m), acc);
            }
        }
    }
    Ok(table)
}

/// Outcome of [`maass_check`].
#[derive(Clone, Debug, Serialize)]
pub struct MaassReport {
    pub checked: usize,
    pub holds: bool,
    /// First failing `(n, r, m)` in lexicographic order.
    pub first_violation: Option<(i64, i64, i64)>,
    pub symmetric: bool,
    pub first_asymmetry: Option<(i64, i64, i64)>,
}

/// Checks `A(n, r, m) = sum_{d | (n, r, m)} d^{k-1} A(nm/d^2, r/d, 1)` at
/// every stored entry. A lookup outside the table counts as a violation.
pub fn maass_check(table: &SiegelCoeffTable) -> MaassReport {
    let k = table.weight;
    let mut first_violation = None;
    let mut first_asymmetry = None;
    for (&(n, r, m), a) in &table.entries {
        if first_violation.is_none() {
            let g = gcd(gcd(n, r), m).unsigned_abs();
            let mut rhs = Some(BigRational::zero());
            for d in divisors(g) {
                let di = d as i64;
                match (rhs.as_mut(), table.get(n * m / (di * di), r / di, 1)) {
                    (Some(acc), Some(v)) => *acc += power(d, k - 1) * v,
                    _ => rhs = None,
                }
            }
            if rhs.as_ref() != Some(a) {
                first_violation = Some((n, r, m));
            }
        }
        if first_asymmetry.is_none() {
            if let Some(b) = table.entries.get(&(m, r, n)) {
                if b != a {
                    first_asymmetry = Some((n, r, m));
                }
            }
        }
    }
    MaassReport {
        checked: table.entries.len(),
        holds: first_violation.is_none() && first_asymmetry.is_none(),
        first_violation,
        symmetric: first_asymmetry.is_none(),
        first_asymmetry,
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    n: i64,
    r: i64,
    m: i64,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    weight: i32,
    level: u64,
    dmax: i64,
    entries: Vec<EntryJson>,
}

impl Serialize for SiegelCoeffTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableJson {
            weight: self.weight,
            level: self.level,
            dmax: self.dmax,
            entries: self
                .entries
                .iter()
                .map(|(&(n, r, m), v)| EntryJson {
                    n,
                    r,
                    m,
                    num: v.numer().to_string(),
                    den: v.denom().to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SiegelCoeffTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = TableJson::deserialize(d)?;
        let mut entries = BTreeMap::new();
        for e in j.entries {
            let num: BigInt = e.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = e.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            if entries
                .insert((e.n, e.r, e.m), BigRational::new(num, den))
                .is_some()
            {
                return Err(D::Error::custom(JacobiError::InvalidTable(format!(
                    "duplicate entry ({}, {}, {})",
                    e.n, e.r, e.m
                ))));
            }
        }
        Ok(SiegelCoeffTable {
            weight: j.weight,
            level: j.level,
            dmax: j.dmax,
            entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::jacobi::jacobi_cusp_basis;

    #[test]
    fn lift_examples() {
        let phi = jacobi_cusp_basis(10, 100).unwrap();
        let t = sk_lift(&phi, 100).unwrap();
        assert_eq!(t.get(1, 1, 1).unwrap(), rat(1, 1));
        let expect = phi.c_disc(12).unwrap() + rat(512, 1) * phi.c_disc(3).unwrap();
        assert_eq!(t.get(2, 2, 2).unwrap(), expect);
        assert_eq!(t.get(1, 2, 1).unwrap(), rat(0, 1));
        for (&(n, r, m), v) in &t.entries {
            assert_eq!(&t.get(m, r, n).unwrap(), v);
        }
    }

    #[test]
    fn maass_pass_and_fail() {
        let phi = jacobi_cusp_basis(10, 100).unwrap();
        let mut t = sk_lift(&phi, 100).unwrap();
        let rep = maass_check(&t);
        assert!(rep.holds);
        assert!(rep.checked > 100);
        *t.entries.get_mut(&(2, 2, 2)).unwrap() += rat(1, 1);
        let rep = maass_check(&t);
        assert!(!rep.holds);
        assert_eq!(rep.first_violation, Some((2, 2, 2)));
        assert!(maass_check(&SiegelCoeffTable::empty(10, 0)).holds);
    }

    #[test]
    fn missing_lookup_is_a_violation() {
        let phi = jacobi_cusp_basis(12, 40).unwrap();
        let mut t = sk_lift(&phi, 40).unwrap();
        t.entries.remove(&(4, 0, 1));
        let rep = maass_check(&t);
        assert_eq!(rep.first_violation, Some((1, 0, 4)));
    }

    #[test]
    fn json_roundtrip() {
        let phi = jacobi_cusp_basis(12, 40).unwrap();
        let t = sk_lift(&phi, 40).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: SiegelCoeffTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }
}
