//! Degree-2 symplectic Hecke operators at similitude powers of a prime `p`,
//! realized through their Satake images in `x0, x1, x2` with `p` symbolic.
//!
//! Products of double cosets are products of images, so every operator
//! identity below reduces to expanding two Laurent polynomials and comparing
//! term maps.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::symexpr::sym::{int, mu, p, p_pow, x0, x1, x2};
use crate::exact::{SymExpr, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("Weyl orbit seed ({0},{1}) is not in {{0,1}}^2")]
    OrbitSeed(u8, u8),
    #[error("unknown coset symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
}

/// Catalogued double cosets and the combinations built from them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CosetSymbol {
    /// `T(1,1,p,p)`, the operator `T(p)`.
    TsP,
    /// The full similitude-`p^2` operator (sum of the three double cosets).
    TsP2,
    /// `T'(p) = T(p)^2 - T(p^2)`.
    TsPrimeP,
    TsOnePP2P,
    TsOneOneP2P2,
    TsPPPP,
    TsOneOneP3P3,
    /// `U(p) U(p)^* Tr` from level `Np` down to `N`.
    UsUsStarTr,
}

impl CosetSymbol {
    pub const ALL: [CosetSymbol; 8] = [
        CosetSymbol::TsP,
        CosetSymbol::TsP2,
        CosetSymbol::TsPrimeP,
        CosetSymbol::TsOnePP2P,
        CosetSymbol::TsOneOneP2P2,
        CosetSymbol::TsPPPP,
        CosetSymbol::TsOneOneP3P3,
        CosetSymbol::UsUsStarTr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CosetSymbol::TsP => "TS_p",
            CosetSymbol::TsP2 => "TS_p2",
            CosetSymbol::TsPrimeP => "TSprime_p",
            CosetSymbol::TsOnePP2P => "TS_1pp2p",
            CosetSymbol::TsOneOneP2P2 => "TS_11p2p2",
            CosetSymbol::TsPPPP => "TS_pppp",
            CosetSymbol::TsOneOneP3P3 => "TS_11p3p3",
            CosetSymbol::UsUsStarTr => "US_USstar_Tr",
        }
    }
}

impl fmt::Display for CosetSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CosetSymbol {
    type Err = HeckeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CosetSymbol::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| HeckeError::UnknownSymbol(s.to_string()))
    }
}

/// Orbit of an exponent pair under the Weyl group acting on `(x1, x2)`
/// exponents for similitude `p^3`: swap, and `b_i -> 3 - b_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylOrbit {
    pub seed: (u8, u8),
    pub members: BTreeSet<(u8, u8)>,
}

pub fn weyl_orbit(a1: u8, a2: u8) -> Result<WeylOrbit, HeckeError> {
    if a1 > 1 || a2 > 1 {
        return Err(HeckeError::OrbitSeed(a1, a2));
    }
    let mut members = BTreeSet::from([(a1, a2)]);
    let mut frontier = vec![(a1, a2)];
    while let Some((b1, b2)) = frontier.pop() {
        for next in [(b2, b1), (3 - b1, b2), (b1, 3 - b2)] {
            if members.insert(next) {
                frontier.push(next);
            }
        }
    }
    Ok(WeylOrbit {
        seed: (a1, a2),
        members,
    })
}

/// `sum_{(b1,b2) in orbit} x1^b1 x2^b2`.
fn orbit_sum(o: &WeylOrbit) -> SymExpr {
    o.members.iter().fold(SymExpr::zero(), |acc, &(b1, b2)| {
        acc + x1().pow(b1 as u32) * x2().pow(b2 as u32)
    })
}

/// `(p-1)/p`.
fn pm1_over_p() -> SymExpr {
    (p() - int(1)) * p_pow(-1)
}

/// The Satake image of a catalogued symbol.
pub fn satake_image(s: CosetSymbol) -> SymExpr {
    let one = int(1);
    match s {
        CosetSymbol::TsP => x0() * (&one + x1()) * (&one + x2()),
        CosetSymbol::TsOneOneP2P2 => {
            let a = (&one + x1().pow(2)) * (&one + x2().pow(2));
            let b = pm1_over_p() * (x1() + x2()) * (&one + x1() * x2());
            let c = pm1_over_p() * int(2) * x1() * x2();
            x0().pow(2) * (a + b + c)
        }
        CosetSymbol::TsOnePP2P => {
            let a = (p().pow(2) - int(1)) * p_pow(-3) * x1() * x2();
            let b = p_pow(-1) * (x1() + x2()) * (&one + x1() * x2());
            x0().pow(2) * (a + b)
        }
        CosetSymbol::TsPPPP => p_pow(-3) * x0().pow(2) * x1() * x2(),
        CosetSymbol::TsP2 => {
            satake_image(CosetSymbol::TsOneOneP2P2)
                + satake_image(CosetSymbol::TsOnePP2P)
                + satake_image(CosetSymbol::TsPPPP)
        }
        CosetSymbol::TsPrimeP => {
            satake_image(CosetSymbol::TsP).pow(2) - satake_image(CosetSymbol::TsP2)
        }
        CosetSymbol::TsOneOneP3P3 => {
            let w00 = orbit_sum(&weyl_orbit(0, 0).unwrap());
            let w01 = orbit_sum(&weyl_orbit(0, 1).unwrap());
            let w11 = orbit_sum(&weyl_orbit(1, 1).unwrap());
            let c11 = (p() - int(1)) * (p() * int(2) - int(1)) * p_pow(-2);
            x0().pow(3) * (w00 + pm1_over_p() * w01 + c11 * w11)
        }
        CosetSymbol::UsUsStarTr => {
            let (c1, c2, c3) = us_coefficients();
            c1 * satake_image(CosetSymbol::TsOnePP2P)
                + c2 * satake_image(CosetSymbol::TsOneOneP2P2)
                + c3 * satake_image(CosetSymbol::TsPPPP)
        }
    }
}

/// `mu(p^2)`, the index of level `Np^2` in level `N`: `p^3 mu(p)`.
pub fn mu_p2() -> SymExpr {
    p().pow(3) * mu()
}

/// Multiplicities `(c1, c2, c3)` of `T(1,p,p^2,p)`, `T(1,1,p^2,p^2)` and
/// `T(p,p,p,p)` in `U(p) U(p)^* Tr`.
pub fn us_coefficients() -> (SymExpr, SymExpr, SymExpr) {
    (p().pow(4) - p().pow(2), p().pow(3) - p().pow(2), mu_p2())
}

/// Number of single cosets in the double coset (or the corresponding sum).
pub fn degree(s: CosetSymbol) -> SymExpr {
    match s {
        CosetSymbol::TsP => mu(),
        CosetSymbol::TsOnePP2P => p() * mu(),
        CosetSymbol::TsOneOneP2P2 => p().pow(3) * mu(),
        CosetSymbol::TsPPPP => int(1),
        CosetSymbol::TsP2 => {
            degree(CosetSymbol::TsOnePP2P)
                + degree(CosetSymbol::TsOneOneP2P2)
                + degree(CosetSymbol::TsPPPP)
        }
        CosetSymbol::TsPrimeP => degree(CosetSymbol::TsP).pow(2) - degree(CosetSymbol::TsP2),
        CosetSymbol::TsOneOneP3P3 | CosetSymbol::UsUsStarTr => p().pow(6) * mu(),
    }
}

/// The degree map as a ring homomorphism on images: evaluate at
/// `(x0, x1, x2) = (1, p, p^2)`.
pub fn degree_from_image(image: &SymExpr) -> SymExpr {
    image
        .substitute(Var::X0, &int(1))
        .and_then(|e| e.substitute(Var::X1, &p()))
        .and_then(|e| e.substitute(Var::X2, &p().pow(2)))
        .expect("unit substitutions cannot fail")
}

/// The catalogued operator identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Identity {
    I1,
    I2,
    I3,
    I4,
    I5,
    DegreeEquation,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::I1,
        Identity::I2,
        Identity::I3,
        Identity::I4,
        Identity::I5,
        Identity::DegreeEquation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::I1 => "I1",
            Identity::I2 => "I2",
            Identity::I3 => "I3",
            Identity::I4 => "I4",
            Identity::I5 => "I5",
            Identity::DegreeEquation => "degree_equation",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Identity::I1 => "T'(p) = p T(1,p,p^2,p) + p(1+p+p^2) T(p,p,p,p)",
            Identity::I2 => "T(1,1,p^2,p^2) = T(p)^2 - (1+1/p) T'(p) + p(p+1) T(p,p,p,p)",
            Identity::I3 => "T(1,p,p^2,p) = T'(p)/p - (1+p+p^2) T(p,p,p,p)",
            Identity::I4 => "U U^* Tr = p^2(p-1) T(p)^2 + (p^3 mu(p) - p^2(p^4-1)) T(p,p,p,p)",
            Identity::I5 => {
                "T(1,1,p^3,p^3) = T(p) (T(p)^2 - (2+1/p) T'(p) + p(p+1)(p+2) T(p,p,p,p))"
            }
            Identity::DegreeEquation => "p^6 mu(p) = c1 p mu(p) + c2 p^3 mu(p) + c3",
        }
    }

    /// Both sides as Laurent polynomials.
    pub fn sides(self) -> (SymExpr, SymExpr) {
        use CosetSymbol::*;
        let t = satake_image(TsP);
        let tp = satake_image(TsPrimeP);
        let t1 = satake_image(TsOnePP2P);
        let t11 = satake_image(TsOneOneP2P2);
        let tpppp = satake_image(TsPPPP);
        let one = int(1);
        let onepp2 = &one + p() + p().pow(2);
        match self {
            Identity::I1 => (tp, p() * t1 + p() * onepp2 * tpppp),
            Identity::I2 => (
                t11,
                t.pow(2) - (&one + p_pow(-1)) * tp + p() * (p() + int(1)) * tpppp,
            ),
            Identity::I3 => (t1, p_pow(-1) * tp - onepp2 * tpppp),
            Identity::I4 => {
                let coeff = p().pow(3) * mu() - p().pow(2) * (p().pow(4) - int(1));
                (
                    satake_image(UsUsStarTr),
                    p().pow(2) * (p() - int(1)) * t.pow(2) + coeff * tpppp,
                )
            }
            Identity::I5 => {
                let inner = t.pow(2) - (int(2) + p_pow(-1)) * tp
                    + p() * (p() + int(1)) * (p() + int(2)) * tpppp;
                (satake_image(TsOneOneP3P3), &t * &inner)
            }
            Identity::DegreeEquation => {
                let (c1, c2, c3) = us_coefficients();
                (
                    p().pow(6) * mu(),
                    c1 * p() * mu() + c2 * p().pow(3) * mu() + c3,
                )
            }
        }
    }
}

impl FromStr for Identity {
    type Err = HeckeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HeckeError::UnknownIdentity(s.to_string()))
    }
}

/// Outcome of one identity check. The three polynomials are given in the
/// canonical JSON form.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub statement: String,
    pub holds: bool,
    pub lhs_terms: SymExpr,
    pub rhs_terms: SymExpr,
    pub difference_terms: SymExpr,
}

pub fn verify_identity(id: Identity) -> IdentityReport {
    let (lhs, rhs) = id.sides();
    let diff = &lhs - &rhs;
    IdentityReport {
        identity: id.name().to_string(),
        statement: id.description().to_string(),
        holds: diff.is_zero(),
        lhs_terms: lhs,
        rhs_terms: rhs,
        difference_terms: diff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{assign, rat};

    #[test]
    fn orbits_match_catalogue() {
        let o = weyl_orbit(0, 0).unwrap();
        assert_eq!(o.members, BTreeSet::from([(0, 0), (0, 3), (3, 0), (3, 3)]));
        let o = weyl_orbit(1, 1).unwrap();
        assert_eq!(o.members, BTreeSet::from([(1, 1), (2, 1), (1, 2), (2, 2)]));
        let o = weyl_orbit(0, 1).unwrap();
        let expect = BTreeSet::from([
            (0, 1),
            (1, 0),
            (3, 1),
            (1, 3),
            (0, 2),
            (2, 0),
            (3, 2),
            (2, 3),
        ]);
        assert_eq!(o.members, expect);
        assert_eq!(weyl_orbit(1, 0).unwrap().members, expect);
        assert_eq!(weyl_orbit(2, 0), Err(HeckeError::OrbitSeed(2, 0)));
    }

    #[test]
    fn image_examples() {
        let tp = satake_image(CosetSymbol::TsP);
        assert_eq!(tp, x0() + x0() * x1() + x0() * x2() + x0() * x1() * x2());
        assert_eq!(
            satake_image(CosetSymbol::TsPPPP),
            p_pow(-3) * x0().pow(2) * x1() * x2()
        );
        // T(1,p,p^2,p) at p = 2, x = (1,1,1): 3/8 + 4/2 = 19/8
        let at = assign(&[(Var::P, 2), (Var::X0, 1), (Var::X1, 1), (Var::X2, 1)]);
        assert_eq!(
            satake_image(CosetSymbol::TsOnePP2P).eval(&at).unwrap(),
            rat(19, 8)
        );
    }

    #[test]
    fn all_identities_hold() {
        for id in Identity::ALL {
            let r = verify_identity(id);
            assert!(r.holds, "{} failed: {}", r.identity, r.difference_terms);
        }
    }

    #[test]
    fn i1_expanded_form() {
        let (lhs, _) = Identity::I1.sides();
        let one = int(1);
        let expect = x0().pow(2)
            * ((x1() + x2()) * (&one + x1() * x2()) + (int(2) + p_pow(-1)) * x1() * x2());
        assert_eq!(lhs, expect);
    }

    #[test]
    fn perturbed_identity_fails() {
        let (lhs, rhs) = Identity::I5.sides();
        let bumped = rhs + satake_image(CosetSymbol::TsPPPP);
        assert!(!(&lhs - &bumped).is_zero());
        // dropping c3 breaks the degree equation
        let (c1, c2, _) = us_coefficients();
        let partial = c1 * p() * mu() + c2 * p().pow(3) * mu();
        assert!(!(p().pow(6) * mu() - partial).is_zero());
    }

    #[test]
    fn degrees_are_image_evaluations() {
        for s in CosetSymbol::ALL {
            assert_eq!(degree(s), degree_from_image(&satake_image(s)), "{s}");
        }
        assert_eq!(degree(CosetSymbol::TsOneOneP2P2), p().pow(3) * mu());
        assert_eq!(degree(CosetSymbol::TsPPPP), int(1));
    }

    #[test]
    fn degree_of_t_prime() {
        let d = degree(CosetSymbol::TsPrimeP);
        let expect = p().pow(2) * mu() + p() + p().pow(2) + p().pow(3);
        assert_eq!(d, expect);
        let via_i1 = p() * degree(CosetSymbol::TsOnePP2P) + p() * (int(1) + p() + p().pow(2));
        assert_eq!(d, via_i1);
    }

    #[test]
    fn specializations_agree_with_symbolic_verdict() {
        for pv in [2, 3, 5, 7, 11] {
            for id in Identity::ALL {
                let (lhs, rhs) = id.sides();
                for xs in [(1, 2, 3), (-2, 5, 7), (3, -1, 4)] {
                    let at = assign(&[
                        (Var::P, pv),
                        (Var::X0, xs.0),
                        (Var::X1, xs.1),
                        (Var::X2, xs.2),
                    ]);
                    assert_eq!(lhs.eval(&at).unwrap(), rhs.eval(&at).unwrap());
                }
            }
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(
            "TS_1pp2p".parse::<CosetSymbol>().unwrap(),
            CosetSymbol::TsOnePP2P
        );
        assert!("TS_q".parse::<CosetSymbol>().is_err());
        assert_eq!("i3".parse::<Identity>().unwrap(), Identity::I3);
        assert!("I9".parse::<Identity>().is_err());
    }
}
