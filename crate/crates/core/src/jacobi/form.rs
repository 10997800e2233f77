//! Coefficient tables of Jacobi forms and the operations on them.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::classnum::cohen_h;
use super::JacobiError;
use crate::exact::arith::{divisors, gcd, kronecker};
use crate::exact::{int, to_f64, QSeries};

/// Jacobi form of weight `k` and index `m`, stored by discriminant class
/// `(D, r mod 2m)` with `D = 4mn - r^2`, for `0 <= D <= dmax`. At level 1 a
/// coefficient depends only on its class, so every `(n, r)` is covered.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiForm {
    pub weight: i32,
    pub index: u64,
    pub level: u64,
    pub dmax: i64,
    coeffs: BTreeMap<(i64, i64), BigRational>,
}

/// All classes `(D, rho)` of index `m` with `0 <= D <= dmax`.
fn classes(m: u64, dmax: i64) -> Vec<(i64, i64)> {
    let m = m as i64;
    let mut out = Vec::new();
    for d in 0..=dmax {
        for rho in 0..2 * m {
            if (d + rho * rho) % (4 * m) == 0 {
                out.push((d, rho));
            }
        }
    }
    out
}

/// A floating-point value together with an estimate of the dropped tail.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NumValue {
    pub value: Complex64,
    pub tail_estimate: f64,
}

impl JacobiForm {
    /// Builds a form by evaluating `f(n, r)` at one representative per class.
    pub fn from_fn<F>(weight: i32, index: u64, dmax: i64, mut f: F) -> Result<Self, JacobiError>
    where
        F: FnMut(i64, i64) -> Result<BigRational, JacobiError>,
    {
        if index == 0 {
            return Err(JacobiError::ZeroIndex);
        }
        let mut coeffs = BTreeMap::new();
        for (d, rho) in classes(index, dmax) {
            let n = (d + rho * rho) / (4 * index as i64);
            let c = f(n, rho)?;
            if !c.is_zero() {
                coeffs.insert((d, rho), c);
            }
        }
        Ok(Self {
            weight,
            index,
            level: 1,
            dmax,
            coeffs,
        })
    }

    /// `c(n, r)`; zero when `4mn - r^2 < 0`.
    pub fn c(&self, n: i64, r: i64) -> Result<BigRational, JacobiError> {
        let m = self.index as i64;
        let d = 4 * m * n - r * r;
        if d < 0 {
            return Ok(BigRational::zero());
        }
        if d > self.dmax {
            return Err(JacobiError::PrecisionExhausted {
                needed: d,
                dmax: self.dmax,
            });
        }
        Ok(self
            .coeffs
            .get(&(d, r.rem_euclid(2 * m)))
            .cloned()
            .unwrap_or_else(BigRational::zero))
    }

    /// Index-1 coefficient by discriminant `D = 4n - r^2`.
    pub fn c_disc(&self, d: i64) -> Result<BigRational, JacobiError> {
        if self.index != 1 {
            return Err(JacobiError::IndexNotOne(self.index));
        }
        match d.rem_euclid(4) {
            0 => self.c(d / 4, 0),
            3 => self.c((d + 1) / 4, 1),
            _ => Ok(BigRational::zero()),
        }
    }

    /// Nonzero coefficients by class.
    pub fn classes(&self) -> impl Iterator<Item = (&(i64, i64), &BigRational)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (*k, v * c))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        out
    }

    pub fn sub(&self, other: &JacobiForm) -> Self {
        assert_eq!(self.index, other.index);
        let mut out = self.clone();
        out.dmax = self.dmax.min(other.dmax);
        for (k, v) in &other.coeffs {
            let e = out.coeffs.entry(*k).or_insert_with(BigRational::zero);
            *e -= v;
        }
        let dmax = out.dmax;
        out.coeffs.retain(|k, v| !v.is_zero() && k.0 <= dmax);
        out
    }

    /// Product with a q-series in `tau`: `c'(n,r) = sum_j a(j) c(n-j, r)`.
    pub fn mul_q(&self, f: &QSeries) -> Result<Self, JacobiError> {
        let m = self.index as i64;
        let needed = (self.dmax / (4 * m)) as usize + 1;
        if f.precision() < needed {
            return Err(JacobiError::PrecisionExhausted {
                needed: 4 * m * f.precision() as i64,
                dmax: self.dmax,
            });
        }
        let mut coeffs = BTreeMap::new();
        for (d, rho) in classes(self.index, self.dmax) {
            let mut acc = BigRational::zero();
            let mut j = 0i64;
            while d - 4 * m * j >= 0 {
                if let Some(c) = self.coeffs.get(&(d - 4 * m * j, rho)) {
                    acc += f.coeffs()[j as usize].clone() * c;
                }
                j += 1;
            }
            if !acc.is_zero() {
                coeffs.insert((d, rho), acc);
            }
        }
        Ok(Self {
            weight: self.weight + f.weight,
            index: self.index,
            level: self.level.max(f.level),
            dmax: self.dmax,
            coeffs,
        })
    }

    /// Truncated Fourier sum `sum c(n,r) q^n zeta^r` at `(tau, z)`.
    ///
    /// Each class is summed over all `r` in its residue class until the terms
    /// drop 40 nepers below the class maximum. The returned tail estimate is
    /// the mass of the top tenth of the stored discriminant range, which
    /// bounds the dropped classes when the coefficients grow polynomially.
    pub fn eval(&self, tau: Complex64, z: Complex64) -> NumValue {
        let m = self.index as i64;
        let mf = m as f64;
        let (u, v) = (tau.re, tau.im);
        let (x, y) = (z.re, z.im);
        let r_star = -2.0 * mf * y / v;
        let band = (self.dmax as f64 * 0.9) as i64;
        let mut total = Complex64::new(0.0, 0.0);
        let mut tail = 0.0;
        for (&(d, rho), c) in &self.coeffs {
            let cf = to_f64(c);
            let peak = -2.0 * PI * (d as f64 * v / (4.0 * mf) - mf * y * y / v);
            let t0 = ((r_star - rho as f64) / (2.0 * mf)).round() as i64;
            let mut class_sum = Complex64::new(0.0, 0.0);
            let mut class_abs = 0.0;
            for (start, step) in [(t0, 1i64), (t0 - 1, -1i64)] {
                let mut t = start;
                loop {
                    let r = rho + 2 * m * t;
                    let n = (d + r * r) / (4 * m);
                    let (nf, rf) = (n as f64, r as f64);
                    let logmag = -2.0 * PI * (nf * v + rf * y);
                    if logmag < peak - 40.0 {
                        break;
                    }
                    let phase = 2.0 * PI * (nf * u + rf * x);
                    let mag = logmag.exp();
                    class_sum += Complex64::from_polar(mag, phase);
                    class_abs += mag;
                    t += step;
                }
            }
            total += class_sum * cf;
            if d > band {
                tail += class_abs * cf.abs();
            }
        }
        NumValue {
            value: total,
            tail_estimate: tail,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    n: i64,
    r: i64,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    weight: i32,
    index: u64,
    level: u64,
    dmax: i64,
    coeffs: Vec<CoeffJson>,
}

impl Serialize for JacobiForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.index as i64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&(d, rho), c)| CoeffJson {
                n: (d + rho * rho) / (4 * m),
                r: rho,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        FormJson {
            weight: self.weight,
            index: self.index,
            level: self.level,
            dmax: self.dmax,
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JacobiForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = FormJson::deserialize(d)?;
        if j.index == 0 {
            return Err(D::Error::custom("index must be positive"));
        }
        let m = j.index as i64;
        let mut coeffs = BTreeMap::new();
        for c in j.coeffs {
            let disc = 4 * m * c.n - c.r * c.r;
            if disc < 0 || disc > j.dmax {
                return Err(D::Error::custom(format!(
                    "({}, {}) outside stored range",
                    c.n, c.r
                )));
            }
            let num: BigInt = c.num.parse().map_err(D::Error::custom)?;
            let den: BigInt = c.den.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            let val = BigRational::new(num, den);
            let key = (disc, c.r.rem_euclid(2 * m));
            if let Some(old) = coeffs.insert(key, val.clone()) {
                if old != val {
                    return Err(D::Error::custom(JacobiError::InconsistentReduction(disc)));
                }
            }
        }
        coeffs.retain(|_, v: &mut BigRational| !v.is_zero());
        Ok(JacobiForm {
            weight: j.weight,
            index: j.index,
            level: j.level,
            dmax: j.dmax,
            coeffs,
        })
    }
}

/// `E_{k,1}` with `c(n, r) = H(k-1, 4n - r^2) / H(k-1, 0)`.
pub fn jacobi_eisenstein(k: u32, dmax: i64) -> Result<JacobiForm, JacobiError> {
    if k != 4 && k != 6 {
        return Err(JacobiError::UnsupportedWeight(k));
    }
    let h0 = cohen_h(k - 1, 0)?;
    JacobiForm::from_fn(k as i32, 1, dmax, |n, r| {
        Ok(cohen_h(k - 1, 4 * n - r * r)? / &h0)
    })
}

/// The normalized cusp form spanning `J_{k,1}` for `k = 10, 12`:
/// `E6 E_{4,1} - E4 E_{6,1}` and `E4^2 E_{4,1} - E6 E_{6,1}` (each over 144),
/// scaled so that `c(D = 3) = 1`.
pub fn jacobi_cusp_basis(k: u32, dmax: i64) -> Result<JacobiForm, JacobiError> {
    let prec = (dmax / 4) as usize + 1;
    let e4 = QSeries::eisenstein(4, prec);
    let e6 = QSeries::eisenstein(6, prec);
    let e41 = jacobi_eisenstein(4, dmax)?;
    let e61 = jacobi_eisenstein(6, dmax)?;
    let raw = match k {
        10 => e41.mul_q(&e6)?.sub(&e61.mul_q(&e4)?),
        12 => e41.mul_q(&(&e4 * &e4))?.sub(&e61.mul_q(&e6)?),
        _ => return Err(JacobiError::UnsupportedWeight(k)),
    };
    let raw = raw.scale(&BigRational::new(BigInt::one(), BigInt::from(144)));
    if !raw.c_disc(0)?.is_zero() {
        return Err(JacobiError::NotCuspidal(format!(
            "c(0) = {}",
            raw.c_disc(0)?
        )));
    }
    let c3 = raw.c_disc(3)?;
    if c3.is_zero() {
        return Err(JacobiError::NotCuspidal("c(3) vanishes".into()));
    }
    Ok(raw.scale(&c3.recip()))
}

/// Theta components of an index-1 form: `h_mu = sum_{D = -mu^2 mod 4} c(D) q^{D/4}`.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaDecomposition {
    pub h0: BTreeMap<i64, BigRational>,
    pub h1: BTreeMap<i64, BigRational>,
    /// `h0 = (h((tau-1)/4) + h((tau+1)/4))/2` and
    /// `h1 = (h((tau-1)/4) - h((tau+1)/4))/(2i)` hold coefficientwise for
    /// `h = h0(4 tau) + h1(4 tau)`.
    pub quarter_shift_holds: bool,
}

/// `i^e` as `(re, im)`.
fn i_pow(e: i64) -> (i64, i64) {
    match e.rem_euclid(4) {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}

pub fn theta_decompose(phi: &JacobiForm) -> Result<ThetaDecomposition, JacobiError> {
    if phi.index != 1 {
        return Err(JacobiError::IndexNotOne(phi.index));
    }
    let mut h0 = BTreeMap::new();
    let mut h1 = BTreeMap::new();
    for (&(d, rho), c) in &phi.coeffs {
        if rho == 0 {
            h0.insert(d, c.clone());
        } else {
            h1.insert(d, c.clone());
        }
    }
    // reassemble h and push it through the quarter shifts with exact
    // Gaussian rationals (both halves carry a factor 1/2)
    let mut ok = true;
    for d in 0..=phi.dmax {
        let zero = BigRational::zero();
        let c = h0.get(&d).unwrap_or(&zero) + h1.get(&d).unwrap_or(&zero);
        let (ar, ai) = i_pow(-d);
        let (br, bi) = i_pow(d);
        // (a + b)/2 and (a - b)/(2i) = -i (a - b)/2
        let s = ((ar + br), (ai + bi));
        let t = ((ai - bi), -(ar - br));
        let half = BigRational::new(1.into(), 2.into());
        let s_re = &c * int(s.0) * &half;
        let s_im = &c * int(s.1) * &half;
        let t_re = &c * int(t.0) * &half;
        let t_im = &c * int(t.1) * &half;
        ok &= s_im.is_zero() && t_im.is_zero();
        ok &= &s_re == h0.get(&d).unwrap_or(&zero);
        ok &= &t_re == h1.get(&d).unwrap_or(&zero);
    }
    Ok(ThetaDecomposition {
        h0,
        h1,
        quarter_shift_holds: ok,
    })
}

fn check_level_one_index_one(phi: &JacobiForm) -> Result<(), JacobiError> {
    if phi.index != 1 {
        return Err(JacobiError::IndexNotOne(phi.index));
    }
    if phi.level != 1 {
        return Err(JacobiError::LevelNotOne(phi.level));
    }
    Ok(())
}

/// `c_{phi|V_m}(n, r) = sum_{a | (n, r, m)} a^{k-1} c_phi(nm/a^2, r/a)` at an
/// arbitrary representative `(n, r)`.
pub fn vm_coeff_at(phi: &JacobiForm, m: u64, n: i64, r: i64) -> Result<BigRational, JacobiError> {
    check_level_one_index_one(phi)?;
    if m == 0 {
        return Err(JacobiError::ZeroIndex);
    }
    let mi = m as i64;
    let g = gcd(gcd(n, r), mi).unsigned_abs();
    let mut acc = BigRational::zero();
    for a in divisors(g) {
        let ai = a as i64;
        let w = num_traits::pow(BigInt::from(a), (phi.weight - 1) as usize);
        acc += BigRational::from(w) * phi.c(n * mi / (ai * ai), r / ai)?;
    }
    Ok(acc)
}

/// The index-`m` form `phi | V_m` from the coefficient formula.
pub fn vm_coeff(phi: &JacobiForm, m: u64) -> Result<JacobiForm, JacobiError> {
    check_level_one_index_one(phi)?;
    if m == 0 {
        return Err(JacobiError::ZeroIndex);
    }
    JacobiForm::from_fn(phi.weight, m, phi.dmax, |n, r| vm_coeff_at(phi, m, n, r))
}

/// `(phi | V_m)(tau, z) = m^{k-1} sum_{ad = m, b mod d} d^{-k} phi((a tau + b)/d, a z)`.
pub fn vm_direct_eval(
    phi: &JacobiForm,
    m: u64,
    tau: Complex64,
    z: Complex64,
) -> Result<NumValue, JacobiError> {
    check_level_one_index_one(phi)?;
    if m == 0 {
        return Err(JacobiError::ZeroIndex);
    }
    let k = phi.weight;
    let mut total = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for a in divisors(m) {
        let d = m / a;
        let w = (d as f64).powi(-k);
        for b in 0..d {
            let t = (tau * a as f64 + b as f64) / d as f64;
            let val = phi.eval(t, z * a as f64);
            total += val.value * w;
            tail += val.tail_estimate * w;
        }
    }
    let scale = (m as f64).powi(k - 1);
    Ok(NumValue {
        value: total * scale,
        tail_estimate: tail * scale,
    })
}

/// The index-1 Hecke operator `T_p` on coefficients:
/// `c*(D) = c(p^2 D) + (-D/p) p^{k-2} c(D) + p^{2k-3} c(D/p^2)`.
pub fn hecke_tp_index1(phi: &JacobiForm, p: u64) -> Result<JacobiForm, JacobiError> {
    check_level_one_index_one(phi)?;
    let pi = p as i64;
    let k = phi.weight as usize;
    let pk2 = BigRational::from(num_traits::pow(BigInt::from(p), k - 2));
    let p2k3 = BigRational::from(num_traits::pow(BigInt::from(p), 2 * k - 3));
    let dmax = phi.dmax / (pi * pi);
    JacobiForm::from_fn(phi.weight, 1, dmax, |n, r| {
        let d = 4 * n - r * r;
        let mut acc = phi.c_disc(pi * pi * d)?;
        acc += int(kronecker(-d, p)) * &pk2 * phi.c_disc(d)?;
        if d % (pi * pi) == 0 {
            acc += &p2k3 * phi.c_disc(d / (pi * pi))?;
        }
        Ok(acc)
    })
}
