//! Bergman kernel of `S_k(Gamma_0(N))` on the diagonal, geometric and
//! spectral, and the Petersson norm by quadrature.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{check_upper, gamma_int, AnalyticError, Estimate, RMat2, ScanGrid, ScanReport};
use crate::exact::arith::{ext_gcd, gcd};
use crate::exact::{to_f64, QSeries};

/// Relative tolerance on the truncation estimate of the geometric kernel.
pub const BERGMAN_TOL: f64 = 1e-9;

/// `sum_n (w + n)^{-k} = (-2 pi i)^k / (k-1)! sum_{r >= 1} r^{k-1} e(r w)`.
fn lipschitz(k: u32, w: Complex64) -> Estimate<Complex64> {
    let q = (Complex64::new(0.0, 2.0 * PI) * w).exp();
    let qa = q.norm();
    let pref = Complex64::new(0.0, -2.0 * PI).powu(k) / gamma_int(k);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qr = Complex64::new(1.0, 0.0);
    let mut r = 1u32;
    loop {
        qr *= q;
        let term = qr * (r as f64).powi(k as i32 - 1);
        sum += term;
        let ratio = ((r + 1) as f64 / r as f64).powi(k as i32 - 1) * qa;
        // later ratios are smaller, so the rest is below a geometric series
        let rest = term.norm() * ratio / (1.0 - ratio);
        if ratio < 1.0 && (rest <= 1e-18 * sum.norm() || rest < f64::MIN_POSITIVE) {
            return Estimate {
                value: pref * sum,
                tail_bound: pref.norm() * rest,
            };
        }
        r += 1;
    }
}

/// Representatives `(c, d)` of `Gamma_infty \ Gamma_0(N)` mod `+-1` with
/// `|c tau + d| <= cutoff`.
fn bottom_rows(level: u64, tau: Complex64, cutoff: f64) -> Vec<(i64, i64)> {
    let mut rows = vec![(0, 1)];
    let n = level as i64;
    let mut c = n;
    while c as f64 * tau.im <= cutoff {
        let x = c as f64 * tau.re;
        let dlo = (-cutoff - x).floor() as i64;
        let dhi = (cutoff - x).ceil() as i64;
        for d in dlo..=dhi {
            if gcd(c, d) == 1 && (Complex64::new(d as f64, 0.0) + tau * c as f64).norm() <= cutoff {
                rows.push((c, d));
            }
        }
        c += n;
    }
    rows
}

fn complete(c: i64, d: i64) -> RMat2 {
    if c == 0 {
        return RMat2::new(1.0, 0.0, 0.0, 1.0);
    }
    let (_, s, t) = ext_gcd(d, c);
    RMat2::new(s as f64, -t as f64, c as f64, d as f64)
}

/// Bound on `sum_{|c tau + d| > R} |c tau + d|^{-k}` times the largest inner
/// translation sum, from the lattice-point density `1/v` (doubled). Every
/// inner sum has `Im w >= v`, so it is at most both
/// `2 v^{-k} + pi v^{1-k}` and `(2 pi)^k/(k-1)! sum_r r^{k-1} e^{-2 pi r v}`.
fn outer_tail(k: u32, v: f64, cutoff: f64) -> f64 {
    let kf = k as f64;
    let lattice = 2.0 * 2.0 * PI * cutoff.powf(2.0 - kf) / ((kf - 2.0) * v);
    let crude = 2.0 * v.powf(-kf) + PI * v.powf(1.0 - kf);
    let x = (-2.0 * PI * v).exp();
    let series: f64 = (1..200)
        .map(|r| (r as f64).powi(k as i32 - 1) * x.powi(r))
        .sum();
    let sharp = (2.0 * PI).powi(k as i32) / gamma_int(k) * series;
    lattice * crude.min(sharp)
}

fn check_weight(k: u32) -> Result<(), AnalyticError> {
    if k < 4 || k % 2 == 1 {
        return Err(AnalyticError::InvalidInput(format!(
            "weight {k} must be even and >= 4"
        )));
    }
    Ok(())
}

/// `B(tau) = (k-1)/(4 pi) (2i)^k v^k sum_{gamma in +-\Gamma_0(N)} (j(gamma,tau)(gamma tau - conj tau))^{-k}`,
/// which equals `sum_f v^k |f(tau)|^2 / <f, f>` over an orthogonal basis.
pub fn bergman_geometric(
    k: u32,
    level: u64,
    tau: Complex64,
    cutoff: f64,
) -> Result<Estimate<f64>, AnalyticError> {
    check_upper(tau)?;
    check_weight(k)?;
    if level == 0 {
        return Err(AnalyticError::InvalidInput("level must be positive".into()));
    }
    let v = tau.im;
    let sign = if k.is_multiple_of(4) { 1.0 } else { -1.0 };
    let pref = (k as f64 - 1.0) / (4.0 * PI) * 2f64.powi(k as i32) * sign * v.powi(k as i32);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for (c, d) in bottom_rows(level, tau, cutoff) {
        let g = complete(c, d);
        let j = g.j(tau);
        let inner = lipschitz(k, g.apply(tau) - tau.conj());
        let jk = j.powu(k).inv();
        sum += jk * inner.value;
        tail += jk.norm() * inner.tail_bound;
    }
    tail += outer_tail(k, v, cutoff);
    let value = pref * sum;
    let tail = pref.abs() * tail + value.im.abs();
    if tail > BERGMAN_TOL * value.re.abs() {
        return Err(AnalyticError::TailUnachievable {
            what: "bergman_geometric",
            estimate: tail,
        });
    }
    Ok(Estimate {
        value: value.re,
        tail_bound: tail,
    })
}

/// `(k-1)/(4 pi) 2^k v^k sum_{(c, d) = 1, N | c} |c tau + d|^{-k} sum_n |w + n|^{-k}`,
/// the absolute-value majorant of the geometric sum (`w = gamma tau - conj tau`).
pub fn bergman_majorant(
    k: u32,
    level: u64,
    tau: Complex64,
    cutoff: f64,
) -> Result<f64, AnalyticError> {
    check_upper(tau)?;
    check_weight(k)?;
    let v = tau.im;
    let kf = k as f64;
    let pref = (kf - 1.0) / (4.0 * PI) * 2f64.powi(k as i32) * v.powi(k as i32);
    let mut sum = 0.0;
    for (c, d) in bottom_rows(level, tau, cutoff) {
        let g = complete(c, d);
        let w = g.apply(tau) - tau.conj();
        let n0 = (-w.re).round() as i64;
        let mut inner = 0.0;
        let mut t = 0i64;
        loop {
            let a = (w + (n0 + t) as f64).norm().powf(-kf);
            let b = if t > 0 {
                (w + (n0 - t) as f64).norm().powf(-kf)
            } else {
                0.0
            };
            inner += a + b;
            if a + b < 1e-17 * inner {
                break;
            }
            t += 1;
        }
        sum += (Complex64::new(d as f64, 0.0) + tau * c as f64)
            .norm()
            .powf(-kf)
            * inner;
    }
    Ok(pref * sum)
}

/// Maximum of the geometric kernel over the `tau` points of a grid.
pub fn bergman_scan(
    k: u32,
    level: u64,
    grid: &ScanGrid,
    cutoff: f64,
) -> Result<ScanReport, AnalyticError> {
    grid.validate()?;
    let taus = grid.tau_points();
    let values: Result<Vec<Estimate<f64>>, AnalyticError> = taus
        .par_iter()
        .map(|&tau| bergman_geometric(k, level, tau, cutoff))
        .collect();
    let values = values?;
    let mut report = ScanReport {
        op: format!("bergman_scan(k={k}, N={level}, cutoff={cutoff})"),
        grid: grid.clone(),
        points: taus.len(),
        max_value: f64::NEG_INFINITY,
        argmax: [0.0; 4],
        tail_bound: 0.0,
    };
    for (tau, e) in taus.iter().zip(values) {
        report.tail_bound = report.tail_bound.max(e.tail_bound);
        if e.value > report.max_value {
            report.max_value = e.value;
            report.argmax = [tau.re, tau.im, 0.0, 0.0];
        }
    }
    Ok(report)
}

/// `v^12 |Delta(tau)|^2 / <Delta, Delta>`.
pub fn bergman_spectral_delta(tau: Complex64, norm_delta: f64) -> Result<f64, AnalyticError> {
    check_upper(tau)?;
    let prec = ((40.0 / (2.0 * PI * tau.im)).ceil() as usize + 2).clamp(8, 4000);
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let delta = QSeries::delta_product(prec).eval(q);
    Ok(tau.im.powi(12) * delta.norm_sqr() / norm_delta)
}

/// `int_{F_1} v^k |f|^2 du dv / v^2` for a level-1 cusp form.
///
/// Above `v = 1` the `u`-integral is a full period, so that part is
/// `sum_n |a_n|^2 int_1^infty v^{k-2} e^{-4 pi n v} dv` in closed form. The
/// remaining arc region uses tensor Gauss-Legendre, doubled until two
/// successive values agree to `1e-10`.
pub fn petersson_norm_numeric(f: &QSeries, k: u32) -> Result<Estimate<f64>, AnalyticError> {
    if f.coeff(0)
        .map(|c| c != &num_rational::BigRational::from_integer(0.into()))
        .unwrap_or(false)
    {
        return Err(AnalyticError::InvalidInput("form is not cuspidal".into()));
    }
    if k < 2 {
        return Err(AnalyticError::InvalidInput(format!("weight {k}")));
    }
    if f.precision() < 12 {
        return Err(AnalyticError::InvalidInput(
            "need at least 12 q-coefficients".into(),
        ));
    }
    let coeffs: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
    let eval = |tau: Complex64| -> Complex64 {
        let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * q + c;
        }
        acc
    };
    // upper region: (k-2)! e^{-x} sum_{j<=k-2} x^j / j! / x^{k-1}, x = 4 pi n
    let mut upper = 0.0;
    for (n, a) in coeffs.iter().enumerate().skip(1) {
        let x = 4.0 * PI * n as f64;
        let mut s = 0.0;
        let mut term = 1.0;
        for j in 0..=(k - 2) {
            if j > 0 {
                term *= x / j as f64;
            }
            s += term;
        }
        upper += a * a * gamma_int(k - 1) * (-x).exp() * s / x.powi(k as i32 - 1);
    }
    let arc = |deg: usize| -> f64 {
        let gl = GaussLegendre::new(NonZeroUsize::new(deg).expect("positive degree"));
        2.0 * gl.integrate(0.0, 0.5, |u| {
            gl.integrate((1.0 - u * u).sqrt(), 1.0, |v| {
                v.powi(k as i32 - 2) * eval(Complex64::new(u, v)).norm_sqr()
            })
        })
    };
    let mut deg = 16;
    let mut prev = arc(deg);
    loop {
        deg *= 2;
        let next = arc(deg);
        let change = (next - prev).abs() / (next + upper).abs();
        if change < 1e-10 {
            return Ok(Estimate {
                value: next + upper,
                tail_bound: (next - prev).abs(),
            });
        }
        if deg >= 512 {
            return Err(AnalyticError::Quadrature(change));
        }
        prev = next;
    }
}
