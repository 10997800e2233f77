//! Jacobi theta functions of index 1 and the invariant `v^{k/2} e^{-2 pi m y^2/v} |phi|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_upper, AnalyticError, Estimate};
use crate::jacobi::{JacobiError, JacobiForm};

const TERM_BUDGET: i64 = 1_000_000;

/// `theta_mu(tau, z) = sum_{n = mu mod 2} e(n^2 tau / 4) e(n z)`.
///
/// Summation runs outward from the largest term; the tail after the last
/// term `t` with next-term ratio `r < 1` is bounded by `t r / (1 - r)`, since
/// the ratios themselves shrink along a Gaussian.
pub fn theta_eval(
    mu: u8,
    tau: Complex64,
    z: Complex64,
    tol: f64,
) -> Result<Estimate<Complex64>, AnalyticError> {
    check_upper(tau)?;
    if mu > 1 {
        return Err(AnalyticError::InvalidInput(format!(
            "mu must be 0 or 1, got {mu}"
        )));
    }
    let (u, v) = (tau.re, tau.im);
    let (x, y) = (z.re, z.im);
    let log_mag = |n: f64| -PI * n * n * v / 2.0 - 2.0 * PI * n * y;
    let vertex = -2.0 * y / v;
    let mut n0 = vertex.round() as i64;
    if n0.rem_euclid(2) != mu as i64 {
        n0 += if (n0 as f64) < vertex { 1 } else { -1 };
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for (start, step) in [(n0, 2i64), (n0 - 2, -2i64)] {
        let mut n = start;
        let mut count = 0;
        loop {
            let nf = n as f64;
            let lm = log_mag(nf);
            let phase = 2.0 * PI * (nf * nf * u / 4.0 + nf * x);
            total += Complex64::from_polar(lm.exp(), phase);
            let r = (log_mag(nf + step as f64) - lm).exp();
            let bound = lm.exp() * r / (1.0 - r);
            if r < 1.0 && bound < tol / 4.0 {
                tail += bound;
                break;
            }
            n += step;
            count += 1;
            if count > TERM_BUDGET {
                return Err(AnalyticError::TailUnachievable {
                    what: "theta",
                    estimate: bound,
                });
            }
        }
    }
    Ok(Estimate {
        value: total,
        tail_bound: tail,
    })
}

/// `|theta_0|^2 + |theta_1|^2`.
pub fn vartheta(tau: Complex64, z: Complex64, tol: f64) -> Result<Estimate<f64>, AnalyticError> {
    let mut value = 0.0;
    let mut tail = 0.0;
    for mu in 0..2 {
        let t = theta_eval(mu, tau, z, tol / 8.0)?;
        let a = t.value.norm();
        value += a * a;
        tail += 2.0 * a * t.tail_bound + t.tail_bound * t.tail_bound;
    }
    Ok(Estimate {
        value,
        tail_bound: tail,
    })
}

/// `v^{k/2} e^{-2 pi m y^2 / v} |phi(tau, z)|`, invariant under the Jacobi
/// group. Fails when the scaled truncation estimate exceeds `tol`.
pub fn invariant_phi(
    phi: &JacobiForm,
    tau: Complex64,
    z: Complex64,
    tol: f64,
) -> Result<Estimate<f64>, AnalyticError> {
    check_upper(tau)?;
    let (v, y) = (tau.im, z.im);
    let scale = v.powf(phi.weight as f64 / 2.0) * (-2.0 * PI * phi.index as f64 * y * y / v).exp();
    let raw = phi.eval(tau, z);
    let tail = raw.tail_estimate * scale;
    if tail > tol {
        return Err(JacobiError::Truncation {
            estimate: tail,
            tolerance: tol,
        }
        .into());
    }
    Ok(Estimate {
        value: raw.value.norm() * scale,
        tail_bound: tail,
    })
}

/// Sampling grid over `F_1 x` (z-torus). `tau = u + iv` runs over a
/// `steps x steps` lattice of the box, keeping points with `|tau| >= 1`; `z`
/// is `alpha tau + beta` with `alpha, beta` on a `z_steps x z_steps` lattice
/// of `[0, 1)^2`. `prec` is the absolute tail tolerance per evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanGrid {
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
    pub steps: usize,
    #[serde(default = "default_z_steps")]
    pub z_steps: usize,
    #[serde(default = "default_prec")]
    pub prec: f64,
}

fn default_z_steps() -> usize {
    10
}

fn default_prec() -> f64 {
    1e-12
}

impl ScanGrid {
    pub fn validate(&self) -> Result<(), AnalyticError> {
        let ok = self.steps >= 2
            && self.z_steps >= 1
            && self.prec > 0.0
            && self.u_range[0] <= self.u_range[1]
            && 0.0 < self.v_range[0]
            && self.v_range[0] <= self.v_range[1];
        if ok {
            Ok(())
        } else {
            Err(AnalyticError::InvalidInput(format!("bad grid {self:?}")))
        }
    }

    pub fn tau_points(&self) -> Vec<Complex64> {
        let lin = |r: [f64; 2], i: usize| r[0] + (r[1] - r[0]) * i as f64 / (self.steps - 1) as f64;
        let mut out = Vec::new();
        for i in 0..self.steps {
            for j in 0..self.steps {
                let tau = Complex64::new(lin(self.u_range, i), lin(self.v_range, j));
                if tau.norm_sqr() >= 1.0 - 1e-12 {
                    out.push(tau);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub op: String,
    pub grid: ScanGrid,
    pub points: usize,
    pub max_value: f64,
    /// `[u, v, x, y]` of the maximizer.
    pub argmax: [f64; 4],
    pub tail_bound: f64,
}

/// Maximum of `e^{-c pi y^2 / v} vartheta(tau, z)` over the grid.
///
/// With `c = 4` the quantity is the Jacobi-invariant normalization of
/// `vartheta` and stays bounded; with `c = 2` it grows like `e^{2 pi alpha^2 v}`.
pub fn vartheta_scan(grid: &ScanGrid, c: f64) -> Result<ScanReport, AnalyticError> {
    grid.validate()?;
    let taus = grid.tau_points();
    let zs = grid.z_steps;
    let results: Result<Vec<(f64, [f64; 4], f64)>, AnalyticError> = taus
        .par_iter()
        .map(|&tau| {
            let mut best = (f64::NEG_INFINITY, [0.0; 4], 0.0f64);
            for a in 0..zs {
                for b in 0..zs {
                    let (al, be) = (a as f64 / zs as f64, b as f64 / zs as f64);
                    let z = tau * al + be;
                    let w = (-c * PI * z.im * z.im / tau.im).exp();
                    let t = vartheta(tau, z, grid.prec)?;
                    let val = w * t.value;
                    best.2 = best.2.max(w * t.tail_bound);
                    if val > best.0 {
                        best.0 = val;
                        best.1 = [tau.re, tau.im, z.re, z.im];
                    }
                }
            }
            Ok(best)
        })
        .collect();
    let results = results?;
    let mut report = ScanReport {
        op: format!("vartheta_scan(c={c})"),
        grid: grid.clone(),
        points: results.len() * zs * zs,
        max_value: f64::NEG_INFINITY,
        argmax: [0.0; 4],
        tail_bound: 0.0,
    };
    for (val, arg, tail) in results {
        report.tail_bound = report.tail_bound.max(tail);
        if val > report.max_value {
            report.max_value = val;
            report.argmax = arg;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::jacobi_cusp_basis;

    fn fixed(mu: i64, tau: Complex64, z: Complex64, nmax: i64) -> Complex64 {
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        (-nmax..=nmax)
            .filter(|n| n.rem_euclid(2) == mu)
            .map(|n| {
                let nf = n as f64;
                (i2pi * (tau * (nf * nf / 4.0) + z * nf)).exp()
            })
            .sum()
    }

    #[test]
    fn theta_examples() {
        let t = theta_eval(
            0,
            Complex64::new(0.0, 10.0),
            Complex64::new(0.0, 0.0),
            1e-13,
        )
        .unwrap();
        assert!((t.value - 1.0).norm() < 1e-12);
        let tau = Complex64::new(0.1, 2.0);
        let t1 = theta_eval(1, tau, Complex64::new(0.0, 0.0), 1e-14).unwrap();
        let lead = (Complex64::new(0.0, 2.0 * PI) * tau / 4.0).exp() * 2.0;
        assert!((t1.value - lead).norm() < 1e-6 * lead.norm());
        assert!(theta_eval(2, tau, tau, 1e-12).is_err());
    }

    #[test]
    fn theta_matches_fixed_window() {
        for (tau, z) in [
            (Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)),
            (Complex64::new(0.3, 0.9), Complex64::new(0.2, 0.7)),
            (Complex64::new(-0.4, 3.0), Complex64::new(0.5, -2.5)),
        ] {
            for mu in 0..2 {
                let a = theta_eval(mu as u8, tau, z, 1e-14).unwrap().value;
                let b = fixed(mu, tau, z, 80);
                assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0), "{a} {b}");
            }
        }
        let v = vartheta(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0), 1e-13).unwrap();
        let f0 = fixed(0, Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0), 60).norm_sqr();
        let f1 = fixed(1, Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0), 60).norm_sqr();
        assert!(v.value > 0.0 && (v.value - f0 - f1).abs() < 1e-12);
    }

    #[test]
    fn invariant_phi_translations() {
        let phi = jacobi_cusp_basis(10, 400).unwrap();
        let tau = Complex64::new(0.15, 1.2);
        let z = Complex64::new(0.3, 0.2);
        let base = invariant_phi(&phi, tau, z, 1e-6).unwrap().value;
        let shifted = invariant_phi(&phi, tau, z + 1.0, 1e-6).unwrap().value;
        assert!((base - shifted).abs() <= 1e-9 * base);
        let shifted = invariant_phi(&phi, tau, z + tau, 1e-6).unwrap().value;
        assert!((base - shifted).abs() <= 1e-8 * base);
    }

    #[test]
    fn weight_four_pi_is_bounded_two_pi_grows() {
        // the second grid extends the first with the same v spacing 0.2
        let grid = |vmax: f64, steps: usize, prec: f64| ScanGrid {
            u_range: [-0.5, 0.5],
            v_range: [0.8, vmax],
            steps,
            z_steps: 6,
            prec,
        };
        let good_lo = vartheta_scan(&grid(3.0, 12, 1e-12), 4.0).unwrap().max_value;
        let good_hi = vartheta_scan(&grid(5.6, 25, 1e-12), 4.0).unwrap().max_value;
        assert!(
            good_hi >= good_lo && good_hi < 1.01 * good_lo,
            "{good_lo} {good_hi}"
        );
        let refined = vartheta_scan(&grid(3.0, 12, 5e-13), 4.0).unwrap().max_value;
        assert!((refined / good_lo - 1.0).abs() < 0.01);
        let bad_lo = vartheta_scan(&grid(3.0, 12, 1e-12), 2.0).unwrap().max_value;
        let bad_hi = vartheta_scan(&grid(5.6, 25, 1e-12), 2.0).unwrap().max_value;
        assert!(bad_hi > 100.0 * bad_lo, "{bad_lo} {bad_hi}");
    }
}
