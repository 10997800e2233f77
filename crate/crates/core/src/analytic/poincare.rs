//! Kloosterman sums, Bessel functions and the first coefficients of
//! holomorphic Poincaré series.

use std::f64::consts::PI;

use super::{gamma_int, AnalyticError, Estimate};
use crate::exact::arith::{ext_gcd, gcd};

/// Largest tail the Poincaré coefficient may leave.
pub const POINCARE_TOL: f64 = 1e-8;

/// Exact form of `S(n, n; c)`: entry `x` counts the units `d mod c` with
/// `n (d + dbar) = x mod c`, so that `S = sum_x count[x] e(x / c)`.
pub fn kloosterman_residues(n: i64, c: u64) -> Vec<u64> {
    let ci = c as i64;
    let mut counts = vec![0u64; c as usize];
    for d in 0..ci {
        if gcd(d, ci) != 1 {
            continue;
        }
        let (_, inv, _) = ext_gcd(d, ci);
        let dbar = inv.rem_euclid(ci);
        counts[(n.rem_euclid(ci) * ((d + dbar) % ci) % ci) as usize] += 1;
    }
    counts
}

/// `S(n, n; c) = sum_{d mod c, (d, c) = 1} e((n d + n dbar) / c)`, real since
/// the sum is invariant under `d -> -d`.
pub fn kloosterman(n: i64, c: u64) -> f64 {
    kloosterman_residues(n, c)
        .iter()
        .enumerate()
        .map(|(x, &m)| m as f64 * (2.0 * PI * x as f64 / c as f64).cos())
        .sum()
}

/// `J_l(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 sum_k J_{2k} = 1`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let v = bessel_j(order, -x);
        return if order % 2 == 1 { -v } else { v };
    }
    let top = (order as f64).max(x);
    let mut start = (top + 30.0 + 10.0 * top.sqrt()) as u32;
    start += start % 2;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for m in (0..start).rev() {
        // cur holds J_{m+1}
        let prev = 2.0 * (m + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if m == order {
            wanted = cur;
        }
        if m % 2 == 0 {
            norm += if m == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    wanted / norm
}

/// `p_{k,N}(n) = 1 + 2 pi i^{-k} sum_{N | c <= c_max} S(n, n; c) / c * J_{k-1}(4 pi n / c)`.
///
/// Tail: `|S| <= c` and `J_l(x) <= (x/2)^l / l!` give
/// `2 pi (2 pi n)^{k-1} / (k-1)! * c_max^{2-k} / (k-2)`.
pub fn poincare_coeff(
    k: u32,
    level: u64,
    n: i64,
    c_max: u64,
) -> Result<Estimate<f64>, AnalyticError> {
    if k < 4 || k % 2 == 1 || level == 0 || n <= 0 || c_max == 0 {
        return Err(AnalyticError::InvalidInput(format!(
            "k={k}, N={level}, n={n}, c_max={c_max}"
        )));
    }
    let kf = k as f64;
    let tail = 2.0 * PI * (2.0 * PI * n as f64).powf(kf - 1.0) / gamma_int(k)
        * (c_max as f64).powf(2.0 - kf)
        / (kf - 2.0);
    if tail > POINCARE_TOL {
        return Err(AnalyticError::TailUnachievable {
            what: "poincare_coeff",
            estimate: tail,
        });
    }
    let sign = if k.is_multiple_of(4) { 1.0 } else { -1.0 };
    let mut sum = 0.0;
    let mut c = level;
    while c <= c_max {
        sum += kloosterman(n, c) / c as f64 * bessel_j(k - 1, 4.0 * PI * n as f64 / c as f64);
        c += level;
    }
    Ok(Estimate {
        value: 1.0 + 2.0 * PI * sign * sum,
        tail_bound: tail,
    })
}

/// `|p_{k,N}(n) - 1|` for `N = 1..=level_max`, evaluated in parallel.
pub fn poincare_deviations(
    k: u32,
    n: i64,
    level_max: u64,
    c_max: u64,
) -> Result<Vec<f64>, AnalyticError> {
    use rayon::prelude::*;
    (1..=level_max)
        .into_par_iter()
        .map(|level| poincare_coeff(k, level, n, c_max).map(|e| (e.value - 1.0).abs()))
        .collect()
}

/// `max_{N >= N0} dev(N)` for `N0 = 1, 2, 4, ...`; the envelope decays when
/// this sequence is nonincreasing.
pub fn deviation_envelope(devs: &[f64]) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    let mut n0 = 1usize;
    while n0 <= devs.len() {
        let m = devs[n0 - 1..].iter().cloned().fold(0.0, f64::max);
        out.push((n0 as u64, m));
        n0 *= 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series and the sum of its absolute terms, which sets the
    /// rounding scale of the series itself.
    fn bessel_series(l: u32, x: f64) -> (f64, f64) {
        let mut term = (x / 2.0).powi(l as i32) / gamma_int(l + 1);
        let (mut s, mut abs) = (term, term.abs());
        for j in 1..200 {
            term *= -(x / 2.0).powi(2) / (j as f64 * (j + l) as f64);
            s += term;
            abs += term.abs();
        }
        (s, abs)
    }

    #[test]
    fn kloosterman_examples() {
        assert_eq!(kloosterman(1, 1), 1.0);
        assert!((kloosterman(1, 2) - 1.0).abs() < 1e-12);
        assert!((kloosterman(1, 3) + 1.0).abs() < 1e-12);
        // d = 1 gives d + dbar = 2 and d = 2 gives 1; e(1/3) + e(2/3) = -1
        assert_eq!(kloosterman_residues(1, 3), vec![0, 1, 1]);
        assert_eq!(kloosterman_residues(1, 1), vec![1]);
        // Weil bound
        for c in 1..60u64 {
            let bound = 2.0 * (c as f64).sqrt() * crate::exact::arith::divisors(c).len() as f64;
            assert!(kloosterman(5, c).abs() <= bound + 1e-9);
        }
    }

    #[test]
    fn bessel_two_routes() {
        for l in [0u32, 1, 5, 11, 23] {
            for x in [0.01, 0.5, 3.0, 4.0 * PI, 20.0] {
                let a = bessel_j(l, x);
                let (b, scale) = bessel_series(l, x);
                let tol = 1e-12 * b.abs() + 1e-15 * scale;
                assert!((a - b).abs() < tol, "J_{l}({x}): {a} {b}");
                let bound = 1f64.min((x / 2.0).powi(l as i32) / gamma_int(l + 1));
                assert!(a.abs() <= bound * (1.0 + 1e-12));
            }
        }
        assert!((bessel_j(0, 2.404825557695773)).abs() < 1e-14);
    }

    #[test]
    fn weight_12_level_1() {
        let p = poincare_coeff(12, 1, 1, 200).unwrap();
        let norm = 1.0353620568e-6;
        let predicted = gamma_int(11) / (4.0 * PI).powi(11) / norm;
        assert!(
            (p.value - predicted).abs() < 1e-4 * predicted,
            "{}",
            p.value
        );
        assert!(poincare_coeff(12, 1, 1, 1).is_err());
    }

    #[test]
    fn envelope_decays() {
        let devs = poincare_deviations(12, 1, 50, 2000).unwrap();
        let env = deviation_envelope(&devs);
        assert_eq!(env.len(), 6);
        for w in env.windows(2) {
            assert!(w[1].1 <= w[0].1, "{env:?}");
        }
        assert!(env.last().unwrap().1 < 0.05 * env[0].1, "{env:?}");
    }
}
