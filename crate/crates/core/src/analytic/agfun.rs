//! The function `A_g(tau)` and the two lattice counts built on it.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_upper, AnalyticError, RMat2};
use crate::exact::arith::{divisors, ext_gcd, gcd};

/// `A_g(tau) = (g tau - conj(tau)) j(g, tau) / Im(tau)`, for `det g = 1`.
pub fn a_g(g: &RMat2, tau: Complex64) -> Complex64 {
    (g.apply(tau) - tau.conj()) * g.j(tau) / tau.im
}

/// Two-point version `(gamma z - conj(w)) j(gamma, z) / sqrt(Im z Im w)`;
/// `A_gamma(alpha tau, beta tau) = A_{beta^{-1} gamma alpha}(tau)` when
/// `alpha, beta` are upper triangular of equal determinant.
pub fn a_gamma_pair(gamma: &RMat2, z: Complex64, w: Complex64) -> Complex64 {
    (gamma.apply(z) - w.conj()) * gamma.j(z) / (z.im * w.im).sqrt()
}

/// Input of [`count_c`]: the point, the determinant `m`, the level and the
/// threshold `delta`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CountQuery {
    pub tau: Complex64,
    pub m: u64,
    pub level: u64,
    pub delta: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CountResult {
    pub count: u64,
    /// Candidates `gamma` tested against `|A| < delta`.
    pub candidates: u64,
}

/// Largest observed `count_c / (delta^3 + (m + m^2 delta/N) delta^4/N)` over
/// `N in {1,2,3,5}`, `m <= 6`, `delta in {2.5, 4, 8, 16}` and
/// `tau in {i/N, 0.3 + i, -0.2 + 2i}`, attained at `N=5, m=6, delta=2.5`,
/// `tau = -0.2 + 2i` (count 208).
pub const LEM_COUNT_CONSTANT: f64 = 1.024;

/// Default candidate budget of [`count_c`].
pub const COUNT_BUDGET: u64 = 10_000_000;

/// `#{(gamma mod +-1, alpha, beta) : |A_{beta^{-1} gamma alpha}(tau)| < delta}`
/// with `gamma in Gamma_0(N)` and `alpha = [[a, b], [0, d]]`,
/// `beta = [[a', b'], [0, d']]` of determinant `m`, where
/// `d'^2/d + d < b <= d'^2/d + 2d` and `0 <= b' < d'`.
///
/// Completeness: `|A_g| >= |j| + 1/|j|` with `j = C_g tau + D_g`, so `|A| < delta`
/// forces `|C_g| v < delta`, `|C_g u + D_g| < delta` and
/// `|Re(g tau) - u| < delta v / |j|`. Each box is enlarged by a factor 2.
pub fn count_c(q: &CountQuery, budget: u64) -> Result<CountResult, AnalyticError> {
    check_upper(q.tau)?;
    if q.m == 0 || q.level == 0 || !(q.delta > 0.0) {
        return Err(AnalyticError::InvalidInput(format!("bad query {q:?}")));
    }
    if q.delta < 2.0 {
        // |A| >= 2 everywhere
        return Ok(CountResult {
            count: 0,
            candidates: 0,
        });
    }
    let m = q.m as i64;
    let mut pairs = Vec::new();
    for a in divisors(q.m) {
        let d = m / a as i64;
        for ap in divisors(q.m) {
            let dp = m / ap as i64;
            // b ranges over the d integers in (dp^2/d + d, dp^2/d + 2d]
            let lo = (dp * dp).div_euclid(d) + d + 1;
            for b in lo..lo + d {
                for bp in 0..dp {
                    pairs.push((a as i64, b, d, ap as i64, bp, dp));
                }
            }
        }
    }
    let results: Result<Vec<CountResult>, AnalyticError> = pairs
        .par_iter()
        .map(|&(a, b, d, ap, bp, dp)| count_pair(q, [a, b, d], [ap, bp, dp], budget))
        .collect();
    let mut total = CountResult {
        count: 0,
        candidates: 0,
    };
    for r in results? {
        total.count += r.count;
        total.candidates += r.candidates;
    }
    if total.candidates > budget {
        return Err(AnalyticError::BudgetExceeded { budget });
    }
    Ok(total)
}

fn count_pair(
    q: &CountQuery,
    [a, b, d]: [i64; 3],
    [ap, bp, dp]: [i64; 3],
    budget: u64,
) -> Result<CountResult, AnalyticError> {
    const SLACK: f64 = 2.0;
    let (u, v) = (q.tau.re, q.tau.im);
    let delta = q.delta;
    let n = q.level as i64;
    let m = (a * d) as f64;
    let alpha = RMat2::new(a as f64, b as f64, 0.0, d as f64);
    let beta_inv = RMat2::new(dp as f64 / m, -(bp as f64) / m, 0.0, ap as f64 / m);
    let mut out = CountResult {
        count: 0,
        candidates: 0,
    };
    // C_g = c a / d'
    let c_max = (SLACK * delta * dp as f64 / (v * a as f64)).floor() as i64;
    let mut c = 0;
    while c <= c_max {
        // D_g = (c b + e d) / d' with |C_g u + D_g| < SLACK delta
        let cg = (c * a) as f64 / dp as f64;
        let centre = -cg * u;
        let (lo, hi) = (centre - SLACK * delta, centre + SLACK * delta);
        let e_lo = ((lo * dp as f64 - (c * b) as f64) / d as f64).floor() as i64;
        let e_hi = ((hi * dp as f64 - (c * b) as f64) / d as f64).ceil() as i64;
        let es: Vec<i64> = if c == 0 {
            vec![1]
        } else {
            (e_lo..=e_hi).collect()
        };
        for e in es {
            if gcd(c, e) != 1 {
                continue;
            }
            // gamma0 = [[x, y], [c, e]] with x e - y c = 1
            let (x0, y0) = if c == 0 {
                (1, 0)
            } else {
                let (g, s, t) = ext_gcd(e, c);
                debug_assert_eq!(g, 1);
                (s, -t)
            };
            let g0 = beta_inv
                .mul(&RMat2::new(x0 as f64, y0 as f64, c as f64, e as f64))
                .mul(&alpha);
            let j = g0.j(q.tau);
            if j.norm() >= SLACK * delta {
                continue;
            }
            // T^t gamma0 translates g tau by t d'/a'
            let shift = dp as f64 / ap as f64;
            let re0 = g0.apply(q.tau).re;
            let width = SLACK * delta * v / j.norm();
            let t_lo = ((u - width - re0) / shift).floor() as i64;
            let t_hi = ((u + width - re0) / shift).ceil() as i64;
            for t in t_lo..=t_hi {
                out.candidates += 1;
                if out.candidates > budget {
                    return Err(AnalyticError::BudgetExceeded { budget });
                }
                let gamma =
                    RMat2::new((x0 + t * c) as f64, (y0 + t * e) as f64, c as f64, e as f64);
                let g = beta_inv.mul(&gamma).mul(&alpha);
                if a_g(&g, q.tau).norm() < delta {
                    out.count += 1;
                }
            }
        }
        c += n;
    }
    Ok(out)
}

/// `#{T half-integral positive definite : tr(T Y) <= bound}`, where
/// `T = [[t1, r/2], [r/2, t2]]`.
///
/// `tr(TY) >= lambda_min(Y) (t1 + t2)` bounds the box for `t1, t2`.
pub fn count_cy(y: [[f64; 2]; 2], bound: f64, budget: u64) -> Result<u64, AnalyticError> {
    let (y11, y12, y22) = (y[0][0], y[0][1], y[1][1]);
    let det = y11 * y22 - y12 * y12;
    if !(y11 > 0.0 && det > 0.0) || (y[1][0] - y12).abs() > 1e-12 {
        return Err(AnalyticError::InvalidInput(
            "Y must be symmetric positive definite".into(),
        ));
    }
    let half_tr = (y11 + y22) / 2.0;
    let lam_min = half_tr - (half_tr * half_tr - det).sqrt();
    let smax = (bound / lam_min).floor() as i64;
    let box_size = (smax.max(0) as u64).pow(3);
    if box_size > budget {
        return Err(AnalyticError::BudgetExceeded { budget });
    }
    let mut count = 0;
    for t1 in 1..=smax {
        for t2 in 1..=smax - t1 {
            let four = 4 * t1 * t2;
            let rmax = ((four - 1) as f64).sqrt() as i64;
            for r in -rmax..=rmax {
                if r * r < four && t1 as f64 * y11 + r as f64 * y12 + t2 as f64 * y22 <= bound {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_sl2(rng: &mut ChaCha8Rng) -> RMat2 {
        loop {
            let c: i64 = rng.gen_range(-12..=12);
            let d: i64 = rng.gen_range(-12..=12);
            if gcd(c, d) != 1 {
                continue;
            }
            let (_, s, t) = ext_gcd(d, c);
            let k: i64 = rng.gen_range(-3..=3);
            return RMat2::new((s + k * c) as f64, (-t + k * d) as f64, c as f64, d as f64);
        }
    }

    #[test]
    fn a_g_examples() {
        let tau = Complex64::new(0.3, 1.7);
        let id = RMat2::new(1.0, 0.0, 0.0, 1.0);
        assert!((a_g(&id, tau) - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        let s = RMat2::new(0.0, -1.0, 1.0, 0.0);
        let v = a_g(&s, Complex64::new(0.0, 1.0));
        assert!((v - Complex64::new(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lower_bound_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let g = rand_sl2(&mut rng);
            let tau = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..3.0));
            assert!(a_g(&g, tau).norm() >= 2.0 - 1e-12);
        }
    }

    #[test]
    fn conjugation_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let gamma = rand_sl2(&mut rng);
            let m = rng.gen_range(1..=6u64);
            let ds = divisors(m);
            let d = ds[rng.gen_range(0..ds.len())] as f64;
            let dp = ds[rng.gen_range(0..ds.len())] as f64;
            let alpha = RMat2::new(m as f64 / d, rng.gen_range(0..7) as f64, 0.0, d);
            let beta = RMat2::new(m as f64 / dp, rng.gen_range(0..7) as f64, 0.0, dp);
            let tau = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..2.0));
            let lhs = a_gamma_pair(&gamma, alpha.apply(tau), beta.apply(tau));
            let g = beta.inverse().mul(&gamma).mul(&alpha);
            let rhs = a_g(&g, tau);
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "{lhs} {rhs}");
        }
    }

    #[test]
    fn count_examples() {
        let i = Complex64::new(0.0, 1.0);
        let q = |tau, m, level, delta| CountQuery {
            tau,
            m,
            level,
            delta,
        };
        assert_eq!(count_c(&q(i, 3, 2, 1.5), COUNT_BUDGET).unwrap().count, 0);
        assert_eq!(count_c(&q(i, 1, 1, 2.0001), COUNT_BUDGET).unwrap().count, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let tau = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0));
            let m = rng.gen_range(1..=4);
            let level = [1, 2, 3][rng.gen_range(0..3)];
            let c3 = count_c(&q(tau, m, level, 3.0), COUNT_BUDGET).unwrap().count;
            let c4 = count_c(&q(tau, m, level, 4.0), COUNT_BUDGET).unwrap().count;
            assert!(c4 >= c3);
        }
    }

    #[test]
    fn count_matches_naive_box() {
        // independent enumeration of gamma = [[x, y], [c, e]] over an entry box
        let tau = Complex64::new(0.2, 0.8);
        for (m, level, delta) in [(1u64, 1i64, 4.0), (2, 1, 3.0), (2, 2, 5.0), (3, 3, 6.0)] {
            let q = CountQuery {
                tau,
                m,
                level: level as u64,
                delta,
            };
            let fast = count_c(&q, COUNT_BUDGET).unwrap().count;
            let mi = m as i64;
            let mut naive = 0;
            for a in divisors(m) {
                let d = mi / a as i64;
                for ap in divisors(m) {
                    let dp = mi / ap as i64;
                    let lo = (dp * dp).div_euclid(d) + d + 1;
                    for (b, bp) in (lo..lo + d).flat_map(|b| (0..dp).map(move |bp| (b, bp))) {
                        let alpha = RMat2::new(a as f64, b as f64, 0.0, d as f64);
                        let beta_inv = RMat2::new(ap as f64, bp as f64, 0.0, dp as f64).inverse();
                        let mut hit = |x: i64, y: i64, c: i64, e: i64| {
                            let gamma = RMat2::new(x as f64, y as f64, c as f64, e as f64);
                            let g = beta_inv.mul(&gamma).mul(&alpha);
                            if a_g(&g, tau).norm() < delta {
                                naive += 1;
                            }
                        };
                        for y in -400..=400 {
                            hit(1, y, 0, 1);
                        }
                        for c in (level..=40).step_by(level as usize) {
                            for e in -120i64..=120 {
                                for x in -120i64..=120 {
                                    if (x * e - 1) % c == 0 {
                                        hit(x, (x * e - 1) / c, c, e);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(fast, naive, "m={m} N={level} delta={delta}");
        }
    }

    #[test]
    fn count_cy_examples() {
        let id = [[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(
            count_cy([[10.0, 0.0], [0.0, 10.0]], 1.0, 1 << 30).unwrap(),
            0
        );
        assert_eq!(count_cy(id, 3.0, 1 << 30).unwrap(), 13);
        let counts: Vec<u64> = [1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|c| count_cy([[*c, 0.0], [0.0, *c]], 20.0, 1 << 30).unwrap())
            .collect();
        assert_eq!(counts, vec![4342, 547, 66, 3]);
    }
}
