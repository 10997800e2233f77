//! One handler per subcommand. Handlers return a usage failure for bad
//! parameters or unreadable inputs; everything else becomes a report.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use serde::Deserialize;
use serde_json::{json, Value};

use sklab_core::analytic::{
    bergman_scan, bergman_spectral_delta, count_c, deviation_envelope, petersson_norm_numeric,
    poincare_deviations, vartheta_scan, AnalyticError, CountQuery, ScanGrid, COUNT_BUDGET,
};
use sklab_core::exact::{QSeries, SymExpr};
use sklab_core::hecke::{verify_identity, Identity};
use sklab_core::inner;
use sklab_core::jacobi::{
    characterization_check, jacobi_cusp_basis, lam_symbol, maass_check, sk_lift, spinor_coeffs,
    theta_decompose, SiegelCoeffTable,
};

use crate::report::{write_atomic, CommandResult};
use crate::{Check, Command, Construct, CountArgs, ScanArgs, ScanOp, Verify};

pub enum Failure {
    Usage(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

type Outcome = Result<(String, Value, CommandResult), Failure>;

pub fn dispatch(cmd: &Command, seed: u64) -> Outcome {
    match cmd {
        Command::Verify(Verify::Hecke { identity }) => verify_hecke(identity.as_deref()),
        Command::Verify(Verify::Mp {
            sk_points,
            generic_points,
        }) => verify_mp(seed, *sk_points, *generic_points),
        Command::Construct(Construct::Sk { k, dmax, table }) => {
            construct_sk(*k, *dmax, table.as_deref())
        }
        Command::Check(Check::Maass { input }) => check_maass(input),
        Command::Check(Check::Characterization { p, k, lam_f, jmax }) => {
            check_characterization(*p, *k, *lam_f, *jmax)
        }
        Command::Scan(args) => scan(args),
        Command::Count(args) => count(args),
    }
}

fn verify_hecke(only: Option<&str>) -> Outcome {
    let ids: Vec<Identity> = match only {
        Some(name) => vec![name.parse()?],
        None => Identity::ALL.to_vec(),
    };
    let reports: Vec<_> = ids.into_iter().map(verify_identity).collect();
    let passed = reports.iter().filter(|r| r.holds).count();
    let ok = passed == reports.len();
    let details = json!({ "passed": passed, "total": reports.len(), "checks": reports });
    Ok((
        "verify hecke".into(),
        json!({ "identity": only }),
        CommandResult::new(ok, details),
    ))
}

fn verify_mp(seed: u64, sk_points: usize, generic_points: usize) -> Outcome {
    let det = inner::det_mp().equals(&inner::det_mp_factored());
    let minor = inner::leading_minor3().equals(&inner::leading_minor3_factored());
    let rank = inner::sk_rank_check(seed, sk_points, generic_points);
    let old = inner::oldform_relation();
    let mut g_checks = Vec::new();
    for i in 1..=3 {
        for j in i..=3 {
            let holds = inner::g_inner(i, j)?.equals(&inner::g_inner_closed(i, j)?);
            g_checks.push(json!({ "i": i, "j": j, "holds": holds }));
        }
    }
    let g_ok = g_checks.iter().all(|c| c["holds"] == json!(true));
    let basis = inner::wp_basis_coeffs()?;
    let a_plus = inner::eval_on_sk(&basis.a_plus, 3, 10, 10)?;
    let ok = det
        && minor
        && rank.holds
        && old.discriminant_vanishes_under_sk
        && old.root_matches_under_sk
        && g_ok
        && basis.plus_minus_orthogonal;
    let details = json!({
        "det_matches_factored": det,
        "leading_minor_matches_factored": minor,
        "rank": rank,
        "oldform_discriminant_vanishes": old.discriminant_vanishes_under_sk,
        "oldform_root_matches": old.root_matches_under_sk,
        "c_old": old.c_old.to_string(),
        "g_inner": g_checks,
        "a_plus": basis.a_plus.to_string(),
        "a_plus_at_p3_k10_lamf10": a_plus.to_string(),
        "plus_minus_orthogonal": basis.plus_minus_orthogonal,
    });
    Ok((
        "verify mp".into(),
        json!({ "sk_points": sk_points, "generic_points": generic_points }),
        CommandResult::new(ok, details),
    ))
}

fn construct_sk(k: u32, dmax: i64, table_path: Option<&Path>) -> Outcome {
    let phi = jacobi_cusp_basis(k, dmax)?;
    let theta = theta_decompose(&phi)?;
    let table = sk_lift(&phi, dmax)?;
    let maass = maass_check(&table);
    if let Some(path) = table_path {
        write_atomic(path, &(serde_json::to_string_pretty(&table)? + "\n"))?;
    }
    let ok = maass.holds && theta.quarter_shift_holds;
    let details = json!({
        "phi_c3": phi.c_disc(3)?.to_string(),
        "phi_c4": phi.c_disc(4)?.to_string(),
        "quarter_shift_holds": theta.quarter_shift_holds,
        "entries": table.entries.len(),
        "maass": maass,
        "table": table_path.map(|p| p.display().to_string()),
    });
    Ok((
        "construct sk".into(),
        json!({ "k": k, "dmax": dmax }),
        CommandResult::new(ok, details),
    ))
}

fn check_maass(input: &Path) -> Outcome {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let table: SiegelCoeffTable =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", input.display()))?;
    let rep = maass_check(&table);
    Ok((
        "check maass".into(),
        json!({ "input": input.display().to_string() }),
        CommandResult::new(rep.holds, serde_json::to_value(&rep)?),
    ))
}

fn check_characterization(p: u64, k: u32, lam_f: Option<i64>, jmax: usize) -> Outcome {
    if !sklab_core::exact::arith::is_prime(p) {
        return Err(anyhow!("p = {p} is not prime").into());
    }
    let lam = lam_f.map(SymExpr::int).unwrap_or_else(lam_symbol);
    let e = spinor_coeffs(&lam, p, k, jmax)?;
    let rep = characterization_check(&e)?;
    let lam_big_f: Vec<String> = e.lam_big_f.iter().map(|x| x.to_string()).collect();
    let details = json!({
        "lam_p": rep.lam_p.to_string(),
        "lam_p2_euler": rep.lam_p2_euler.to_string(),
        "lam_p2_target": rep.lam_p2_target.to_string(),
        "difference": rep.difference.to_string(),
        "linear_relation_holds": rep.linear_relation_holds,
        "lam_big_f": lam_big_f,
    });
    Ok((
        "check characterization".into(),
        json!({ "p": p, "k": k, "lam_f": lam_f, "jmax": jmax }),
        CommandResult::new(rep.holds, details),
    ))
}

#[derive(Deserialize)]
struct PoincareGrid {
    #[serde(default = "twelve")]
    k: u32,
    #[serde(default = "one")]
    n: i64,
    level_max: u64,
    c_max: u64,
}

fn twelve() -> u32 {
    12
}

fn one() -> i64 {
    1
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
}

/// Analytic errors that mean "could not finish" are report failures; bad
/// parameters are usage errors.
fn analytic<T>(r: Result<T, AnalyticError>) -> Result<Result<T, String>, Failure> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(AnalyticError::InvalidInput(s)) => Err(anyhow!(s).into()),
        Err(AnalyticError::NotSquareFree(n)) => Err(anyhow!("level {n} is not square-free").into()),
        Err(e) => Ok(Err(e.to_string())),
    }
}

fn failed(reason: String) -> CommandResult {
    CommandResult::new(false, json!({ "reason": reason }))
}

fn scan(args: &ScanArgs) -> Outcome {
    let grid_name = args.grid.display().to_string();
    match args.op {
        ScanOp::Theta => {
            let grid: ScanGrid = read_json(&args.grid)?;
            grid.validate().map_err(|e| anyhow!(e))?;
            let mut refined = grid.clone();
            refined.prec /= 2.0;
            let inputs = json!({ "op": "theta", "grid": grid, "weight": args.weight });
            let a = match analytic(vartheta_scan(&grid, args.weight))? {
                Ok(a) => a,
                Err(r) => return Ok(("scan theta".into(), inputs, failed(r))),
            };
            let b = match analytic(vartheta_scan(&refined, args.weight))? {
                Ok(b) => b,
                Err(r) => return Ok(("scan theta".into(), inputs, failed(r))),
            };
            let change = (b.max_value / a.max_value - 1.0).abs();
            let details =
                json!({ "scan": a, "refined_max": b.max_value, "relative_change": change });
            Ok((
                "scan theta".into(),
                inputs,
                CommandResult::new(change <= 0.01, details).with_deviation(change),
            ))
        }
        ScanOp::Bergman => {
            let grid: ScanGrid = read_json(&args.grid)?;
            grid.validate().map_err(|e| anyhow!(e))?;
            let inputs = json!({
                "op": "bergman", "grid": grid, "k": args.k, "N": args.level, "cutoff": args.cutoff,
            });
            let a = match analytic(bergman_scan(args.k, args.level, &grid, args.cutoff))? {
                Ok(a) => a,
                Err(r) => return Ok(("scan bergman".into(), inputs, failed(r))),
            };
            let b = match analytic(bergman_scan(args.k, args.level, &grid, 2.0 * args.cutoff))? {
                Ok(b) => b,
                Err(r) => return Ok(("scan bergman".into(), inputs, failed(r))),
            };
            let change = (b.max_value / a.max_value - 1.0).abs();
            let mut ok = change <= 0.01;
            let mut details = json!({
                "scan": a, "doubled_cutoff_max": b.max_value, "relative_change": change,
            });
            let mut deviation = change;
            if (args.k, args.level) == (12, 1) {
                let norm = match analytic(petersson_norm_numeric(&QSeries::delta(40), 12))? {
                    Ok(n) => n.value,
                    Err(r) => return Ok(("scan bergman".into(), inputs, failed(r))),
                };
                let mut worst: f64 = 0.0;
                for tau in grid.tau_points() {
                    let g = match analytic(sklab_core::analytic::bergman_geometric(
                        12,
                        1,
                        tau,
                        args.cutoff,
                    ))? {
                        Ok(g) => g.value,
                        Err(r) => return Ok(("scan bergman".into(), inputs, failed(r))),
                    };
                    let s = bergman_spectral_delta(tau, norm).map_err(|e| anyhow!(e))?;
                    worst = worst.max((g - s).abs() / s);
                }
                ok &= worst <= 1e-4;
                deviation = deviation.max(worst);
                details["spectral_max_relative_deviation"] = json!(worst);
                details["norm_delta"] = json!(norm);
            }
            Ok((
                "scan bergman".into(),
                inputs,
                CommandResult::new(ok, details).with_deviation(deviation),
            ))
        }
        ScanOp::Poincare => {
            let g: PoincareGrid = read_json(&args.grid)?;
            let inputs = json!({
                "op": "poincare", "grid": grid_name, "k": g.k, "n": g.n,
                "level_max": g.level_max, "c_max": g.c_max,
            });
            let devs = match analytic(poincare_deviations(g.k, g.n, g.level_max, g.c_max))? {
                Ok(d) => d,
                Err(r) => return Ok(("scan poincare".into(), inputs, failed(r))),
            };
            let env = deviation_envelope(&devs);
            let ok = env.windows(2).all(|w| w[1].1 <= w[0].1);
            let details = json!({ "deviations": devs, "envelope": env });
            let dev = env.first().map(|e| e.1).unwrap_or(0.0);
            Ok((
                "scan poincare".into(),
                inputs,
                CommandResult::new(ok, details).with_deviation(dev),
            ))
        }
    }
}

fn count(args: &CountArgs) -> Outcome {
    let parts: Vec<&str> = args.tau.split(',').collect();
    let parsed: Result<Vec<f64>, _> = parts.iter().map(|s| s.trim().parse::<f64>()).collect();
    let (u, v) = match parsed.as_deref() {
        Ok([u, v]) => (*u, *v),
        _ => return Err(anyhow!("--tau expects u,v, got {:?}", args.tau).into()),
    };
    let q = CountQuery {
        tau: num_complex_point(u, v),
        m: args.m,
        level: args.level,
        delta: args.delta,
    };
    let inputs = json!({ "tau": [u, v], "m": args.m, "N": args.level, "delta": args.delta });
    match analytic(count_c(&q, COUNT_BUDGET))? {
        Ok(r) => Ok((
            "count".into(),
            inputs,
            CommandResult::new(
                true,
                json!({ "count": r.count, "candidates": r.candidates }),
            ),
        )),
        Err(reason) => Ok(("count".into(), inputs, failed(reason))),
    }
}

fn num_complex_point(u: f64, v: f64) -> sklab_core::analytic::Complex64 {
    sklab_core::analytic::Complex64::new(u, v)
}
