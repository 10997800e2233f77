//! `sklab`: runs the verification suites and emits JSON reports.
//!
//! Exit codes: 0 when every sub-check passes, 1 when one fails (including
//! exhausted enumeration budgets), 2 on usage errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{write_atomic, NumericReport, Outcome};

#[derive(Parser, Debug)]
#[command(
    name = "sklab",
    version,
    about = "Saito-Kurokawa verification laboratory"
)]
struct Cli {
    /// Write the report to this file as well as stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized suites; echoed in the report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report `runtime_ms = 0` so that reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact symbolic suites.
    #[command(subcommand)]
    Verify(Verify),
    /// Build objects and serialize them.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a stored table or an identity.
    #[command(subcommand)]
    Check(Check),
    /// Numeric scans over a JSON grid.
    Scan(ScanArgs),
    /// The counting function C(tau, m, delta).
    Count(CountArgs),
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Operator identities I1-I5 and the degree equation.
    Hecke {
        /// Only this identity (I1..I5 or degree_equation).
        #[arg(long)]
        identity: Option<String>,
    },
    /// Minor, determinant, rank, oldform relation, G inner products, a_+-.
    Mp {
        #[arg(long, default_value_t = 100)]
        sk_points: usize,
        #[arg(long, default_value_t = 100)]
        generic_points: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Jacobi cusp form of index 1 and its lift.
    Sk {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 200)]
        dmax: i64,
        /// Write the coefficient table here.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Maaß relations on a serialized coefficient table.
    Maass {
        #[arg(long)]
        input: PathBuf,
    },
    /// lam_F(p^2) from the Euler factor against the quadratic relation.
    Characterization {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        /// Numeric lam_f; symbolic when absent.
        #[arg(long, allow_hyphen_values = true)]
        lam_f: Option<i64>,
        #[arg(long, default_value_t = 4)]
        jmax: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ScanOp {
    Theta,
    Bergman,
    Poincare,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(value_enum)]
    op: ScanOp,
    /// JSON grid: {u_range, v_range, steps, z_steps?, prec?} for theta and
    /// bergman; {k?, n?, level_max, c_max} for poincare.
    #[arg(long)]
    grid: PathBuf,
    /// Weight exponent c in e^{-c pi y^2/v} (theta).
    #[arg(long, default_value_t = 4.0)]
    weight: f64,
    #[arg(long, default_value_t = 12)]
    k: u32,
    #[arg(long = "N", default_value_t = 1)]
    level: u64,
    #[arg(long, default_value_t = 60.0)]
    cutoff: f64,
}

#[derive(Args, Debug)]
struct CountArgs {
    /// `u,v`
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    #[arg(long)]
    m: u64,
    #[arg(long = "N")]
    level: u64,
    #[arg(long)]
    delta: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Ok(n) = std::env::var("SKLAB_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: SKLAB_THREADS must be a positive integer, got {n:?}");
                return ExitCode::from(2);
            }
        }
    }
    let start = Instant::now();
    let (name, inputs, result) = match commands::dispatch(&cli.command, cli.seed) {
        Ok(r) => r,
        Err(commands::Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = NumericReport {
        command: name,
        inputs,
        seed: cli.seed,
        outcome: result.outcome,
        details: result.details,
        max_deviation: result.max_deviation,
        runtime_ms: if cli.no_timing {
            0
        } else {
            start.elapsed().as_millis() as u64
        },
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    print!("{text}");
    if let Some(path) = &cli.output {
        if let Err(e) = write_atomic(path, &text) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    match report.outcome {
        Outcome::Pass => ExitCode::SUCCESS,
        Outcome::Fail => ExitCode::from(1),
    }
}
