//! Point counts, leading constants and self-checks for `x0³ = x1·x2·x3`
//! over the imaginary quadratic fields of class number one.

mod report;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toric_cubic::constant::{
    ehrhart_polynomial, euler_product_over, lattice_count, leading_constant_from, predicted_count, PERIOD,
};
use toric_cubic::ring::{cache_path, load_or_sieve, isqrt_u128, PrimeCache};
use toric_cubic::torsor::{count_divisor_oracle, count_torsor9, HeightBound};
use toric_cubic::Field;

use report::{CompareRow, CountReport, Format, RecordWriter};

#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// Worker threads for the counting backends (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Directory holding prime list caches.
    #[arg(long, global = true, env = "TORIC_CUBIC_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count points of height at most B.
    Count(CountArgs),
    /// Print the predicted leading constant and its ingredients.
    Constant(ConstantArgs),
    /// Count at several bounds and compare with c·B·(log B)⁶.
    Compare(CompareArgs),
    /// Sieve prime ideals up to a norm bound and write the cache file.
    Primes(PrimesArgs),
    /// Print the polytope volume and its Ehrhart polynomial.
    Volume(VolumeArgs),
    /// Run the exact identities and cross-checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Torsor9,
    Oracle,
}

impl Backend {
    fn name(self) -> &'static str {
        match self {
            Backend::Torsor9 => "torsor9",
            Backend::Oracle => "oracle",
        }
    }

    fn count(self, field: &Field, bound: HeightBound) -> u64 {
        match self {
            Backend::Torsor9 => count_torsor9(field, bound),
            Backend::Oracle => count_divisor_oracle(field, bound),
        }
    }
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    let n: i64 = s.parse().map_err(|e| format!("{e}"))?;
    Field::new(n).map_err(|e| e.to_string())
}

#[derive(Args)]
struct FieldArg {
    /// The field Q(sqrt(n)); n one of -1 -2 -3 -7 -11 -19 -43 -67 -163.
    #[arg(long, value_parser = parse_field, allow_negative_numbers = true)]
    field: Field,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Height bound, e.g. 1000 or 1e5.
    #[arg(long)]
    bound: HeightBound,
    #[arg(long, value_enum, default_value = "torsor9")]
    backend: Backend,
    /// Norm bound for the partial Euler product.
    #[arg(long, default_value_t = 100_000)]
    euler_bound: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConstantArgs {
    #[command(flatten)]
    field: FieldArg,
    #[arg(long, default_value_t = 100_000)]
    euler_bound: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Ascending bounds, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    bounds: Vec<HeightBound>,
    #[arg(long, value_enum, default_value = "torsor9")]
    backend: Backend,
    #[arg(long, default_value_t = 100_000)]
    euler_bound: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PrimesArgs {
    #[command(flatten)]
    field: FieldArg,
    /// Norm bound of the sieve.
    #[arg(long)]
    bound: u64,
}

#[derive(Args)]
struct VolumeArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, value_enum, default_value = "fast")]
    level: selftest::Level,
}

/// Primes up to `bound`, through the cache directory when one is set.
fn primes(field: &Field, bound: u64, cache_dir: Option<&Path>) -> Result<Vec<toric_cubic::ring::Prime>> {
    let list = match cache_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            load_or_sieve(dir, field, bound)?
        }
        None => PrimeCache::global().primes_up_to(field, bound),
    };
    PrimeCache::global().insert(field, bound, list.clone());
    Ok(list)
}

fn constant_value(field: &Field, euler_bound: u64, cache_dir: Option<&Path>) -> Result<f64> {
    if euler_bound < 2 {
        bail!("--euler-bound must be at least 2");
    }
    let euler = euler_product_over(&primes(field, euler_bound, cache_dir)?, euler_bound);
    Ok(f64::from(leading_constant_from(field, euler)?.c_value))
}

fn run_count(field: &Field, bound: HeightBound, backend: Backend, c: f64) -> CountReport {
    let start = Instant::now();
    let count = backend.count(field, bound);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let predicted = predicted_count(c, bound.value());
    CountReport {
        field: field.n(),
        bound,
        backend: backend.name(),
        count,
        predicted,
        ratio: (predicted > 0.0).then(|| count as f64 / predicted),
        elapsed_ms,
    }
}

/// Warms the prime cache for the enumeration table of the largest bound.
fn seed_for_count(field: &Field, bound: HeightBound, cache_dir: Option<&Path>) -> Result<()> {
    let table_bound = isqrt_u128(bound.floor() as u128) as u64;
    primes(field, table_bound, cache_dir).map(drop)
}

#[derive(Serialize)]
struct VolumeRecord {
    volume: String,
    period: u64,
    ehrhart_coefficients: String,
    counts: String,
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    if let Some(k) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .context("configuring worker pool")?;
    }
    let cache_dir = cli.cache_dir.as_deref();
    match cli.command {
        Command::Count(a) => {
            let field = a.field.field;
            let c = constant_value(&field, a.euler_bound, cache_dir)?;
            seed_for_count(&field, a.bound, cache_dir)?;
            let mut out = RecordWriter::open(a.output.format, a.output.output.as_deref())?;
            out.write(&run_count(&field, a.bound, a.backend, c))?;
        }
        Command::Constant(a) => {
            let field = a.field.field;
            if a.euler_bound < 2 {
                bail!("--euler-bound must be at least 2");
            }
            let euler = euler_product_over(&primes(&field, a.euler_bound, cache_dir)?, a.euler_bound);
            let breakdown = leading_constant_from(&field, euler)?;
            let mut out = RecordWriter::open(a.format, a.output.as_deref())?;
            out.write(&breakdown)?;
        }
        Command::Compare(a) => {
            let field = a.field.field;
            if a.bounds.windows(2).any(|w| w[0].value() > w[1].value()) {
                bail!("--bounds must be ascending");
            }
            let c = constant_value(&field, a.euler_bound, cache_dir)?;
            if let Some(&largest) = a.bounds.last() {
                seed_for_count(&field, largest, cache_dir)?;
            }
            let mut out = RecordWriter::open(a.output.format, a.output.output.as_deref())?;
            for &bound in &a.bounds {
                let row = CompareRow::new(run_count(&field, bound, a.backend, c), a.euler_bound);
                out.write(&row)?;
            }
        }
        Command::Primes(a) => {
            let field = a.field.field;
            let Some(dir) = cache_dir else {
                bail!("primes needs --cache-dir or TORIC_CUBIC_CACHE_DIR");
            };
            let list = primes(&field, a.bound, Some(dir))?;
            println!(
                "{} prime ideals of norm <= {} in {}",
                list.len(),
                a.bound,
                cache_path(dir, &field).display()
            );
        }
        Command::Volume(a) => {
            let poly = ehrhart_polynomial(1)?;
            let coefficients: Vec<String> = poly.iter().map(|c| c.to_string()).collect();
            let counts: Vec<String> = (0..=7).map(|t| lattice_count(PERIOD * t).to_string()).collect();
            let record = VolumeRecord {
                volume: poly[6].to_string(),
                period: PERIOD,
                ehrhart_coefficients: coefficients.join(" "),
                counts: counts.join(" "),
            };
            RecordWriter::open(a.format, None)?.write(&record)?;
        }
        Command::Selftest(a) => {
            let ok = selftest::run(a.level, |c| {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            });
            println!("{}", if ok { "selftest passed" } else { "selftest FAILED" });
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
