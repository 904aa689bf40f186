//! `binpoly`: multiply GF(2)[x] polynomials from hex files, run the invariant
//! self-test, and benchmark the multipliers.
//!
//! Exit codes: 0 success, 1 invariant or bound failure, 2 usage or parse
//! error, 3 I/O error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use binpoly::bench::{self, Algorithm, BenchConfig};
use binpoly::selftest::run_selftest;
use binpoly::sma::{self, DEFAULT_CROSSOVER};
use binpoly::tower::MAX_LEVEL;
use binpoly::{BitPoly, Error, SmaConfig};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "binpoly", version, about = "Fast multiplication in GF(2)[x]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply the polynomials stored as hex in two files.
    Mul {
        #[arg(long, default_value = "sma")]
        algo: String,
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Inputs of at most 2^crossover coefficients use Karatsuba.
        #[arg(long, default_value_t = DEFAULT_CROSSOVER)]
        crossover: u32,
    },
    /// Run the invariant suites over the towers of levels 1..=max-L.
    Selftest {
        #[arg(long = "max-L")]
        max_l: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the tower of this level (level, minimal polynomial, basis) and exit.
        #[arg(long = "dump-field")]
        dump_field: Option<u32>,
    },
    /// Time the multipliers on random inputs of 2^k coefficients and write CSV.
    Bench {
        #[arg(long = "min-log-n")]
        min_log_n: u32,
        #[arg(long = "max-log-n")]
        max_log_n: u32,
        #[arg(long, default_value = "sma,karatsuba")]
        algos: String,
        #[arg(long, default_value_t = bench::MIN_REPS)]
        reps: u32,
        #[arg(long)]
        csv: PathBuf,
        /// Also write per-transform operation counts and their budgets here.
        #[arg(long = "opcount-csv")]
        opcount_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CROSSOVER)]
        crossover: u32,
    },
}

enum Failure {
    Invariant(String),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::Invariant(_) | Error::Unsolvable(_) => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Mul {
            algo,
            a,
            b,
            out,
            crossover,
        } => cmd_mul(&algo, &a, &b, &out, crossover),
        Command::Selftest {
            max_l,
            seed,
            dump_field,
        } => cmd_selftest(max_l, seed, dump_field),
        Command::Bench {
            min_log_n,
            max_log_n,
            algos,
            reps,
            csv,
            opcount_csv,
            seed,
            crossover,
        } => {
            let config = bench::parse_algorithms(&algos).map(|algorithms| BenchConfig {
                min_log_n,
                max_log_n,
                algorithms,
                reps,
                seed,
                sma: SmaConfig { crossover },
            });
            match config {
                Ok(config) => cmd_bench(&config, &csv, opcount_csv.as_deref()),
                Err(e) => Err(e.into()),
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_poly(path: &Path) -> Result<BitPoly, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    BitPoly::parse_hex(text.trim()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_mul(algo: &str, a: &Path, b: &Path, out: &Path, crossover: u32) -> Result<(), Failure> {
    let algorithm: Algorithm = algo.parse()?;
    let f = read_poly(a)?;
    let g = read_poly(b)?;
    let (product, _) = algorithm.multiply(&f, &g, &SmaConfig { crossover });
    fs::write(out, format!("{}\n", product.format_hex())).map_err(|e| io_failure(out, e))
}

fn cmd_selftest(max_l: u32, seed: u64, dump_field: Option<u32>) -> Result<(), Failure> {
    if let Some(level) = dump_field {
        let field = sma::tower(level)?;
        print!("{}", field.dump());
        return Ok(());
    }
    if !(1..=MAX_LEVEL).contains(&max_l) {
        return Err(Failure::Usage(format!(
            "--max-L must lie in 1..={MAX_LEVEL}, got {max_l}"
        )));
    }
    let report = run_selftest(max_l, seed)?;
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        let failed = report
            .outcomes
            .iter()
            .filter(|o| o.failure.is_some())
            .count();
        Err(Failure::Invariant(format!("{failed} suite(s) failed")))
    }
}

fn create(path: &Path) -> Result<io::BufWriter<fs::File>, Failure> {
    let file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
    Ok(io::BufWriter::new(file))
}

fn cmd_bench(config: &BenchConfig, csv: &Path, opcount_csv: Option<&Path>) -> Result<(), Failure> {
    config.validate()?;
    let records = bench::run_bench(config)?;
    let mut w = create(csv)?;
    bench::write_csv(&records, &mut w)?;
    w.flush().map_err(|e| io_failure(csv, e))?;

    let mut counts_ok = true;
    if let Some(path) = opcount_csv {
        let rows = bench::op_count_rows(config)?;
        counts_ok = rows.iter().all(bench::OpCountRow::within_bounds);
        let mut w = create(path)?;
        bench::write_op_count_csv(&rows, &mut w)?;
        w.flush().map_err(|e| io_failure(path, e))?;
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    for r in &records {
        let _ = writeln!(
            out,
            "{:<10} n = {:>8}  median {:>12} ns  mults {:>10}  adds {:>12}  within bounds: {}",
            r.algorithm, r.n, r.ns_median, r.field_mults, r.field_adds, r.within_bounds
        );
    }
    if counts_ok && records.iter().all(|r| r.within_bounds) {
        Ok(())
    } else {
        Err(Failure::Invariant(
            "operation counts exceed their bounds".into(),
        ))
    }
}
