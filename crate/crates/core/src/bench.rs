//! Wall-clock benchmark of the GF(2)[x] multipliers, with operation counts.

use std::fmt;
use std::hint::black_box;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds;
use crate::error::{param, Error, Result};
use crate::fft::{evaluate_ea, interpolate_ia, multiply_ma, FieldPoly, OpCountReport};
use crate::poly::BitPoly;
use crate::sma::{multiply_sma_with, SmaConfig};
use crate::tower::FieldElement;

pub const MAX_LOG_N: u32 = 22;
pub const MIN_REPS: u32 = 5;

pub const CSV_HEADER: [&str; 9] = [
    "algorithm",
    "n",
    "ns_median",
    "reps",
    "field_mults",
    "field_adds",
    "mult_bound",
    "add_bound",
    "within_bounds",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sma,
    Karatsuba,
    Schoolbook,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Sma, Algorithm::Karatsuba, Algorithm::Schoolbook];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sma => "sma",
            Algorithm::Karatsuba => "karatsuba",
            Algorithm::Schoolbook => "schoolbook",
        }
    }

    /// Product and, for the transform, the field operations it used.
    pub fn multiply(
        self,
        f: &BitPoly,
        g: &BitPoly,
        config: &SmaConfig,
    ) -> (BitPoly, OpCountReport) {
        match self {
            Algorithm::Sma => {
                let run = multiply_sma_with(f, g, config);
                (run.product, run.report)
            }
            Algorithm::Karatsuba => (f.mul_karatsuba(g), OpCountReport::default()),
            Algorithm::Schoolbook => (f.mul_schoolbook(g), OpCountReport::default()),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| {
                param(format!(
                    "unknown algorithm {s:?} (expected sma, karatsuba or schoolbook)"
                ))
            })
    }
}

/// Parses a comma-separated list, dropping duplicates.
pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>> {
    let mut out = Vec::new();
    for name in list.split(',').filter(|s| !s.trim().is_empty()) {
        let a: Algorithm = name.parse()?;
        if !out.contains(&a) {
            out.push(a);
        }
    }
    if out.is_empty() {
        return Err(param("empty algorithm list"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    /// Coefficients per input.
    pub n: usize,
    pub ns_median: u64,
    pub reps: u32,
    pub field_mults: u64,
    pub field_adds: u64,
    pub mult_bound: Option<u64>,
    pub add_bound: Option<u64>,
    pub within_bounds: bool,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub min_log_n: u32,
    pub max_log_n: u32,
    pub algorithms: Vec<Algorithm>,
    pub reps: u32,
    pub seed: u64,
    pub sma: SmaConfig,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_log_n > self.max_log_n || self.max_log_n > MAX_LOG_N {
            return Err(param(format!(
                "need min_log_n <= max_log_n <= {MAX_LOG_N}, got {}..{}",
                self.min_log_n, self.max_log_n
            )));
        }
        if self.reps < MIN_REPS {
            return Err(param(format!(
                "need at least {MIN_REPS} repetitions, got {}",
                self.reps
            )));
        }
        if self.algorithms.is_empty() {
            return Err(param("no algorithms selected"));
        }
        Ok(())
    }
}

/// Field operation budgets for inputs of length `2^m`, from the closed forms
/// at level `L = ⌈log2(m + 1)⌉`.
pub fn sma_bounds(m: u32) -> (u64, u64) {
    let level = (0..u32::BITS).find(|&l| 1u64 << l > m as u64).unwrap_or(0);
    if m == 0 {
        return (0, 0);
    }
    (bounds::sma_mults(m, level), bounds::sma_adds(m, level))
}

/// Two random inputs with exactly `n` coefficients each; equal for every
/// algorithm at the same `(seed, n)`.
pub fn bench_inputs(seed: u64, log_n: u32) -> (BitPoly, BitPoly) {
    let n = 1usize << log_n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(log_n as u64);
    let mut draw = || {
        let mut words: Vec<u64> = (0..n.div_ceil(64)).map(|_| rng.random()).collect();
        let top = n - 1;
        let last = words.len() - 1;
        if !n.is_multiple_of(64) {
            words[last] &= (1u64 << (n % 64)) - 1;
        }
        words[top / 64] |= 1 << (top % 64);
        BitPoly::from_words_len(words, n)
    };
    let f = draw();
    let g = draw();
    (f, g)
}

fn median(mut xs: Vec<u64>) -> u64 {
    xs.sort_unstable();
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2
    }
}

pub fn bench_one(
    algorithm: Algorithm,
    log_n: u32,
    reps: u32,
    seed: u64,
    sma: &SmaConfig,
) -> BenchRecord {
    let (f, g) = bench_inputs(seed, log_n);
    let (_, report) = algorithm.multiply(&f, &g, sma);
    let times = (0..reps)
        .map(|_| {
            let start = Instant::now();
            black_box(algorithm.multiply(black_box(&f), black_box(&g), sma));
            start.elapsed().as_nanos() as u64
        })
        .collect();
    let (mult_bound, add_bound, within_bounds) = match algorithm {
        Algorithm::Sma => {
            let (mb, ab) = sma_bounds(log_n);
            (
                Some(mb),
                Some(ab),
                report.field_mults <= mb && report.field_adds <= ab,
            )
        }
        _ => (None, None, true),
    };
    BenchRecord {
        algorithm,
        n: 1 << log_n,
        ns_median: median(times),
        reps,
        field_mults: report.field_mults,
        field_adds: report.field_adds,
        mult_bound,
        add_bound,
        within_bounds,
    }
}

/// One record per (algorithm, size), ordered by algorithm then size.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    config.validate()?;
    let mut records: Vec<BenchRecord> = config
        .algorithms
        .iter()
        .flat_map(|&a| {
            (config.min_log_n..=config.max_log_n)
                .map(move |k| bench_one(a, k, config.reps, config.seed, &config.sma))
        })
        .collect();
    records.sort_by_key(|r| (r.algorithm, r.n));
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    write_rows(&CSV_HEADER, records, out)
}

fn write_rows<W: Write, T: Serialize>(header: &[&str], rows: &[T], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub const OPCOUNT_HEADER: [&str; 7] = [
    "algorithm",
    "L",
    "m",
    "field_mults",
    "field_adds",
    "bound_mults",
    "bound_adds",
];

/// Operation counts of one transform run next to their closed-form budgets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpCountRow {
    pub algorithm: &'static str,
    #[serde(rename = "L")]
    pub level: u32,
    pub m: u32,
    pub field_mults: u64,
    pub field_adds: u64,
    pub bound_mults: u64,
    pub bound_adds: u64,
}

impl OpCountRow {
    pub fn within_bounds(&self) -> bool {
        self.field_mults <= self.bound_mults && self.field_adds <= self.bound_adds
    }
}

/// Largest tower level swept by [`op_count_rows`].
pub const OPCOUNT_MAX_LEVEL: u32 = 4;

/// Counts of evaluation, interpolation and field multiplication for every
/// level up to [`OPCOUNT_MAX_LEVEL`] and `m <= min(2^L, 12)`, followed by the
/// binary multiplication at each benchmark size that takes the transform.
pub fn op_count_rows(config: &BenchConfig) -> Result<Vec<OpCountRow>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows = Vec::new();
    for level in 1..=OPCOUNT_MAX_LEVEL {
        let field = crate::sma::tower(level)?;
        let mask = if field.width() == 64 {
            u64::MAX
        } else {
            (1u64 << field.width()) - 1
        };
        let mut draw = |len: usize| {
            FieldPoly::new(
                (0..len)
                    .map(|_| FieldElement::new(rng.random::<u64>() & mask))
                    .collect(),
            )
        };
        for m in 1..=field.width().min(12) {
            let f = draw(1 << m);
            let (values, ea) = evaluate_ea(field, &f, FieldElement::ZERO, m)?;
            let (_, ia) = interpolate_ia(field, &values, FieldElement::ZERO, m)?;
            for (algorithm, c) in [("ea", ea), ("ia", ia)] {
                rows.push(OpCountRow {
                    algorithm,
                    level,
                    m,
                    field_mults: c.field_mults,
                    field_adds: c.field_adds,
                    bound_mults: bounds::ea_mults(m),
                    bound_adds: bounds::ea_adds_tight(m),
                });
            }
            if m < field.width() {
                let (f, g) = (draw(1 << m), draw(1 << m));
                let (_, c) = multiply_ma(field, &f, &g, m)?;
                rows.push(OpCountRow {
                    algorithm: "ma",
                    level,
                    m,
                    field_mults: c.field_mults,
                    field_adds: c.field_adds,
                    bound_mults: bounds::ma_mults(m),
                    bound_adds: bounds::ma_adds(m),
                });
            }
        }
    }
    for log_n in config.min_log_n..=config.max_log_n {
        let (f, g) = bench_inputs(config.seed, log_n);
        let run = multiply_sma_with(&f, &g, &config.sma);
        if let Some(level) = run.level {
            rows.push(OpCountRow {
                algorithm: "sma",
                level,
                m: run.m,
                field_mults: run.report.field_mults,
                field_adds: run.report.field_adds,
                bound_mults: bounds::sma_mults(run.m, level),
                bound_adds: bounds::sma_adds(run.m, level),
            });
        }
    }
    Ok(rows)
}

pub fn write_op_count_csv<W: Write>(rows: &[OpCountRow], out: W) -> Result<()> {
    write_rows(&OPCOUNT_HEADER, rows, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_roundtrip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("fft".parse::<Algorithm>().is_err());
        assert_eq!(
            parse_algorithms("sma, karatsuba,sma").unwrap(),
            vec![Algorithm::Sma, Algorithm::Karatsuba]
        );
        assert!(parse_algorithms(",").is_err());
        assert!(parse_algorithms("sma,toom").is_err());
    }

    #[test]
    fn inputs_have_exact_length() {
        for k in [0, 3, 6, 7, 10] {
            let (f, g) = bench_inputs(1, k);
            assert_eq!(f.significant_len(), 1 << k);
            assert_eq!(g.significant_len(), 1 << k);
        }
        assert_eq!(bench_inputs(5, 9), bench_inputs(5, 9));
    }

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![5, 1, 3]), 3);
        assert_eq!(median(vec![4, 1, 3, 2]), 2);
    }

    #[test]
    fn config_validation() {
        let mut c = BenchConfig {
            min_log_n: 4,
            max_log_n: 6,
            algorithms: vec![Algorithm::Sma],
            reps: 5,
            seed: 0,
            sma: SmaConfig::default(),
        };
        assert!(c.validate().is_ok());
        c.reps = 4;
        assert!(c.validate().is_err());
        c.reps = 5;
        c.max_log_n = MAX_LOG_N + 1;
        assert!(c.validate().is_err());
        c.max_log_n = 3;
        assert!(c.validate().is_err());
    }

    #[test]
    fn csv_has_fixed_header_and_sorted_rows() {
        let config = BenchConfig {
            min_log_n: 6,
            max_log_n: 9,
            algorithms: vec![Algorithm::Schoolbook, Algorithm::Sma, Algorithm::Karatsuba],
            reps: 5,
            seed: 3,
            sma: SmaConfig::default(),
        };
        let records = run_bench(&config).unwrap();
        assert_eq!(records.len(), 12);
        assert!(records
            .windows(2)
            .all(|w| (w[0].algorithm, w[0].n) < (w[1].algorithm, w[1].n)));
        assert!(records.iter().all(|r| r.within_bounds));
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("algorithm,n,ns_median,reps,field_mults,field_adds,mult_bound,add_bound,within_bounds")
        );
        let sma_row = lines.find(|l| l.starts_with("sma,512,")).unwrap();
        let cols: Vec<&str> = sma_row.split(',').collect();
        assert_eq!(cols.len(), 9);
        assert_eq!(cols[6].parse::<u64>().unwrap(), bounds::sma_mults(9, 4));
        assert_eq!(cols[8], "true");
        let kara = text
            .lines()
            .find(|l| l.starts_with("karatsuba,64,"))
            .unwrap();
        assert!(kara.ends_with(",0,0,,,true"), "{kara}");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn sma_bounds_use_ceiling_level() {
        assert_eq!(
            sma_bounds(7),
            (bounds::sma_mults(7, 3), bounds::sma_adds(7, 3))
        );
        assert_eq!(
            sma_bounds(8),
            (bounds::sma_mults(8, 4), bounds::sma_adds(8, 4))
        );
        assert_eq!(
            sma_bounds(15),
            (bounds::sma_mults(15, 4), bounds::sma_adds(15, 4))
        );
        assert_eq!(
            sma_bounds(16),
            (bounds::sma_mults(16, 5), bounds::sma_adds(16, 5))
        );
    }

    #[test]
    fn op_count_rows_are_within_bounds() {
        let config = BenchConfig {
            min_log_n: 5,
            max_log_n: 9,
            algorithms: vec![Algorithm::Sma],
            reps: 5,
            seed: 9,
            sma: SmaConfig::default(),
        };
        let rows = op_count_rows(&config).unwrap();
        assert!(rows.iter().all(OpCountRow::within_bounds));
        let sma: Vec<u32> = rows
            .iter()
            .filter(|r| r.algorithm == "sma")
            .map(|r| r.m)
            .collect();
        assert_eq!(sma, vec![7, 8, 9]);
        assert_eq!(
            rows.iter().filter(|r| r.algorithm == "ea").count(),
            2 + 4 + 8 + 12
        );
        let mut buf = Vec::new();
        write_op_count_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .starts_with("algorithm,L,m,field_mults,field_adds,bound_mults,bound_adds\nea,1,1,"));
    }
}
