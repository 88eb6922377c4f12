//! Timing harness for field operations and for identification end to end.
//!
//! Timed regions are single-threaded and contain no RNG calls: operands,
//! identities and seeds are prepared before the clock starts. Every reported
//! time is a median over repetitions, with its interquartile range. Field
//! operation timings subtract the median time of an empty loop, i.e. the
//! timer overhead; loop bookkeeping, operand loads and the result store stay
//! in the per-operation figure, as they would in any caller.
//! Repetitions cycle through all sizes so slow drift in machine state hits
//! each size equally.

pub mod stats;

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::costmodel::MeasuredPoint;
use crate::gf::{FieldCtx, FieldElement, FieldError, PolyField};
use crate::ident::{issue_challenges, report, verify, IdentError, WIRE_HEADER_LEN};
use crate::rmpoly::{sample_identity_within, PolyError, RmParams};

pub use stats::{kendall_tau, linear_fit, log_log_slope, summarize, Summary};

/// Minimum repetitions behind any reported point.
pub const MIN_REPETITIONS: usize = 30;
/// Minimum operations timed per field size and operation.
pub const MIN_FIELD_OPS: usize = 1_000_000;
/// A point is reported only if its total timed span is at least this many
/// timer ticks.
pub const MIN_SPAN_TICKS: f64 = 1.0e4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    Config(String),
    #[error("{count} coefficients for {params} exceed the cap of {cap}")]
    InfeasibleParams {
        params: RmParams,
        count: usize,
        cap: usize,
    },
    #[error("cannot parse benchmark data: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ident(#[from] IdentError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// Field orders for the operation sweep.
    pub field_sizes: Vec<u32>,
    /// Parameter points for the identification sweep.
    pub grid: Vec<RmParams>,
    pub repetitions: usize,
    pub warmup: usize,
    pub seed: u64,
    /// Operand pairs per timed batch in the field sweep; raised as needed to
    /// reach [`MIN_FIELD_OPS`] in total.
    pub batch: usize,
    /// Identification points with more coefficients are rejected.
    pub max_coefficients: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            field_sizes: vec![16, 256, 257, 4096, 19683],
            grid: Vec::new(),
            repetitions: 31,
            warmup: 3,
            seed: 0,
            batch: 1 << 15,
            max_coefficients: 1 << 24,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.repetitions < MIN_REPETITIONS {
            return Err(BenchError::Config(format!(
                "repetitions = {} (need at least {MIN_REPETITIONS})",
                self.repetitions
            )));
        }
        if self.warmup < 1 {
            return Err(BenchError::Config("warmup must be at least 1".into()));
        }
        if self.batch == 0 {
            return Err(BenchError::Config("batch must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldOp {
    Add,
    Mul,
}

impl FieldOp {
    pub fn name(self) -> &'static str {
        match self {
            FieldOp::Add => "add",
            FieldOp::Mul => "mul",
        }
    }
}

/// Per-operation timing of one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOpRecord {
    pub q: u32,
    pub op: FieldOp,
    pub cache: bool,
    /// True for the polynomial-arithmetic fallback rather than tables.
    pub fallback: bool,
    pub median_ns: f64,
    pub iqr_ns: f64,
}

/// Smallest positive difference between two clock reads, in nanoseconds.
pub fn timer_resolution_ns() -> f64 {
    let mut best = Duration::MAX;
    for _ in 0..2000 {
        let a = Instant::now();
        let mut b = Instant::now();
        while b == a {
            b = Instant::now();
        }
        best = best.min(b - a);
    }
    best.as_nanos().max(1) as f64
}

fn operands(q: u32, count: usize, seed: u64) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ q as u64);
    let mask = q.next_power_of_two() - 1;
    let mut draw = || loop {
        let v = rand::RngCore::next_u32(&mut rng) & mask;
        if v < q {
            return FieldElement::from_index(v as u16);
        }
    };
    let a = (0..count).map(|_| draw()).collect();
    let b = (0..count).map(|_| draw()).collect();
    (a, b)
}

#[inline(never)]
fn time_batch(
    f: impl Fn(FieldElement, FieldElement) -> FieldElement,
    a: &[FieldElement],
    b: &[FieldElement],
    out: &mut [FieldElement],
) -> f64 {
    let start = Instant::now();
    for ((&x, &y), o) in a.iter().zip(b).zip(out.iter_mut()) {
        *o = f(x, y);
    }
    black_box(&mut *out);
    start.elapsed().as_nanos() as f64
}

/// The calibration loop: same trip count, empty body. The optimizer removes
/// the loop itself, so what is measured is the cost of reading the clock.
#[inline(never)]
fn time_empty(ops: usize) -> f64 {
    let start = Instant::now();
    for _ in 0..black_box(ops) {}
    start.elapsed().as_nanos() as f64
}

type Timed<'a> = Box<dyn Fn(&mut [FieldElement]) -> f64 + 'a>;

struct Series<'a> {
    q: u32,
    op: FieldOp,
    cache: bool,
    fallback: bool,
    ops: usize,
    run: Timed<'a>,
    samples: Vec<f64>,
}

fn run_series(
    series: &mut [Series<'_>],
    config: &BenchConfig,
    ops: usize,
) -> Result<Vec<FieldOpRecord>, BenchError> {
    let resolution = timer_resolution_ns();
    let mut out = vec![FieldElement::ZERO; ops];
    let baseline = |_: &mut [FieldElement]| time_empty(ops);

    for _ in 0..config.warmup {
        baseline(&mut out);
        for s in series.iter() {
            (s.run)(&mut out);
        }
    }
    let mut base_samples = Vec::with_capacity(config.repetitions);
    for _ in 0..config.repetitions {
        base_samples.push(baseline(&mut out));
        for s in series.iter_mut() {
            // untimed pass so the sample sees warm tables, not the previous
            // series' working set
            (s.run)(&mut out);
            let t = (s.run)(&mut out);
            s.samples.push(t);
        }
    }
    let base = summarize(&base_samples).median;
    series
        .iter()
        .map(|s| {
            let span: f64 = s.samples.iter().sum();
            if span < MIN_SPAN_TICKS * resolution {
                return Err(BenchError::Config(format!(
                    "timed span {span:.0} ns for q = {} is below {MIN_SPAN_TICKS} timer ticks of {resolution} ns; raise batch",
                    s.q
                )));
            }
            let per_op: Vec<f64> = s
                .samples
                .iter()
                .map(|t| ((t - base) / s.ops as f64).max(f64::MIN_POSITIVE))
                .collect();
            let summary = summarize(&per_op);
            Ok(FieldOpRecord {
                q: s.q,
                op: s.op,
                cache: s.cache,
                fallback: s.fallback,
                median_ns: summary.median,
                iqr_ns: summary.iqr,
            })
        })
        .collect()
}

fn batch_size(config: &BenchConfig) -> usize {
    config.batch.max(MIN_FIELD_OPS.div_ceil(config.repetitions))
}

/// Median per-operation add and mul times for each field size, with the
/// element cache off and on.
pub fn bench_field_ops(config: &BenchConfig) -> Result<Vec<FieldOpRecord>, BenchError> {
    config.validate()?;
    let ops = batch_size(config);
    let mut fields = Vec::new();
    for &q in &config.field_sizes {
        let plain = FieldCtx::from_order(q as u64)?;
        let cached = FieldCtx::with_cache(plain.characteristic(), plain.degree(), true)?;
        fields.push((q, plain, cached, operands(q, ops, config.seed)));
    }
    let mut series = Vec::new();
    for (q, plain, cached, (a, b)) in &fields {
        for (ctx, cache) in [(plain, false), (cached, true)] {
            // fields too wide for the cache tables get no cache rows
            if cache && !ctx.has_cache() {
                continue;
            }
            for op in [FieldOp::Add, FieldOp::Mul] {
                let run: Timed<'_> = match op {
                    FieldOp::Add => Box::new(move |out: &mut [FieldElement]| {
                        time_batch(|x, y| ctx.add(x, y), a, b, out)
                    }),
                    FieldOp::Mul => Box::new(move |out: &mut [FieldElement]| {
                        time_batch(|x, y| ctx.mul(x, y), a, b, out)
                    }),
                };
                series.push(Series {
                    q: *q,
                    op,
                    cache,
                    fallback: false,
                    ops,
                    run,
                    samples: Vec::with_capacity(config.repetitions),
                });
            }
        }
    }
    run_series(&mut series, config, ops)
}

/// The same measurement on the polynomial-arithmetic backend, which also
/// covers orders of `2^16` and above. Directional comparison only.
pub fn bench_fallback_ops(
    sizes: &[u32],
    config: &BenchConfig,
) -> Result<Vec<FieldOpRecord>, BenchError> {
    config.validate()?;
    let ops = batch_size(config);
    let mut fields = Vec::new();
    for &q in sizes {
        let (p, d) = crate::gf::prime_power(q as u64).ok_or(FieldError::NotPrimePower(q as u64))?;
        let field = PolyField::new(p, d)?;
        let mut rng = ChaCha20Rng::seed_from_u64(config.seed ^ q as u64);
        let draw = |rng: &mut ChaCha20Rng| -> Vec<u32> {
            (0..ops)
                .map(|_| rand::Rng::random_range(rng, 0..q))
                .collect()
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        fields.push((q, field, a, b));
    }
    let mut series = Vec::new();
    for (q, field, a, b) in &fields {
        for op in [FieldOp::Add, FieldOp::Mul] {
            let run: Timed<'_> = Box::new(move |_out: &mut [FieldElement]| {
                let start = Instant::now();
                let mut acc = 0u32;
                for (&x, &y) in a.iter().zip(b) {
                    acc ^= match op {
                        FieldOp::Add => field.add(black_box(x), y),
                        FieldOp::Mul => field.mul(black_box(x), y),
                    };
                }
                black_box(acc);
                start.elapsed().as_nanos() as f64
            });
            series.push(Series {
                q: *q,
                op,
                cache: false,
                fallback: true,
                ops,
                run,
                samples: Vec::with_capacity(config.repetitions),
            });
        }
    }
    run_series(&mut series, config, ops)
}

pub const FIELDOPS_CSV_HEADER: &str = "q,op,cache,median_ns,iqr_ns";

pub fn fieldops_csv(records: &[FieldOpRecord]) -> String {
    let mut out = String::from(FIELDOPS_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{:.4},{:.4}",
            r.q,
            r.op.name(),
            if r.cache { "on" } else { "off" },
            r.median_ns,
            r.iqr_ns
        );
    }
    out
}

/// Timing of one identification parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentRecord {
    pub params: RmParams,
    pub coefficients: usize,
    pub log_i_bits: f64,
    /// `(k/q)^n`
    pub error_bound: f64,
    /// Drawing one identity.
    pub generation: Summary,
    /// Computing all `n` tags at the sender.
    pub issue: Summary,
    /// Recomputing all `n` tags at the receiver.
    pub verify: Summary,
    /// Header plus payload of the challenge set.
    pub wire_bytes: usize,
}

impl IdentRecord {
    /// Sender plus receiver tag computation.
    pub fn encode_total_ns(&self) -> f64 {
        self.issue.median + self.verify.median
    }

    /// Median time of one tag computation.
    pub fn per_evaluation_ns(&self) -> f64 {
        self.issue.median / self.params.n() as f64
    }
}

fn elapsed_ns(start: Instant) -> f64 {
    start.elapsed().as_nanos() as f64
}

/// Times identity generation, challenge issue and verification at each grid
/// point.
pub fn bench_identification(config: &BenchConfig) -> Result<Vec<IdentRecord>, BenchError> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.grid.len());
    for &params in &config.grid {
        let count = params.coefficient_count()?;
        if count > config.max_coefficients {
            return Err(BenchError::InfeasibleParams {
                params,
                count,
                cap: config.max_coefficients,
            });
        }
    }
    for (point, &params) in config.grid.iter().enumerate() {
        let field = params.field();
        let ctx = FieldCtx::new(field.characteristic(), field.degree())?;
        let cap = config.max_coefficients;
        let seed = config.seed.wrapping_add((point as u64) << 32);
        for w in 0..config.warmup {
            let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_sub(w as u64 + 1));
            let id = sample_identity_within(&ctx, params, &mut rng, cap)?;
            let mc = issue_challenges(&ctx, &id, &mut rng)?;
            black_box(verify(&ctx, &id, &mc)?);
        }
        let (mut gen, mut issue, mut check) = (Vec::new(), Vec::new(), Vec::new());
        for rep in 0..config.repetitions {
            let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_add(rep as u64));
            let mut rng_challenge = rng.clone();
            rng_challenge.set_stream(1);

            let start = Instant::now();
            let id = sample_identity_within(&ctx, params, &mut rng, cap)?;
            gen.push(elapsed_ns(start));

            let start = Instant::now();
            let mc = issue_challenges(&ctx, &id, &mut rng_challenge)?;
            issue.push(elapsed_ns(start));

            let start = Instant::now();
            let result = verify(&ctx, &id, &mc)?;
            check.push(elapsed_ns(start));
            assert!(result.accepted, "issuing identity rejected");
        }
        let r = report(params);
        records.push(IdentRecord {
            params,
            coefficients: params.coefficient_count()?,
            log_i_bits: r.log_i_bits,
            error_bound: r.error_bound_n,
            generation: summarize(&gen),
            issue: summarize(&issue),
            verify: summarize(&check),
            wire_bytes: WIRE_HEADER_LEN + r.payload_bytes as usize,
        });
    }
    Ok(records)
}

pub const IDENT_CSV_HEADER: &str =
    "q,k,m,n,log_I_bits,error_bound,gen_ns,issue_ns,verify_ns,wire_bytes";

pub fn ident_csv(records: &[IdentRecord]) -> String {
    let mut out = String::from(IDENT_CSV_HEADER);
    out.push('\n');
    for r in records {
        let p = r.params;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:e},{:.0},{:.0},{:.0},{}",
            p.q(),
            p.k(),
            p.m(),
            p.n(),
            r.log_i_bits,
            r.error_bound,
            r.generation.median,
            r.issue.median,
            r.verify.median,
            r.wire_bytes
        );
    }
    out
}

fn csv_rows<'a>(
    text: &'a str,
    header: &str,
) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)> + 'a, BenchError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        _ => return Err(BenchError::Parse(format!("expected header {header:?}"))),
    }
    Ok(lines.map(|(i, l)| (i + 1, l.split(',').map(str::trim).collect())))
}

fn field<T: std::str::FromStr>(row: &[&str], i: usize, line: usize) -> Result<T, BenchError> {
    row.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| BenchError::Parse(format!("line {line}, column {}", i + 1)))
}

/// Reads `ident.csv` back into per-evaluation measurements.
pub fn measured_points_from_csv(text: &str) -> Result<Vec<MeasuredPoint>, BenchError> {
    csv_rows(text, IDENT_CSV_HEADER)?
        .map(|(line, row)| {
            let n: f64 = field(&row, 3, line)?;
            let issue: f64 = field(&row, 7, line)?;
            Ok(MeasuredPoint {
                q: field(&row, 0, line)?,
                k: field(&row, 1, line)?,
                m: field(&row, 2, line)?,
                measured_ns: issue / n,
            })
        })
        .collect()
}

pub fn measured_points(records: &[IdentRecord]) -> Vec<MeasuredPoint> {
    records
        .iter()
        .map(|r| MeasuredPoint {
            q: r.params.q(),
            k: r.params.k(),
            m: r.params.m(),
            measured_ns: r.per_evaluation_ns(),
        })
        .collect()
}

/// Median of the cache-off per-operation times in `fieldops.csv`, the
/// uniform `t` of the unit-cost model.
pub fn uniform_op_time_from_csv(text: &str) -> Result<f64, BenchError> {
    let times = csv_rows(text, FIELDOPS_CSV_HEADER)?
        .filter(|(_, row)| row.get(2) == Some(&"off"))
        .map(|(line, row)| field::<f64>(&row, 3, line))
        .collect::<Result<Vec<_>, _>>()?;
    if times.is_empty() {
        return Err(BenchError::Parse("no cache-off rows".into()));
    }
    Ok(summarize(&times).median)
}
