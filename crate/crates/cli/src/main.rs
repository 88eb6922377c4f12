//! `rmid`: generate identities, issue and verify challenges, and print code,
//! capacity and cost tables.
//!
//! Exit status: 0 accept (or success), 1 reject, 2 invalid parameters or
//! malformed input, 3 I/O failure, 4 parameter mismatch between inputs.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use rmid_core::bench::{self, BenchConfig};
use rmid_core::capacity::{self, CapacityPoint, MAX_T};
use rmid_core::costmodel::{self, CostTable, OpCosts};
use rmid_core::ident::{
    decode_identity, decode_wire, encode_identity, encode_identity_text, encode_wire,
    encode_wire_text, IdentError, WireError,
};
use rmid_core::rmpoly::{sample_identity, Identity, PolyError, RmParams};
use rmid_core::{issue_challenges, report, verify, FieldCtx, FieldParams};

#[derive(Parser, Debug)]
#[command(name = "rmid", version, about = "Reed-Muller identification codes")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Global {
    /// Field order, a prime power below 2^16
    #[arg(long, global = true, conflicts_with_all = ["p", "d"])]
    q: Option<u64>,
    /// Field characteristic
    #[arg(long, global = true, requires = "d")]
    p: Option<u32>,
    /// Extension degree
    #[arg(long, global = true, requires = "p")]
    d: Option<u32>,
    /// Total degree bound of identity polynomials
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Number of variables
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Number of challenges
    #[arg(long, global = true)]
    n: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file (output directory for `bench`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Csv,
    Binary,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a uniformly random identity
    Keygen,
    /// Issue n challenges for an identity
    Challenge {
        /// Identity file, `-` for stdin
        identity: PathBuf,
    },
    /// Check a challenge set against an identity
    Verify {
        /// Identity file, `-` for stdin
        identity: PathBuf,
        /// Challenge file, `-` for stdin
        challenges: PathBuf,
    },
    /// Print code parameters, sizes and error bounds
    Report,
    /// Tabulate the capacity-achieving family
    Capacity {
        #[arg(long, default_value_t = 6)]
        t_max: u32,
    },
    /// Exact evaluation cost, or predicted against measured times
    Costmodel {
        /// Tabulate m = 1..=m_max
        #[arg(long)]
        m_max: Option<u32>,
        /// Tabulate k = 0..=k_max
        #[arg(long)]
        k_max: Option<u32>,
        /// fieldops.csv from `bench`, for the per-operation time
        #[arg(long, requires = "ident")]
        fieldops: Option<PathBuf>,
        /// ident.csv from `bench`, for measured evaluation times
        #[arg(long, requires = "fieldops")]
        ident: Option<PathBuf>,
    },
    /// Time field operations and identification; writes fieldops.csv and ident.csv
    Bench {
        /// Field orders for the operation sweep
        #[arg(long, value_delimiter = ',', default_values_t = [16u32, 256, 257, 4096, 19683])]
        sizes: Vec<u32>,
        #[arg(long, default_value_t = 31)]
        reps: usize,
        #[arg(long, default_value_t = 3)]
        warmup: usize,
        /// Also time the polynomial-arithmetic backend at these orders
        #[arg(long, value_delimiter = ',')]
        fallback: Vec<u32>,
        /// Skip the identification sweep
        #[arg(long)]
        field_only: bool,
    },
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Io(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<rmid_core::FieldError> for Failure {
    fn from(e: rmid_core::FieldError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<WireError> for Failure {
    fn from(e: WireError) -> Self {
        match e {
            WireError::ParameterMismatch { .. } => Failure::Mismatch(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<IdentError> for Failure {
    fn from(e: IdentError) -> Self {
        match e {
            IdentError::ParameterMismatch { .. } => Failure::Mismatch(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<bench::BenchError> for Failure {
    fn from(e: bench::BenchError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<costmodel::CostError> for Failure {
    fn from(e: costmodel::CostError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// Result of a subcommand that ran to completion.
enum Outcome {
    Success,
    Reject,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Reject) => ExitCode::from(1),
        Err(e) => {
            eprintln!("rmid: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Keygen => keygen(g),
        Command::Challenge { identity } => challenge(g, identity),
        Command::Verify {
            identity,
            challenges,
        } => verify_cmd(g, identity, challenges),
        Command::Report => report_cmd(g),
        Command::Capacity { t_max } => capacity_cmd(g, *t_max),
        Command::Costmodel {
            m_max,
            k_max,
            fieldops,
            ident,
        } => costmodel_cmd(g, *m_max, *k_max, fieldops.as_deref(), ident.as_deref()),
        Command::Bench {
            sizes,
            reps,
            warmup,
            fallback,
            field_only,
        } => bench_cmd(g, sizes, *reps, *warmup, fallback, *field_only),
    }
}

impl Global {
    fn field(&self) -> Result<Option<FieldParams>, Failure> {
        Ok(match (self.q, self.p, self.d) {
            (Some(q), _, _) => Some(FieldParams::from_order(q)?),
            (None, Some(p), Some(d)) => Some(FieldParams::new(p, d)?),
            _ => None,
        })
    }

    /// Full code parameters from the flags; `n` defaults to 1.
    fn params(&self) -> Result<RmParams, Failure> {
        let field = self
            .field()?
            .ok_or_else(|| Failure::Invalid("missing field: give --q or --p and --d".into()))?;
        let k = self
            .k
            .ok_or_else(|| Failure::Invalid("missing --k".into()))?;
        let m = self
            .m
            .ok_or_else(|| Failure::Invalid("missing --m".into()))?;
        Ok(RmParams::new(field, k, m, self.n.unwrap_or(1))?)
    }

    /// Flags that were given must agree with parameters read from a file.
    fn check_against(&self, params: RmParams, what: &str) -> Result<(), Failure> {
        let field = self.field()?;
        let conflicts = [
            field.is_some_and(|f| f != params.field()),
            self.k.is_some_and(|k| k != params.k()),
            self.m.is_some_and(|m| m != params.m()),
        ];
        if conflicts.iter().any(|&c| c) {
            return Err(Failure::Mismatch(format!(
                "{what} holds q = {}, k = {}, m = {}, which disagrees with the command line",
                params.q(),
                params.k(),
                params.m()
            )));
        }
        Ok(())
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut bytes = Vec::new();
    let result = if path.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        std::fs::read(path).map(|b| bytes = b)
    };
    result.map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(bytes)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Prints a message to stdout when the payload went to a file, otherwise to
/// stderr so piped records stay clean.
fn note(g: &Global, text: &str) {
    if g.out.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
}

fn ctx_for(params: RmParams) -> Result<FieldCtx, Failure> {
    let f = params.field();
    Ok(FieldCtx::new(f.characteristic(), f.degree())?)
}

fn load_identity(g: &Global, path: &Path) -> Result<Identity, Failure> {
    let id = decode_identity(&read_input(path)?)?;
    g.check_against(id.params(), "identity")?;
    Ok(id)
}

fn keygen(g: &Global) -> Result<Outcome, Failure> {
    let params = g.params()?;
    note(g, &report(params).to_string());
    let ctx = ctx_for(params)?;
    let id = sample_identity(&ctx, params, &mut ChaCha20Rng::seed_from_u64(g.seed))?;
    let bytes = match g.format.unwrap_or(Format::Binary) {
        Format::Binary => encode_identity(&id),
        Format::Csv | Format::Human => encode_identity_text(&id).into_bytes(),
    };
    write_output(g.out.as_deref(), &bytes)?;
    Ok(Outcome::Success)
}

fn challenge(g: &Global, identity: &Path) -> Result<Outcome, Failure> {
    let id = load_identity(g, identity)?;
    let id = id.with_challenges(g.n.unwrap_or(1))?;
    let ctx = ctx_for(id.params())?;
    let mc = issue_challenges(&ctx, &id, &mut ChaCha20Rng::seed_from_u64(g.seed))?;
    let bytes = match g.format.unwrap_or(Format::Binary) {
        Format::Binary => encode_wire(&mc),
        Format::Csv | Format::Human => encode_wire_text(&mc).into_bytes(),
    };
    write_output(g.out.as_deref(), &bytes)?;
    Ok(Outcome::Success)
}

fn verify_cmd(g: &Global, identity: &Path, challenges: &Path) -> Result<Outcome, Failure> {
    if identity.as_os_str() == "-" && challenges.as_os_str() == "-" {
        return Err(Failure::Invalid(
            "only one input can come from stdin".into(),
        ));
    }
    let id = load_identity(g, identity)?;
    let mc = decode_wire(&read_input(challenges)?)?;
    let ctx = ctx_for(id.params())?;
    let result = verify(&ctx, &id, &mc)?;
    let mut text = String::new();
    match g.format.unwrap_or(Format::Human) {
        Format::Csv => {
            text.push_str("challenge,accepted\n");
            for (i, ok) in result.per_challenge.iter().enumerate() {
                let _ = writeln!(text, "{i},{ok}");
            }
        }
        Format::Human | Format::Binary => {
            for (i, ok) in result.per_challenge.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "challenge {i}: {}",
                    if *ok { "match" } else { "mismatch" }
                );
            }
            let _ = writeln!(
                text,
                "{}",
                if result.accepted { "accept" } else { "reject" }
            );
        }
    }
    write_output(g.out.as_deref(), text.as_bytes())?;
    Ok(if result.accepted {
        Outcome::Success
    } else {
        Outcome::Reject
    })
}

const REPORT_CSV_HEADER: &str =
    "q,k,m,n,log_I_bits,log_C_bits,log_R_bits,log_T_bits,E,E_n,rate_ratio,wire_bytes";

fn report_cmd(g: &Global) -> Result<Outcome, Failure> {
    let r = report(g.params()?);
    let text = match g.format.unwrap_or(Format::Human) {
        Format::Csv => {
            let p = r.params;
            format!(
                "{REPORT_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
                p.q(),
                p.k(),
                p.m(),
                p.n(),
                r.log_i_bits,
                r.log_c_bits,
                r.log_r_bits,
                r.log_t_bits,
                *r.error_bound.numer() as f64 / *r.error_bound.denom() as f64,
                r.error_bound_n,
                r.rate_ratio_f64(),
                r.payload_bytes
            )
        }
        Format::Human => format!("{r}\n"),
        Format::Binary => return Err(Failure::Invalid("report has no binary form".into())),
    };
    write_output(g.out.as_deref(), text.as_bytes())?;
    Ok(Outcome::Success)
}

fn capacity_table(points: &[CapacityPoint]) -> String {
    let mut out = format!(
        "{:>3} {:>8} {:>8} {:>6} {:>16} {:>12} {:>12}\n",
        "t", "log2 q", "log2 k", "m", "randomness", "rate", "error"
    );
    for p in points {
        let _ = writeln!(
            out,
            "{:>3} {:>8} {:>8} {:>6} {:>16.10} {:>12.8} {:>12.3e}",
            p.t, p.q_log2, p.k_log2, p.m, p.randomness_ratio, p.rate_ratio, p.error
        );
    }
    let tr = capacity::trends(points);
    let _ = writeln!(
        out,
        "randomness decreasing: {}, error decreasing: {}, rate increasing: {}, rate below 1: {}",
        tr.randomness_decreasing, tr.error_decreasing, tr.rate_increasing, tr.rate_below_one
    );
    out
}

fn capacity_cmd(g: &Global, t_max: u32) -> Result<Outcome, Failure> {
    if !(2..=MAX_T).contains(&t_max) {
        return Err(Failure::Invalid(format!("--t-max must lie in 2..={MAX_T}")));
    }
    let points = capacity::capacity_sequence(t_max);
    let text = match g.format.unwrap_or(Format::Human) {
        Format::Csv => capacity::capacity_csv(&points),
        Format::Human => capacity_table(&points),
        Format::Binary => return Err(Failure::Invalid("capacity has no binary form".into())),
    };
    write_output(g.out.as_deref(), text.as_bytes())?;
    Ok(Outcome::Success)
}

fn read_text(path: &Path) -> Result<String, Failure> {
    String::from_utf8(read_input(path)?)
        .map_err(|_| Failure::Invalid(format!("{} is not UTF-8", path.display())))
}

fn costmodel_cmd(
    g: &Global,
    m_max: Option<u32>,
    k_max: Option<u32>,
    fieldops: Option<&Path>,
    ident: Option<&Path>,
) -> Result<Outcome, Failure> {
    let format = g.format.unwrap_or(Format::Human);
    if format == Format::Binary {
        return Err(Failure::Invalid("costmodel has no binary form".into()));
    }
    let text = if let (Some(fieldops), Some(ident)) = (fieldops, ident) {
        let t = bench::uniform_op_time_from_csv(&read_text(fieldops)?)?;
        let measured = bench::measured_points_from_csv(&read_text(ident)?)?;
        let rows = costmodel::predicted_vs_measured(OpCosts::uniform(t)?, &measured)?;
        costmodel::prediction_csv(&rows)
    } else if m_max.is_some() || k_max.is_some() {
        let m_max = m_max.or(g.m).unwrap_or(4);
        let k_max = k_max.or(g.k).unwrap_or(10);
        if m_max == 0 {
            return Err(Failure::Invalid("--m-max must be at least 1".into()));
        }
        costmodel::cost_csv(1..=m_max, 0..=k_max)
    } else {
        let m = g.m.ok_or_else(|| Failure::Invalid("missing --m".into()))?;
        let k = g.k.ok_or_else(|| Failure::Invalid("missing --k".into()))?;
        if m == 0 {
            return Err(Failure::Invalid("--m must be at least 1".into()));
        }
        match format {
            Format::Csv => costmodel::cost_csv([m], [k]),
            _ => {
                let table = CostTable::new(m, k);
                let lead = costmodel::leading_term(m, k);
                let lead_f = costmodel::ratio_to_f64(&lead);
                let mut out = String::new();
                let _ = writeln!(out, "C({m},{k}) = {}", table.unit_cost(m, k));
                let _ = writeln!(out, "additions: {}", table.adds(m, k));
                let _ = writeln!(out, "multiplications: {}", table.muls(m, k));
                let _ = writeln!(out, "leading term 3k^m/m!: {lead} ({lead_f})");
                if k > 0 {
                    let _ = writeln!(out, "ratio: {}", costmodel::leading_term_ratio(m, k));
                }
                out
            }
        }
    };
    write_output(g.out.as_deref(), text.as_bytes())?;
    Ok(Outcome::Success)
}

fn default_grid(n_values: &[u32]) -> Result<Vec<RmParams>, Failure> {
    let mut grid = Vec::new();
    for &(k, m) in &[
        (4, 2),
        (8, 2),
        (16, 2),
        (32, 2),
        (64, 2),
        (4, 3),
        (8, 3),
        (16, 3),
        (32, 3),
        (8, 4),
        (16, 4),
    ] {
        for &n in n_values {
            grid.push(RmParams::from_order(256, k, m, n)?);
        }
    }
    Ok(grid)
}

fn bench_cmd(
    g: &Global,
    sizes: &[u32],
    reps: usize,
    warmup: usize,
    fallback: &[u32],
    field_only: bool,
) -> Result<Outcome, Failure> {
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    let grid = if field_only {
        Vec::new()
    } else if let Ok(p) = g.params() {
        vec![p]
    } else {
        default_grid(&[g.n.unwrap_or(1), 6])?
    };
    let config = BenchConfig {
        field_sizes: sizes.to_vec(),
        grid,
        repetitions: reps,
        warmup,
        seed: g.seed,
        ..BenchConfig::default()
    };
    config.validate()?;

    let ops = bench::bench_field_ops(&config)?;
    let path = dir.join("fieldops.csv");
    write_output(Some(&path), bench::fieldops_csv(&ops).as_bytes())?;
    println!("wrote {}", path.display());

    if !fallback.is_empty() {
        let records = bench::bench_fallback_ops(fallback, &config)?;
        let path = dir.join("fieldops_fallback.csv");
        write_output(Some(&path), bench::fieldops_csv(&records).as_bytes())?;
        println!("wrote {}", path.display());
    }
    if !config.grid.is_empty() {
        let records = bench::bench_identification(&config)?;
        let path = dir.join("ident.csv");
        write_output(Some(&path), bench::ident_csv(&records).as_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(Outcome::Success)
}
