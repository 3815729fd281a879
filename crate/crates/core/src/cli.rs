//! The `hpint` command line.
//!
//! Exit codes: 0 success, 1 verification tolerance exceeded, 2 bad flags or
//! indices, 3 memory cap refusal, 4 I/O failure. Data goes to standard
//! output and diagnostics to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::ci;
use crate::index::{IndexTuple, IntegralKind};
use crate::oracle::{self, ExactOracle};
use crate::recursion::{self, BuildError, BuildOptions, IntegralTable, QueryError};
use crate::tableio::{self, TableIoError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MEMORY: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hpint", version, about = "Integrals of products of Hermite polynomials")]
pub struct Cli {
    /// Worker threads for table builds (overrides HPINT_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a W or U table, or export Y values from a W table.
    Build(BuildArgs),
    /// Print one integral value.
    Query(QueryArgs),
    /// Compare the recursion against the oracles.
    Verify(VerifyArgs),
    /// Time table builds.
    Bench(BenchArgs),
    /// Run a demo that consumes the tables.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    #[value(name = "W", alias = "w")]
    W,
    #[value(name = "Y", alias = "y")]
    Y,
    #[value(name = "U", alias = "u")]
    U,
}

impl From<KindArg> for IntegralKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::W => IntegralKind::W,
            KindArg::Y => IntegralKind::Y,
            KindArg::U => IntegralKind::U,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Bin,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Exact,
    Quadrature,
    Both,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Required for W and U; for Y defaults to the W table's max degree.
    #[arg(long)]
    pub max_degree: Option<u32>,
    /// Output file, or `-` for standard output.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "bin")]
    pub format: Format,
    /// W table (binary or CSV) to export Y values from.
    #[arg(long)]
    pub from_w: Option<PathBuf>,
    /// Refuse builds whose values would exceed this many bytes.
    #[arg(long)]
    pub mem_cap: Option<u64>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Comma-separated indices: four for W and Y, six for U.
    #[arg(long)]
    pub indices: String,
    /// Table file to read (a W table for Y queries).
    #[arg(long, conflicts_with = "max_degree")]
    pub table: Option<PathBuf>,
    /// Build a table of this max degree instead (default: largest index).
    #[arg(long)]
    pub max_degree: Option<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub max_degree: u32,
    #[arg(long, value_enum, default_value = "exact")]
    pub oracle: OracleArg,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub max_degree: u32,
    #[arg(long, default_value_t = 1)]
    pub repeat: u32,
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Ground-state energy of two bosons with a contact interaction.
    TwoBoson(TwoBosonArgs),
}

#[derive(Debug, Args)]
pub struct TwoBosonArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub g: f64,
    #[arg(long)]
    pub max_degree: u32,
    /// W table to read instead of building one.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Self {
        let code = match e {
            BuildError::MemoryCap { .. } => EXIT_MEMORY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<TableIoError> for Failure {
    fn from(e: TableIoError) -> Self {
        Failure::io(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::io(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Where a command writes. `out_is_terminal` guards binary output.
pub struct Console<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
    pub out_is_terminal: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, console: &mut Console<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = console.err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = console.out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = build_options(cli.threads).and_then(|opts| match cli.command {
        Command::Build(a) => cmd_build(a, &opts, console),
        Command::Query(a) => cmd_query(a, &opts, console),
        Command::Verify(a) => cmd_verify(a, &opts, console),
        Command::Bench(a) => cmd_bench(a, &opts, console),
        Command::Demo(Demo::TwoBoson(a)) => cmd_demo(a, &opts, console),
    });
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(console.err, "error: {}", f.message);
            f.code
        }
    };
    let _ = console.out.flush();
    code
}

/// Entry point for the binary: real process arguments and streams.
pub fn main_with_env() -> i32 {
    use std::io::IsTerminal;
    let stdout = io::stdout();
    let out_is_terminal = stdout.is_terminal();
    let mut out = stdout.lock();
    let mut err = io::stderr().lock();
    run(
        std::env::args_os(),
        &mut Console {
            out: &mut out,
            err: &mut err,
            out_is_terminal,
        },
    )
}

fn build_options(threads: Option<usize>) -> Result<BuildOptions, Failure> {
    let mut opts = BuildOptions::from_env()?;
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        opts.threads = Some(n);
    }
    Ok(opts)
}

fn load(path: &Path) -> Result<IntegralTable, Failure> {
    tableio::load_table(path).map_err(|e| Failure::io(format!("cannot read table {}: {e}", path.display())))
}

fn load_w(path: &Path) -> Result<IntegralTable, Failure> {
    let table = load(path)?;
    if table.kind() != IntegralKind::W {
        return Err(Failure::usage(format!("{} holds a {} table, expected W", path.display(), table.kind())));
    }
    Ok(table)
}

fn cmd_build(a: BuildArgs, opts: &BuildOptions, console: &mut Console<'_>) -> Outcome {
    let kind = IntegralKind::from(a.kind);
    let mut opts = opts.clone();
    if let Some(cap) = a.mem_cap {
        opts.memory_cap = cap;
    }
    let to_stdout = a.out.as_os_str() == "-";
    if to_stdout && a.format == Format::Bin && console.out_is_terminal {
        return Err(Failure::usage("refusing to write binary output to a terminal"));
    }
    let start = Instant::now();
    let mut buf = Vec::new();
    let records = match kind {
        IntegralKind::Y => {
            let from = a
                .from_w
                .as_deref()
                .ok_or_else(|| Failure::usage("Y is derived; query it or export via --kind Y --from-w"))?;
            let w = load_w(from)?;
            let m = a.max_degree.unwrap_or(w.max_degree());
            if m > w.max_degree() {
                return Err(Failure::usage(format!(
                    "--max-degree {m} exceeds the W table's max degree {}",
                    w.max_degree()
                )));
            }
            let y = tableio::export_y(&w, m)?;
            match a.format {
                Format::Bin => {
                    tableio::write_y_binary(&y, &mut buf)?;
                }
                Format::Csv => tableio::write_y_csv(&y, &mut buf)?,
                Format::Json => tableio::write_meta(&tableio::TableMeta::of_y(&y), &mut buf)?,
            }
            y.records().len() as u64
        }
        _ => {
            if a.from_w.is_some() {
                return Err(Failure::usage("--from-w only applies to --kind Y"));
            }
            let m = a
                .max_degree
                .ok_or_else(|| Failure::usage("--max-degree is required for W and U"))?;
            let table = recursion::build_table(kind, m, &opts)?;
            match a.format {
                Format::Bin => {
                    tableio::write_binary(&table, &mut buf)?;
                }
                Format::Csv => tableio::write_csv(&table, &mut buf)?,
                Format::Json => tableio::write_json_meta(&table, &mut buf)?,
            }
            table.record_count()
        }
    };
    if to_stdout {
        console.out.write_all(&buf)?;
    } else {
        let mut file =
            File::create(&a.out).map_err(|e| Failure::io(format!("cannot create {}: {e}", a.out.display())))?;
        file.write_all(&buf)
            .and_then(|_| file.flush())
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", a.out.display())))?;
    }
    let summary = format!("{records} records in {:.3} s", start.elapsed().as_secs_f64());
    if to_stdout {
        writeln!(console.err, "{summary}")?;
    } else {
        writeln!(console.out, "{summary}")?;
    }
    Ok(EXIT_OK)
}

fn parse_indices(kind: IntegralKind, raw: &str) -> Result<IndexTuple, Failure> {
    let idx = raw
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Failure::usage(format!("bad index {p:?} in {raw:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if idx.len() != kind.arity().len() {
        return Err(Failure::usage(format!(
            "{kind} takes {} indices, got {}",
            kind.arity().len(),
            idx.len()
        )));
    }
    Ok(IndexTuple::new(&idx).expect("length checked"))
}

/// `v` with 17 significant digits in positional notation.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-20..=20).contains(&exp) {
        format!("{v:.*}", (16 - exp).max(0) as usize)
    } else {
        sci
    }
}

fn cmd_query(a: QueryArgs, opts: &BuildOptions, console: &mut Console<'_>) -> Outcome {
    let kind = IntegralKind::from(a.kind);
    let t = parse_indices(kind, &a.indices)?;
    let table_kind = if kind == IntegralKind::U { IntegralKind::U } else { IntegralKind::W };
    let table = match &a.table {
        Some(path) => {
            let table = load(path)?;
            if table.kind() != table_kind {
                return Err(Failure::usage(format!(
                    "{kind} queries need a {table_kind} table, {} holds {}",
                    path.display(),
                    table.kind()
                )));
            }
            table
        }
        None => recursion::build_table(table_kind, a.max_degree.unwrap_or(t.max_index()), opts)?,
    };
    let result = match kind {
        IntegralKind::Y => recursion::y_value(&table, &t)?,
        _ => table.value(&t)?,
    };
    writeln!(console.out, "{}", format_value(result.value))?;
    if let Some(reason) = result.zero_reason {
        writeln!(console.err, "zero_reason: {reason}")?;
    }
    Ok(EXIT_OK)
}

/// Quadrature results smaller than this are exact zeros carrying the
/// round-off of the double-double sum.
pub const QUADRATURE_ZERO: f64 = 1e-28;

#[derive(Debug, Clone, Copy)]
struct Worst {
    error: f64,
    tuple: IndexTuple,
    oracle: &'static str,
}

fn cmd_verify(a: VerifyArgs, opts: &BuildOptions, console: &mut Console<'_>) -> Outcome {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(Failure::usage("--tol must be positive"));
    }
    let kind = IntegralKind::from(a.kind);
    let m = a.max_degree;
    let cases: Vec<(IndexTuple, f64)> = match kind {
        IntegralKind::Y => {
            let w = recursion::build_table(IntegralKind::W, m, opts)?;
            tableio::y_keys(m)
                .into_iter()
                .map(|k| {
                    let t = IndexTuple::four(k);
                    Ok((t, w.y(&t)?.value))
                })
                .collect::<Result<_, QueryError>>()?
        }
        _ => recursion::build_table(kind, m, opts)?.records().collect(),
    };
    let exact = matches!(a.oracle, OracleArg::Exact | OracleArg::Both).then(|| ExactOracle::new(m));
    let quad = matches!(a.oracle, OracleArg::Quadrature | OracleArg::Both);
    let worst = cases
        .par_iter()
        .map(|&(t, v)| -> Result<Option<Worst>, oracle::OracleError> {
            let mut w: Option<Worst> = None;
            let mut note = |error: f64, oracle: &'static str| {
                if w.is_none_or(|w| error > w.error) {
                    w = Some(Worst { error, tuple: t, oracle });
                }
            };
            if let Some(o) = &exact {
                note(oracle::relative_error(v, o.exact(kind, &t)?.to_f64()), "exact");
            }
            if quad {
                let q = oracle::quadrature_value_auto(kind, &t)?;
                let q = if q.abs() < QUADRATURE_ZERO { 0.0 } else { q };
                note(oracle::relative_error(v, q), "quadrature");
            }
            Ok(w)
        })
        .try_reduce(
            || None,
            |a, b| {
                Ok(match (a, b) {
                    (Some(x), Some(y)) => Some(if y.error > x.error { y } else { x }),
                    (x, y) => x.or(y),
                })
            },
        )
        .map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(
        console.out,
        "checked {} {kind} tuples with max degree {m}",
        cases.len()
    )?;
    let breach = match worst {
        Some(w) => {
            writeln!(
                console.out,
                "max relative error {:.3e} at {} ({} oracle)",
                w.error, w.tuple, w.oracle
            )?;
            w.error > a.tol || w.error.is_nan()
        }
        None => false,
    };
    if breach {
        writeln!(console.out, "FAIL: exceeds tolerance {:e}", a.tol)?;
        Ok(EXIT_TOLERANCE)
    } else {
        writeln!(console.out, "PASS: within tolerance {:e}", a.tol)?;
        Ok(EXIT_OK)
    }
}

fn cmd_bench(a: BenchArgs, opts: &BuildOptions, console: &mut Console<'_>) -> Outcome {
    let kind = IntegralKind::from(a.kind);
    if kind == IntegralKind::Y {
        return Err(Failure::usage("Y has no table to build; bench W or U"));
    }
    if a.repeat == 0 {
        return Err(Failure::usage("--repeat must be positive"));
    }
    let mut best = Duration::MAX;
    let mut table = None;
    for _ in 0..a.repeat {
        let start = Instant::now();
        let t = recursion::build_table(kind, a.max_degree, opts)?;
        best = best.min(start.elapsed());
        table = Some(t);
    }
    let table = table.expect("repeat is positive");
    let entries = table.record_count();
    let secs = best.as_secs_f64();
    writeln!(console.out, "kind {kind}, max degree {}", a.max_degree)?;
    writeln!(console.out, "entries: {entries}")?;
    writeln!(console.out, "best build time: {secs:.4} s over {} runs", a.repeat)?;
    writeln!(console.out, "entries/s: {:.3e}", entries as f64 / secs.max(1e-9))?;
    writeln!(console.out, "table bytes: {}", table.byte_size())?;
    Ok(EXIT_OK)
}

fn cmd_demo(a: TwoBosonArgs, opts: &BuildOptions, console: &mut Console<'_>) -> Outcome {
    let w = match &a.table {
        Some(path) => load_w(path)?,
        None => recursion::build_table(IntegralKind::W, a.max_degree, opts)?,
    };
    let h = ci::build_hamiltonian(a.max_degree, a.g, &w).map_err(|e| Failure::usage(e.to_string()))?;
    let state = ci::ground_state(&h).map_err(|e| Failure {
        code: EXIT_TOLERANCE,
        message: e.to_string(),
    })?;
    writeln!(console.out, "E = {}", format_value(state.energy))?;
    writeln!(console.out, "basis size = {}", h.basis.len())?;
    Ok(EXIT_OK)
}
