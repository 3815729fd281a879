//! Level-by-level construction of the W and U tables.
//!
//! Entries at level `S` are built from level `S - 2` only. For a canonical
//! tuple with pivot `i` (its largest entry) the W recurrence reads
//!
//! ```text
//! W(i,j,k,l) = 1/2 [ -sqrt((i-1)/i) W(i-2,j,k,l) + sqrt(j/i) W(i-1,j-1,k,l)
//!                    + sqrt(k/i) W(i-1,j,k-1,l) + sqrt(l/i) W(i-1,j,k,l-1) ]
//! ```
//!
//! and the U recurrence has prefactor `1/3`, a first coefficient of
//! `-2 sqrt((i-1)/i)` and five lowering terms. Terms whose index coefficient
//! is zero are dropped, so no negative index is ever formed. Dependencies are
//! re-sorted before lookup since the integrands are fully symmetric.
//!
//! Y needs no table of its own: every Y value is a four-term combination of
//! W values one level down (see [`y_value`]).

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::index::{self, IndexError, IndexSpace, IndexTuple, IntegralKind, MAX_ARITY};

/// Generator string recorded in table metadata.
pub const GENERATOR_VERSION: &str = concat!("hpint ", env!("CARGO_PKG_VERSION"));

/// `1/sqrt(2 pi)`, the W value at level 0.
pub const W_BASE: f64 = 0.398_942_280_401_432_7;

/// `1/(sqrt(3) pi)`, the U value at level 0.
pub const U_BASE: f64 = 0.183_776_298_473_930_7;

/// Default refusal threshold for table allocation (4 GiB).
pub const DEFAULT_MEMORY_CAP: u64 = 4 << 30;

/// Environment variable capping build parallelism.
pub const THREADS_ENV: &str = "HPINT_THREADS";

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("{kind} tables are not built by recursion; only W and U are")]
    UnsupportedKind { kind: IntegralKind },
    #[error("table needs {required} bytes but the memory cap is {cap} bytes")]
    MemoryCap { required: u64, cap: u64 },
    #[error("max degree {0} is too large for a table")]
    MaxDegreeTooLarge(u32),
    #[error("invalid {THREADS_ENV} value {0:?}: expected a positive integer")]
    BadThreadCount(String),
    #[error("could not start worker pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("table holds {table} values, cannot answer a {requested} query")]
    WrongTable {
        table: IntegralKind,
        requested: IntegralKind,
    },
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// Why a query returned an exact zero without a table lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroReason {
    OddParity,
    YSelectionRule,
}

impl fmt::Display for ZeroReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZeroReason::OddParity => "odd-parity",
            ZeroReason::YSelectionRule => "y-selection-rule",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryResult {
    pub value: f64,
    pub zero_reason: Option<ZeroReason>,
}

impl QueryResult {
    fn value(value: f64) -> Self {
        QueryResult {
            value,
            zero_reason: None,
        }
    }

    fn zero(reason: ZeroReason) -> Self {
        QueryResult {
            value: 0.0,
            zero_reason: Some(reason),
        }
    }
}

/// Build settings: worker count and allocation cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOptions {
    /// `None` uses all available hardware threads.
    pub threads: Option<usize>,
    pub memory_cap: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            threads: None,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

impl BuildOptions {
    /// Defaults with the thread cap taken from `HPINT_THREADS` when set.
    pub fn from_env() -> Result<Self, BuildError> {
        let threads = match std::env::var(THREADS_ENV) {
            Ok(raw) => Some(parse_threads(&raw)?),
            Err(_) => None,
        };
        Ok(BuildOptions {
            threads,
            ..BuildOptions::default()
        })
    }
}

fn parse_threads(raw: &str) -> Result<usize, BuildError> {
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(BuildError::BadThreadCount(raw.to_string())),
    }
}

/// All non-zero-parity canonical values of W or U up to a max degree.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTable {
    kind: IntegralKind,
    space: IndexSpace,
    /// `levels[s / 2]` holds level `s`, indexed by rank.
    levels: Vec<Vec<f64>>,
    generator: String,
}

impl IntegralTable {
    /// Assembles a table from per-level value arrays, checking their lengths.
    pub fn from_levels(
        kind: IntegralKind,
        max_degree: u32,
        levels: Vec<Vec<f64>>,
        generator: impl Into<String>,
    ) -> Result<Self, TableShapeError> {
        if kind == IntegralKind::Y {
            return Err(TableShapeError::Kind(kind));
        }
        let space = IndexSpace::new(kind.arity(), max_degree);
        let expected = space.even_levels().count();
        if levels.len() != expected {
            return Err(TableShapeError::LevelCount {
                expected,
                got: levels.len(),
            });
        }
        for (s, values) in space.even_levels().zip(&levels) {
            let count = space.count(s);
            if values.len() as u64 != count {
                return Err(TableShapeError::LevelLength {
                    level: s,
                    expected: count,
                    got: values.len(),
                });
            }
        }
        Ok(IntegralTable {
            kind,
            space,
            levels,
            generator: generator.into(),
        })
    }

    pub fn kind(&self) -> IntegralKind {
        self.kind
    }

    pub fn max_degree(&self) -> u32 {
        self.space.max_degree()
    }

    pub fn space(&self) -> &IndexSpace {
        &self.space
    }

    pub fn generator_version(&self) -> &str {
        &self.generator
    }

    /// Values of an even level in rank order.
    pub fn level(&self, level: u32) -> Option<&[f64]> {
        if level % 2 == 1 {
            return None;
        }
        self.levels.get(level as usize / 2).map(Vec::as_slice)
    }

    /// Number of stored canonical entries.
    pub fn record_count(&self) -> u64 {
        self.levels.iter().map(|l| l.len() as u64).sum()
    }

    pub fn byte_size(&self) -> u64 {
        self.record_count() * std::mem::size_of::<f64>() as u64
    }

    /// Iterates `(canonical tuple, value)` by ascending level then rank.
    pub fn records(&self) -> impl Iterator<Item = (IndexTuple, f64)> + '_ {
        self.space.even_levels().zip(&self.levels).flat_map(move |(s, values)| {
            let keys = self
                .space
                .enumerate_level(s)
                .expect("stored levels are in range")
                .keys;
            keys.into_iter().zip(values.iter().copied()).map(|(k, v)| (*k.sorted(), v))
        })
    }

    /// Permutation-invariant lookup of a W or U value.
    pub fn value(&self, t: &IndexTuple) -> Result<QueryResult, QueryError> {
        index::check_arity(self.kind, t)?;
        self.check_degree(t)?;
        if t.level() % 2 == 1 {
            return Ok(QueryResult::zero(ZeroReason::OddParity));
        }
        Ok(QueryResult::value(self.lookup(t.as_slice())))
    }

    fn check_degree(&self, t: &IndexTuple) -> Result<(), IndexError> {
        let max = t.max_index();
        if max > self.max_degree() {
            return Err(IndexError::IndexExceedsMaxDegree {
                tuple: *t,
                index: max,
                max_degree: self.max_degree(),
            });
        }
        Ok(())
    }

    /// Unchecked lookup of an even-level tuple in any order.
    #[inline]
    fn lookup(&self, t: &[u32]) -> f64 {
        let mut buf = [0u32; MAX_ARITY];
        let sorted = &mut buf[..t.len()];
        sorted.copy_from_slice(t);
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let level: u32 = sorted.iter().sum();
        self.levels[level as usize / 2][self.space.rank_sorted(sorted) as usize]
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableShapeError {
    #[error("{0} values are not stored as tables")]
    Kind(IntegralKind),
    #[error("expected {expected} even levels, got {got}")]
    LevelCount { expected: usize, got: usize },
    #[error("level {level} should hold {expected} values, got {got}")]
    LevelLength { level: u32, expected: u64, got: usize },
}

/// Bytes needed for the value arrays of a `kind` table up to `max_degree`.
pub fn estimate_table_bytes(kind: IntegralKind, max_degree: u32) -> u64 {
    IndexSpace::new(kind.arity(), max_degree).even_total() * std::mem::size_of::<f64>() as u64
}

pub fn build_w_table(max_degree: u32) -> Result<IntegralTable, BuildError> {
    build_table(IntegralKind::W, max_degree, &BuildOptions::default())
}

pub fn build_u_table(max_degree: u32) -> Result<IntegralTable, BuildError> {
    build_table(IntegralKind::U, max_degree, &BuildOptions::default())
}

/// Builds a W or U table, refusing up front if it would exceed the cap.
pub fn build_table(kind: IntegralKind, max_degree: u32, opts: &BuildOptions) -> Result<IntegralTable, BuildError> {
    let recurrence = match kind {
        IntegralKind::W => Recurrence::W,
        IntegralKind::U => Recurrence::U,
        IntegralKind::Y => return Err(BuildError::UnsupportedKind { kind }),
    };
    // the count table is sized by arity * max_degree; keep it in range
    if max_degree > u32::from(u16::MAX) {
        return Err(BuildError::MaxDegreeTooLarge(max_degree));
    }
    let required = estimate_table_bytes(kind, max_degree);
    if required > opts.memory_cap {
        return Err(BuildError::MemoryCap {
            required,
            cap: opts.memory_cap,
        });
    }

    let space = IndexSpace::new(kind.arity(), max_degree);
    let mut table = IntegralTable {
        kind,
        space,
        levels: Vec::new(),
        generator: GENERATOR_VERSION.to_string(),
    };
    table.levels.push(vec![recurrence.base()]);

    let run = |table: &mut IntegralTable| {
        for s in table.space.even_levels().skip(1) {
            let keys = table.space.enumerate_level(s).expect("level in range").keys;
            let prev = &*table;
            let values: Vec<f64> = keys
                .par_iter()
                .with_min_len(256)
                .map(|k| recurrence.entry(prev, k.sorted().as_slice()))
                .collect();
            table.levels.push(values);
        }
    };
    match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(|| run(&mut table)),
        None => run(&mut table),
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy)]
enum Recurrence {
    W,
    U,
}

impl Recurrence {
    fn base(self) -> f64 {
        match self {
            Recurrence::W => W_BASE,
            Recurrence::U => U_BASE,
        }
    }

    /// One canonical entry; `t` is non-increasing with `t[0] >= 1`.
    #[inline]
    fn entry(self, prev: &IntegralTable, t: &[u32]) -> f64 {
        let (prefactor, pivot_weight) = match self {
            Recurrence::W => (0.5, 1.0),
            Recurrence::U => (1.0 / 3.0, 2.0),
        };
        let n = t.len();
        let i = t[0];
        let fi = f64::from(i);
        let mut dep = [0u32; MAX_ARITY];
        let mut sum = 0.0;
        if i >= 2 {
            dep[..n].copy_from_slice(t);
            dep[0] = i - 2;
            sum -= pivot_weight * (f64::from(i - 1) / fi).sqrt() * prev.lookup(&dep[..n]);
        }
        for p in 1..n {
            if t[p] == 0 {
                // sorted, so every later entry is zero too
                break;
            }
            dep[..n].copy_from_slice(t);
            dep[0] = i - 1;
            dep[p] -= 1;
            sum += (f64::from(t[p]) / fi).sqrt() * prev.lookup(&dep[..n]);
        }
        prefactor * sum
    }
}

pub fn w_value(table: &IntegralTable, t: &IndexTuple) -> Result<QueryResult, QueryError> {
    expect_kind(table, IntegralKind::W)?;
    table.value(t)
}

pub fn u_value(table: &IntegralTable, t: &IndexTuple) -> Result<QueryResult, QueryError> {
    expect_kind(table, IntegralKind::U)?;
    table.value(t)
}

fn expect_kind(table: &IntegralTable, kind: IntegralKind) -> Result<(), QueryError> {
    if table.kind != kind {
        return Err(QueryError::WrongTable {
            table: table.kind,
            requested: kind,
        });
    }
    Ok(())
}

/// Y value from a W table.
///
/// The tuple is first brought to the form `i > j`, `k > l`,
/// `(i, j) >= (k, l)` using the antisymmetry in each pair and the symmetry
/// under exchanging pairs, so every member of an orbit shares one evaluation
/// and differs at most in sign.
pub fn y_value(w_table: &IntegralTable, t: &IndexTuple) -> Result<QueryResult, QueryError> {
    if w_table.kind != IntegralKind::W {
        return Err(QueryError::WrongTable {
            table: w_table.kind,
            requested: IntegralKind::Y,
        });
    }
    index::check_arity(IntegralKind::Y, t)?;
    w_table.check_degree(t)?;
    // the pair rule is reported first: it holds for every level
    let (canon, sign) = match y_canonical(t.as_slice().try_into().expect("arity 4")) {
        Some(c) => c,
        None => return Ok(QueryResult::zero(ZeroReason::YSelectionRule)),
    };
    if t.level() % 2 == 1 {
        return Ok(QueryResult::zero(ZeroReason::OddParity));
    }
    Ok(QueryResult::value(sign * y_canonical_value(w_table, canon)))
}

impl IntegralTable {
    /// Y value for `t`, using `self` as the W table.
    pub fn y(&self, t: &IndexTuple) -> Result<QueryResult, QueryError> {
        y_value(self, t)
    }
}

/// Maps `(i, j, k, l)` to its Y representative and the sign relating them,
/// or `None` when `i == j` or `k == l`.
pub fn y_canonical(t: [u32; 4]) -> Option<([u32; 4], f64)> {
    let [i, j, k, l] = t;
    if i == j || k == l {
        return None;
    }
    let mut sign = 1.0;
    let (a, b) = if i > j { (i, j) } else {
        sign = -sign;
        (j, i)
    };
    let (c, d) = if k > l { (k, l) } else {
        sign = -sign;
        (l, k)
    };
    if (a, b) >= (c, d) {
        Some(([a, b, c, d], sign))
    } else {
        Some(([c, d, a, b], sign))
    }
}

/// Evaluates the Y combination for an even-level tuple with entries within
/// the table's max degree. Does not apply selection rules.
fn y_canonical_value(w: &IntegralTable, t: [u32; 4]) -> f64 {
    let [i, j, k, l] = t;
    let mut sum = 0.0;
    let mut term = |coeff: u32, dep: [u32; 4], sign: f64| {
        if coeff != 0 {
            sum += sign * f64::from(coeff).sqrt() * w.lookup(&dep);
        }
    };
    term(i * k, [i.wrapping_sub(1), j, k.wrapping_sub(1), l], 1.0);
    term(i * l, [i.wrapping_sub(1), j, k, l.wrapping_sub(1)], -1.0);
    term(j * k, [i, j.wrapping_sub(1), k.wrapping_sub(1), l], -1.0);
    term(j * l, [i, j.wrapping_sub(1), k, l.wrapping_sub(1)], 1.0);
    2.0 * sum
}
