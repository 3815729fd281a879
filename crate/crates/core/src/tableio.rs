//! Table files.
//!
//! Binary layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//!      0     4  magic "HPIT"
//!      4     2  format version (1)
//!      6     1  kind: 0 = W, 1 = Y export, 2 = U
//!      7     1  arity (4 or 6)
//!      8     2  max degree
//!     10     2  reserved, zero
//!     12     8  record count
//!     20     -  records: arity x u16 indices, then f64 value
//! ```
//!
//! W and U records are the canonical (non-increasing) tuples ordered by
//! ascending level, then rank. Y exports hold tuples with `i > j`, `k > l`,
//! `(i, j) >= (k, l)`, ordered by ascending level, then lexicographically
//! decreasing. Readers reject anything else.
//!
//! CSV files carry a header `i,j,k,l[,m,n],value` and one row per record,
//! values printed as the shortest decimal that parses back to the same bits.

use std::io::{self, BufRead, Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::index::{Arity, IndexSpace, IndexTuple, IntegralKind, MAX_ARITY};
use crate::recursion::{self, IntegralTable, QueryError, TableShapeError, GENERATOR_VERSION};

pub const MAGIC: [u8; 4] = *b"HPIT";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 20;

#[derive(Debug, Error)]
pub enum TableIoError {
    #[error("bad magic {0:?}, not an HPIT table")]
    BadMagic([u8; 4]),
    #[error("unsupported format version {0} (expected {FORMAT_VERSION})")]
    VersionMismatch(u16),
    #[error("truncated stream")]
    Truncated,
    #[error("unknown kind code {0}")]
    UnknownKind(u8),
    #[error("arity {arity} does not match kind {kind}")]
    ArityMismatch { kind: IntegralKind, arity: u8 },
    #[error("reserved header bytes are not zero")]
    Reserved,
    #[error("expected a {expected} table, found {found}")]
    WrongKind {
        expected: IntegralKind,
        found: IntegralKind,
    },
    #[error("max degree {0} does not fit in 16 bits")]
    MaxDegreeTooLarge(u32),
    #[error("non-canonical record {0}")]
    NonCanonical(IndexTuple),
    #[error("record {found} exceeds max degree {max_degree}")]
    RecordOutOfRange { found: IndexTuple, max_degree: u32 },
    #[error("out-of-order record {found}, expected {expected}")]
    OutOfOrder { found: IndexTuple, expected: IndexTuple },
    #[error("header declares {declared} records, table has {expected}")]
    RecordCount { declared: u64, expected: u64 },
    #[error("trailing data after the last record")]
    TrailingData,
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Shape(#[from] TableShapeError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(io::Error),
}

impl From<io::Error> for TableIoError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            TableIoError::Truncated
        } else {
            TableIoError::Io(e)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableHeader {
    pub format_version: u16,
    pub kind: IntegralKind,
    pub arity: Arity,
    pub max_degree: u16,
    pub record_count: u64,
}

fn kind_code(kind: IntegralKind) -> u8 {
    match kind {
        IntegralKind::W => 0,
        IntegralKind::Y => 1,
        IntegralKind::U => 2,
    }
}

impl TableHeader {
    fn new(kind: IntegralKind, max_degree: u32, record_count: u64) -> Result<Self, TableIoError> {
        let max_degree = u16::try_from(max_degree).map_err(|_| TableIoError::MaxDegreeTooLarge(max_degree))?;
        Ok(TableHeader {
            format_version: FORMAT_VERSION,
            kind,
            arity: kind.arity(),
            max_degree,
            record_count,
        })
    }

    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..4].copy_from_slice(&MAGIC);
        b[4..6].copy_from_slice(&self.format_version.to_le_bytes());
        b[6] = kind_code(self.kind);
        b[7] = self.arity.len() as u8;
        b[8..10].copy_from_slice(&self.max_degree.to_le_bytes());
        b[12..20].copy_from_slice(&self.record_count.to_le_bytes());
        b
    }

    pub fn decode(b: &[u8; HEADER_LEN]) -> Result<Self, TableIoError> {
        let magic: [u8; 4] = b[0..4].try_into().expect("4 bytes");
        if magic != MAGIC {
            return Err(TableIoError::BadMagic(magic));
        }
        let format_version = u16::from_le_bytes([b[4], b[5]]);
        if format_version != FORMAT_VERSION {
            return Err(TableIoError::VersionMismatch(format_version));
        }
        let kind = match b[6] {
            0 => IntegralKind::W,
            1 => IntegralKind::Y,
            2 => IntegralKind::U,
            c => return Err(TableIoError::UnknownKind(c)),
        };
        if usize::from(b[7]) != kind.arity().len() {
            return Err(TableIoError::ArityMismatch { kind, arity: b[7] });
        }
        if b[10] != 0 || b[11] != 0 {
            return Err(TableIoError::Reserved);
        }
        Ok(TableHeader {
            format_version,
            kind,
            arity: kind.arity(),
            max_degree: u16::from_le_bytes([b[8], b[9]]),
            record_count: u64::from_le_bytes(b[12..20].try_into().expect("8 bytes")),
        })
    }
}

/// Y values exported from a W table, one record per Y representative.
#[derive(Debug, Clone, PartialEq)]
pub struct YTable {
    max_degree: u32,
    records: Vec<([u32; 4], f64)>,
}

impl YTable {
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn records(&self) -> &[([u32; 4], f64)] {
        &self.records
    }
}

/// Y representatives `i > j`, `k > l`, `(i, j) >= (k, l)` of even level with
/// entries up to `max_degree`, in file order.
pub fn y_keys(max_degree: u32) -> Vec<[u32; 4]> {
    let mut pairs = Vec::new();
    for i in 0..=max_degree {
        for j in 0..i {
            pairs.push((i, j));
        }
    }
    let mut keys = Vec::new();
    for &(i, j) in &pairs {
        for &(k, l) in &pairs {
            if (i, j) >= (k, l) && (i + j + k + l) % 2 == 0 {
                keys.push([i, j, k, l]);
            }
        }
    }
    keys.sort_by(|a, b| {
        let la: u32 = a.iter().sum();
        let lb: u32 = b.iter().sum();
        la.cmp(&lb).then_with(|| b.cmp(a))
    });
    keys
}

/// Evaluates Y over every representative with entries up to `max_degree`,
/// which may not exceed the W table's.
pub fn export_y(w_table: &IntegralTable, max_degree: u32) -> Result<YTable, TableIoError> {
    let records = y_keys(max_degree)
        .into_iter()
        .map(|k| Ok((k, recursion::y_value(w_table, &IndexTuple::four(k))?.value)))
        .collect::<Result<Vec<_>, QueryError>>()?;
    Ok(YTable {
        max_degree,
        records,
    })
}

fn write_record<W: Write>(sink: &mut W, idx: &[u32], value: f64) -> io::Result<()> {
    let mut buf = [0u8; 2 * MAX_ARITY + 8];
    for (n, &i) in idx.iter().enumerate() {
        // max_degree already fits in u16, and so does every index
        buf[2 * n..2 * n + 2].copy_from_slice(&(i as u16).to_le_bytes());
    }
    let off = 2 * idx.len();
    buf[off..off + 8].copy_from_slice(&value.to_le_bytes());
    sink.write_all(&buf[..off + 8])
}

/// Writes a W or U table; returns the number of bytes written.
pub fn write_binary<W: Write>(table: &IntegralTable, sink: &mut W) -> Result<u64, TableIoError> {
    let header = TableHeader::new(table.kind(), table.max_degree(), table.record_count())?;
    let mut sink = io::BufWriter::new(sink);
    sink.write_all(&header.encode())?;
    for (t, v) in table.records() {
        write_record(&mut sink, t.as_slice(), v)?;
    }
    sink.flush()?;
    let arity = table.kind().arity().len() as u64;
    Ok(HEADER_LEN as u64 + table.record_count() * (2 * arity + 8))
}

pub fn write_y_binary<W: Write>(table: &YTable, sink: &mut W) -> Result<u64, TableIoError> {
    let header = TableHeader::new(IntegralKind::Y, table.max_degree, table.records.len() as u64)?;
    let mut sink = io::BufWriter::new(sink);
    sink.write_all(&header.encode())?;
    for (t, v) in &table.records {
        write_record(&mut sink, t, *v)?;
    }
    sink.flush()?;
    Ok(HEADER_LEN as u64 + table.records.len() as u64 * 16)
}

pub fn read_header<R: Read>(source: &mut R) -> Result<TableHeader, TableIoError> {
    let mut b = [0u8; HEADER_LEN];
    source.read_exact(&mut b)?;
    TableHeader::decode(&b)
}

fn read_record<R: Read>(source: &mut R, arity: Arity) -> Result<(IndexTuple, f64), TableIoError> {
    let n = arity.len();
    let mut buf = [0u8; 2 * MAX_ARITY + 8];
    source.read_exact(&mut buf[..2 * n + 8])?;
    let mut idx = [0u32; MAX_ARITY];
    for (k, slot) in idx.iter_mut().enumerate().take(n) {
        *slot = u32::from(u16::from_le_bytes([buf[2 * k], buf[2 * k + 1]]));
    }
    let value = f64::from_le_bytes(buf[2 * n..2 * n + 8].try_into().expect("8 bytes"));
    Ok((IndexTuple::new(&idx[..n]).expect("arity is 4 or 6"), value))
}

fn expect_end<R: Read>(source: &mut R) -> Result<(), TableIoError> {
    let mut probe = [0u8; 1];
    loop {
        match source.read(&mut probe) {
            Ok(0) => return Ok(()),
            Ok(_) => return Err(TableIoError::TrailingData),
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        }
    }
}

/// Reads a W or U table, validating structure and record order.
pub fn read_binary<R: Read>(source: R) -> Result<IntegralTable, TableIoError> {
    let mut source = io::BufReader::new(source);
    let header = read_header(&mut source)?;
    if header.kind == IntegralKind::Y {
        return Err(TableIoError::WrongKind {
            expected: IntegralKind::W,
            found: IntegralKind::Y,
        });
    }
    let m = u32::from(header.max_degree);
    let space = IndexSpace::new(header.arity, m);
    let expected_total = space.even_total();
    if header.record_count != expected_total {
        return Err(TableIoError::RecordCount {
            declared: header.record_count,
            expected: expected_total,
        });
    }
    let mut levels = Vec::new();
    for s in space.even_levels() {
        let keys = space.enumerate_level(s).expect("level in range").keys;
        let mut values = Vec::with_capacity(keys.len());
        for key in keys {
            let (t, v) = read_record(&mut source, header.arity)?;
            check_order(&t, key.sorted(), m, t.is_canonical())?;
            values.push(v);
        }
        levels.push(values);
    }
    expect_end(&mut source)?;
    Ok(IntegralTable::from_levels(header.kind, m, levels, GENERATOR_VERSION)?)
}

fn check_order(found: &IndexTuple, expected: &IndexTuple, max_degree: u32, canonical: bool) -> Result<(), TableIoError> {
    if !canonical {
        return Err(TableIoError::NonCanonical(*found));
    }
    if found.max_index() > max_degree {
        return Err(TableIoError::RecordOutOfRange {
            found: *found,
            max_degree,
        });
    }
    if found != expected {
        return Err(TableIoError::OutOfOrder {
            found: *found,
            expected: *expected,
        });
    }
    Ok(())
}

fn is_y_canonical(t: &IndexTuple) -> bool {
    let s = t.as_slice();
    s[0] > s[1] && s[2] > s[3] && (s[0], s[1]) >= (s[2], s[3])
}

pub fn read_y_binary<R: Read>(source: R) -> Result<YTable, TableIoError> {
    let mut source = io::BufReader::new(source);
    let header = read_header(&mut source)?;
    if header.kind != IntegralKind::Y {
        return Err(TableIoError::WrongKind {
            expected: IntegralKind::Y,
            found: header.kind,
        });
    }
    let m = u32::from(header.max_degree);
    let keys = y_keys(m);
    if header.record_count != keys.len() as u64 {
        return Err(TableIoError::RecordCount {
            declared: header.record_count,
            expected: keys.len() as u64,
        });
    }
    let mut records = Vec::with_capacity(keys.len());
    for key in keys {
        let (t, v) = read_record(&mut source, Arity::Four)?;
        check_order(&t, &IndexTuple::four(key), m, is_y_canonical(&t))?;
        records.push((key, v));
    }
    expect_end(&mut source)?;
    Ok(YTable { max_degree: m, records })
}

fn csv_header(arity: Arity) -> &'static str {
    match arity {
        Arity::Four => "i,j,k,l,value",
        Arity::Six => "i,j,k,l,m,n,value",
    }
}

fn write_csv_row<W: Write>(sink: &mut W, idx: &[u32], value: f64) -> io::Result<()> {
    for i in idx {
        write!(sink, "{i},")?;
    }
    writeln!(sink, "{value}")
}

pub fn write_csv<W: Write>(table: &IntegralTable, sink: &mut W) -> Result<(), TableIoError> {
    let mut sink = io::BufWriter::new(sink);
    writeln!(sink, "{}", csv_header(table.kind().arity()))?;
    for (t, v) in table.records() {
        write_csv_row(&mut sink, t.as_slice(), v)?;
    }
    sink.flush()?;
    Ok(())
}

pub fn write_y_csv<W: Write>(table: &YTable, sink: &mut W) -> Result<(), TableIoError> {
    let mut sink = io::BufWriter::new(sink);
    writeln!(sink, "{}", csv_header(Arity::Four))?;
    for (t, v) in &table.records {
        write_csv_row(&mut sink, t, *v)?;
    }
    sink.flush()?;
    Ok(())
}

/// Reads a W (four indices) or U (six indices) CSV export.
///
/// The max degree is taken from the last row, which is always the tuple
/// with every entry at the max degree.
pub fn read_csv<R: BufRead>(source: R) -> Result<IntegralTable, TableIoError> {
    let mut lines = source.lines();
    let header = lines.next().ok_or(TableIoError::Truncated)??;
    let arity = match header.trim() {
        h if h == csv_header(Arity::Four) => Arity::Four,
        h if h == csv_header(Arity::Six) => Arity::Six,
        other => {
            return Err(TableIoError::Csv {
                line: 1,
                message: format!("unexpected header {other:?}"),
            })
        }
    };
    let kind = match arity {
        Arity::Four => IntegralKind::W,
        Arity::Six => IntegralKind::U,
    };
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| TableIoError::Csv { line: n + 2, message };
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != arity.len() + 1 {
            return Err(bad(format!("expected {} fields, got {}", arity.len() + 1, fields.len())));
        }
        let idx = fields[..arity.len()]
            .iter()
            .map(|f| f.parse::<u32>().map_err(|e| bad(format!("index {f:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let value = fields[arity.len()]
            .parse::<f64>()
            .map_err(|e| bad(format!("value {:?}: {e}", fields[arity.len()])))?;
        rows.push((IndexTuple::new(&idx).expect("arity checked"), value));
    }
    let m = rows.last().map(|(t, _)| t.as_slice()[0]).ok_or(TableIoError::Truncated)?;
    let space = IndexSpace::new(arity, m);
    if rows.len() as u64 != space.even_total() {
        return Err(TableIoError::RecordCount {
            declared: rows.len() as u64,
            expected: space.even_total(),
        });
    }
    let mut rows = rows.into_iter();
    let mut levels = Vec::new();
    for s in space.even_levels() {
        let keys = space.enumerate_level(s).expect("level in range").keys;
        let mut values = Vec::with_capacity(keys.len());
        for key in keys {
            let (t, v) = rows.next().expect("count checked");
            check_order(&t, key.sorted(), m, t.is_canonical())?;
            values.push(v);
        }
        levels.push(values);
    }
    Ok(IntegralTable::from_levels(kind, m, levels, GENERATOR_VERSION)?)
}

/// Summary written next to (or instead of) the values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMeta {
    pub kind: String,
    pub arity: usize,
    pub max_degree: u32,
    pub record_count: u64,
    pub generator_version: String,
}

impl TableMeta {
    pub fn of(table: &IntegralTable) -> Self {
        TableMeta {
            kind: table.kind().to_string(),
            arity: table.kind().arity().len(),
            max_degree: table.max_degree(),
            record_count: table.record_count(),
            generator_version: table.generator_version().to_string(),
        }
    }

    pub fn of_y(table: &YTable) -> Self {
        TableMeta {
            kind: IntegralKind::Y.to_string(),
            arity: 4,
            max_degree: table.max_degree,
            record_count: table.records.len() as u64,
            generator_version: GENERATOR_VERSION.to_string(),
        }
    }
}

pub fn write_json_meta<W: Write>(table: &IntegralTable, sink: &mut W) -> Result<(), TableIoError> {
    write_meta(&TableMeta::of(table), sink)
}

pub fn write_meta<W: Write>(meta: &TableMeta, sink: &mut W) -> Result<(), TableIoError> {
    serde_json::to_writer_pretty(&mut *sink, meta)?;
    writeln!(sink)?;
    Ok(())
}

pub fn read_json_meta<R: Read>(source: R) -> Result<TableMeta, TableIoError> {
    Ok(serde_json::from_reader(source)?)
}

/// Loads a W or U table from either the binary or the CSV format,
/// recognized by the magic bytes.
pub fn load_table(path: &std::path::Path) -> Result<IntegralTable, TableIoError> {
    let bytes = std::fs::read(path).map_err(TableIoError::Io)?;
    if bytes.starts_with(&MAGIC) {
        read_binary(bytes.as_slice())
    } else {
        read_csv(bytes.as_slice())
    }
}
