//! Index-tuple algebra for symmetric integral tables.
//!
//! Every integral handled by this crate is symmetric under permutations of
//! its degree indices, so tables store one value per multiset. A multiset is
//! represented by its non-increasing sort (the [`CanonicalKey`]); keys of the
//! same level (index sum) are enumerated in lexicographically decreasing
//! order and addressed by their position in that enumeration.
//!
//! Ranks are computed by counting with a precomputed partition table, so
//! looking a key up is `O(arity)` and needs no hashing:
//!
//! ```
//! use hpint::index::{canonicalize, IndexSpace, IndexTuple, Arity};
//!
//! let space = IndexSpace::new(Arity::Four, 2);
//! let key = canonicalize(&IndexTuple::four([0, 1, 1, 0]));
//! assert_eq!(key.sorted().as_slice(), &[1, 1, 0, 0]);
//! assert_eq!(space.rank(&key).unwrap(), 1);
//! ```

use std::fmt;

use thiserror::Error;

/// Largest supported tuple length.
pub const MAX_ARITY: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("index tuples must have 4 or 6 entries, got {0}")]
    BadLength(usize),
    #[error("{kind} integrals take {expected} indices, got {got}")]
    ArityMismatch {
        kind: IntegralKind,
        expected: usize,
        got: usize,
    },
    #[error("level {level} is outside 0..={max} for arity {arity} and max degree {max_degree}")]
    LevelOutOfRange {
        arity: usize,
        level: u32,
        max: u32,
        max_degree: u32,
    },
    #[error("rank {rank} out of range: level {level} has {count} keys")]
    RankOutOfRange { rank: u64, level: u32, count: u64 },
    #[error("index {index} in {tuple} exceeds max degree {max_degree}")]
    IndexExceedsMaxDegree {
        tuple: IndexTuple,
        index: u32,
        max_degree: u32,
    },
}

/// The three integral families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralKind {
    /// Four Hermite polynomials under `exp(-2x^2)`.
    W,
    /// Wronskian-like brackets of two pairs under `exp(-2x^2)`.
    Y,
    /// Six Hermite polynomials under `exp(-3x^2)`.
    U,
}

impl IntegralKind {
    pub fn arity(self) -> Arity {
        match self {
            IntegralKind::W | IntegralKind::Y => Arity::Four,
            IntegralKind::U => Arity::Six,
        }
    }
}

impl fmt::Display for IntegralKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IntegralKind::W => "W",
            IntegralKind::Y => "Y",
            IntegralKind::U => "U",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    Four,
    Six,
}

impl Arity {
    pub const fn len(self) -> usize {
        match self {
            Arity::Four => 4,
            Arity::Six => 6,
        }
    }

    pub fn from_len(len: usize) -> Result<Self, IndexError> {
        match len {
            4 => Ok(Arity::Four),
            6 => Ok(Arity::Six),
            n => Err(IndexError::BadLength(n)),
        }
    }
}

/// Degree multi-index of an integral, four or six non-negative entries.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexTuple {
    arity: Arity,
    idx: [u32; MAX_ARITY],
}

impl IndexTuple {
    pub fn new(indices: &[u32]) -> Result<Self, IndexError> {
        let arity = Arity::from_len(indices.len())?;
        let mut idx = [0; MAX_ARITY];
        idx[..indices.len()].copy_from_slice(indices);
        Ok(IndexTuple { arity, idx })
    }

    pub fn four(indices: [u32; 4]) -> Self {
        let mut idx = [0; MAX_ARITY];
        idx[..4].copy_from_slice(&indices);
        IndexTuple {
            arity: Arity::Four,
            idx,
        }
    }

    pub fn six(indices: [u32; 6]) -> Self {
        IndexTuple {
            arity: Arity::Six,
            idx: indices,
        }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.idx[..self.arity.len()]
    }

    /// Sum of the entries.
    pub fn level(&self) -> u32 {
        self.as_slice().iter().sum()
    }

    pub fn max_index(&self) -> u32 {
        self.as_slice().iter().copied().max().unwrap_or(0)
    }

    /// True when the entries are in non-increasing order.
    pub fn is_canonical(&self) -> bool {
        self.as_slice().windows(2).all(|w| w[0] >= w[1])
    }

    fn sorted_desc(mut self) -> Self {
        let n = self.arity.len();
        self.idx[..n].sort_unstable_by(|a, b| b.cmp(a));
        self
    }
}

impl fmt::Debug for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (n, v) in self.as_slice().iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Non-increasing representative of a permutation class.
///
/// The rank of a key depends on the table's max degree and is obtained from
/// [`IndexSpace::rank`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    sorted: IndexTuple,
}

impl CanonicalKey {
    pub fn sorted(&self) -> &IndexTuple {
        &self.sorted
    }

    pub fn level(&self) -> u32 {
        self.sorted.level()
    }

    pub fn arity(&self) -> Arity {
        self.sorted.arity
    }
}

pub fn canonicalize(t: &IndexTuple) -> CanonicalKey {
    CanonicalKey {
        sorted: t.sorted_desc(),
    }
}

/// Selection-rule filter: `false` means the integral vanishes by symmetry.
///
/// A `true` result is only a necessary condition; accidental zeros such as
/// `U(2,1,1,0,0,0)` pass the filter.
pub fn parity_nonzero(kind: IntegralKind, t: &IndexTuple) -> Result<bool, IndexError> {
    check_arity(kind, t)?;
    if t.level() % 2 == 1 {
        return Ok(false);
    }
    if kind == IntegralKind::Y {
        let s = t.as_slice();
        return Ok(s[0] != s[1] && s[2] != s[3]);
    }
    Ok(true)
}

pub(crate) fn check_arity(kind: IntegralKind, t: &IndexTuple) -> Result<(), IndexError> {
    if kind.arity() != t.arity() {
        return Err(IndexError::ArityMismatch {
            kind,
            expected: kind.arity().len(),
            got: t.arity().len(),
        });
    }
    Ok(())
}

/// All canonical keys of one level, in rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelIndexSet {
    pub arity: Arity,
    pub level: u32,
    pub max_degree: u32,
    pub keys: Vec<CanonicalKey>,
}

/// Partition-count table for one `(arity, max_degree)` pair.
///
/// `count(parts, sum, cap)` is the number of non-increasing tuples of length
/// `parts` with entries in `0..=cap` summing to `sum`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSpace {
    arity: Arity,
    max_degree: u32,
    counts: Vec<u64>,
}

impl IndexSpace {
    pub fn new(arity: Arity, max_degree: u32) -> Self {
        let parts = arity.len();
        let sums = parts * max_degree as usize + 1;
        let caps = max_degree as usize + 1;
        let mut counts = vec![0u64; (parts + 1) * sums * caps];
        let at = |k: usize, s: usize, m: usize| (k * sums + s) * caps + m;
        for k in 0..=parts {
            for s in 0..sums {
                for m in 0..caps {
                    let v = if k == 0 || m == 0 {
                        u64::from(s == 0)
                    } else {
                        // largest entry is either below m or exactly m
                        let below = counts[at(k, s, m - 1)];
                        let exact = if s >= m { counts[at(k - 1, s - m, m)] } else { 0 };
                        below + exact
                    };
                    counts[at(k, s, m)] = v;
                }
            }
        }
        IndexSpace {
            arity,
            max_degree,
            counts,
        }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn max_level(&self) -> u32 {
        self.arity.len() as u32 * self.max_degree
    }

    #[inline]
    fn partitions(&self, parts: usize, sum: u32, cap: u32) -> u64 {
        let sums = self.arity.len() * self.max_degree as usize + 1;
        let caps = self.max_degree as usize + 1;
        self.counts[(parts * sums + sum as usize) * caps + cap as usize]
    }

    /// Number of canonical keys at `level` (zero outside the valid range).
    pub fn count(&self, level: u32) -> u64 {
        if level > self.max_level() {
            return 0;
        }
        self.partitions(self.arity.len(), level, self.max_degree)
    }

    /// Even levels `0, 2, ..., arity * max_degree`.
    pub fn even_levels(&self) -> impl Iterator<Item = u32> {
        (0..=self.max_level()).step_by(2)
    }

    /// Number of canonical keys over all even levels.
    pub fn even_total(&self) -> u64 {
        self.even_levels().map(|s| self.count(s)).sum()
    }

    fn check_level(&self, level: u32) -> Result<(), IndexError> {
        if level > self.max_level() {
            return Err(IndexError::LevelOutOfRange {
                arity: self.arity.len(),
                level,
                max: self.max_level(),
                max_degree: self.max_degree,
            });
        }
        Ok(())
    }

    /// Position of `key` within its level.
    pub fn rank(&self, key: &CanonicalKey) -> Result<u64, IndexError> {
        let t = key.sorted();
        check_arity_len(self.arity, t)?;
        let max = t.max_index();
        if max > self.max_degree {
            return Err(IndexError::IndexExceedsMaxDegree {
                tuple: *t,
                index: max,
                max_degree: self.max_degree,
            });
        }
        Ok(self.rank_sorted(t.as_slice()))
    }

    /// Rank of a slice already known to be non-increasing with entries
    /// `<= max_degree`.
    #[inline]
    pub(crate) fn rank_sorted(&self, sorted: &[u32]) -> u64 {
        let n = sorted.len();
        let mut remaining: u32 = sorted.iter().sum();
        let mut cap = self.max_degree;
        let mut rank = 0;
        for (pos, &v) in sorted.iter().enumerate() {
            let parts = n - pos;
            // keys whose entry at `pos` exceeds v come first
            rank += self.partitions(parts, remaining, cap) - self.partitions(parts, remaining, v);
            remaining -= v;
            cap = v;
        }
        rank
    }

    pub fn unrank(&self, level: u32, rank: u64) -> Result<CanonicalKey, IndexError> {
        self.check_level(level)?;
        let count = self.count(level);
        if rank >= count {
            return Err(IndexError::RankOutOfRange { rank, level, count });
        }
        let n = self.arity.len();
        let mut idx = [0u32; MAX_ARITY];
        let mut remaining = level;
        let mut cap = self.max_degree;
        let mut r = rank;
        for (pos, slot) in idx.iter_mut().enumerate().take(n) {
            let rest = n - pos - 1;
            let mut v = cap.min(remaining);
            loop {
                let block = self.partitions(rest, remaining - v, v);
                if r < block {
                    break;
                }
                r -= block;
                v -= 1;
            }
            *slot = v;
            remaining -= v;
            cap = v;
        }
        Ok(CanonicalKey {
            sorted: IndexTuple {
                arity: self.arity,
                idx,
            },
        })
    }

    pub fn enumerate_level(&self, level: u32) -> Result<LevelIndexSet, IndexError> {
        self.check_level(level)?;
        let mut keys = Vec::with_capacity(self.count(level) as usize);
        let mut idx = [0u32; MAX_ARITY];
        self.fill(&mut idx, 0, level, self.max_degree, &mut keys);
        Ok(LevelIndexSet {
            arity: self.arity,
            level,
            max_degree: self.max_degree,
            keys,
        })
    }

    fn fill(
        &self,
        idx: &mut [u32; MAX_ARITY],
        pos: usize,
        remaining: u32,
        cap: u32,
        out: &mut Vec<CanonicalKey>,
    ) {
        let n = self.arity.len();
        if pos == n {
            if remaining == 0 {
                out.push(CanonicalKey {
                    sorted: IndexTuple {
                        arity: self.arity,
                        idx: *idx,
                    },
                });
            }
            return;
        }
        let parts = (n - pos) as u32;
        let hi = cap.min(remaining);
        // the remaining entries are at most v each
        let lo = remaining.div_ceil(parts);
        for v in (lo..=hi).rev() {
            idx[pos] = v;
            self.fill(idx, pos + 1, remaining - v, v, out);
        }
        idx[pos] = 0;
    }
}

fn check_arity_len(arity: Arity, t: &IndexTuple) -> Result<(), IndexError> {
    if t.arity() != arity {
        return Err(IndexError::BadLength(t.arity().len()));
    }
    Ok(())
}

pub fn enumerate_level(arity: Arity, level: u32, max_degree: u32) -> Result<LevelIndexSet, IndexError> {
    IndexSpace::new(arity, max_degree).enumerate_level(level)
}

pub fn rank(key: &CanonicalKey, max_degree: u32) -> Result<u64, IndexError> {
    IndexSpace::new(key.arity(), max_degree).rank(key)
}

pub fn unrank(arity: Arity, level: u32, max_degree: u32, rank: u64) -> Result<CanonicalKey, IndexError> {
    IndexSpace::new(arity, max_degree).unrank(level, rank)
}
