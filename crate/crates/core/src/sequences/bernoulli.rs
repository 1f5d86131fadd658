//! Bernoulli numbers via the defining recurrence, with an append-only cache
//! and optional on-disk persistence.
//!
//! The cache supports a single-writer warm-up phase ([`BernoulliCache::ensure_through`])
//! followed by concurrent read-only access through [`BernoulliCache::get`];
//! callers must not interleave writes with parallel reads.

use crate::arith::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("entries are not a contiguous run 0..={max} (missing index {missing})")]
    NonContiguous { max: usize, missing: usize },
    #[error("stored B_{index} fails the defining recurrence")]
    Validation { index: usize },
}

/// Append-only table of Bernoulli numbers B_0, B_1, ....
#[derive(Debug, Clone, Default)]
pub struct BernoulliCache {
    table: Vec<Rational>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache { table: Vec::new() }
    }

    /// Number of cached entries (indices 0..len).
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Read-only lookup; `None` when the cache has not been warmed that far.
    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.table.get(n)
    }

    /// Extend the table so indices 0..=n are present.
    pub fn ensure_through(&mut self, n: usize) {
        while self.table.len() <= n {
            let next = self.compute_next();
            self.table.push(next);
        }
    }

    /// B_n for n = len, from B_n = -(1/(n+1)) sum_{j<n} C(n+1, j) B_j, with
    /// the odd-index short-circuit for n >= 3.
    fn compute_next(&self) -> Rational {
        let n = self.table.len();
        match n {
            0 => return Rational::one(),
            1 => return Rational::new(BigInt::from(-1), BigInt::from(2)),
            _ if n % 2 == 1 => return Rational::zero(),
            _ => {}
        }
        let sum = recurrence_sum(&self.table, n, n - 1);
        -sum / Rational::from_integer(BigInt::from(n as u64 + 1))
    }

    /// Write the table as lines `n<TAB>numerator/denominator`.
    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let mut out = fs::File::create(path)?;
        for (n, b) in self.table.iter().enumerate() {
            writeln!(out, "{n}\t{b}")?;
        }
        Ok(())
    }

    /// Load a table written by [`save`](Self::save). Entries must form a
    /// contiguous run from index 0 and every entry is re-validated against
    /// the defining recurrence.
    pub fn load(path: &Path) -> Result<Self, CacheError> {
        let text = fs::read_to_string(path)?;
        let mut entries: Vec<(usize, Rational)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let (idx, val) = line.split_once('\t').ok_or_else(|| CacheError::Parse {
                line: i + 1,
                msg: "expected `n<TAB>numerator/denominator`".into(),
            })?;
            let n: usize = idx.trim().parse().map_err(|e| CacheError::Parse {
                line: i + 1,
                msg: format!("bad index: {e}"),
            })?;
            let b = Rational::from_str(val.trim()).map_err(|e| CacheError::Parse {
                line: i + 1,
                msg: format!("bad rational: {e}"),
            })?;
            entries.push((n, b));
        }
        entries.sort_by_key(|(n, _)| *n);
        let mut table = Vec::with_capacity(entries.len());
        for (expect, (n, b)) in entries.into_iter().enumerate() {
            if n != expect {
                return Err(CacheError::NonContiguous { max: n, missing: expect });
            }
            table.push(b);
        }
        Self::validate(&table)?;
        Ok(BernoulliCache { table })
    }

    /// Recurrence check: sum_{j<=n} C(n+1, j) B_j = 0 for every n >= 1, plus
    /// the fixed base values.
    fn validate(table: &[Rational]) -> Result<(), CacheError> {
        if let Some(b0) = table.first() {
            if !b0.is_one() {
                return Err(CacheError::Validation { index: 0 });
            }
        }
        if let Some(b1) = table.get(1) {
            if *b1 != Rational::new(BigInt::from(-1), BigInt::from(2)) {
                return Err(CacheError::Validation { index: 1 });
            }
        }
        for n in 1..table.len() {
            if !recurrence_sum(table, n, n).is_zero() {
                return Err(CacheError::Validation { index: n });
            }
        }
        Ok(())
    }
}

/// sum_{j=0}^{hi} C(n+1, j) B_j, exact. Terms accumulate over a running
/// common denominator (small and squarefree by von Staudt-Clausen), so the
/// only full reduction happens once, in the final `Ratio::new`.
fn recurrence_sum(table: &[Rational], n: usize, hi: usize) -> Rational {
    use num_integer::Integer as _;
    let mut binom = BigInt::one(); // C(n+1, j)
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (j, b) in table.iter().enumerate().take(hi + 1) {
        if j > 0 {
            binom = binom * BigInt::from(n as u64 + 1 - j as u64 + 1) / BigInt::from(j as u64);
        }
        if b.is_zero() {
            continue;
        }
        let g = den.gcd(b.denom());
        let scale = b.denom() / &g;
        num = num * &scale + &binom * b.numer() * (&den / &g);
        den *= scale;
    }
    Rational::new(num, den)
}

/// Exact B_n, memoized in `cache`.
pub fn bernoulli(n: usize, cache: &mut BernoulliCache) -> Rational {
    cache.ensure_through(n);
    cache.get(n).expect("just ensured").clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn small_values() {
        let mut cache = BernoulliCache::new();
        assert_eq!(bernoulli(0, &mut cache), Rational::one());
        assert_eq!(bernoulli(1, &mut cache), rat(-1, 2));
        assert_eq!(bernoulli(2, &mut cache), rat(1, 6));
        assert_eq!(bernoulli(4, &mut cache), rat(-1, 30));
        assert_eq!(bernoulli(6, &mut cache), rat(1, 42));
        assert_eq!(bernoulli(8, &mut cache), rat(-1, 30));
        assert_eq!(bernoulli(10, &mut cache), rat(5, 66));
        assert_eq!(bernoulli(12, &mut cache), rat(-691, 2730));
    }

    #[test]
    fn odd_indices_vanish() {
        let mut cache = BernoulliCache::new();
        cache.ensure_through(101);
        for n in (3..=101).step_by(2) {
            assert!(cache.get(n).unwrap().is_zero(), "B_{n}");
        }
    }

    #[test]
    fn stored_entries_satisfy_recurrence() {
        let mut cache = BernoulliCache::new();
        cache.ensure_through(60);
        BernoulliCache::validate(&cache.table).unwrap();
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bernoulli.tsv");
        let mut cache = BernoulliCache::new();
        cache.ensure_through(40);
        cache.save(&path).unwrap();
        let loaded = BernoulliCache::load(&path).unwrap();
        assert_eq!(loaded.len(), 41);
        for n in 0..=40 {
            assert_eq!(loaded.get(n), cache.get(n), "B_{n}");
        }
    }

    #[test]
    fn load_rejects_tampered_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.tsv");
        let mut cache = BernoulliCache::new();
        cache.ensure_through(10);
        cache.table[10] = rat(5, 67); // corrupt B_10
        cache.save(&path).unwrap();
        assert!(matches!(
            BernoulliCache::load(&path).unwrap_err(),
            CacheError::Validation { index: 10 }
        ));
    }

    #[test]
    fn load_rejects_gaps() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gap.tsv");
        fs::write(&path, "0\t1\n2\t1/6\n").unwrap();
        assert!(matches!(BernoulliCache::load(&path).unwrap_err(), CacheError::NonContiguous { .. }));
    }

    #[test]
    fn load_rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("garbage.tsv");
        fs::write(&path, "zero\tone\n").unwrap();
        assert!(matches!(BernoulliCache::load(&path).unwrap_err(), CacheError::Parse { line: 1, .. }));
    }
}
