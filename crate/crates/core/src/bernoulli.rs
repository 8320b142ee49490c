//! Bernoulli numbers from the recurrence
//! `B_n = -1/(n+1) * sum_{i=0}^{n-1} C(n+1, i) B_i`, `B_0 = 1`,
//! memoized in a grow-only table that can be persisted to disk.
//!
//! With this convention `B_1 = -1/2`. Odd indices above 1 go through the
//! recurrence like every other index; they come out zero.

use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{binomial_row, lcm_all, ExactRational};

/// Number of top entries whose recurrence residual is re-checked on load.
const LOAD_CHECK_DEPTH: usize = 3;

/// Memo table `B_0, B_1, ..., B_m`, contiguous from index 0.
///
/// Readers see completed prefixes; extension happens under a write lock, so
/// concurrent callers observe the same sequence a single writer would build.
#[derive(Debug)]
pub struct BernoulliCache {
    values: RwLock<Vec<ExactRational>>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl Clone for BernoulliCache {
    fn clone(&self) -> Self {
        BernoulliCache {
            values: RwLock::new(self.snapshot()),
        }
    }
}

impl BernoulliCache {
    /// A cache holding only `B_0 = 1`.
    pub fn new() -> Self {
        BernoulliCache {
            values: RwLock::new(vec![ExactRational::one()]),
        }
    }

    /// Number of stored entries (always at least 1).
    pub fn len(&self) -> usize {
        self.read().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Copy of every stored entry.
    pub fn snapshot(&self) -> Vec<ExactRational> {
        self.read().clone()
    }

    /// `B_n`, extending the table through index `n` if needed.
    pub fn get(&self, n: usize) -> ExactRational {
        if let Some(b) = self.read().get(n) {
            return b.clone();
        }
        self.ensure(n);
        self.read()[n].clone()
    }

    /// `[B_0, ..., B_max]`.
    pub fn range(&self, max: usize) -> Vec<ExactRational> {
        self.ensure(max);
        self.read()[..=max].to_vec()
    }

    /// Makes sure indices `0..=n` are present.
    pub fn ensure(&self, n: usize) {
        if self.read().len() > n {
            return;
        }
        let mut values = self.values.write().unwrap_or_else(|e| e.into_inner());
        while values.len() <= n {
            let next = next_bernoulli(&values);
            values.push(next);
        }
    }

    fn read(&self) -> std::sync::RwLockReadGuard<'_, Vec<ExactRational>> {
        self.values.read().unwrap_or_else(|e| e.into_inner())
    }

    /// Writes one `<index> <num>/<den>` line per entry.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (i, b) in self.read().iter().enumerate() {
            writeln!(w, "{i} {b}")?;
        }
        w.flush()
    }

    /// Parses the line format written by [`write_to`](Self::write_to).
    ///
    /// Rejects gaps, non-canonical fractions, a wrong `B_0`, and tables whose
    /// top entries fail the recurrence identity. `origin` is only used in
    /// error messages.
    pub fn read_from<R: Read>(r: R, origin: &Path) -> Result<Self> {
        let corrupt = |line: usize, reason: String| Error::CorruptCache {
            path: origin.to_path_buf(),
            line,
            reason,
        };
        let mut values = Vec::new();
        for (lineno, line) in BufReader::new(r).lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(corrupt(
                    lineno,
                    format!("expected `<index> <num>/<den>`, got {line:?}"),
                ));
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| corrupt(lineno, format!("bad index {idx:?}")))?;
            if idx != values.len() {
                return Err(corrupt(
                    lineno,
                    format!("index {idx} out of sequence, expected {}", values.len()),
                ));
            }
            let value: ExactRational = val
                .parse()
                .map_err(|e| corrupt(lineno, format!("bad value {val:?}: {e}")))?;
            if value.to_string() != val {
                return Err(corrupt(
                    lineno,
                    format!("value {val:?} is not in lowest terms"),
                ));
            }
            values.push(value);
        }
        match values.first() {
            None => return Err(corrupt(0, "no entries".into())),
            Some(b0) if !b0.is_one() => {
                return Err(corrupt(1, format!("B_0 is {b0}, expected 1/1")))
            }
            _ => {}
        }
        let top = values.len() - 1;
        for n in top.saturating_sub(LOAD_CHECK_DEPTH - 1).max(1)..=top {
            let residual = residual_of(&values, n);
            if !residual.is_zero() {
                return Err(corrupt(
                    n + 1,
                    format!("recurrence residual at index {n} is {residual}, expected 0"),
                ));
            }
        }
        Ok(BernoulliCache {
            values: RwLock::new(values),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::read_from(fs::File::open(path)?, path)
    }

    /// Loads `path` if it exists, otherwise starts fresh.
    pub fn load_or_new(path: impl AsRef<Path>) -> Result<Self> {
        match fs::File::open(path.as_ref()) {
            Ok(f) => Self::read_from(f, path.as_ref()),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes atomically: a sibling temp file is renamed over `path`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut tmp = PathBuf::from(path);
        tmp.as_mut_os_string().push(".tmp");
        self.write_to(BufWriter::new(fs::File::create(&tmp)?))?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// One step of the recurrence, given `B_0..B_{n-1}` with `n = values.len()`.
///
/// The sum is carried as a single integer numerator over the lcm of the
/// known denominators; one reduction happens at the end.
fn next_bernoulli(values: &[ExactRational]) -> ExactRational {
    let n = values.len() as u64;
    let row = binomial_row(n + 1);
    let common = lcm_all(values.iter().map(ExactRational::denom));
    let mut acc = BigInt::zero();
    for (b, c) in values.iter().zip(&row) {
        if b.is_zero() {
            continue;
        }
        let scale = common.div_floor(b.denom());
        acc += c * b.numer() * scale;
    }
    ExactRational::new(-acc, common * BigInt::from(n + 1))
        .expect("denominator is a product of positive integers")
}

/// `sum_{i=0}^{n} C(n+1, i) B_i`, by plain rational summation.
fn residual_of(values: &[ExactRational], n: usize) -> ExactRational {
    let row = binomial_row(n as u64 + 1);
    values[..=n]
        .iter()
        .zip(row)
        .map(|(b, c)| ExactRational::from(c) * b)
        .sum()
}

/// `B_n`.
pub fn bernoulli(n: usize, cache: &BernoulliCache) -> ExactRational {
    cache.get(n)
}

/// `[B_0, ..., B_max]`.
pub fn bernoulli_range(max: usize, cache: &BernoulliCache) -> Vec<ExactRational> {
    cache.range(max)
}

/// `sum_{i=0}^{n} C(n+1, i) B_i`, which vanishes for every `n >= 1`.
///
/// `n = 0` is a domain error: the sum is just `B_0 = 1`.
pub fn recurrence_residual(n: usize, cache: &BernoulliCache) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::domain(
            "recurrence identity needs n >= 1 (at n = 0 the sum is B_0 = 1)",
        ));
    }
    cache.ensure(n);
    Ok(residual_of(&cache.read(), n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn first_values() {
        let cache = BernoulliCache::new();
        assert_eq!(bernoulli(0, &cache), q("1/1"));
        assert_eq!(bernoulli(1, &cache), q("-1/2"));
        assert_eq!(bernoulli(3, &cache), q("0/1"));
        assert_eq!(bernoulli(12, &cache), q("-691/2730"));
        assert_eq!(bernoulli(24, &cache), q("-236364091/2730"));
    }

    #[test]
    fn range_examples() {
        let cache = BernoulliCache::new();
        assert_eq!(bernoulli_range(0, &cache), vec![q("1")]);
        assert_eq!(
            bernoulli_range(2, &cache),
            vec![q("1"), q("-1/2"), q("1/6")]
        );
        assert_eq!(bernoulli_range(14, &cache)[14], q("7/6"));
    }

    #[test]
    fn cache_grows_contiguously_and_is_stable() {
        let cache = BernoulliCache::new();
        assert_eq!(cache.len(), 1);
        let b10 = cache.get(10);
        assert_eq!(cache.len(), 11);
        cache.get(4);
        assert_eq!(cache.len(), 11);
        assert_eq!(cache.get(10), b10);
    }

    #[test]
    fn residual_zero_and_domain() {
        let cache = BernoulliCache::new();
        for n in [1, 5, 40] {
            assert!(recurrence_residual(n, &cache).unwrap().is_zero(), "n = {n}");
        }
        assert!(matches!(
            recurrence_residual(0, &cache),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn even_sign_pattern() {
        let cache = BernoulliCache::new();
        for m in 1..=50usize {
            let b = cache.get(2 * m);
            assert_eq!(b.is_negative(), m % 2 == 0, "B_{}", 2 * m);
            assert!(!b.is_zero());
        }
    }

    #[test]
    fn round_trip_through_text() {
        let cache = BernoulliCache::new();
        cache.ensure(30);
        let mut buf = Vec::new();
        cache.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("0 1/1\n1 -1/2\n2 1/6\n3 0/1\n"));
        let back = BernoulliCache::read_from(&buf[..], Path::new("mem")).unwrap();
        assert_eq!(back.snapshot(), cache.snapshot());
    }

    fn load(text: &str) -> Result<BernoulliCache> {
        BernoulliCache::read_from(text.as_bytes(), Path::new("mem"))
    }

    #[test]
    fn loader_rejects_corruption() {
        let bad = [
            "",
            "0 1/2\n",
            "0 1/1\n2 1/6\n",
            "0 1/1\n1 -2/4\n",
            "0 1/1\n1 -1/2 extra\n",
            "0 1/1\n1 -1/x\n",
            "0 1/1\n1 -1/2\n2 1/7\n",
            "0 1/1\n1 1/2\n",
        ];
        for text in bad {
            assert!(
                matches!(load(text), Err(Error::CorruptCache { .. })),
                "accepted {text:?}"
            );
        }
        assert_eq!(load("0 1/1\n").unwrap().len(), 1);
        assert_eq!(load("0 1/1\n1 -1/2\n2 1/6\n").unwrap().len(), 3);
    }

    #[test]
    fn concurrent_extension_is_deterministic() {
        let shared = BernoulliCache::new();
        std::thread::scope(|s| {
            for t in 0..4 {
                let shared = &shared;
                s.spawn(move || {
                    for n in (0..60).rev().step_by(t + 1) {
                        shared.get(n);
                    }
                });
            }
        });
        let fresh = BernoulliCache::new();
        assert_eq!(shared.snapshot(), fresh.range(59));
    }
}
