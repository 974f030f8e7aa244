//! Digit words over `Σ_k = {0, …, k-1}` and overlapping occurrence counts.
//!
//! Words are stored most-significant digit first, i.e. in the order they are
//! written. `(0)_k` is the empty word, so that padding a pattern `v` with
//! `|v| - 1` zeros gives `#(v, 0) = 0` for every admissible `v`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported base; digits are written as single characters `0`..`9`.
pub const MAX_BASE: u8 = 10;

/// Checks `2 <= k <= 10`.
pub fn check_base(k: u8) -> Result<()> {
    if (2..=MAX_BASE).contains(&k) {
        Ok(())
    } else {
        Err(Error::InvalidBase(k))
    }
}

/// A finite word over `Σ_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    base: u8,
    digits: Vec<u8>,
}

impl Word {
    pub fn new(base: u8, digits: Vec<u8>) -> Result<Self> {
        check_base(base)?;
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::DigitOutOfRange { digit: d, base });
        }
        Ok(Word { base, digits })
    }

    /// The empty word `ε`.
    pub fn empty(base: u8) -> Self {
        Word {
            base,
            digits: Vec::new(),
        }
    }

    /// Builds a word without validation. Callers guarantee digits `< base`.
    pub(crate) fn from_digits_unchecked(base: u8, digits: Vec<u8>) -> Self {
        debug_assert!(digits.iter().all(|&d| d < base));
        Word { base, digits }
    }

    /// Parses a string of digit characters in base `k`.
    pub fn parse(s: &str, base: u8) -> Result<Self> {
        check_base(base)?;
        let digits = s
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if (d as u8) < base => Ok(d as u8),
                _ => Err(Error::Parse(format!(
                    "invalid digit {c:?} in word {s:?} for base {base}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { base, digits })
    }

    /// The `len`-digit expansion of `n mod k^len`, zero padded.
    pub fn with_length(n: u64, len: usize, base: u8) -> Self {
        let k = base as u64;
        let mut digits = vec![0u8; len];
        let mut n = n;
        for slot in digits.iter_mut().rev() {
            *slot = (n % k) as u8;
            n /= k;
        }
        Word { base, digits }
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// True when every digit is zero (including `ε`).
    pub fn is_all_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn first(&self) -> Option<u8> {
        self.digits.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.digits.last().copied()
    }

    /// `d·self`.
    pub fn prepend(&self, d: u8) -> Word {
        let mut digits = Vec::with_capacity(self.len() + 1);
        digits.push(d);
        digits.extend_from_slice(&self.digits);
        Word::from_digits_unchecked(self.base, digits)
    }

    /// `self·d`.
    pub fn append(&self, d: u8) -> Word {
        let mut digits = self.digits.clone();
        digits.push(d);
        Word::from_digits_unchecked(self.base, digits)
    }

    /// Drops the first digit; `ε` stays `ε`.
    pub fn tail(&self) -> Word {
        Word::from_digits_unchecked(self.base, self.digits.get(1..).unwrap_or(&[]).to_vec())
    }

    /// Drops the last digit; `ε` stays `ε`.
    pub fn init(&self) -> Word {
        let n = self.digits.len().saturating_sub(1);
        Word::from_digits_unchecked(self.base, self.digits[..n].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.base, other.base, "mixed-base concatenation");
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Word::from_digits_unchecked(self.base, digits)
    }

    /// `[w]_k`; leading zeros are ignored. Panics on `u64` overflow.
    pub fn value(&self) -> u64 {
        let k = self.base as u64;
        self.digits.iter().fold(0u64, |acc, &d| {
            acc.checked_mul(k)
                .and_then(|x| x.checked_add(d as u64))
                .expect("word value overflows u64")
        })
    }

    /// Words are ordered by length first, then lexicographically.
    fn shortlex(&self, other: &Word) -> Ordering {
        self.base
            .cmp(&other.base)
            .then(self.digits.len().cmp(&other.digits.len()))
            .then_with(|| self.digits.cmp(&other.digits))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex(other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// `(n)_k` without leading zeros; `(0)_k = ε`.
pub fn expand(n: u64, base: u8) -> Word {
    let k = base as u64;
    let mut digits = Vec::new();
    let mut n = n;
    while n > 0 {
        digits.push((n % k) as u8);
        n /= k;
    }
    digits.reverse();
    Word::from_digits_unchecked(base, digits)
}

/// `[w]_k`.
pub fn value_of(w: &Word) -> u64 {
    w.value()
}

/// Number of factorizations `w = x v y`, overlaps included.
pub fn count_occurrences(v: &Word, w: &Word) -> u64 {
    assert_eq!(v.base, w.base, "mixed-base occurrence count");
    count_digits(&v.digits, &w.digits)
}

fn count_digits(v: &[u8], w: &[u8]) -> u64 {
    if v.len() > w.len() {
        return 0;
    }
    if v.is_empty() {
        return w.len() as u64 + 1;
    }
    w.windows(v.len()).filter(|win| *win == v).count() as u64
}

/// `#(v, n)`: occurrences of `v` in `0^{|v|-1} (n)_k`.
pub fn count_in_integer(v: &Word, n: u64) -> Result<u64> {
    if v.is_all_zero() {
        return Err(Error::AllZeroPattern(v.to_string()));
    }
    Ok(count_padded(v, n))
}

/// As [`count_in_integer`] for a pattern already known to be admissible.
pub(crate) fn count_padded(v: &Word, n: u64) -> u64 {
    let k = v.base as u64;
    let mut padded = vec![0u8; v.len().saturating_sub(1)];
    let mut tmp = Vec::new();
    let mut n = n;
    while n > 0 {
        tmp.push((n % k) as u8);
        n /= k;
    }
    padded.extend(tmp.iter().rev());
    count_digits(&v.digits, &padded)
}
