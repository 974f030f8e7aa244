//! Admissible pattern sets and the sequences `a_A(n) = (-1)^{#(A,n)}` they
//! define.
//!
//! A sequence has many pattern-set representations. Two canonical ones are
//! unique: the form without leading zeros ([`PatternSet::remove_leading_zeros`])
//! and the form of constant length `ℓ` ([`PatternSet::to_constant_length`]).
//! The constant-length form is the same data as the periodic factor
//! `h(n) = a(n)/a(⌊n/k⌋)`: `h(r) = -1` exactly when the `ℓ`-digit word of `r`
//! is a member.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{check_base, count_padded, Word};

/// `k^e`. Panics on overflow.
pub fn pow(k: u8, e: usize) -> usize {
    (k as usize)
        .checked_pow(e as u32)
        .expect("k^e overflows usize")
}

/// A finite set of words over `Σ_k`, none of them all-zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PatternSet {
    base: u8,
    words: BTreeSet<Word>,
}

impl PatternSet {
    pub fn empty(base: u8) -> Self {
        PatternSet {
            base,
            words: BTreeSet::new(),
        }
    }

    pub fn new<I: IntoIterator<Item = Word>>(base: u8, words: I) -> Result<Self> {
        check_base(base)?;
        let mut set = BTreeSet::new();
        for w in words {
            if w.base() != base {
                return Err(Error::MixedBase(base, w.base()));
            }
            if w.is_all_zero() {
                return Err(Error::AllZeroPattern(w.to_string()));
            }
            set.insert(w);
        }
        Ok(PatternSet { base, words: set })
    }

    fn from_set(base: u8, words: BTreeSet<Word>) -> Self {
        debug_assert!(words.iter().all(|w| !w.is_all_zero() && w.base() == base));
        PatternSet { base, words }
    }

    /// Parses `"0101,11"`; the empty string is `∅`. Repeated words are
    /// rejected since a set cannot hold them.
    pub fn parse(s: &str, base: u8) -> Result<Self> {
        check_base(base)?;
        let s = s.trim();
        let mut set = BTreeSet::new();
        if s.is_empty() {
            return Ok(PatternSet::empty(base));
        }
        for part in s.split(',') {
            let w = Word::parse(part.trim(), base)?;
            if w.is_all_zero() {
                return Err(Error::AllZeroPattern(w.to_string()));
            }
            if !set.insert(w) {
                return Err(Error::Parse(format!("pattern {:?} repeated", part.trim())));
            }
        }
        Ok(PatternSet::from_set(base, set))
    }

    /// The subset of `Σ_k^len \ {0^len}` whose members have values given by
    /// the set bits of `mask` (bit `r` stands for the `len`-digit word of `r`).
    pub fn from_mask(base: u8, len: usize, mask: u128) -> Result<Self> {
        check_base(base)?;
        let size = pow(base, len);
        if size > 128 || (size < 128 && mask >> size != 0) || mask & 1 != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask {mask:#x} does not describe a subset of Σ_{base}^{len} without 0^{len}"
            )));
        }
        let words = (1..size)
            .filter(|&r| mask >> r & 1 == 1)
            .map(|r| Word::with_length(r as u64, len, base))
            .collect();
        Ok(PatternSet::from_set(base, words))
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `ℓ(A)`: the longest member's length, with `ℓ(∅) = 1`.
    pub fn length(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(1).max(1)
    }

    /// Longest member's length with `∅ ↦ 0`.
    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// `#(A, n)`.
    pub fn count(&self, n: u64) -> u64 {
        self.words.iter().map(|v| count_padded(v, n)).sum()
    }

    /// `a_A(n)`.
    pub fn evaluate(&self, n: u64) -> i8 {
        if self.count(n).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `A ⊕ B`, the pattern set of the product `a_A · a_B`.
    pub fn symmetric_difference(&self, other: &PatternSet) -> Result<PatternSet> {
        if self.base != other.base {
            return Err(Error::MixedBase(self.base, other.base));
        }
        let words = self
            .words
            .symmetric_difference(&other.words)
            .cloned()
            .collect();
        Ok(PatternSet::from_set(self.base, words))
    }

    fn toggle(&mut self, w: Word) {
        if !self.words.remove(&w) {
            self.words.insert(w);
        }
    }

    /// Replaces `v` by `{iv : i ∈ Σ_k}` (as a symmetric difference), which
    /// leaves the sequence unchanged.
    fn split_front(&mut self, v: &Word) {
        for i in 0..self.base {
            self.toggle(v.prepend(i));
        }
        self.toggle(v.clone());
    }

    /// The unique representation without leading zeros.
    pub fn remove_leading_zeros(&self) -> PatternSet {
        let mut out = self.clone();
        while let Some(w) = out.words.iter().find(|w| w.first() == Some(0)).cloned() {
            out.split_front(&w.tail());
        }
        out
    }

    /// The unique representation inside `Σ_k^len \ {0^len}`.
    pub fn to_constant_length(&self, len: usize) -> Result<PatternSet> {
        if len < self.length() {
            return Err(Error::LengthTooSmall {
                requested: len,
                longest: self.length(),
            });
        }
        let mut out = self.clone();
        // words are ordered shortest first
        while let Some(v) = out.words.iter().next().filter(|v| v.len() < len).cloned() {
            out.split_front(&v);
        }
        Ok(out)
    }

    /// Bit mask of the constant-length form at `len` (bit `r` = word of value `r`).
    pub fn to_mask(&self, len: usize) -> Result<u128> {
        if pow(self.base, len) > 128 {
            return Err(Error::InvalidArgument(format!(
                "Σ_{}^{len} does not fit in a 128-bit mask",
                self.base
            )));
        }
        let c = self.to_constant_length(len)?;
        Ok(c.words.iter().fold(0u128, |m, w| m | 1u128 << w.value()))
    }

    /// `a(kn) = a(n)` for all `n`, i.e. the leading-zero-free form has no
    /// trailing zeros.
    pub fn is_self_invariant(&self) -> bool {
        self.remove_leading_zeros()
            .words
            .iter()
            .all(|w| w.last() != Some(0))
    }

    /// Writes `a_A = a_B · p` with `B` self-invariant of length `<= ℓ(A)`
    /// and `p` periodic with period `k^{ℓ-1}`.
    pub fn invariant_decomposition(&self) -> Decomposition {
        self.decompose(true)
    }

    pub(crate) fn decompose(&self, longest_first: bool) -> Decomposition {
        let len = self.length();
        let mut b = self.remove_leading_zeros();
        loop {
            let mut trailing = b.words.iter().filter(|w| w.last() == Some(0));
            let pick = if longest_first {
                trailing.next_back()
            } else {
                trailing.next()
            };
            let Some(w) = pick.cloned() else { break };
            // A ⊕ D(v) with D(v) = {vi : i ∈ Σ_k} ∪ {v}, w = v0
            let v = w.init();
            for i in 0..b.base {
                b.toggle(v.append(i));
            }
            b.toggle(v);
        }
        let period = pow(self.base, len - 1);
        let values = (0..period as u64)
            .map(|n| self.evaluate(n) * b.evaluate(n))
            .collect();
        Decomposition {
            invariant: b,
            factor: PeriodicFactor {
                base: self.base,
                values,
            },
        }
    }

    /// `h(r) = a(r)/a(⌊r/k⌋)` for `0 <= r < k^len`, read off the
    /// constant-length form.
    pub fn periodic_factor(&self, len: usize) -> Result<PeriodicFactor> {
        let c = self.to_constant_length(len)?;
        let size = pow(self.base, len);
        let values = (0..size as u64)
            .map(|r| {
                if c.contains(&Word::with_length(r, len, self.base)) {
                    -1
                } else {
                    1
                }
            })
            .collect();
        Ok(PeriodicFactor {
            base: self.base,
            values,
        })
    }

    /// The table `n ↦ a(k^α n + s)/a(n)` for `n < k^{ℓ-1}`, `ℓ = ℓ(A)`.
    /// This kernel element over `a` is `k^{ℓ-1}`-periodic.
    pub fn kernel_quotient(&self, alpha: u32, s: u64) -> Result<PeriodicFactor> {
        let scale = (self.base as u64).pow(alpha);
        if s >= scale {
            return Err(Error::InvalidArgument(format!(
                "offset {s} must be below k^alpha = {scale}"
            )));
        }
        let period = pow(self.base, self.length() - 1) as u64;
        let values = (0..period)
            .map(|n| self.evaluate(scale * n + s) * self.evaluate(n))
            .collect();
        Ok(PeriodicFactor {
            base: self.base,
            values,
        })
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Result of [`PatternSet::invariant_decomposition`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub invariant: PatternSet,
    pub factor: PeriodicFactor,
}

/// A periodic `±1` table; `get(n)` reads entry `n mod period`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct PeriodicFactor {
    base: u8,
    values: Vec<i8>,
}

impl PeriodicFactor {
    pub fn new(base: u8, values: Vec<i8>) -> Result<Self> {
        check_base(base)?;
        if values.is_empty() {
            return Err(Error::InvalidPeriodicFactor("empty table".into()));
        }
        if let Some(v) = values.iter().find(|&&v| v != 1 && v != -1) {
            return Err(Error::InvalidPeriodicFactor(format!("entry {v} is not ±1")));
        }
        Ok(PeriodicFactor { base, values })
    }

    /// All `+1` with the given period.
    pub fn constant(base: u8, period: usize) -> Self {
        PeriodicFactor {
            base,
            values: vec![1; period.max(1)],
        }
    }

    /// The factor `h` of a constant-length set given by its membership
    /// indicator over `0..k^ℓ` (entry `0` must be `false`).
    pub fn from_membership(base: u8, members: impl IntoIterator<Item = bool>) -> Self {
        PeriodicFactor {
            base,
            values: members
                .into_iter()
                .map(|m| if m { -1 } else { 1 })
                .collect(),
        }
    }

    /// Parses `"+1,-1,..."`.
    pub fn parse(s: &str, base: u8) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| match t.trim() {
                "+1" | "1" | "+" => Ok(1),
                "-1" | "-" | "\u{2212}1" => Ok(-1),
                other => Err(Error::Parse(format!("invalid sign {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        PeriodicFactor::new(base, values)
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn get(&self, n: u64) -> i8 {
        self.values[(n % self.values.len() as u64) as usize]
    }

    /// Smallest period dividing the table length.
    pub fn minimal_period(&self) -> usize {
        let p = self.values.len();
        (1..=p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (d..p).all(|i| self.values[i] == self.values[i - d]))
            .unwrap_or(p)
    }

    /// The same function tabulated over `period` entries.
    pub fn with_period(&self, period: usize) -> Result<Self> {
        if period == 0 || !period.is_multiple_of(self.minimal_period()) {
            return Err(Error::InvalidPeriodicFactor(format!(
                "{period} is not a multiple of the minimal period {}",
                self.minimal_period()
            )));
        }
        Ok(PeriodicFactor {
            base: self.base,
            values: (0..period as u64).map(|n| self.get(n)).collect(),
        })
    }
}

impl fmt::Display for PeriodicFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *v > 0 { "+1" } else { "-1" })?;
        }
        Ok(())
    }
}

/// Recovers the constant-length-`ℓ` pattern set of a pattern-counting
/// sequence from its values: `v ∈ C` iff `s([v]_k) = -s(⌊[v]_k / k⌋)`.
/// The result is checked against `s` on `0..k^{ℓ+2}`.
pub fn reconstruct_pattern_set<F>(s: F, len: usize, base: u8) -> Result<PatternSet>
where
    F: Fn(u64) -> i8,
{
    check_base(base)?;
    if len == 0 {
        return Err(Error::InvalidArgument("length must be at least 1".into()));
    }
    if s(0) != 1 {
        return Err(Error::NotPatternCounting(len));
    }
    let k = base as u64;
    let size = pow(base, len) as u64;
    let words = (1..size)
        .filter(|&r| s(r) != s(r / k))
        .map(|r| Word::with_length(r, len, base))
        .collect();
    let c = PatternSet::from_set(base, words);
    let horizon = size * k * k;
    if (0..horizon).any(|n| c.evaluate(n) != s(n)) {
        return Err(Error::NotPatternCounting(len));
    }
    Ok(c)
}
