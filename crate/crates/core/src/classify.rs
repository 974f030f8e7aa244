//! Exhaustive binary censuses, the saturation condition, Hadamard-built
//! saturated families, and twisting by periodic signs.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decider::{decide_factor, DecideOptions, Decision, Verdict};
use crate::error::{Error, Result};
use crate::gamma_exact::{Correlations, GammaTable};
use crate::pattern_sets::{pow, reconstruct_pattern_set, PatternSet, PeriodicFactor};
use crate::words::{check_base, Word};

/// A triple `(u, i0, i1)` at which the saturation condition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationViolation {
    pub u: String,
    pub i0: u8,
    pub i1: u8,
    /// `|{i : i u i0 ∈ A} ⊕ {i : i u i1 ∈ A}|`
    pub size: usize,
}

fn self_invariant_form(a: &PatternSet) -> Result<PatternSet> {
    let b = a.remove_leading_zeros();
    if b.words().any(|w| w.last() == Some(0)) {
        return Err(Error::NotSelfInvariant);
    }
    let len = b.max_word_len();
    if len < 2 {
        return Err(Error::LengthTooShort(len));
    }
    Ok(b)
}

/// First `(u, i0, i1)`, `u ∈ Σ_k^{ℓ-2}`, `i0 < i1`, for which
/// `2·|{i : i u i0 ∈ A} ⊕ {i : i u i1 ∈ A}| != k`, or `None` if `A` is
/// saturated. `A` must be self-invariant with `ℓ(A) >= 2`.
pub fn saturation_violation(a: &PatternSet) -> Result<Option<SaturationViolation>> {
    let b = self_invariant_form(a)?;
    let k = b.base();
    let len = b.max_word_len();
    for x in 0..pow(k, len - 2) as u64 {
        let u = Word::with_length(x, len - 2, k);
        let column = |j: u8| -> BTreeSet<u8> {
            (0..k)
                .filter(|&i| b.contains(&u.prepend(i).append(j)))
                .collect()
        };
        let columns: Vec<BTreeSet<u8>> = (0..k).map(column).collect();
        for i0 in 0..k {
            for i1 in i0 + 1..k {
                let size = columns[i0 as usize]
                    .symmetric_difference(&columns[i1 as usize])
                    .count();
                if 2 * size != k as usize {
                    return Ok(Some(SaturationViolation {
                        u: u.to_string(),
                        i0,
                        i1,
                        size,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The saturation condition. For `k = 2` it says `1 Σ_2^{ℓ-2} 1 ⊆ A`.
pub fn is_saturated(a: &PatternSet) -> Result<bool> {
    Ok(saturation_violation(a)?.is_none())
}

/// A square `±1` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardMatrix {
    entries: Vec<Vec<i8>>,
}

impl HadamardMatrix {
    /// Validates that `entries` is a normalized Hadamard matrix.
    pub fn new(entries: Vec<Vec<i8>>) -> Result<Self> {
        let m = HadamardMatrix { entries };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let k = self.entries.len();
        if k == 0 || self.entries.iter().any(|row| row.len() != k) {
            return Err(Error::NotHadamard("not a nonempty square matrix".into()));
        }
        if self.entries.iter().flatten().any(|&x| x != 1 && x != -1) {
            return Err(Error::NotHadamard("entries must be ±1".into()));
        }
        if !self.is_orthogonal() {
            return Err(Error::NotHadamard("MᵀM != kI".into()));
        }
        if !self.is_normalized() {
            return Err(Error::NotHadamard("first row and column must be +1".into()));
        }
        Ok(())
    }

    /// `MᵀM = kI`.
    pub fn is_orthogonal(&self) -> bool {
        let k = self.entries.len();
        (0..k).all(|a| {
            (0..k).all(|b| {
                let dot: i64 = (0..k)
                    .map(|i| (self.entries[i][a] * self.entries[i][b]) as i64)
                    .sum();
                dot == if a == b { k as i64 } else { 0 }
            })
        })
    }

    pub fn is_normalized(&self) -> bool {
        self.entries[0].iter().all(|&x| x == 1) && self.entries.iter().all(|row| row[0] == 1)
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i8>] {
        &self.entries
    }

    /// Permutes rows `1..k` and columns `1..k`, which keeps the matrix
    /// normalized and Hadamard.
    pub fn permuted<R: Rng + ?Sized>(&self, rng: &mut R) -> HadamardMatrix {
        let k = self.dimension();
        let mut rows: Vec<usize> = (1..k).collect();
        let mut cols: Vec<usize> = (1..k).collect();
        rows.shuffle(rng);
        cols.shuffle(rng);
        rows.insert(0, 0);
        cols.insert(0, 0);
        HadamardMatrix {
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j]).collect())
                .collect(),
        }
    }
}

impl fmt::Display for HadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let line: Vec<&str> = row.iter().map(|&x| if x > 0 { "+" } else { "-" }).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// The normalized Sylvester matrix of dimension `k = 2^j`.
pub fn sylvester_hadamard(k: usize) -> Result<HadamardMatrix> {
    if k == 0 || !k.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(k));
    }
    let mut m: Vec<Vec<i8>> = vec![vec![1]];
    while m.len() < k {
        let n = m.len();
        let mut next = vec![vec![0i8; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let x = m[i][j];
                next[i][j] = x;
                next[i][j + n] = x;
                next[i + n][j] = x;
                next[i + n][j + n] = -x;
            }
        }
        m = next;
    }
    Ok(HadamardMatrix { entries: m })
}

/// `{ i u j : u ∈ Σ_k^{ℓ-2}, M_{i,j} = -1 }` with the same matrix for every `u`.
pub fn saturated_family_from_hadamard(m: &HadamardMatrix, len: usize) -> Result<PatternSet> {
    saturated_family(m.dimension(), len, |_| m.clone())
}

/// As [`saturated_family_from_hadamard`] with a matrix chosen per `u`.
pub fn saturated_family<F>(k: usize, len: usize, mut matrix_for: F) -> Result<PatternSet>
where
    F: FnMut(&Word) -> HadamardMatrix,
{
    let base = u8::try_from(k).map_err(|_| Error::InvalidBase(u8::MAX))?;
    check_base(base)?;
    if len < 2 {
        return Err(Error::LengthTooShort(len));
    }
    let mut words = Vec::new();
    for x in 0..pow(base, len - 2) as u64 {
        let u = Word::with_length(x, len - 2, base);
        let m = matrix_for(&u);
        m.validate()?;
        if m.dimension() != k {
            return Err(Error::NotHadamard(format!(
                "dimension {} != base {k}",
                m.dimension()
            )));
        }
        for i in 0..base {
            for j in 0..base {
                if m.get(i as usize, j as usize) == -1 {
                    words.push(u.prepend(i).append(j));
                }
            }
        }
    }
    PatternSet::new(base, words)
}

/// A random saturated set of length exactly `len`: the longest words come
/// from per-`u` permuted Sylvester matrices, and a random selection of
/// shorter words with nonzero first and last digit is added.
pub fn random_saturated<R: Rng + ?Sized>(k: usize, len: usize, rng: &mut R) -> Result<PatternSet> {
    let sylvester = sylvester_hadamard(k)?;
    let top = saturated_family(k, len, |_| sylvester.permuted(rng))?;
    let base = top.base();
    let mut words: Vec<Word> = top.words().cloned().collect();
    for l in 1..len {
        for x in 0..pow(base, l) as u64 {
            let w = Word::with_length(x, l, base);
            let clean = w.first() != Some(0) && w.last() != Some(0);
            if clean && rng.gen_bool(0.5) {
                words.push(w);
            }
        }
    }
    PatternSet::new(base, words)
}

/// `A'` with `a_{A'}(n) = a_A(n)·p(n mod period)`. The period must be a
/// power of `k` and `p(0) = +1`; the result has constant length
/// `max(ℓ(A), 1 + log_k period)`.
pub fn twist(a: &PatternSet, p: &PeriodicFactor) -> Result<PatternSet> {
    let k = a.base();
    if p.base() != k {
        return Err(Error::MixedBase(k, p.base()));
    }
    if p.values()[0] != 1 {
        return Err(Error::InvalidPeriodicFactor("p(0) must be +1".into()));
    }
    let mut log = 0;
    while pow(k, log) < p.period() {
        log += 1;
    }
    if pow(k, log) != p.period() {
        return Err(Error::InvalidPeriodicFactor(format!(
            "period {} is not a power of {k}",
            p.period()
        )));
    }
    let len = a.length().max(log + 1);
    reconstruct_pattern_set(|n| a.evaluate(n) * p.get(n), len, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusFilter {
    /// Every subset of `Σ_2^ℓ \ {0^ℓ}`.
    All,
    /// Every set of patterns of length `<= ℓ` beginning and ending in `1`.
    SelfInvariant,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub length: usize,
    pub filter: CensusFilter,
    pub emit_list: bool,
    pub workers: usize,
}

/// Counts per exact pattern length (self-invariant census).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthStats {
    pub length: usize,
    pub candidates: u64,
    pub noncorrelated: u64,
    pub saturated: u64,
}

/// Wall-clock statistics; not part of the structured record since they vary
/// between runs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CensusTiming {
    pub wall_secs: f64,
    pub noncorrelated_secs: f64,
    pub correlated_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub base: u8,
    pub length: usize,
    pub filter: CensusFilter,
    pub candidates: u64,
    pub noncorrelated: u64,
    /// Correlated verdicts whose `(m, γ(m))` was recomputed and matched.
    pub witnesses_verified: u64,
    /// Largest number of vectors stored by a single decision.
    pub max_elements_stored: usize,
    /// `2k^ℓ(k^ℓ+1)` at the census length.
    pub capacity_bound: usize,
    /// Candidates that stored more than the bound at their own length.
    pub capacity_violations: u64,
    pub total_expansions: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub by_exact_length: Vec<LengthStats>,
    /// Self-invariant candidates of length `>= 2` where noncorrelation and
    /// saturation disagree.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub saturation_mismatches: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noncorrelated_sets: Option<Vec<String>>,
    #[serde(skip)]
    pub timing: CensusTiming,
}

struct Outcome {
    exact_len: usize,
    noncorrelated: bool,
    saturated: Option<bool>,
    witness_ok: bool,
    elements: usize,
    over_capacity: bool,
    expansions: usize,
    text: String,
    secs: f64,
}

/// Words of length `1..=len` over `{0,1}` that begin and end with `1`,
/// shortest first.
pub fn self_invariant_pool(len: usize) -> Vec<Word> {
    let mut pool = Vec::new();
    for l in 1..=len {
        for x in 0..1u64 << l {
            let w = Word::with_length(x, l, 2);
            if w.first() == Some(1) && w.last() == Some(1) {
                pool.push(w);
            }
        }
    }
    pool
}

fn verify_witness(h: &PeriodicFactor, len: usize, d: &Decision) -> bool {
    match (d.witness_m, &d.gamma_witness) {
        (Some(m), Some(g)) => {
            let mut c = Correlations::new(GammaTable::from_factor(h.clone(), len));
            !g.is_zero() && c.gamma(m).map(|x| &x == g).unwrap_or(false)
        }
        _ => false,
    }
}

fn run_candidate(set: &PatternSet, len: usize, filter: CensusFilter) -> Result<Outcome> {
    let start = Instant::now();
    let h = set.periodic_factor(len)?;
    let d = decide_factor(h.clone(), len, &DecideOptions::default())?;
    let noncorrelated = d.verdict == Verdict::Noncorrelated;
    let witness_ok = noncorrelated || verify_witness(&h, len, &d);
    let exact_len = set.max_word_len();
    let saturated = match filter {
        CensusFilter::SelfInvariant if exact_len >= 2 => Some(is_saturated(set)?),
        _ => None,
    };
    Ok(Outcome {
        exact_len,
        noncorrelated,
        saturated,
        witness_ok,
        elements: d.elements_created,
        over_capacity: d.elements_created > crate::decider::capacity_bound(set.base(), len),
        expansions: d.expansions,
        text: set.to_string(),
        secs: start.elapsed().as_secs_f64(),
    })
}

fn candidate(index: u64, opts: &CensusOptions, pool: &[Word]) -> Result<(PatternSet, usize)> {
    match opts.filter {
        CensusFilter::All => {
            let set = PatternSet::from_mask(2, opts.length, (index as u128) << 1)?;
            Ok((set, opts.length))
        }
        CensusFilter::SelfInvariant => {
            let words = pool
                .iter()
                .enumerate()
                .filter(|(b, _)| index >> b & 1 == 1)
                .map(|(_, w)| w.clone());
            let set = PatternSet::new(2, words)?;
            let len = set.length();
            Ok((set, len))
        }
    }
}

const CHUNK: u64 = 128;

/// Runs the decider on every candidate of a binary census. The report does
/// not depend on the worker count.
pub fn census(base: u8, opts: &CensusOptions) -> Result<CensusReport> {
    if base != 2 {
        return Err(Error::CensusBase(base));
    }
    if !(1..=6).contains(&opts.length) {
        return Err(Error::InvalidArgument(format!(
            "census length {} outside 1..=6",
            opts.length
        )));
    }
    let pool = self_invariant_pool(opts.length);
    let total: u64 = match opts.filter {
        CensusFilter::All => 1u64 << ((1u64 << opts.length) - 1),
        CensusFilter::SelfInvariant => 1u64 << pool.len(),
    };
    let started = Instant::now();
    let pool_ref = &pool;
    let work = || -> Result<Vec<Vec<Outcome>>> {
        (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                (c * CHUNK..((c + 1) * CHUNK).min(total))
                    .map(|i| {
                        let (set, len) = candidate(i, opts, pool_ref)?;
                        run_candidate(&set, len, opts.filter)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect()
    };
    let chunks = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?
        .install(work)?;

    let mut report = CensusReport {
        base,
        length: opts.length,
        filter: opts.filter,
        candidates: total,
        noncorrelated: 0,
        witnesses_verified: 0,
        max_elements_stored: 0,
        capacity_bound: crate::decider::capacity_bound(base, opts.length),
        capacity_violations: 0,
        total_expansions: 0,
        by_exact_length: Vec::new(),
        saturation_mismatches: Vec::new(),
        noncorrelated_sets: opts.emit_list.then(Vec::new),
        timing: CensusTiming::default(),
    };
    if opts.filter == CensusFilter::SelfInvariant {
        report.by_exact_length = (0..=opts.length)
            .map(|length| LengthStats {
                length,
                ..LengthStats::default()
            })
            .collect();
    }
    for o in chunks.into_iter().flatten() {
        report.max_elements_stored = report.max_elements_stored.max(o.elements);
        report.total_expansions += o.expansions as u64;
        report.capacity_violations += o.over_capacity as u64;
        if o.noncorrelated {
            report.noncorrelated += 1;
            report.timing.noncorrelated_secs += o.secs;
            if let Some(list) = report.noncorrelated_sets.as_mut() {
                list.push(o.text.clone());
            }
        } else {
            report.timing.correlated_secs += o.secs;
            if o.witness_ok {
                report.witnesses_verified += 1;
            }
        }
        if let Some(stats) = report.by_exact_length.get_mut(o.exact_len) {
            stats.candidates += 1;
            stats.noncorrelated += o.noncorrelated as u64;
            stats.saturated += o.saturated.unwrap_or(false) as u64;
        }
        if let Some(sat) = o.saturated {
            if sat != o.noncorrelated {
                report.saturation_mismatches.push(o.text);
            }
        }
    }
    report.timing.wall_secs = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Result of checking `noncorrelated ⟺ saturated` over self-invariant
/// binary sets of length `2..=ℓ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremCReport {
    pub max_length: usize,
    pub by_exact_length: Vec<LengthStats>,
    pub counterexamples: Vec<String>,
    pub holds: bool,
}

pub fn check_theorem_c(max_length: usize, workers: usize) -> Result<TheoremCReport> {
    let report = census(
        2,
        &CensusOptions {
            length: max_length,
            filter: CensusFilter::SelfInvariant,
            emit_list: false,
            workers,
        },
    )?;
    let by_exact_length: Vec<LengthStats> = report
        .by_exact_length
        .into_iter()
        .filter(|s| s.length >= 2)
        .collect();
    let holds = report.saturation_mismatches.is_empty();
    Ok(TheoremCReport {
        max_length,
        by_exact_length,
        counterexamples: report.saturation_mismatches,
        holds,
    })
}

/// For each noncorrelated set, whether the self-invariant part of its
/// invariant-times-periodic decomposition is noncorrelated as well.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantPartEvidence {
    pub checked: u64,
    pub invariant_noncorrelated: u64,
    pub counterexamples: Vec<String>,
}

pub fn invariant_part_evidence(
    sets: &[PatternSet],
    workers: usize,
) -> Result<InvariantPartEvidence> {
    let run = || -> Result<Vec<(bool, String)>> {
        sets.par_iter()
            .map(|a| {
                let b = a.invariant_decomposition().invariant;
                let len = b.length();
                let d = decide_factor(b.periodic_factor(len)?, len, &DecideOptions::default())?;
                Ok((d.is_noncorrelated(), a.to_string()))
            })
            .collect()
    };
    let results = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?
        .install(run)?;
    let mut ev = InvariantPartEvidence {
        checked: results.len() as u64,
        invariant_noncorrelated: 0,
        counterexamples: Vec::new(),
    };
    for (ok, text) in results {
        if ok {
            ev.invariant_noncorrelated += 1;
        } else {
            ev.counterexamples.push(text);
        }
    }
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decider::decide;
    use crate::rational::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(s: &str) -> PatternSet {
        PatternSet::parse(s, 2).unwrap()
    }

    #[test]
    fn saturation_examples() {
        assert!(is_saturated(&set("11")).unwrap());
        assert!(!is_saturated(&set("111")).unwrap());
        assert!(is_saturated(&set("101,111,11")).unwrap());
        let v = saturation_violation(&set("111")).unwrap().unwrap();
        assert_eq!((v.u.as_str(), v.i0, v.i1, v.size), ("0", 0, 1, 0));
        assert_eq!(is_saturated(&set("10")), Err(Error::NotSelfInvariant));
        assert_eq!(is_saturated(&set("1")), Err(Error::LengthTooShort(1)));
        // leading zeros are removed first: {01} becomes {1, 11}
        assert!(is_saturated(&set("01")).unwrap());
    }

    #[test]
    fn binary_saturation_is_containment() {
        for l in 2..=4 {
            let pool = self_invariant_pool(l);
            let required: Vec<&Word> = pool.iter().filter(|w| w.len() == l).collect();
            for mask in 0u64..1 << pool.len() {
                let words = pool
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, w)| w.clone());
                let a = PatternSet::new(2, words).unwrap();
                if a.max_word_len() != l {
                    continue;
                }
                let contains_all = required.iter().all(|w| a.contains(w));
                assert_eq!(is_saturated(&a).unwrap(), contains_all, "A = {a}");
            }
        }
    }

    #[test]
    fn sylvester_examples() {
        let m2 = sylvester_hadamard(2).unwrap();
        assert_eq!(m2.entries(), &[vec![1, 1], vec![1, -1]]);
        let m4 = sylvester_hadamard(4).unwrap();
        assert!(m4.is_orthogonal() && m4.is_normalized());
        assert_eq!(
            m4.entries().iter().flatten().filter(|&&x| x == -1).count(),
            6
        );
        assert_eq!(sylvester_hadamard(3), Err(Error::NotPowerOfTwo(3)));
        assert!(sylvester_hadamard(8).unwrap().is_orthogonal());
    }

    #[test]
    fn hadamard_validation() {
        assert!(HadamardMatrix::new(vec![vec![1, 1], vec![1, -1]]).is_ok());
        assert!(HadamardMatrix::new(vec![vec![1, 1], vec![-1, 1]]).is_err());
        assert!(HadamardMatrix::new(vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(HadamardMatrix::new(vec![vec![1, 0], vec![1, -1]]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = sylvester_hadamard(8).unwrap();
        for _ in 0..10 {
            let p = m.permuted(&mut rng);
            assert!(p.is_orthogonal() && p.is_normalized());
        }
    }

    #[test]
    fn hadamard_family_examples() {
        let m2 = sylvester_hadamard(2).unwrap();
        assert_eq!(saturated_family_from_hadamard(&m2, 2).unwrap(), set("11"));
        assert_eq!(
            saturated_family_from_hadamard(&m2, 3).unwrap(),
            set("101,111")
        );
        let m4 = sylvester_hadamard(4).unwrap();
        let a = saturated_family_from_hadamard(&m4, 2).unwrap();
        assert_eq!(a, PatternSet::parse("11,13,22,23,31,32", 4).unwrap());
        assert!(is_saturated(&a).unwrap());
        assert!(saturated_family_from_hadamard(&m2, 1).is_err());
    }

    #[test]
    fn twist_examples() {
        let rs = set("11");
        let p = PeriodicFactor::new(2, vec![1, -1]).unwrap();
        let t = twist(&rs, &p).unwrap();
        assert_eq!(t, set("01,10,11"));
        for n in 0..1u64 << 12 {
            assert_eq!(t.evaluate(n), rs.evaluate(n) * p.get(n));
        }
        let a = set("0110,1");
        let id = twist(&a, &PeriodicFactor::constant(2, 1)).unwrap();
        assert_eq!(id, a.to_constant_length(4).unwrap());

        let mut c = Correlations::for_set(&t);
        for m in 2..=32 {
            assert!(c.gamma(m).unwrap().is_zero(), "m = {m}");
        }
        assert!(twist(&rs, &PeriodicFactor::new(2, vec![-1, 1]).unwrap()).is_err());
        assert!(twist(&rs, &PeriodicFactor::new(2, vec![1, -1, 1]).unwrap()).is_err());
    }

    #[test]
    fn twisted_restricted_coefficients_change_sign_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for a in ["11", "1,101,111", "1011,11,1001,1111,1101"] {
            let a = set(a);
            let len = a.length();
            let period = 1usize << (len - 1);
            for _ in 0..4 {
                let mut values: Vec<i8> = (0..period)
                    .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
                    .collect();
                values[0] = 1;
                let p = PeriodicFactor::new(2, values).unwrap();
                let t = twist(&a, &p).unwrap();
                let mut c = Correlations::at_length(&a, len).unwrap();
                let mut ct = Correlations::at_length(&t, len).unwrap();
                for r in 0..1usize << len {
                    for m in 0..=4u64 {
                        let sign = (p.get(r as u64) * p.get(r as u64 + m)) as i64;
                        let expect = &c.gamma_r(r, m) * &Rational::from_integer(sign);
                        assert_eq!(ct.gamma_r(r, m), expect, "A={a} p={p} r={r} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_censuses() {
        let opts = |length, filter| CensusOptions {
            length,
            filter,
            emit_list: true,
            workers: 2,
        };
        let r1 = census(2, &opts(1, CensusFilter::All)).unwrap();
        assert_eq!((r1.candidates, r1.noncorrelated), (2, 0));
        assert_eq!(r1.witnesses_verified, 2);
        let r2 = census(2, &opts(2, CensusFilter::All)).unwrap();
        assert_eq!(r2.candidates, 8);
        // every noncorrelated set must really be noncorrelated
        for s in r2.noncorrelated_sets.as_ref().unwrap() {
            assert!(decide(&set(s)).unwrap().is_noncorrelated());
        }
        assert!(census(3, &opts(2, CensusFilter::All)).is_err());
    }

    #[test]
    fn self_invariant_census_small() {
        let r = census(
            2,
            &CensusOptions {
                length: 3,
                filter: CensusFilter::SelfInvariant,
                emit_list: false,
                workers: 1,
            },
        )
        .unwrap();
        assert_eq!(r.candidates, 16);
        let nc: Vec<u64> = r.by_exact_length.iter().map(|s| s.noncorrelated).collect();
        assert_eq!(nc, vec![0, 0, 2, 4]);
        assert!(r.saturation_mismatches.is_empty());
    }

    #[test]
    fn random_saturated_sets_are_noncorrelated() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (k, len) in [(2, 2), (2, 3), (2, 4), (4, 2)] {
            for _ in 0..3 {
                let a = random_saturated(k, len, &mut rng).unwrap();
                assert!(is_saturated(&a).unwrap(), "A = {a}");
                assert!(decide(&a).unwrap().is_noncorrelated(), "A = {a}");
            }
        }
    }
}
