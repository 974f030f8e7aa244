//! Noncorrelation decision by closing a spanning set of the `k`-kernel of
//! `f = 1_ℕ · γ`.
//!
//! Elements are functions `η_q · Σ_{r,e} w_{r,e} S^e γ_r` where `η_0` is the
//! indicator of `{0}` and `η_q` (`1 <= q <= k^ℓ`) the indicator of
//! `k^ℓ ℕ_0 + q`. The closure starts from `η_t Σ_r γ_r`, `1 <= t <= k^ℓ`, and
//! repeatedly applies the decimation `Λ_i g(n) = g(kn + i)` to every stored
//! element, keeping a child only if its coefficient vector is new to the
//! span stored for its residue. Children with `q = 0` are multiples of
//! `1_{0}` and are evaluated at once: a nonzero value is a correlation
//! witness, a zero value is dropped. If the queue drains, every element of a
//! `Λ`-closed space containing `f` vanishes at `0`, so `f ≡ 0`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_exact::{Correlations, GammaTable};
use crate::pattern_sets::{pow, PatternSet, PeriodicFactor};
use crate::rational::Rational;

/// One stored function of the closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    /// Residue class `q ∈ [0, k^ℓ]`.
    pub residue: usize,
    /// `w_{r,e}` at index `2r + e`.
    pub coefficients: Vec<Rational>,
    /// Digits applied since the seed, least significant first.
    pub provenance: Vec<u8>,
}

impl BasisElement {
    pub fn coefficient(&self, r: usize, e: usize) -> &Rational {
        &self.coefficients[2 * r + e]
    }
}

/// Rows in reduced row-echelon form, sorted by pivot column.
#[derive(Clone, Debug, Default)]
pub struct EchelonStore {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl EchelonStore {
    pub fn new() -> Self {
        EchelonStore::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    fn reduce(&self, v: &mut [Rational]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if v[piv].is_zero() {
                continue;
            }
            let f = v[piv].clone();
            for (x, y) in v[piv..].iter_mut().zip(&row[piv..]) {
                if !y.is_zero() {
                    x.sub_mul_assign(&f, y);
                }
            }
        }
    }

    /// Whether `v` lies in the span of the stored rows.
    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(Rational::is_zero)
    }

    /// Adds `v` to the span; returns `false` if it was already inside.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[piv].recip();
        for x in v[piv..].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[piv].is_zero() {
                continue;
            }
            let f = row[piv].clone();
            for (x, y) in row[piv..].iter_mut().zip(&v[piv..]) {
                if !y.is_zero() {
                    x.sub_mul_assign(&f, y);
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }
}

/// Per-residue echelon stores for `q = 1..=k^ℓ` and the expansion queue.
#[derive(Clone, Debug)]
pub struct ResidueBasis {
    stores: Vec<EchelonStore>,
    queue: VecDeque<BasisElement>,
}

impl ResidueBasis {
    fn new(modulus: usize) -> Self {
        ResidueBasis {
            stores: vec![EchelonStore::new(); modulus + 1],
            queue: VecDeque::new(),
        }
    }

    /// Stores `elem` if its vector is independent of those with the same
    /// residue; returns whether it was stored.
    fn offer(&mut self, elem: BasisElement) -> bool {
        debug_assert!(elem.residue >= 1);
        if self.stores[elem.residue].insert(&elem.coefficients) {
            self.queue.push_back(elem);
            true
        } else {
            false
        }
    }

    pub fn rank(&self, q: usize) -> usize {
        self.stores[q].rank()
    }

    pub fn total(&self) -> usize {
        self.stores.iter().map(EchelonStore::rank).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Noncorrelated,
    Correlated,
}

/// Outcome of [`decide`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_witness: Option<Rational>,
    /// Stored elements, seeds included.
    pub elements_created: usize,
    pub expansions: usize,
}

impl Decision {
    pub fn is_noncorrelated(&self) -> bool {
        self.verdict == Verdict::Noncorrelated
    }
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    /// Common factor applied to every seed vector.
    pub seed_scale: Rational,
    /// Replace the provenance witness by the smallest `m` with `γ(m) != 0`
    /// among `1..=min(m, k^{2ℓ})`.
    pub minimal_witness: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            seed_scale: Rational::one(),
            minimal_witness: true,
        }
    }
}

/// Upper bound `2k^ℓ(k^ℓ + 1)` on the number of stored vectors.
pub fn capacity_bound(base: u8, len: usize) -> usize {
    let p = pow(base, len);
    2 * p * (p + 1)
}

/// Decides `A` at its own length `ℓ(A)`.
pub fn decide(a: &PatternSet) -> Result<Decision> {
    decide_at_length(a, a.length())
}

pub fn decide_at_length(a: &PatternSet, len: usize) -> Result<Decision> {
    let h = a.periodic_factor(len)?;
    decide_factor(h, len, &DecideOptions::default())
}

/// Decides the sequence whose periodic factor `h(n) = a(n)/a(⌊n/k⌋)` has
/// period `k^len`.
pub fn decide_factor(h: PeriodicFactor, len: usize, opts: &DecideOptions) -> Result<Decision> {
    let table = GammaTable::from_factor(h, len);
    let p = table.modulus();
    let mut basis = ResidueBasis::new(p);
    let mut elements_created = 0;
    let mut expansions = 0;

    for t in 1..=p {
        let mut w = vec![Rational::zero(); 2 * p];
        for r in 0..p {
            w[2 * r] = opts.seed_scale.clone();
        }
        let seed = BasisElement {
            residue: t,
            coefficients: w,
            provenance: Vec::new(),
        };
        if basis.offer(seed) {
            elements_created += 1;
        }
    }

    while let Some(elem) = basis.queue.pop_front() {
        expansions += 1;
        for child in expand_element(&elem, table.factor(), len) {
            if child.residue == 0 {
                let value = evaluate_at_zero(&child.coefficients, &table);
                if !value.is_zero() {
                    let (witness_m, gamma_witness) =
                        report_witness(&table, &child.provenance, &value, opts)?;
                    return Ok(Decision {
                        verdict: Verdict::Correlated,
                        witness_m: Some(witness_m),
                        gamma_witness: Some(gamma_witness),
                        elements_created,
                        expansions,
                    });
                }
            } else if basis.offer(child) {
                elements_created += 1;
            }
        }
    }

    debug_assert!(elements_created <= 2 * p * p);
    debug_assert!((1..=p).all(|q| basis.rank(q) <= 2 * p));
    Ok(Decision {
        verdict: Verdict::Noncorrelated,
        witness_m: None,
        gamma_witness: None,
        elements_created,
        expansions,
    })
}

/// Applies `Λ_i` with `i = q mod k` (all other digits annihilate
/// `η_q`) and splits the image by residue. The `q' = 0` part stands for
/// `1_{k^ℓ ℕ_0} = η_{k^ℓ} + η_0` and is also added into the `q' = k^ℓ`
/// child. Children are returned in increasing order of `q'`.
pub fn expand_element(elem: &BasisElement, h: &PeriodicFactor, len: usize) -> Vec<BasisElement> {
    assert!(elem.residue >= 1, "elements with q = 0 are never expanded");
    let base = h.base();
    let k = base as usize;
    let p = pow(base, len);
    let top = p / k;
    let q = elem.residue;
    let i = q % k;
    let kq = Rational::from_integer(k as i64);
    let hv = h.values();

    // every q' receives the same vector over (r', e')
    let mut image = vec![Rational::zero(); 2 * p];
    for r in 0..p {
        for e in 0..2 {
            let w = &elem.coefficients[2 * r + e];
            if w.is_zero() {
                continue;
            }
            let sign = hv[r] as i64 * hv[(r + q + e) % p] as i64;
            let c = if sign > 0 { w / &kq } else { -(w / &kq) };
            let carry = (i + e + r % k) / k;
            for d in 0..k {
                let target = 2 * (top * d + r / k) + carry;
                image[target] = &image[target] + &c;
            }
        }
    }

    let mut provenance = elem.provenance.clone();
    provenance.push(i as u8);
    let mut targets: Vec<usize> = (0..k).map(|d| top * d + q / k).collect();
    // q' = 0 only occurs when q < k, and then every target is below k^ℓ
    if targets[0] == 0 {
        targets.push(p);
    }
    targets
        .into_iter()
        .map(|residue| BasisElement {
            residue,
            coefficients: image.clone(),
            provenance: provenance.clone(),
        })
        .collect()
}

/// `Σ_{r,e} w_{r,e} γ_r(e)`, the value at `0` of the represented function
/// before restriction by `η_q`.
pub fn evaluate_at_zero(w: &[Rational], table: &GammaTable) -> Rational {
    let mut sum = Rational::zero();
    for (r, pair) in w.chunks_exact(2).enumerate() {
        if !pair[0].is_zero() {
            sum = &sum + &pair[0];
        }
        if !pair[1].is_zero() {
            sum = &sum + &(&pair[1] * table.shift_one(r));
        }
    }
    sum
}

/// `m = Σ_j i_j k^{j-1}` for digits listed least significant first.
pub fn witness_from_provenance(digits: &[u8], base: u8) -> Option<u64> {
    digits.iter().rev().try_fold(0u64, |acc, &d| {
        acc.checked_mul(base as u64)?.checked_add(d as u64)
    })
}

fn report_witness(
    table: &GammaTable,
    provenance: &[u8],
    value: &Rational,
    opts: &DecideOptions,
) -> Result<(u64, Rational)> {
    let m = witness_from_provenance(provenance, table.base()).ok_or_else(|| {
        Error::Internal(format!(
            "witness shift with {} digits overflows u64",
            provenance.len()
        ))
    })?;
    if m == 0 {
        return Err(Error::Internal("nonzero value at a zero shift".into()));
    }
    let mut corr = Correlations::new(table.clone());
    let gamma_m = corr.gamma(m)?;
    let scale = &opts.seed_scale * &Rational::from_integer(table.modulus() as i64);
    if &gamma_m * &scale != *value {
        return Err(Error::Internal(format!(
            "witness m = {m}: closure value {value} disagrees with γ(m) = {gamma_m}"
        )));
    }
    if !opts.minimal_witness {
        return Ok((m, gamma_m));
    }
    let limit = m.min((table.modulus() as u64).pow(2));
    for s in 1..=limit {
        let g = corr.gamma(s)?;
        if !g.is_zero() {
            return Ok((s, g));
        }
    }
    Ok((m, gamma_m))
}
