//! Exact correlation coefficients.
//!
//! For an operating length `ℓ` and `P = k^ℓ`, the restricted coefficient
//! `γ_r(m)` is the correlation `a(n)a(n+m)` averaged over `n ≡ r (mod P)`
//! and scaled by `P`, so that `γ(m) = (1/P) Σ_r γ_r(m)`. Writing
//! `m = k·m' + i` and `j = r mod k`, they obey
//!
//! ```text
//! γ_r(m) = h(r)·h(r+m)/k · Σ_{r' ∈ k^{ℓ-1}Σ_k + ⌊r/k⌋} γ_{r'}(m' + ⌊(i+j)/k⌋)
//! ```
//!
//! with `h` indices taken mod `P`. This reduces every shift `m >= 2` to
//! strictly smaller shifts; `m = 1` is closed by [`GammaTable::bootstrap`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pattern_sets::{pow, PatternSet, PeriodicFactor};
use crate::rational::Rational;

/// `γ_r(1)` for all residues `r < k^ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTable {
    base: u8,
    len: usize,
    h: PeriodicFactor,
    shift_one: Vec<Rational>,
}

/// Number of trailing `k-1` digits in the `len`-digit expansion of `r`.
pub(crate) fn trailing_top_digits(r: usize, k: usize, len: usize) -> usize {
    let mut r = r;
    let mut nu = 0;
    while nu < len && r % k == k - 1 {
        r /= k;
        nu += 1;
    }
    nu
}

impl GammaTable {
    /// Bootstraps `γ_r(1)` for `A` at operating length `len >= ℓ(A)`.
    pub fn bootstrap(a: &PatternSet, len: usize) -> Result<Self> {
        let h = a.periodic_factor(len)?;
        Ok(GammaTable::from_factor(h, len))
    }

    /// Bootstraps from the factor `h` (period `k^len`).
    ///
    /// Residues are processed by increasing count `ν(r)` of trailing `k-1`
    /// digits: `ν = 0` needs no recursion, `1 <= ν < ℓ` only uses residues
    /// with count `ν - 1`, and `r = k^ℓ - 1` appears on both sides of its own
    /// equation and is solved as a one-unknown fixed point.
    pub fn from_factor(h: PeriodicFactor, len: usize) -> Self {
        let base = h.base();
        let k = base as usize;
        let p = pow(base, len);
        assert_eq!(h.period(), p, "factor period must be k^len");
        let top = p / k;
        let kq = Rational::from_integer(k as i64);
        let hv = |r: usize| h.values()[r % p] as i64;

        let mut shift_one = vec![Rational::zero(); p];
        let mut order: Vec<usize> = (0..p - 1).collect();
        order.sort_by_key(|&r| trailing_top_digits(r, k, len));
        for r in order {
            let sign = hv(r) * hv(r + 1);
            if r % k != k - 1 {
                shift_one[r] = Rational::from_integer(sign);
            } else {
                let sum: Rational = (0..k).map(|d| &shift_one[top * d + r / k]).sum();
                shift_one[r] = &(&sum * &Rational::from_integer(sign)) / &kq;
            }
        }
        // r = P-1: γ = (c/k)(S + γ) with c = h(P-1)h(0), so γ = S / (k·c - 1)
        let r = p - 1;
        let c = hv(r) * hv(0);
        let sum: Rational = (0..k - 1).map(|i| &shift_one[top * (i + 1) - 1]).sum();
        shift_one[r] = &sum / &Rational::from_integer(k as i64 * c - 1);

        GammaTable {
            base,
            len,
            h,
            shift_one,
        }
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    /// The working length `ℓ`.
    pub fn length(&self) -> usize {
        self.len
    }

    pub fn modulus(&self) -> usize {
        self.shift_one.len()
    }

    pub fn factor(&self) -> &PeriodicFactor {
        &self.h
    }

    /// `γ_r(1)`.
    pub fn shift_one(&self, r: usize) -> &Rational {
        &self.shift_one[r]
    }

    pub fn shift_one_values(&self) -> &[Rational] {
        &self.shift_one
    }

    /// `γ_r(e)` for `e ∈ {0, 1}`.
    pub fn small_shift(&self, r: usize, e: usize) -> Rational {
        match e {
            0 => Rational::one(),
            1 => self.shift_one[r].clone(),
            _ => panic!("small_shift only covers e <= 1"),
        }
    }
}

/// Memoized evaluator of `γ_r(m)` and `γ(m)` for one sequence.
#[derive(Clone, Debug)]
pub struct Correlations {
    table: GammaTable,
    rows: HashMap<u64, Vec<Rational>>,
}

impl Correlations {
    pub fn new(table: GammaTable) -> Self {
        Correlations {
            table,
            rows: HashMap::new(),
        }
    }

    /// Evaluator for `A` at its own length `ℓ(A)`.
    pub fn for_set(a: &PatternSet) -> Self {
        Correlations::at_length(a, a.length()).expect("ℓ(A) is always a valid length")
    }

    pub fn at_length(a: &PatternSet, len: usize) -> Result<Self> {
        Ok(Correlations::new(GammaTable::bootstrap(a, len)?))
    }

    pub fn table(&self) -> &GammaTable {
        &self.table
    }

    /// `(γ_r(m))_{r < k^ℓ}`.
    pub fn row(&mut self, m: u64) -> Vec<Rational> {
        self.fill(m);
        (0..self.table.modulus())
            .map(|r| self.value(r, m))
            .collect()
    }

    fn fill(&mut self, m: u64) {
        if m <= 1 || self.rows.contains_key(&m) {
            return;
        }
        let k = self.table.base as u64;
        let (mq, i) = (m / k, m % k);
        // the carry e' = ⌊(i+j)/k⌋ can only be 1 when i > 0, and then mq + 1 < m
        let shifts: &[u64] = if i == 0 { &[mq] } else { &[mq, mq + 1] };
        for &s in shifts {
            self.fill(s);
        }
        let p = self.table.modulus();
        let top = p / k as usize;
        let kq = Rational::from_integer(k as i64);
        // Σ_d γ_{top·d + q}(s) for s ∈ {mq, mq+1}
        let col_sums: Vec<Vec<Rational>> = shifts
            .iter()
            .map(|&s| {
                (0..top)
                    .map(|q| (0..k as usize).map(|d| self.value(top * d + q, s)).sum())
                    .collect()
            })
            .collect();
        let h = self.table.h.values();
        let row = (0..p)
            .map(|r| {
                let e = ((i + (r as u64 % k)) / k) as usize;
                let sign = h[r] as i64 * h[((r as u64 + m) % p as u64) as usize] as i64;
                let s = &col_sums[e][r / k as usize];
                if sign > 0 {
                    s / &kq
                } else {
                    -(s / &kq)
                }
            })
            .collect();
        self.rows.insert(m, row);
    }

    fn value(&self, r: usize, m: u64) -> Rational {
        match m {
            0 => Rational::one(),
            1 => self.table.shift_one[r].clone(),
            _ => self.rows[&m][r].clone(),
        }
    }

    /// `γ_r(m)` for `r < k^ℓ`, `m >= 0`.
    pub fn gamma_r(&mut self, r: usize, m: u64) -> Rational {
        assert!(r < self.table.modulus(), "residue out of range");
        self.fill(m);
        self.value(r, m)
    }

    /// `γ(m) = k^{-ℓ} Σ_r γ_r(m)` for `m >= 1`.
    pub fn gamma(&mut self, m: u64) -> Result<Rational> {
        if m == 0 {
            return Err(Error::ZeroShift);
        }
        self.fill(m);
        let p = self.table.modulus();
        let sum: Rational = (0..p).map(|r| self.value(r, m)).sum();
        Ok(&sum / &Rational::from_integer(p as i64))
    }
}

/// `γ(0)`.
pub const GAMMA_AT_ZERO: i64 = 1;

/// `γ_r(1)` table for `A` at operating length `len`.
pub fn bootstrap(a: &PatternSet, len: usize) -> Result<GammaTable> {
    GammaTable::bootstrap(a, len)
}

/// `γ_r(m)` using a prebuilt table.
pub fn gamma_r(table: &GammaTable, r: usize, m: u64) -> Rational {
    Correlations::new(table.clone()).gamma_r(r, m)
}

/// The correlation coefficient `γ_{a_A}(m)`, `m >= 1`.
pub fn gamma(a: &PatternSet, m: u64) -> Result<Rational> {
    Correlations::for_set(a).gamma(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern_sets::PatternSet;
    use proptest::prelude::*;

    fn set(s: &str) -> PatternSet {
        PatternSet::parse(s, 2).unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d)
    }

    #[test]
    fn nu_counts_trailing_top_digits() {
        assert_eq!(trailing_top_digits(0b0111, 2, 4), 3);
        assert_eq!(trailing_top_digits(0b1111, 2, 4), 4);
        assert_eq!(trailing_top_digits(0b0110, 2, 4), 0);
        assert_eq!(trailing_top_digits(8, 3, 2), 2);
    }

    #[test]
    fn bootstrap_thue_morse() {
        let t = bootstrap(&set("1"), 1).unwrap();
        assert_eq!(t.shift_one_values(), &[q(-1, 1), q(1, 3)]);
    }

    #[test]
    fn bootstrap_rudin_shapiro() {
        let t = bootstrap(&set("11"), 2).unwrap();
        assert_eq!(t.shift_one_values(), &[q(1, 1), q(0, 1), q(-1, 1), q(0, 1)]);
    }

    #[test]
    fn bootstrap_constant() {
        let t = bootstrap(&set(""), 1).unwrap();
        assert_eq!(t.shift_one_values(), &[q(1, 1), q(1, 1)]);
    }

    #[test]
    fn bootstrap_satisfies_top_fixed_point() {
        // γ_{P-1}(1) = h(P-1)h(0)/k · Σ_d γ_{top·d + top - 1}(1), the sum
        // including γ_{P-1}(1) itself
        for a in ["1", "11", "0110,101", "1,10,111", "1101,011"] {
            let a = set(a);
            let len = a.length();
            let t = bootstrap(&a, len).unwrap();
            let p = t.modulus();
            let top = p / 2;
            let h = t.factor().values();
            let sum: Rational = (0..2).map(|d| t.shift_one(top * d + top - 1)).sum();
            let rhs = &(&sum * &Rational::from_integer((h[p - 1] * h[0]) as i64))
                / &Rational::from_integer(2);
            assert_eq!(t.shift_one(p - 1), &rhs, "A = {a}");
        }
    }

    #[test]
    fn gamma_r_examples() {
        let mut tm = Correlations::for_set(&set("1"));
        assert_eq!(tm.gamma_r(0, 2), q(-1, 3));
        assert_eq!(tm.gamma_r(1, 0), Rational::one());
        let mut rs = Correlations::for_set(&set("11"));
        assert_eq!(rs.gamma_r(0, 1), Rational::one());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&set("1"), 1).unwrap(), q(-1, 3));
        assert_eq!(gamma(&set("1"), 3).unwrap(), q(1, 3));
        assert_eq!(gamma(&set("11"), 1).unwrap(), Rational::zero());
        assert_eq!(gamma(&set("1"), 0), Err(Error::ZeroShift));
        assert_eq!(gamma(&set(""), 5).unwrap(), Rational::one());
    }

    #[test]
    fn thue_morse_classical_relations() {
        let mut tm = Correlations::for_set(&set("1"));
        let g: Vec<Rational> = (0..=130)
            .map(|m| {
                if m == 0 {
                    Rational::one()
                } else {
                    tm.gamma(m).unwrap()
                }
            })
            .collect();
        for m in 1..=64usize {
            assert_eq!(g[2 * m], g[m], "γ(2m) = γ(m) at m = {m}");
        }
        // γ(2m+1) = -(γ(m) + γ(m+1))/2
        for m in 0..=64usize {
            let rhs = -(&(&g[m] + &g[m + 1]) / &Rational::from_integer(2));
            assert_eq!(g[2 * m + 1], rhs, "m = {m}");
        }
        for j in 0..=10 {
            assert_eq!(tm.gamma(1 << j).unwrap(), q(-1, 3));
        }
    }

    #[test]
    fn rudin_shapiro_vanishes() {
        let mut rs = Correlations::for_set(&set("11"));
        for m in 1..=256 {
            assert!(rs.gamma(m).unwrap().is_zero(), "m = {m}");
        }
    }

    #[test]
    fn ternary_thue_morse_bootstrap() {
        // a(n) = (-1)^{#(1,n) + #(2,n)} in base 3: h = (+1,-1,-1)
        let a = PatternSet::parse("1,2", 3).unwrap();
        let t = bootstrap(&a, 1).unwrap();
        // γ_0(1) = h0 h1 = -1, γ_1(1) = h1 h2 = 1,
        // γ_2(1) = (γ_0 + γ_1)/(3·c - 1), c = h2 h0 = -1
        assert_eq!(t.shift_one_values(), &[q(-1, 1), q(1, 1), q(0, 1)]);
    }

    fn brute_force_gamma_r(a: &PatternSet, len: usize, r: usize, m: u64) -> f64 {
        // direct average over many periods; only used as a sanity bound
        let p = pow(a.base(), len) as u64;
        let blocks = 1u64 << 16;
        let mut sum = 0i64;
        for t in 0..blocks {
            let n = t * p + r as u64;
            sum += (a.evaluate(n) * a.evaluate(n + m)) as i64;
        }
        sum as f64 / blocks as f64
    }

    #[test]
    fn restricted_values_match_direct_averages() {
        for a in ["11", "1,011", "0101,11"] {
            let a = set(a);
            let len = a.length();
            let mut c = Correlations::at_length(&a, len).unwrap();
            for r in 0..1usize << len {
                for m in 1..=4 {
                    let exact = c.gamma_r(r, m).to_f64();
                    let est = brute_force_gamma_r(&a, len, r, m);
                    assert!(
                        (exact - est).abs() < 0.05,
                        "A={a} r={r} m={m}: {exact} vs {est}"
                    );
                }
            }
        }
    }

    fn arb_set() -> impl Strategy<Value = PatternSet> {
        prop::collection::btree_set(0u64..31, 0..5).prop_map(|vals| {
            let words = vals
                .into_iter()
                .map(|v| crate::words::Word::with_length(v + 1, 5, 2))
                .collect::<Vec<_>>();
            PatternSet::new(2, words).unwrap().remove_leading_zeros()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn operating_length_invariance(a in arb_set()) {
            let len = a.length();
            let mut c1 = Correlations::at_length(&a, len).unwrap();
            let mut c2 = Correlations::at_length(&a, len + 1).unwrap();
            for m in 1..=(3u64 << len) {
                prop_assert_eq!(c1.gamma(m).unwrap(), c2.gamma(m).unwrap());
            }
        }

        #[test]
        fn coefficients_are_bounded(a in arb_set()) {
            let mut c = Correlations::for_set(&a);
            let one = Rational::one();
            for m in 1..=40u64 {
                prop_assert!(c.gamma(m).unwrap().abs() <= one);
                for r in 0..c.table().modulus() {
                    prop_assert!(c.gamma_r(r, m).abs() <= one);
                }
            }
        }
    }
}
