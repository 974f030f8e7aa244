//! Brute-force cross-checks: finite averages of `a(n)a(n+m)` and direct
//! evaluation of the cancellation identities behind saturation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::is_saturated;
use crate::error::{Error, Result};
use crate::pattern_sets::{pow, PatternSet};
use crate::rational::Rational;
use crate::words::Word;

/// A finite-`N` estimate of a correlation coefficient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub samples: u64,
    pub shift: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<usize>,
}

const CHUNK: usize = 1 << 16;

/// `a(0), …, a(count-1)`, built from `a(n) = a(⌊n/k⌋)·h(n mod k^ℓ)`.
pub fn sign_table(a: &PatternSet, count: usize) -> Vec<i8> {
    let len = a.length();
    let h = a
        .periodic_factor(len)
        .expect("ℓ(A) is always a valid length");
    let k = a.base() as usize;
    let p = h.period();
    let hv = h.values();
    let mut out = Vec::with_capacity(count);
    if count > 0 {
        out.push(1i8);
    }
    for n in 1..count {
        let v = out[n / k] * hv[n % p];
        out.push(v);
    }
    out
}

/// `Σ_{n < N, n ∈ class} a(n)a(n+m)`, summed exactly over disjoint ranges.
fn correlation_sum(a: &PatternSet, m: u64, samples: u64, class: Option<(usize, usize)>) -> i64 {
    let table = sign_table(a, (samples + m) as usize);
    let m = m as usize;
    let n = samples as usize;
    (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            match class {
                None => (lo..hi)
                    .map(|i| (table[i] * table[i + m]) as i64)
                    .sum::<i64>(),
                Some((r, p)) => (lo..hi)
                    .filter(|i| i % p == r)
                    .map(|i| (table[i] * table[i + m]) as i64)
                    .sum::<i64>(),
            }
        })
        .sum()
}

/// `(1/N) Σ_{n<N} a(n)a(n+m)`.
pub fn empirical_gamma(a: &PatternSet, m: u64, samples: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let sum = correlation_sum(a, m, samples, None);
    Ok(Estimate {
        value: sum as f64 / samples as f64,
        samples,
        shift: m,
        residue: None,
    })
}

/// `(k^ℓ/N) Σ_{n<N, n ≡ r mod k^ℓ} a(n)a(n+m)` with `ℓ = ℓ(A)`.
pub fn empirical_gamma_r(a: &PatternSet, r: usize, m: u64, samples: u64) -> Result<Estimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let p = pow(a.base(), a.length());
    if r >= p {
        return Err(Error::InvalidArgument(format!(
            "residue {r} must be below {p}"
        )));
    }
    let sum = correlation_sum(a, m, samples, Some((r, p)));
    Ok(Estimate {
        value: sum as f64 * p as f64 / samples as f64,
        samples,
        shift: m,
        residue: Some(r),
    })
}

/// `Σ_{i ∈ Σ_k} a([i u j0]_k)·a([i u j1]_k)`; zero whenever `A` is saturated.
pub fn check_cancellation(a: &PatternSet, u: &Word, j0: u8, j1: u8) -> Result<i64> {
    let k = a.base();
    if u.base() != k {
        return Err(Error::MixedBase(k, u.base()));
    }
    if j0 >= k || j1 >= k {
        return Err(Error::DigitOutOfRange {
            digit: j0.max(j1),
            base: k,
        });
    }
    if j0 == j1 {
        return Err(Error::InvalidArgument("j0 and j1 must differ".into()));
    }
    Ok((0..k)
        .map(|i| {
            let w0 = u.prepend(i).append(j0);
            let w1 = u.prepend(i).append(j1);
            (a.evaluate(w0.value()) * a.evaluate(w1.value())) as i64
        })
        .sum())
}

/// Closed form of `γ_r(m)`, `m >= 1`, for saturated `A`:
/// `a(r)a(r+m)` if `(r mod k) + m < k`, else `0`.
pub fn sat_gamma_closed_form(a: &PatternSet, r: usize, m: u64) -> Result<Rational> {
    if m == 0 {
        return Err(Error::ZeroShift);
    }
    if !is_saturated(a)? {
        return Err(Error::NotSaturated);
    }
    let k = a.base() as u64;
    let p = pow(a.base(), a.remove_leading_zeros().length());
    if r >= p {
        return Err(Error::InvalidArgument(format!(
            "residue {r} must be below {p}"
        )));
    }
    if (r as u64 % k) + m < k {
        let r = r as u64;
        Ok(Rational::from_integer(
            (a.evaluate(r) * a.evaluate(r + m)) as i64,
        ))
    } else {
        Ok(Rational::zero())
    }
}
