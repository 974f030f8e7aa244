//! Named invariant suites shared by the `verify` command and the acceptance
//! tests. Each check returns the first failure it finds, or `None`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{
    census, check_theorem_c, is_saturated, random_saturated, CensusFilter, CensusOptions,
};
use crate::decider::decide;
use crate::error::{Error, Result};
use crate::gamma_exact::Correlations;
use crate::oracle::{check_cancellation, sat_gamma_closed_form};
use crate::pattern_sets::{pow, PatternSet};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TheoremA,
    TheoremC,
    SaturatedProps,
    KernelProps,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::TheoremA,
        Suite::TheoremC,
        Suite::SaturatedProps,
        Suite::KernelProps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TheoremA => "theorem-a",
            Suite::TheoremC => "theorem-c",
            Suite::SaturatedProps => "saturated-props",
            Suite::KernelProps => "kernel-props",
        }
    }

    pub fn from_name(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub cases: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// A random admissible set with words of length `<= max_len`. Words with
/// leading zeros are allowed.
pub fn random_pattern_set<R: Rng + ?Sized>(rng: &mut R, base: u8, max_len: usize) -> PatternSet {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut words = Vec::new();
    for l in 1..=len {
        for x in 1..pow(base, l) as u64 {
            if rng.gen_bool(0.3) {
                words.push(Word::with_length(x, l, base));
            }
        }
    }
    PatternSet::new(base, words).expect("words are nonzero and share a base")
}

/// For saturated `A` of length `len`: saturation holds, the decider says
/// noncorrelated, every cancellation sum vanishes, and the closed form of
/// `γ_r(m)` matches the exact value for `m <= max_shift`.
pub fn saturated_instance_failure(
    a: &PatternSet,
    len: usize,
    max_shift: u64,
) -> Result<Option<String>> {
    let k = a.base();
    if !is_saturated(a)? {
        return Ok(Some(format!("{a}: not saturated")));
    }
    let d = decide(a)?;
    if !d.is_noncorrelated() {
        return Ok(Some(format!(
            "{a}: correlated with witness {:?}",
            d.witness_m
        )));
    }
    for x in 0..pow(k, len - 2) as u64 {
        let u = Word::with_length(x, len - 2, k);
        for j0 in 0..k {
            for j1 in j0 + 1..k {
                let s = check_cancellation(a, &u, j0, j1)?;
                if s != 0 {
                    return Ok(Some(format!(
                        "{a}: cancellation sum {s} at u={u}, ({j0}, {j1})"
                    )));
                }
            }
        }
    }
    let mut c = Correlations::at_length(a, len)?;
    for r in 0..pow(k, len) {
        for m in 1..=max_shift {
            let closed = sat_gamma_closed_form(a, r, m)?;
            let exact = c.gamma_r(r, m);
            if closed != exact {
                return Ok(Some(format!(
                    "{a}: γ_{r}({m}) = {exact}, closed form {closed}"
                )));
            }
        }
    }
    Ok(None)
}

fn first_mismatch(range: u64, mut f: impl FnMut(u64) -> bool) -> Option<u64> {
    (0..range).find(|&n| !f(n))
}

/// Kernel quotients are `k^{ℓ-1}`-periodic, `h` is `k^ℓ`-periodic, the
/// canonical forms represent `a_A` and are unique, and the decomposition
/// into invariant part and periodic factor reproduces `a_A`; all for
/// `n < range`.
pub fn representation_failure(a: &PatternSet, range: u64) -> Result<Option<String>> {
    let k = a.base() as u64;
    let len = a.length();
    for alpha in 1..=3u32 {
        for s in 0..k.pow(alpha) {
            let q = a.kernel_quotient(alpha, s)?;
            let bad = first_mismatch(range, |n| {
                a.evaluate(k.pow(alpha) * n + s) * a.evaluate(n) == q.get(n)
            });
            if let Some(n) = bad {
                return Ok(Some(format!(
                    "{a}: kernel quotient (k^{alpha}, {s}) fails at n={n}"
                )));
            }
        }
    }
    let h = a.periodic_factor(len)?;
    if let Some(n) = first_mismatch(range, |n| a.evaluate(n) * a.evaluate(n / k) == h.get(n)) {
        return Ok(Some(format!("{a}: h fails at n={n}")));
    }
    let nlz = a.remove_leading_zeros();
    let cl = a.to_constant_length(len)?;
    let longer = a.to_constant_length(len + 1)?;
    let bad = first_mismatch(range, |n| {
        let v = a.evaluate(n);
        nlz.evaluate(n) == v && cl.evaluate(n) == v && longer.evaluate(n) == v
    });
    if let Some(n) = bad {
        return Ok(Some(format!("{a}: canonical form differs at n={n}")));
    }
    if cl.remove_leading_zeros() != nlz || longer.remove_leading_zeros() != nlz {
        return Ok(Some(format!("{a}: no-leading-zeros form is not unique")));
    }
    if nlz.to_constant_length(len)? != cl
        || nlz.to_constant_length(len + 1)? != longer
        || cl.to_constant_length(len + 1)? != longer
    {
        return Ok(Some(format!("{a}: constant-length form is not unique")));
    }
    let dec = a.invariant_decomposition();
    if !dec.invariant.is_self_invariant() {
        return Ok(Some(format!(
            "{a}: invariant part {} has trailing zeros",
            dec.invariant
        )));
    }
    let bad = first_mismatch(range, |n| {
        a.evaluate(n) == dec.invariant.evaluate(n) * dec.factor.get(n)
    });
    if let Some(n) = bad {
        return Ok(Some(format!("{a}: decomposition fails at n={n}")));
    }
    if cl.invariant_decomposition() != dec {
        return Ok(Some(format!("{a}: decomposition is not unique")));
    }
    Ok(None)
}

/// Parameters for [`run_suite`].
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub workers: usize,
    pub instances: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            workers: 1,
            instances: 100,
        }
    }
}

pub fn run_suite<R: Rng + ?Sized>(
    suite: Suite,
    opts: &SuiteOptions,
    rng: &mut R,
) -> Result<SuiteReport> {
    let (cases, failure) = match suite {
        Suite::TheoremA => {
            let r = census(
                2,
                &CensusOptions {
                    length: 4,
                    filter: CensusFilter::All,
                    emit_list: false,
                    workers: opts.workers,
                },
            )?;
            let failure = (r.noncorrelated != 2272)
                .then(|| format!("{} noncorrelated of {}", r.noncorrelated, r.candidates));
            (r.candidates, failure)
        }
        Suite::TheoremC => {
            let r = check_theorem_c(5, opts.workers)?;
            let counts: Vec<u64> = r.by_exact_length.iter().map(|s| s.noncorrelated).collect();
            let failure = if !r.holds {
                Some(format!("mismatches: {}", r.counterexamples.join("; ")))
            } else if counts != [2, 4, 16, 256] {
                Some(format!("noncorrelated counts {counts:?}"))
            } else {
                None
            };
            (
                r.by_exact_length.iter().map(|s| s.candidates).sum(),
                failure,
            )
        }
        Suite::SaturatedProps => {
            let mut failure = None;
            for i in 0..opts.instances {
                let (k, len) = if i % 4 == 3 {
                    (4, rng.gen_range(2..=3))
                } else {
                    (2, rng.gen_range(2..=5))
                };
                let a = random_saturated(k, len, rng)?;
                failure = saturated_instance_failure(&a, len, 8)?;
                if failure.is_some() {
                    break;
                }
            }
            (opts.instances as u64, failure)
        }
        Suite::KernelProps => {
            let mut failure = None;
            for i in 0..opts.instances {
                let a = if i % 5 == 4 {
                    random_pattern_set(rng, 3, 3)
                } else {
                    random_pattern_set(rng, 2, 5)
                };
                failure = representation_failure(&a, 1 << 14)?;
                if failure.is_some() {
                    break;
                }
            }
            (opts.instances as u64, failure)
        }
    };
    Ok(SuiteReport {
        suite,
        passed: failure.is_none(),
        cases,
        failure,
    })
}
