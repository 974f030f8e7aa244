//! Exact correlation analysis of base-`k` pattern-counting sequences
//! `a_A(n) = (-1)^{#(A,n)}`.
//!
//! * [`words`] and [`pattern_sets`]: digit words, occurrence counts, and the
//!   canonical representations of a sequence.
//! * [`gamma_exact`]: exact rational correlation coefficients `γ(m)`.
//! * [`decider`]: decides whether `γ(m) = 0` for every `m >= 1`.
//! * [`classify`]: exhaustive binary censuses, the saturation condition, and
//!   Hadamard constructions.
//! * [`oracle`]: brute-force estimators used to cross-check the exact code.
//! * [`suites`]: named invariant suites.

pub mod classify;
pub mod decider;
pub mod error;
pub mod gamma_exact;
pub mod oracle;
pub mod pattern_sets;
pub mod rational;
pub mod suites;
pub mod words;

pub use decider::{decide, Decision, Verdict};
pub use error::{Error, Result};
pub use gamma_exact::{gamma, Correlations, GammaTable};
pub use pattern_sets::{PatternSet, PeriodicFactor};
pub use rational::Rational;
pub use words::Word;
