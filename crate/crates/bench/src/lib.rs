//! Inputs shared by the benchmarks.

use patcorr::PatternSet;

/// `(label, base, patterns)` covering correlated and noncorrelated cases.
pub const FIXTURES: &[(&str, u8, &str)] = &[
    ("thue-morse", 2, "1"),
    ("rudin-shapiro", 2, "11"),
    ("saturated-4", 2, "1001,1011,1101,1111,11"),
    ("mixed-4", 2, "0110,101,1"),
    ("ternary-2", 3, "12,2"),
];

pub fn fixtures() -> Vec<(&'static str, PatternSet)> {
    FIXTURES
        .iter()
        .map(|&(name, k, s)| (name, PatternSet::parse(s, k).expect("fixture parses")))
        .collect()
}
