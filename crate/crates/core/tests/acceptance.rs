//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use patcorr::classify::{
    census, check_theorem_c, random_saturated, CensusFilter, CensusOptions, CensusReport,
};
use patcorr::oracle::empirical_gamma;
use patcorr::suites::{random_pattern_set, representation_failure, saturated_instance_failure};
use patcorr::{decide, gamma, Correlations, PatternSet, Rational, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact match required for every integer count and rational value.
const CENSUS_LENGTH: usize = 4;
const CENSUS_CANDIDATES: u64 = 32768;
const CENSUS_NONCORRELATED: u64 = 2272;
const SELF_INVARIANT_LENGTH: usize = 5;
const SELF_INVARIANT_CANDIDATES: u64 = 65536;
const SELF_INVARIANT_COUNTS: [u64; 4] = [2, 4, 16, 256];
const RS_MAX_SHIFT: u64 = 256;
const TM_MAX_POWER: u32 = 8;
const SATURATED_INSTANCES: usize = 100;
const CLOSED_FORM_MAX_SHIFT: u64 = 8;
const ORACLE_SETS: usize = 50;
const ORACLE_MAX_SHIFT: u64 = 8;
const ORACLE_SAMPLES: u64 = 1 << 22;
const ORACLE_TOLERANCE: f64 = 0.02;
const KERNEL_SETS: usize = 100;
const KERNEL_RANGE: u64 = 1 << 14;
const DETERMINISM_WORKERS: [usize; 3] = [1, 4, 8];
const WORKERS: usize = 8;
const SEED: u64 = 0x5eed_0001;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: patcorr::Error) -> String {
    e.to_string()
}

fn binary(s: &str) -> PatternSet {
    PatternSet::parse(s, 2).expect("fixture parses")
}

fn census_opts(length: usize, filter: CensusFilter, workers: usize) -> CensusOptions {
    CensusOptions {
        length,
        filter,
        emit_list: false,
        workers,
    }
}

fn criterion_1(all4: &CensusReport) -> Check {
    ensure(all4.candidates == CENSUS_CANDIDATES, || {
        format!("{} candidates", all4.candidates)
    })?;
    ensure(all4.noncorrelated == CENSUS_NONCORRELATED, || {
        format!("{} noncorrelated", all4.noncorrelated)
    })?;
    Ok(format!(
        "{} of {} noncorrelated in {:.1}s",
        all4.noncorrelated, all4.candidates, all4.timing.wall_secs
    ))
}

fn criterion_2() -> Check {
    let tm = binary("1");
    let third = Rational::new(-1, 3);
    let g1 = gamma(&tm, 1).map_err(err)?;
    ensure(g1 == third, || format!("γ(1) = {g1}"))?;
    for j in 1..=TM_MAX_POWER {
        let g = gamma(&tm, 1 << j).map_err(err)?;
        ensure(g == third, || format!("γ(2^{j}) = {g}"))?;
    }
    let d = decide(&tm).map_err(err)?;
    ensure(
        d.verdict == Verdict::Correlated && d.witness_m == Some(1),
        || format!("decision {d:?}"),
    )?;
    ensure(d.gamma_witness.as_ref() == Some(&third), || {
        format!("witness value {:?}", d.gamma_witness)
    })?;
    Ok(format!(
        "γ(1) = γ(2^j) = -1/3 for j <= {TM_MAX_POWER}, witness m = 1"
    ))
}

fn criterion_3() -> Check {
    let rs = binary("11");
    let d = decide(&rs).map_err(err)?;
    ensure(d.verdict == Verdict::Noncorrelated, || {
        format!("decision {d:?}")
    })?;
    let mut c = Correlations::for_set(&rs);
    for m in 1..=RS_MAX_SHIFT {
        let g = c.gamma(m).map_err(err)?;
        ensure(g.is_zero(), || format!("γ({m}) = {g}"))?;
    }
    Ok(format!("noncorrelated, γ(m) = 0 for m <= {RS_MAX_SHIFT}"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let report = check_theorem_c(SELF_INVARIANT_LENGTH, WORKERS).map_err(err)?;
    let candidates: u64 = report
        .by_exact_length
        .iter()
        .map(|s| s.candidates)
        .sum::<u64>()
        + 2; // ∅ and {1} have length below 2
    ensure(candidates == SELF_INVARIANT_CANDIDATES, || {
        format!("{candidates} candidates")
    })?;
    ensure(report.holds, || {
        format!("mismatches: {:?}", report.counterexamples)
    })?;
    let counts: Vec<u64> = report
        .by_exact_length
        .iter()
        .map(|s| s.noncorrelated)
        .collect();
    ensure(counts == SELF_INVARIANT_COUNTS, || {
        format!("counts {counts:?}")
    })?;
    let sat: Vec<u64> = report.by_exact_length.iter().map(|s| s.saturated).collect();
    ensure(sat == counts, || format!("saturated counts {sat:?}"))?;
    Ok(format!(
        "{candidates} candidates, noncorrelated by length {counts:?}, equivalence holds ({:.1}s)",
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut binary_count = 0;
    let mut quaternary_count = 0;
    for i in 0..SATURATED_INSTANCES {
        let (k, len) = if i % 4 == 3 {
            quaternary_count += 1;
            (4, rng.gen_range(2..=3))
        } else {
            binary_count += 1;
            (2, rng.gen_range(2..=5))
        };
        let a = random_saturated(k, len, &mut rng).map_err(err)?;
        if let Some(f) = saturated_instance_failure(&a, len, CLOSED_FORM_MAX_SHIFT).map_err(err)? {
            return Err(f);
        }
    }
    Ok(format!(
        "{binary_count} binary and {quaternary_count} base-4 saturated instances noncorrelated, cancellations and closed forms exact"
    ))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut worst = 0.0f64;
    for _ in 0..ORACLE_SETS {
        let a = random_pattern_set(&mut rng, 2, 4);
        let mut c = Correlations::for_set(&a);
        for m in 1..=ORACLE_MAX_SHIFT {
            let exact = c.gamma(m).map_err(err)?.to_f64();
            let est = empirical_gamma(&a, m, ORACLE_SAMPLES).map_err(err)?.value;
            let diff = (est - exact).abs();
            worst = worst.max(diff);
            ensure(diff <= ORACLE_TOLERANCE, || {
                format!("A = {a}, m = {m}: exact {exact}, estimate {est}")
            })?;
        }
    }
    Ok(format!(
        "{ORACLE_SETS} sets, m <= {ORACLE_MAX_SHIFT}, N = 2^22, max deviation {worst:.2e} <= {ORACLE_TOLERANCE}"
    ))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for i in 0..KERNEL_SETS {
        let a = if i % 5 == 4 {
            random_pattern_set(&mut rng, 3, 3)
        } else {
            random_pattern_set(&mut rng, 2, 5)
        };
        if let Some(f) = representation_failure(&a, KERNEL_RANGE).map_err(err)? {
            return Err(f);
        }
    }
    Ok(format!(
        "{KERNEL_SETS} sets, quotients, h periodicity, canonical forms, decomposition for n < 2^14"
    ))
}

fn criterion_8(reports: &[&CensusReport]) -> Check {
    let mut correlated = 0;
    for r in reports {
        let c = r.candidates - r.noncorrelated;
        ensure(r.witnesses_verified == c, || {
            format!(
                "length {} {:?}: {} of {c} witnesses verified",
                r.length, r.filter, r.witnesses_verified
            )
        })?;
        ensure(r.capacity_violations == 0, || {
            format!("{} candidates exceed the bound", r.capacity_violations)
        })?;
        ensure(r.max_elements_stored <= r.capacity_bound, || {
            format!(
                "length {}: stored {} > bound {}",
                r.length, r.max_elements_stored, r.capacity_bound
            )
        })?;
        correlated += c;
    }
    let detail: Vec<String> = reports
        .iter()
        .map(|r| format!("{}/{}", r.max_elements_stored, r.capacity_bound))
        .collect();
    Ok(format!(
        "{correlated} witnesses re-verified, max stored/bound {}",
        detail.join(", ")
    ))
}

fn criterion_9(reference: &CensusReport) -> Check {
    let expected = serde_json::to_string(reference).map_err(|e| e.to_string())?;
    for &w in &DETERMINISM_WORKERS {
        let r = census(2, &census_opts(CENSUS_LENGTH, CensusFilter::All, w)).map_err(err)?;
        let got = serde_json::to_string(&r).map_err(|e| e.to_string())?;
        ensure(got == expected, || {
            format!("report differs with {w} workers")
        })?;
        let mut listed = census_opts(CENSUS_LENGTH - 1, CensusFilter::SelfInvariant, w);
        listed.emit_list = true;
        let a = serde_json::to_string(&census(2, &listed).map_err(err)?).unwrap();
        listed.workers = 1;
        let b = serde_json::to_string(&census(2, &listed).map_err(err)?).unwrap();
        ensure(a == b, || format!("listed report differs with {w} workers"))?;
    }
    Ok(format!(
        "identical reports with workers {DETERMINISM_WORKERS:?}"
    ))
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |n: u32, title: &str, result: Check| match result {
        Ok(detail) => println!("[PASS] {n}. {title}: {detail}"),
        Err(detail) => {
            failures += 1;
            println!("[FAIL] {n}. {title}: {detail}");
        }
    };

    let all4 = census(2, &census_opts(CENSUS_LENGTH, CensusFilter::All, WORKERS));
    let si5 = census(
        2,
        &census_opts(SELF_INVARIANT_LENGTH, CensusFilter::SelfInvariant, WORKERS),
    );

    match &all4 {
        Ok(r) => report(1, "binary census at length 4", criterion_1(r)),
        Err(e) => report(1, "binary census at length 4", Err(e.to_string())),
    }
    report(2, "Thue-Morse coefficients", criterion_2());
    report(3, "Rudin-Shapiro noncorrelation", criterion_3());
    report(
        4,
        "self-invariant equivalence at length <= 5",
        criterion_4(),
    );
    report(5, "saturated instances", criterion_5());
    report(6, "oracle agreement", criterion_6());
    report(7, "kernel and periodicity suite", criterion_7());
    match (&all4, &si5) {
        (Ok(a), Ok(b)) => report(8, "witness soundness and capacity", criterion_8(&[a, b])),
        _ => report(
            8,
            "witness soundness and capacity",
            Err("census failed".into()),
        ),
    }
    match &all4 {
        Ok(r) => report(9, "determinism across worker counts", criterion_9(r)),
        Err(e) => report(9, "determinism across worker counts", Err(e.to_string())),
    }

    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
