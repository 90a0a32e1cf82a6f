//! Acceptance criteria 1–9, one `PASS`/`FAIL` line each. Runs without the
//! libtest harness so the lines always reach stdout; any failure exits 1.

use std::time::{Duration, Instant};

use commute_lab::harness::{run_suite, with_threads, Suite, SuiteReport, VerifyOptions};
use serde_json::Value;

fn report(id: u32, name: &str, ok: bool, detail: String) -> bool {
    println!(
        "criterion {id} {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn timed(suite: Suite, opts: &VerifyOptions) -> (SuiteReport, Duration) {
    let start = Instant::now();
    let r = run_suite(suite, opts).expect("suite runs");
    (r, start.elapsed())
}

fn default_run(suite: Suite) -> (SuiteReport, Duration) {
    timed(suite, &VerifyOptions::default())
}

fn summary(r: &SuiteReport, key: &str) -> String {
    match r.summary.get(key) {
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
        None => "-".into(),
    }
}

fn failures(r: &SuiteReport) -> String {
    if r.failures.is_empty() {
        return String::new();
    }
    format!(
        "; first failures: {}",
        r.failures
            .iter()
            .take(5)
            .cloned()
            .collect::<Vec<_>>()
            .join("; ")
    )
}

fn criterion_1_oracle_equivalence() -> bool {
    let (r, took) = default_run(Suite::Oracle);
    let small = r.summary["small_sets"].as_u64().unwrap_or(0);
    let large = r.summary["large_sets"].as_u64().unwrap_or(0);
    let ok = r.passed() && small >= 200 && large >= 50 && took < Duration::from_secs(300);
    report(
        1,
        "oracle-equivalence",
        ok,
        format!(
            "{small} sets of size 1..4, {large} of size 5..6, {took:.1?}{}",
            failures(&r)
        ),
    )
}

fn criterion_2_commuting_bound() -> bool {
    let (r, _) = default_run(Suite::Theorem1);
    let random = r
        .rows
        .iter()
        .filter(|row| {
            row["instance"]
                .as_str()
                .is_some_and(|i| i.starts_with("random-matrix") || i.starts_with("pencil"))
        })
        .count();
    let ok = r.passed() && r.params["trials"] == 1000 && r.rows.len() > 1000;
    report(
        2,
        "T<=8delta",
        ok,
        format!(
            "{} measures, {random} random, max T/δ = {}{}",
            r.rows.len(),
            summary(&r, "max_T_over_delta"),
            failures(&r)
        ),
    )
}

fn criterion_3_sharpness_family() -> bool {
    let (r, _) = default_run(Suite::SharpRatio);
    let ns: Vec<u64> = r
        .rows
        .iter()
        .map(|row| row["N"].as_u64().unwrap())
        .collect();
    let brute = r
        .rows
        .iter()
        .filter(|row| row.get("oracle_delta").is_some())
        .count();
    let ok = r.passed() && ns == (2..=10).collect::<Vec<_>>() && brute == 3;
    report(
        3,
        "sharpness",
        ok,
        format!(
            "N = 2..10, N·T(10) = {}, oracle δ for N ≤ 4{}",
            summary(&r, "last_N_times_T"),
            failures(&r)
        ),
    )
}

fn criterion_4_affine_bijection() -> bool {
    let (r, _) = default_run(Suite::AffineBijection);
    let ok = r.passed() && r.params["trials"] == 100;
    report(
        4,
        "affine-bijection",
        ok,
        format!("{} sets{}", r.rows.len(), failures(&r)),
    )
}

fn criterion_5_lower_bounds() -> bool {
    let (r, _) = default_run(Suite::LowerBounds);
    let ok = r.passed() && r.rows.len() >= 200;
    report(
        5,
        "lower-bounds",
        ok,
        format!("{} instances{}", r.rows.len(), failures(&r)),
    )
}

fn criterion_6_energy_union_bounds() -> bool {
    let (r, _) = default_run(Suite::Wtun);
    let ok = r.passed() && r.rows.len() >= 500;
    report(
        6,
        "union-bounds",
        ok,
        format!(
            "{} instances, {} exact ties{}",
            r.rows.len(),
            summary(&r, "union_exact_ties"),
            failures(&r)
        ),
    )
}

fn criterion_7_closed_form_energies() -> bool {
    let (r, _) = default_run(Suite::ClosedForms);
    let ok = r.passed() && r.rows.len() == 11;
    report(7, "closed-forms", ok, format!("N = 2..12{}", failures(&r)))
}

fn criterion_8_growth_properties() -> bool {
    let (r, took) = default_run(Suite::Growth);
    let ok = r.passed() && took < Duration::from_secs(1800);
    report(
        8,
        "growth",
        ok,
        format!(
            "max C_meas² = {}, {took:.1?}{}",
            summary(&r, "C_meas_squared_max"),
            failures(&r)
        ),
    )
}

fn criterion_9_determinism() -> bool {
    let run_all = |threads| {
        with_threads(Some(threads), || {
            Suite::ALL
                .iter()
                .map(|&s| {
                    run_suite(s, &VerifyOptions::default())
                        .expect("suite runs")
                        .to_json()
                })
                .collect::<String>()
        })
        .expect("pool starts")
    };
    let one = run_all(1);
    let four = run_all(4);
    let ok = one == four;
    report(
        9,
        "determinism",
        ok,
        format!("{} bytes across 8 suites, threads 1 vs 4", one.len()),
    )
}

fn main() {
    let criteria: [fn() -> bool; 9] = [
        criterion_1_oracle_equivalence,
        criterion_2_commuting_bound,
        criterion_3_sharpness_family,
        criterion_4_affine_bijection,
        criterion_5_lower_bounds,
        criterion_6_energy_union_bounds,
        criterion_7_closed_form_energies,
        criterion_8_growth_properties,
        criterion_9_determinism,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
