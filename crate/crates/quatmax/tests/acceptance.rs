//! Acceptance suite: one test per shipped criterion, each printing a
//! single PASS/FAIL line (visible with `cargo test --test acceptance --
//! --nocapture`). Tolerances and sample counts are pinned here so a
//! regression in the suite defaults cannot silently weaken the gate.

use std::time::{Duration, Instant};

use quatmax::harness::{run_suite, Bound, CheckResult, RunConfig, Suite, SuiteReport};

fn run(suite: Suite) -> (SuiteReport, Duration) {
    let cfg = RunConfig::default();
    let start = Instant::now();
    let report = run_suite(suite, &cfg).expect("suite runs");
    (report, start.elapsed())
}

fn find<'r>(report: &'r SuiteReport, name: &str) -> &'r CheckResult {
    report
        .checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("check `{name}` missing from suite `{}`", report.suite))
}

struct Expectation {
    name: &'static str,
    tolerance: f64,
    bound: Bound,
    min_samples: usize,
}

fn assert_criterion(
    number: usize,
    label: &str,
    report: &SuiteReport,
    elapsed: Duration,
    budget: Duration,
    expectations: &[Expectation],
) {
    let mut failures = Vec::new();
    for e in expectations {
        let check = find(report, e.name);
        if check.tolerance != e.tolerance {
            failures.push(format!(
                "{}: tolerance {} differs from pinned {}",
                e.name, check.tolerance, e.tolerance
            ));
        }
        if check.bound != e.bound {
            failures.push(format!("{}: bound direction changed", e.name));
        }
        if check.samples < e.min_samples {
            failures.push(format!(
                "{}: only {} samples, need at least {}",
                e.name, check.samples, e.min_samples
            ));
        }
        if !check.passed {
            failures.push(format!(
                "{}: observed {:.3e} violates {:.3e} ({})",
                e.name,
                check.observed,
                check.tolerance,
                check.detail.clone().unwrap_or_default()
            ));
        }
    }
    if elapsed > budget {
        failures.push(format!(
            "runtime {:.2} s exceeds budget {:.0} s",
            elapsed.as_secs_f64(),
            budget.as_secs_f64()
        ));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE {number} {label}: {status} ({:.2} s)",
        elapsed.as_secs_f64()
    );
    assert!(failures.is_empty(), "criterion {number} ({label}): {failures:?}");
}

#[test]
fn criterion_1_algebra() {
    let (report, elapsed) = run(Suite::Algebra);
    assert_criterion(
        1,
        "algebra",
        &report,
        elapsed,
        Duration::from_secs(2),
        &[
            Expectation { name: "algebra.basis-table", tolerance: 0.0, bound: Bound::Upper, min_samples: 16 },
            Expectation {
                name: "algebra.associativity",
                tolerance: 1e-12,
                bound: Bound::Upper,
                min_samples: 100_000,
            },
            Expectation {
                name: "algebra.distributivity",
                tolerance: 1e-12,
                bound: Bound::Upper,
                min_samples: 100_000,
            },
            Expectation {
                name: "algebra.anticommutator-dot",
                tolerance: 1e-14,
                bound: Bound::Upper,
                min_samples: 10_000,
            },
            Expectation {
                name: "algebra.anticommutator-purity",
                tolerance: 1e-14,
                bound: Bound::Upper,
                min_samples: 10_000,
            },
            Expectation {
                name: "algebra.formula-vs-table",
                tolerance: 1e-14,
                bound: Bound::Upper,
                min_samples: 10_000,
            },
        ],
    );
}

#[test]
fn criterion_2_operator_identities() {
    let (report, elapsed) = run(Suite::Identities);
    // 1000 points for each of the five catalog profiles
    assert_criterion(
        2,
        "operator identities",
        &report,
        elapsed,
        Duration::from_secs(2),
        &[
            Expectation {
                name: "identities.leibniz",
                tolerance: 1e-10,
                bound: Bound::Upper,
                min_samples: 5000,
            },
            Expectation {
                name: "identities.gauge",
                tolerance: 1e-10,
                bound: Bound::Upper,
                min_samples: 5000,
            },
            Expectation {
                name: "identities.d-squared",
                tolerance: 1e-10,
                bound: Bound::Upper,
                min_samples: 5000,
            },
            Expectation {
                name: "identities.d-forms-agree",
                tolerance: 1e-13,
                bound: Bound::Upper,
                min_samples: 5000,
            },
        ],
    );
}

#[test]
fn criterion_3_system_equivalence() {
    let (report, elapsed) = run(Suite::Equivalence);
    // 1000 points in each of vacuum, exp, product-exp
    assert_criterion(
        3,
        "system equivalence",
        &report,
        elapsed,
        Duration::from_secs(5),
        &[
            Expectation {
                name: "equivalence.map-vs-direct",
                tolerance: 1e-11,
                bound: Bound::Upper,
                min_samples: 3000,
            },
            Expectation {
                name: "equivalence.inverse-round-trip",
                tolerance: 1e-12,
                bound: Bound::Upper,
                min_samples: 3000,
            },
            Expectation {
                name: "equivalence.scalar-vector-split",
                tolerance: 1e-13,
                bound: Bound::Upper,
                min_samples: 3000,
            },
        ],
    );
}

#[test]
fn criterion_4_transform_annihilation() {
    let (report, elapsed) = run(Suite::Darboux);
    // four smooth generator/seed pairs at 1000 points each, plus the
    // second-order grid study
    assert_criterion(
        4,
        "transform annihilation",
        &report,
        elapsed,
        Duration::from_secs(10),
        &[
            Expectation {
                name: "darboux.annihilation",
                tolerance: 1e-10,
                bound: Bound::Upper,
                min_samples: 4000,
            },
            Expectation {
                name: "darboux.grid-order",
                tolerance: 0.2,
                bound: Bound::Upper,
                min_samples: 3,
            },
        ],
    );
}

#[test]
fn criterion_5_riccati_and_factorization() {
    let (report, elapsed) = run(Suite::Riccati);
    assert_criterion(
        5,
        "riccati and factorization",
        &report,
        elapsed,
        Duration::from_secs(5),
        &[
            Expectation {
                name: "riccati.log-derivative",
                tolerance: 1e-10,
                bound: Bound::Upper,
                min_samples: 5000,
            },
            Expectation {
                name: "riccati.perturbation-witness",
                tolerance: 1e-3,
                bound: Bound::Lower,
                min_samples: 4,
            },
            Expectation {
                name: "riccati.factorization",
                tolerance: 1e-9,
                bound: Bound::Upper,
                min_samples: 5000,
            },
        ],
    );
}

#[test]
fn criterion_6_fundamental_solution() {
    let (report, elapsed) = run(Suite::Fundamental);
    // route equality on 1000 annulus points; grid sweep over the 33^3
    // exclusion grid restricted to 0.1 < |x| <= 2
    assert_criterion(
        6,
        "fundamental solution",
        &report,
        elapsed,
        Duration::from_secs(10),
        &[
            Expectation {
                name: "fundamental.route-equality",
                tolerance: 1e-11,
                bound: Bound::Upper,
                min_samples: 1000,
            },
            Expectation {
                name: "fundamental.dirac-grid",
                tolerance: 1e-8,
                bound: Bound::Upper,
                min_samples: 10_000,
            },
            Expectation {
                name: "fundamental.kernel-helmholtz",
                tolerance: 1e-9,
                bound: Bound::Upper,
                min_samples: 1000,
            },
        ],
    );
}

#[test]
fn criterion_7_static_solutions() {
    let (report, elapsed) = run(Suite::Darboux);
    assert_criterion(
        7,
        "static solutions close the loop",
        &report,
        elapsed,
        Duration::from_secs(5),
        &[
            Expectation {
                name: "darboux.static-classical",
                tolerance: 1e-9,
                bound: Bound::Upper,
                min_samples: 3000,
            },
            Expectation {
                name: "darboux.static-classical-singular",
                tolerance: 1e-8,
                bound: Bound::Upper,
                min_samples: 1000,
            },
        ],
    );
}

#[test]
fn criterion_8_reproducibility() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_quatmax");
    let dir = std::env::temp_dir().join(format!("quatmax-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_a = dir.join("all-a.json");
    let out_b = dir.join("all-b.json");

    for out in [&out_a, &out_b] {
        let status = std::process::Command::new(bin)
            .args(["verify", "all", "--seed", "42", "--out"])
            .arg(out)
            .stdout(std::process::Stdio::null())
            .status()
            .expect("binary runs");
        assert!(status.success(), "verify all --seed 42 must pass");
    }
    let elapsed = start.elapsed();

    let strip = |path: &std::path::Path| -> serde_json::Value {
        let text = std::fs::read_to_string(path).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v.as_object_mut().unwrap().remove("timestamp_unix");
        v
    };
    let a = strip(&out_a);
    let b = strip(&out_b);

    let mut failures = Vec::new();
    if a != b {
        failures.push("reports differ between identical runs".to_string());
    }
    if a["seed"] != serde_json::json!(42) {
        failures.push("seed not echoed in the report".to_string());
    }
    // both runs together must be comfortably inside the 60 s budget
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("two runs took {:.1} s", elapsed.as_secs_f64()));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE 8 reproducibility: {status} ({:.2} s for two runs)",
        elapsed.as_secs_f64()
    );
    std::fs::remove_dir_all(&dir).ok();
    assert!(failures.is_empty(), "criterion 8: {failures:?}");
}
