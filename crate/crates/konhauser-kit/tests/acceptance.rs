//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one PASS/FAIL line. Criteria are numbered and independent.
//!
//! Two criteria (8 and 10) compare the printed Fourier closed forms against
//! direct numerical transforms away from ξ1 = 0, where those closed forms
//! are only the even-entire part of the transform; they fail by amounts far
//! above any quadrature effect and are reported honestly rather than
//! loosened. The per-cell reports carry the measured deviations.

use konhauser_kit::harness::{run_suite, CheckKind, VerificationReport};

fn line(criterion: u32, passed: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
}

fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

fn summarize_failures(reports: &[VerificationReport]) -> String {
    let failed: Vec<&str> =
        reports.iter().filter(|r| !r.passed).map(|r| r.check_id.as_str()).collect();
    if failed.is_empty() {
        "all cells passed".to_string()
    } else {
        format!("{} failing: {}", failed.len(), failed.join(", "))
    }
}

#[test]
fn criterion_01_biorthogonality_matrix() {
    let t0 = std::time::Instant::now();
    let reports = run_suite("IKort.delta.*", 1, false);
    let elapsed = t0.elapsed().as_secs_f64();
    assert_eq!(reports.len(), 25);
    let ok = all_passed(&reports) && elapsed <= 60.0;
    line(
        1,
        ok,
        &format!(
            "5x5 matrix at (p, q, ups) = (10, 0.5, 2): {}; {elapsed:.1}s (budget 60s)",
            summarize_failures(&reports)
        ),
    );
    assert!(ok, "{}", summarize_failures(&reports));
}

#[test]
fn criterion_02_analytic_anchor() {
    let reports = run_suite("IKanchor.p3", 1, false);
    let r = &reports[0];
    let ok = r.passed && r.rel_err <= 1e-8;
    line(2, ok, &format!("J(0,0) at p=3 vs 4/3: rel {:.2e} (tol 1e-8)", r.rel_err));
    assert!(ok);
}

#[test]
fn criterion_03_representation_equivalence() {
    let t0 = std::time::Instant::now();
    let mut reports = run_suite("IZrel.equiv", 1, false);
    reports.extend(run_suite("Thm8.kdf", 1, false));
    reports.extend(run_suite("MIkampe.equiv", 1, false));
    let elapsed = t0.elapsed().as_secs_f64();
    let worst = reports.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let ok = all_passed(&reports) && elapsed <= 5.0;
    line(
        3,
        ok,
        &format!("IZrel/Kampé/modified-Kampé grids: worst rel {worst:.2e} (tol 1e-12); {elapsed:.2}s (budget 5s)"),
    );
    assert!(ok, "{}", summarize_failures(&reports));
}

#[test]
fn criterion_04_reductions() {
    let mut reports = run_suite("Remark5.reduction", 1, false);
    reports.extend(run_suite("Prabhakar.reduction", 1, false));
    let worst = reports.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let ok = all_passed(&reports);
    line(4, ok, &format!("finite-family reduction and e/cos values: worst rel {worst:.2e} (tol 1e-12)"));
    assert!(ok, "{}", summarize_failures(&reports));
}

#[test]
fn criterion_05_laplace_closed_forms() {
    let t0 = std::time::Instant::now();
    let mut reports = run_suite("Elap.*", 1, false);
    reports.extend(run_suite("ML6lap.*", 1, false));
    let elapsed = t0.elapsed().as_secs_f64();
    let ok = all_passed(&reports) && elapsed <= 30.0;
    line(
        5,
        ok,
        &format!(
            "1-D (tol 1e-8) and 2-D (tol 1e-7/1e-6) transforms, >= 3 points each: {}; {elapsed:.1}s (budget 30s)",
            summarize_failures(&reports)
        ),
    );
    assert!(ok, "{}", summarize_failures(&reports));
}

#[test]
fn criterion_06_fractional_shift_laws() {
    let mut reports = run_suite("Efracint.*", 1, false);
    reports.extend(run_suite("modEfracint.*", 1, false));
    reports.extend(run_suite("modEdoublefracint.*", 1, false));
    reports.extend(run_suite("Efracder.*", 1, false));
    reports.extend(run_suite("modEfracder.*", 1, false));
    reports.extend(run_suite("modEdoublefracder.*", 1, false));
    let ok = all_passed(&reports);
    line(
        6,
        ok,
        &format!(
            "integral shifts (tol 1e-6) and inverse-route derivatives (tol 1e-5): {}",
            summarize_failures(&reports)
        ),
    );
    assert!(ok, "{}", summarize_failures(&reports));
}

#[test]
fn criterion_07_operator_algebra() {
    let mut reports = run_suite("op0.reduction", 1, false);
    reports.extend(run_suite("DIT.product", 1, false));
    reports.extend(run_suite("E1.semigroup", 1, false));
    reports.extend(run_suite("E2.rlreduction", 1, false));
    reports.extend(run_suite("Dinv.leftinverse", 1, false));
    reports.extend(run_suite("con.*", 1, false));
    let ok = all_passed(&reports);
    line(
        7,
        ok,
        &format!(
            "op0 1e-9, kernel product 1e-5, semigroup 1e-4, RL case 1e-6, left inverse 1e-4, norm bounds: {}",
            summarize_failures(&reports)
        ),
    );
    assert!(ok, "{}", summarize_failures(&reports));
}

#[test]
fn criterion_08_fourier() {
    let mut reports = run_suite("F1.closed_vs_quad.*", 1, false);
    reports.extend(run_suite("F2.closed_vs_quad.*", 1, false));
    reports.extend(run_suite("Parseval.eq1.*", 1, false));
    let f_cells: Vec<&VerificationReport> =
        reports.iter().filter(|r| r.check_id.starts_with("F")).collect();
    let xi0_pass = f_cells
        .iter()
        .filter(|r| r.check_id.ends_with("0") && r.check_id.contains(".p0"))
        .all(|r| r.passed);
    let ok = all_passed(&reports);
    line(
        8,
        ok,
        &format!(
            "F1/F2 at 9 frequency points (tol 1e-5) + Parseval pairing (tol 1e-3): {}. \
             The closed forms are the even-entire part of the transforms: exact at xi1 = 0 \
             (those cells pass at ~1e-9, xi1=0 column pass = {xi0_pass}), but differing from \
             the true transforms by 0.3%-380% at xi1 in {{0.5, 1}}; the Parseval frequency \
             integral of these forms is truncation-dependent. No implementation can close \
             this gap; see the per-cell notes.",
            summarize_failures(&reports)
        ),
    );
    assert!(ok, "{}", summarize_failures(&reports));
}

#[test]
fn criterion_09_limit_relation() {
    let reports = run_suite("limI.convergence.*", 1, false);
    assert_eq!(reports.len(), 4);
    let ok = all_passed(&reports);
    let sigmas: Vec<String> = reports
        .iter()
        .map(|r| {
            let s = r.notes.split(';').next().unwrap_or("").trim().to_string();
            s
        })
        .collect();
    line(
        9,
        ok,
        &format!("scaled error decreases monotonically over p = 1e3, 1e4, 1e5 for n <= 3; recorded {}", sigmas.join(", ")),
    );
    assert!(ok, "{}", summarize_failures(&reports));
}

#[test]
fn criterion_10_full_suite() {
    let t0 = std::time::Instant::now();
    let serial = run_suite("*", 1, false);
    let serial_time = t0.elapsed().as_secs_f64();
    let parallel = run_suite("*", 8, false);
    assert_eq!(serial.len(), parallel.len());
    let mut identical = true;
    for (a, b) in serial.iter().zip(parallel.iter()) {
        identical &= a.check_id == b.check_id
            && format!("{:?}{:?}", a.lhs, a.rhs) == format!("{:?}{:?}", b.lhs, b.rhs)
            && a.abs_err.to_bits() == b.abs_err.to_bits()
            && a.passed == b.passed;
    }
    let all_pass = all_passed(&serial);
    let in_budget = serial_time <= 600.0;
    let failed: Vec<&str> =
        serial.iter().filter(|r| !r.passed).map(|r| r.check_id.as_str()).collect();
    let non_fourier_fail =
        failed.iter().any(|id| !(id.starts_with("F1.") || id.starts_with("F2.") || id.starts_with("Parseval.eq1")));
    let ok = all_pass && in_budget && identical;
    line(
        10,
        ok,
        &format!(
            "{} checks in {serial_time:.0}s single worker (budget 600s); parallel(8) reports identical = {identical}; \
             {} failing ({}); every non-Fourier check passes = {}",
            serial.len(),
            failed.len(),
            failed.join(", "),
            !non_fourier_fail,
        ),
    );
    assert!(ok, "failing checks: {failed:?}; identical={identical}; time={serial_time:.0}s");
}
