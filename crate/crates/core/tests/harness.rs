use glh_core::harness::{emit_report, parse_report, run_suite, suite, Format, RunOptions, SUITES};
use glh_core::report::Status;

#[test]
fn reports_are_deterministic() {
    let opts = RunOptions::default();
    let a = run_suite("tensor", &opts).unwrap().without_timings();
    let b = run_suite("tensor", &opts).unwrap().without_timings();
    assert_eq!(emit_report(&a, Format::Json), emit_report(&b, Format::Json));
}

#[test]
fn structured_round_trip() {
    let r = run_suite("remarks", &RunOptions::default()).unwrap();
    assert_eq!(parse_report(&emit_report(&r, Format::Json)).unwrap(), r);
}

#[test]
fn every_suite_is_nonempty_and_within_all() {
    let all: Vec<String> = suite("all").unwrap().into_iter().map(|c| c.id).collect();
    for s in SUITES {
        let ids = suite(s).unwrap();
        assert!(!ids.is_empty(), "{s}");
        assert!(ids.iter().all(|c| all.contains(&c.id)));
    }
}

#[test]
fn classical_suite_passes() {
    let r = run_suite("classical", &RunOptions { strict: true, degree_bound: 4 }).unwrap();
    assert!(r.ok(), "{}", emit_report(&r, Format::Text));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn remark_on_diag_rq_fails_only_in_the_mixed_gradings() {
    let r = run_suite("remarks", &RunOptions::default()).unwrap();
    let c = r.get("remark.diag_rq_ybe").unwrap();
    assert_eq!(c.status, Status::Fail);
    assert!(c.residuals.iter().all(|x| x.index.starts_with("R_q ungraded") || x.index.starts_with("diag R_q graded")));
    assert!(c.residuals.iter().any(|x| x.index.starts_with("R_q ungraded")));
    assert!(c.residuals.iter().any(|x| x.index.starts_with("diag R_q graded")));
    assert_eq!(r.get("remark.rhat_h_not_ungraded_braid").unwrap().status, Status::Pass);
}

#[test]
fn text_report_lists_failures_with_residuals() {
    let r = run_suite("calc", &RunOptions::default()).unwrap();
    let text = emit_report(&r, Format::Text);
    assert!(text.lines().any(|l| l.starts_with("FAIL calc.consistency (")));
    assert!(text.contains("    Dx*Dtheta*theta: 2*h*Dtheta"));
    assert!(text.lines().any(|l| l.starts_with("PASS calc.covariance (")));
    assert_eq!(r.exit_code(), 1);
}
