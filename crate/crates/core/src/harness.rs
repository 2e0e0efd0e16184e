//! Check registry, suites, and report emission.

use std::fmt::Write as _;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::calculus;
use crate::error::{AlgebraError, Result};
use crate::hopf::{self, HopfContext};
use crate::presentations::{self as pres, build, HMode};
use crate::report::{CheckBuilder, CheckReport, Residual, Status};
use crate::superalg::{span_equal, Alphabet, Element};
use crate::tensorspace::{
    braid_residual, involution_and_projectors, quotient_relations, rtt_check, super_permutation, ybe_residual, Grading,
    SuperMatrix,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Treat `incomplete` as failure.
    pub strict: bool,
    pub degree_bound: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { strict: false, degree_bound: 4 }
    }
}

type CheckFn = fn(HMode, &RunOptions) -> Result<CheckReport>;

/// A registered check.
#[derive(Clone)]
pub struct CheckSpec {
    pub id: String,
    pub anchor: &'static str,
    pub suites: Vec<&'static str>,
    pub mode: HMode,
    run: CheckFn,
}

impl CheckSpec {
    /// Run the check; kernel errors become a failing report.
    pub fn run(&self, opts: &RunOptions) -> CheckReport {
        match (self.run)(self.mode, opts) {
            Ok(mut r) => {
                r.id = self.id.clone();
                r
            }
            Err(e) => {
                let mut b = CheckBuilder::new(self.id.clone(), self.anchor);
                b.require("error", false, e.to_string());
                b.finish()
            }
        }
    }
}

const ANCHOR_YBE: &str = "R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂";
const ANCHOR_YBE_UNGRADED: &str = "R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂, ungraded lifts";
const ANCHOR_BRAID: &str = "R̂₁₂R̂₂₃R̂₁₂ = R̂₂₃R̂₁₂R̂₂₃";
const ANCHOR_BRAID_UNGRADED: &str = "R̂_q = 𝒫 R_q, ungraded braid";
const ANCHOR_DIAG: &str = "R_q, P R̂_q = diag(1, 1, 1, −1) R_q: graded and ungraded YBE";
const ANCHOR_NOT_UNGRADED: &str = "R̂_h, ungraded braid: nonzero residual";
const ANCHOR_INVOLUTION: &str = "(R̂_h)² = I";
const ANCHOR_QUOTIENT: &str = "A ≅ A_h, Λ ≅ Λ_h via P±";
const ANCHOR_RTT: &str = "R_h T₁ T₂ = T₂ T₁ R_h";
const ANCHOR_RTT_Q: &str = "R_q T′₁ T′₂ = T′₂ T′₁ R_q";
const ANCHOR_CONFLUENCE: &str = "overlap ambiguities resolve (diamond lemma)";

/// `P R` with the super permutation.
pub fn braid_form(r: &SuperMatrix) -> Result<SuperMatrix> {
    super_permutation().matmul(r)
}

fn add_matrix(b: &mut CheckBuilder, label: &str, m: &SuperMatrix) {
    let al = Alphabet::new();
    for ((i, j), e) in m.entries() {
        b.zero(format!("{label} ({i:03b},{j:03b})"), e, &al);
    }
}

fn ybe_graded(mode: HMode, _: &RunOptions) -> Result<CheckReport> {
    let mut b = CheckBuilder::new("ybe.graded", ANCHOR_YBE);
    add_matrix(&mut b, "R_h", &ybe_residual(&pres::r_h(mode), Grading::Graded)?);
    add_matrix(&mut b, "R_q", &ybe_residual(&pres::r_q(), Grading::Graded)?);
    Ok(b.finish())
}

fn ybe_ungraded(mode: HMode, _: &RunOptions) -> Result<CheckReport> {
    let mut b = CheckBuilder::new("ybe.ungraded", ANCHOR_YBE_UNGRADED);
    add_matrix(&mut b, "R_h", &ybe_residual(&pres::r_h(mode), Grading::Ungraded)?);
    Ok(b.finish())
}

fn braid_graded(mode: HMode, _: &RunOptions) -> Result<CheckReport> {
    let mut b = CheckBuilder::new("braid.graded", ANCHOR_BRAID);
    add_matrix(&mut b, "R̂_h", &braid_residual(&braid_form(&pres::r_h(mode))?, Grading::Graded)?);
    add_matrix(&mut b, "R̂_q", &braid_residual(&braid_form(&pres::r_q())?, Grading::Graded)?);
    Ok(b.finish())
}

fn braid_ungraded(_: HMode, _: &RunOptions) -> Result<CheckReport> {
    let mut b = CheckBuilder::new("braid.ungraded", ANCHOR_BRAID_UNGRADED);
    add_matrix(&mut b, "R̂_q", &braid_residual(&braid_form(&pres::r_q())?, Grading::Ungraded)?);
    Ok(b.finish())
}

fn remark_diag(_: HMode, _: &RunOptions) -> Result<CheckReport> {
    let mut b = CheckBuilder::new("remark.diag_rq_ybe", ANCHOR_DIAG);
    let mut diag = SuperMatrix::identity(2);
    diag.set(3, 3, Element::from_int(-1));
    let dr = diag.matmul(&pres::r_q())?;
    let mut p = SuperMatrix::zeros(2);
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        p.set(i, j, Element::one());
    }
    let via_p = p.matmul(&braid_form(&pres::r_q())?)?;
    add_matrix(&mut b, "P R̂_q - diag R_q", &via_p.sub(&dr)?);
    for g in [Grading::Graded, Grading::Ungraded] {
        let label = if g == Grading::Graded { "graded" } else { "ungraded" };
        add_matrix(&mut b, &format!("R_q {label}"), &ybe_residual(&pres::r_q(), g)?);
        add_matrix(&mut b, &format!("diag R_q {label}"), &ybe_residual(&dr, g)?);
    }
    Ok(b.finish())
}

/// Passes when the ungraded braid residual of `R̂_h` is nonzero.
fn remark_not_ungraded(mode: HMode, _: &RunOptions) -> Result<CheckReport> {
    let mut b = CheckBuilder::new("remark.rhat_h_not_ungraded_braid", ANCHOR_NOT_UNGRADED);
    let res = braid_residual(&braid_form(&pres::r_h(mode))?, Grading::Ungraded)?;
    let nonzero = res.entries().filter(|(_, e)| !e.is_zero()).count();
    b.require("ungraded braid residual", nonzero > 0, "R̂_h satisfies the ungraded braid equation");
    b.note(format!("{nonzero} of 64 ungraded components nonzero"));
    Ok(b.finish())
}

fn involution(mode: HMode, _: &RunOptions) -> Result<CheckReport> {
    let (_, mut r) = involution_and_projectors("involution.Rh", ANCHOR_INVOLUTION, &braid_form(&pres::r_h(mode))?)?;
    r.anchor = ANCHOR_INVOLUTION.into();
    Ok(r)
}

fn nonzero(v: Vec<Element>) -> Vec<Element> {
    v.into_iter().filter(|e| !e.is_zero()).collect()
}

fn quotients(mode: HMode, _: &RunOptions) -> Result<CheckReport> {
    let mut b = CheckBuilder::new("quotient.planes", ANCHOR_QUOTIENT);
    let (proj, inv) = involution_and_projectors("involution", "", &braid_form(&pres::r_h(mode))?)?;
    let Some(proj) = proj else {
        b.require("projectors", false, format!("R̂_h is not an involution: {:?}", inv.residuals));
        return Ok(b.finish());
    };
    let a = build("A_h", mode)?;
    let l = build("Lambda_h", mode)?;
    let a_coords = [a.gen("x")?, a.gen("theta")?];
    let l_coords = [l.gen("xi")?, l.gen("y")?];
    let mut matches = Vec::new();
    for (name, for_a, for_l) in
        [("A <- P-, Λ <- P+", &proj.minus, &proj.plus), ("A <- P+, Λ <- P-", &proj.plus, &proj.minus)]
    {
        let ra = nonzero(quotient_relations(for_a, a_coords)?);
        let rl = nonzero(quotient_relations(for_l, l_coords)?);
        let ok = span_equal(&ra, &a.relations)? && span_equal(&rl, &l.relations)?;
        b.note(format!("{name}: {}", if ok { "matches A_h and Λ_h" } else { "no match" }));
        if ok {
            matches.push(name);
        }
    }
    b.require("conventions", matches.len() == 1, format!("{} conventions match", matches.len()));
    if let [m] = matches.as_slice() {
        b.note(format!("convention: {m} (relations are the image of the projector)"));
    }
    Ok(b.finish())
}

fn rtt_h(mode: HMode, _: &RunOptions) -> Result<CheckReport> {
    let gl = build("GL_h", mode)?;
    let t = gl.t.clone().expect("GL_h carries T");
    rtt_check("rtt.Rh", ANCHOR_RTT, &pres::r_h(mode), &t, &gl.system, &gl.relations)
}

fn rtt_q(mode: HMode, _: &RunOptions) -> Result<CheckReport> {
    let gl = build("GL_q", mode)?;
    let t = gl.t.clone().expect("GL_q carries T");
    let mut r = rtt_check("rtt.Rq", ANCHOR_RTT_Q, &pres::r_q(), &t, &gl.system, &gl.relations)?;
    r.notes.push("a d - d a read as a'd' - d'a'".into());
    Ok(r)
}

fn confluence_of(id: &'static str) -> CheckFn {
    fn run(id: &str, mode: HMode, opts: &RunOptions) -> Result<CheckReport> {
        let p = build(id, mode)?;
        let all = p.system.overlaps(opts.degree_bound)?;
        let mut b = CheckBuilder::new(format!("confluence.{id}"), ANCHOR_CONFLUENCE);
        for o in &all {
            b.zero(p.system.render(&Element::word(&o.word)), &o.discrepancy(), p.alphabet());
        }
        b.note(format!("{} overlaps up to degree {}", all.len(), opts.degree_bound));
        Ok(b.finish())
    }
    match id {
        "A_h" => |m, o| run("A_h", m, o),
        "Lambda_h" => |m, o| run("Lambda_h", m, o),
        "GL_h" => |m, o| run("GL_h", m, o),
        "GL_q" => |m, o| run("GL_q", m, o),
        _ => |m, o| run("GL_h_localized", m, o),
    }
}

fn with_hopf(f: fn(&HopfContext) -> Result<CheckReport>, mode: HMode) -> Result<CheckReport> {
    f(&HopfContext::new(mode)?)
}

struct Base {
    id: &'static str,
    anchor: &'static str,
    suites: &'static [&'static str],
    classical: bool,
    run: CheckFn,
}

fn base_checks() -> Vec<Base> {
    let b = |id, anchor, suites, classical, run| Base { id, anchor, suites, classical, run };
    vec![
        b("contract.superplane", pres::ANCHOR_SUPERPLANE, &["contraction"], true, |m, _| pres::contract_superplane(m)),
        b("contract.T", pres::ANCHOR_T, &["contraction"], true, |m, _| pres::contract_t(m)),
        b("contract.R", pres::ANCHOR_R, &["contraction"], true, |m, _| pres::contract_r(m)),
        b("ybe.graded", ANCHOR_YBE, &["ybe", "tensor"], true, ybe_graded),
        b("ybe.ungraded", ANCHOR_YBE_UNGRADED, &["ybe", "tensor", "remarks"], true, ybe_ungraded),
        b("braid.graded", ANCHOR_BRAID, &["ybe", "tensor"], true, braid_graded),
        b("braid.ungraded", ANCHOR_BRAID_UNGRADED, &["ybe", "tensor", "remarks"], true, braid_ungraded),
        b("remark.diag_rq_ybe", ANCHOR_DIAG, &["remarks", "tensor"], false, remark_diag),
        b("remark.rhat_h_not_ungraded_braid", ANCHOR_NOT_UNGRADED, &["remarks", "tensor"], false, remark_not_ungraded),
        b("involution.Rh", ANCHOR_INVOLUTION, &["tensor"], true, involution),
        b("quotient.planes", ANCHOR_QUOTIENT, &["tensor"], true, quotients),
        b("rtt.Rh", ANCHOR_RTT, &["rtt", "tensor"], true, rtt_h),
        b("rtt.Rq", ANCHOR_RTT_Q, &["rtt", "tensor"], false, rtt_q),
        b("hopf.coproduct", hopf::ANCHOR_COPRODUCT, &["hopf"], true, |m, _| with_hopf(hopf::coproduct_check, m)),
        b("hopf.counit", hopf::ANCHOR_COUNIT, &["hopf"], true, |m, _| with_hopf(hopf::counit_check, m)),
        b("hopf.antipode", hopf::ANCHOR_ANTIPODE, &["hopf"], true, |m, _| with_hopf(hopf::antipode_check, m)),
        b("hopf.berezinian", hopf::ANCHOR_BEREZINIAN, &["hopf"], true, |m, _| with_hopf(hopf::berezinian_check, m)),
        b("hopf.sl1", hopf::ANCHOR_SL, &["hopf"], true, |m, _| with_hopf(hopf::sl_quotient_check, m)),
        b("calc.consistency", calculus::ANCHOR_CONSISTENCY, &["calc"], true, |m, o| {
            calculus::consistency_check(m, o.degree_bound)
        }),
        b("calc.covariance", calculus::ANCHOR_COVARIANCE, &["calc"], true, |m, _| calculus::covariance_check(m)),
        b("confluence.A_h", ANCHOR_CONFLUENCE, &["confluence"], true, confluence_of("A_h")),
        b("confluence.Lambda_h", ANCHOR_CONFLUENCE, &["confluence"], true, confluence_of("Lambda_h")),
        b("confluence.GL_h", ANCHOR_CONFLUENCE, &["confluence"], true, confluence_of("GL_h")),
        b("confluence.GL_q", ANCHOR_CONFLUENCE, &["confluence"], false, confluence_of("GL_q")),
        b(
            "confluence.GL_h_localized",
            ANCHOR_CONFLUENCE,
            &["confluence", "hopf"],
            true,
            confluence_of("GL_h_localized"),
        ),
        b("demo.first_column", pres::ANCHOR_FIRST_COLUMN, &["demo"], true, |m, _| pres::first_column_demo(m)),
    ]
}

/// Every registered check: the generic ones, then their `h = 0` variants
/// under the `classical.` prefix.
pub fn registry() -> Vec<CheckSpec> {
    let base = base_checks();
    let mut out = Vec::with_capacity(2 * base.len());
    for c in &base {
        out.push(CheckSpec {
            id: c.id.to_string(),
            anchor: c.anchor,
            suites: c.suites.to_vec(),
            mode: HMode::Odd,
            run: c.run,
        });
    }
    for c in base.iter().filter(|c| c.classical) {
        out.push(CheckSpec {
            id: format!("classical.{}", c.id),
            anchor: c.anchor,
            suites: vec!["classical"],
            mode: HMode::Zero,
            run: c.run,
        });
    }
    out
}

pub const SUITES: [&str; 11] =
    ["all", "contraction", "ybe", "tensor", "rtt", "remarks", "hopf", "calc", "confluence", "demo", "classical"];

/// Checks of a suite in registry order.
pub fn suite(id: &str) -> Result<Vec<CheckSpec>> {
    if !SUITES.contains(&id) {
        return Err(AlgebraError::UnknownSuite(id.to_string()));
    }
    Ok(registry().into_iter().filter(|c| id == "all" || c.suites.contains(&id)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub incomplete: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub strict: bool,
    pub degree_bound: usize,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.summary.failed == 0 && !(self.strict && self.summary.incomplete > 0)
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok() {
            0
        } else {
            1
        }
    }

    /// Copy with all timings zeroed, for comparisons.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.elapsed_ms = 0.0;
        }
        r
    }

    pub fn get(&self, id: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Run the checks concurrently, keeping registry order in the report.
pub fn run_checks(suite_id: &str, checks: &[CheckSpec], opts: &RunOptions) -> Report {
    let reports: Vec<CheckReport> = thread::scope(|s| {
        let handles: Vec<_> = checks.iter().map(|c| s.spawn(move || c.run(opts))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    });
    let count = |st: Status| reports.iter().filter(|r| r.status == st).count();
    let summary =
        Summary { passed: count(Status::Pass), failed: count(Status::Fail), incomplete: count(Status::Incomplete) };
    Report {
        suite: suite_id.to_string(),
        strict: opts.strict,
        degree_bound: opts.degree_bound,
        checks: reports,
        summary,
    }
}

pub fn run_suite(id: &str, opts: &RunOptions) -> Result<Report> {
    Ok(run_checks(id, &suite(id)?, opts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Text => emit_text(report),
    }
}

fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let _ = writeln!(out, "{} {} ({})", c.status, c.id, c.anchor);
        if c.status != Status::Pass {
            for Residual { index, value } in &c.residuals {
                let _ = writeln!(out, "    {index}: {value}");
            }
            for n in &c.notes {
                let _ = writeln!(out, "    # {n}");
            }
        }
    }
    let s = &report.summary;
    let _ =
        writeln!(out, "suite {}: {} passed, {} failed, {} incomplete", report.suite, s.passed, s.failed, s.incomplete);
    out
}

pub fn parse_report(json: &str) -> Result<Report> {
    serde_json::from_str(json).map_err(|e| AlgebraError::Parse { line: e.line(), col: e.column(), msg: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_all_covers_everything() {
        let reg = registry();
        let mut ids: Vec<&str> = reg.iter().map(|c| c.id.as_str()).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
        assert_eq!(suite("all").unwrap().len(), n);
    }

    #[test]
    fn ybe_suite_has_four_checks() {
        let ids: Vec<String> = suite("ybe").unwrap().into_iter().map(|c| c.id).collect();
        assert_eq!(ids, ["ybe.graded", "ybe.ungraded", "braid.graded", "braid.ungraded"]);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(suite("nope"), Err(AlgebraError::UnknownSuite(_))));
    }

    #[test]
    fn json_round_trip() {
        let r = run_suite("ybe", &RunOptions::default()).unwrap();
        assert!(r.ok());
        let back = parse_report(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(back, r);
        let text = emit_report(&r, Format::Text);
        assert!(text.starts_with("PASS ybe.graded (R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂)\n"));
    }

    #[test]
    fn kernel_error_becomes_failure() {
        let spec = CheckSpec {
            id: "t".into(),
            anchor: "",
            suites: vec![],
            mode: HMode::Odd,
            run: |_, _| Err(AlgebraError::Pole("1/(q - 1)".into())),
        };
        let r = spec.run(&RunOptions::default());
        assert_eq!(r.status, Status::Fail);
    }
}
