use std::fs;
use std::path::PathBuf;

use glh_core::dsl::parse_dsl;
use glh_core::presentations::{build, HMode, PRESENTATION_IDS};

fn golden_path(id: &str, mode: HMode) -> PathBuf {
    let suffix = match mode {
        HMode::Odd => "",
        HMode::Zero => ".classical",
    };
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{id}{suffix}.rules"))
}

#[test]
fn rendered_rules_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for id in ["A_h", "Lambda_h", "GL_h", "GL_q", "GL_h_localized", "Calculus_h"] {
        for mode in [HMode::Odd, HMode::Zero] {
            let p = build(id, mode).unwrap();
            let got = p.render_rules();
            let path = golden_path(id, mode);
            if update {
                fs::write(&path, &got).unwrap();
            }
            let want = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(got, want, "{id} ({mode})");
        }
    }
}

#[test]
fn every_presentation_builds_in_both_modes() {
    for id in PRESENTATION_IDS {
        for mode in [HMode::Odd, HMode::Zero] {
            build(id, mode).unwrap_or_else(|e| panic!("{id} ({mode}): {e}"));
        }
    }
}

#[test]
fn classical_rules_are_the_h_free_parts() {
    for id in ["A_h", "Lambda_h", "GL_h", "Calculus_h"] {
        let odd = build(id, HMode::Odd).unwrap();
        let zero = build(id, HMode::Zero).unwrap();
        let stripped = odd.system.drop_h().unwrap();
        assert_eq!(stripped.rules(), zero.system.rules(), "{id}");
    }
}

#[test]
fn superplane_normal_forms() {
    let a = build("A_h", HMode::Odd).unwrap();
    let nf = |s: &str| a.alphabet().render(&a.nf(&a.parse(s).unwrap()).unwrap());
    assert_eq!(nf("x*theta"), "theta*x + h*x^2");
    assert_eq!(nf("theta*theta"), "-h*theta*x");
    assert_eq!(nf("x*x*theta"), "theta*x^2 + 2*h*x^3");
    assert_eq!(nf("h*x*theta"), "h*theta*x");
    assert_eq!(nf("theta*theta*theta"), "0");
}

#[test]
fn dsl_render_round_trip_on_builtin_sources() {
    use glh_core::presentations::{A_H_SRC, CALCULUS_H_SRC, GL_H_SRC, GL_Q_SRC, LAMBDA_H_SRC};
    for src in [A_H_SRC, LAMBDA_H_SRC, GL_H_SRC, GL_Q_SRC, CALCULUS_H_SRC] {
        let doc = parse_dsl(src).unwrap();
        let again = parse_dsl(&doc.render()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(again.render(), doc.render());
    }
}

#[test]
fn dsl_errors() {
    assert!(parse_dsl("").unwrap().relations.is_empty());
    assert!(parse_dsl("gen x: even; gen theta: odd; rel x = theta;").is_err());
    assert!(parse_dsl("gen x: even; rel x*y = 0;").is_err());
    assert!(parse_dsl("gen h: odd;").is_err());
    let e = parse_dsl("gen x: even;\nrel x*x = ;").unwrap_err().to_string();
    assert!(e.contains("2:"), "{e}");
}
