//! Differential calculus on the h-superplane: overlap consistency and
//! covariance under the `GL_h` coaction.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::Result;
use crate::presentations::{build, HMode, NamedPresentation};
use crate::report::{CheckBuilder, CheckReport};
use crate::superalg::{graded_tensor_algebra, substitute, Element, Gen, Overlap, RewriteSystem};

pub const ANCHOR_CONSISTENCY: &str = "∂_x x = 1 + x ∂_x + h x ∂_θ, ...: overlap consistency";
pub const ANCHOR_COVARIANCE: &str = "δ(x) = a ⊗ x + β ⊗ θ, δ(θ) = γ ⊗ x + d ⊗ θ";

pub const DERIVATIVES: [&str; 4] = ["Dx", "Dtheta", "Dxi", "Dy"];

/// Unordered letter pairs exchanged by some rule.
fn printed_pairs(sys: &RewriteSystem) -> HashSet<(Gen, Gen)> {
    sys.rules().iter().filter(|r| r.lhs.len() == 2).map(|r| (r.lhs[0].min(r.lhs[1]), r.lhs[0].max(r.lhs[1]))).collect()
}

/// An overlap is in-system when every pair of distinct letters in its word
/// is governed by a rule.
pub fn in_system(o: &Overlap, pairs: &HashSet<(Gen, Gen)>) -> bool {
    let letters: BTreeSet<Gen> = o.word.iter().copied().collect();
    letters.iter().all(|&u| letters.iter().filter(|&&v| u < v).all(|&v| pairs.contains(&(u, v))))
}

/// Split the unresolved overlaps of `sys` into in-system and out-of-system.
pub fn classify(sys: &RewriteSystem, degree_bound: usize) -> Result<(Vec<Overlap>, Vec<Overlap>, usize)> {
    let pairs = printed_pairs(sys);
    let all = sys.overlaps(degree_bound)?;
    let mut checked = 0;
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for o in all {
        let ins = in_system(&o, &pairs);
        if ins {
            checked += 1;
        }
        if o.resolved() {
            continue;
        }
        if ins {
            inside.push(o);
        } else {
            outside.push(o);
        }
    }
    Ok((inside, outside, checked))
}

pub fn consistency_check(mode: HMode, degree_bound: usize) -> Result<CheckReport> {
    let calc = build("Calculus_h", mode)?;
    let sys = &calc.system;
    let (inside, outside, checked) = classify(sys, degree_bound)?;
    let mut b = CheckBuilder::new("calc.consistency", ANCHOR_CONSISTENCY);
    for _ in 0..checked - inside.len() {
        b.require("overlap", true, "");
    }
    for o in &inside {
        b.zero(sys.render(&Element::word(&o.word)), &o.discrepancy(), sys.alphabet());
    }
    b.note(format!("{checked} in-system overlaps up to degree {degree_bound}"));
    for o in &outside {
        b.note(format!("out-of-system: {} -> {}", sys.render(&Element::word(&o.word)), sys.render(&o.discrepancy())));
    }
    Ok(b.finish())
}

/// Coaction images `z -> T (x) z` on `(x, theta)` and `(xi, y)`.
pub fn coaction_images(
    gl: &NamedPresentation,
    calc: &NamedPresentation,
    tensor: &dyn Fn(&Element, &Element) -> Result<Element>,
) -> Result<HashMap<Gen, Element>> {
    let g = |n: &str| gl.element(n);
    let c = |n: &str| calc.element(n);
    let (a, beta, gamma, d) = (g("a")?, g("beta")?, g("gamma")?, g("d")?);
    let mut m = HashMap::new();
    for (first, second) in [("x", "theta"), ("xi", "y")] {
        let (u, v) = (c(first)?, c(second)?);
        m.insert(calc.gen(first)?, &tensor(&a, &u)? + &tensor(&beta, &v)?);
        m.insert(calc.gen(second)?, &tensor(&gamma, &u)? + &tensor(&d, &v)?);
    }
    Ok(m)
}

/// Calculus relations free of derivative letters.
pub fn coordinate_relations(calc: &NamedPresentation) -> Result<Vec<Element>> {
    let ders: Vec<Gen> = DERIVATIVES.iter().map(|n| calc.gen(n)).collect::<Result<_>>()?;
    Ok(calc
        .relations
        .iter()
        .filter(|e| e.terms().all(|(t, _)| t.word.iter().all(|g| !ders.contains(g))))
        .cloned()
        .collect())
}

pub fn covariance_check(mode: HMode) -> Result<CheckReport> {
    let gl = build("GL_h", mode)?;
    let calc = build("Calculus_h", mode)?;
    let ta = graded_tensor_algebra(&gl.system, &calc.system)?;
    let images = coaction_images(&gl, &calc, &|u, v| ta.tensor(u, v))?;
    let mut b = CheckBuilder::new("calc.covariance", ANCHOR_COVARIANCE);
    for rel in coordinate_relations(&calc)? {
        let img = substitute(&rel, &images, &ta.system)?;
        b.zero(format!("δ({} = 0)", calc.alphabet().render(&rel)), &img, ta.system.alphabet());
    }
    b.note("derivative letters excluded: no transformation law given");
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_dsl;

    #[test]
    fn eight_coordinate_relations() {
        let calc = build("Calculus_h", HMode::Odd).unwrap();
        assert_eq!(coordinate_relations(&calc).unwrap().len(), 8);
    }

    #[test]
    fn identity_coaction_fixes_relations() {
        let calc = build("Calculus_h", HMode::Odd).unwrap();
        let mut m = HashMap::new();
        for n in ["x", "theta", "xi", "y"] {
            m.insert(calc.gen(n).unwrap(), calc.element(n).unwrap());
        }
        for rel in coordinate_relations(&calc).unwrap() {
            assert!(substitute(&rel, &m, &calc.system).unwrap().is_zero());
        }
    }

    #[test]
    fn covariance_holds() {
        for mode in [HMode::Odd, HMode::Zero] {
            let r = covariance_check(mode).unwrap();
            assert!(r.passed(), "{r:#?}");
        }
    }

    #[test]
    fn classical_calculus_is_consistent() {
        let r = consistency_check(HMode::Zero, 4).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(r.notes.iter().any(|n| n.starts_with("out-of-system")));
    }

    #[test]
    fn printed_derivative_sector_diverges_at_order_h() {
        let r = consistency_check(HMode::Odd, 4).unwrap();
        let idx: Vec<&str> = r.residuals.iter().map(|x| x.index.as_str()).collect();
        assert_eq!(idx, ["Dx*Dtheta*theta", "Dtheta*theta^2"], "{r:#?}");
        assert_eq!(r.residuals[1].value, "-2*h*x");
    }

    #[test]
    fn flipping_one_sign_makes_the_derivative_sector_confluent() {
        let src = "gen theta: odd; gen x: even; gen Dtheta: odd; gen Dx: even;
            rel x*theta = theta*x + h*x^2; rel theta^2 = -h*theta*x;
            rel Dx*Dtheta = Dtheta*Dx; rel Dtheta^2 = 0;
            rel Dx*x = 1 + x*Dx + h*x*Dtheta; rel Dx*theta = theta*Dx - h*x*Dx - h*theta*Dtheta;
            rel Dtheta*x = x*Dtheta; rel Dtheta*theta = 1 - theta*Dtheta + h*x*Dtheta;";
        let sys = parse_dsl(src).unwrap().to_system().unwrap();
        assert!(sys.check_confluence(4).unwrap().is_empty());
    }
}
