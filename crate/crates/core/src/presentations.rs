//! Built-in algebras and matrices, and the three contraction procedures.

use std::collections::HashMap;
use std::fmt;

use crate::dsl::parse_dsl;
use crate::error::{AlgebraError, Result};
use crate::report::{CheckBuilder, CheckReport};
use crate::scalars::QRational;
use crate::superalg::{
    derive_inverse_rules, graded_tensor_algebra, interreduce, span_equal, substitute, Alphabet, Element, Gen,
    RewriteSystem, Rule,
};
use crate::tensorspace::{lift_factor, Grading, Slot, SuperMatrix};

/// Treatment of the odd parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HMode {
    /// `h` odd and square-zero.
    #[default]
    Odd,
    /// `h = 0` everywhere: the classical super counterparts.
    Zero,
}

impl HMode {
    fn element(self, e: Element) -> Element {
        match self {
            HMode::Odd => e,
            HMode::Zero => e.drop_h(),
        }
    }
}

impl fmt::Display for HMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HMode::Odd => "h odd",
            HMode::Zero => "h = 0",
        })
    }
}

pub const PRESENTATION_IDS: [&str; 8] =
    ["A_h", "Lambda_h", "GL_h", "GL_q", "GL_h_localized", "Calculus_h", "GLh_tensor_Ah", "GLh_tensor_Calculus_h"];

/// Degree bound used by the load-time confluence check.
pub const LOAD_DEGREE_BOUND: usize = 4;

pub const A_H_SRC: &str = "\
gen theta: odd;
gen x: even;
rel x*theta = theta*x + h*x^2;
rel theta^2 = -h*theta*x;
";

pub const LAMBDA_H_SRC: &str = "\
gen y: odd;
gen xi: even;
rel xi*y = -y*xi;
rel xi^2 = 0;
";

pub const GL_H_SRC: &str = "\
gen d: even;
gen gamma: odd;
gen beta: odd;
gen a: even;
rel a*beta = beta*a;
rel a*gamma = gamma*a + h*(a^2 + gamma*beta - d*a);
rel beta*d = d*beta;
rel gamma*d = d*gamma + h*(d^2 - gamma*beta - d*a);
rel beta^2 = 0;
rel gamma^2 = h*(d*gamma - gamma*a);
rel beta*gamma = -gamma*beta - h*(beta*a - d*beta);
rel a*d = d*a + h*(beta*a - d*beta);
";

pub const GL_Q_SRC: &str = "\
gen gamma': odd;
gen beta': odd;
gen d': even;
gen a': even;
rel a'*beta' = q*beta'*a';
rel d'*beta' = q*beta'*d';
rel a'*gamma' = q*gamma'*a';
rel d'*gamma' = q*gamma'*d';
rel beta'^2 = 0;
rel gamma'^2 = 0;
rel beta'*gamma' = -gamma'*beta';
rel a'*d' - d'*a' = -(q - 1/q)*beta'*gamma';
";

pub const CALCULUS_H_SRC: &str = "\
gen y: odd;
gen xi: even;
gen theta: odd;
gen x: even;
gen Dtheta: odd;
gen Dx: even;
gen Dy: odd;
gen Dxi: even;
rel x*theta = theta*x + h*x^2;
rel theta^2 = -h*theta*x;
rel xi*y = -y*xi;
rel xi^2 = 0;
rel Dx*Dtheta = Dtheta*Dx;
rel Dtheta^2 = 0;
rel x*xi = xi*x;
rel theta*y = -y*theta - h*xi*theta - h*y*x;
rel x*y = y*x + h*xi*x;
rel theta*xi = xi*theta - h*xi*x;
rel Dx*x = 1 + x*Dx + h*x*Dtheta;
rel Dx*theta = theta*Dx - h*x*Dx - h*theta*Dtheta;
rel Dtheta*x = x*Dtheta;
rel Dtheta*theta = 1 - theta*Dtheta - h*x*Dtheta;
rel Dxi*xi = xi*Dxi + h*xi*Dy;
rel Dxi*y = y*Dxi - h*xi*Dxi - h*y*Dy;
rel Dy*xi = xi*Dy;
rel Dy*y = -y*Dy - h*xi*Dy;
";

/// A built algebra with its printed relations and associated matrices.
#[derive(Clone, Debug)]
pub struct NamedPresentation {
    pub id: String,
    pub mode: HMode,
    pub system: RewriteSystem,
    /// Printed relations as `lhs - rhs`, in printed order.
    pub relations: Vec<Element>,
    /// Generator matrix `[[a, beta], [gamma, d]]` where applicable.
    pub t: Option<SuperMatrix>,
}

impl NamedPresentation {
    pub fn alphabet(&self) -> &Alphabet {
        self.system.alphabet()
    }

    pub fn gen(&self, name: &str) -> Result<Gen> {
        self.alphabet().gen(name)
    }

    pub fn element(&self, name: &str) -> Result<Element> {
        Ok(Element::gen(self.gen(name)?))
    }

    /// Parse an expression over this presentation's generators.
    pub fn parse(&self, src: &str) -> Result<Element> {
        crate::dsl::parse_element(src, self.alphabet())
    }

    pub fn nf(&self, e: &Element) -> Result<Element> {
        self.system.normal_form(e)
    }

    /// Rules rendered as `lhs = rhs`, one per line.
    pub fn render_rules(&self) -> String {
        self.system.rules().iter().map(|r| self.system.render_rule(r) + "\n").collect()
    }
}

/// System from DSL text with rule right-hand sides brought to normal form.
fn from_source(src: &str, mode: HMode) -> Result<(RewriteSystem, Vec<Element>)> {
    let doc = parse_dsl(src)?;
    let relations: Vec<Element> = doc.relation_elements().into_iter().map(|e| mode.element(e)).collect();
    let draft = RewriteSystem::from_relations(doc.alphabet.clone(), &relations)?;
    let mut rules = Vec::with_capacity(draft.rules().len());
    for r in draft.rules() {
        rules.push(Rule::new(r.lhs.clone(), draft.normal_form(&r.rhs)?));
    }
    Ok((RewriteSystem::new(doc.alphabet, rules)?, relations))
}

fn load_check(id: &str, system: &RewriteSystem) -> Result<()> {
    let open = system.check_confluence(LOAD_DEGREE_BOUND)?;
    if let Some(o) = open.first() {
        return Err(AlgebraError::LoadCheck {
            id: id.to_string(),
            msg: format!(
                "overlap {} does not resolve: {}",
                system.render(&Element::word(&o.word)),
                system.render(&o.discrepancy())
            ),
        });
    }
    Ok(())
}

/// `[[a, beta], [gamma, d]]` over `alphabet`, with generator names suffixed.
pub fn t_matrix(alphabet: &Alphabet, suffix: &str) -> Result<SuperMatrix> {
    let names = ["a", "beta", "gamma", "d"];
    let mut entries = Vec::with_capacity(4);
    for n in names {
        entries.push(Element::gen(alphabet.gen(&format!("{n}{suffix}"))?));
    }
    SuperMatrix::square(1, entries)
}

pub fn build(id: &str, mode: HMode) -> Result<NamedPresentation> {
    let simple = |src: &str, check: bool| -> Result<NamedPresentation> {
        let (system, relations) = from_source(src, mode)?;
        if check {
            load_check(id, &system)?;
        }
        Ok(NamedPresentation { id: id.to_string(), mode, system, relations, t: None })
    };
    match id {
        "A_h" => simple(A_H_SRC, true),
        "Lambda_h" => simple(LAMBDA_H_SRC, true),
        "Calculus_h" => simple(CALCULUS_H_SRC, false),
        "GL_h" | "GL_q" => {
            let (src, suffix) = if id == "GL_h" { (GL_H_SRC, "") } else { (GL_Q_SRC, "'") };
            let mut p = simple(src, true)?;
            p.t = Some(t_matrix(p.alphabet(), suffix)?);
            Ok(p)
        }
        "GL_h_localized" => {
            let base = build("GL_h", mode)?;
            let system = localize(&base.system)?;
            let t = Some(t_matrix(system.alphabet(), "")?);
            let relations = base
                .relations
                .iter()
                .map(|e| transfer(e, base.alphabet(), system.alphabet()))
                .collect::<Result<_>>()?;
            Ok(NamedPresentation { id: id.to_string(), mode, system, relations, t })
        }
        "GLh_tensor_Ah" | "GLh_tensor_Calculus_h" => {
            let gl = build("GL_h", mode)?;
            let other = build(if id == "GLh_tensor_Ah" { "A_h" } else { "Calculus_h" }, mode)?;
            let ta = graded_tensor_algebra(&gl.system, &other.system)?;
            let mut relations: Vec<Element> = gl.relations.iter().map(|e| ta.left(e)).collect();
            relations.extend(other.relations.iter().map(|e| ta.right(e)));
            Ok(NamedPresentation { id: id.to_string(), mode, system: ta.system, relations, t: None })
        }
        other => Err(AlgebraError::UnknownPresentation(other.to_string())),
    }
}

/// Rewrite `e` over `to`, matching generators by name.
pub fn transfer(e: &Element, from: &Alphabet, to: &Alphabet) -> Result<Element> {
    let mut map = HashMap::new();
    for (g, gen) in from.iter() {
        map.insert(g, to.gen(&gen.name)?);
    }
    Ok(e.map_letters(|g| map[&g]))
}

/// Adjoin `ainv` and `dinv` to a `GL_h`-type system.
pub fn localize(sys: &RewriteSystem) -> Result<RewriteSystem> {
    let a = sys.alphabet().gen("a")?;
    let with_a = derive_inverse_rules(sys, a, "ainv")?;
    let d = with_a.alphabet().gen("d")?;
    derive_inverse_rules(&with_a, d, "dinv")
}

fn c_factor() -> QRational {
    (QRational::q() - QRational::one()).inv().expect("q - 1 is nonzero")
}

/// `g = [[1, 0], [h/(q-1), 1]]` and its inverse.
pub fn g_matrices(mode: HMode) -> (SuperMatrix, SuperMatrix) {
    let ch = mode.element(Element::h().scale(&c_factor()));
    let g = SuperMatrix::square(1, vec![Element::one(), Element::zero(), ch.clone(), Element::one()]);
    let gi = SuperMatrix::square(1, vec![Element::one(), Element::zero(), -ch, Element::one()]);
    (g.expect("2x2"), gi.expect("2x2"))
}

/// The `GL_q(1|1)` R-matrix in the basis `00, 01, 10, 11`.
pub fn r_q() -> SuperMatrix {
    let q = QRational::q();
    let qi = q.inv().expect("q is nonzero");
    let mut m = SuperMatrix::zeros(2);
    m.set(0, 0, Element::scalar(q.clone()));
    m.set(1, 1, Element::one());
    m.set(2, 1, Element::scalar(&q - &qi));
    m.set(2, 2, Element::one());
    m.set(3, 3, Element::scalar(qi));
    m
}

/// The `GL_h(1|1)` R-matrix.
pub fn r_h(mode: HMode) -> SuperMatrix {
    let h = mode.element(Element::h());
    let mut m = SuperMatrix::identity(2);
    m.set(1, 0, -&h);
    m.set(2, 0, h.clone());
    m.set(3, 1, h.clone());
    m.set(3, 2, h);
    m
}

/// The classical R-matrix `R_q` at `q = 1`.
pub fn r_q_at_one() -> Result<SuperMatrix> {
    r_q().limit_q1()
}

/// `g (x) g` as the graded product of the slot lifts, with its inverse.
pub fn g_tensor_g(mode: HMode) -> Result<(SuperMatrix, SuperMatrix)> {
    let (g, gi) = g_matrices(mode);
    let gg = lift_factor(&g, Slot::First, Grading::Graded)?.matmul(&lift_factor(&g, Slot::Second, Grading::Graded)?)?;
    let gg_inv =
        lift_factor(&gi, Slot::Second, Grading::Graded)?.matmul(&lift_factor(&gi, Slot::First, Grading::Graded)?)?;
    Ok((gg, gg_inv))
}

/// Substitute, interreduce over `Q(q)`, then take `q -> 1`.
///
/// Returns the limiting relations; reducing first is what removes the
/// `1/(q-1)` poles.
pub fn contract_relations(
    q_relations: &[Element],
    images: &HashMap<Gen, Element>,
    target: &Alphabet,
) -> Result<Vec<Element>> {
    let free = RewriteSystem::free(target.clone());
    let mut substituted = Vec::with_capacity(q_relations.len());
    for r in q_relations {
        substituted.push(substitute(r, images, &free)?);
    }
    let (sys, stuck) = interreduce(target, &substituted)?;
    let mut out = Vec::new();
    for e in sys.rules().iter().map(Rule::relation).chain(stuck) {
        let lim = e.try_map_coeffs(|c| c.limit_q1_scalar())?;
        if !lim.is_zero() {
            out.push(lim);
        }
    }
    Ok(out)
}

fn contraction_report(id: &str, anchor: &str, limits: &[Element], target: &NamedPresentation) -> Result<CheckReport> {
    let mut b = CheckBuilder::new(id, anchor);
    for (k, e) in limits.iter().enumerate() {
        b.zero(format!("limit[{k}] mod target"), &target.nf(e)?, target.alphabet());
    }
    let same = span_equal(limits, &target.relations)?;
    b.require("span", same, "limit relations and target relations span different spaces");
    for e in limits {
        b.note(format!("{} = 0", target.alphabet().render(e)));
    }
    Ok(b.finish())
}

pub const ANCHOR_SUPERPLANE: &str = "x θ = θ x + h x², θ² = −h θ x";
pub const ANCHOR_T: &str = "T′ = g T g⁻¹, q → 1";
pub const ANCHOR_R: &str = "R_h = (g ⊗ g)⁻¹ R_q (g ⊗ g)";
pub const ANCHOR_FIRST_COLUMN: &str = "x ↦ a, θ ↦ γ does not respect A_h";

/// Images of the primed superplane coordinates in `x, theta`.
pub fn superplane_images(q_plane: &Alphabet, target: &Alphabet, mode: HMode) -> Result<HashMap<Gen, Element>> {
    let x = Element::gen(target.gen("x")?);
    let theta = Element::gen(target.gen("theta")?);
    let mut images = HashMap::new();
    images.insert(q_plane.gen("x'")?, x.clone());
    images.insert(q_plane.gen("theta'")?, mode.element(&x.h_times().scale(&c_factor()) + &theta));
    Ok(images)
}

/// The `q`-superplane relations `x'theta' - q theta'x'`, `theta'^2`.
pub fn q_superplane() -> Result<(Alphabet, Vec<Element>)> {
    let doc = parse_dsl("gen theta': odd; gen x': even; rel x'*theta' = q*theta'*x'; rel theta'^2 = 0;")?;
    let rels = doc.relation_elements();
    Ok((doc.alphabet, rels))
}

pub fn contract_superplane(mode: HMode) -> Result<CheckReport> {
    let target = build("A_h", mode)?;
    let (q_plane, q_rels) = q_superplane()?;
    let images = superplane_images(&q_plane, target.alphabet(), mode)?;
    let limits = contract_relations(&q_rels, &images, target.alphabet())?;
    contraction_report("contract.superplane", ANCHOR_SUPERPLANE, &limits, &target)
}

/// Images of `a', beta', gamma', d'` under `T' = g T g^-1`.
pub fn t_images(gl_q: &Alphabet, target: &Alphabet, mode: HMode) -> Result<HashMap<Gen, Element>> {
    let c = c_factor();
    let g = |n: &str| target.gen(n).map(Element::gen);
    let (a, beta, gamma, d) = (g("a")?, g("beta")?, g("gamma")?, g("d")?);
    let ch = |e: &Element| mode.element(e.h_times().scale(&c));
    let mut images = HashMap::new();
    images.insert(gl_q.gen("a'")?, &a + &ch(&beta));
    images.insert(gl_q.gen("beta'")?, beta.clone());
    images.insert(gl_q.gen("gamma'")?, &(&ch(&a) + &gamma) - &ch(&d));
    images.insert(gl_q.gen("d'")?, &ch(&beta) + &d);
    Ok(images)
}

pub fn contract_t(mode: HMode) -> Result<CheckReport> {
    let target = build("GL_h", mode)?;
    let gl_q = build("GL_q", mode)?;
    let images = t_images(gl_q.alphabet(), target.alphabet(), mode)?;
    let limits = contract_relations(&gl_q.relations, &images, target.alphabet())?;
    contraction_report("contract.T", ANCHOR_T, &limits, &target)
}

/// `(g (x) g)^-1 R_q (g (x) g)` before the limit.
pub fn conjugated_r_q(mode: HMode) -> Result<SuperMatrix> {
    let (gg, gg_inv) = g_tensor_g(mode)?;
    gg_inv.matmul(&r_q())?.matmul(&gg)
}

pub fn contract_r(mode: HMode) -> Result<CheckReport> {
    let limit = conjugated_r_q(mode)?.limit_q1()?;
    let expected = r_h(mode);
    let alphabet = Alphabet::new();
    let mut b = CheckBuilder::new("contract.R", ANCHOR_R);
    for ((i, j), e) in limit.entries() {
        b.zero(format!("({i:02b},{j:02b})"), &(e - expected.get(i, j)), &alphabet);
    }
    b.note("g (x) g = g_1 g_2 with graded slot lifts");
    Ok(b.finish())
}

/// The map `x -> a`, `theta -> gamma` applied to the superplane relations;
/// passes when at least one image is nonzero in `GL_h`.
pub fn first_column_demo(mode: HMode) -> Result<CheckReport> {
    let plane = build("A_h", mode)?;
    let gl = build("GL_h", mode)?;
    let mut images = HashMap::new();
    images.insert(plane.gen("x")?, gl.element("a")?);
    images.insert(plane.gen("theta")?, gl.element("gamma")?);
    let mut b = CheckBuilder::new("demo.first_column", ANCHOR_FIRST_COLUMN);
    let mut broken = 0;
    for rel in &plane.relations {
        let img = substitute(rel, &images, &gl.system)?;
        b.note(format!("{} = 0  ->  {}", plane.alphabet().render(rel), gl.alphabet().render(&img)));
        if !img.is_zero() {
            broken += 1;
        }
    }
    let expect_broken = mode == HMode::Odd;
    b.require("preserved", (broken > 0) == expect_broken, format!("{broken} relation(s) not preserved"));
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(build("A_h", HMode::Odd).unwrap().system.rules().len(), 2);
        let gl = build("GL_h", HMode::Odd).unwrap();
        assert_eq!(gl.alphabet().len(), 4);
        assert_eq!(gl.system.rules().len(), 8);
        let calc = build("Calculus_h", HMode::Odd).unwrap();
        assert_eq!(calc.alphabet().len(), 8);
        assert_eq!(calc.system.rules().len(), 18);
        assert!(matches!(build("SL_h", HMode::Odd), Err(AlgebraError::UnknownPresentation(_))));
    }

    #[test]
    fn theta_prime_squared_needs_reduction_first() {
        let target = build("A_h", HMode::Odd).unwrap();
        let (q_plane, q_rels) = q_superplane().unwrap();
        let images = superplane_images(&q_plane, target.alphabet(), HMode::Odd).unwrap();
        let free = RewriteSystem::free(target.alphabet().clone());
        let raw = substitute(&q_rels[1], &images, &free).unwrap();
        assert!(matches!(raw.try_map_coeffs(|c| c.limit_q1_scalar()), Err(AlgebraError::Pole(_))));
        let limits = contract_relations(&q_rels, &images, target.alphabet()).unwrap();
        let want = target.parse("theta^2 + h*theta*x").unwrap();
        assert!(limits.contains(&want), "{limits:?}");
    }

    #[test]
    fn contractions_pass() {
        for mode in [HMode::Odd, HMode::Zero] {
            for r in [contract_superplane(mode), contract_t(mode), contract_r(mode)] {
                let r = r.unwrap();
                assert!(r.passed(), "{mode}: {r:?}");
            }
        }
    }

    #[test]
    fn r_q_at_one_is_identity() {
        assert_eq!(r_q_at_one().unwrap(), SuperMatrix::identity(2));
    }

    #[test]
    fn first_column_is_not_a_plane() {
        assert!(first_column_demo(HMode::Odd).unwrap().passed());
    }
}
