use std::collections::{BTreeMap, HashMap};

use super::rewrite::orient;
use super::{Alphabet, Element, Gen, Parity, RewriteSystem, Rule, Term};
use crate::error::{AlgebraError, Result};
use crate::scalars::QRational;

/// Apply the algebra map determined by `images` to `u` and reduce in `target`.
///
/// `h` is sent to itself. Each image must be homogeneous of the parity of the
/// generator it replaces.
pub fn substitute(u: &Element, images: &HashMap<Gen, Element>, target: &RewriteSystem) -> Result<Element> {
    for (g, img) in images {
        if !img.is_homogeneous(g.parity()) {
            return Err(AlgebraError::Parity(format!("image {} of a {} generator", target.render(img), g.parity())));
        }
    }
    let mut out = Element::zero();
    let mut memo: HashMap<&[Gen], Element> = HashMap::new();
    for (t, c) in u.terms() {
        let img = match memo.get(t.word.as_slice()) {
            Some(e) => e.clone(),
            None => {
                let mut acc = Element::one();
                for g in &t.word {
                    let gi = images.get(g).ok_or_else(|| {
                        AlgebraError::GeneratorMismatch(format!("no image for letter of rank {}", g.rank()))
                    })?;
                    acc = target.mul(&acc, gi)?;
                }
                memo.insert(t.word.as_slice(), acc.clone());
                acc
            }
        };
        if t.h {
            out.add_scaled(&img.h_times(), c);
        } else {
            out.add_scaled(&img, c);
        }
    }
    target.normal_form(&out)
}

/// Graded tensor product `A (x) B` realized on one alphabet: all letters of
/// `A` first, then all letters of `B`, plus the supercommutation rules
/// `v*u -> (-1)^{|u||v|} u*v` for `u` from `A` and `v` from `B`.
#[derive(Clone, Debug)]
pub struct TensorAlgebra {
    pub system: RewriteSystem,
    left: Vec<Gen>,
    right: Vec<Gen>,
}

impl TensorAlgebra {
    /// Embed an element of the left factor.
    pub fn left(&self, e: &Element) -> Element {
        e.map_letters(|g| self.left[g.rank()])
    }

    /// Embed an element of the right factor.
    pub fn right(&self, e: &Element) -> Element {
        e.map_letters(|g| self.right[g.rank()])
    }

    pub fn left_gen(&self, g: Gen) -> Gen {
        self.left[g.rank()]
    }

    pub fn right_gen(&self, g: Gen) -> Gen {
        self.right[g.rank()]
    }

    /// `a (x) b`, reduced.
    pub fn tensor(&self, a: &Element, b: &Element) -> Result<Element> {
        self.system.mul(&self.left(a), &self.right(b))
    }
}

pub fn graded_tensor_algebra(a: &RewriteSystem, b: &RewriteSystem) -> Result<TensorAlgebra> {
    let mut alphabet = Alphabet::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for g in a.alphabet().generators() {
        left.push(alphabet.push(&g.name, g.parity)?);
    }
    for g in b.alphabet().generators() {
        right.push(alphabet.push(&g.name, g.parity)?);
    }
    let mut rules = Vec::new();
    for r in a.rules() {
        rules.push(Rule::new(r.lhs.iter().map(|g| left[g.rank()]).collect(), r.rhs.map_letters(|g| left[g.rank()])));
    }
    for r in b.rules() {
        rules.push(Rule::new(r.lhs.iter().map(|g| right[g.rank()]).collect(), r.rhs.map_letters(|g| right[g.rank()])));
    }
    for &v in &right {
        for &u in &left {
            let swapped = Element::word(&[u, v]);
            let rhs = if u.is_odd() && v.is_odd() { -swapped } else { swapped };
            rules.push(Rule::new(vec![v, u], rhs));
        }
    }
    Ok(TensorAlgebra { system: RewriteSystem::new(alphabet, rules)?, left, right })
}

/// Inverse of `u = 1 + n` with `n` nilpotent of order at most `bound`.
///
/// Returns `1 - n + n^2 - ...` truncated at the first vanishing power, after
/// checking that it is a two-sided inverse.
pub fn invert_unipotent(u: &Element, sys: &RewriteSystem, bound: u32) -> Result<Element> {
    let u = sys.normal_form(u)?;
    let n = &u - &Element::one();
    let mut result = Element::one();
    let mut power = Element::one();
    let mut sign = QRational::one();
    let mut vanished = false;
    for _ in 0..bound {
        power = sys.mul(&power, &n)?;
        if power.is_zero() {
            vanished = true;
            break;
        }
        sign = -sign;
        result.add_scaled(&power, &sign);
    }
    if !vanished {
        return Err(AlgebraError::NotNilpotent(sys.render(&u)));
    }
    let one = Element::one();
    if sys.mul(&u, &result)? != one || sys.mul(&result, &u)? != one {
        return Err(AlgebraError::NotNilpotent(format!("{} (series is not a two-sided inverse)", sys.render(&u))));
    }
    Ok(result)
}

/// Inverse of `u = unit * (1 + n)` given `unit_inv`, with `n` nilpotent.
pub fn invert_with_unit(u: &Element, unit_inv: &Element, sys: &RewriteSystem, bound: u32) -> Result<Element> {
    let unipotent = sys.mul(unit_inv, u)?;
    let inv = invert_unipotent(&unipotent, sys, bound)?;
    let result = sys.mul(&inv, unit_inv)?;
    let one = Element::one();
    if sys.mul(u, &result)? != one || sys.mul(&result, u)? != one {
        return Err(AlgebraError::NotNilpotent(format!("{} is not inverted by its unit", sys.render(u))));
    }
    Ok(result)
}

/// Adjoin a formal inverse of the even generator `u`.
///
/// Adds `inv_name` directly above `u` in the order, the rules `u*u' -> 1`,
/// `u'*u -> 1`, and for each quadratic rule exchanging `u` with another
/// letter `v` the conjugated rule between `u'` and `v`, obtained by
/// multiplying the relation by `u'` on both sides, cancelling, orienting and
/// reducing. Confluence of the result is checked separately by callers.
pub fn derive_inverse_rules(sys: &RewriteSystem, u: Gen, inv_name: &str) -> Result<RewriteSystem> {
    if u.is_odd() {
        return Err(AlgebraError::Parity(format!("cannot invert odd generator {}", sys.alphabet().name(u))));
    }
    // the inverse sits directly above `u`, so both travel the same way under
    // the exchange rules and `u*u'` pairs meet
    let at = u.rank() + 1;
    let shift = Alphabet::shift_from(at);
    let mut alphabet = sys.alphabet().clone();
    let ui = alphabet.insert(at, inv_name, Parity::Even)?;
    let sys = &RewriteSystem::new(
        alphabet.clone(),
        sys.rules()
            .iter()
            .map(|r| Rule::new(r.lhs.iter().map(|g| shift(*g)).collect(), r.rhs.map_letters(&shift)))
            .collect(),
    )?;
    let unit_rules = vec![Rule::new(vec![u, ui], Element::one()), Rule::new(vec![ui, u], Element::one())];
    let cancel = RewriteSystem::new(alphabet.clone(), unit_rules.clone())?;
    let uinv = Element::gen(ui);
    let mut derived = Vec::new();
    for r in sys.rules() {
        if r.lhs.len() != 2 || !r.lhs.contains(&u) || r.lhs[0] == r.lhs[1] {
            continue;
        }
        let v = if r.lhs[0] == u { r.lhs[1] } else { r.lhs[0] };
        let rel = r.relation();
        // h-free part must be a multiple of u*v -/+ v*u
        let uv = Term::new(false, vec![u, v]);
        let vu = Term::new(false, vec![v, u]);
        let free = rel.drop_h();
        let c_uv = free.coeff(&uv);
        let c_vu = free.coeff(&vu);
        if free.len() != 2 || c_uv.is_zero() || (&c_uv + &c_vu).is_zero() == (&c_uv - &c_vu).is_zero() {
            return Err(AlgebraError::Orientation(format!(
                "rule {} does not exchange {} with another letter",
                sys.render_rule(r),
                sys.alphabet().name(u)
            )));
        }
        let normed = rel.scale(&c_uv.inv()?);
        let conj = cancel.normal_form(&(&(&uinv * &normed) * &uinv))?;
        derived.push(conj);
    }
    let mut rules = sys.rules().to_vec();
    rules.extend(unit_rules);
    for rel in &derived {
        let rule = orient(&alphabet, rel).map_err(|e| match e {
            AlgebraError::Orientation(m) => AlgebraError::Orientation(format!("derived rule: {m}")),
            other => other,
        })?;
        rules.push(rule);
    }
    let draft = RewriteSystem::new(alphabet.clone(), rules)?;
    let mut reduced = Vec::with_capacity(draft.rules().len());
    for r in draft.rules() {
        reduced.push(Rule::new(r.lhs.clone(), draft.normal_form(&r.rhs)?));
    }
    RewriteSystem::new(alphabet, reduced)
}

/// Orient and inter-reduce a list of relations into a rule set.
///
/// Each relation is reduced by the rules found so far; a nonzero remainder
/// becomes a new rule through its leading `h`-free term, and older rules whose
/// left-hand side it reduces are fed back in. Remainders with no `h`-free
/// part cannot be oriented and are returned alongside the system.
pub fn interreduce(alphabet: &Alphabet, relations: &[Element]) -> Result<(RewriteSystem, Vec<Element>)> {
    let mut rules: Vec<Rule> = Vec::new();
    let mut queue: Vec<Element> = relations.iter().rev().cloned().collect();
    let mut stuck: Vec<Element> = Vec::new();
    let mut rounds = 0usize;
    loop {
        while let Some(rel) = queue.pop() {
            rounds += 1;
            if rounds > 100_000 {
                return Err(AlgebraError::Divergence(rounds));
            }
            let sys = RewriteSystem::new(alphabet.clone(), rules.clone())?;
            let rel = sys.normal_form(&rel)?;
            if rel.is_zero() {
                continue;
            }
            if rel.leading_h_free().is_none() {
                stuck.push(rel);
                continue;
            }
            let rule = orient(alphabet, &rel)?;
            let (keep, back): (Vec<Rule>, Vec<Rule>) =
                rules.into_iter().partition(|r| !contains_factor(&r.lhs, &rule.lhs));
            rules = keep;
            queue.extend(back.iter().map(Rule::relation));
            rules.push(rule);
        }
        // stuck remainders may reduce further now
        let sys = RewriteSystem::new(alphabet.clone(), rules.clone())?;
        let mut still = Vec::new();
        for s in stuck.drain(..) {
            let s = sys.normal_form(&s)?;
            if s.is_zero() {
                continue;
            }
            if s.leading_h_free().is_some() {
                queue.push(s);
            } else {
                still.push(s);
            }
        }
        if queue.is_empty() {
            stuck = still;
            break;
        }
        stuck = still;
    }
    let draft = RewriteSystem::new(alphabet.clone(), rules)?;
    let mut reduced = Vec::with_capacity(draft.rules().len());
    for r in draft.rules() {
        reduced.push(Rule::new(r.lhs.clone(), draft.normal_form(&r.rhs)?));
    }
    reduced.sort_by(|a, b| Term::new(false, a.lhs.clone()).cmp(&Term::new(false, b.lhs.clone())));
    let mut stuck_nf = Vec::new();
    let sys = RewriteSystem::new(alphabet.clone(), reduced)?;
    for s in stuck {
        let s = sys.normal_form(&s)?;
        if !s.is_zero() && !stuck_nf.contains(&s) {
            stuck_nf.push(s);
        }
    }
    Ok((sys, stuck_nf))
}

fn contains_factor(word: &[Gen], factor: &[Gen]) -> bool {
    factor.len() <= word.len() && word.windows(factor.len()).any(|w| w == factor)
}

/// Compare the spans of two lists of quadratic elements over `Q(q)[h]/(h^2)`.
///
/// Each element contributes itself and its `h`-multiple; the spans agree when
/// both lists and their union have equal rank.
pub fn span_equal(s1: &[Element], s2: &[Element]) -> Result<bool> {
    for e in s1.iter().chain(s2) {
        if e.terms().any(|(t, _)| t.word.len() != 2) {
            return Err(AlgebraError::NotQuadratic(format!("{e:?}")));
        }
    }
    let r1 = module_rank(s1)?;
    let r2 = module_rank(s2)?;
    if r1 != r2 {
        return Ok(false);
    }
    let union: Vec<Element> = s1.iter().chain(s2).cloned().collect();
    Ok(module_rank(&union)? == r1)
}

/// Rank over `Q(q)` of `{e, h*e : e in elems}` in the monomial basis.
pub(crate) fn module_rank(elems: &[Element]) -> Result<usize> {
    let mut rows: Vec<BTreeMap<Term, QRational>> = Vec::new();
    for e in elems {
        for v in [e.clone(), e.h_times()] {
            let row: BTreeMap<Term, QRational> = v.terms().map(|(t, c)| (t.clone(), c.clone())).collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    // Gaussian elimination keyed on the largest remaining term
    let mut pivots: BTreeMap<Term, BTreeMap<Term, QRational>> = BTreeMap::new();
    for mut row in rows {
        while let Some((lead, lc)) = row.last_key_value().map(|(k, v)| (k.clone(), v.clone())) {
            match pivots.get(&lead) {
                Some(p) => {
                    let factor = lc.checked_div(&p[&lead])?;
                    for (k, v) in p {
                        let nv = &row.get(k).cloned().unwrap_or_default() - &(v * &factor);
                        if nv.is_zero() {
                            row.remove(k);
                        } else {
                            row.insert(k.clone(), nv);
                        }
                    }
                }
                None => {
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
    }
    Ok(pivots.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> RewriteSystem {
        let a = Alphabet::from_list(&[("theta", Parity::Odd), ("x", Parity::Even)]).unwrap();
        let t = a.gen("theta").unwrap();
        let x = a.gen("x").unwrap();
        RewriteSystem::new(
            a,
            vec![
                Rule::new(vec![x, t], &Element::word(&[t, x]) + &Element::word(&[x, x]).h_times()),
                Rule::new(vec![t, t], -Element::word(&[t, x]).h_times()),
            ],
        )
        .unwrap()
    }

    fn gens(s: &RewriteSystem) -> (Gen, Gen) {
        (s.alphabet().gen("theta").unwrap(), s.alphabet().gen("x").unwrap())
    }

    #[test]
    fn identity_substitution_is_identity() {
        let s = plane();
        let (t, x) = gens(&s);
        let images: HashMap<Gen, Element> = [(t, Element::gen(t)), (x, Element::gen(x))].into();
        let u = &Element::word(&[t, x, x]) - &Element::word(&[x]).h_times();
        assert_eq!(substitute(&u, &images, &s).unwrap(), u);
    }

    #[test]
    fn parity_violating_image_is_rejected() {
        let s = plane();
        let (t, x) = gens(&s);
        let images: HashMap<Gen, Element> = [(t, Element::gen(x)), (x, Element::gen(x))].into();
        assert!(matches!(substitute(&Element::gen(t), &images, &s), Err(AlgebraError::Parity(_))));
    }

    #[test]
    fn unipotent_inverse_in_plane() {
        let s = plane();
        let (t, x) = gens(&s);
        let n = Element::word(&[t, x]).h_times();
        let u = &Element::one() + &n;
        let inv = invert_unipotent(&u, &s, 4).unwrap();
        assert_eq!(inv, &Element::one() - &n);
        assert_eq!(invert_unipotent(&Element::one(), &s, 1).unwrap(), Element::one());
    }

    #[test]
    fn non_nilpotent_is_reported() {
        let s = plane();
        let (_, x) = gens(&s);
        let u = &Element::one() + &Element::gen(x);
        assert!(matches!(invert_unipotent(&u, &s, 5), Err(AlgebraError::NotNilpotent(_))));
    }

    #[test]
    fn tensor_with_plane_supercommutes() {
        let s = plane();
        let (t, x) = gens(&s);
        let t2 = graded_tensor_algebra(&s, &s);
        assert!(matches!(t2, Err(AlgebraError::NameClash(_))));
        let trivial = RewriteSystem::free(Alphabet::new());
        let same = graded_tensor_algebra(&s, &trivial).unwrap();
        assert_eq!(same.system.rules(), s.rules());
        let other = RewriteSystem::free(Alphabet::from_list(&[("b", Parity::Odd), ("c", Parity::Even)]).unwrap());
        let ta = graded_tensor_algebra(&s, &other).unwrap();
        let b = ta.right_gen(other.alphabet().gen("b").unwrap());
        let tt = ta.left_gen(t);
        let xx = ta.left_gen(x);
        assert_eq!(ta.system.nf_word(&[b, tt]).unwrap(), -Element::word(&[tt, b]));
        assert_eq!(ta.system.nf_word(&[b, xx]).unwrap(), Element::word(&[xx, b]));
    }

    #[test]
    fn span_comparison() {
        let s = plane();
        let (t, x) = gens(&s);
        let rel = &(&Element::word(&[x, t]) - &Element::word(&[t, x])) - &Element::word(&[x, x]).h_times();
        let twice = rel.scale(&QRational::from_int(2));
        assert!(span_equal(std::slice::from_ref(&rel), &[twice]).unwrap());
        let classical = &Element::word(&[x, t]) - &Element::word(&[t, x]);
        assert!(!span_equal(&[classical], std::slice::from_ref(&rel)).unwrap());
        assert!(span_equal(&[], &[Element::zero()]).unwrap());
        assert!(matches!(span_equal(&[Element::gen(x)], &[rel]), Err(AlgebraError::NotQuadratic(_))));
    }

    #[test]
    fn interreduce_orients_and_cancels() {
        let s = plane();
        let (t, x) = gens(&s);
        let r1 = &(&Element::word(&[x, t]) - &Element::word(&[t, x])) - &Element::word(&[x, x]).h_times();
        let r2 = &Element::word(&[t, t]) + &Element::word(&[t, x]).h_times();
        // a redundant homogeneous combination goes first
        let r3 = &r2.scale(&QRational::from_int(3)) + &r1.h_times();
        let (sys, stuck) = interreduce(s.alphabet(), &[r3, r1, r2]).unwrap();
        assert!(stuck.is_empty());
        assert_eq!(sys.rules(), s.rules().iter().rev().cloned().collect::<Vec<_>>());
    }
}
