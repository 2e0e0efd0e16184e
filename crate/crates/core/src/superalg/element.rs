use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Alphabet, Gen, Parity};
use crate::error::Result;
use crate::scalars::QRational;

pub type Word = Vec<Gen>;

/// Monomial key `h^e * word` ordered by the monomial order.
///
/// Every `h`-free key is larger than every key carrying `h`; within the same
/// `h`-degree keys compare by length, then lexicographically by letter rank.
/// Rules whose `h`-free right-hand side decreases therefore decrease in this
/// order as a whole, and rewriting terminates because `h^2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub h: bool,
    pub word: Word,
}

impl Term {
    pub fn new(h: bool, word: Word) -> Self {
        Term { h, word }
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.h ^ word_is_odd(&self.word))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        other.h.cmp(&self.h).then(self.word.len().cmp(&other.word.len())).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn word_is_odd(w: &[Gen]) -> bool {
    w.iter().filter(|g| g.is_odd()).count() % 2 == 1
}

/// Borrowed view of one monomial `coeff * h^hdeg * word`.
#[derive(Clone, Copy, Debug)]
pub struct Monomial<'a> {
    pub coeff: &'a QRational,
    pub hdeg: u8,
    pub word: &'a [Gen],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementParity {
    Even,
    Odd,
    Mixed,
}

/// Finite linear combination of monomials in canonical form: no zero
/// coefficients, one entry per key.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Term, QRational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::scalar(QRational::one())
    }

    pub fn scalar(c: QRational) -> Self {
        Element::monomial(c, false, Vec::new())
    }

    pub fn from_int(n: i64) -> Self {
        Element::scalar(QRational::from_int(n))
    }

    /// The odd parameter `h` itself.
    pub fn h() -> Self {
        Element::monomial(QRational::one(), true, Vec::new())
    }

    pub fn gen(g: Gen) -> Self {
        Element::monomial(QRational::one(), false, vec![g])
    }

    pub fn word(w: &[Gen]) -> Self {
        Element::monomial(QRational::one(), false, w.to_vec())
    }

    pub fn monomial(c: QRational, h: bool, word: Word) -> Self {
        let mut e = Element::zero();
        e.add_term(Term { h, word }, c);
        e
    }

    pub(crate) fn add_term(&mut self, key: Term, c: QRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Element, c: &QRational) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Term, &QRational)> {
        self.terms.iter()
    }

    /// Monomials in increasing monomial order.
    pub fn monomials(&self) -> impl DoubleEndedIterator<Item = Monomial<'_>> {
        self.terms.iter().map(|(t, c)| Monomial { coeff: c, hdeg: t.h as u8, word: &t.word })
    }

    pub fn coeff(&self, key: &Term) -> QRational {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Largest term in the monomial order.
    pub fn leading(&self) -> Option<(&Term, &QRational)> {
        self.terms.last_key_value()
    }

    /// Largest term without `h`, if the element has an `h`-free part.
    pub fn leading_h_free(&self) -> Option<(&Term, &QRational)> {
        self.leading().filter(|(t, _)| !t.h)
    }

    pub fn parity(&self) -> ElementParity {
        let mut seen = None;
        for t in self.terms.keys() {
            let p = t.parity();
            match seen {
                None => seen = Some(p),
                Some(s) if s != p => return ElementParity::Mixed,
                _ => {}
            }
        }
        match seen {
            Some(Parity::Odd) => ElementParity::Odd,
            _ => ElementParity::Even,
        }
    }

    /// Zero is homogeneous of both parities.
    pub fn is_homogeneous(&self, p: Parity) -> bool {
        self.terms.keys().all(|t| t.parity() == p)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|t| t.word.len()).max().unwrap_or(0)
    }

    /// Set `h = 0`.
    pub fn drop_h(&self) -> Element {
        Element { terms: self.terms.iter().filter(|(t, _)| !t.h).map(|(t, c)| (t.clone(), c.clone())).collect() }
    }

    /// Left multiplication by `h`.
    pub fn h_times(&self) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| !t.h)
                .map(|(t, c)| (Term { h: true, word: t.word.clone() }, c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `h`, i.e. the element `y` with `self = x + h*y` and `x, y` h-free.
    pub fn h_part(&self) -> Element {
        Element {
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.h)
                .map(|(t, c)| (Term { h: false, word: t.word.clone() }, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &QRational) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(t, v)| (t.clone(), v * c)).collect() }
    }

    pub fn try_map_coeffs(&self, mut f: impl FnMut(&QRational) -> Result<QRational>) -> Result<Element> {
        let mut out = Element::zero();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Rename letters; used when embedding into a larger alphabet.
    pub fn map_letters(&self, mut f: impl FnMut(Gen) -> Gen) -> Element {
        let mut out = Element::zero();
        for (t, c) in &self.terms {
            out.add_term(Term { h: t.h, word: t.word.iter().map(|g| f(*g)).collect() }, c.clone());
        }
        out
    }

    /// The constant coefficient (`h`-free, empty word).
    pub fn constant_term(&self) -> QRational {
        self.coeff(&Term { h: false, word: Vec::new() })
    }

    /// True for `c` or `c*h` with no letters.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|t| t.word.is_empty())
    }

    pub fn pow(&self, n: u32) -> Element {
        let mut acc = Element::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical text, monomials in decreasing order, e.g.
    /// `x*theta - theta*x - h*x^2`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (t, c) in self.terms.iter().rev() {
            let neg = c.sign_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            let abs = if neg { -c } else { c.clone() };
            let unit = abs.is_one();
            if !unit || (!t.h && t.word.is_empty()) {
                factors.push(abs.render_unsigned());
            }
            if t.h {
                factors.push("h".to_string());
            }
            factors.extend(render_word(&t.word, alphabet));
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn render_word(w: &[Gen], alphabet: &Alphabet) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i + 1;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        let name = if alphabet.contains(w[i]) { alphabet.name(w[i]).to_string() } else { format!("#{}", w[i].rank()) };
        if j - i == 1 {
            out.push(name);
        } else {
            out.push(format!("{name}^{}", j - i));
        }
        i = j;
    }
    out
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect() }
    }
}

/// Product in the free algebra. Moving the `h` of the right factor to the
/// front past the left word costs `(-1)^{|word|}`; `h*h` terms vanish.
impl Mul for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        let mut out = Element::zero();
        for (t1, c1) in &self.terms {
            let odd_left = word_is_odd(&t1.word);
            for (t2, c2) in &rhs.terms {
                if t1.h && t2.h {
                    continue;
                }
                let mut c = c1 * c2;
                if t2.h && odd_left {
                    c = -c;
                }
                let mut word = Vec::with_capacity(t1.word.len() + t2.word.len());
                word.extend_from_slice(&t1.word);
                word.extend_from_slice(&t2.word);
                out.add_term(Term { h: t1.h || t2.h, word }, c);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl From<QRational> for Element {
    fn from(c: QRational) -> Self {
        Element::scalar(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plane() -> (Alphabet, Gen, Gen) {
        let a = Alphabet::from_list(&[("theta", Parity::Odd), ("x", Parity::Even)]).unwrap();
        let t = a.gen("theta").unwrap();
        let x = a.gen("x").unwrap();
        (a, t, x)
    }

    #[test]
    fn odd_letter_times_h_picks_up_sign() {
        let (a, t, _) = plane();
        let e = &Element::gen(t) * &Element::h();
        assert_eq!(e, -Element::gen(t).h_times());
        assert_eq!(a.render(&e), "-h*theta");
    }

    #[test]
    fn h_squares_to_zero() {
        assert!((&Element::h() * &Element::h()).is_zero());
    }

    #[test]
    fn even_letter_commutes_with_h() {
        let (a, _, x) = plane();
        let e = &Element::gen(x) * &Element::h();
        assert_eq!(e, Element::gen(x).h_times());
        assert_eq!(a.render(&e), "h*x");
    }

    #[test]
    fn parity_classes() {
        let (_, t, x) = plane();
        assert_eq!(Element::gen(x).h_times().parity(), ElementParity::Odd);
        assert_eq!((&Element::gen(t) * &Element::gen(x)).parity(), ElementParity::Odd);
        assert_eq!((&Element::gen(x) + &Element::gen(t)).parity(), ElementParity::Mixed);
        assert_eq!(Element::zero().parity(), ElementParity::Even);
    }

    #[test]
    fn render_orders_h_free_terms_first() {
        let (a, t, x) = plane();
        let xt = Element::word(&[x, t]);
        let tx = Element::word(&[t, x]);
        let hxx = Element::word(&[x, x]).h_times();
        let e = &(&xt - &tx) - &hxx;
        assert_eq!(a.render(&e), "x*theta - theta*x - h*x^2");
        let c = QRational::q() - QRational::one();
        let f = Element::gen(x).scale(&c.inv().unwrap()).h_times();
        assert_eq!(a.render(&f), "1/(q - 1)*h*x");
        assert_eq!(a.render(&Element::from_int(-2)), "-2");
        assert_eq!(a.render(&Element::zero()), "0");
    }

    fn arb_element() -> impl Strategy<Value = Element> {
        let term = (
            -3i64..=3,
            any::<bool>(),
            prop::collection::vec((0usize..3).prop_map(|r| Gen::new(r, Parity::from_bit(r == 1))), 0..=3),
        );
        prop::collection::vec(term, 0..=3).prop_map(|ts| {
            let mut e = Element::zero();
            for (c, h, w) in ts {
                e.add_term(Term::new(h, w), QRational::from_int(c));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in arb_element(), b in arb_element(), c in arb_element()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn multiplication_distributes(a in arb_element(), b in arb_element(), c in arb_element()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
