//! Exact rational functions in the deformation parameter `q`.
//!
//! [`QRational`] is a reduced fraction of two univariate polynomials with
//! arbitrary-precision rational coefficients. The denominator is kept monic
//! and coprime to the numerator, so structural equality is mathematical
//! equality. [`QRational::limit_q1`] evaluates the `q -> 1` limit exactly.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{AlgebraError, Result};

/// Univariate polynomial in `q`, coefficients stored low degree first.
/// Trailing zeros are never stored, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `q`.
    pub fn q() -> Self {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Divide by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) if !l.is_one() => {
                let inv = l.recip();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Euclidean division `self = quot * divisor + rem`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if sd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        let coeffs = (0..n).map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)).collect();
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

/// An element of the field `Q(q)` in canonical form.
///
/// Invariants: `gcd(num, den) = 1`, `den` is monic, and zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QRational {
    num: Poly,
    den: Poly,
}

impl Default for QRational {
    fn default() -> Self {
        QRational::zero()
    }
}

impl QRational {
    pub fn zero() -> Self {
        QRational { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        QRational { num: Poly::one(), den: Poly::one() }
    }

    pub fn q() -> Self {
        QRational { num: Poly::q(), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        QRational::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        QRational { num: Poly::constant(r), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        QRational { num: p, den: Poly::one() }
    }

    /// Build `num / den` and reduce to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return QRational::zero();
        }
        if den.is_constant() {
            let d = den.leading().unwrap().clone();
            if d.is_one() {
                return QRational { num, den };
            }
            return QRational { num: num.scale(&d.recip()), den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.div_rem(&g).0, den.div_rem(&g).0) };
        let lead = den.leading().unwrap().recip();
        QRational { num: num.scale(&lead), den: den.scale(&lead) }
    }

    /// Re-run canonicalization. Identity on every value built through this API.
    pub fn canonicalize(&self) -> Self {
        Self::canonical(self.num.clone(), self.den.clone())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value does not depend on `q`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.num.constant_term())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &QRational) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, exp: i32) -> Result<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = QRational::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact value at `q = 1`, or [`AlgebraError::Pole`] when the reduced
    /// denominator vanishes there.
    pub fn limit_q1(&self) -> Result<BigRational> {
        let one = BigRational::one();
        let d = self.den.eval(&one);
        if d.is_zero() {
            return Err(AlgebraError::Pole(self.to_string()));
        }
        Ok(self.num.eval(&one) / d)
    }

    /// Same as [`limit_q1`](Self::limit_q1) but kept inside `Q(q)`.
    pub fn limit_q1_scalar(&self) -> Result<QRational> {
        self.limit_q1().map(QRational::from_rational)
    }

    /// Sign of the leading numerator coefficient (used by the renderer).
    fn is_negative(&self) -> bool {
        self.num.leading().is_some_and(|c| c.is_negative())
    }

    /// True when the rendering has no top-level `+`/`-` (after a leading sign
    /// is split off), so it can be used as a factor without parentheses.
    pub(crate) fn render_unsigned(&self) -> String {
        let abs = if self.is_negative() { -self } else { self.clone() };
        if abs.den.is_one() {
            let s = render_poly(&abs.num);
            return if abs.num.term_count() > 1 { format!("({s})") } else { s };
        }
        let n = render_poly(&abs.num);
        let d = render_poly(&abs.den);
        let n = if abs.num.term_count() > 1 { format!("({n})") } else { n };
        let d = if abs.den.term_count() > 1 { format!("({d})") } else { d };
        format!("{n}/{d}")
    }

    pub(crate) fn sign_negative(&self) -> bool {
        self.is_negative()
    }
}

fn render_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Render a polynomial in descending degree, e.g. `q^2 - 2*q + 1/2`.
fn render_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (deg, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match deg {
            0 => String::new(),
            1 => "q".to_string(),
            n => format!("q^{n}"),
        };
        if var.is_empty() {
            out.push_str(&render_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&render_rational(&abs));
            out.push('*');
            out.push_str(&var);
        }
    }
    out
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let body = self.render_unsigned();
        // A bare parenthesized polynomial prints without its parentheses.
        let body = if self.den.is_one() && body.starts_with('(') { body[1..body.len() - 1].to_string() } else { body };
        if self.is_negative() {
            if self.den.is_one() {
                write!(f, "{}", render_poly(&self.num))
            } else {
                write!(f, "-{body}")
            }
        } else {
            f.write_str(&body)
        }
    }
}

impl FromStr for QRational {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        crate::dsl::parse_scalar(s)
    }
}

impl Add for &QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return QRational::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        QRational::canonical(num, &self.den * &rhs.den)
    }
}

impl Sub for &QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        self + &(-rhs)
    }
}

impl Neg for &QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        QRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        -&self
    }
}

impl Mul for &QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        if self.is_zero() || rhs.is_zero() {
            return QRational::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QRational { num: &self.num * &rhs.num, den: Poly::one() };
        }
        QRational::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on a zero divisor; use [`QRational::checked_div`] for fallible code.
impl Div for &QRational {
    type Output = QRational;
    fn div(self, rhs: &QRational) -> QRational {
        self.checked_div(rhs).expect("division by zero in Q(q)")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QRational {
            type Output = QRational;
            fn $m(self, rhs: QRational) -> QRational {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> QRational {
        QRational::q()
    }

    fn int(n: i64) -> QRational {
        QRational::from_int(n)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inverse_pair_cancels() {
        let qm1 = &q() - &int(1);
        assert_eq!(&qm1 * &qm1.inv().unwrap(), int(1));
    }

    #[test]
    fn additive_inverse() {
        assert_eq!(&q() + &(-q()), QRational::zero());
        assert!((&q() - &q()).is_zero());
    }

    #[test]
    fn q_minus_qinv_over_q_minus_one() {
        // cross-multiplied: (q - 1/q) * q = q^2 - 1 = (q - 1)(q + 1)
        let lhs = &(&q() - &q().inv().unwrap()) / &(&q() - &int(1));
        let expected = QRational::new(Poly::from_coeffs(vec![rat(1, 1), rat(1, 1)]), Poly::q()).unwrap();
        assert_eq!(lhs, expected);
        assert_eq!(lhs.to_string(), "(q + 1)/q");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(QRational::zero().inv(), Err(AlgebraError::DivisionByZero)));
        assert!(int(3).checked_div(&QRational::zero()).is_err());
        assert!(QRational::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn limits_at_one() {
        let q2m1 = &(&q() * &q()) - &int(1);
        let qm1 = &q() - &int(1);
        assert_eq!((&q2m1 / &qm1).limit_q1().unwrap(), rat(2, 1));
        assert!(matches!(qm1.inv().unwrap().limit_q1(), Err(AlgebraError::Pole(_))));
        let x = &(&q() - &q().inv().unwrap()) / &qm1;
        assert_eq!(x.limit_q1().unwrap(), rat(2, 1));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let x = QRational::new(Poly::one(), Poly::from_coeffs(vec![rat(-2, 1), rat(2, 1)])).unwrap();
        assert_eq!(x.denominator(), &Poly::from_coeffs(vec![rat(-1, 1), rat(1, 1)]));
        assert_eq!(x.numerator(), &Poly::constant(rat(1, 2)));
        assert_eq!(x.to_string(), "1/2/(q - 1)");
    }

    #[test]
    fn rendering_examples() {
        let qm1 = &q() - &int(1);
        assert_eq!(qm1.to_string(), "q - 1");
        assert_eq!(qm1.inv().unwrap().to_string(), "1/(q - 1)");
        assert_eq!((-qm1.inv().unwrap()).to_string(), "-1/(q - 1)");
        assert_eq!((-&qm1).to_string(), "-q + 1");
        assert_eq!(q().inv().unwrap().to_string(), "1/q");
        assert_eq!((&q() * &q()).inv().unwrap().to_string(), "1/q^2");
        assert_eq!(QRational::from_rational(rat(-3, 4)).to_string(), "-3/4");
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-10i64..=10, 0..=5)
            .prop_map(|cs| Poly::from_coeffs(cs.into_iter().map(|c| rat(c, 1)).collect()))
    }

    fn small_rf() -> impl Strategy<Value = QRational> {
        (small_poly(), small_poly()).prop_filter_map("nonzero denominator", |(n, d)| QRational::new(n, d).ok())
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(x in small_rf()) {
            prop_assert_eq!(x.canonicalize(), x.clone());
            prop_assert_eq!(x.canonicalize().canonicalize(), x.canonicalize());
        }

        #[test]
        fn field_axioms(a in small_rf(), b in small_rf(), c in small_rf()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), QRational::one());
            }
        }

        #[test]
        fn limit_is_multiplicative(a in small_rf(), b in small_rf()) {
            if let (Ok(la), Ok(lb)) = (a.limit_q1(), b.limit_q1()) {
                prop_assert_eq!((&a * &b).limit_q1().unwrap(), la * lb);
            }
        }

        #[test]
        fn render_parse_round_trip(a in small_rf()) {
            let text = a.to_string();
            let back: QRational = text.parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
