//! Text format for elements and presentations.
//!
//! ```text
//! # the h-superplane
//! gen x: even;
//! gen theta: odd;
//! rel x*theta = theta*x + h*x^2;
//! rel theta^2 = -h*theta*x;
//! ```
//!
//! Expressions use `+ - * / ^` and parentheses over declared generators, the
//! rational-function parameter `q` and the reserved odd symbol `h`. Division
//! and negative powers are allowed only for `h`-free scalars. `#` and `//`
//! start comments.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{AlgebraError, Result};
use crate::scalars::QRational;
use crate::superalg::{Alphabet, Element, ElementParity, Parity, RewriteSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Colon,
    Comma,
    Semi,
    Eq,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Num(text.parse().unwrap()), pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            out.push((Tok::Ident(text), pos));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            other => return Err(AlgebraError::Parse { line, col, msg: format!("unexpected character `{other}`") }),
        };
        out.push((tok, pos));
        advance(1, &mut i, &mut col);
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn new(src: &str, alphabet: &'a Alphabet) -> Result<Self> {
        Ok(Parser { toks: lex(src)?, at: 0, alphabet })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(AlgebraError::Parse { line: p.line, col: p.col, msg: msg.into() })
    }

    fn semantic<T>(&self, at: Pos, msg: impl fmt::Display) -> Result<T> {
        Err(AlgebraError::Semantic(format!("{}:{}: {msg}", at.line, at.col)))
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            let found = self.peek().clone();
            self.err(format!("expected {t}, found {found}"))
        }
    }

    fn expr(&mut self) -> Result<Element> {
        let mut acc = match self.peek() {
            Tok::Minus => {
                self.bump();
                -self.term()?
            }
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.pos();
                    let d = self.unary()?;
                    let c = self.scalar_of(&d, at, "divisor")?;
                    let inv = match c.inv() {
                        Ok(v) => v,
                        Err(_) => return self.semantic(at, "division by zero"),
                    };
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn scalar_of(&self, e: &Element, at: Pos, what: &str) -> Result<QRational> {
        if !e.is_scalar() || e.terms().any(|(t, _)| t.h) {
            return self.semantic(at, format!("{what} must be an h-free scalar in q"));
        }
        Ok(e.constant_term())
    }

    fn unary(&mut self) -> Result<Element> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Element> {
        let at = self.pos();
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let n = match self.bump() {
            Tok::Num(n) => n,
            other => return self.err(format!("expected exponent, found {other}")),
        };
        let Ok(n) = u32::try_from(n) else {
            return self.semantic(at, "exponent too large");
        };
        if neg {
            let c = self.scalar_of(&base, at, "base of a negative power")?;
            return match c.pow(-(n as i32)) {
                Ok(v) => Ok(Element::scalar(v)),
                Err(_) => self.semantic(at, "zero to a negative power"),
            };
        }
        Ok(base.pow(n))
    }

    fn atom(&mut self) -> Result<Element> {
        let at = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Element::scalar(QRational::from_rational(BigRational::from_integer(n)))),
            Tok::Ident(name) => match name.as_str() {
                "q" => Ok(Element::scalar(QRational::q())),
                "h" => Ok(Element::h()),
                _ => match self.alphabet.get(&name) {
                    Some(g) => Ok(Element::gen(g)),
                    None => self.semantic(at, format!("undeclared symbol `{name}`")),
                },
            },
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => {
                self.at -= usize::from(other != Tok::End);
                self.err(format!("expected an expression, found {other}"))
            }
        }
    }
}

/// Parse an element over `alphabet`.
pub fn parse_element(src: &str, alphabet: &Alphabet) -> Result<Element> {
    let mut p = Parser::new(src, alphabet)?;
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let t = p.peek().clone();
        return p.err(format!("unexpected {t}"));
    }
    Ok(e)
}

/// Parse a rational function in `q`, e.g. `(q^2 - 1)/(q - 1)`.
pub fn parse_scalar(src: &str) -> Result<QRational> {
    let empty = Alphabet::new();
    let e = parse_element(src, &empty)?;
    if e.terms().any(|(t, _)| t.h) {
        return Err(AlgebraError::Semantic("expected an h-free scalar".into()));
    }
    Ok(e.constant_term())
}

/// A parsed presentation: declared generators in order, then relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslDocument {
    pub alphabet: Alphabet,
    pub relations: Vec<(Element, Element)>,
}

impl DslDocument {
    /// Relations as elements `lhs - rhs`.
    pub fn relation_elements(&self) -> Vec<Element> {
        self.relations.iter().map(|(l, r)| l - r).collect()
    }

    /// Orient every relation by its leading `h`-free term.
    pub fn to_system(&self) -> Result<RewriteSystem> {
        RewriteSystem::from_relations(self.alphabet.clone(), &self.relation_elements())
    }

    /// Canonical text; parsing it again yields an equal document.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for g in self.alphabet.generators() {
            out.push_str(&format!("gen {}: {};\n", g.name, g.parity));
        }
        for (l, r) in &self.relations {
            out.push_str(&format!("rel {} = {};\n", self.alphabet.render(l), self.alphabet.render(r)));
        }
        out
    }
}

pub fn parse_dsl(src: &str) -> Result<DslDocument> {
    let mut alphabet = Alphabet::new();
    let mut relations = Vec::new();
    let toks = lex(src)?;
    let mut at = 0usize;
    loop {
        let (tok, pos) = toks[at].clone();
        match tok {
            Tok::End => break,
            Tok::Ident(kw) if kw == "gen" => {
                at += 1;
                let mut names = Vec::new();
                loop {
                    match &toks[at] {
                        (Tok::Ident(n), p) => names.push((n.clone(), *p)),
                        (t, p) => {
                            return Err(AlgebraError::Parse {
                                line: p.line,
                                col: p.col,
                                msg: format!("expected generator name, found {t}"),
                            })
                        }
                    }
                    at += 1;
                    if toks[at].0 == Tok::Comma {
                        at += 1;
                    } else {
                        break;
                    }
                }
                expect_tok(&toks, &mut at, Tok::Colon)?;
                let parity = match &toks[at] {
                    (Tok::Ident(p), _) if p == "even" => Parity::Even,
                    (Tok::Ident(p), _) if p == "odd" => Parity::Odd,
                    (t, p) => {
                        return Err(AlgebraError::Parse {
                            line: p.line,
                            col: p.col,
                            msg: format!("expected `even` or `odd`, found {t}"),
                        })
                    }
                };
                at += 1;
                expect_tok(&toks, &mut at, Tok::Semi)?;
                for (n, p) in names {
                    alphabet
                        .push(&n, parity)
                        .map_err(|e| AlgebraError::Semantic(format!("{}:{}: {e}", p.line, p.col)))?;
                }
            }
            Tok::Ident(kw) if kw == "rel" => {
                let mut p = Parser { toks: toks.clone(), at: at + 1, alphabet: &alphabet };
                let lhs = p.expr()?;
                p.expect(Tok::Eq)?;
                let rhs = p.expr()?;
                p.expect(Tok::Semi)?;
                at = p.at;
                if (&lhs - &rhs).parity() == ElementParity::Mixed {
                    return Err(AlgebraError::Semantic(format!(
                        "{}:{}: relation is not parity-homogeneous",
                        pos.line, pos.col
                    )));
                }
                relations.push((lhs, rhs));
            }
            other => {
                return Err(AlgebraError::Parse {
                    line: pos.line,
                    col: pos.col,
                    msg: format!("expected `gen` or `rel`, found {other}"),
                })
            }
        }
    }
    Ok(DslDocument { alphabet, relations })
}

fn expect_tok(toks: &[(Tok, Pos)], at: &mut usize, t: Tok) -> Result<()> {
    let (found, p) = &toks[*at];
    if *found == t {
        *at += 1;
        Ok(())
    } else {
        Err(AlgebraError::Parse { line: p.line, col: p.col, msg: format!("expected {t}, found {found}") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A_H: &str = "gen x: even; gen theta: odd; rel x*theta = theta*x + h*x^2; rel theta^2 = -h*theta*x;";

    #[test]
    fn superplane_document() {
        let doc = parse_dsl(A_H).unwrap();
        assert_eq!(doc.alphabet.len(), 2);
        assert_eq!(doc.relations.len(), 2);
        // declaration order is the letter order, so x < theta here and the
        // first relation is oriented the other way round
        let sys = doc.to_system().unwrap();
        assert!(sys.check_confluence(4).unwrap().is_empty());
        let rendered: Vec<String> = sys.rules().iter().map(|r| sys.render_rule(r)).collect();
        assert_eq!(rendered, ["theta*x = x*theta - h*x^2", "theta^2 = -h*theta*x"]);

        let swapped = A_H.replace("gen x: even; gen theta: odd;", "gen theta: odd; gen x: even;");
        let sys = parse_dsl(&swapped).unwrap().to_system().unwrap();
        let rendered: Vec<String> = sys.rules().iter().map(|r| sys.render_rule(r)).collect();
        assert_eq!(rendered, ["x*theta = theta*x + h*x^2", "theta^2 = -h*theta*x"]);
    }

    #[test]
    fn empty_document() {
        let doc = parse_dsl("  # nothing\n").unwrap();
        assert!(doc.alphabet.is_empty());
        assert!(doc.relations.is_empty());
    }

    #[test]
    fn parity_mismatch_is_semantic_error() {
        let err = parse_dsl("gen x: even; gen theta: odd; rel x = theta;").unwrap_err();
        assert!(matches!(err, AlgebraError::Semantic(m) if m.contains("parity")));
    }

    #[test]
    fn undeclared_symbol() {
        let err = parse_dsl("gen x: even; rel x*y = y*x;").unwrap_err();
        assert!(matches!(err, AlgebraError::Semantic(m) if m.contains("`y`")));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_dsl("gen x: even;\nrel x* = x;").unwrap_err();
        assert_eq!(err, AlgebraError::Parse { line: 2, col: 8, msg: "expected an expression, found `=`".into() });
        assert!(matches!(parse_dsl("gen x even;"), Err(AlgebraError::Parse { line: 1, col: 7, .. })));
    }

    #[test]
    fn h_is_reserved() {
        assert!(parse_dsl("gen h: odd;").is_err());
    }

    #[test]
    fn coefficient_literals() {
        let a = Alphabet::from_list(&[("x", Parity::Even)]).unwrap();
        let e = parse_element("1/(q-1)*h*x - (q - 1/q)*x", &a).unwrap();
        assert_eq!(a.render(&e), "-(q^2 - 1)/q*x + 1/(q - 1)*h*x");
        assert_eq!(parse_element(&a.render(&e), &a).unwrap(), e);
        assert!(parse_element("x/x", &a).is_err());
        assert!(parse_element("x/(q-q)", &a).is_err());
    }

    #[test]
    fn render_parse_fixed_point() {
        let doc = parse_dsl(A_H).unwrap();
        let text = doc.render();
        let again = parse_dsl(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.render(), text);
    }

    #[test]
    fn scalar_parsing() {
        let v = parse_scalar("(q^2 - 1)/(q - 1)").unwrap();
        assert_eq!(v.to_string(), "q + 1");
        assert_eq!(parse_scalar("q^-2").unwrap().to_string(), "1/q^2");
        assert!(parse_scalar("h").is_err());
    }
}
