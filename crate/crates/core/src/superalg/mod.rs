//! Graded free algebra over `Q(q)` extended by one odd square-zero scalar `h`.
//!
//! Generators carry a Z2 parity and an order rank. Elements are finite sums of
//! monomials `c * h^e * w` with `e` in {0, 1}; `h` always sits at the front of
//! a monomial and passing it across an odd word costs a sign. Relations are
//! applied as oriented rewrite rules ([`RewriteSystem`]), with overlap-based
//! confluence checking and a few constructions used by the checks
//! (substitution, graded tensor products, localization, unipotent inverses,
//! span comparison of quadratic relations).

mod element;
mod ops;
mod rewrite;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

pub use element::{Element, ElementParity, Monomial, Term, Word};
pub use ops::{
    derive_inverse_rules, graded_tensor_algebra, interreduce, invert_unipotent, invert_with_unit, span_equal,
    substitute, TensorAlgebra,
};
pub use rewrite::{Overlap, RewriteSystem, Rule, DEFAULT_STEP_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, other: Parity) -> Parity {
        Parity::from_bit((self.bit() + other.bit()) % 2 == 1)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A generator handle: order rank in the high bits, parity in the low bit.
///
/// Comparing two handles of one alphabet compares their ranks, which is the
/// letter order used by the monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(u16);

impl Gen {
    pub fn new(rank: usize, parity: Parity) -> Self {
        Gen(((rank as u16) << 1) | parity.bit() as u16)
    }

    pub fn rank(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_odd(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn parity(self) -> Parity {
        Parity::from_bit(self.is_odd())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
}

/// Ordered generator set. Position in the list is the order rank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
    by_name: HashMap<String, Gen>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from `(name, parity)` pairs listed in increasing order.
    pub fn from_list<S: AsRef<str>>(list: &[(S, Parity)]) -> Result<Self> {
        let mut a = Alphabet::new();
        for (name, p) in list {
            a.push(name.as_ref(), *p)?;
        }
        Ok(a)
    }

    /// Append a generator above all existing ones.
    pub fn push(&mut self, name: &str, parity: Parity) -> Result<Gen> {
        if name == "h" || name == "q" {
            return Err(AlgebraError::NameClash(name.to_string()));
        }
        if self.by_name.contains_key(name) {
            return Err(AlgebraError::NameClash(name.to_string()));
        }
        let g = Gen::new(self.gens.len(), parity);
        self.gens.push(Generator { name: name.to_string(), parity });
        self.by_name.insert(name.to_string(), g);
        Ok(g)
    }

    /// Insert a generator at order rank `at`, shifting the letters above it
    /// up by one. Elements over the old alphabet must be remapped with
    /// [`Alphabet::shift_from`].
    pub fn insert(&mut self, at: usize, name: &str, parity: Parity) -> Result<Gen> {
        if at > self.gens.len() {
            return Err(AlgebraError::UnknownGenerator(format!("rank {at}")));
        }
        self.push(name, parity)?;
        let g = self.gens.pop().expect("just pushed");
        self.gens.insert(at, g);
        self.by_name = self.gens.iter().enumerate().map(|(i, g)| (g.name.clone(), Gen::new(i, g.parity))).collect();
        Ok(Gen::new(at, parity))
    }

    /// Letter map matching [`Alphabet::insert`] at rank `at`.
    pub fn shift_from(at: usize) -> impl Fn(Gen) -> Gen {
        move |g| if g.rank() >= at { Gen::new(g.rank() + 1, g.parity()) } else { g }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<Gen> {
        self.by_name.get(name).copied()
    }

    /// Like [`get`](Self::get) but fails with [`AlgebraError::UnknownGenerator`].
    pub fn gen(&self, name: &str) -> Result<Gen> {
        self.get(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.gens[g.rank()].name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn iter(&self) -> impl Iterator<Item = (Gen, &Generator)> {
        self.gens.iter().enumerate().map(|(i, g)| (Gen::new(i, g.parity), g))
    }

    /// True when `g` is a valid handle of this alphabet (rank and parity agree).
    pub fn contains(&self, g: Gen) -> bool {
        self.gens.get(g.rank()).is_some_and(|x| x.parity == g.parity())
    }

    /// Reject elements that mention letters outside this alphabet.
    pub fn check(&self, e: &Element) -> Result<()> {
        for m in e.monomials() {
            if let Some(g) = m.word.iter().find(|g| !self.contains(**g)) {
                return Err(AlgebraError::GeneratorMismatch(format!(
                    "letter of rank {} ({}) not in alphabet of size {}",
                    g.rank(),
                    g.parity(),
                    self.len()
                )));
            }
        }
        Ok(())
    }

    pub fn render(&self, e: &Element) -> String {
        e.render(self)
    }
}
