//! Structured outcome of a named verification.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::superalg::{Alphabet, Element};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Incomplete,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Incomplete => "INCOMPLETE",
        })
    }
}

/// A nonzero residual component, rendered canonically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    pub index: String,
    pub value: String,
}

/// Result of one check. `status` is `Pass` exactly when `residuals` is empty
/// and nothing left the check incomplete.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    /// Number of components that were required to vanish.
    pub components: usize,
    pub residuals: Vec<Residual>,
    pub notes: Vec<String>,
    pub elapsed_ms: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Equality on everything except timing.
    pub fn same_outcome(&self, other: &CheckReport) -> bool {
        let mut a = self.clone();
        a.elapsed_ms = other.elapsed_ms;
        a == *other
    }
}

/// Accumulates components, residuals and notes, then fixes the status.
pub struct CheckBuilder {
    id: String,
    anchor: String,
    components: usize,
    residuals: Vec<Residual>,
    notes: Vec<String>,
    incomplete: bool,
    started: Instant,
}

impl CheckBuilder {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        CheckBuilder {
            id: id.into(),
            anchor: anchor.into(),
            components: 0,
            residuals: Vec::new(),
            notes: Vec::new(),
            incomplete: false,
            started: Instant::now(),
        }
    }

    /// Require `value` to be the zero element.
    pub fn zero(&mut self, index: impl Into<String>, value: &Element, alphabet: &Alphabet) -> &mut Self {
        self.components += 1;
        if !value.is_zero() {
            self.residuals.push(Residual { index: index.into(), value: alphabet.render(value) });
        }
        self
    }

    /// Require a boolean condition; a failure is recorded as a residual.
    pub fn require(&mut self, index: impl Into<String>, ok: bool, witness: impl Into<String>) -> &mut Self {
        self.components += 1;
        if !ok {
            self.residuals.push(Residual { index: index.into(), value: witness.into() });
        }
        self
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn incomplete(&mut self, why: impl Into<String>) -> &mut Self {
        self.incomplete = true;
        self.notes.push(why.into());
        self
    }

    pub fn has_residuals(&self) -> bool {
        !self.residuals.is_empty()
    }

    pub fn finish(self) -> CheckReport {
        let status = if !self.residuals.is_empty() {
            Status::Fail
        } else if self.incomplete {
            Status::Incomplete
        } else {
            Status::Pass
        };
        CheckReport {
            id: self.id,
            anchor: self.anchor,
            status,
            components: self.components,
            residuals: self.residuals,
            notes: self.notes,
            elapsed_ms: self.started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_residuals() {
        let a = Alphabet::new();
        let mut b = CheckBuilder::new("t", "anchor");
        b.zero("0", &Element::zero(), &a);
        let r = b.finish();
        assert!(r.passed());
        assert_eq!(r.components, 1);

        let mut b = CheckBuilder::new("t", "anchor");
        b.zero("0", &Element::h(), &a).incomplete("never mind");
        let r = b.finish();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.residuals, vec![Residual { index: "0".into(), value: "h".into() }]);

        let mut b = CheckBuilder::new("t", "anchor");
        b.incomplete("overlap left open");
        assert_eq!(b.finish().status, Status::Incomplete);
    }
}
