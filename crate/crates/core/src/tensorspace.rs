//! Supermatrices over [`Element`]s, graded tensor lifts, and the
//! Yang-Baxter / braid / RTT checkers.
//!
//! Tensor indices are encoded big-endian: `(i1, ..., in)` is row
//! `2^(n-1) i1 + ... + in`, so the 4x4 basis order is `00, 01, 10, 11`.

use std::fmt::Write as _;

use crate::error::{AlgebraError, Result};
use crate::report::{CheckBuilder, CheckReport};
use crate::scalars::QRational;
use crate::superalg::{span_equal, Alphabet, Element, Gen, Parity, RewriteSystem};

/// Sign convention for tensor lifts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Signs of the graded tensor product.
    Graded,
    /// Plain Kronecker lifts, every sign `+1`.
    Ungraded,
}

/// Slot of a 2x2 matrix inside a 4x4 lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

/// Placement of a 4x4 matrix inside an 8x8 lift.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    P12,
    P13,
    P23,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Element>,
    row_parities: Vec<Parity>,
    col_parities: Vec<Parity>,
}

/// Parities of `n`-fold tensor indices of the 1|1 space.
pub fn tensor_parities(n: u32) -> Vec<Parity> {
    (0..1usize << n).map(|i| Parity::from_bit(i.count_ones() % 2 == 1)).collect()
}

fn bit(index: usize, n: u32, k: u32) -> usize {
    (index >> (n - 1 - k)) & 1
}

fn sign(exp: usize) -> bool {
    exp % 2 == 1
}

impl SuperMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<Element>,
        row_parities: Vec<Parity>,
        col_parities: Vec<Parity>,
    ) -> Result<Self> {
        if entries.len() != rows * cols || row_parities.len() != rows || col_parities.len() != cols {
            return Err(AlgebraError::Dimension(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(SuperMatrix { rows, cols, entries, row_parities, col_parities })
    }

    /// Square matrix on the `n`-fold tensor power of the 1|1 space.
    pub fn square(n: u32, entries: Vec<Element>) -> Result<Self> {
        let p = tensor_parities(n);
        let d = p.len();
        Self::new(d, d, entries, p.clone(), p)
    }

    /// Square matrix from `Q(q)` scalars with optional `h` factors.
    pub fn from_fn(n: u32, mut f: impl FnMut(usize, usize) -> Element) -> Self {
        let d = 1usize << n;
        let entries = (0..d * d).map(|k| f(k / d, k % d)).collect();
        Self::square(n, entries).expect("square dimensions")
    }

    pub fn identity(n: u32) -> Self {
        Self::from_fn(n, |i, j| if i == j { Element::one() } else { Element::zero() })
    }

    pub fn zeros(n: u32) -> Self {
        Self::from_fn(n, |_, _| Element::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Element) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Element)> {
        self.entries.iter().enumerate().map(move |(k, e)| ((k / self.cols, k % self.cols), e))
    }

    pub fn row_parities(&self) -> &[Parity] {
        &self.row_parities
    }

    /// Tensor order `n` when the matrix is `2^n x 2^n`.
    fn order(&self) -> Result<u32> {
        if self.rows != self.cols || !self.rows.is_power_of_two() || self.rows < 2 {
            return Err(AlgebraError::Dimension(format!("{}x{} is not a tensor-power square", self.rows, self.cols)));
        }
        Ok(self.rows.trailing_zeros())
    }

    /// `(AB)_ij = sum_k A_ik B_kj`, factors kept in order.
    pub fn matmul(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        if self.cols != other.rows || self.col_parities != other.row_parities {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Element::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                entries.push(acc);
            }
        }
        SuperMatrix::new(self.rows, other.cols, entries, self.row_parities.clone(), other.col_parities.clone())
    }

    pub fn add(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &SuperMatrix, f: impl Fn(&Element, &Element) -> Element) -> Result<SuperMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        SuperMatrix::new(self.rows, self.cols, entries, self.row_parities.clone(), self.col_parities.clone())
    }

    pub fn scale(&self, c: &QRational) -> SuperMatrix {
        self.map(|e| e.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Element) -> Element) -> SuperMatrix {
        SuperMatrix { entries: self.entries.iter().map(f).collect(), ..self.clone() }
    }

    pub fn try_map(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<SuperMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(SuperMatrix { entries, ..self.clone() })
    }

    /// Reduce every entry in `sys`.
    pub fn normal_form(&self, sys: &RewriteSystem) -> Result<SuperMatrix> {
        self.try_map(|e| sys.normal_form(e))
    }

    /// Entrywise `q -> 1` limit of the coefficients.
    pub fn limit_q1(&self) -> Result<SuperMatrix> {
        self.try_map(|e| e.try_map_coeffs(|c| c.limit_q1_scalar()))
    }

    pub fn drop_h(&self) -> SuperMatrix {
        self.map(Element::drop_h)
    }

    pub fn trace(&self) -> Element {
        let mut acc = Element::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    /// Entries whose parity differs from `|i| + |j|` (zero entries are fine).
    pub fn parity_violations(&self) -> Vec<(usize, usize)> {
        self.entries()
            .filter(|((i, j), e)| !e.is_homogeneous(self.row_parities[*i] + self.col_parities[*j]))
            .map(|(ij, _)| ij)
            .collect()
    }

    /// Aligned grid of rendered entries.
    pub fn pretty(&self, alphabet: &Alphabet) -> String {
        let cells: Vec<String> = self.entries.iter().map(|e| alphabet.render(e)).collect();
        let mut widths = vec![0; self.cols];
        for (k, c) in cells.iter().enumerate() {
            widths[k % self.cols] = widths[k % self.cols].max(c.len());
        }
        let mut out = String::new();
        for i in 0..self.rows {
            out.push('[');
            for j in 0..self.cols {
                let c = &cells[i * self.cols + j];
                let sep = if j + 1 == self.cols { "" } else { "  " };
                let _ = write!(out, "{c:>w$}{sep}", w = widths[j]);
            }
            out.push_str("]\n");
        }
        out
    }
}

/// 4x4 lift of a 2x2 matrix into one tensor slot.
///
/// Graded: `(M_1)^{ab}_{cd} = (-1)^{c(b+d)} M^a_c delta^b_d` and
/// `(M_2)^{ab}_{cd} = (-1)^{a(b+d)} M^b_d delta^a_c`.
pub fn lift_factor(m: &SuperMatrix, slot: Slot, grading: Grading) -> Result<SuperMatrix> {
    if m.rows != 2 || m.cols != 2 {
        return Err(AlgebraError::Dimension(format!("lift of a {}x{} matrix", m.rows, m.cols)));
    }
    let graded = grading == Grading::Graded;
    Ok(SuperMatrix::from_fn(2, |row, col| {
        let (a, b) = (row >> 1, row & 1);
        let (c, d) = (col >> 1, col & 1);
        let (entry, exp) = match slot {
            Slot::First if b == d => (m.get(a, c), c * (b + d)),
            Slot::Second if a == c => (m.get(b, d), a * (b + d)),
            _ => return Element::zero(),
        };
        if graded && sign(exp) {
            -entry
        } else {
            entry.clone()
        }
    }))
}

/// 8x8 lift of a 4x4 matrix into two of three tensor slots.
pub fn lift_three(r: &SuperMatrix, position: Position, grading: Grading) -> Result<SuperMatrix> {
    if r.order()? != 2 {
        return Err(AlgebraError::Dimension("lift_three expects a 4x4 matrix".into()));
    }
    let graded = grading == Grading::Graded;
    Ok(SuperMatrix::from_fn(3, |row, col| {
        let i = [bit(row, 3, 0), bit(row, 3, 1), bit(row, 3, 2)];
        let j = [bit(col, 3, 0), bit(col, 3, 1), bit(col, 3, 2)];
        let (entry, exp) = match position {
            Position::P12 if i[2] == j[2] => (r.get(2 * i[0] + i[1], 2 * j[0] + j[1]), 0),
            Position::P13 if i[1] == j[1] => (r.get(2 * i[0] + i[2], 2 * j[0] + j[2]), i[1] * (i[2] + j[2])),
            Position::P23 if i[0] == j[0] => {
                (r.get(2 * i[1] + i[2], 2 * j[1] + j[2]), i[0] * (i[1] + i[2] + j[1] + j[2]))
            }
            _ => return Element::zero(),
        };
        if graded && sign(exp) {
            -entry
        } else {
            entry.clone()
        }
    }))
}

/// `P^{i1 i2}_{j1 j2} = (-1)^{i1 i2} delta^{i1}_{j2} delta^{i2}_{j1}`.
pub fn super_permutation() -> SuperMatrix {
    SuperMatrix::from_fn(2, |row, col| {
        let (i1, i2) = (row >> 1, row & 1);
        let (j1, j2) = (col >> 1, col & 1);
        if i1 == j2 && i2 == j1 {
            Element::from_int(if i1 * i2 == 1 { -1 } else { 1 })
        } else {
            Element::zero()
        }
    })
}

fn residual_report(id: &str, anchor: &str, residual: &SuperMatrix, alphabet: &Alphabet, n: u32) -> CheckBuilder {
    let mut b = CheckBuilder::new(id, anchor);
    for ((i, j), e) in residual.entries() {
        b.zero(format!("({:0w$b},{:0w$b})", i, j, w = n as usize), e, alphabet);
    }
    b
}

/// `R12 R13 R23 - R23 R13 R12`, all 64 components.
pub fn ybe_residual(r: &SuperMatrix, grading: Grading) -> Result<SuperMatrix> {
    let r12 = lift_three(r, Position::P12, grading)?;
    let r13 = lift_three(r, Position::P13, grading)?;
    let r23 = lift_three(r, Position::P23, grading)?;
    let lhs = r12.matmul(&r13)?.matmul(&r23)?;
    let rhs = r23.matmul(&r13)?.matmul(&r12)?;
    lhs.sub(&rhs)
}

pub fn ybe_check(id: &str, anchor: &str, r: &SuperMatrix, grading: Grading) -> Result<CheckReport> {
    let res = ybe_residual(r, grading)?;
    Ok(residual_report(id, anchor, &res, &Alphabet::new(), 3).finish())
}

/// `R12 R23 R12 - R23 R12 R23` for a braid-form matrix.
pub fn braid_residual(rhat: &SuperMatrix, grading: Grading) -> Result<SuperMatrix> {
    let r12 = lift_three(rhat, Position::P12, grading)?;
    let r23 = lift_three(rhat, Position::P23, grading)?;
    let lhs = r12.matmul(&r23)?.matmul(&r12)?;
    let rhs = r23.matmul(&r12)?.matmul(&r23)?;
    lhs.sub(&rhs)
}

pub fn braid_check(id: &str, anchor: &str, rhat: &SuperMatrix, grading: Grading) -> Result<CheckReport> {
    let res = braid_residual(rhat, grading)?;
    Ok(residual_report(id, anchor, &res, &Alphabet::new(), 3).finish())
}

/// Eigenprojectors `(I +/- R)/2` of an involutive `R`.
#[derive(Clone, Debug)]
pub struct Projectors {
    pub plus: SuperMatrix,
    pub minus: SuperMatrix,
}

/// Verify `R^2 = I`, then build and check the projectors. The projectors are
/// returned only when `R^2 = I` holds.
pub fn involution_and_projectors(
    id: &str,
    anchor: &str,
    rhat: &SuperMatrix,
) -> Result<(Option<Projectors>, CheckReport)> {
    let alphabet = Alphabet::new();
    let n = rhat.order()?;
    let id_m = SuperMatrix::identity(n);
    let square = rhat.matmul(rhat)?.sub(&id_m)?;
    let mut b = CheckBuilder::new(id, anchor);
    for ((i, j), e) in square.entries() {
        b.zero(format!("R^2-I ({i},{j})"), e, &alphabet);
    }
    if b.has_residuals() {
        b.note("R^2 != I; projectors not formed");
        return Ok((None, b.finish()));
    }
    let half = QRational::from_int(2).inv()?;
    let plus = id_m.add(rhat)?.scale(&half);
    let minus = id_m.sub(rhat)?.scale(&half);
    let checks = [
        ("P+P+-P+", plus.matmul(&plus)?.sub(&plus)?),
        ("P-P--P-", minus.matmul(&minus)?.sub(&minus)?),
        ("P+P-", plus.matmul(&minus)?),
        ("P-P+", minus.matmul(&plus)?),
        ("P++P--I", plus.add(&minus)?.sub(&id_m)?),
    ];
    for (name, m) in &checks {
        for ((i, j), e) in m.entries() {
            b.zero(format!("{name} ({i},{j})"), e, &alphabet);
        }
    }
    let two = Element::from_int(2);
    b.zero("tr P+ - 2", &(&plus.trace() - &two), &alphabet);
    b.zero("tr P- - 2", &(&minus.trace() - &two), &alphabet);
    b.note(format!("tr P+ = {}, tr P- = {}", alphabet.render(&plus.trace()), alphabet.render(&minus.trace())));
    Ok((Some(Projectors { plus, minus }), b.finish()))
}

/// Components of `proj` applied to the column `(z0 z0, z0 z1, z1 z0, z1 z1)`.
pub fn quotient_relations(proj: &SuperMatrix, coords: [Gen; 2]) -> Result<Vec<Element>> {
    if proj.order()? != 2 {
        return Err(AlgebraError::Dimension("quotient_relations expects a 4x4 projector".into()));
    }
    let products: Vec<Element> = (0..4).map(|k| Element::word(&[coords[k >> 1], coords[k & 1]])).collect();
    Ok((0..4)
        .map(|i| {
            let mut acc = Element::zero();
            for (k, p) in products.iter().enumerate() {
                acc = &acc + &(proj.get(i, k) * p);
            }
            acc
        })
        .collect())
}

/// Unreduced components of `R T1 T2 - T2 T1 R`.
pub fn rtt_components(r: &SuperMatrix, t: &SuperMatrix) -> Result<SuperMatrix> {
    let t1 = lift_factor(t, Slot::First, Grading::Graded)?;
    let t2 = lift_factor(t, Slot::Second, Grading::Graded)?;
    let lhs = r.matmul(&t1)?.matmul(&t2)?;
    let rhs = t2.matmul(&t1)?.matmul(r)?;
    lhs.sub(&rhs)
}

/// RTT relation: all 16 components reduce to zero in `rel`, and the
/// unreduced components span the same space as `target`.
pub fn rtt_check(
    id: &str,
    anchor: &str,
    r: &SuperMatrix,
    t: &SuperMatrix,
    rel: &RewriteSystem,
    target: &[Element],
) -> Result<CheckReport> {
    let raw = rtt_components(r, t)?;
    let mut b = CheckBuilder::new(id, anchor);
    for ((i, j), e) in raw.entries() {
        let nf = rel.normal_form(e)?;
        b.zero(format!("({i:02b},{j:02b})"), &nf, rel.alphabet());
    }
    let nonzero: Vec<Element> = raw.entries().map(|(_, e)| e.clone()).filter(|e| !e.is_zero()).collect();
    let same = span_equal(&nonzero, target)?;
    b.require("span", same, "unreduced RTT components do not span the relation set");
    b.note(format!("{} nonzero unreduced components", nonzero.len()));
    Ok(b.finish())
}
