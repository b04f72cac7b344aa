//! Structure of the network Lie algebra in the a/b/c basis: brackets from
//! closed-form tables, the involution swapping colors and cocolors,
//! centralizers, normalizers and Levi/homology data.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blockform::{complement_elems, network_elems, BlockElem, BlockKind};
use crate::exact::{q, rank_of, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("element has a nonzero o component: {0}")]
    OElementPresent(BlockElem),
    #[error("the given elements are not closed under the bracket")]
    NotASubalgebra,
    #[error("need 1 <= C <= N, got C = {c}, N = {n}")]
    OutOfRange { c: usize, n: usize },
}

/// A sparse rational combination of block elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieElement {
    coeffs: BTreeMap<BlockElem, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn unit(e: BlockElem) -> Self {
        LieElement::term(e, Rational::one())
    }

    pub fn term(e: BlockElem, c: Rational) -> Self {
        let mut x = LieElement::zero();
        x.add_term(e, c);
        x
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, e: BlockElem, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: BlockElem) -> Rational {
        self.coeffs.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BlockElem, &Rational)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> LieElement {
        let mut out = LieElement::zero();
        for (e, c) in &self.coeffs {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn has_o_component(&self) -> Option<BlockElem> {
        self.coeffs.keys().find(|e| e.kind == BlockKind::O).copied()
    }

    /// Coefficient vector over `basis`; panics if the element has support
    /// outside it.
    pub fn to_vector(&self, basis: &[BlockElem]) -> Vec<Rational> {
        let v: Vec<Rational> = basis.iter().map(|&e| self.coeff(e)).collect();
        debug_assert!(
            self.coeffs.keys().all(|e| basis.contains(e)),
            "support outside basis"
        );
        v
    }

    pub fn from_vector(basis: &[BlockElem], v: &[Rational]) -> LieElement {
        let mut out = LieElement::zero();
        for (&e, c) in basis.iter().zip(v) {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl From<BlockElem> for LieElement {
    fn from(e: BlockElem) -> Self {
        LieElement::unit(e)
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{a}*{e}")?;
            }
        }
        Ok(())
    }
}

/// The network Lie algebra with `c` colors and `b` cocolors, as the span
/// of the a/b/c matrix units inside gl(c + b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetAlgebra {
    pub c: usize,
    pub b: usize,
}

fn delta(x: usize, y: usize) -> bool {
    x == y
}

impl NetAlgebra {
    pub fn new(c: usize, b: usize) -> Self {
        assert!(c >= 1, "at least one color");
        NetAlgebra { c, b }
    }

    pub fn n(&self) -> usize {
        self.c + self.b
    }

    pub fn dim(&self) -> usize {
        self.c * self.c + self.b * self.c + self.b * self.b
    }

    /// The c, a, b elements.
    pub fn basis(&self) -> Vec<BlockElem> {
        network_elems(self.c, self.b)
    }

    /// The network basis followed by the o elements: all of gl(N).
    pub fn gl_basis(&self) -> Vec<BlockElem> {
        let mut v = self.basis();
        v.extend(complement_elems(self.c, self.b));
        v
    }

    /// Σ_b b(b,b).
    pub fn big_b(&self) -> LieElement {
        (1..=self.b).fold(LieElement::zero(), |acc, i| {
            acc.add(&BlockElem::b(i, i).into())
        })
    }

    /// Σ_c c(c,c).
    pub fn big_c(&self) -> LieElement {
        (1..=self.c).fold(LieElement::zero(), |acc, i| {
            acc.add(&BlockElem::c(i, i).into())
        })
    }

    /// The central element Σ b(b,b) + Σ c(c,c).
    pub fn big_i(&self) -> LieElement {
        self.big_b().add(&self.big_c())
    }

    /// Bracket of two block elements from the closed-form tables.
    pub fn bracket_elems(&self, x: BlockElem, y: BlockElem) -> LieElement {
        use BlockKind::*;
        let one = Rational::one;
        let mut out = LieElement::zero();
        let (i1, j1, i2, j2) = (x.row, x.col, y.row, y.col);
        match (x.kind, y.kind) {
            (C, C) | (B, B) => {
                let make = if x.kind == C {
                    BlockElem::c
                } else {
                    BlockElem::b
                };
                if delta(j1, i2) {
                    out.add_term(make(i1, j2), one());
                }
                if delta(j2, i1) {
                    out.add_term(make(i2, j1), -one());
                }
            }
            (B, A) => {
                if delta(j1, i2) {
                    out.add_term(BlockElem::a(i1, j2), one());
                }
            }
            (C, A) => {
                if delta(j2, i1) {
                    out.add_term(BlockElem::a(i2, j1), -one());
                }
            }
            (A, A) | (B, C) | (C, B) | (O, O) => {}
            (B, O) => {
                if delta(j2, i1) {
                    out.add_term(BlockElem::o(i2, j1), -one());
                }
            }
            (C, O) => {
                if delta(j1, i2) {
                    out.add_term(BlockElem::o(i1, j2), one());
                }
            }
            (O, A) => {
                if delta(j1, i2) {
                    out.add_term(BlockElem::c(i1, j2), one());
                }
                if delta(j2, i1) {
                    out.add_term(BlockElem::b(i2, j1), -one());
                }
            }
            (A, B) | (A, C) | (O, B) | (O, C) | (A, O) => {
                return self.bracket_elems(y, x).scale(&-one());
            }
        }
        out
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (ex, cx) in x.terms() {
            for (ey, cy) in y.terms() {
                let prod = cx * cy;
                for (e, c) in self.bracket_elems(*ex, *ey).terms() {
                    out.add_term(*e, c * &prod);
                }
            }
        }
        out
    }

    /// Block-order matrix of an element.
    pub fn matrix(&self, x: &LieElement) -> QMatrix {
        let n = self.n();
        let mut m = QMatrix::zeros(n, n);
        for (e, c) in x.terms() {
            m[e.position(self.c)] += c;
        }
        m
    }

    /// Reads a block-order matrix back as an element of gl(N).
    pub fn from_matrix(&self, m: &QMatrix) -> LieElement {
        let mut out = LieElement::zero();
        for r in 0..self.n() {
            for col in 0..self.n() {
                out.add_term(BlockElem::at(self.c, r, col), m[(r, col)].clone());
            }
        }
        out
    }

    /// The algebra with colors and cocolors swapped.
    pub fn dual(&self) -> NetAlgebra {
        NetAlgebra::new(self.b, self.c)
    }

    /// The involution onto the dual algebra:
    /// a(b,c) ↦ a(c,b), b(b1,b2) ↦ -c(b2,b1), c(c1,c2) ↦ -b(c2,c1).
    pub fn theta(&self, x: &LieElement) -> Result<LieElement, LieError> {
        if let Some(e) = x.has_o_component() {
            return Err(LieError::OElementPresent(e));
        }
        let mut out = LieElement::zero();
        for (e, c) in x.terms() {
            let (img, sign) = match e.kind {
                BlockKind::A => (BlockElem::a(e.col, e.row), c.clone()),
                BlockKind::B => (BlockElem::c(e.col, e.row), -c),
                BlockKind::C => (BlockElem::b(e.col, e.row), -c),
                BlockKind::O => unreachable!(),
            };
            out.add_term(img, sign);
        }
        Ok(out)
    }

    /// Matrix whose column e is [g, e] over `target`, for e in `source`.
    fn ad_matrix(&self, g: &LieElement, source: &[BlockElem], target: &[BlockElem]) -> QMatrix {
        let cols: Vec<Vec<Rational>> = source
            .iter()
            .map(|&e| self.bracket(g, &e.into()).to_vector(target))
            .collect();
        QMatrix::from_fn(target.len(), source.len(), |r, c| cols[c][r].clone())
    }

    /// Basis of {x in the algebra : [g, x] = 0 for all generators g}.
    pub fn centralizer(&self, generators: &[LieElement]) -> Vec<LieElement> {
        let basis = self.basis();
        let gl = self.gl_basis();
        let blocks: Vec<QMatrix> = generators
            .iter()
            .map(|g| self.ad_matrix(g, &basis, &gl))
            .collect();
        let stacked = stack(&blocks, basis.len());
        stacked
            .nullspace()
            .into_iter()
            .map(|v| LieElement::from_vector(&basis, &v))
            .collect()
    }

    /// True when [s, t] lies in span(sub) for all s, t in sub.
    pub fn is_subalgebra(&self, sub: &[LieElement]) -> bool {
        let gl = self.gl_basis();
        let vecs: Vec<Vec<Rational>> = sub.iter().map(|s| s.to_vector(&gl)).collect();
        let r = rank_of(&vecs);
        sub.iter().all(|s| {
            sub.iter().all(|t| {
                let mut with = vecs.clone();
                with.push(self.bracket(s, t).to_vector(&gl));
                rank_of(&with) == r
            })
        })
    }

    /// Basis of {x in the algebra : [x, s] in span(sub) for all s in sub}.
    pub fn normalizer(&self, sub: &[LieElement]) -> Result<Vec<LieElement>, LieError> {
        if sub.iter().any(|s| s.has_o_component().is_some()) || !self.is_subalgebra(sub) {
            return Err(LieError::NotASubalgebra);
        }
        let basis = self.basis();
        let gl = self.gl_basis();
        // covectors vanishing on span(sub) project onto the quotient
        let span = QMatrix::from_fn(sub.len(), gl.len(), |r, c| sub[r].coeff(gl[c]));
        let annihilator: Vec<Vec<Rational>> = if sub.is_empty() {
            (0..gl.len())
                .map(|i| {
                    (0..gl.len())
                        .map(|j| if i == j { q(1) } else { q(0) })
                        .collect()
                })
                .collect()
        } else {
            span.nullspace()
        };
        if annihilator.is_empty() {
            return Ok(basis.iter().map(|&e| e.into()).collect());
        }
        let proj = QMatrix::from_fn(annihilator.len(), gl.len(), |r, c| {
            annihilator[r][c].clone()
        });
        let blocks: Vec<QMatrix> = sub
            .iter()
            .map(|s| &proj * &self.ad_matrix(s, &basis, &gl))
            .collect();
        Ok(stack(&blocks, basis.len())
            .nullspace()
            .into_iter()
            .map(|v| LieElement::from_vector(&basis, &v))
            .collect())
    }

    /// Dimension of the derived algebra [g, g].
    pub fn derived_dimension(&self) -> usize {
        let basis = self.basis();
        let vecs: Vec<Vec<Rational>> = basis
            .iter()
            .enumerate()
            .flat_map(|(i, &x)| basis[i + 1..].iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.bracket_elems(x, y).to_vector(&basis))
            .collect();
        rank_of(&vecs)
    }

    /// Killing form on the network basis, as integers.
    pub fn killing_form(&self) -> Vec<Vec<i64>> {
        let basis = self.basis();
        let d = basis.len();
        let index: BTreeMap<BlockElem, usize> =
            basis.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        // ad[i][row][col]: coefficient of basis[row] in [basis[i], basis[col]]
        let ad: Vec<Vec<i64>> = basis
            .iter()
            .map(|&x| {
                let mut m = vec![0i64; d * d];
                for (col, &y) in basis.iter().enumerate() {
                    for (e, c) in self.bracket_elems(x, y).terms() {
                        let v: i64 = c
                            .to_integer()
                            .try_into()
                            .expect("integer structure constants");
                        m[index[e] * d + col] = v;
                    }
                }
                m
            })
            .collect();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut t = 0i64;
                        for r in 0..d {
                            for c in 0..d {
                                t += ad[i][r * d + c] * ad[j][c * d + r];
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect()
    }

    /// Dimension of the solvable radical: the Killing-orthogonal complement
    /// of [g, g].
    pub fn radical_dimension(&self) -> usize {
        let basis = self.basis();
        let d = basis.len();
        let derived: Vec<Vec<Rational>> = basis
            .iter()
            .enumerate()
            .flat_map(|(i, &x)| basis[i + 1..].iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.bracket_elems(x, y).to_vector(&basis))
            .collect();
        let k = self.killing_form();
        // rows: K(y, ·) for y spanning [g, g]
        let rows: Vec<Vec<Rational>> = derived
            .iter()
            .map(|y| {
                (0..d)
                    .map(|c| {
                        (0..d).fold(Rational::zero(), |acc, r| {
                            acc + &y[r] * Rational::from_integer(k[r][c].into())
                        })
                    })
                    .collect()
            })
            .collect();
        d - rank_of(&rows)
    }
}

fn stack(blocks: &[QMatrix], cols: usize) -> QMatrix {
    let rows: usize = blocks.iter().map(QMatrix::rows).sum();
    let mut out = QMatrix::zeros(rows, cols);
    let mut r0 = 0;
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..cols {
                out[(r0 + r, c)] = b[(r, c)].clone();
            }
        }
        r0 += b.rows();
    }
    out
}

/// True when both lists span the same subspace of gl(N).
pub fn span_equal(alg: &NetAlgebra, x: &[LieElement], y: &[LieElement]) -> bool {
    let gl = alg.gl_basis();
    let vx: Vec<Vec<Rational>> = x.iter().map(|e| e.to_vector(&gl)).collect();
    let vy: Vec<Vec<Rational>> = y.iter().map(|e| e.to_vector(&gl)).collect();
    let rx = rank_of(&vx);
    let mut both = vx;
    both.extend(vy.iter().cloned());
    rx == rank_of(&vy) && rank_of(&both) == rx
}

/// Brackets of every ordered pair of gl(N) basis elements.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub algebra: NetAlgebra,
    pub elems: Vec<BlockElem>,
    pub entries: Vec<Vec<LieElement>>,
}

pub fn structure_table(c: usize, b: usize) -> StructureTable {
    let algebra = NetAlgebra::new(c, b);
    let elems = algebra.gl_basis();
    let entries = elems
        .iter()
        .map(|&x| elems.iter().map(|&y| algebra.bracket_elems(x, y)).collect())
        .collect();
    StructureTable {
        algebra,
        elems,
        entries,
    }
}

impl StructureTable {
    pub fn get(&self, x: BlockElem, y: BlockElem) -> &LieElement {
        let i = self
            .elems
            .iter()
            .position(|&e| e == x)
            .expect("element in table");
        let j = self
            .elems
            .iter()
            .position(|&e| e == y)
            .expect("element in table");
        &self.entries[i][j]
    }

    /// First pair whose table entry differs from `commutator(x, y)`.
    pub fn first_mismatch(
        &self,
        mut commutator: impl FnMut(BlockElem, BlockElem) -> LieElement,
    ) -> Option<(BlockElem, BlockElem)> {
        for (i, &x) in self.elems.iter().enumerate() {
            for (j, &y) in self.elems.iter().enumerate() {
                if commutator(x, y) != self.entries[i][j] {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// First pair violating antisymmetry.
    pub fn antisymmetry_failure(&self) -> Option<(BlockElem, BlockElem)> {
        let n = self.elems.len();
        for i in 0..n {
            for j in 0..n {
                if !self.entries[i][j].add(&self.entries[j][i]).is_zero() {
                    return Some((self.elems[i], self.elems[j]));
                }
            }
        }
        None
    }

    /// First triple violating the Jacobi identity.
    pub fn jacobi_failure(&self) -> Option<(BlockElem, BlockElem, BlockElem)> {
        let alg = &self.algebra;
        for &x in &self.elems {
            for &y in &self.elems {
                for &z in &self.elems {
                    let (x_, y_, z_): (LieElement, LieElement, LieElement) =
                        (x.into(), y.into(), z.into());
                    let s = alg
                        .bracket(&x_, &alg.bracket_elems(y, z))
                        .add(&alg.bracket(&y_, &alg.bracket_elems(z, x)))
                        .add(&alg.bracket(&z_, &alg.bracket_elems(x, y)));
                    if !s.is_zero() {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}

/// Dimensions of the Levi decomposition and of first homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviReport {
    pub c: usize,
    pub b: usize,
    pub n: usize,
    pub dim_total: usize,
    pub dim_semisimple: usize,
    pub dim_solvable: usize,
    pub dim_a: usize,
    pub h1_dim: usize,
    pub isomorphy_class: (usize, usize),
}

pub fn levi_report(c: usize, n: usize) -> Result<LeviReport, LieError> {
    if c == 0 || c > n {
        return Err(LieError::OutOfRange { c, n });
    }
    let b = n - c;
    let dim_total = b * b + b * c + c * c;
    let (dim_semisimple, dim_solvable, h1_dim) = if c < n {
        (b * b + c * c - 2, b * c + 2, 2)
    } else {
        (n * n - 1, 1, 1)
    };
    Ok(LeviReport {
        c,
        b,
        n,
        dim_total,
        dim_semisimple,
        dim_solvable,
        dim_a: b * c,
        h1_dim,
        isomorphy_class: (c.min(b), n),
    })
}
