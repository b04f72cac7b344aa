//! Jacobi matrices of colored networks and their block form in the
//! x-frame.
//!
//! In block order (representatives `u_1..u_C`, then cocolors `w_1..w_B`)
//! an operator splits as
//!
//! ```text
//! [ c (C×C)  o (C×B) ]
//! [ a (B×C)  b (B×B) ]
//! ```
//!
//! and for network Jacobi operators the `o` block vanishes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::exact::{DerivSymbol, LinForm, Poly, QMatrix, Rational, SymMatrix};
use crate::frames::Frame;
use crate::netspec::NetworkSpec;
use crate::sigma::{BasisLabel, ColorLayout};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    C,
    A,
    B,
    O,
}

impl BlockKind {
    pub fn letter(self) -> char {
        match self {
            BlockKind::A => 'a',
            BlockKind::B => 'b',
            BlockKind::C => 'c',
            BlockKind::O => 'o',
        }
    }
}

/// A matrix unit of the block layout. `row` and `col` are 1-based indices
/// within the block: `A(b, c)` sits at cocolor row `b`, color column `c`;
/// `B(b1, b2)`, `C(c1, c2)` and `O(c, b)` likewise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockElem {
    pub kind: BlockKind,
    pub row: usize,
    pub col: usize,
}

impl BlockElem {
    pub fn a(b: usize, c: usize) -> Self {
        BlockElem {
            kind: BlockKind::A,
            row: b,
            col: c,
        }
    }

    pub fn b(b1: usize, b2: usize) -> Self {
        BlockElem {
            kind: BlockKind::B,
            row: b1,
            col: b2,
        }
    }

    pub fn c(c1: usize, c2: usize) -> Self {
        BlockElem {
            kind: BlockKind::C,
            row: c1,
            col: c2,
        }
    }

    pub fn o(c: usize, b: usize) -> Self {
        BlockElem {
            kind: BlockKind::O,
            row: c,
            col: b,
        }
    }

    /// 0-based (row, column) in the N×N block-order matrix.
    pub fn position(&self, num_colors: usize) -> (usize, usize) {
        let nc = num_colors;
        match self.kind {
            BlockKind::C => (self.row - 1, self.col - 1),
            BlockKind::A => (nc + self.row - 1, self.col - 1),
            BlockKind::B => (nc + self.row - 1, nc + self.col - 1),
            BlockKind::O => (self.row - 1, nc + self.col - 1),
        }
    }

    /// The element sitting at a 0-based matrix position.
    pub fn at(num_colors: usize, r: usize, c: usize) -> Self {
        let nc = num_colors;
        match (r < nc, c < nc) {
            (true, true) => BlockElem::c(r + 1, c + 1),
            (false, true) => BlockElem::a(r - nc + 1, c + 1),
            (false, false) => BlockElem::b(r - nc + 1, c - nc + 1),
            (true, false) => BlockElem::o(r + 1, c - nc + 1),
        }
    }

    /// Matrix unit in block order.
    pub fn matrix(&self, num_colors: usize, n: usize) -> QMatrix {
        let mut m = QMatrix::zeros(n, n);
        m[self.position(num_colors)] = Rational::one();
        m
    }

    pub fn in_range(&self, num_colors: usize, num_cocolors: usize) -> bool {
        let (rmax, cmax) = match self.kind {
            BlockKind::C => (num_colors, num_colors),
            BlockKind::A => (num_cocolors, num_colors),
            BlockKind::B => (num_cocolors, num_cocolors),
            BlockKind::O => (num_colors, num_cocolors),
        };
        (1..=rmax).contains(&self.row) && (1..=cmax).contains(&self.col)
    }
}

impl fmt::Display for BlockElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind.letter(), self.row, self.col)
    }
}

impl FromStr for BlockElem {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("cannot parse block element {s:?}");
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('a') => BlockKind::A,
            Some('b') => BlockKind::B,
            Some('c') => BlockKind::C,
            Some('o') => BlockKind::O,
            _ => return Err(bad()),
        };
        let inner = chars
            .as_str()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (r, c) = inner.split_once(',').ok_or_else(bad)?;
        let row = r.trim().parse().map_err(|_| bad())?;
        let col = c.trim().parse().map_err(|_| bad())?;
        Ok(BlockElem { kind, row, col })
    }
}

/// All network elements: the `c`, `a` and `b` matrix units, in that order,
/// each row-major.
pub fn network_elems(num_colors: usize, num_cocolors: usize) -> Vec<BlockElem> {
    let (nc, nb) = (num_colors, num_cocolors);
    let mut out = Vec::with_capacity(nc * nc + nb * nc + nb * nb);
    for c1 in 1..=nc {
        for c2 in 1..=nc {
            out.push(BlockElem::c(c1, c2));
        }
    }
    for b in 1..=nb {
        for c in 1..=nc {
            out.push(BlockElem::a(b, c));
        }
    }
    for b1 in 1..=nb {
        for b2 in 1..=nb {
            out.push(BlockElem::b(b1, b2));
        }
    }
    out
}

/// The `o` matrix units.
pub fn complement_elems(num_colors: usize, num_cocolors: usize) -> Vec<BlockElem> {
    (1..=num_colors)
        .flat_map(|c| (1..=num_cocolors).map(move |b| BlockElem::o(c, b)))
        .collect()
}

/// Which way a block matrix is printed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Rows are equations, as in a textbook Jacobi matrix.
    Rows,
    /// Entry (r, c) is the coefficient of basis vector r against covector c.
    #[default]
    Basis,
}

impl FromStr for Orientation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rows" => Ok(Orientation::Rows),
            "basis" => Ok(Orientation::Basis),
            _ => Err(format!("unknown orientation {s:?}, expected rows or basis")),
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Rows => "rows",
            Orientation::Basis => "basis",
        })
    }
}

/// A Jacobi operator in block order and x-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix {
    num_colors: usize,
    basis: SymMatrix,
}

impl BlockMatrix {
    /// Wraps a block-order matrix in basis-expansion orientation.
    pub fn new(num_colors: usize, basis: SymMatrix) -> Self {
        assert_eq!(basis.rows(), basis.cols());
        assert!(num_colors >= 1 && num_colors <= basis.rows());
        BlockMatrix { num_colors, basis }
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn num_cocolors(&self) -> usize {
        self.basis.rows() - self.num_colors
    }

    pub fn n(&self) -> usize {
        self.basis.rows()
    }

    pub fn matrix(&self, orientation: Orientation) -> SymMatrix {
        match orientation {
            Orientation::Basis => self.basis.clone(),
            Orientation::Rows => self.basis.transpose(),
        }
    }

    pub fn coeff(&self, e: BlockElem) -> &Poly {
        &self.basis[e.position(self.num_colors)]
    }

    /// Coefficients of every element of `kind`, zero ones included.
    pub fn coeffs(&self, kind: BlockKind) -> Vec<(BlockElem, Poly)> {
        let all = if kind == BlockKind::O {
            complement_elems(self.num_colors, self.num_cocolors())
        } else {
            network_elems(self.num_colors, self.num_cocolors())
        };
        all.into_iter()
            .filter(|e| e.kind == kind)
            .map(|e| (e, self.coeff(e).clone()))
            .collect()
    }

    /// Nonzero coefficients of `kind`.
    pub fn nonzero(&self, kind: BlockKind) -> Vec<(BlockElem, Poly)> {
        self.coeffs(kind)
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    /// True when every `o` coefficient vanishes.
    pub fn o_block_is_zero(&self) -> bool {
        let nc = self.num_colors;
        self.basis.is_zero_block(0..nc, nc..self.n())
    }

    /// The `c` block.
    pub fn c_block(&self) -> SymMatrix {
        let idx: Vec<usize> = (0..self.num_colors).collect();
        self.basis.select(&idx, &idx)
    }

    /// The `b` block.
    pub fn b_block(&self) -> SymMatrix {
        let idx: Vec<usize> = (self.num_colors..self.n()).collect();
        self.basis.select(&idx, &idx)
    }
}

/// Jacobi matrix in source order, one row per equation: entry (i, q) is the
/// sum of `f^{color(i)}_p` over positions p where cell i reads cell q.
pub fn jacobi_raw(spec: &NetworkSpec) -> SymMatrix {
    let n = spec.n();
    let mut m = SymMatrix::zeros(n, n);
    for i in 0..n {
        let c = spec.color(i);
        let mut rows: Vec<LinForm> = vec![LinForm::zero(); n];
        for (p, &q) in spec.args(i).iter().enumerate() {
            rows[q].add_term(DerivSymbol::new(c, p + 1), &Rational::one());
        }
        for (q, lf) in rows.into_iter().enumerate() {
            m[(i, q)] = lf.to_poly();
        }
    }
    let names = spec.names().to_vec();
    m.with_labels(names.clone(), names)
}

/// The Jacobi operator of `spec` in the x-frame, block order.
pub fn to_blockform(spec: &NetworkSpec, frame: &Frame) -> BlockMatrix {
    let op = jacobi_raw(spec).transpose();
    let v = frame.v_order();
    let in_v = op.select(&v, &v);
    let x = &(frame.pinv() * &in_v) * frame.p();
    let idx = frame.block_to_v();
    let names = frame.block_names();
    let block = x.select(&idx, &idx).with_labels(names.clone(), names);
    BlockMatrix::new(spec.num_colors(), block)
}

/// Expansion of the basis element μ^{k,j}_{l,i} over the block elements.
pub fn abc_expand_basis_element(
    layout: &ColorLayout,
    label: &BasisLabel,
) -> Vec<(BlockElem, Rational)> {
    let &BasisLabel { k, j, l, i } = label;
    let one = Rational::one();
    let mut out = vec![(BlockElem::c(k, l), one.clone())];
    if j == 0 {
        return out;
    }
    let bk = layout.cocolor_index(k, j);
    if i > 0 {
        out.push((BlockElem::b(bk, layout.cocolor_index(l, i)), one));
    } else {
        out.push((BlockElem::a(bk, l), one));
        for q in 1..layout.count(l) {
            out.push((
                BlockElem::b(bk, layout.cocolor_index(l, q)),
                -Rational::one(),
            ));
        }
    }
    out
}

/// Matrix of a combination of block elements, in block order.
pub fn assemble(layout: &ColorLayout, coeffs: &[(BlockElem, Rational)]) -> QMatrix {
    let n = layout.n();
    let mut m = QMatrix::zeros(n, n);
    for (e, c) in coeffs {
        m[e.position(layout.num_colors())] += c;
    }
    m
}

/// Jacobian determinant, as det(c block)·det(b block) when the `o` block
/// vanishes and by full expansion otherwise.
pub fn jacobian(block: &BlockMatrix) -> Poly {
    if block.o_block_is_zero() {
        let dc = block.c_block().determinant().expect("square");
        if dc.is_zero() {
            return dc;
        }
        &dc * &block.b_block().determinant().expect("square")
    } else {
        block.basis.determinant().expect("square")
    }
}

/// Outcome of the selfinteraction check on the `a` block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum NoaFinding {
    /// Representative equation is pure selfinteraction and the `a` block is zero.
    AllZeroA,
    /// `count` nonzero `a` entries, at most `bound` (distinct cocolor cells
    /// read by the representative).
    BoundedA {
        count: usize,
        bound: usize,
    },
    /// More than one color.
    NotApplicable,
    Violation {
        message: String,
    },
}

impl fmt::Display for NoaFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoaFinding::AllZeroA => write!(f, "allZeroA"),
            NoaFinding::BoundedA { count, bound } => write!(f, "boundedA({count}, {bound})"),
            NoaFinding::NotApplicable => write!(f, "notApplicable"),
            NoaFinding::Violation { message } => write!(f, "violation: {message}"),
        }
    }
}

/// Relates the representative's selfinteractions to the `a` block.
pub fn noa_check(spec: &NetworkSpec, frame: &Frame, block: &BlockMatrix) -> NoaFinding {
    if spec.num_colors() != 1 {
        return NoaFinding::NotApplicable;
    }
    let rep = frame.assignment().reps[0];
    let nonzero = block.nonzero(BlockKind::A).len();
    if spec.selfinteractions(rep) == spec.degree(1) {
        if nonzero != 0 {
            return NoaFinding::Violation {
                message: format!(
                    "{nonzero} nonzero a entries with a pure selfinteraction representative"
                ),
            };
        }
        let sum = (1..=spec.degree(1)).fold(Poly::zero(), |acc, p| &acc + &Poly::f(1, p));
        let c11 = block.coeff(BlockElem::c(1, 1));
        if *c11 != sum {
            return NoaFinding::Violation {
                message: format!("c(1,1) = {c11}, expected {sum}"),
            };
        }
        return NoaFinding::AllZeroA;
    }
    let bound = spec
        .args(rep)
        .iter()
        .filter(|&&a| a != rep)
        .collect::<BTreeSet<_>>()
        .len();
    if nonzero <= bound {
        NoaFinding::BoundedA {
            count: nonzero,
            bound,
        }
    } else {
        NoaFinding::Violation {
            message: format!("{nonzero} nonzero a entries exceed the bound {bound}"),
        }
    }
}

/// The full pipeline output for one spec and frame.
#[derive(Clone, Debug)]
pub struct JacobiReport {
    pub raw: SymMatrix,
    pub block: BlockMatrix,
    pub jacobian: Poly,
    /// Determinant of the raw matrix, when it was expanded.
    pub raw_determinant: Option<Poly>,
    pub permutation_sign: i32,
    pub noa: NoaFinding,
}

impl JacobiReport {
    /// True when the raw determinant was computed and disagrees.
    pub fn determinant_mismatch(&self) -> bool {
        self.raw_determinant
            .as_ref()
            .is_some_and(|d| *d != self.jacobian)
    }
}

/// Runs the block-form pipeline; the raw determinant is expanded for
/// networks with at most `raw_det_limit` cells.
pub fn analyze(spec: &NetworkSpec, frame: &Frame, raw_det_limit: usize) -> JacobiReport {
    let raw = jacobi_raw(spec);
    let block = to_blockform(spec, frame);
    let jac = jacobian(&block);
    let raw_determinant = (spec.n() <= raw_det_limit).then(|| raw.determinant().expect("square"));
    let noa = noa_check(spec, frame, &block);
    JacobiReport {
        raw,
        block,
        jacobian: jac,
        raw_determinant,
        permutation_sign: frame.permutation_sign(),
        noa,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;
    use crate::frames::{assign_coordinates, canonical_frame, xbasis_matrices, AssignMode};
    use crate::netspec::parse_spec;
    use crate::sigma::all_basis_elements;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn pipeline(src: &str) -> (NetworkSpec, Frame, BlockMatrix) {
        let s = parse_spec(src).unwrap();
        let f = xbasis_matrices(&s, &assign_coordinates(&s, AssignMode::Maximize));
        let b = to_blockform(&s, &f);
        (s, f, b)
    }

    #[test]
    fn raw_matrices() {
        let s = parse_spec("x1 = f1(x1,x1,x2,x2)\nx2 = f1(x2,x1,x1,x2)").unwrap();
        let r = jacobi_raw(&s);
        assert_eq!(r[(0, 0)], p("f1_1 + f1_2"));
        assert_eq!(r[(0, 1)], p("f1_3 + f1_4"));
        assert_eq!(r[(1, 0)], p("f1_2 + f1_3"));
        assert_eq!(r[(1, 1)], p("f1_1 + f1_4"));
        let single = jacobi_raw(&parse_spec("x1 = f1(x1)").unwrap());
        assert_eq!(single[(0, 0)], p("f1_1"));
    }

    #[test]
    fn two_cell_block() {
        let (_, _, b) = pipeline("x1 = f1(x1,x1,x2,x2)\nx2 = f1(x2,x1,x1,x2)");
        assert_eq!(*b.coeff(BlockElem::c(1, 1)), p("f1_1+f1_2+f1_3+f1_4"));
        assert_eq!(*b.coeff(BlockElem::a(1, 1)), p("f1_2+f1_3"));
        assert_eq!(*b.coeff(BlockElem::b(1, 1)), p("f1_1-f1_3"));
        assert!(b.o_block_is_zero());
        assert_eq!(jacobian(&b), p("(f1_1+f1_2+f1_3+f1_4)(f1_1-f1_3)"));
    }

    #[test]
    fn feedforward_block_and_noa() {
        let (s, f, b) = pipeline("x1 = f1(x1,x1,x1)\nx2 = f1(x2,x1,x1)\nx3 = f1(x3,x2,x1)");
        let m = b.matrix(Orientation::Basis);
        let expect = [
            ["f1_1+f1_2+f1_3", "0", "0"],
            ["0", "f1_1", "0"],
            ["0", "f1_2", "f1_1"],
        ];
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(m[(r, c)], p(expect[r][c]), "entry ({r},{c})");
            }
        }
        assert_eq!(jacobian(&b), p("f1_1^2 (f1_1+f1_2+f1_3)"));
        assert_eq!(noa_check(&s, &f, &b), NoaFinding::AllZeroA);
        assert_eq!(b.matrix(Orientation::Rows), m.transpose());
    }

    #[test]
    fn multi_color_is_not_applicable() {
        let (s, f, b) = pipeline("x1 = f1(x1,x2;x3)\nx2 = f1(x2,x1;x3)\nx3 = f2(x1;x3)");
        assert_eq!(noa_check(&s, &f, &b), NoaFinding::NotApplicable);
    }

    #[test]
    fn expansion_matches_conjugated_basis() {
        for counts in [vec![3], vec![2, 1], vec![1, 2], vec![2, 2], vec![1, 1, 2]] {
            let layout = ColorLayout::new(counts);
            let f = canonical_frame(&layout);
            for (label, m) in all_basis_elements(&layout) {
                let exp = abc_expand_basis_element(&layout, &label);
                assert_eq!(assemble(&layout, &exp), f.to_block_coords(&m), "{label}");
            }
        }
    }

    #[test]
    fn elem_parsing_and_positions() {
        let e: BlockElem = "a(2,1)".parse().unwrap();
        assert_eq!(e, BlockElem::a(2, 1));
        assert_eq!(e.to_string(), "a(2,1)");
        for nc in 1..3 {
            for r in 0..4 {
                for c in 0..4 {
                    let e = BlockElem::at(nc, r, c);
                    assert_eq!(e.position(nc), (r, c));
                    assert!(e.in_range(nc, 4 - nc));
                }
            }
        }
        assert!("x(1,1)".parse::<BlockElem>().is_err());
    }
}
