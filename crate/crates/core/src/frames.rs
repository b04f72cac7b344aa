//! Coordinate assignment (representative cell per color, ordered cocolors)
//! and the shear change of basis to x-coordinates.
//!
//! Three orders of the cells appear:
//! - source order, as in the spec;
//! - the v-order: colors ascending, within a color `v^0_c` (the
//!   representative) then the cocolors `v^1_c, v^2_c, ..`;
//! - the block order: all representatives `u_1..u_C` first, then all
//!   cocolors `w_1..w_B`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{QMatrix, Rational};
use crate::netspec::NetworkSpec;
use crate::sigma::ColorLayout;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignMode {
    Minimize,
    #[default]
    Maximize,
}

impl FromStr for AssignMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "minimize" | "min" => Ok(AssignMode::Minimize),
            "maximize" | "max" => Ok(AssignMode::Maximize),
            _ => Err(format!("unknown mode {s:?}, expected minimize or maximize")),
        }
    }
}

impl fmt::Display for AssignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssignMode::Minimize => "minimize",
            AssignMode::Maximize => "maximize",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("expected {expected} cells in the assignment, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("cell {0} appears twice in the assignment")]
    Repeated(String),
    #[error("unknown cell {0:?}")]
    UnknownCell(String),
    #[error("position {position} of the assignment needs a cell of color {expected}, got {cell} of color {got}")]
    WrongColor {
        position: usize,
        cell: String,
        expected: usize,
        got: usize,
    },
}

/// Per color, the representative cell and the ordered cocolor cells
/// (source indices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub reps: Vec<usize>,
    pub cocolors: Vec<Vec<usize>>,
}

impl Assignment {
    /// Builds an assignment from cells listed in v-order: color 1's
    /// representative and cocolors, then color 2's, and so on.
    pub fn from_order(spec: &NetworkSpec, order: &[usize]) -> Result<Assignment, FrameError> {
        if order.len() != spec.n() {
            return Err(FrameError::WrongLength {
                expected: spec.n(),
                got: order.len(),
            });
        }
        let mut seen = vec![false; spec.n()];
        let layout = ColorLayout::of(spec);
        let mut reps = Vec::new();
        let mut cocolors = Vec::new();
        for (g, &cell) in order.iter().enumerate() {
            if cell >= spec.n() {
                return Err(FrameError::UnknownCell(cell.to_string()));
            }
            if std::mem::replace(&mut seen[cell], true) {
                return Err(FrameError::Repeated(spec.name(cell).to_string()));
            }
            let (color, j) = layout.local(g);
            if spec.color(cell) != color {
                return Err(FrameError::WrongColor {
                    position: g + 1,
                    cell: spec.name(cell).to_string(),
                    expected: color,
                    got: spec.color(cell),
                });
            }
            if j == 0 {
                reps.push(cell);
                cocolors.push(Vec::new());
            } else {
                cocolors
                    .last_mut()
                    .expect("representative first")
                    .push(cell);
            }
        }
        Ok(Assignment { reps, cocolors })
    }

    /// Like [`Assignment::from_order`] with cells given by name.
    pub fn from_names(spec: &NetworkSpec, names: &[&str]) -> Result<Assignment, FrameError> {
        let order = names
            .iter()
            .map(|n| {
                spec.index_of(n)
                    .ok_or_else(|| FrameError::UnknownCell(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Assignment::from_order(spec, &order)
    }

    /// Cells in v-order.
    pub fn v_order(&self) -> Vec<usize> {
        self.reps
            .iter()
            .zip(&self.cocolors)
            .flat_map(|(&r, cs)| std::iter::once(r).chain(cs.iter().copied()))
            .collect()
    }

    /// Cells in block order.
    pub fn block_order(&self) -> Vec<usize> {
        self.reps
            .iter()
            .copied()
            .chain(self.cocolors.iter().flatten().copied())
            .collect()
    }
}

/// Number of argument positions where `cell` and `reference` differ.
pub fn mismatch_count(spec: &NetworkSpec, cell: usize, reference: usize) -> usize {
    spec.args(cell)
        .iter()
        .zip(spec.args(reference))
        .filter(|(a, b)| a != b)
        .count()
}

/// Picks per color the cell with the most selfinteractions as
/// representative (ties: highest source index), then orders the remaining
/// cells by their mismatch count against the representative, largest or
/// smallest first per `mode` (ties: lowest source index).
pub fn assign_coordinates(spec: &NetworkSpec, mode: AssignMode) -> Assignment {
    let mut reps = Vec::new();
    let mut cocolors = Vec::new();
    for c in 1..=spec.num_colors() {
        let cells = spec.cells_of_color(c);
        let rep = *cells
            .iter()
            .max_by_key(|&&i| (spec.selfinteractions(i), i))
            .expect("color has cells");
        let mut rest: Vec<(usize, usize)> = cells
            .iter()
            .filter(|&&i| i != rep)
            .map(|&i| (mismatch_count(spec, i, rep), i))
            .collect();
        match mode {
            AssignMode::Maximize => rest.sort_by_key(|&(w, i)| (std::cmp::Reverse(w), i)),
            AssignMode::Minimize => rest.sort_by_key(|&(w, i)| (w, i)),
        }
        reps.push(rep);
        cocolors.push(rest.into_iter().map(|(_, i)| i).collect());
    }
    Assignment { reps, cocolors }
}

/// A complete frame: the assignment plus the change of basis.
///
/// `p` has the x-basis vectors as columns, written in v-coordinates
/// (rows and columns in v-order): `x^0_k = v^0_k`, `x^j_k = v^j_k - v^0_k`.
/// `pinv` has the dual covectors as rows: `X^0_k = V^0_k + Σ_q V^q_k`,
/// `X^j_k = V^j_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub(crate) layout: ColorLayout,
    pub(crate) assignment: Assignment,
    pub(crate) p: QMatrix,
    pub(crate) pinv: QMatrix,
}

/// Builds the shear matrices for `assignment`.
pub fn xbasis_matrices(spec: &NetworkSpec, assignment: &Assignment) -> Frame {
    let layout = ColorLayout::of(spec);
    let n = layout.n();
    let mut p = QMatrix::zeros(n, n);
    let mut pinv = QMatrix::zeros(n, n);
    for k in 1..=layout.num_colors() {
        let base = layout.global(k, 0);
        for j in 0..layout.count(k) {
            let g = layout.global(k, j);
            p[(g, g)] = Rational::one();
            pinv[(base, g)] = Rational::one();
            if j > 0 {
                p[(base, g)] = -Rational::one();
                pinv[(g, g)] = Rational::one();
            }
        }
    }
    Frame {
        layout,
        assignment: assignment.clone(),
        p,
        pinv,
    }
}

/// Frame for abstract coordinates of `layout`, where cell `g` is the g-th
/// coordinate in v-order.
pub fn canonical_frame(layout: &ColorLayout) -> Frame {
    let mut colors = Vec::with_capacity(layout.n());
    for c in 1..=layout.num_colors() {
        colors.extend(std::iter::repeat_n(c, layout.count(c)));
    }
    let n = colors.len();
    let names = (1..=n).map(|i| format!("v{i}")).collect();
    let args = (0..n).map(|i| vec![i]).collect();
    let spec = NetworkSpec::new(names, colors, args).expect("layout spec is valid");
    let order: Vec<usize> = (0..n).collect();
    let assignment = Assignment::from_order(&spec, &order).expect("v-order is consistent");
    xbasis_matrices(&spec, &assignment)
}

/// True iff the covector rows are dual to the basis columns.
pub fn duality_check(frame: &Frame) -> bool {
    &frame.pinv * &frame.p == QMatrix::identity(frame.layout.n())
}

/// Sign of a permutation given as a list of images.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// One line of the coordinate table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordRow {
    pub cell: String,
    pub color: usize,
    /// Index j of `v^j_color`.
    pub level: usize,
    /// `u<c>` for representatives, `w<b>` for cocolors.
    pub block_name: String,
}

impl Frame {
    pub fn layout(&self) -> &ColorLayout {
        &self.layout
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn p(&self) -> &QMatrix {
        &self.p
    }

    pub fn pinv(&self) -> &QMatrix {
        &self.pinv
    }

    /// Cells in v-order.
    pub fn v_order(&self) -> Vec<usize> {
        self.assignment.v_order()
    }

    /// Cells in block order.
    pub fn block_order(&self) -> Vec<usize> {
        self.assignment.block_order()
    }

    /// For each block position, the corresponding v-order index.
    pub fn block_to_v(&self) -> Vec<usize> {
        let l = &self.layout;
        let c = l.num_colors();
        (0..l.n())
            .map(|pos| {
                if pos < c {
                    l.global(pos + 1, 0)
                } else {
                    let (k, j) = l.cocolor_local(pos - c + 1);
                    l.global(k, j)
                }
            })
            .collect()
    }

    /// Sign of the permutation from source order to block order.
    pub fn permutation_sign(&self) -> i32 {
        permutation_sign(&self.block_order())
    }

    /// Block-position names: `u1..uC` then `w1..wB`.
    pub fn block_names(&self) -> Vec<String> {
        let c = self.layout.num_colors();
        (0..self.layout.n())
            .map(|pos| {
                if pos < c {
                    format!("u{}", pos + 1)
                } else {
                    format!("w{}", pos - c + 1)
                }
            })
            .collect()
    }

    /// Table "cell → v^j_c → u/w name" in block order.
    pub fn coordinate_table(&self, spec: &NetworkSpec) -> Vec<CoordRow> {
        let v_order = self.v_order();
        let names = self.block_names();
        self.block_to_v()
            .into_iter()
            .zip(names)
            .map(|(g, block_name)| {
                let (color, level) = self.layout.local(g);
                CoordRow {
                    cell: spec.name(v_order[g]).to_string(),
                    color,
                    level,
                    block_name,
                }
            })
            .collect()
    }

    /// Conjugates an operator given in v-coordinates into x-coordinates and
    /// reorders it to block order.
    pub fn to_block_coords(&self, m_v: &QMatrix) -> QMatrix {
        let x = &(&self.pinv * m_v) * &self.p;
        let idx = self.block_to_v();
        x.select(&idx, &idx)
    }

    /// Inverse of [`Frame::to_block_coords`].
    pub fn from_block_coords(&self, m_block: &QMatrix) -> QMatrix {
        let idx = self.block_to_v();
        let n = idx.len();
        let mut x = QMatrix::zeros(n, n);
        for (a, &ga) in idx.iter().enumerate() {
            for (b, &gb) in idx.iter().enumerate() {
                x[(ga, gb)] = m_block[(a, b)].clone();
            }
        }
        &(&self.p * &x) * &self.pinv
    }

    /// True when `p` is block diagonal over the color blocks.
    pub fn is_color_preserving(&self) -> bool {
        let n = self.layout.n();
        (0..n).all(|r| {
            (0..n).all(|c| {
                self.p[(r, c)].is_zero() || self.layout.local(r).0 == self.layout.local(c).0
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netspec::parse_spec;

    fn names(spec: &NetworkSpec, a: &Assignment) -> Vec<String> {
        a.block_order()
            .into_iter()
            .map(|i| spec.name(i).to_string())
            .collect()
    }

    const FF3: &str = "x1 = f1(x1,x1,x1)\nx2 = f1(x2,x1,x1)\nx3 = f1(x3,x2,x1)";

    #[test]
    fn feedforward_both_modes() {
        let s = parse_spec(FF3).unwrap();
        assert_eq!(
            names(&s, &assign_coordinates(&s, AssignMode::Minimize)),
            ["x1", "x2", "x3"]
        );
        assert_eq!(
            names(&s, &assign_coordinates(&s, AssignMode::Maximize)),
            ["x1", "x3", "x2"]
        );
    }

    #[test]
    fn representative_tie_takes_highest_index() {
        let s = parse_spec("x1 = f1(x1,x1,x2,x2)\nx2 = f1(x2,x1,x1,x2)").unwrap();
        assert_eq!(
            names(&s, &assign_coordinates(&s, AssignMode::Maximize)),
            ["x2", "x1"]
        );
    }

    #[test]
    fn five_cell_chain() {
        let s = parse_spec(
            "x1 = f1(x1,x2,x3,x4,x5)\nx2 = f1(x2,x5,x4,x5,x5)\nx3 = f1(x3,x4,x5,x5,x5)\n\
             x4 = f1(x4,x5,x5,x5,x5)\nx5 = f1(x5,x5,x5,x5,x5)",
        )
        .unwrap();
        assert_eq!(
            names(&s, &assign_coordinates(&s, AssignMode::Maximize)),
            ["x5", "x1", "x2", "x3", "x4"]
        );
    }

    #[test]
    fn two_dimensional_shear() {
        let s = parse_spec("x1 = f1(x1,x2)\nx2 = f1(x2,x1)").unwrap();
        let a = assign_coordinates(&s, AssignMode::Maximize);
        let f = xbasis_matrices(&s, &a);
        assert_eq!(f.p().column(1), vec![-Rational::one(), Rational::one()]);
        assert_eq!(f.pinv().row(0), &[Rational::one(), Rational::one()]);
        assert!(duality_check(&f));
    }

    #[test]
    fn three_cell_covector() {
        let s = parse_spec(FF3).unwrap();
        let f = xbasis_matrices(&s, &assign_coordinates(&s, AssignMode::Maximize));
        assert_eq!(
            f.pinv().row(0),
            &[Rational::one(), Rational::one(), Rational::one()]
        );
        assert!(f.is_color_preserving());
    }

    #[test]
    fn all_colors_distinct_gives_identity() {
        let s = parse_spec("a = f1(a,b)\nb = f2(a,b)").unwrap();
        let f = xbasis_matrices(&s, &assign_coordinates(&s, AssignMode::Maximize));
        assert_eq!(f.p(), &QMatrix::identity(2));
        assert!(duality_check(&f));
    }

    #[test]
    fn tampered_frame_fails_duality() {
        let s = parse_spec(FF3).unwrap();
        let mut f = xbasis_matrices(&s, &assign_coordinates(&s, AssignMode::Maximize));
        f.p[(0, 0)] = Rational::from_integer(2.into());
        assert!(!duality_check(&f));
    }

    #[test]
    fn explicit_order_validation() {
        let s = parse_spec("x1 = f1(x1,x1,x2,x2;x3)\nx2 = f1(x2,x1,x1,x2;x3)\nx3 = f2(x1,x2;x3)")
            .unwrap();
        let a = Assignment::from_names(&s, &["x1", "x2", "x3"]).unwrap();
        assert_eq!(a.reps, vec![0, 2]);
        assert!(matches!(
            Assignment::from_names(&s, &["x1", "x3", "x2"]),
            Err(FrameError::WrongColor { .. })
        ));
        assert!(Assignment::from_names(&s, &["x1", "x1", "x3"]).is_err());
        assert!(Assignment::from_names(&s, &["x1", "x2"]).is_err());
    }

    #[test]
    fn block_coordinate_round_trip() {
        let s = parse_spec("a = f1(a,b;c)\nb = f1(b,a;d)\nc = f2(c,d;a)\nd = f2(d,c;b)").unwrap();
        let f = xbasis_matrices(&s, &assign_coordinates(&s, AssignMode::Maximize));
        let m = QMatrix::from_fn(4, 4, |r, c| {
            Rational::from_integer(((r * 7 + c * 3) % 5).into())
        });
        assert_eq!(f.from_block_coords(&f.to_block_coords(&m)), m);
        assert_eq!(f.block_names(), ["u1", "u2", "w1", "w2"]);
    }

    #[test]
    fn signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }
}
