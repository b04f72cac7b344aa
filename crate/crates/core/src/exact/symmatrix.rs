use std::collections::HashMap;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_traits::Zero;

use super::{ExactError, Poly, QMatrix};

/// Dense matrix of polynomials with optional row and column labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

impl SymMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SymMatrix {
            rows,
            cols,
            data: vec![Poly::zero(); rows * cols],
            row_labels: default_labels(rows),
            col_labels: default_labels(cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Poly::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut m = SymMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_rational(q: &QMatrix) -> Self {
        SymMatrix::from_fn(q.rows(), q.cols(), |r, c| Poly::constant(q[(r, c)].clone()))
    }

    pub fn with_labels(mut self, row_labels: Vec<String>, col_labels: Vec<String>) -> Self {
        assert_eq!(row_labels.len(), self.rows);
        assert_eq!(col_labels.len(), self.cols);
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn transpose(&self) -> SymMatrix {
        SymMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
            .with_labels(self.col_labels.clone(), self.row_labels.clone())
    }

    /// `out[i][j] = self[rows[i]][cols[j]]`, labels carried along.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows[r], cols[c])].clone()
        })
        .with_labels(
            rows.iter().map(|&r| self.row_labels[r].clone()).collect(),
            cols.iter().map(|&c| self.col_labels[c].clone()).collect(),
        )
    }

    /// True when every entry in `rows x cols` is zero.
    pub fn is_zero_block(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> bool {
        rows.into_iter()
            .all(|r| cols.clone().all(|c| self[(r, c)].is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    /// Determinant, splitting off block-triangular structure first and using
    /// a memoized cofactor expansion on each irreducible diagonal block.
    pub fn determinant(&self) -> Result<Poly, ExactError> {
        self.check_square()?;
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(det_blocks(self, &idx))
    }

    /// Fraction-free Gaussian elimination over the polynomial ring.
    pub fn determinant_bareiss(&self) -> Result<Poly, ExactError> {
        self.check_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one());
        }
        let mut a: Vec<Vec<Poly>> = (0..n)
            .map(|r| (0..n).map(|c| self[(r, c)].clone()).collect())
            .collect();
        let mut sign_flip = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(Poly::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign_flip { -d } else { d })
    }

    fn check_square(&self) -> Result<(), ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Plain text grid with labels, one row per line.
    pub fn render_text(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)].to_string()).collect())
            .collect();
        let label_w = self
            .row_labels
            .iter()
            .map(|l| l.chars().count())
            .max()
            .unwrap_or(0);
        let widths: Vec<usize> = (0..self.cols)
            .map(|c| {
                cells
                    .iter()
                    .map(|row| row[c].chars().count())
                    .chain(std::iter::once(self.col_labels[c].chars().count()))
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        let mut out = String::new();
        out.push_str(&" ".repeat(label_w));
        for (c, w) in widths.iter().enumerate() {
            out.push_str(" | ");
            out.push_str(&pad(&self.col_labels[c], *w));
        }
        out.push('\n');
        for (r, row) in cells.iter().enumerate() {
            out.push_str(&pad(&self.row_labels[r], label_w));
            for (c, w) in widths.iter().enumerate() {
                out.push_str(" | ");
                out.push_str(&pad(&row[c], *w));
            }
            out.push('\n');
        }
        out
    }
}

fn pad(s: &str, w: usize) -> String {
    let n = s.chars().count();
    format!("{s}{}", " ".repeat(w.saturating_sub(n)))
}

/// Determinant of the principal submatrix on `idx`.
fn det_blocks(m: &SymMatrix, idx: &[usize]) -> Poly {
    let n = idx.len();
    if n == 0 {
        return Poly::one();
    }
    for k in 1..n {
        let (head, tail) = idx.split_at(k);
        let upper_zero = head
            .iter()
            .all(|&r| tail.iter().all(|&c| m[(r, c)].is_zero()));
        let lower_zero = || {
            tail.iter()
                .all(|&r| head.iter().all(|&c| m[(r, c)].is_zero()))
        };
        if upper_zero || lower_zero() {
            let a = det_blocks(m, head);
            if a.is_zero() {
                return a;
            }
            return &a * &det_blocks(m, tail);
        }
    }
    if n <= 16 {
        det_laplace(m, idx)
    } else {
        m.select(idx, idx)
            .determinant_bareiss()
            .expect("principal submatrix is square")
    }
}

/// Cofactor expansion along rows with the minors memoized by column subset.
fn det_laplace(m: &SymMatrix, idx: &[usize]) -> Poly {
    let n = idx.len();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo: HashMap<u32, Poly> = HashMap::new();
    minor(m, idx, full, &mut memo)
}

fn minor(m: &SymMatrix, idx: &[usize], cols: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
    if cols == 0 {
        return Poly::one();
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let n = idx.len();
    let row = n - cols.count_ones() as usize;
    let mut acc = Poly::zero();
    let mut seen = 0usize;
    for j in 0..n {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = &m[(idx[row], idx[j])];
        if !entry.is_zero() {
            let sub = minor(m, idx, cols & !(1 << j), memo);
            if !sub.is_zero() {
                let term = entry * &sub;
                acc = if seen.is_multiple_of(2) {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
        }
        seen += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = Poly;
    fn index(&self, (r, c): (usize, usize)) -> &Poly {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for SymMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Poly {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r},{c}) out of bounds"
        );
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix dimensions do not agree");
        let mut out = SymMatrix::zeros(self.rows, rhs.cols)
            .with_labels(self.row_labels.clone(), rhs.col_labels.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        let cell = &mut out[(i, j)];
                        *cell = &*cell + &t;
                    }
                }
            }
        }
        out
    }
}

impl Mul<&SymMatrix> for &QMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.cols(), rhs.rows, "matrix dimensions do not agree");
        let mut out = SymMatrix::zeros(self.rows(), rhs.cols)
            .with_labels(default_labels(self.rows()), rhs.col_labels.clone());
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let cell = &mut out[(i, j)];
                        *cell = &*cell + &b.scale(a);
                    }
                }
            }
        }
        out
    }
}

impl Mul<&QMatrix> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: &QMatrix) -> SymMatrix {
        assert_eq!(self.cols, rhs.rows(), "matrix dimensions do not agree");
        let mut out = SymMatrix::zeros(self.rows, rhs.cols())
            .with_labels(self.row_labels.clone(), default_labels(rhs.cols()));
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols() {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let cell = &mut out[(i, j)];
                        *cell = &*cell + &a.scale(b);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}
