//! Color-preserving maps between cocolor index sets, their 0/1 matrix
//! antirepresentation ν, and the basis of the spanned matrix algebra.
//!
//! Global coordinates follow the lexicographic order (color, cocolor index):
//! `v^0_1, v^1_1, .., v^0_2, ..`.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{rank_of, QMatrix, Rational};
use crate::netspec::NetworkSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigmaError {
    #[error("color {0} is outside the layout")]
    BadColor(usize),
    #[error("image {image} at position {position} is outside 0..{bound}")]
    ImageOutOfRange {
        position: usize,
        image: usize,
        bound: usize,
    },
    #[error("expected {expected} images, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("cannot compose: codomain color {cod} differs from domain color {dom}")]
    ColorMismatch { cod: usize, dom: usize },
    #[error("color {color} has {count} cells, above the enumeration limit {limit}")]
    TooLarge {
        color: usize,
        count: usize,
        limit: usize,
    },
}

/// Cell counts per color and the global offset of each color block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorLayout {
    counts: Vec<usize>,
    offsets: Vec<usize>,
}

impl ColorLayout {
    /// Layout for cell counts `n_1..n_C`; every count must be at least one.
    pub fn new(counts: Vec<usize>) -> Self {
        assert!(!counts.is_empty(), "at least one color");
        assert!(counts.iter().all(|&n| n >= 1), "every color needs a cell");
        let mut offsets = Vec::with_capacity(counts.len());
        let mut acc = 0;
        for &n in &counts {
            offsets.push(acc);
            acc += n;
        }
        ColorLayout { counts, offsets }
    }

    pub fn of(spec: &NetworkSpec) -> Self {
        ColorLayout::new(spec.counts())
    }

    pub fn num_colors(&self) -> usize {
        self.counts.len()
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn num_cocolors(&self) -> usize {
        self.n() - self.num_colors()
    }

    /// n_c for 1-based `color`.
    pub fn count(&self, color: usize) -> usize {
        self.counts[color - 1]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Global index of v^j_c.
    pub fn global(&self, color: usize, j: usize) -> usize {
        debug_assert!(j < self.count(color));
        self.offsets[color - 1] + j
    }

    /// Inverse of [`ColorLayout::global`].
    pub fn local(&self, g: usize) -> (usize, usize) {
        let c = self
            .offsets
            .iter()
            .rposition(|&o| o <= g)
            .expect("index in range");
        (c + 1, g - self.offsets[c])
    }

    /// 1-based global cocolor index of v^j_c (j ≥ 1), counting cocolors of
    /// lower colors first.
    pub fn cocolor_index(&self, color: usize, j: usize) -> usize {
        assert!(
            j >= 1 && j < self.count(color),
            "v^{j}_{color} is not a cocolor"
        );
        self.counts[..color - 1]
            .iter()
            .map(|n| n - 1)
            .sum::<usize>()
            + j
    }

    /// Inverse of [`ColorLayout::cocolor_index`].
    pub fn cocolor_local(&self, b: usize) -> (usize, usize) {
        let mut rest = b;
        for (c, &n) in self.counts.iter().enumerate() {
            if rest < n {
                return (c + 1, rest);
            }
            rest -= n - 1;
        }
        panic!("cocolor index {b} out of range")
    }

    fn check_color(&self, c: usize) -> Result<(), SigmaError> {
        if c == 0 || c > self.num_colors() {
            return Err(SigmaError::BadColor(c));
        }
        Ok(())
    }
}

/// σ ∈ Σ_k^l: a map from R_l = {0..n_l-1} to R_k = {0..n_k-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SigmaMap {
    dom: usize,
    cod: usize,
    images: Vec<usize>,
}

impl SigmaMap {
    /// A map with domain color `l` and codomain color `k`.
    pub fn new(
        layout: &ColorLayout,
        k: usize,
        l: usize,
        images: Vec<usize>,
    ) -> Result<Self, SigmaError> {
        layout.check_color(k)?;
        layout.check_color(l)?;
        if images.len() != layout.count(l) {
            return Err(SigmaError::WrongLength {
                expected: layout.count(l),
                got: images.len(),
            });
        }
        if let Some((position, &image)) = images
            .iter()
            .enumerate()
            .find(|(_, &v)| v >= layout.count(k))
        {
            return Err(SigmaError::ImageOutOfRange {
                position,
                image,
                bound: layout.count(k),
            });
        }
        Ok(SigmaMap {
            dom: l,
            cod: k,
            images,
        })
    }

    pub fn identity(layout: &ColorLayout, c: usize) -> Self {
        SigmaMap {
            dom: c,
            cod: c,
            images: (0..layout.count(c)).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

impl fmt::Display for SigmaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        write!(f, "({})^{}_{}", imgs.join(","), self.dom, self.cod)
    }
}

/// `sbar · s` for `sbar` in Σ_l^m and `s` in Σ_k^l: i ↦ s(sbar(i)).
pub fn compose(sbar: &SigmaMap, s: &SigmaMap) -> Result<SigmaMap, SigmaError> {
    if sbar.cod != s.dom {
        return Err(SigmaError::ColorMismatch {
            cod: sbar.cod,
            dom: s.dom,
        });
    }
    Ok(SigmaMap {
        dom: sbar.dom,
        cod: s.cod,
        images: sbar.images.iter().map(|&i| s.images[i]).collect(),
    })
}

/// ν(σ): the N×N matrix with a 1 at (v^k_{σ(q)}, v^l_q) for each q.
pub fn nu(layout: &ColorLayout, s: &SigmaMap) -> QMatrix {
    let n = layout.n();
    let mut m = QMatrix::zeros(n, n);
    for (q, &img) in s.images.iter().enumerate() {
        m[(layout.global(s.cod, img), layout.global(s.dom, q))] = Rational::one();
    }
    m
}

/// All maps in Σ_k^l, in lexicographic order of the image tuple.
pub fn enumerate_maps(layout: &ColorLayout, k: usize, l: usize) -> Vec<SigmaMap> {
    let nk = layout.count(k);
    let nl = layout.count(l);
    let total = nk.pow(nl as u32);
    (0..total)
        .map(|mut code| {
            let mut images = vec![0; nl];
            for slot in images.iter_mut().rev() {
                *slot = code % nk;
                code /= nk;
            }
            SigmaMap {
                dom: l,
                cod: k,
                images,
            }
        })
        .collect()
}

/// Checks ν(σ̄·σ) = ν(σ)·ν(σ̄) on every composable pair and injectivity of ν
/// on every Σ_k^l, by exhaustive enumeration.
pub fn antirep_check(layout: &ColorLayout, max_cells: usize) -> Result<bool, SigmaError> {
    for c in 1..=layout.num_colors() {
        if layout.count(c) > max_cells {
            return Err(SigmaError::TooLarge {
                color: c,
                count: layout.count(c),
                limit: max_cells,
            });
        }
    }
    let colors = 1..=layout.num_colors();
    let maps: Vec<Vec<Vec<SigmaMap>>> = colors
        .clone()
        .map(|k| {
            colors
                .clone()
                .map(|l| enumerate_maps(layout, k, l))
                .collect()
        })
        .collect();
    let nus: Vec<Vec<Vec<QMatrix>>> = maps
        .iter()
        .map(|row| {
            row.iter()
                .map(|ms| ms.iter().map(|s| nu(layout, s)).collect())
                .collect()
        })
        .collect();
    for row in &nus {
        for block in row {
            let distinct: HashSet<&[Rational]> = block.iter().map(|m| m.entries()).collect();
            if distinct.len() != block.len() {
                return Ok(false);
            }
        }
    }
    for k in colors.clone() {
        for l in colors.clone() {
            for m in colors.clone() {
                let left = &maps[l - 1][m - 1];
                let right = &maps[k - 1][l - 1];
                for (a, sbar) in left.iter().enumerate() {
                    for (b, s) in right.iter().enumerate() {
                        let composed = compose(sbar, s)?;
                        let prod = &nus[k - 1][l - 1][b] * &nus[l - 1][m - 1][a];
                        if nu(layout, &composed) != prod {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Label μ^{k,j}_{l,i} of a basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisLabel {
    pub k: usize,
    pub j: usize,
    pub l: usize,
    pub i: usize,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu^{{{},{}}}_{{{},{}}}", self.k, self.j, self.l, self.i)
    }
}

impl BasisLabel {
    /// The map whose ν-image is this basis element.
    pub fn sigma(&self, layout: &ColorLayout) -> SigmaMap {
        let mut images = vec![0; layout.count(self.l)];
        if self.j > 0 {
            images[self.i] = self.j;
        }
        SigmaMap {
            dom: self.l,
            cod: self.k,
            images,
        }
    }
}

/// Labels of the basis 𝔅_k^l: μ^{k,0}_{l,0} first, then μ^{k,j}_{l,i} for
/// j in 1..n_k, i in 0..n_l.
pub fn basis_labels(layout: &ColorLayout, k: usize, l: usize) -> Vec<BasisLabel> {
    let mut out = vec![BasisLabel { k, j: 0, l, i: 0 }];
    for j in 1..layout.count(k) {
        for i in 0..layout.count(l) {
            out.push(BasisLabel { k, j, l, i });
        }
    }
    out
}

/// Basis matrices of 𝔅_k^l with their labels.
pub fn basis_elements(layout: &ColorLayout, k: usize, l: usize) -> Vec<(BasisLabel, QMatrix)> {
    basis_labels(layout, k, l)
        .into_iter()
        .map(|lab| (lab, nu(layout, &lab.sigma(layout))))
        .collect()
}

/// Basis elements over all color pairs (k, l).
pub fn all_basis_elements(layout: &ColorLayout) -> Vec<(BasisLabel, QMatrix)> {
    let c = layout.num_colors();
    (1..=c)
        .flat_map(|k| (1..=c).map(move |l| (k, l)))
        .flat_map(|(k, l)| basis_elements(layout, k, l))
        .collect()
}

/// Coefficients of ν(σ) over [`basis_labels`] of its color pair.
pub fn express_in_basis(layout: &ColorLayout, s: &SigmaMap) -> Vec<(BasisLabel, Rational)> {
    let labels = basis_labels(layout, s.cod, s.dom);
    let mut coeffs = vec![Rational::zero(); labels.len()];
    let mut moved = 0i64;
    for (q, &img) in s.images.iter().enumerate() {
        if img > 0 {
            moved += 1;
            let idx = labels
                .iter()
                .position(|lab| lab.j == img && lab.i == q)
                .expect("label exists");
            coeffs[idx] += Rational::one();
        }
    }
    coeffs[0] += Rational::from_integer((1 - moved).into());
    labels.into_iter().zip(coeffs).collect()
}

/// Linear combination of basis matrices.
pub fn reconstruct(layout: &ColorLayout, coeffs: &[(BasisLabel, Rational)]) -> QMatrix {
    let n = layout.n();
    let mut m = QMatrix::zeros(n, n);
    for (lab, c) in coeffs {
        if !c.is_zero() {
            m = m.add(&nu(layout, &lab.sigma(layout)).scale(c));
        }
    }
    m
}

/// Dimension of the span of all ν(σ), computed as the rank of the basis.
pub fn algebra_dimension(layout: &ColorLayout) -> usize {
    let vectors: Vec<Vec<Rational>> = all_basis_elements(layout)
        .into_iter()
        .map(|(_, m)| m.entries().to_vec())
        .collect();
    rank_of(&vectors)
}

/// C² + BC + B².
pub fn dimension_formula(num_colors: usize, n: usize) -> usize {
    let c = num_colors;
    let b = n - c;
    c * c + b * c + b * b
}

/// All compositions (ordered partitions into positive parts) of `n`.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Partitions of `n` into non-increasing positive parts.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}
