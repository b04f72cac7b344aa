use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use netlie_core::blockform::{analyze, BlockKind, NoaFinding, Orientation};
use netlie_core::exact::{poly_equal_factored, Poly, SymMatrix};
use netlie_core::frames::Frame;
use netlie_core::liealg::{levi_report, LeviReport};
use netlie_core::netspec::NetworkSpec;

/// Raw determinants are expanded up to this many cells.
pub const RAW_DET_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub source: String,
    pub cells: Vec<String>,
    pub colors: Vec<usize>,
    pub num_colors: usize,
    pub num_cocolors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameRow {
    pub cell: String,
    pub color: usize,
    pub level: usize,
    pub block: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameEcho {
    pub mode: String,
    pub orientation: String,
    pub permutation_sign: i32,
    pub rows: Vec<FrameRow>,
}

/// Block coefficients keyed by "(row,col)" in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coeffs {
    pub a: IndexMap<String, String>,
    pub b: IndexMap<String, String>,
    pub c: IndexMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub factor: String,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianEcho {
    pub canonical: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<Factor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_determinant: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub spec: SpecEcho,
    pub frame: FrameEcho,
    pub raw_matrix: Vec<Vec<String>>,
    pub block_matrix: Vec<Vec<String>>,
    pub coeffs: Coeffs,
    pub jacobian: JacobianEcho,
    pub noa: NoaFinding,
    pub levi: LeviReport,
    pub checks: Vec<Check>,
}

/// Check names whose failure means the pipeline itself is broken.
pub const INVARIANT_CHECKS: [&str; 3] = ["o-block-zero", "determinant-consistency", "noa"];

fn rows_of(m: &SymMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)].to_string()).collect())
        .collect()
}

fn coeff_map(list: Vec<(netlie_core::blockform::BlockElem, Poly)>) -> IndexMap<String, String> {
    list.into_iter()
        .map(|(e, p)| (format!("({},{})", e.row, e.col), p.to_string()))
        .collect()
}

fn check(name: &str, passed: bool, detail: Option<String>) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

pub fn build_report(
    spec: &NetworkSpec,
    frame: &Frame,
    mode: &str,
    orientation: Orientation,
    factors: &[(Poly, u32)],
) -> ReportBundle {
    let r = analyze(spec, frame, RAW_DET_LIMIT);
    let rows = frame
        .coordinate_table(spec)
        .into_iter()
        .map(|row| FrameRow {
            cell: row.cell,
            color: row.color,
            level: row.level,
            block: row.block_name,
        })
        .collect();

    let mut checks = vec![check(
        "o-block-zero",
        r.block.o_block_is_zero(),
        (!r.block.o_block_is_zero()).then(|| {
            let bad: Vec<String> = r
                .block
                .nonzero(BlockKind::O)
                .iter()
                .map(|(e, p)| format!("{e} = {p}"))
                .collect();
            bad.join(", ")
        }),
    )];
    checks.push(match &r.raw_determinant {
        Some(d) if *d == r.jacobian => check("determinant-consistency", true, None),
        Some(d) => check(
            "determinant-consistency",
            false,
            Some(format!("raw determinant {d}")),
        ),
        None => check(
            "determinant-consistency",
            true,
            Some(format!("skipped above {RAW_DET_LIMIT} cells")),
        ),
    });
    let noa_ok = !matches!(r.noa, NoaFinding::Violation { .. });
    checks.push(check("noa", noa_ok, (!noa_ok).then(|| r.noa.to_string())));
    if !factors.is_empty() {
        let (fs, es): (Vec<Poly>, Vec<u32>) = factors.iter().cloned().unzip();
        checks.push(check(
            "factorization",
            poly_equal_factored(&r.jacobian, &fs, &es),
            None,
        ));
    }

    let c = spec.num_colors();
    ReportBundle {
        spec: SpecEcho {
            source: spec.render(),
            cells: spec.names().to_vec(),
            colors: spec.colors().to_vec(),
            num_colors: c,
            num_cocolors: spec.num_cocolors(),
        },
        frame: FrameEcho {
            mode: mode.to_string(),
            orientation: orientation_name(orientation).to_string(),
            permutation_sign: r.permutation_sign,
            rows,
        },
        raw_matrix: rows_of(&r.raw),
        block_matrix: rows_of(&r.block.matrix(orientation)),
        coeffs: Coeffs {
            a: coeff_map(r.block.coeffs(BlockKind::A)),
            b: coeff_map(r.block.coeffs(BlockKind::B)),
            c: coeff_map(r.block.coeffs(BlockKind::C)),
        },
        jacobian: JacobianEcho {
            canonical: r.jacobian.to_string(),
            factors: (!factors.is_empty()).then(|| {
                factors
                    .iter()
                    .map(|(f, e)| Factor {
                        factor: f.to_string(),
                        exponent: *e,
                    })
                    .collect()
            }),
            raw_determinant: r.raw_determinant.as_ref().map(Poly::to_string),
        },
        noa: r.noa,
        levi: levi_report(c, spec.n()).expect("at least one color"),
        checks,
    }
}

pub fn orientation_name(o: Orientation) -> &'static str {
    match o {
        Orientation::Rows => "rows",
        Orientation::Basis => "basis",
    }
}

impl ReportBundle {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn invariant_violation(&self) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| !c.passed && INVARIANT_CHECKS.contains(&c.name.as_str()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "spec");
        for line in self.spec.source.lines() {
            let _ = writeln!(out, "  {line}");
        }
        let _ = writeln!(
            out,
            "\nframe ({}, {} colors, {} cocolors, permutation sign {})",
            self.frame.mode,
            self.spec.num_colors,
            self.spec.num_cocolors,
            self.frame.permutation_sign
        );
        let table: Vec<Vec<String>> = std::iter::once(vec![
            "cell".into(),
            "color".into(),
            "level".into(),
            "block".into(),
        ])
        .chain(self.frame.rows.iter().map(|r| {
            vec![
                r.cell.clone(),
                r.color.to_string(),
                r.level.to_string(),
                r.block.clone(),
            ]
        }))
        .collect();
        write_grid(&mut out, &table, "  ");

        let _ = writeln!(out, "\nraw Jacobi matrix (equation rows)");
        let cells = &self.spec.cells;
        write_labeled(&mut out, &self.raw_matrix, cells, cells);
        let names: Vec<String> = self.frame.rows.iter().map(|r| r.block.clone()).collect();
        let _ = writeln!(
            out,
            "\nblock matrix ({} orientation)",
            self.frame.orientation
        );
        write_labeled(&mut out, &self.block_matrix, &names, &names);

        let _ = writeln!(out, "\ncoefficients");
        for (kind, map) in [
            ("c", &self.coeffs.c),
            ("a", &self.coeffs.a),
            ("b", &self.coeffs.b),
        ] {
            for (pos, v) in map {
                if v != "0" {
                    let _ = writeln!(out, "  {kind}{pos} = {v}");
                }
            }
        }

        let _ = writeln!(out, "\njacobian\n  {}", self.jacobian.canonical);
        if let Some(fs) = &self.jacobian.factors {
            let parts: Vec<String> = fs
                .iter()
                .map(|f| match f.exponent {
                    1 => format!("({})", f.factor),
                    e => format!("({})^{e}", f.factor),
                })
                .collect();
            let _ = writeln!(out, "  = {}", parts.join(" * "));
        }
        if let Some(d) = &self.jacobian.raw_determinant {
            let _ = writeln!(out, "  raw determinant {d}");
        }

        let _ = writeln!(out, "\nnoa {}", self.noa);
        let l = &self.levi;
        let _ = writeln!(
            out,
            "\nlevi\n  C = {}, B = {}, N = {}\n  dim total {}, semisimple {}, solvable {}, a {}\n  h1 {}, isomorphy class ({}, {})",
            l.c, l.b, l.n, l.dim_total, l.dim_semisimple, l.dim_solvable, l.dim_a, l.h1_dim,
            l.isomorphy_class.0, l.isomorphy_class.1
        );

        let _ = writeln!(out, "\nchecks");
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            match &c.detail {
                Some(d) => {
                    let _ = writeln!(out, "  {:<24} {status} ({d})", c.name);
                }
                None => {
                    let _ = writeln!(out, "  {:<24} {status}", c.name);
                }
            }
        }
        out
    }
}

fn write_grid(out: &mut String, rows: &[Vec<String>], indent: &str) {
    let cols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:<w$}"))
            .collect();
        let _ = writeln!(out, "{indent}{}", cells.join("  ").trim_end());
    }
}

fn write_labeled(out: &mut String, m: &[Vec<String>], rows: &[String], cols: &[String]) {
    let mut grid = vec![std::iter::once(String::new())
        .chain(cols.iter().cloned())
        .collect::<Vec<_>>()];
    for (label, row) in rows.iter().zip(m) {
        grid.push(
            std::iter::once(label.clone())
                .chain(row.iter().cloned())
                .collect(),
        );
    }
    let widths: Vec<usize> = (0..grid[0].len())
        .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    for row in &grid {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:<w$}"))
            .collect();
        let _ = writeln!(out, "  {}", cells.join(" | ").trim_end());
    }
}
