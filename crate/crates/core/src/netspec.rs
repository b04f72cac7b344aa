//! Colored network specifications and the equation DSL.
//!
//! ```text
//! # comment
//! x1 = f1(x1, x1, x2, x2; x3)
//! x2 = f1(x2, x1, x1, x2; x3)
//! x3 = f2(x1, x2; x3)
//! ```
//!
//! Each line defines one cell. The function index is the cell's color, the
//! arguments are cells. `;` and `,` are interchangeable separators.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A validated colored network. Cells are indexed `0..n` in source order;
/// colors are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    num_colors: usize,
    names: Vec<String>,
    colors: Vec<usize>,
    args: Vec<Vec<usize>>,
    signature: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("network has no cells")]
    Empty,
    #[error("cell {cell}: color {color} is outside 1..={num_colors}")]
    ColorOutOfRange {
        cell: usize,
        color: usize,
        num_colors: usize,
    },
    #[error("color {0} has no cells")]
    MissingColor(usize),
    #[error("cell {cell}: argument {position} refers to cell {target} which does not exist")]
    UnknownCell {
        cell: usize,
        position: usize,
        target: usize,
    },
    #[error("cell {cell}: argument list disagrees with the signature of color {color}")]
    SignatureMismatch { cell: usize, color: usize },
    #[error("duplicate cell name {0:?}")]
    DuplicateName(String),
    #[error("cell {0} has an empty argument list")]
    NoArguments(usize),
}

/// A maximal run of consecutive arguments sharing one color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgRun {
    pub color: usize,
    /// 1-based position of the first argument of the run.
    pub start: usize,
    pub cells: Vec<usize>,
}

impl NetworkSpec {
    /// Builds a spec from cell names, 1-based colors and 0-based argument
    /// lists, checking every structural invariant.
    pub fn new(
        names: Vec<String>,
        colors: Vec<usize>,
        args: Vec<Vec<usize>>,
    ) -> Result<NetworkSpec, SpecError> {
        let n = names.len();
        if n == 0 {
            return Err(SpecError::Empty);
        }
        assert_eq!(colors.len(), n, "one color per cell");
        assert_eq!(args.len(), n, "one argument list per cell");
        let mut seen = HashMap::new();
        for name in &names {
            if seen.insert(name.as_str(), ()).is_some() {
                return Err(SpecError::DuplicateName(name.clone()));
            }
        }
        let num_colors = colors.iter().copied().max().unwrap_or(0);
        for (cell, &color) in colors.iter().enumerate() {
            if color == 0 {
                return Err(SpecError::ColorOutOfRange {
                    cell,
                    color,
                    num_colors,
                });
            }
        }
        for c in 1..=num_colors {
            if !colors.contains(&c) {
                return Err(SpecError::MissingColor(c));
            }
        }
        let mut signature: Vec<Option<Vec<usize>>> = vec![None; num_colors];
        for (cell, list) in args.iter().enumerate() {
            if list.is_empty() {
                return Err(SpecError::NoArguments(cell));
            }
            let mut sig = Vec::with_capacity(list.len());
            for (p, &target) in list.iter().enumerate() {
                if target >= n {
                    return Err(SpecError::UnknownCell {
                        cell,
                        position: p + 1,
                        target,
                    });
                }
                sig.push(colors[target]);
            }
            let slot = &mut signature[colors[cell] - 1];
            match slot {
                None => *slot = Some(sig),
                Some(existing) if *existing == sig => {}
                Some(_) => {
                    return Err(SpecError::SignatureMismatch {
                        cell,
                        color: colors[cell],
                    })
                }
            }
        }
        Ok(NetworkSpec {
            num_colors,
            names,
            colors,
            args,
            signature: signature
                .into_iter()
                .map(|s| s.expect("every color has a cell"))
                .collect(),
        })
    }

    /// Number of cells N.
    pub fn n(&self) -> usize {
        self.names.len()
    }

    /// Number of colors C.
    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    /// Number of cocolors B = N - C.
    pub fn num_cocolors(&self) -> usize {
        self.n() - self.num_colors
    }

    pub fn name(&self, cell: usize) -> &str {
        &self.names[cell]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn color(&self, cell: usize) -> usize {
        self.colors[cell]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn args(&self, cell: usize) -> &[usize] {
        &self.args[cell]
    }

    /// Argument colors of the response function of `color`.
    pub fn signature(&self, color: usize) -> &[usize] {
        &self.signature[color - 1]
    }

    /// Degree Δ_c of color `color`.
    pub fn degree(&self, color: usize) -> usize {
        self.signature[color - 1].len()
    }

    /// n_c, the number of cells of `color`.
    pub fn count(&self, color: usize) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    pub fn counts(&self) -> Vec<usize> {
        (1..=self.num_colors).map(|c| self.count(c)).collect()
    }

    /// Cells of `color` in source order.
    pub fn cells_of_color(&self, color: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.colors[i] == color).collect()
    }

    /// Number of argument positions of `cell` occupied by the cell itself.
    pub fn selfinteractions(&self, cell: usize) -> usize {
        self.args[cell].iter().filter(|&&a| a == cell).count()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Argument list of `cell` split into maximal runs of constant color.
    pub fn u_lists(&self, cell: usize) -> Vec<ArgRun> {
        let mut runs: Vec<ArgRun> = Vec::new();
        for (p, &a) in self.args[cell].iter().enumerate() {
            let c = self.colors[a];
            match runs.last_mut() {
                Some(run) if run.color == c => run.cells.push(a),
                _ => runs.push(ArgRun {
                    color: c,
                    start: p + 1,
                    cells: vec![a],
                }),
            }
        }
        runs
    }

    /// Canonical DSL text; `;` separates color runs.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for cell in 0..self.n() {
            let groups: Vec<String> = self
                .u_lists(cell)
                .iter()
                .map(|run| {
                    run.cells
                        .iter()
                        .map(|&a| self.names[a].as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .collect();
            out.push_str(&format!(
                "{} = f{}({})\n",
                self.names[cell],
                self.colors[cell],
                groups.join("; ")
            ));
        }
        out
    }
}

impl fmt::Display for NetworkSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagnosticKind {
    Syntax,
    UnknownCell,
    SignatureMismatch,
    DuplicateEquation,
    MissingEquation,
    SeparatorInsideRun,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub kind: DiagnosticKind,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        if self.line == 0 {
            write!(f, "{sev}: {}", self.message)
        } else {
            write!(f, "line {}: {sev}: {}", self.line, self.message)
        }
    }
}

fn error(line: usize, kind: DiagnosticKind, message: String) -> ParseDiagnostic {
    ParseDiagnostic {
        line,
        kind,
        severity: Severity::Error,
        message,
    }
}

struct RawEquation {
    line: usize,
    lhs: String,
    color: usize,
    args: Vec<String>,
    /// `after_semicolon[p]` is true when argument `p` was preceded by `;`.
    after_semicolon: Vec<bool>,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn parse_ident(s: &str) -> Option<(&str, &str)> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, c)) if is_ident_start(c) => {}
        _ => return None,
    }
    let end = chars
        .find(|&(_, c)| !is_ident_char(c))
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    Some((&s[..end], &s[end..]))
}

fn parse_line(line_no: usize, text: &str) -> Result<RawEquation, ParseDiagnostic> {
    let syntax = |msg: &str| error(line_no, DiagnosticKind::Syntax, msg.to_string());
    let (lhs, rest) = parse_ident(text).ok_or_else(|| syntax("expected a cell name"))?;
    let rest = rest.trim_start();
    let rest = rest
        .strip_prefix('=')
        .ok_or_else(|| syntax("expected '=' after the cell name"))?
        .trim_start();
    let rest = rest
        .strip_prefix('f')
        .ok_or_else(|| syntax("expected a function name f<color>"))?;
    let digits_end = rest
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(rest.len());
    let color: usize = rest[..digits_end]
        .parse()
        .map_err(|_| syntax("expected a function name f<color>"))?;
    if color == 0 {
        return Err(syntax("function indices start at f1"));
    }
    let rest = rest[digits_end..].trim_start();
    let rest = rest
        .strip_prefix('(')
        .ok_or_else(|| syntax("expected '(' after the function name"))?;
    let close = rest.find(')').ok_or_else(|| syntax("missing ')'"))?;
    if !rest[close + 1..].trim().is_empty() {
        return Err(syntax("unexpected text after ')'"));
    }
    let mut args = Vec::new();
    let mut after_semicolon = Vec::new();
    let mut inner = &rest[..close];
    let mut semi = false;
    loop {
        let (name, tail) = parse_ident(inner).ok_or_else(|| syntax("expected an argument name"))?;
        args.push(name.to_string());
        after_semicolon.push(semi);
        let tail = tail.trim_start();
        if tail.is_empty() {
            break;
        }
        semi = tail.starts_with(';');
        if !(semi || tail.starts_with(',')) {
            return Err(syntax("expected ',' or ';' between arguments"));
        }
        inner = &tail[1..];
    }
    Ok(RawEquation {
        line: line_no,
        lhs: lhs.to_string(),
        color,
        args,
        after_semicolon,
    })
}

/// Parses the DSL, returning the spec or every error found.
pub fn parse_spec(source: &str) -> Result<NetworkSpec, Vec<ParseDiagnostic>> {
    parse_spec_with_warnings(source).map(|(spec, _)| spec)
}

/// Like [`parse_spec`] but also returns warnings on success.
pub fn parse_spec_with_warnings(
    source: &str,
) -> Result<(NetworkSpec, Vec<ParseDiagnostic>), Vec<ParseDiagnostic>> {
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);
    let mut diags = Vec::new();
    let mut eqs = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let text = raw.trim_end_matches('\r');
        let text = text.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        match parse_line(i + 1, text) {
            Ok(eq) => eqs.push(eq),
            Err(d) => diags.push(d),
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    if eqs.is_empty() {
        return Err(vec![error(
            0,
            DiagnosticKind::Syntax,
            "no equations found".into(),
        )]);
    }

    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut cells: Vec<&RawEquation> = Vec::new();
    for eq in &eqs {
        if let Some(&first) = index.get(eq.lhs.as_str()) {
            diags.push(error(
                eq.line,
                DiagnosticKind::DuplicateEquation,
                format!(
                    "second equation for {} (first on line {})",
                    eq.lhs, cells[first].line
                ),
            ));
        } else {
            index.insert(eq.lhs.as_str(), cells.len());
            cells.push(eq);
        }
    }

    let num_colors = cells.iter().map(|e| e.color).max().unwrap_or(0);
    for c in 1..=num_colors {
        if !cells.iter().any(|e| e.color == c) {
            diags.push(error(
                0,
                DiagnosticKind::MissingEquation,
                format!(
                    "no equation uses f{c}; colors must be numbered f1..f{num_colors} without gaps"
                ),
            ));
        }
    }

    let mut args = Vec::with_capacity(cells.len());
    for eq in &cells {
        let mut list = Vec::with_capacity(eq.args.len());
        for a in &eq.args {
            match index.get(a.as_str()) {
                Some(&t) => list.push(t),
                None => diags.push(error(
                    eq.line,
                    DiagnosticKind::UnknownCell,
                    format!("argument {a} of {} has no equation", eq.lhs),
                )),
            }
        }
        args.push(list);
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let colors: Vec<usize> = cells.iter().map(|e| e.color).collect();
    let mut reference: Vec<Option<(usize, Vec<usize>)>> = vec![None; num_colors];
    let mut warnings = Vec::new();
    for (cell, eq) in cells.iter().enumerate() {
        let sig: Vec<usize> = args[cell].iter().map(|&a| colors[a]).collect();
        match &reference[eq.color - 1] {
            None => reference[eq.color - 1] = Some((eq.line, sig.clone())),
            Some((line, expected)) => {
                if expected.len() != sig.len() {
                    diags.push(error(
                        eq.line,
                        DiagnosticKind::SignatureMismatch,
                        format!(
                            "f{} takes {} arguments on line {line} but {} here",
                            eq.color,
                            expected.len(),
                            sig.len()
                        ),
                    ));
                } else if let Some(p) = (0..sig.len()).find(|&p| sig[p] != expected[p]) {
                    diags.push(error(
                        eq.line,
                        DiagnosticKind::SignatureMismatch,
                        format!(
                            "argument {} of f{} has color {} here but color {} on line {line}",
                            p + 1,
                            eq.color,
                            sig[p],
                            expected[p]
                        ),
                    ));
                }
            }
        }
        for p in 1..sig.len() {
            if eq.after_semicolon[p] && sig[p] == sig[p - 1] {
                warnings.push(ParseDiagnostic {
                    line: eq.line,
                    kind: DiagnosticKind::SeparatorInsideRun,
                    severity: Severity::Warning,
                    message: format!(
                        "';' before argument {} of {} separates two arguments of color {}",
                        p + 1,
                        eq.lhs,
                        sig[p]
                    ),
                });
            }
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let names = cells.iter().map(|e| e.lhs.clone()).collect();
    let spec = NetworkSpec::new(names, colors, args)
        .map_err(|e| vec![error(0, DiagnosticKind::Syntax, e.to_string())])?;
    Ok((spec, warnings))
}

/// Parameters for [`random_spec`].
#[derive(Clone, Copy, Debug)]
pub struct RandomSpecParams {
    pub max_cells: usize,
    pub max_degree: usize,
}

impl Default for RandomSpecParams {
    fn default() -> Self {
        RandomSpecParams {
            max_cells: 8,
            max_degree: 4,
        }
    }
}

/// A random valid network with 1..=max_cells cells, cells named x1..xN and
/// colors interleaved in random source order.
pub fn random_spec<R: Rng + ?Sized>(rng: &mut R, params: RandomSpecParams) -> NetworkSpec {
    let n = rng.gen_range(1..=params.max_cells.max(1));
    let c = rng.gen_range(1..=n);
    let mut counts = vec![1; c];
    for _ in c..n {
        counts[rng.gen_range(0..c)] += 1;
    }
    random_spec_with_counts(rng, &counts, params.max_degree)
}

/// A random valid network with `counts[c-1]` cells of color c.
pub fn random_spec_with_counts<R: Rng + ?Sized>(
    rng: &mut R,
    counts: &[usize],
    max_degree: usize,
) -> NetworkSpec {
    assert!(counts.iter().all(|&k| k > 0), "every color needs a cell");
    let c = counts.len();
    let mut colors: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(k, &m)| std::iter::repeat_n(k + 1, m))
        .collect();
    colors.shuffle(rng);
    let n = colors.len();
    let by_color: Vec<Vec<usize>> = (1..=c)
        .map(|k| (0..n).filter(|&i| colors[i] == k).collect())
        .collect();
    let signature: Vec<Vec<usize>> = (0..c)
        .map(|_| {
            let d = rng.gen_range(1..=max_degree.max(1));
            (0..d).map(|_| rng.gen_range(1..=c)).collect()
        })
        .collect();
    let args = (0..n)
        .map(|i| {
            signature[colors[i] - 1]
                .iter()
                .map(|&k| *by_color[k - 1].choose(rng).expect("nonempty color"))
                .collect()
        })
        .collect();
    let names = (1..=n).map(|i| format!("x{i}")).collect();
    NetworkSpec::new(names, colors, args).expect("generated spec is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    const BAS3X2: &str = "x1 = f1(x1,x1,x2,x2;x3)\nx2 = f1(x2,x1,x1,x2;x3)\nx3 = f2(x1,x2;x3)\n";

    fn kinds(src: &str) -> Vec<DiagnosticKind> {
        parse_spec(src)
            .unwrap_err()
            .into_iter()
            .map(|d| d.kind)
            .collect()
    }

    #[test]
    fn feedforward_three_cells() {
        let s = parse_spec("x1 = f1(x1,x1,x1)\nx2 = f1(x2,x1,x1)\nx3 = f1(x3,x2,x1)").unwrap();
        assert_eq!(
            (s.n(), s.num_colors(), s.degree(1), s.count(1)),
            (3, 1, 3, 3)
        );
    }

    #[test]
    fn two_colors() {
        let s = parse_spec(BAS3X2).unwrap();
        assert_eq!(s.num_colors(), 2);
        assert_eq!(s.signature(1), &[1, 1, 1, 1, 2]);
        assert_eq!(s.signature(2), &[1, 1, 2]);
        let s =
            parse_spec("x1 = f1(x1,x1,x2,x2)\nx2 = f1(x2,x1,x1,x2)\nx3 = f2(x1,x2;x3)").unwrap();
        assert_eq!((s.degree(1), s.degree(2)), (4, 3));
        assert_eq!(
            s.u_lists(0),
            vec![ArgRun {
                color: 1,
                start: 1,
                cells: vec![0, 0, 1, 1]
            }]
        );
        assert_eq!(
            s.u_lists(2),
            vec![
                ArgRun {
                    color: 1,
                    start: 1,
                    cells: vec![0, 1]
                },
                ArgRun {
                    color: 2,
                    start: 3,
                    cells: vec![2]
                }
            ]
        );
    }

    #[test]
    fn single_argument_run() {
        let s = parse_spec("a = f1(a)").unwrap();
        assert_eq!(s.u_lists(0).len(), 1);
        assert_eq!(s.selfinteractions(0), 1);
    }

    #[test]
    fn comments_crlf_and_semicolons() {
        let src = "# header\r\nx1 = f1(x1; x2)  # trailing\r\n\r\nx2 = f1(x2, x1)\r\n";
        let (s, warnings) = parse_spec_with_warnings(src).unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].kind, DiagnosticKind::SeparatorInsideRun);
        assert_eq!(warnings[0].line, 2);
    }

    #[test]
    fn errors() {
        assert_eq!(kinds(""), vec![DiagnosticKind::Syntax]);
        assert_eq!(kinds("x1 = f1(x1, y)"), vec![DiagnosticKind::UnknownCell]);
        assert_eq!(
            kinds("x1 = f1(x1)\nx1 = f1(x1)"),
            vec![DiagnosticKind::DuplicateEquation]
        );
        assert_eq!(kinds("x1 = f2(x1)"), vec![DiagnosticKind::MissingEquation]);
        assert_eq!(
            kinds("x1 = f1(x1, x2)\nx2 = f1(x2)"),
            vec![DiagnosticKind::SignatureMismatch]
        );
        // one argument swapped to the wrong color
        let bad = BAS3X2.replace("x2 = f1(x2,x1,x1,x2;x3)", "x2 = f1(x2,x1,x1,x2;x1)");
        assert_eq!(kinds(&bad), vec![DiagnosticKind::SignatureMismatch]);
        assert_eq!(kinds("x1 = g(x1)"), vec![DiagnosticKind::Syntax]);
        assert_eq!(kinds("x1 = f1()"), vec![DiagnosticKind::Syntax]);
        assert_eq!(kinds("x1 = f1(x1) extra"), vec![DiagnosticKind::Syntax]);
    }

    #[test]
    fn render_round_trip() {
        let s = parse_spec(BAS3X2).unwrap();
        assert_eq!(
            s.render(),
            "x1 = f1(x1, x1, x2, x2; x3)\nx2 = f1(x2, x1, x1, x2; x3)\nx3 = f2(x1, x2; x3)\n"
        );
        assert_eq!(parse_spec(&s.render()).unwrap(), s);
    }
}
