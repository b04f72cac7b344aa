use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netlie_core::blockform::{jacobi_raw, jacobian, to_blockform, BlockKind};
use netlie_core::exact::{rank_of, Rational};
use netlie_core::frames::{assign_coordinates, canonical_frame, xbasis_matrices, AssignMode};
use netlie_core::liealg::{levi_report, span_equal, structure_table, LieElement, NetAlgebra};
use netlie_core::netspec::{random_spec_with_counts, NetworkSpec};
use netlie_core::sigma::{
    algebra_dimension, all_basis_elements, antirep_check, dimension_formula, partitions,
    ColorLayout,
};

/// Largest color class enumerated exhaustively by the antirepresentation suite.
pub const ANTIREP_MAX_COUNT: usize = 4;
/// Largest N for which the full Jacobi triple scan runs.
pub const JACOBI_MAX_N: usize = 5;
/// Largest N for which the raw determinant is expanded.
pub const DET_MAX_N: usize = 8;
/// Random networks generated per color layout.
pub const SPECS_PER_LAYOUT: usize = 3;

pub const SUITES: [&str; 8] = [
    "antirep",
    "dimension",
    "block-zero",
    "bracket-table",
    "theta",
    "dual-pair",
    "homology",
    "determinant-consistency",
];

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub skipped: usize,
    pub counterexample: Option<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

type Case = Result<bool, String>;

struct Suite {
    name: &'static str,
    cases: usize,
    skipped: usize,
    counterexample: Option<String>,
    start: Instant,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            skipped: 0,
            counterexample: None,
            start: Instant::now(),
        }
    }

    /// Records one case: Ok(true) ran, Ok(false) skipped, Err failed.
    /// Stops recording after the first failure.
    fn run(&mut self, case: impl FnOnce() -> Case) {
        if self.counterexample.is_some() {
            return;
        }
        match case() {
            Ok(true) => self.cases += 1,
            Ok(false) => self.skipped += 1,
            Err(e) => {
                self.cases += 1;
                self.counterexample = Some(e);
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            skipped: self.skipped,
            counterexample: self.counterexample,
            elapsed: self.start.elapsed(),
        }
    }
}

fn antirep(counts: &[usize]) -> Case {
    if counts.iter().any(|&k| k > ANTIREP_MAX_COUNT) {
        return Ok(false);
    }
    match antirep_check(&ColorLayout::new(counts.to_vec()), ANTIREP_MAX_COUNT) {
        Ok(true) => Ok(true),
        Ok(false) => Err(format!(
            "{counts:?}: nu is not an injective antirepresentation"
        )),
        Err(e) => Err(format!("{counts:?}: {e}")),
    }
}

fn dimension(counts: &[usize]) -> Case {
    let layout = ColorLayout::new(counts.to_vec());
    let got = algebra_dimension(&layout);
    let want = dimension_formula(layout.num_colors(), layout.n());
    if got == want {
        Ok(true)
    } else {
        Err(format!(
            "{counts:?}: span has dimension {got}, formula gives {want}"
        ))
    }
}

fn block_zero(spec: &NetworkSpec) -> Case {
    let f = xbasis_matrices(spec, &assign_coordinates(spec, AssignMode::Maximize));
    let block = to_blockform(spec, &f);
    match block.nonzero(BlockKind::O).first() {
        None => Ok(true),
        Some((e, p)) => Err(format!("{e} = {p} for\n{}", spec.render())),
    }
}

fn determinant(spec: &NetworkSpec) -> Case {
    if spec.n() > DET_MAX_N {
        return Ok(false);
    }
    let f = xbasis_matrices(spec, &assign_coordinates(spec, AssignMode::Maximize));
    let block = to_blockform(spec, &f);
    let raw = jacobi_raw(spec).determinant().map_err(|e| e.to_string())?;
    let jac = jacobian(&block);
    if raw == jac {
        Ok(true)
    } else {
        Err(format!(
            "det(raw) = {raw}, det(block) = {jac} for\n{}",
            spec.render()
        ))
    }
}

fn bracket_table(counts: &[usize]) -> Case {
    let layout = ColorLayout::new(counts.to_vec());
    let (c, n) = (layout.num_colors(), layout.n());
    let frame = canonical_frame(&layout);
    let table = structure_table(c, n - c);
    let alg = &table.algebra;
    let rep = |e| frame.from_block_coords(&netlie_core::blockform::BlockElem::matrix(&e, c, n));

    let span: Vec<Vec<Rational>> = all_basis_elements(&layout)
        .iter()
        .map(|(_, m)| m.entries().to_vec())
        .collect();
    let r0 = rank_of(&span);
    for e in alg.basis() {
        let mut with = span.clone();
        with.push(rep(e).entries().to_vec());
        if rank_of(&with) != r0 {
            return Err(format!(
                "{counts:?}: {e} is not realized by a network matrix"
            ));
        }
    }
    if let Some((x, y)) = table
        .first_mismatch(|x, y| alg.from_matrix(&frame.to_block_coords(&rep(x).commutator(&rep(y)))))
    {
        return Err(format!(
            "{counts:?}: table gives [{x}, {y}] = {}, commutator disagrees",
            table.get(x, y)
        ));
    }
    if let Some((x, y)) = table.antisymmetry_failure() {
        return Err(format!("{counts:?}: [{x}, {y}] + [{y}, {x}] != 0"));
    }
    if n <= JACOBI_MAX_N {
        if let Some((x, y, z)) = table.jacobi_failure() {
            return Err(format!(
                "{counts:?}: Jacobi identity fails on {x}, {y}, {z}"
            ));
        }
    }
    Ok(true)
}

fn theta(c: usize, b: usize) -> Case {
    if b == 0 {
        return Ok(false);
    }
    let alg = NetAlgebra::new(c, b);
    let dual = alg.dual();
    let th = |x: &LieElement| alg.theta(x).map_err(|e| e.to_string());
    for x in alg.basis() {
        let x = LieElement::from(x);
        let tx = th(&x)?;
        if dual.theta(&tx).map_err(|e| e.to_string())? != x {
            return Err(format!(
                "(C,B)=({c},{b}): theta is not an involution on {x}"
            ));
        }
        for y in alg.basis() {
            let y = LieElement::from(y);
            let lhs = th(&alg.bracket(&x, &y))?;
            let rhs = dual.bracket(&tx, &th(&y)?);
            if lhs != rhs {
                return Err(format!(
                    "(C,B)=({c},{b}): theta[{x}, {y}] = {lhs} but [theta {x}, theta {y}] = {rhs}"
                ));
            }
        }
    }
    Ok(true)
}

fn dual_pair(c: usize, b: usize) -> Case {
    let alg = NetAlgebra::new(c, b);
    let of_kind = |k: BlockKind| -> Vec<LieElement> {
        alg.basis()
            .into_iter()
            .filter(|e| e.kind == k)
            .map(LieElement::from)
            .collect()
    };
    let mut bc = vec![alg.big_b()];
    bc.extend(of_kind(BlockKind::C));
    let mut cb = vec![alg.big_c()];
    cb.extend(of_kind(BlockKind::B));
    if !span_equal(&alg, &alg.centralizer(&bc), &cb) {
        return Err(format!(
            "(C,B)=({c},{b}): centralizer of <B> + c is not <C> + b"
        ));
    }
    if !span_equal(&alg, &alg.centralizer(&cb), &bc) {
        return Err(format!(
            "(C,B)=({c},{b}): centralizer of <C> + b is not <B> + c"
        ));
    }
    if b > 0 {
        let all: Vec<LieElement> = alg.basis().into_iter().map(LieElement::from).collect();
        if !span_equal(&alg, &alg.centralizer(&all), &[alg.big_i()]) {
            return Err(format!("(C,B)=({c},{b}): center is not spanned by I"));
        }
    }
    Ok(true)
}

fn homology(c: usize, b: usize) -> Case {
    let r = levi_report(c, c + b).map_err(|e| e.to_string())?;
    let alg = NetAlgebra::new(c, b);
    let h1 = alg.dim() - alg.derived_dimension();
    let rad = alg.radical_dimension();
    if h1 != r.h1_dim || rad != r.dim_solvable || alg.dim() != r.dim_total {
        return Err(format!(
            "(C,B)=({c},{b}): computed h1 {h1}, radical {rad}, dim {}; report {r:?}",
            alg.dim()
        ));
    }
    Ok(true)
}

fn layout_specs(counts: &[usize], seed: u64) -> Vec<NetworkSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SPECS_PER_LAYOUT)
        .map(|_| random_spec_with_counts(&mut rng, counts, 4))
        .collect()
}

/// Runs every suite on the algebra of the spec's color layout and on the
/// spec itself.
pub fn verify_spec(spec: &NetworkSpec) -> Vec<SuiteResult> {
    let counts = spec.counts().to_vec();
    let (c, b) = (spec.num_colors(), spec.num_cocolors());
    run_suites(&[counts], &[(c, b)], std::slice::from_ref(spec))
}

/// Runs every suite over all partitions of every N up to `max_n`, with
/// seeded random networks for the network-level suites.
pub fn verify_partitions(max_n: usize) -> Vec<SuiteResult> {
    let mut layouts = Vec::new();
    let mut specs = Vec::new();
    for n in 1..=max_n {
        for counts in partitions(n) {
            specs.extend(layout_specs(&counts, layouts.len() as u64));
            layouts.push(counts);
        }
    }
    let mut shapes: Vec<(usize, usize)> = layouts
        .iter()
        .map(|c| (c.len(), c.iter().sum::<usize>() - c.len()))
        .collect();
    shapes.sort_unstable();
    shapes.dedup();
    run_suites(&layouts, &shapes, &specs)
}

fn run_suites(
    layouts: &[Vec<usize>],
    shapes: &[(usize, usize)],
    specs: &[NetworkSpec],
) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    let mut s = Suite::new("antirep");
    layouts.iter().for_each(|l| s.run(|| antirep(l)));
    out.push(s.finish());
    let mut s = Suite::new("dimension");
    layouts.iter().for_each(|l| s.run(|| dimension(l)));
    out.push(s.finish());
    let mut s = Suite::new("block-zero");
    specs.iter().for_each(|sp| s.run(|| block_zero(sp)));
    out.push(s.finish());
    let mut s = Suite::new("bracket-table");
    layouts.iter().for_each(|l| s.run(|| bracket_table(l)));
    out.push(s.finish());
    let mut s = Suite::new("theta");
    shapes.iter().for_each(|&(c, b)| s.run(|| theta(c, b)));
    out.push(s.finish());
    let mut s = Suite::new("dual-pair");
    shapes.iter().for_each(|&(c, b)| s.run(|| dual_pair(c, b)));
    out.push(s.finish());
    let mut s = Suite::new("homology");
    shapes.iter().for_each(|&(c, b)| s.run(|| homology(c, b)));
    out.push(s.finish());
    let mut s = Suite::new("determinant-consistency");
    specs.iter().for_each(|sp| s.run(|| determinant(sp)));
    out.push(s.finish());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_partitions_pass() {
        let results = verify_partitions(3);
        assert_eq!(results.len(), SUITES.len());
        for (r, name) in results.iter().zip(SUITES) {
            assert_eq!(r.name, name);
            assert!(r.passed(), "{}: {:?}", r.name, r.counterexample);
        }
    }
}
