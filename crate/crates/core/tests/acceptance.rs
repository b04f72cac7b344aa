use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use netlie_core::blockform::{
    analyze, jacobi_raw, jacobian, to_blockform, BlockElem, BlockKind, NoaFinding, Orientation,
};
use netlie_core::exact::{parse_poly, poly_equal_factored, rank_of, Poly, Rational, SymMatrix};
use netlie_core::frames::{
    assign_coordinates, canonical_frame, xbasis_matrices, AssignMode, Assignment, Frame,
};
use netlie_core::liealg::{levi_report, span_equal, structure_table, LieElement, NetAlgebra};
use netlie_core::netspec::{parse_spec_with_warnings, random_spec, NetworkSpec, RandomSpecParams};
use netlie_core::sigma::{
    algebra_dimension, all_basis_elements, antirep_check, compositions, dimension_formula,
    partitions, ColorLayout,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, f64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(name: &str) -> Result<NetworkSpec, String> {
    let path = format!("{}/../../fixtures/{name}.net", env!("CARGO_MANIFEST_DIR"));
    let src = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let (spec, _) = parse_spec_with_warnings(&src).map_err(|d| format!("{name}: {d:?}"))?;
    Ok(spec)
}

fn p(s: &str) -> Poly {
    parse_poly(s).expect("golden parses")
}

fn max_frame(spec: &NetworkSpec) -> Frame {
    xbasis_matrices(spec, &assign_coordinates(spec, AssignMode::Maximize))
}

// compares entry by entry after canonicalizing both sides to text
fn check_matrix(what: &str, m: &SymMatrix, expect: &[&[&str]]) -> Outcome {
    ensure(m.rows() == expect.len(), || {
        format!("{what}: {} rows", m.rows())
    })?;
    for (r, row) in expect.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            let (got, want) = (m[(r, c)].to_string(), p(e).to_string());
            ensure(got == want, || {
                format!("{what} ({},{}): got {got}, want {want}", r + 1, c + 1)
            })?;
        }
    }
    Ok(())
}

fn check_table(spec: &NetworkSpec, f: &Frame, expect: &[(&str, &str)]) -> Outcome {
    let got: Vec<(String, String)> = f
        .coordinate_table(spec)
        .into_iter()
        .map(|r| (r.cell, r.block_name))
        .collect();
    let want: Vec<(String, String)> = expect
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    ensure(got == want, || format!("coordinate table {got:?}"))
}

fn check_coeff(f: &netlie_core::blockform::BlockMatrix, e: BlockElem, want: &str) -> Outcome {
    let (got, want) = (f.coeff(e).to_string(), p(want).to_string());
    ensure(got == want, || format!("{e}: got {got}, want {want}"))
}

fn two_cells() -> Outcome {
    let s = load("dim2col1")?;
    let f = max_frame(&s);
    let r = analyze(&s, &f, 8);
    check_table(&s, &f, &[("x2", "u1"), ("x1", "w1")])?;
    check_coeff(&r.block, BlockElem::c(1, 1), "f1_4+f1_3+f1_2+f1_1")?;
    check_coeff(&r.block, BlockElem::a(1, 1), "f1_3+f1_2")?;
    check_coeff(&r.block, BlockElem::b(1, 1), "-f1_3+f1_1")?;
    ensure(r.jacobian == p("(f1_4+f1_3+f1_2+f1_1)(-f1_3+f1_1)"), || {
        format!("jacobian {}", r.jacobian)
    })
}

fn three_cells() -> Outcome {
    let s = load("dim3col1")?;
    let f = max_frame(&s);
    let r = analyze(&s, &f, 8);
    check_table(&s, &f, &[("x1", "u1"), ("x3", "w1"), ("x2", "w2")])?;
    check_matrix(
        "block",
        &r.block.matrix(Orientation::Basis),
        &[
            &["f1_3+f1_2+f1_1", "0", "0"],
            &["0", "f1_1", "0"],
            &["0", "f1_2", "f1_1"],
        ],
    )?;
    ensure(
        poly_equal_factored(&r.jacobian, &[p("f1_1"), p("f1_3+f1_2+f1_1")], &[2, 1]),
        || format!("jacobian {}", r.jacobian),
    )?;
    ensure(r.noa == NoaFinding::AllZeroA, || format!("noa {:?}", r.noa))
}

fn two_colors_three_cells() -> Outcome {
    let s = load("bas3x2")?;
    let a = Assignment::from_names(&s, &["x1", "x2", "x3"]).map_err(|e| e.to_string())?;
    let f = xbasis_matrices(&s, &a);
    let r = analyze(&s, &f, 8);
    check_matrix(
        "block",
        &r.block.matrix(Orientation::Basis),
        &[
            &["f1_1+f1_2+f1_3+f1_4", "f2_1+f2_2", "0"],
            &["f1_5", "f2_3", "0"],
            &["f1_3+f1_4", "f2_2", "f1_1-f1_3"],
        ],
    )?;
    ensure(!r.determinant_mismatch(), || "determinant mismatch".into())
}

fn two_colors_four_cells() -> Outcome {
    let s = load("mr4183886")?;
    let r = analyze(&s, &max_frame(&s), 8);
    check_matrix(
        "block",
        &r.block.matrix(Orientation::Basis),
        &[
            &["f1_1+f1_2", "f2_3+f2_4", "0", "0"],
            &["f1_3+f1_4", "f2_1+f2_2", "0", "0"],
            &["f1_2", "f2_4", "f1_1-f1_2", "f2_3-f2_4"],
            &["f1_4", "f2_2", "f1_3-f1_4", "f2_1-f2_2"],
        ],
    )
}

fn five_cells() -> Outcome {
    let s = load("dim5col1")?;
    let f = max_frame(&s);
    let r = analyze(&s, &f, 8);
    check_table(
        &s,
        &f,
        &[
            ("x5", "u1"),
            ("x1", "w1"),
            ("x2", "w2"),
            ("x3", "w3"),
            ("x4", "w4"),
        ],
    )?;
    let sum = "f1_1+f1_2+f1_3+f1_4+f1_5";
    check_matrix(
        "block",
        &r.block.matrix(Orientation::Basis),
        &[
            &[sum, "0", "0", "0", "0"],
            &["0", "f1_1", "0", "0", "0"],
            &["0", "f1_2", "f1_1", "0", "0"],
            &["0", "f1_3", "0", "f1_1", "0"],
            &["0", "f1_4", "f1_3", "f1_2", "f1_1"],
        ],
    )?;
    ensure(
        poly_equal_factored(&r.jacobian, &[p("f1_1"), p(sum)], &[4, 1]),
        || format!("jacobian {}", r.jacobian),
    )?;
    ensure(r.noa == NoaFinding::AllZeroA, || format!("noa {:?}", r.noa))
}

fn eight_cells() -> Outcome {
    let s = load("dim8col1")?;
    let r = analyze(&s, &max_frame(&s), 8);
    let sum = "f1_1+f1_2+f1_3+f1_4+f1_5+f1_6+f1_7+f1_8";
    check_matrix(
        "block",
        &r.block.matrix(Orientation::Basis),
        &[
            &[sum, "0", "0", "0", "0", "0", "0", "0"],
            &["0", "f1_1", "0", "0", "0", "0", "0", "0"],
            &["0", "f1_2", "f1_5+f1_1", "0", "f1_2", "0", "0", "0"],
            &["0", "f1_3", "0", "f1_4+f1_1", "0", "f1_3", "0", "0"],
            &["0", "f1_4", "f1_3", "0", "f1_4+f1_1", "0", "0", "0"],
            &["0", "f1_5", "0", "f1_2", "0", "f1_5+f1_1", "0", "0"],
            &[
                "f1_6+f1_2",
                "-f1_2",
                "0",
                "-f1_2",
                "-f1_2",
                "0",
                "f1_5+f1_1",
                "-f1_2",
            ],
            &[
                "f1_7+f1_3",
                "-f1_3",
                "-f1_3",
                "0",
                "0",
                "-f1_3",
                "-f1_3",
                "f1_4+f1_1",
            ],
        ],
    )?;
    ensure(
        poly_equal_factored(
            &r.jacobian,
            &[
                p("f1_1"),
                p(sum),
                p("f1_4 f1_5 - f1_2 f1_3 + f1_1 f1_5 + f1_1 f1_4 + f1_1^2"),
            ],
            &[1, 1, 3],
        ),
        || format!("jacobian {}", r.jacobian),
    )?;
    let a: Vec<String> = r
        .block
        .nonzero(BlockKind::A)
        .into_iter()
        .map(|(_, v)| v.to_string())
        .collect();
    let want: Vec<String> = ["f1_6+f1_2", "f1_7+f1_3"]
        .iter()
        .map(|s| p(s).to_string())
        .collect();
    ensure(a == want, || format!("a entries {a:?}"))
}

fn dimension_law() -> Outcome {
    for n in 1..=6 {
        for counts in compositions(n) {
            let layout = ColorLayout::new(counts.clone());
            let (got, want) = (
                algebra_dimension(&layout),
                dimension_formula(layout.num_colors(), n),
            );
            ensure(got == want, || {
                format!("{counts:?}: dimension {got}, formula {want}")
            })?;
        }
    }
    let d = algebra_dimension(&ColorLayout::new(vec![2, 1]));
    ensure(d == 7, || format!("(2,1): dimension {d}"))
}

fn antirepresentation() -> Outcome {
    for n in 1..=6 {
        for counts in compositions(n)
            .into_iter()
            .filter(|c| c.iter().all(|&k| k <= 3))
        {
            let ok =
                antirep_check(&ColorLayout::new(counts.clone()), 6).map_err(|e| e.to_string())?;
            ensure(ok, || {
                format!("{counts:?}: antirepresentation or injectivity fails")
            })?;
        }
    }
    Ok(())
}

fn structure_constants() -> Outcome {
    for n in 1..=5 {
        for counts in partitions(n) {
            let layout = ColorLayout::new(counts.clone());
            let c = layout.num_colors();
            let frame = canonical_frame(&layout);
            let table = structure_table(c, n - c);
            let alg = &table.algebra;
            let rep = |e: BlockElem| frame.from_block_coords(&e.matrix(c, n));

            // network elements are realized by matrices in the span of the basis
            let span: Vec<Vec<Rational>> = all_basis_elements(&layout)
                .iter()
                .map(|(_, m)| m.entries().to_vec())
                .collect();
            let r0 = rank_of(&span);
            for e in alg.basis() {
                let mut with = span.clone();
                with.push(rep(e).entries().to_vec());
                ensure(rank_of(&with) == r0, || {
                    format!("{counts:?}: {e} is not a network matrix")
                })?;
            }

            let mismatch = table.first_mismatch(|x, y| {
                let m = rep(x).commutator(&rep(y));
                alg.from_matrix(&frame.to_block_coords(&m))
            });
            if let Some((x, y)) = mismatch {
                return Err(format!(
                    "{counts:?}: [{x}, {y}] table {} differs from commutator",
                    table.get(x, y)
                ));
            }
            if n <= 4 {
                if let Some((x, y)) = table.antisymmetry_failure() {
                    return Err(format!("{counts:?}: antisymmetry fails for {x}, {y}"));
                }
                if let Some((x, y, z)) = table.jacobi_failure() {
                    return Err(format!("{counts:?}: Jacobi fails for {x}, {y}, {z}"));
                }
            }
        }
    }
    Ok(())
}

fn involution() -> Outcome {
    for (c, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let alg = NetAlgebra::new(c, b);
        let dual = alg.dual();
        let th = |x: &LieElement| alg.theta(x).map_err(|e| e.to_string());
        for x in alg.basis() {
            let x: LieElement = x.into();
            let back = dual.theta(&th(&x)?).map_err(|e| e.to_string())?;
            ensure(back == x, || format!("({c},{b}): theta twice moves {x}"))?;
            for y in alg.basis() {
                let y: LieElement = y.into();
                let lhs = th(&alg.bracket(&x, &y))?;
                let rhs = dual.bracket(&th(&x)?, &th(&y)?);
                ensure(lhs == rhs, || {
                    format!("({c},{b}): theta[{x}, {y}] = {lhs}, [theta, theta] = {rhs}")
                })?;
            }
        }
    }
    Ok(())
}

fn centralizers() -> Outcome {
    for n in 1..=5 {
        for counts in partitions(n) {
            let c = counts.len();
            let b = n - c;
            let alg = NetAlgebra::new(c, b);
            let of_kind = |k: BlockKind| -> Vec<LieElement> {
                alg.basis()
                    .into_iter()
                    .filter(|e| e.kind == k)
                    .map(LieElement::from)
                    .collect()
            };
            let with = |x: LieElement, mut rest: Vec<LieElement>| {
                rest.insert(0, x);
                rest
            };
            let bc = with(alg.big_b(), of_kind(BlockKind::C));
            let cb = with(alg.big_c(), of_kind(BlockKind::B));
            ensure(span_equal(&alg, &alg.centralizer(&bc), &cb), || {
                format!("{counts:?}: centralizer of <B> + c is not <C> + b")
            })?;
            ensure(span_equal(&alg, &alg.centralizer(&cb), &bc), || {
                format!("{counts:?}: centralizer of <C> + b is not <B> + c")
            })?;
            if b > 0 {
                let all: Vec<LieElement> = alg.basis().into_iter().map(LieElement::from).collect();
                ensure(
                    span_equal(&alg, &alg.centralizer(&all), &[alg.big_i()]),
                    || format!("{counts:?}: center is not <I>"),
                )?;
            }
        }
    }
    Ok(())
}

fn levi_dimensions() -> Outcome {
    for n in 1..=8 {
        for c in 1..=n {
            let r = levi_report(c, n).map_err(|e| e.to_string())?;
            let b = n - c;
            let (ss, sol, h1) = if c < n {
                (b * b + c * c - 2, b * c + 2, 2)
            } else {
                (n * n - 1, 1, 1)
            };
            ensure(
                (r.dim_semisimple, r.dim_solvable, r.h1_dim) == (ss, sol, h1)
                    && r.dim_total == r.dim_semisimple + r.dim_solvable,
                || format!("(C,N)=({c},{n}): {r:?}"),
            )?;
            if n <= 4 {
                let alg = NetAlgebra::new(c, b);
                let h1_computed = alg.dim() - alg.derived_dimension();
                let rad = alg.radical_dimension();
                ensure(h1_computed == h1 && rad == sol, || {
                    format!("(C,N)=({c},{n}): computed h1 {h1_computed}, radical {rad}")
                })?;
            }
        }
    }
    Ok(())
}

fn random_networks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    for i in 0..200 {
        let s = random_spec(
            &mut rng,
            RandomSpecParams {
                max_cells: 8,
                max_degree: 4,
            },
        );
        let f = max_frame(&s);
        let block = to_blockform(&s, &f);
        ensure(block.o_block_is_zero(), || {
            format!("spec {i}: nonzero o block\n{}", s.render())
        })?;
        if s.n() <= 6 {
            let raw = jacobi_raw(&s).determinant().map_err(|e| e.to_string())?;
            ensure(raw == jacobian(&block), || {
                format!("spec {i}: det mismatch\n{}", s.render())
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("two-cell example", two_cells, 0.1),
        ("three-cell feedforward example", three_cells, 0.1),
        ("two-color three-cell example", two_colors_three_cells, 0.1),
        ("two-color four-cell example", two_colors_four_cells, 0.1),
        ("five-cell chain example", five_cells, 0.2),
        ("eight-cell example", eight_cells, 5.0),
        ("dimension law", dimension_law, 10.0),
        (
            "antirepresentation and injectivity",
            antirepresentation,
            10.0,
        ),
        ("structure constants", structure_constants, 30.0),
        ("involution theta", involution, 1.0),
        ("centralizer dual pair and center", centralizers, 10.0),
        ("Levi and homology dimensions", levi_dimensions, 0.1),
        ("random networks", random_networks, 60.0),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(took <= Duration::from_secs_f64(*limit), || {
                format!("exceeded {limit}s limit")
            })
        });
        match outcome {
            Ok(()) => println!(
                "criterion {:>2} PASS  {name} ({:.3}s)",
                i + 1,
                took.as_secs_f64()
            ),
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL  {name} ({:.3}s): {msg}",
                    i + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
