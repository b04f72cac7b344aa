use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use netlie::dot::render_dot;
use netlie::report::build_report;
use netlie::verify::{verify_partitions, verify_spec, SuiteResult};
use netlie_core::blockform::Orientation;
use netlie_core::exact::{parse_poly, Poly};
use netlie_core::frames::{assign_coordinates, xbasis_matrices, AssignMode, Assignment};
use netlie_core::liealg::levi_report;
use netlie_core::netspec::{parse_spec_with_warnings, NetworkSpec};

const EXIT_INPUT: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "netlie",
    version,
    about = "Block forms and Lie algebras of colored networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Rows,
    Basis,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the block-form pipeline on a network spec.
    Analyze {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "maximize")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "basis")]
        orientation: OrientationArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Explicit identification, representatives by color then cocolors,
        /// e.g. `x1,x2,x3`. Overrides --mode.
        #[arg(long, value_delimiter = ',')]
        assign: Option<Vec<String>>,
        /// Claimed Jacobian factor as `poly` or `poly:exponent`; repeatable.
        #[arg(long)]
        factor: Vec<String>,
    },
    /// Run the invariant suites on a spec's layout or on all partitions.
    Verify {
        #[arg(
            required_unless_present = "all_partitions",
            conflicts_with = "all_partitions"
        )]
        spec: Option<PathBuf>,
        /// Check every color layout with at most N cells (N <= 8).
        #[arg(long, value_name = "N")]
        all_partitions: Option<usize>,
    },
    /// Write a Graphviz diagram of the network.
    Render {
        spec: PathBuf,
        #[arg(long, value_name = "OUT")]
        dot: PathBuf,
    },
    /// Levi decomposition and first homology dimensions.
    Dims {
        c: usize,
        n: usize,
        /// List every C from 1 to N instead.
        #[arg(long)]
        table: bool,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("netlie: {msg}");
    ExitCode::from(code)
}

fn load(path: &Path) -> Result<NetworkSpec, ExitCode> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    match parse_spec_with_warnings(&src) {
        Ok((spec, warnings)) => {
            for w in warnings {
                eprintln!("{}: {w}", path.display());
            }
            Ok(spec)
        }
        Err(diags) => {
            for d in diags {
                eprintln!("{}: {d}", path.display());
            }
            Err(ExitCode::from(EXIT_INPUT))
        }
    }
}

fn parse_factor(s: &str) -> Result<(Poly, u32), String> {
    let (poly, exp) = match s.rsplit_once(':') {
        Some((p, e)) => (
            p,
            e.trim()
                .parse()
                .map_err(|_| format!("bad exponent in {s:?}"))?,
        ),
        None => (s, 1),
    };
    let p = parse_poly(poly).map_err(|e| format!("factor {poly:?}: {e}"))?;
    Ok((p, exp))
}

fn analyze(
    path: &Path,
    mode: ModeArg,
    orientation: OrientationArg,
    format: Format,
    assign: Option<Vec<String>>,
    factor: &[String],
) -> Result<ExitCode, ExitCode> {
    let spec = load(path)?;
    let factors = factor
        .iter()
        .map(|f| parse_factor(f))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| fail(EXIT_INPUT, e))?;
    let (assignment, mode_name) = match assign {
        Some(names) => {
            let names: Vec<&str> = names.iter().map(|s| s.trim()).collect();
            let a = Assignment::from_names(&spec, &names).map_err(|e| fail(EXIT_INPUT, e))?;
            (a, "explicit")
        }
        None => {
            let m = match mode {
                ModeArg::Minimize => AssignMode::Minimize,
                ModeArg::Maximize => AssignMode::Maximize,
            };
            (
                assign_coordinates(&spec, m),
                if matches!(mode, ModeArg::Minimize) {
                    "minimize"
                } else {
                    "maximize"
                },
            )
        }
    };
    let orientation = match orientation {
        OrientationArg::Rows => Orientation::Rows,
        OrientationArg::Basis => Orientation::Basis,
    };
    let frame = xbasis_matrices(&spec, &assignment);
    let report = build_report(&spec, &frame, mode_name, orientation, &factors);
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => print!("{}", report.to_json()),
    }
    if let Some(c) = report.invariant_violation() {
        return Err(fail(
            EXIT_INVARIANT,
            format!("invariant violated: {}", c.name),
        ));
    }
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(fail(EXIT_VERIFY, format!("check failed: {}", c.name)));
    }
    Ok(ExitCode::SUCCESS)
}

fn print_suites(results: &[SuiteResult]) -> ExitCode {
    for r in results {
        let status = if r.passed() { "pass" } else { "FAIL" };
        let skipped = if r.skipped > 0 {
            format!(", {} skipped", r.skipped)
        } else {
            String::new()
        };
        println!(
            "{:<24} {status}  {} cases{skipped} ({:.3}s)",
            r.name,
            r.cases,
            r.elapsed.as_secs_f64()
        );
    }
    match results.iter().find(|r| !r.passed()) {
        Some(r) => {
            println!(
                "\nfirst counterexample ({}):\n{}",
                r.name,
                r.counterexample.as_deref().unwrap_or("")
            );
            ExitCode::from(EXIT_VERIFY)
        }
        None => ExitCode::SUCCESS,
    }
}

fn dims(c: usize, n: usize, table: bool) -> Result<ExitCode, ExitCode> {
    let cs: Vec<usize> = if table { (1..=n).collect() } else { vec![c] };
    let reports = cs
        .into_iter()
        .map(|c| levi_report(c, n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| fail(EXIT_INPUT, e))?;
    println!("C  B  N  total  semisimple  solvable  a  h1  class");
    for r in reports {
        println!(
            "{:<2} {:<2} {:<2} {:<6} {:<11} {:<9} {:<2} {:<3} ({}, {})",
            r.c,
            r.b,
            r.n,
            r.dim_total,
            r.dim_semisimple,
            r.dim_solvable,
            r.dim_a,
            r.h1_dim,
            r.isomorphy_class.0,
            r.isomorphy_class.1
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Analyze {
            spec,
            mode,
            orientation,
            format,
            assign,
            factor,
        } => analyze(&spec, mode, orientation, format, assign, &factor),
        Command::Verify {
            spec,
            all_partitions,
        } => {
            let results = match (spec, all_partitions) {
                (_, Some(n)) if !(1..=8).contains(&n) => {
                    return Err(fail(
                        EXIT_INPUT,
                        format!("--all-partitions needs 1 <= N <= 8, got {n}"),
                    ))
                }
                (_, Some(n)) => verify_partitions(n),
                (Some(path), None) => verify_spec(&load(&path)?),
                (None, None) => unreachable!("clap requires one of them"),
            };
            Ok(print_suites(&results))
        }
        Command::Render { spec, dot } => {
            let spec = load(&spec)?;
            std::fs::write(&dot, render_dot(&spec))
                .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", dot.display())))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dims { c, n, table } => dims(c, n, table),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    run(cli).unwrap_or_else(|code| code)
}
