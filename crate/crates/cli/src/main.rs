//! `toric`: reproducible JSON reports for Delzant polytopes, probes,
//! superpotential valuations, fiber classification and the reduction pipeline.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input.

mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toric::acceptance::{run_suite, Suite};
use toric::polytope::{
    blowup_face, double_blowup, hirzebruch, interval, shifted_x0_blowup, simplex_cpn,
    DelzantCheck, DelzantPolytope, PolytopeJson,
};
use toric::potential::{
    critical_valuations_interval, critical_valuations_simplex, critical_valuations_xk,
    PotentialReport, ValuationVector,
};
use toric::probes::{survivor_report, MAX_DIR_BOUND};
use toric::quasistate::classify_fibers;
use toric::rational::parse_point;
use toric::reduction::{theorem2_pipeline, RegularityReport};
use toric::{Error, Point, Rational};

use svg::MarkKind;

#[derive(Parser)]
#[command(name = "toric", version, about = "Exact toric-fiber computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical JSON, vertices and Delzant verdict of a polytope.
    Polytope {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        render: RenderArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Survivor scan by the method of probes.
    Probes {
        #[arg(long = "polytope", value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        scan: ScanArgs,
        /// Number of displacement certificates to include.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[command(flatten)]
        render: RenderArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Superpotential and valuation classes of its critical points.
    Potential {
        #[arg(long = "polytope", value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check of critical classes against a probe scan.
    Classify {
        #[arg(long = "polytope", value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduction of the three-factor product at one parameter value.
    Reduce {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational)]
        alpha: Rational,
        #[arg(long, value_parser = parse_rational)]
        lam: Rational,
        #[command(flatten)]
        render: RenderArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs a group of acceptance criteria.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Cpn,
    Blowup,
    DoubleBlowup,
    Hirzebruch,
    ShiftedBlowup,
    Interval,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Newton,
    Probes,
    Pipeline,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Newton => Suite::Newton,
            SuiteArg::Probes => Suite::Probes,
            SuiteArg::Pipeline => Suite::Pipeline,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Constructor parameters; each polytope kind reads the ones it needs.
#[derive(Args, Debug)]
struct Params {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_parser = parse_rational)]
    lam: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    alpha: Option<Rational>,
    /// Size of the simplex (cpn).
    #[arg(long, value_parser = parse_rational)]
    scale: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    height: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    base: Option<Rational>,
    /// Constant of the shifted blowup.
    #[arg(long, value_parser = parse_rational)]
    c: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    lo: Option<Rational>,
    #[arg(long, value_parser = parse_rational)]
    hi: Option<Rational>,
    /// Polytope JSON file (kind `json`).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Grid denominator q: points m/q are scanned.
    #[arg(long, default_value_t = 24)]
    grid: u64,
    /// Bound on |v|_inf for probe directions.
    #[arg(long = "dir-bound", default_value_t = 3)]
    dir_bound: u32,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Write an SVG drawing to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Coordinate plane to draw, 1-based, e.g. `1,2`.
    #[arg(long, value_parser = parse_projection)]
    project: Option<(usize, usize)>,
    /// Extra point to mark, e.g. `1/3,1/3`; repeatable.
    #[arg(long = "mark", value_parser = parse_mark)]
    marks: Vec<Point>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse()
        .map_err(|_| "expected a rational \"p/q\" with q != 0".to_string())
}

fn parse_mark(s: &str) -> Result<Point, String> {
    parse_point(s).map_err(|_| "expected comma-separated rationals, e.g. 1/3,1/3".to_string())
}

fn parse_projection(s: &str) -> Result<(usize, usize), String> {
    let bad = || "expected two distinct 1-based coordinates, e.g. 1,2".to_string();
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b == 0 || a == b {
        return Err(bad());
    }
    Ok((a - 1, b - 1))
}

enum Failure {
    /// Malformed or out-of-range input: exit 2.
    Input(String),
    /// A computed check did not hold: exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IrregularLevel(_) | Error::MismatchedReduction | Error::IllConditioned(_) => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

impl Kind {
    fn name(self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

fn required<T: Clone>(v: &Option<T>, flag: &str, kind: Kind) -> CliResult<T> {
    v.clone().ok_or_else(|| {
        Failure::Input(format!("--{flag} is required for {} polytopes", kind.name()))
    })
}

fn build(kind: Kind, p: &Params) -> CliResult<DelzantPolytope> {
    let one = Rational::one();
    let poly = match kind {
        Kind::Cpn => simplex_cpn(required(&p.n, "n", kind)?, p.scale.clone().unwrap_or(one))?,
        Kind::Blowup => blowup_face(
            required(&p.n, "n", kind)?,
            p.k.unwrap_or(0),
            required(&p.lam, "lam", kind)?,
        )?,
        Kind::DoubleBlowup => {
            double_blowup(required(&p.n, "n", kind)?, required(&p.alpha, "alpha", kind)?)?
        }
        Kind::Hirzebruch => {
            let k = required(&p.k, "k", kind)?;
            let base = p
                .base
                .clone()
                .unwrap_or_else(|| Rational::from_integer(k as i64 + 1));
            hirzebruch(k as u32, p.height.clone().unwrap_or(one), base)?
        }
        Kind::ShiftedBlowup => shifted_x0_blowup(
            required(&p.n, "n", kind)?,
            required(&p.alpha, "alpha", kind)?,
            required(&p.lam, "lam", kind)?,
            p.c.clone().unwrap_or_else(|| Rational::from_integer(2)),
        )?,
        Kind::Interval => interval(
            p.lo.clone().unwrap_or_else(Rational::zero),
            p.hi.clone().unwrap_or(one),
        )?,
        Kind::Json => {
            let path = required(&p.input, "input", kind)?;
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let json: PolytopeJson = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            DelzantPolytope::from_json(json)?
        }
    };
    Ok(poly)
}

fn classes_for(kind: Kind, p: &Params, poly: &DelzantPolytope) -> CliResult<Vec<ValuationVector>> {
    let classes = match kind {
        Kind::Blowup => critical_valuations_xk(
            required(&p.n, "n", kind)?,
            p.k.unwrap_or(0),
            &required(&p.lam, "lam", kind)?,
        )?,
        Kind::Cpn => {
            critical_valuations_simplex(poly.dim(), &p.scale.clone().unwrap_or_else(Rational::one))?
        }
        Kind::Interval => {
            let (lo, hi) = (&poly.vertices()[0][0], &poly.vertices()[1][0]);
            critical_valuations_interval(lo.min(hi), lo.max(hi))?
        }
        _ => {
            return Err(Failure::Input(format!(
                "critical valuations are available for cpn, blowup and interval, not {}",
                kind.name()
            )))
        }
    };
    Ok(classes)
}

fn check_scan(scan: &ScanArgs) -> CliResult<()> {
    if scan.grid < 2 {
        return Err(Failure::Input("--grid must be at least 2".into()));
    }
    if scan.dir_bound == 0 || scan.dir_bound > MAX_DIR_BOUND {
        return Err(Failure::Input(format!(
            "--dir-bound must be between 1 and {MAX_DIR_BOUND}"
        )));
    }
    Ok(())
}

fn emit<T: Serialize>(value: &T, output: &OutputArgs) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?;
    text.push('\n');
    match &output.out {
        Some(path) => write_file(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(format!("stdout: {e}"))),
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn draw(poly: &DelzantPolytope, render: &RenderArgs, extra: &[(Point, MarkKind)]) -> CliResult<()> {
    let Some(path) = &render.svg else {
        return Ok(());
    };
    let plane = match render.project {
        Some((i, j)) if i < poly.dim() && j < poly.dim() => (i, j),
        Some(_) => {
            return Err(Failure::Input(format!(
                "--project coordinates must be at most {}",
                poly.dim()
            )))
        }
        None if poly.dim() == 2 => (0, 1),
        None => {
            return Err(Failure::Input(
                "--svg needs a 2-dimensional polytope or --project i,j".into(),
            ))
        }
    };
    let mut marks = extra.to_vec();
    for m in &render.marks {
        if m.len() != poly.dim() {
            return Err(Failure::Input(format!(
                "--mark {m:?} has {} coordinates, expected {}",
                m.len(),
                poly.dim()
            )));
        }
        marks.push((m.clone(), MarkKind::Marked));
    }
    write_file(path, &svg::render(poly, plane, &marks))
}

#[derive(Serialize)]
struct PolytopeOutput<'a> {
    polytope: PolytopeJson,
    vertices: &'a [Point],
    delzant: DelzantCheck,
}

#[derive(Serialize)]
struct IrregularOutput {
    n: usize,
    alpha: Rational,
    lambda: Rational,
    error: String,
    regularity: RegularityReport,
}

#[derive(Serialize)]
struct CriterionLine {
    id: u8,
    name: &'static str,
    passed: bool,
    detail: String,
    limit_ms: u128,
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    criteria: Vec<CriterionLine>,
}

/// `Ok(false)` when the command ran but a check it reports on failed.
fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Polytope {
            kind,
            params,
            render,
            output,
        } => {
            let poly = build(kind, &params)?;
            emit(
                &PolytopeOutput {
                    polytope: poly.to_json(),
                    vertices: poly.vertices(),
                    delzant: poly.is_delzant(),
                },
                &output,
            )?;
            draw(&poly, &render, &[])?;
            Ok(true)
        }
        Command::Probes {
            kind,
            params,
            scan,
            samples,
            render,
            output,
        } => {
            check_scan(&scan)?;
            let poly = build(kind, &params)?;
            let report = survivor_report(&poly, scan.grid, scan.dir_bound, samples);
            emit(&report, &output)?;
            let marks: Vec<(Point, MarkKind)> = report
                .survivors
                .iter()
                .map(|p| (p.clone(), MarkKind::Survivor))
                .collect();
            draw(&poly, &render, &marks)?;
            Ok(true)
        }
        Command::Potential {
            kind,
            params,
            output,
        } => {
            let poly = build(kind, &params)?;
            let classes = classes_for(kind, &params, &poly)?;
            emit(&PotentialReport::new(&poly, classes), &output)?;
            Ok(true)
        }
        Command::Classify {
            kind,
            params,
            scan,
            output,
        } => {
            check_scan(&scan)?;
            let poly = build(kind, &params)?;
            let classes = classes_for(kind, &params, &poly)?;
            let survivors = survivor_report(&poly, scan.grid, scan.dir_bound, 0);
            let report = classify_fibers(&poly, &classes, &survivors);
            emit(&report, &output)?;
            Ok(!report.inconsistent())
        }
        Command::Reduce {
            n,
            alpha,
            lam,
            render,
            output,
        } => match theorem2_pipeline(n, &alpha, &lam) {
            Ok(report) => {
                emit(&report, &output)?;
                let reduced = DelzantPolytope::from_json(report.reduced.clone())?;
                draw(
                    &reduced,
                    &render,
                    &[(report.fiber_point.clone(), MarkKind::Survivor)],
                )?;
                Ok(report.passed())
            }
            Err(Error::IrregularLevel(regularity)) => {
                emit(
                    &IrregularOutput {
                        n,
                        alpha,
                        lambda: lam,
                        error: "level is not regular".into(),
                        regularity: *regularity,
                    },
                    &output,
                )?;
                Ok(false)
            }
            Err(e) => Err(e.into()),
        },
        Command::Verify { suite, output } => {
            let outcomes = run_suite(suite.into());
            for o in &outcomes {
                eprintln!("{}", o.line());
            }
            let passed = outcomes.iter().all(|o| o.passed);
            let criteria = outcomes
                .into_iter()
                .map(|o| CriterionLine {
                    id: o.id,
                    name: o.name,
                    passed: o.passed,
                    detail: o.detail,
                    limit_ms: o.limit_ms,
                })
                .collect();
            emit(&VerifyOutput { passed, criteria }, &output)?;
            Ok(passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
