//! `dendrify` command-line tool.
//!
//! Exit codes: 0 success, 1 parse or IO error, 2 validation failure or
//! invalid endpoint, 3 cell budget exceeded.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use dendrify::arcs::{arc, ArcError};
use dendrify::attractor::{
    refine, render_svg, AddressedPoint, AttractorError, CellBudget, Highlight, DEFAULT_CELL_BUDGET,
};
use dendrify::holder::{
    check_word_stretch, compute_certificate, verify_bounded_turning, HolderError,
    DEFAULT_BETA_DEPTH,
};
use dendrify::io::parse_system;
use dendrify::polysys::{ValidatedSystem, ValidationFailed};
use dendrify::report;

const BUDGET_VAR: &str = "DENDRIFY_CELL_BUDGET";

#[derive(Parser)]
#[command(
    name = "dendrify",
    version,
    about = "Validate polygonal dendrite systems and certify Hölder bounded turning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four conditions and print the validation report.
    Validate(FileArg),
    /// Compute the certificate (λ, ρ, β, C).
    Certify {
        #[command(flatten)]
        file: FileArg,
        /// Depth of the β probe.
        #[arg(long, default_value_t = DEFAULT_BETA_DEPTH)]
        beta_depth: usize,
    },
    /// Sample point pairs and compare arc diameters with C‖x − y‖^λ.
    Verify {
        #[command(flatten)]
        file: FileArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Refinement depth of the traced arcs.
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use this exponent instead of the certified λ.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_BETA_DEPTH)]
        beta_depth: usize,
        /// Random words for the Q ≤ q^λ check.
        #[arg(long, default_value_t = 1000)]
        word_trials: usize,
    },
    /// Draw the depth-d cells, optionally with the arc between two points.
    Render {
        #[command(flatten)]
        file: FileArg,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Endpoints as `address:vertex` tokens, e.g. `12:3` or `ε:1`.
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        arc: Option<Vec<String>>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct FileArg {
    /// System definition (JSON).
    file: PathBuf,
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            code,
            error: error.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Self { code: 1, error }
    }
}

fn budget_code(e: &AttractorError) -> u8 {
    match e {
        AttractorError::DepthTooLarge { .. } => 3,
        _ => 2,
    }
}

impl From<HolderError> for Failure {
    fn from(e: HolderError) -> Self {
        let code = match &e {
            HolderError::Arc(ArcError::Budget(a)) => budget_code(a),
            HolderError::Validation(_) => 2,
            _ => 1,
        };
        Self::new(code, e)
    }
}

fn cell_budget() -> Result<CellBudget, Failure> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(CellBudget)
            .with_context(|| format!("{BUDGET_VAR}={v:?} is not a cell count"))
            .map_err(Failure::from),
        Err(_) => Ok(CellBudget(DEFAULT_CELL_BUDGET)),
    }
}

fn load(path: &Path) -> Result<dendrify::polysys::PolygonalSystem, Failure> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_system(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Prints the validation report on failure so that the caller sees why.
fn load_valid(path: &Path) -> Result<ValidatedSystem, Failure> {
    let sys = load(path)?;
    let (m, n, arith) = (sys.len(), sys.base().len(), sys.arithmetic());
    ValidatedSystem::new(sys).map_err(|ValidationFailed(rep)| {
        print!(
            "{}",
            report::validation_document(&display(path), arith, m, n, &rep)
        );
        Failure::new(2, anyhow!("{} is not a valid system", path.display()))
    })
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())
        .context("writing output")?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate(FileArg { file }) => {
            let sys = load(&file)?;
            let rep = dendrify::polysys::validate(&sys);
            print!(
                "{}",
                report::validation_document(
                    &display(&file),
                    sys.arithmetic(),
                    sys.len(),
                    sys.base().len(),
                    &rep
                )
            );
            Ok(if rep.passed { 0 } else { 2 })
        }
        Command::Certify {
            file: FileArg { file },
            beta_depth,
        } => {
            let sys = load_valid(&file)?;
            let cert = compute_certificate(&sys, beta_depth)?;
            print!(
                "{}",
                report::certificate_document(&display(&file), &cert.certificate)
            );
            Ok(0)
        }
        Command::Verify {
            file: FileArg { file },
            samples,
            depth,
            seed,
            lambda,
            beta_depth,
            word_trials,
        } => {
            let budget = cell_budget()?;
            let sys = load_valid(&file)?;
            let cert = compute_certificate(&sys, beta_depth)?;
            let turning = verify_bounded_turning(&cert, samples, depth, seed, lambda, budget)?;
            let word_stretch =
                check_word_stretch(sys.system(), cert.certificate.lambda, word_trials, 10, seed);
            print!(
                "{}",
                report::verification_document(
                    &display(&file),
                    &cert.certificate,
                    &turning,
                    &word_stretch
                )
            );
            Ok(0)
        }
        Command::Render {
            file: FileArg { file },
            depth,
            arc: ends,
            output,
        } => {
            let budget = cell_budget()?;
            let sys = load_valid(&file)?;
            let (m, n) = (sys.m(), sys.vertex_count());
            let endpoints = match &ends {
                Some(tokens) => {
                    let parse = |t: &str| {
                        AddressedPoint::parse(t, m, n)
                            .map_err(|e| Failure::new(2, anyhow!("endpoint {t:?}: {e}")))
                    };
                    Some((parse(&tokens[0])?, parse(&tokens[1])?))
                }
                None => None,
            };
            let refinement = refine(sys.system(), depth, budget)
                .map_err(|e| Failure::new(budget_code(&e), e))?;
            let approx = match &endpoints {
                Some((x, y)) => Some(arc(&sys, x, y, depth, budget).map_err(|e| {
                    let code = match &e {
                        ArcError::Budget(a) => budget_code(a),
                        _ => 2,
                    };
                    Failure::new(code, e)
                })?),
                None => None,
            };
            let highlights: Vec<Highlight> = approx
                .iter()
                .map(|a| {
                    let mut polyline = vec![a.x_point.clone()];
                    polyline.extend(a.junction_points.iter().cloned());
                    polyline.push(a.y_point.clone());
                    Highlight {
                        cells: a
                            .chain
                            .iter()
                            .cloned()
                            .zip(a.cells.iter().cloned())
                            .collect(),
                        polyline,
                    }
                })
                .collect();
            let svg = render_svg(&refinement, sys.base_f64(), m, &highlights);
            write_atomic(&output, &svg)?;
            print!(
                "{}",
                report::render_document(
                    &display(&file),
                    &display(&output),
                    depth,
                    refinement.cells.len(),
                    approx.as_ref()
                )
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
