//! The `critpair` command line.
//!
//! ```text
//! critpair run <config.json>
//! critpair critpts <roots.csv> [--oracle] [--tol T] [--out FILE]
//! critpair plot <trial.json | critpts.csv> [--roots FILE] [--out DIR]
//! ```
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_CONFIG`], [`EXIT_FALSIFIED`],
//! [`EXIT_NUMERICAL`].

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::assignment;
use crate::config::Config;
use crate::cxlinalg::{oracle_critical_points, MAX_EIGEN_DIM};
use crate::error::{Error, Result};
use crate::experiments::{self, Campaign, ExperimentKind, PairingRow, ResultTable, Summary};
use crate::io;
use crate::par::{self, Execution};
use crate::polyroots::{critical_points_with, RootedPolynomial, DEFAULT_TOL};
use crate::svg::{self, FigureData};

pub const EXIT_OK: i32 = 0;
/// Invalid configuration, unreadable input, or an output that cannot be written.
pub const EXIT_CONFIG: i32 = 2;
/// A campaign below its success threshold, or a `critpts` solve that did not converge.
pub const EXIT_FALSIFIED: i32 = 3;
/// Solver failures above the tolerated rate.
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "critpair", version, about = "Critical points of random polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a Monte Carlo campaign described by a JSON configuration.
    Run {
        config: PathBuf,
        /// Disable data parallelism.
        #[arg(long)]
        sequential: bool,
    },
    /// Critical points of the polynomial with the roots listed in a CSV file.
    Critpts {
        roots: PathBuf,
        /// Cross-check against companion-matrix eigenvalues.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Output file; defaults to `<stem>.critpts.csv` beside the input.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an SVG from a saved trial or a critical-point CSV.
    Plot {
        results: PathBuf,
        /// Roots CSV to draw alongside a critical-point CSV.
        #[arg(long)]
        roots: Option<PathBuf>,
        /// Output directory; defaults to the input's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Run { config, sequential } => {
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::available()
            };
            cmd_run(&config, exec)
        }
        Command::Critpts { roots, oracle, tol, out } => cmd_critpts(&roots, oracle, tol, out.as_deref()),
        Command::Plot { results, roots, out } => cmd_plot(&results, roots.as_deref(), out.as_deref()),
    }
}

fn fail(e: &Error) -> i32 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}

/// Runs a configured campaign and writes `results.csv`, `summary.json`
/// and, when plotting, `trial_0.svg` with its data in `trial_0.json`.
pub fn cmd_run(config: &Path, exec: Execution) -> i32 {
    let (cfg, campaign) = match Config::load(config).and_then(|cfg| cfg.campaign().map(|c| (cfg, c))) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let outcome = par::with_thread_cap(|| experiments::run(&campaign, exec));
    let (table, summary) = match outcome {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    if let Err(e) = write_run(&cfg, &campaign, &table, &summary, exec) {
        return fail(&e);
    }
    report(&summary)
}

fn report(summary: &Summary) -> i32 {
    let rate = summary.success_rate.map_or("n/a".to_string(), |r| format!("{r:.3}"));
    println!(
        "{}: success rate {rate} (threshold {}), solver failure rate {:.3}",
        summary.experiment.name(),
        summary.threshold,
        summary.solver_failure_rate
    );
    if summary.numerically_failed() {
        eprintln!("solver failure rate exceeds {}", experiments::MAX_SOLVER_FAILURE_RATE);
        EXIT_NUMERICAL
    } else if !summary.passed {
        eprintln!("campaign did not meet its success criterion");
        EXIT_FALSIFIED
    } else {
        EXIT_OK
    }
}

fn write_run(cfg: &Config, c: &Campaign, table: &ResultTable, summary: &Summary, exec: Execution) -> Result<()> {
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir)?;
    let results = dir.join("results.csv");
    match table {
        ResultTable::NoOutliers(rows) => io::write_rows(&results, rows)?,
        ResultTable::Pairing(reports) => {
            let rows: Vec<PairingRow> = reports.iter().map(PairingRow::from).collect();
            io::write_rows(&results, &rows)?;
            io::write_json(&dir.join("reports.json"), reports)?;
        }
        ResultTable::TwoCirclesInterior(rows) => io::write_rows(&results, rows)?,
        ResultTable::Convergence(rows) => io::write_rows(&results, rows)?,
        ResultTable::Concentration(rows) => io::write_rows(&results, rows)?,
    }
    io::write_json(&dir.join("summary.json"), summary)?;
    if cfg.plot {
        if let Some(fig) = trial_figure(c, exec)? {
            io::write_json(&dir.join("trial_0.json"), &fig)?;
            svg::write(&dir.join("trial_0.svg"), &fig)?;
        }
    }
    Ok(())
}

/// Figure of trial 0 at the first degree. Concentration sweeps have none.
fn trial_figure(c: &Campaign, exec: Execution) -> Result<Option<FigureData>> {
    if c.kind == ExperimentKind::Concentration {
        return Ok(None);
    }
    let n = c.n_values[0];
    let (poly, cps) = match experiments::trial_points(c, n, 0, exec) {
        Ok(v) => v,
        Err(Error::Convergence { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let xi = c.xi_points(n);
    let outer: Vec<_> = xi
        .into_iter()
        .filter(|&x| !c.measure.in_neighborhood(3.0 * c.epsilon, x))
        .collect();
    Ok(Some(FigureData {
        experiment: Some(c.kind),
        n,
        measure: Some(c.measure.spec()),
        epsilon: c.epsilon,
        roots: poly.all_roots(),
        critical_points: cps.expanded(),
        xi: outer,
        pairing_radius: c.pairing_radius(n),
    }))
}

/// Solves for the critical points of the roots in `roots` and writes them
/// with multiplicities and residuals.
pub fn cmd_critpts(roots: &Path, oracle: bool, tol: f64, out: Option<&Path>) -> i32 {
    let poly = match io::read_roots(roots).and_then(RootedPolynomial::from_roots) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let cps = match par::with_thread_cap(|| critical_points_with(&poly, tol, Execution::available())) {
        Ok(c) => c,
        Err(e @ Error::Convergence { .. }) => {
            eprintln!("error: {e}");
            return EXIT_FALSIFIED;
        }
        Err(e) => return fail(&e),
    };
    let out = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| roots.with_extension("critpts.csv"));
    if let Err(e) = io::write_critical_points(&out, &cps) {
        return fail(&e);
    }
    println!(
        "{} critical points (max residual {:.3e}) -> {}",
        cps.total_multiplicity(),
        cps.max_residual(),
        out.display()
    );
    if oracle {
        if poly.n() > MAX_EIGEN_DIM {
            println!("oracle skipped: degree {} exceeds {MAX_EIGEN_DIM}", poly.n());
        } else {
            match oracle_critical_points(&poly.all_roots(), tol) {
                Ok(o) => println!(
                    "oracle max matched distance {:.3e}",
                    assignment::matched_max_distance(&cps.expanded(), &o.expanded())
                ),
                Err(e) => {
                    eprintln!("oracle: {e}");
                    return EXIT_FALSIFIED;
                }
            }
        }
    }
    EXIT_OK
}

/// Renders a saved trial (`.json`) or a critical-point CSV as SVG.
pub fn cmd_plot(results: &Path, roots: Option<&Path>, out: Option<&Path>) -> i32 {
    match plot(results, roots, out) {
        Ok(path) => {
            println!("{}", path.display());
            EXIT_OK
        }
        Err(e) => fail(&e),
    }
}

fn plot(results: &Path, roots: Option<&Path>, out: Option<&Path>) -> Result<PathBuf> {
    let mut fig: FigureData = if results.extension().is_some_and(|e| e == "json") {
        io::read_json(results)?
    } else {
        FigureData {
            critical_points: io::read_critical_points(results)?
                .iter()
                .flat_map(|r| std::iter::repeat_n(r.location(), r.multiplicity))
                .collect(),
            ..FigureData::default()
        }
    };
    if let Some(r) = roots {
        fig.roots = io::read_roots(r)?;
        fig.n = fig.roots.len();
    }
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => results.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    fs::create_dir_all(&dir).ok();
    let stem = results
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "figure".into());
    let path = dir.join(format!("{stem}.svg"));
    svg::write(&path, &fig)?;
    Ok(path)
}
