//! Command-line interface: `solve`, `scan`, `oracle` and `tables`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use schrelax_core::grid::{HYDROGEN_E2, HYDROGEN_MU_EV, LINEAR_LAMBDA_GEV2, LINEAR_MU_GEV};
use schrelax_core::oracles::sample_oracle;
use schrelax_core::problems::{initial_guess, SchrodingerProblem};
use schrelax_core::scan::{roughness, scan, ScanEntry, ScanReport};
use schrelax_core::{relax, Error, Mesh, PotentialKind, ProblemSpec, RelaxConfig};

use crate::io::{self, IoError};
use crate::tables::{exact_energy, reproduce_tables_on};

/// Exit status when a requested solve or scan does not converge.
pub const EXIT_NOT_CONVERGED: u8 = 1;
/// Exit status for usage and input errors.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "schrelax", version, about = "Relaxation solver for the radial Schrödinger equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relax one eigenvalue guess.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Starting eigenvalue. Coulomb guesses are ground-state energies
        /// and are divided by (n + l)².
        #[arg(long, allow_hyphen_values = true)]
        guess: f64,
        /// Iteration limit.
        #[arg(long, default_value_t = 100)]
        itmax: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Relax a sweep of guesses and pick the smoothest wavefunction.
    Scan {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, allow_hyphen_values = true)]
        emin: f64,
        #[arg(long, allow_hyphen_values = true)]
        emax: f64,
        /// Number of guesses, endpoints included.
        #[arg(long, default_value_t = 61)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form energy, and the sampled wavefunction with --out.
    Oracle {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce both published eigenvalue tables.
    Tables {
        #[arg(long, default_value_t = 101)]
        mesh_points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Potential {
    Coulomb,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dat,
    Json,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum)]
    pub potential: Potential,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Coupling: e² for Coulomb (default 7.297353e-3), slope in GeV² for
    /// linear (default 5).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Reduced mass: eV for Coulomb (default 0.5107208e6), GeV for linear
    /// (default 0.75).
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub mesh_points: usize,
}

impl ProblemArgs {
    pub fn spec(&self) -> Result<ProblemSpec, Error> {
        match self.potential {
            Potential::Coulomb => ProblemSpec::coulomb(
                self.mu.unwrap_or(HYDROGEN_MU_EV),
                self.lambda.unwrap_or(HYDROGEN_E2),
                self.n,
                self.l,
            ),
            Potential::Linear => ProblemSpec::linear(
                self.mu.unwrap_or(LINEAR_MU_GEV),
                self.lambda.unwrap_or(LINEAR_LAMBDA_GEV2),
                self.n,
                self.l,
            ),
        }
    }

    pub fn mesh(&self) -> Result<Mesh, Error> {
        Mesh::new(self.mesh_points)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Dat)]
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::EmptySelection { .. }) => EXIT_NOT_CONVERGED,
            _ => EXIT_USAGE,
        }
    }
}

/// What a successful command produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    NotConverged,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Done => 0,
            Outcome::NotConverged => EXIT_NOT_CONVERGED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub potential: PotentialKind,
    pub n: u32,
    pub l: u32,
    pub mesh_points: usize,
    #[serde(rename = "E_guess")]
    pub guess: f64,
    /// Eigenvalue placed on the starting grid.
    #[serde(rename = "initial_E")]
    pub initial: f64,
    pub converged: bool,
    pub iterations: usize,
    pub final_err: f64,
    #[serde(rename = "relaxed_E")]
    pub relaxed: f64,
    pub roughness: f64,
    #[serde(rename = "exact_E")]
    pub exact: Option<f64>,
    /// `[x, y₁ / max|y₁|]` per mesh point.
    pub wavefunction: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub potential: PotentialKind,
    pub n: u32,
    pub l: u32,
    #[serde(rename = "exact_E")]
    pub exact: Option<f64>,
    /// Max-abs normalised samples, present when a closed form exists.
    pub wavefunction: Option<Vec<[f64; 2]>>,
}

pub fn solve_report(problem: &ProblemArgs, guess: f64, itmax: usize) -> Result<SolveReport, Error> {
    let spec = problem.spec()?;
    let mesh = problem.mesh()?;
    let start = initial_guess(&spec, &mesh, guess)?;
    let config = RelaxConfig { itmax, ..RelaxConfig::for_problem(&spec, guess) };
    config.validate()?;
    let out = relax(&SchrodingerProblem::new(spec), &mesh, &start, &config)?;
    let wave = io::normalized_wavefunction(&out.grid);
    Ok(SolveReport {
        potential: spec.kind(),
        n: spec.n(),
        l: spec.l(),
        mesh_points: mesh.len(),
        guess,
        initial: start.eigenvalue(),
        converged: out.converged,
        iterations: out.iterations,
        final_err: out.final_err,
        relaxed: out.grid.eigenvalue(),
        roughness: roughness(&out.grid, &mesh)?,
        exact: exact_energy(&spec),
        wavefunction: mesh.points().iter().zip(wave).map(|(&x, v)| [x, v]).collect(),
    })
}

/// Writes `text` to `--out`, or to stdout when no path is given.
fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => io::write_text(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| IoError::Write { path: PathBuf::from("<stdout>"), source })?;
        }
    }
    Ok(())
}

fn scan_table(report_entries: &[ScanEntry], selected: Option<usize>) -> String {
    let mut s = String::from("# E_guess converged relaxed_E roughness\n");
    for (i, e) in report_entries.iter().enumerate() {
        let mark = if Some(i) == selected { " *" } else { "" };
        writeln!(s, "{:.6} {} {:.8} {:.6e}{mark}", e.e_guess, e.converged as u8, e.relaxed_e, e.roughness).unwrap();
    }
    s
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Solve { problem, guess, itmax, output } => {
            let report = solve_report(&problem, guess, itmax)?;
            let status = if report.converged { "converged" } else { "NOT converged" };
            let summary = format!(
                "{status} after {} iterations (err {:.3e}): E = {:.6} (initial {:.6}){}\n",
                report.iterations,
                report.final_err,
                report.relaxed,
                report.initial,
                report.exact.map(|e| format!(", exact {e:.6}")).unwrap_or_default()
            );
            match (output.format, &output.out) {
                (Format::Json, None) => emit(&output, &io::to_json(&report)?)?,
                (Format::Dat, None) => print!("{summary}"),
                (Format::Json, Some(_)) => {
                    emit(&output, &io::to_json(&report)?)?;
                    print!("{summary}");
                }
                (Format::Dat, Some(_)) => {
                    emit(&output, &io::format_pairs(&report.wavefunction))?;
                    print!("{summary}");
                }
            }
            Ok(if report.converged { Outcome::Done } else { Outcome::NotConverged })
        }
        Command::Scan { problem, emin, emax, steps, output } => {
            let spec = problem.spec()?;
            let mesh = problem.mesh()?;
            let result = scan(&spec, &mesh, None, emin, emax, steps);
            let (entries, selected) = match &result {
                Ok(r) => (r.entries.as_slice(), Some(r.selected)),
                Err(Error::EmptySelection { entries }) => (entries.as_slice(), None),
                Err(_) => return Err(result.unwrap_err().into()),
            };
            match output.format {
                Format::Dat => emit(&output, &scan_table(entries, selected))?,
                Format::Json => match &result {
                    Ok(r) => emit(&output, &io::to_json(r)?)?,
                    Err(_) => emit(&output, &io::to_json(&ScanFailure { entries: entries.to_vec() })?)?,
                },
            }
            match result {
                Ok(r) => {
                    eprintln!("{}", scan_summary(&r));
                    Ok(Outcome::Done)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(Outcome::NotConverged)
                }
            }
        }
        Command::Oracle { problem, output } => {
            let spec = problem.spec()?;
            let mesh = problem.mesh()?;
            let exact = exact_energy(&spec);
            let wave = match sample_oracle(&spec, &mesh) {
                Ok(values) => {
                    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(io::NORMALIZATION_FLOOR);
                    Some(mesh.points().iter().zip(&values).map(|(&x, v)| [x, v / scale]).collect::<Vec<_>>())
                }
                Err(Error::Unsupported { .. }) => None,
                Err(e) => return Err(e.into()),
            };
            if exact.is_none() && wave.is_none() {
                return Err(CliError::Usage(format!("no closed form for this state (n={}, l={})", spec.n(), spec.l())));
            }
            let report = OracleReport { potential: spec.kind(), n: spec.n(), l: spec.l(), exact, wavefunction: wave };
            match output.format {
                Format::Json => emit(&output, &io::to_json(&report)?)?,
                Format::Dat => {
                    if let Some(e) = exact {
                        println!("E = {e:.6}");
                    }
                    if output.out.is_some() {
                        match &report.wavefunction {
                            Some(w) => emit(&output, &io::format_pairs(w))?,
                            None => {
                                return Err(CliError::Usage(format!(
                                    "no closed-form wavefunction for (n={}, l={})",
                                    spec.n(),
                                    spec.l()
                                )))
                            }
                        }
                    }
                }
            }
            Ok(Outcome::Done)
        }
        Command::Tables { mesh_points, output } => {
            let report = reproduce_tables_on(&Mesh::new(mesh_points)?)?;
            match output.format {
                Format::Dat => emit(&output, &report.to_string())?,
                Format::Json => emit(&output, &io::to_json(&report)?)?,
            }
            let all_converged =
                report.comparison.iter().all(|r| r.converged) && report.linear_spectrum.iter().all(|r| r.converged);
            Ok(if all_converged { Outcome::Done } else { Outcome::NotConverged })
        }
    }
}

#[derive(Serialize)]
struct ScanFailure {
    entries: Vec<ScanEntry>,
}

fn scan_summary(r: &ScanReport) -> String {
    format!(
        "selected guess {:.6} (relaxed {:.6}), roughness {:.4e}",
        r.selected_guess,
        r.selected_relaxed,
        r.selected_entry().roughness
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("schrelax").chain(args.iter().copied()))
    }

    #[test]
    fn negative_guesses_parse() {
        let cli = parse(&["solve", "--potential", "coulomb", "--guess", "-13.59827"]).unwrap();
        match cli.command {
            Command::Solve { guess, problem, .. } => {
                assert_eq!(guess, -13.59827);
                assert_eq!(problem.mesh_points, 101);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn usage_errors_use_clap_exit_code() {
        let err = parse(&["solve", "--potential", "quadratic", "--guess", "1"]).unwrap_err();
        assert_eq!(err.exit_code(), i32::from(EXIT_USAGE));
        let err = parse(&["solve", "--potential", "linear"]).unwrap_err();
        assert_eq!(err.exit_code(), i32::from(EXIT_USAGE));
    }

    #[test]
    fn default_couplings_follow_potential() {
        let cli = parse(&["oracle", "--potential", "linear"]).unwrap();
        let Command::Oracle { problem, .. } = cli.command else { panic!() };
        let spec = problem.spec().unwrap();
        assert_eq!((spec.mu(), spec.coupling()), (0.75, 5.0));
    }

    #[test]
    fn empty_selection_maps_to_not_converged() {
        let err = CliError::Core(Error::EmptySelection { entries: vec![] });
        assert_eq!(err.exit_code(), EXIT_NOT_CONVERGED);
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_USAGE);
    }
}
