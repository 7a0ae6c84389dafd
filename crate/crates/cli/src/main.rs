use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use projgeom_cli::commands::{
    chart_coords, chart_reconstruct, chart_transition_cmd, dedekind_demo, dedekind_family, halmos, midpoint, path,
};
use projgeom_cli::{emit, read_matrices, run_suite, tolerances, CliError, Suite, SuiteConfig};

/// Projections, their two-projection geometry, affine charts and the
/// valuation lattice, from the command line.
#[derive(Parser)]
#[command(name = "projgeom", version)]
struct Cli {
    /// Threshold override `name=value` (rank_tol, residual_tol, inv_tol); repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Files {
    /// CPLXMAT v1 input.
    #[arg(long)]
    input: PathBuf,
    /// Destination for the result (standard output by default).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a randomized invariant suite and print a JSON report.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra `(p, q)` pairs, as consecutive CPLXMAT v1 blocks.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Centre of a common ball of radius 1/√2 for two projections of equal rank.
    Midpoint(Files),
    /// Affine chart coordinates.
    Chart {
        #[command(subcommand)]
        action: ChartAction,
    },
    /// Sample the projection path between two projections at distance below one.
    Path {
        #[command(flatten)]
        files: Files,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Principal angles of a pair; block dimensions go to standard error.
    Halmos {
        #[command(flatten)]
        files: Files,
        /// Also write the unitary of the canonical form here.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// The valuation-lattice examples.
    Dedekind {
        #[command(subcommand)]
        action: DedekindAction,
    },
}

#[derive(Subcommand)]
enum ChartAction {
    /// Coordinates of `q` at a standard chart, or of `(p, q)` at `p`.
    Coords {
        #[command(flatten)]
        files: Files,
        /// One-based chart index such as `1,3`.
        #[arg(long)]
        index: Option<String>,
    },
    /// Projection from a compressed block (with `--index`) or from `(p, x)`.
    Reconstruct {
        #[command(flatten)]
        files: Files,
        #[arg(long)]
        index: Option<String>,
    },
    /// Coordinates at `p2` of the point given by `(p1, x)`, or by `x` at `--index`.
    Transition {
        #[command(flatten)]
        files: Files,
        #[arg(long)]
        index: Option<String>,
    },
}

#[derive(Subcommand)]
enum DedekindAction {
    /// A projection strictly below an equivalent one.
    Demo,
    /// The chain `p_1 ≤ … ≤ p_k` of pairwise equivalent projections.
    Family {
        #[arg(long)]
        k: u64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = tolerances(&cli.tol)?;
    match cli.command {
        Command::Check { suite, n, trials, seed, input, output } => {
            let pairs = match &input {
                Some(path) => {
                    let blocks = read_matrices(path)?;
                    if blocks.len() % 2 != 0 {
                        return Err(CliError::Usage(format!(
                            "{}: expected (p, q) pairs, found {} matrices",
                            path.display(),
                            blocks.len()
                        )));
                    }
                    blocks.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect()
                }
                None => Vec::new(),
            };
            let report = run_suite(&SuiteConfig { suite, n, trials, seed, tol, pairs })?;
            emit(output.as_deref(), &report.to_json())?;
            if report.failures > 0 {
                return Err(CliError::Failed(format!("{} invariant failures", report.failures)));
            }
        }
        Command::Midpoint(files) => {
            let (text, [dp, dq]) = midpoint(&read_matrices(&files.input)?, &tol)?;
            eprintln!("‖p − r‖ = {dp:.17e}, ‖q − r‖ = {dq:.17e}");
            emit(files.output.as_deref(), &text)?;
        }
        Command::Chart { action } => {
            let (files, text) = match action {
                ChartAction::Coords { files, index } => {
                    let text = chart_coords(&read_matrices(&files.input)?, index.as_deref(), &tol)?;
                    (files, text)
                }
                ChartAction::Reconstruct { files, index } => {
                    let text = chart_reconstruct(&read_matrices(&files.input)?, index.as_deref(), &tol)?;
                    (files, text)
                }
                ChartAction::Transition { files, index } => {
                    let text = chart_transition_cmd(&read_matrices(&files.input)?, index.as_deref(), &tol)?;
                    (files, text)
                }
            };
            emit(files.output.as_deref(), &text)?;
        }
        Command::Path { files, samples } => {
            let text = path(&read_matrices(&files.input)?, samples, &tol)?;
            emit(files.output.as_deref(), &text)?;
        }
        Command::Halmos { files, basis } => {
            let out = halmos(&read_matrices(&files.input)?, &tol)?;
            let d = out.dims;
            eprintln!("d11 {} d00 {} d10 {} d01 {} generic {}", d.d11, d.d00, d.d10, d.d01, d.generic);
            if let Some(b) = basis {
                emit(Some(&b), &out.basis)?;
            }
            emit(files.output.as_deref(), &out.angles)?;
        }
        Command::Dedekind { action } => match action {
            DedekindAction::Demo => {
                let (text, holds) = dedekind_demo();
                emit(None::<&Path>, &text)?;
                if !holds {
                    return Err(CliError::Failed("Dedekind pair flags do not hold".into()));
                }
            }
            DedekindAction::Family { k } => emit(None::<&Path>, &dedekind_family(k)?)?,
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
