//! Command-line front end: loads a scenario config, runs the requested
//! variants, and reports per-case results.
//!
//! Exit codes: 0 on success (a sweep that stops at its iteration cap still
//! exits 0 and is flagged in the summary), 1 for configuration errors,
//! 2 for numerical aborts, 3 for I/O failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use focsweep::{
    load_config, run_scenario, AdjointMode, CaseResult, Error, RunOptions, ScenarioConfig,
    Variant, VariantSet,
};

#[derive(Parser)]
#[command(
    name = "focsweep",
    version,
    about = "Fractional optimal control for a four-compartment epidemic model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Scenario description (JSON)
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the free dynamics only
    Simulate {
        #[command(flatten)]
        common: ConfigArg,
        /// Replace the configured order list with this single order
        #[arg(long, value_name = "ORDER")]
        alpha: Option<f64>,
    },
    /// Solve the optimal-control problem only
    Optimize {
        #[command(flatten)]
        common: ConfigArg,
    },
    /// Run uncontrolled and controlled variants side by side
    Compare {
        #[command(flatten)]
        common: ConfigArg,
        /// Render per-compartment SVG figures
        #[arg(long)]
        svg: bool,
        /// Cap on concurrently running scenario items
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
        /// Write outputs here instead of the configured directory
        #[arg(long, value_name = "DIR")]
        output_dir: Option<PathBuf>,
        /// Integrate the adjoint without its control coupling terms
        #[arg(long)]
        paper_adjoint: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Bad flags are configuration errors; --help and --version are
            // not errors at all.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut cause = std::error::Error::source(&e);
            while let Some(c) = cause {
                eprintln!("  caused by: {c}");
                cause = c.source();
            }
            ExitCode::from(exit_class(&e))
        }
    }
}

/// Maps an error to its exit class (1 config, 2 numerical, 3 I/O),
/// resolving wrappers to the root cause.
fn exit_class(e: &Error) -> u8 {
    match e {
        Error::CaseFailed { source, .. } | Error::SweepAborted { source, .. } => {
            exit_class(source)
        }
        Error::Config(_) => 1,
        Error::Io { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> focsweep::Result<()> {
    match cli.command {
        Command::Simulate { common, alpha } => {
            let mut config = load_config(&common.config)?;
            if let Some(a) = alpha {
                config.alphas = Some(vec![a]);
                config.validate()?;
            }
            execute(&config, VariantSet::UncontrolledOnly, false, None)
        }
        Command::Optimize { common } => {
            let config = load_config(&common.config)?;
            execute(&config, VariantSet::ControlledOnly, false, None)
        }
        Command::Compare {
            common,
            svg,
            jobs,
            output_dir,
            paper_adjoint,
        } => {
            let mut config = load_config(&common.config)?;
            if let Some(dir) = output_dir {
                config.output_dir = dir;
            }
            if paper_adjoint {
                config.sweep.adjoint_mode = AdjointMode::PaperPrinted;
            }
            config.validate()?;
            execute(&config, VariantSet::Both, svg, jobs.map(|n| n as usize))
        }
    }
}

fn execute(
    config: &ScenarioConfig,
    variants: VariantSet,
    svg: bool,
    jobs: Option<usize>,
) -> focsweep::Result<()> {
    let options = RunOptions {
        variants,
        svg,
        jobs,
    };
    let report = run_scenario(config, &options)?;
    for (case, path) in report.cases.iter().zip(&report.csv_paths) {
        println!("{}", case_line(case, path));
    }
    for path in &report.svg_paths {
        println!("figure: {}", path.display());
    }
    println!("summary: {}", report.summary_path.display());
    Ok(())
}

fn case_line(case: &CaseResult, path: &Path) -> String {
    let mut line = format!(
        "{} alpha = {}: J = {:.6}",
        case.variant.name(),
        case.alpha,
        case.objective
    );
    if case.variant == Variant::Controlled {
        if case.converged {
            line.push_str(&format!(", converged in {} iterations", case.iterations));
        } else {
            line.push_str(&format!(
                ", no convergence within {} iterations",
                case.iterations
            ));
        }
        line.push_str(&format!(
            ", stationarity residual {:.3e}",
            case.stationarity_residual
        ));
    }
    line.push_str(&format!(" ({})", path.display()));
    line
}
