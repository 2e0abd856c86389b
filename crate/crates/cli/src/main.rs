use clap::{Parser, Subcommand, ValueEnum};
use msdd_cli::{load_config, simulate, snapshot_cmd, spectrum, verify, CliError, Report, Suite, Task};
use std::path::PathBuf;
use std::process::ExitCode;

/// Damped driven Maxwell-Schrodinger cavity simulator.
///
/// Exit status: 0 all checks pass, 1 a check failed, 2 configuration or input
/// error, 3 the run diverged. `MSDD_OUTPUT_DIR` overrides `output.directory`.
#[derive(Parser)]
#[command(name = "msdd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configured run and write diagnostics, snapshots and plot scripts.
    Simulate { config: PathBuf },
    /// Run one verification suite.
    Verify {
        config: PathBuf,
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
    /// Run one spectral estimate.
    Spectrum {
        config: PathBuf,
        #[arg(long, value_enum)]
        task: TaskArg,
    },
    /// Inspect a snapshot and optionally re-encode it.
    Snapshot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: Option<PathBuf>,
        /// Check the grid against this config.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Charge,
    Conservation,
    Lyapunov,
    Absorbing,
    Gradcheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaskArg {
    LambdaMin,
    Equivalence,
    RelativeBound,
}

fn execute(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Simulate { config } => simulate(&load_config(&config)?),
        Command::Verify { config, suite } => {
            let suite = match suite {
                SuiteArg::Charge => Suite::Charge,
                SuiteArg::Conservation => Suite::Conservation,
                SuiteArg::Lyapunov => Suite::Lyapunov,
                SuiteArg::Absorbing => Suite::Absorbing,
                SuiteArg::Gradcheck => Suite::Gradcheck,
            };
            verify(&load_config(&config)?, suite)
        }
        Command::Spectrum { config, task } => {
            let task = match task {
                TaskArg::LambdaMin => Task::LambdaMin,
                TaskArg::Equivalence => Task::Equivalence,
                TaskArg::RelativeBound => Task::RelativeBound,
            };
            spectrum(&load_config(&config)?, task)
        }
        Command::Snapshot {
            input,
            output,
            config,
        } => {
            let cfg = config.as_deref().map(load_config).transpose()?;
            snapshot_cmd(&input, output.as_deref(), cfg.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(report) => {
            println!("{report}");
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
