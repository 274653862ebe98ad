use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use daelim_cli::{
    config_from_env, run_eliminate, run_eliminate_all, run_reduce, run_verify, CliError, Output, VerifyOptions,
};

/// Index reduction and differential elimination for polynomial DAE systems.
#[derive(Parser)]
#[command(name = "daelim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Differentiate equations until the system can be eliminated.
    Reduce {
        file: PathBuf,
        /// Dependent variable to keep.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Compute the resultant ODE in a single dependent variable.
    Eliminate {
        file: PathBuf,
        #[arg(long)]
        keep: String,
        #[arg(long)]
        json: bool,
        /// Print the elimination matrix with its monomial labels.
        #[arg(long)]
        show_matrix: bool,
    },
    /// Eliminate once for every dependent variable.
    EliminateAll {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the resultant along a trajectory.
    Verify {
        file: PathBuf,
        #[arg(long)]
        keep: String,
        #[arg(long)]
        trajectory: PathBuf,
        /// Largest accepted relative residual.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Overrides the sample count of the trajectory file.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let config = config_from_env()?;
    match cli.command {
        Command::Reduce { file, target, json } => run_reduce(&file, target.as_deref(), json, &config),
        Command::Eliminate {
            file,
            keep,
            json,
            show_matrix,
        } => run_eliminate(&file, &keep, json, show_matrix, &config),
        Command::EliminateAll { file, json } => run_eliminate_all(&file, json, &config),
        Command::Verify {
            file,
            keep,
            trajectory,
            tol,
            samples,
            json,
        } => run_verify(
            &file,
            &VerifyOptions {
                keep: &keep,
                trajectory: &trajectory,
                tolerance: tol,
                samples,
                json,
            },
            &config,
        ),
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
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("daelim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
