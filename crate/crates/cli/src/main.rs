use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

// stdout writers that stay quiet when the reader hangs up (`| head`)
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

mod coeffs_cmd;
mod config;
mod convergence_cmd;
mod simulate_cmd;
mod verify_cmd;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Core(#[from] vortsw::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

/// Environment variable overriding the default output root.
pub const OUTPUT_ROOT_VAR: &str = "VORTSW_OUTPUT_ROOT";

#[derive(Parser)]
#[command(
    name = "vortsw",
    version,
    about = "Shallow-water-with-vorticity coefficients, checks and simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print model coefficients and the identity report.
    Coeffs(coeffs_cmd::Args),
    /// Run the verification suites; exit 0 iff all pass.
    Verify(verify_cmd::Args),
    /// Integrate the nonlocal equation from a JSON config.
    Simulate {
        config: PathBuf,
        /// Output directory (default: $VORTSW_OUTPUT_ROOT/<name> or runs/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Manufactured-solution convergence study.
    Convergence {
        config: Option<PathBuf>,
        /// Zero manufactured solution with the forcing switched off.
        #[arg(long)]
        zero: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Coeffs(args) => coeffs_cmd::run(&args),
        Command::Verify(args) => verify_cmd::run(&args),
        Command::Simulate { config, out } => simulate_cmd::run(&config, out.as_deref()),
        Command::Convergence { config, zero, json } => {
            convergence_cmd::run(config.as_deref(), zero, json)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
