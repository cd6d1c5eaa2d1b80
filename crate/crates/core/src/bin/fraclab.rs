use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fraclab::cli::{self, AuditFormat};
use fraclab::shapecheck::CheckerRules;

#[derive(Parser)]
#[command(name = "fraclab", version, about = "Fractional LMS experiments and shape audits")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (filter, seed) cell of an experiment spec.
    Simulate {
        spec: PathBuf,
        /// Exit with code 3 if any run diverged.
        #[arg(long)]
        fail_on_diverge: bool,
    },
    /// Shape-check the equation corpus against the golden table.
    Audit {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Weaken the checker so scalars broadcast over vectors in sums
        /// (regression-guard self test; the audit should then fail).
        #[arg(long, hide = true)]
        allow_scalar_vector_add: bool,
    },
    /// Sweep eta, beta or v over a grid.
    Sweep {
        spec: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Filter section to sweep (default: the first).
        #[arg(long)]
        filter: Option<String>,
    },
    /// Correlation estimate and Wiener solution as JSON.
    Wiener { spec: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut out = io::stdout().lock();
    let result = match args.command {
        Command::Simulate { spec, fail_on_diverge } => cli::cmd_simulate(&spec, fail_on_diverge, &mut out),
        Command::Audit {
            format,
            allow_scalar_vector_add,
        } => {
            let format = match format {
                Format::Text => AuditFormat::Text,
                Format::Json => AuditFormat::Json,
            };
            let rules = CheckerRules {
                scalar_vector_add: allow_scalar_vector_add,
            };
            cli::cmd_audit(format, rules, &mut out)
        }
        Command::Sweep {
            spec,
            param,
            grid,
            filter,
        } => cli::cmd_sweep(&spec, &param, &grid, filter.as_deref(), &mut out),
        Command::Wiener { spec } => cli::cmd_wiener(&spec, &mut out),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
