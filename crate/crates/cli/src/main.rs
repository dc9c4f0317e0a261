use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncsurf_cli::{cmd_construct_report, cmd_dcx_check, cmd_examples, cmd_obstruction_cases, InputError, Report};
use ncsurf_core::construct::Diagonal;
use ncsurf_core::delta::DEFAULT_BUDGET;

#[derive(Parser)]
#[command(name = "ncsurf", version, about = "Checks for normal-crossing surface constructs and their dual complexes")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagonalArg {
    Embedded,
    Normalized,
}

#[derive(Subcommand)]
enum Command {
    /// Δ-complex files.
    Dcx {
        #[command(subcommand)]
        command: DcxCommand,
    },
    /// Construct files.
    Construct {
        #[command(subcommand)]
        command: ConstructCommand,
    },
    /// Degeneration case bookkeeping.
    Obstruction {
        #[command(subcommand)]
        command: ObstructionCommand,
    },
    /// Print a shipped example file.
    Examples { name: String },
}

#[derive(Subcommand)]
enum DcxCommand {
    /// Homology, free faces and collapsibility of a complex (`-` reads stdin).
    Check {
        path: String,
        /// Node budget for the collapse search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Run every check on a construct (`-` reads stdin).
    Report {
        path: String,
        /// Diagonal of the curve matrix in the inertia check.
        #[arg(long, value_enum, default_value_t = DiagonalArg::Embedded)]
        diagonal: DiagonalArg,
    },
}

#[derive(Subcommand)]
enum ObstructionCommand {
    /// The case table and the Bezout count.
    Cases,
}

fn read_input(path: &str) -> Result<String, InputError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| InputError(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| InputError(format!("reading {path}: {e}")))
}

fn run(cli: Cli) -> Result<(String, u8), InputError> {
    let report = |r: Report| {
        let out = match cli.format {
            Format::Text => r.to_text(),
            Format::Json => r.to_json(),
        };
        (out, r.exit_code())
    };
    Ok(match cli.command {
        Command::Dcx { command: DcxCommand::Check { path, budget } } => {
            report(cmd_dcx_check(&read_input(&path)?, budget)?)
        }
        Command::Construct { command: ConstructCommand::Report { path, diagonal } } => {
            let diagonal = match diagonal {
                DiagonalArg::Embedded => Diagonal::Embedded,
                DiagonalArg::Normalized => Diagonal::Normalized,
            };
            report(cmd_construct_report(&read_input(&path)?, diagonal)?)
        }
        Command::Obstruction { command: ObstructionCommand::Cases } => report(cmd_obstruction_cases()),
        Command::Examples { name } => (cmd_examples(&name)?, 0),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
