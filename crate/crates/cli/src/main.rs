use std::path::PathBuf;
use std::process::ExitCode;

use arrcoh_cli::{error_json, run, CliError, Command, Format, Options};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Lattice,
    Betti,
    Decompose,
    Cup,
    Restrict,
    VerifyBeta,
    SheafCheck,
    Oracle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Text,
}

/// Exact cohomology of subspace arrangement complements.
#[derive(Debug, Parser)]
#[command(name = "arrcoh", version)]
struct Args {
    command: Cmd,
    /// Arrangement file (JSON).
    spec: PathBuf,
    /// Seed for the transverse frame sampler.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Fmt,
    /// Overrides the modulus in the file.
    #[arg(long)]
    modulus: Option<u64>,
    /// Subspace file for `restrict`.
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Prime for `oracle`.
    #[arg(long)]
    q: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: Args) -> Result<(), CliError> {
    let cmd = match args.command {
        Cmd::Lattice => Command::Lattice,
        Cmd::Betti => Command::Betti,
        Cmd::Decompose => Command::Decompose,
        Cmd::Cup => Command::Cup,
        Cmd::Restrict => Command::Restrict,
        Cmd::VerifyBeta => Command::VerifyBeta,
        Cmd::SheafCheck => Command::SheafCheck,
        Cmd::Oracle => Command::Oracle,
    };
    let format = match args.format {
        Fmt::Json => Format::Json,
        Fmt::Text => Format::Text,
    };
    let opts = Options {
        seed: args.seed,
        subspace: args.subspace,
        q: args.q,
    };
    let out = run(cmd, &args.spec, args.modulus, &opts, format)?;
    match args.out {
        Some(path) => std::fs::write(&path, out).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        }),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", error_json(&err));
            return ExitCode::from(2);
        }
    };
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::FAILURE
        }
    }
}
