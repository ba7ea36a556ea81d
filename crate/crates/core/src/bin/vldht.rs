use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vldht::cli::{self, Command, Format, Overrides};

#[derive(Parser)]
#[command(name = "vldht", version, about = "Exponent solver and scheme harness for testing against independence")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    resolution: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Fmt,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Optimal exponent at one (epsilon, rate).
    Exponent,
    /// Exponent curve over a list of rates.
    Sweep,
    /// Monte-Carlo error probabilities of the scheme.
    Simulate,
    /// Exact error probabilities by enumeration.
    Exact,
    /// Empirical exponent from exact errors over several blocklengths.
    ExponentFit,
    /// Theory-vs-measurement checklist.
    Validate,
    /// Exhaustive round trip of the index codec.
    CodecCheck,
}

#[derive(ValueEnum, Clone, Copy)]
enum Fmt {
    Json,
    Csv,
}

fn command(c: Cmd) -> Command {
    match c {
        Cmd::Exponent => Command::Exponent,
        Cmd::Sweep => Command::Sweep,
        Cmd::Simulate => Command::Simulate,
        Cmd::Exact => Command::Exact,
        Cmd::ExponentFit => Command::ExponentFit,
        Cmd::Validate => Command::Validate,
        Cmd::CodecCheck => Command::CodecCheck,
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cmd = command(args.command);
    let format = match args.format {
        Fmt::Json => Format::Json,
        Fmt::Csv => Format::Csv,
    };
    let Some(config) = &args.config else {
        eprintln!("error: --config <path> is required");
        return ExitCode::from(cli::EXIT_VALIDATION as u8);
    };
    let text = match fs::read_to_string(config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return ExitCode::from(cli::EXIT_VALIDATION as u8);
        }
    };
    // csv rows are appended to an existing table, headed only when it is new
    let appending = matches!(format, Format::Csv)
        && matches!(cmd, Command::Simulate | Command::Exact | Command::ExponentFit)
        && args.out.as_ref().is_some_and(|p| fs::metadata(p).is_ok_and(|m| m.len() > 0));
    let overrides = Overrides {
        seed: args.seed,
        trials: args.trials,
        resolution: args.resolution,
    };
    let outcome = match cli::run(cmd, &text, overrides, format, !appending) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(cli::exit_code(&e) as u8);
        }
    };
    let written = match &args.out {
        Some(p) if appending => fs::OpenOptions::new()
            .append(true)
            .open(p)
            .and_then(|mut f| f.write_all(outcome.body.as_bytes())),
        Some(p) => fs::write(p, &outcome.body),
        None => std::io::stdout().write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(cli::EXIT_VALIDATION as u8);
    }
    match outcome.failure {
        Some(msg) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(cli::EXIT_CHECK_FAILED as u8)
        }
        None => ExitCode::SUCCESS,
    }
}
