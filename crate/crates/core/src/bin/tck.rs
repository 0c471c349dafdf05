use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tck::cli::{run_file, RunOptions, COMMANDS};
use tck::search::DEFAULT_BOUND;

/// Check finite categorical data: classifiers, sheaves and stacks.
#[derive(Parser)]
#[command(name = "tck", version, after_help = format!("commands: {}", COMMANDS.join(", ")))]
struct Args {
    command: String,
    file: PathBuf,
    /// Maximum number of search nodes per run.
    #[arg(long, env = "TCK_BOUND", default_value_t = DEFAULT_BOUND)]
    bound: u64,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let opts = RunOptions { bound: args.bound, timing: args.timing };
    let report = match run_file(&args.command, &args.file, opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("tck: {e}");
            return ExitCode::from(3);
        }
    };
    let text = if args.json { report.to_json() + "\n" } else { report.render() };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("tck: cannot write `{}`: {e}", path.display());
                return ExitCode::from(3);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
