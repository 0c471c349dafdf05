//! Reading and writing `.tck` documents, and running checks on them through
//! the library rather than the `tck` binary.
//!
//! ```text
//! cargo run --example documents [FILE] [COMMAND]
//! ```
//!
//! With no arguments, runs `roundtrip` on the shipped pointed fixture.

use std::path::PathBuf;

use tck::cli::{parse_file, run, serialize, RunOptions, Value};
use tck::corpus::non_separated;
use tck::search::{Budget, DEFAULT_BOUND};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/opfibrations/Pt-pointed.tck"));
    let command = args.next().unwrap_or_else(|| "roundtrip".into());

    let doc = parse_file(&path, &mut Budget::new(DEFAULT_BOUND))?;
    let names: Vec<&str> = doc.sections.iter().map(|s| s.name.as_str()).collect();
    println!("{} sections: {}", names.len(), names.join(", "));
    let report = run(&command, &doc, RunOptions { bound: DEFAULT_BOUND, timing: false })?;
    print!("{}", report.render());
    println!("exit code {}", report.exit_code());

    println!("\na presheaf in text form:");
    print!("{}", serialize("z", &Value::SetPresheaf(non_separated())));
    Ok(())
}
