//! Regenerates the shipped `.tck` fixtures.
//!
//! ```text
//! cargo run --example write_corpus [DIR]
//! ```
//!
//! `DIR` defaults to the `corpus/` directory next to this crate's manifest.

use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus"));
    let docs = tck::corpus::documents();
    for (rel, text) in &docs {
        let path = dir.join(rel);
        std::fs::create_dir_all(path.parent().expect("relative paths have a parent"))?;
        std::fs::write(&path, text)?;
    }
    println!("wrote {} files under {}", docs.len(), dir.display());
    Ok(())
}
