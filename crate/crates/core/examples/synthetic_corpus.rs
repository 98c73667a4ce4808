//! Loads the example corpus spec and writes it out as an input bundle.
//!
//! ```text
//! cargo run --example synthetic_corpus -- /tmp/bundle
//! ```

use std::path::{Path, PathBuf};

use nb2::pipeline::{Dataset, SynthFile};
use nb2::rates::RateOptions;

fn main() -> nb2::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("nb2_bundle"));
    let spec = SynthFile::load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/synth_corpus.toml"))?;
    let ds = Dataset::synthetic(&spec, &RateOptions::default())?;
    for row in &ds.coverage {
        println!(
            "{:>8}: {}/{} regions ({:.2}) {}",
            row.code,
            row.observed,
            row.regions,
            row.fraction,
            if row.accepted { "accepted" } else { "rejected" }
        );
    }
    let report = ds.write_bundle(&out)?;
    println!(
        "{} regions, {} edges -> {}",
        report.regions,
        report.edges,
        out.display()
    );
    Ok(())
}
