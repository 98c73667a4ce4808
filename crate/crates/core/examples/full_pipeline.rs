//! Synthetic corpus through the whole run: NB2, Moran's I, variograms,
//! rankings and the manifest, then a re-rank from the results directory.
//!
//! ```text
//! cargo run --release --example full_pipeline -- /tmp/nb2_results
//! ```

use std::path::{Path, PathBuf};

use nb2::pipeline::{rerank_dir, run, RunConfig};

fn main() -> nb2::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("nb2_results"));
    let mut cfg = RunConfig::default();
    cfg.input.synthetic = Some(Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/synth_corpus.toml"));
    cfg.output = Some(out.clone());
    cfg.nb2.repetitions = 300;
    cfg.nb2.master_seed = 2024;
    cfg.nb2.stability_reference = Some(100);

    let summary = run(&cfg)?;
    println!(
        "{} regions, {} codes, {} analyzed, {} failure records",
        summary.regions, summary.codes, summary.analyzed, summary.failures
    );
    for s in &summary.stability {
        println!(
            "{} M={} vs {}: mean {:.4}",
            s.variant, s.m, s.reference_m, s.mean_relative_difference
        );
    }
    print!(
        "{}",
        std::fs::read_to_string(out.join("ranking.csv")).unwrap_or_default()
    );

    rerank_dir(&out, Some(&[2, 3]))?;
    println!("curves for N = 2, 3:");
    print!(
        "{}",
        std::fs::read_to_string(out.join("curves.csv")).unwrap_or_default()
    );
    Ok(())
}
