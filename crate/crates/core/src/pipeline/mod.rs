//! Batch driver: config, dataset loading, per-code analysis and the result
//! files behind the `nb2` binary.

mod bench;
mod config;
mod dataset;
mod output;
mod reports;
mod run;

pub use bench::{bench, bench_dataset, default_corpus, write_bench, BenchRow};
pub use config::{InputConfig, Nb2Settings, RankingSettings, RunConfig, VariantSelection, VariogramSettings};
pub use dataset::{read_codes, write_codes, BundleReport, CodeLabel, CountsMode, CoverageRow, Dataset, SynthFile};
pub use output::{
    create, read_moran, read_nb2_statistics, read_variograms, write_failures, write_moran, write_nb2_results,
    write_repetitions, write_variograms, Failure,
};
pub use reports::{manifest_config, refit_dir, rerank_dir, write_reports, ReportInputs};
pub use run::{analyze_code, fit_variogram, run, run_dataset, stability_seed, CodeResult, RunSummary, StabilityRow};
