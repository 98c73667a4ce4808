use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use super::config::{RunConfig, VariogramSettings};
use super::dataset::{write_codes, CodeLabel, Dataset};
use super::output::{
    create, write_failures, write_moran, write_nb2_results, write_repetitions, write_variograms, Failure,
};
use super::reports::{write_reports, ReportInputs};
use crate::error::{Error, Result};
use crate::moran::{morans_i, MoranResult};
use crate::nb2::{compare_statistics, nb2, nb2_both, Nb2Config, Nb2Result, Variant, SEED_DERIVATION};
use crate::rates::{write_fields, RateField};
use crate::region_graph::{write_regions, NeighborGraph, RegionSet};
use crate::stats::sample_variance;
use crate::variogram::{
    empirical_variogram, fit_exponential, initial_parameters, observations, write_empirical, EmpiricalVariogram,
    VariogramModel,
};

/// Everything computed for one code.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeResult {
    pub code: String,
    pub nb2: Vec<Nb2Result>,
    pub moran: Option<MoranResult>,
    pub empirical: Option<EmpiricalVariogram>,
    pub model: Option<VariogramModel>,
    pub failures: Vec<Failure>,
}

impl CodeResult {
    pub fn statistic(&self, v: Variant) -> Option<f64> {
        self.nb2.iter().find(|r| r.variant == v).map(|r| r.statistic)
    }
}

/// Empirical variogram over the field's observed regions and its
/// exponential fit, started from the field's sample variance.
pub fn fit_variogram(
    field: &RateField,
    regions: &RegionSet,
    settings: &VariogramSettings,
) -> Result<(EmpiricalVariogram, VariogramModel)> {
    let (points, values) = observations(field, regions);
    let (width, max_lag) = settings.binning().resolve(&points)?;
    let emp = empirical_variogram(field, regions, width, max_lag)?;
    let init = initial_parameters(&emp, sample_variance(&values));
    let model = fit_exponential(&emp, Some(init), &settings.fit_options());
    Ok((emp, model))
}

fn nb2_config(cfg: &RunConfig, repetitions: usize, master_seed: u64, variant: Variant) -> Nb2Config {
    Nb2Config {
        repetitions,
        master_seed,
        variant,
        threads: 0,
        errors: cfg.nb2.errors,
        ties: cfg.nb2.ties,
    }
}

fn run_nb2(
    field: &RateField,
    graph: &NeighborGraph,
    cfg: &RunConfig,
    reps: usize,
    seed: u64,
) -> Result<Vec<Nb2Result>> {
    let variants = cfg.nb2.variant.variants();
    if variants.len() == 2 {
        let (t, o) = nb2_both(field, graph, &nb2_config(cfg, reps, seed, Variant::TTest))?;
        Ok(vec![t, o])
    } else {
        Ok(vec![nb2(field, graph, &nb2_config(cfg, reps, seed, variants[0]))?])
    }
}

/// NB2, Moran's I and the variogram for one code. Problems are recorded as
/// failures rather than returned.
pub fn analyze_code(field: &RateField, graph: &NeighborGraph, cfg: &RunConfig) -> CodeResult {
    let code = field.code.as_str();
    let mut out = CodeResult {
        code: code.to_string(),
        nb2: Vec::new(),
        moran: None,
        empirical: None,
        model: None,
        failures: Vec::new(),
    };
    match graph.observed_subgraph(field) {
        Ok(sub) => {
            if !sub.dropped_isolated.is_empty() {
                info!(
                    "{code}: {} regions without observed neighbors dropped",
                    sub.dropped_isolated.len()
                );
            }
            match run_nb2(field, &sub.graph, cfg, cfg.nb2.repetitions, cfg.nb2.master_seed) {
                Ok(r) => out.nb2 = r,
                Err(e) => out.failures.push(Failure::from_error(code, "nb2", &e)),
            }
            match morans_i(field, &sub.graph, cfg.weights) {
                Ok(m) => out.moran = Some(m),
                Err(e) => out.failures.push(Failure::from_error(code, "moran", &e)),
            }
        }
        Err(e) => out.failures.push(Failure::from_error(code, "graph", &e)),
    }
    match fit_variogram(field, graph.regions(), &cfg.variogram) {
        Ok((emp, model)) => {
            if !model.converged {
                out.failures.push(Failure::new(
                    code,
                    "variogram",
                    "not_converged",
                    "fit did not move from its starting length or ended on a bound",
                ));
            }
            out.empirical = Some(emp);
            out.model = Some(model);
        }
        Err(e) => out.failures.push(Failure::from_error(code, "variogram", &e)),
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    pub variant: String,
    pub reference_m: usize,
    pub m: usize,
    pub codes: usize,
    pub mean_relative_difference: f64,
    pub max_relative_difference: f64,
    pub rank_identical: bool,
}

/// Seed of the comparison run, kept apart from the main run's repetitions.
pub fn stability_seed(master_seed: u64) -> u64 {
    crate::nb2::splitmix64(master_seed ^ 0x5354_4142_494C_4954)
}

/// Compares the main statistics with a rerun at `cfg.nb2.stability_reference`
/// repetitions; the run with more repetitions is the reference.
pub fn stability(
    results: &[CodeResult],
    ds_fields: &[RateField],
    graph: &NeighborGraph,
    cfg: &RunConfig,
) -> Vec<StabilityRow> {
    let Some(other_m) = cfg.nb2.stability_reference else {
        return Vec::new();
    };
    let seed = stability_seed(cfg.nb2.master_seed);
    let reruns: Vec<Vec<Nb2Result>> = ds_fields
        .par_iter()
        .zip(results.par_iter())
        .filter(|(_, r)| !r.nb2.is_empty())
        .filter_map(|(f, _)| {
            let sub = graph.observed_subgraph(f).ok()?;
            run_nb2(f, &sub.graph, cfg, other_m, seed).ok()
        })
        .collect();
    cfg.nb2
        .variant
        .variants()
        .iter()
        .map(|&v| {
            let main: Vec<(String, f64)> = results
                .iter()
                .filter_map(|r| r.statistic(v).map(|s| (r.code.clone(), s)))
                .collect();
            let other: Vec<(String, f64)> = reruns
                .iter()
                .flatten()
                .filter(|r| r.variant == v)
                .map(|r| (r.code.clone(), r.statistic))
                .collect();
            let main_m = cfg.nb2.repetitions;
            let (reference, compared, ref_m, m) = if other_m > main_m {
                (&other, &main, other_m, main_m)
            } else {
                (&main, &other, main_m, other_m)
            };
            let rep = compare_statistics(reference, compared);
            StabilityRow {
                variant: v.name().to_string(),
                reference_m: ref_m,
                m,
                codes: rep.codes,
                mean_relative_difference: rep.mean_relative_difference,
                max_relative_difference: rep.max_relative_difference,
                rank_identical: rep.rank_identical,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub regions: usize,
    pub edges: usize,
    pub connected_components: usize,
    pub codes: usize,
    pub analyzed: usize,
    pub failures: usize,
    pub seed_derivation: String,
    pub version: String,
    pub stability: Vec<StabilityRow>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    run: &'a RunSummary,
    config: &'a RunConfig,
}

pub(crate) fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Loads the configured dataset, analyzes every code and writes the results
/// directory. Statistic files depend only on the config and seed, never on
/// the number of threads.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let out = cfg
        .output
        .clone()
        .ok_or_else(|| Error::Config("no output directory given".into()))?;
    let ds = Dataset::load(cfg)?;
    run_dataset(&ds, cfg, &out)
}

pub fn run_dataset(ds: &Dataset, cfg: &RunConfig, out: &Path) -> Result<RunSummary> {
    if ds.fields.is_empty() {
        warn!("no codes passed the coverage filter");
    }
    let (mut results, stab) = with_threads(cfg.threads, || {
        let results: Vec<CodeResult> = ds.fields.par_iter().map(|f| analyze_code(f, &ds.graph, cfg)).collect();
        let stab = stability(&results, &ds.fields, &ds.graph, cfg);
        (results, stab)
    })?;

    results.sort_by(|a, b| a.code.cmp(&b.code));
    let mut failures = ds.failures.clone();
    failures.extend(results.iter().flat_map(|r| r.failures.iter().cloned()));
    let summary = RunSummary {
        regions: ds.graph.n(),
        edges: ds.graph.edge_count(),
        connected_components: ds.graph.connected_components(),
        codes: ds.coverage.len(),
        analyzed: results.iter().filter(|r| !r.nb2.is_empty()).count(),
        failures: failures.len(),
        seed_derivation: SEED_DERIVATION.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        stability: stab,
    };
    write_results(out, ds, cfg, &results, &failures, &summary)?;
    Ok(summary)
}

fn write_results(
    out: &Path,
    ds: &Dataset,
    cfg: &RunConfig,
    results: &[CodeResult],
    failures: &[Failure],
    summary: &RunSummary,
) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let path = |name: &str| -> PathBuf { out.join(name) };

    let nb2_rows: Vec<&Nb2Result> = results.iter().flat_map(|r| &r.nb2).collect();
    write_nb2_results(nb2_rows.iter().copied(), create(&path("nb2_results.csv"))?)?;
    if cfg.nb2.dump_repetitions {
        for v in cfg.nb2.variant.variants() {
            let rows = nb2_rows.iter().copied().filter(|r| r.variant == *v);
            write_repetitions(rows, create(&path(&format!("nb2_reps_{}.csv", v.name())))?)?;
        }
    }
    write_moran(
        results.iter().filter_map(|r| r.moran.as_ref()),
        create(&path("moran.csv"))?,
    )?;
    write_variograms(
        results
            .iter()
            .filter_map(|r| r.model.as_ref().map(|m| (r.code.as_str(), m))),
        create(&path("variogram.csv"))?,
    )?;
    let mut w = csv::Writer::from_writer(create(&path("empirical_variogram.csv"))?);
    w.write_record(["code", "lag_km", "semivariance", "pairs"])?;
    for r in results {
        if let Some(emp) = &r.empirical {
            write_empirical(&r.code, emp, &mut w)?;
        }
    }
    w.flush().map_err(|e| Error::io(path("empirical_variogram.csv"), e))?;
    write_failures(failures, create(&path("failures.csv"))?)?;

    // inputs for re-deriving reports from this directory alone
    write_fields(&ds.fields, create(&path("fields.csv"))?)?;
    write_regions(ds.graph.regions(), create(&path("regions.csv"))?)?;
    let labels: BTreeMap<String, CodeLabel> = ds.all_labels();
    write_codes(&labels, create(&path("codes.csv"))?)?;

    if !summary.stability.is_empty() {
        let mut w = csv::Writer::from_writer(create(&path("stability.csv"))?);
        for row in &summary.stability {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io(path("stability.csv"), e))?;
    }

    let inputs = ReportInputs::from_results(results, &labels);
    write_reports(out, &inputs, &cfg.ranking.curve_n)?;

    let manifest = toml::to_string(&Manifest {
        run: summary,
        config: cfg,
    })
    .map_err(|e| Error::Config(format!("manifest: {e}")))?;
    fs::write(path("manifest.toml"), manifest).map_err(|e| Error::io(path("manifest.toml"), e))
}
