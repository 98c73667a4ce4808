use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nb2::pipeline::{
    bench, bench_dataset, create, manifest_config, refit_dir, rerank_dir, run, write_bench, Dataset, RunConfig,
    SynthFile, VariantSelection,
};
use nb2::variogram::FitWeighting;
use nb2::{Error, Result, WeightScheme};

#[derive(Parser)]
#[command(name = "nb2", version, about = "Neighbor-based bootstrapping for areal rate data")]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate inputs and write a normalized bundle.
    Ingest(Common),
    /// Generate a synthetic bundle from a spec file.
    Synth {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        years: Option<f64>,
    },
    /// Compute NB2, Moran's I, variograms and reports.
    Run(Common),
    /// Time NB2 over a grid of repetition counts and worker counts.
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        reps_grid: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        workers: Vec<usize>,
    },
    /// Rebuild ranking, curve and category reports in a results directory.
    Rank {
        dir: PathBuf,
        #[arg(long, value_delimiter = ',')]
        curve_n: Option<Vec<usize>>,
    },
    /// Refit variograms from the fields stored in a results directory.
    Variogram {
        dir: PathBuf,
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long)]
        max_lag_fraction: Option<f64>,
        #[arg(long, value_enum)]
        weighting: Option<Weighting>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Ttest,
    Odds,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weighting {
    PairsOverLagSquared,
    Pairs,
}

#[derive(Args)]
struct Common {
    /// Config file (a run manifest also works).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    regions: Option<PathBuf>,
    #[arg(long)]
    edges: Option<PathBuf>,
    /// GeoJSON polygons, used when no edge list is given.
    #[arg(long)]
    polygons: Option<PathBuf>,
    #[arg(long)]
    id_property: Option<String>,
    #[arg(long)]
    counts: Option<PathBuf>,
    #[arg(long)]
    totals: Option<PathBuf>,
    #[arg(long)]
    std_pop: Option<PathBuf>,
    #[arg(long)]
    fields: Option<PathBuf>,
    #[arg(long)]
    synthetic: Option<PathBuf>,
    #[arg(long)]
    codes: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Bootstrap repetitions M.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    coverage: Option<f64>,
    /// `binary` or `row`.
    #[arg(long)]
    weights: Option<WeightScheme>,
    #[arg(long)]
    years: Option<f64>,
    /// Use ln(rate + offset) instead of dropping zero-rate regions.
    #[arg(long)]
    zero_offset: Option<f64>,
    /// Rescale stratum weights over the strata that have records.
    #[arg(long)]
    renormalize: bool,
    /// Also write per-repetition values.
    #[arg(long)]
    dump_reps: bool,
    /// Rerun at this M and report statistic stability.
    #[arg(long)]
    stability_reps: Option<usize>,
}

impl Common {
    fn config(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let i = &mut cfg.input;
        let set = |slot: &mut Option<PathBuf>, v: Option<PathBuf>| {
            if v.is_some() {
                *slot = v;
            }
        };
        set(&mut i.regions, self.regions);
        set(&mut i.edges, self.edges);
        set(&mut i.polygons, self.polygons);
        set(&mut i.counts, self.counts);
        set(&mut i.totals, self.totals);
        set(&mut i.standard_population, self.std_pop);
        set(&mut i.fields, self.fields);
        set(&mut i.synthetic, self.synthetic);
        set(&mut i.codes, self.codes);
        set(&mut cfg.output, self.out);
        if self.id_property.is_some() {
            cfg.input.id_property = self.id_property;
        }
        if let Some(s) = self.seed {
            cfg.nb2.master_seed = s;
        }
        if let Some(m) = self.reps {
            cfg.nb2.repetitions = m;
        }
        if let Some(v) = self.variant {
            cfg.nb2.variant = match v {
                VariantArg::Ttest => VariantSelection::Ttest,
                VariantArg::Odds => VariantSelection::Odds,
                VariantArg::Both => VariantSelection::Both,
            };
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        if let Some(c) = self.coverage {
            cfg.rates.coverage_threshold = c;
        }
        if let Some(w) = self.weights {
            cfg.weights = w;
        }
        if let Some(y) = self.years {
            cfg.rates.years = y;
        }
        if self.zero_offset.is_some() {
            cfg.rates.zero_offset = self.zero_offset;
        }
        if self.renormalize {
            cfg.rates.renormalize = true;
        }
        if self.dump_reps {
            cfg.nb2.dump_repetitions = true;
        }
        if self.stability_reps.is_some() {
            cfg.nb2.stability_reference = self.stability_reps;
        }
        Ok(cfg)
    }
}

fn output_dir(cfg: &RunConfig) -> Result<PathBuf> {
    cfg.output
        .clone()
        .ok_or_else(|| Error::Config("--out is required".into()))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Ingest(common) => {
            let cfg = common.config()?;
            cfg.validate()?;
            let out = output_dir(&cfg)?;
            let report = Dataset::load(&cfg)?.write_bundle(&out)?;
            println!(
                "{} regions, {} edges, {} components, {} of {} codes accepted -> {}",
                report.regions,
                report.edges,
                report.connected_components,
                report.accepted,
                report.codes,
                out.display()
            );
        }
        Command::Synth { spec, out, years } => {
            let mut opts = nb2::rates::RateOptions::default();
            if let Some(y) = years {
                opts.years = y;
            }
            let report = Dataset::synthetic(&SynthFile::load(&spec)?, &opts)?.write_bundle(&out)?;
            println!(
                "{} regions, {} fields -> {}",
                report.regions,
                report.accepted,
                out.display()
            );
        }
        Command::Run(common) => {
            let cfg = common.config()?;
            let out = output_dir(&cfg)?;
            let s = run(&cfg)?;
            println!(
                "{} codes, {} analyzed, {} failure records -> {}",
                s.codes,
                s.analyzed,
                s.failures,
                out.display()
            );
            for row in &s.stability {
                println!(
                    "stability {} M={} vs {}: mean {:.4}, max {:.4}, ranks identical: {}",
                    row.variant,
                    row.m,
                    row.reference_m,
                    row.mean_relative_difference,
                    row.max_relative_difference,
                    row.rank_identical
                );
            }
        }
        Command::Bench {
            common,
            reps_grid,
            workers,
        } => {
            let cfg = common.config()?;
            let out = output_dir(&cfg)?;
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            let rows = bench(&bench_dataset(&cfg)?, &cfg, &reps_grid, &workers)?;
            for r in &rows {
                println!("M={:<6} workers={:<3} {:.4} s/code", r.m, r.workers, r.seconds_per_code);
            }
            write_bench(&rows, create(&out.join("bench.csv"))?)?;
        }
        Command::Rank { dir, curve_n } => rerank_dir(&dir, curve_n.as_deref())?,
        Command::Variogram {
            dir,
            bins,
            max_lag_fraction,
            weighting,
        } => {
            let mut settings = manifest_config(&dir)?.variogram;
            if let Some(b) = bins {
                settings.bins = b;
            }
            if let Some(f) = max_lag_fraction {
                settings.max_lag_fraction = f;
            }
            if let Some(w) = weighting {
                settings.weighting = match w {
                    Weighting::PairsOverLagSquared => FitWeighting::PairsOverLagSquared,
                    Weighting::Pairs => FitWeighting::Pairs,
                };
            }
            let n = refit_dir(&dir, &settings)?;
            println!("{n} variograms refit in {}", dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
