use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::dataset::{Dataset, SynthFile};
use super::run::with_threads;
use crate::error::{Error, Result};
use crate::nb2::{nb2_both, Nb2Config};
use crate::rates::RateOptions;
use crate::synth::{FieldKind, Lattice, SyntheticFieldSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    #[serde(rename = "M")]
    pub m: usize,
    pub workers: usize,
    pub codes: usize,
    pub seconds_per_code: f64,
}

/// Four cheap fields on a 3,109-region lattice.
pub fn default_corpus() -> SynthFile {
    let kinds = [
        FieldKind::GaussianBlobs {
            count: 30,
            width_km: 60.0,
            amplitude: 1.0,
        },
        FieldKind::GaussianBlobs {
            count: 10,
            width_km: 200.0,
            amplitude: 1.0,
        },
        FieldKind::Gradient {
            axis: crate::synth::Axis::Lat,
        },
        FieldKind::Checkerboard { cell_deg: 0.45 },
    ];
    SynthFile {
        lattice: Lattice::continental(3109),
        counts: None,
        fields: kinds
            .into_iter()
            .enumerate()
            .map(|(k, kind)| SyntheticFieldSpec::new(format!("bench{k}"), kind, k as u64).with_nugget(0.1))
            .collect(),
    }
}

/// Wall-clock seconds per code of the NB2 computation (both variants from
/// shared repetitions) for every `(M, workers)` pair.
pub fn bench(ds: &Dataset, cfg: &RunConfig, m_grid: &[usize], workers: &[usize]) -> Result<Vec<BenchRow>> {
    let subgraphs = ds
        .fields
        .iter()
        .map(|f| ds.graph.observed_subgraph(f).map(|s| (f, s.graph)))
        .collect::<Result<Vec<_>>>()?;
    if subgraphs.is_empty() {
        return Err(Error::Config("bench needs at least one usable code".into()));
    }
    let mut rows = Vec::new();
    for &w in workers {
        for &m in m_grid {
            let nb2_cfg = Nb2Config {
                repetitions: m,
                master_seed: cfg.nb2.master_seed,
                errors: cfg.nb2.errors,
                ties: cfg.nb2.ties,
                ..Default::default()
            };
            let start = Instant::now();
            with_threads(w, || {
                subgraphs
                    .par_iter()
                    .map(|(f, g)| nb2_both(f, g, &nb2_cfg).map(|_| ()))
                    .collect::<Result<Vec<()>>>()
            })??;
            rows.push(BenchRow {
                m,
                workers: w,
                codes: subgraphs.len(),
                seconds_per_code: start.elapsed().as_secs_f64() / subgraphs.len() as f64,
            });
        }
    }
    Ok(rows)
}

/// Loads the configured dataset, or the default corpus when the config has
/// no inputs.
pub fn bench_dataset(cfg: &RunConfig) -> Result<Dataset> {
    if cfg.input.synthetic.is_none() && cfg.input.regions.is_none() {
        Dataset::synthetic(&default_corpus(), &RateOptions::default())
    } else {
        Dataset::load(cfg)
    }
}

/// `M,workers,codes,seconds_per_code`
pub fn write_bench(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io("bench", e))
}
