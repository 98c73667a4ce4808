//! Ranking, curve and category reports, and re-deriving them (or the
//! variogram fits) from an existing results directory.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use super::config::{RunConfig, VariogramSettings};
use super::dataset::{read_codes, CodeLabel};
use super::output::{create, read_moran, read_nb2_statistics, read_variograms, write_variograms};
use super::run::{fit_variogram, CodeResult};
use crate::error::{Error, Result};
use crate::nb2::Variant;
use crate::ranker::{category_summary, rank, top_n_curve, write_categories, write_curves, CodeStatistics, Method};
use crate::rates::read_fields;
use crate::region_graph::read_regions;
use crate::variogram::write_empirical;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportInputs {
    pub stats: Vec<CodeStatistics>,
}

impl ReportInputs {
    pub fn from_results(results: &[CodeResult], labels: &BTreeMap<String, CodeLabel>) -> Self {
        let stats = results
            .iter()
            .map(|r| {
                let label = labels.get(&r.code).cloned().unwrap_or_default();
                CodeStatistics {
                    code: r.code.clone(),
                    name: label.name,
                    category: label.category,
                    nb2_t: r.statistic(Variant::TTest),
                    nb2_odds: r.statistic(Variant::LogOdds),
                    moran: r.moran.as_ref().map(|m| m.i),
                    variogram: r.model,
                }
            })
            .collect();
        ReportInputs { stats }
    }

    /// Reads `nb2_results.csv`, `moran.csv`, `variogram.csv` and, when
    /// present, `codes.csv` from a results directory.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let nb2 = read_nb2_statistics(&dir.join("nb2_results.csv"))?;
        let moran = read_moran(&dir.join("moran.csv"))?;
        let vario = read_variograms(&dir.join("variogram.csv"))?;
        let codes_path = dir.join("codes.csv");
        let labels = if codes_path.exists() {
            read_codes(&codes_path)?
        } else {
            BTreeMap::new()
        };
        let mut codes: Vec<&String> = nb2
            .keys()
            .map(|k| &k.0)
            .chain(moran.keys())
            .chain(vario.keys())
            .collect();
        codes.sort();
        codes.dedup();
        let stats = codes
            .into_iter()
            .map(|c| {
                let label = labels.get(c).cloned().unwrap_or_default();
                CodeStatistics {
                    code: c.clone(),
                    name: label.name,
                    category: label.category,
                    nb2_t: nb2.get(&(c.clone(), Variant::TTest)).copied(),
                    nb2_odds: nb2.get(&(c.clone(), Variant::LogOdds)).copied(),
                    moran: moran.get(c).copied(),
                    variogram: vario.get(c).copied(),
                }
            })
            .collect();
        Ok(ReportInputs { stats })
    }
}

/// Writes `ranking.csv`, `curves.csv` and `categories.csv`, rows ordered by
/// code.
pub fn write_reports(dir: &Path, inputs: &ReportInputs, curve_n: &[usize]) -> Result<()> {
    let mut stats = inputs.stats.clone();
    stats.sort_by(|a, b| a.code.cmp(&b.code));
    let table = rank(&stats)?;
    table.write(create(&dir.join("ranking.csv"))?)?;
    let points: Vec<_> = Method::ALL
        .into_iter()
        .flat_map(|m| top_n_curve(&table, m, curve_n))
        .collect();
    write_curves(&points, create(&dir.join("curves.csv"))?)?;
    write_categories(&category_summary(&table), create(&dir.join("categories.csv"))?)
}

/// The config recorded in a results directory's manifest, or the defaults.
pub fn manifest_config(dir: &Path) -> Result<RunConfig> {
    let path = dir.join("manifest.toml");
    if path.exists() {
        RunConfig::load(&path)
    } else {
        Ok(RunConfig::default())
    }
}

/// Re-ranks an existing results directory.
pub fn rerank_dir(dir: &Path, curve_n: Option<&[usize]>) -> Result<()> {
    let cfg = manifest_config(dir)?;
    let n = curve_n.unwrap_or(&cfg.ranking.curve_n);
    write_reports(dir, &ReportInputs::from_dir(dir)?, n)
}

/// Recomputes empirical variograms and fits from the `fields.csv` and
/// `regions.csv` stored in a results directory.
pub fn refit_dir(dir: &Path, settings: &VariogramSettings) -> Result<usize> {
    let regions = read_regions(&dir.join("regions.csv"))?;
    let fields = read_fields(&regions, &dir.join("fields.csv"))?;
    let fits: Vec<_> = fields
        .par_iter()
        .map(|f| {
            fit_variogram(f, &regions, settings)
                .ok()
                .map(|fit| (f.code.clone(), fit))
        })
        .collect();
    let fits: Vec<_> = fits.into_iter().flatten().collect();
    write_variograms(
        fits.iter().map(|(c, (_, m))| (c.as_str(), m)),
        create(&dir.join("variogram.csv"))?,
    )?;
    let path = dir.join("empirical_variogram.csv");
    let mut w = csv::Writer::from_writer(create(&path)?);
    w.write_record(["code", "lag_km", "semivariance", "pairs"])?;
    for (c, (emp, _)) in &fits {
        write_empirical(c, emp, &mut w)?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(fits.len())
}
