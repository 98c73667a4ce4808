use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use log::{info, warn};
use serde::{Deserialize, Serialize};

use super::config::{InputConfig, RunConfig};
use super::output::{create, Failure};
use crate::error::{Error, Result};
use crate::rates::{
    apply_coverage, build_rate_field, read_fields, Coverage, RateField, RateOptions, StandardPopulation,
    StratifiedCounts,
};
use crate::region_graph::{
    io_check_header, load_adjacency, queen_contiguity, read_geojson, read_regions, write_edges, write_regions,
    NeighborGraph, DEFAULT_SNAP_DEGREES,
};
use crate::synth::{corpus, stratified_counts, Lattice, SyntheticFieldSpec};

/// Synthetic dataset description read by `nb2 synth` and by runs with
/// `input.synthetic`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthFile {
    pub lattice: Lattice,
    /// When present, fields pass through stratified counts and the rate
    /// pipeline instead of being used as log rates directly.
    #[serde(default)]
    pub counts: Option<CountsMode>,
    #[serde(default, rename = "field")]
    pub fields: Vec<SyntheticFieldSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsMode {
    /// Records in every stratum of every region.
    pub records: u64,
    #[serde(default)]
    pub seed: u64,
}

impl SynthFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeLabel {
    pub name: Option<String>,
    pub category: Option<String>,
}

/// `code,name,category`; `name` and `category` columns are optional.
pub fn read_codes(path: &Path) -> Result<BTreeMap<String, CodeLabel>> {
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_codes_from(f, &path.display().to_string())
}

pub fn read_codes_from(reader: impl Read, name: &str) -> Result<BTreeMap<String, CodeLabel>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    io_check_header(name, &headers, &["code"], &["name", "category"])?;
    let col = |c: &str| headers.iter().position(|h| h == c);
    let (name_col, cat_col) = (col("name"), col("category"));
    let mut out = BTreeMap::new();
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line());
        let get = |c: Option<usize>| {
            c.and_then(|i| record.get(i))
                .filter(|s| !s.is_empty())
                .map(String::from)
        };
        let label = CodeLabel {
            name: get(name_col),
            category: get(cat_col),
        };
        if out.insert(record[0].to_string(), label).is_some() {
            return Err(Error::Schema {
                file: name.to_string(),
                line: row,
                message: format!("duplicate code `{}`", &record[0]),
            });
        }
    }
    Ok(out)
}

pub fn write_codes(labels: &BTreeMap<String, CodeLabel>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["code", "name", "category"])?;
    for (code, l) in labels {
        w.write_record([
            code.as_str(),
            l.name.as_deref().unwrap_or(""),
            l.category.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush().map_err(|e| Error::io("codes", e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageRow {
    pub code: String,
    pub observed: usize,
    pub regions: usize,
    pub fraction: f64,
    pub accepted: bool,
}

/// Everything a run consumes: the full graph, the fields that passed the
/// coverage filter, and what was rejected.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: NeighborGraph,
    pub fields: Vec<RateField>,
    pub labels: BTreeMap<String, CodeLabel>,
    pub coverage: Vec<CoverageRow>,
    pub failures: Vec<Failure>,
    /// Present in counts mode, so bundles can carry the raw inputs.
    pub counts: Option<(StratifiedCounts, StandardPopulation)>,
}

impl Dataset {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        match &cfg.input.synthetic {
            Some(path) => Self::synthetic(&SynthFile::load(path)?, &cfg.rates),
            None => Self::from_files(&cfg.input, &cfg.rates),
        }
    }

    pub fn synthetic(spec: &SynthFile, opts: &RateOptions) -> Result<Self> {
        let graph = spec.lattice.graph()?;
        let generated = corpus(&spec.fields, graph.regions())?;
        let labels = generated
            .iter()
            .map(|g| {
                let label = CodeLabel {
                    name: Some(g.field.code.clone()),
                    category: g.label.clone(),
                };
                (g.field.code.clone(), label)
            })
            .collect();
        let fields: Vec<RateField> = generated.into_iter().map(|g| g.field).collect();
        match spec.counts {
            None => Ok(Self::with_fields(graph, fields, labels, opts.coverage_threshold)),
            Some(mode) => {
                let counts = stratified_counts(&fields, graph.regions(), mode.records, opts.years, mode.seed)?;
                let std = StandardPopulation::uniform();
                let codes: Vec<String> = fields.iter().map(|f| f.code.clone()).collect();
                let mut ds = Self::with_counts(graph, &counts, &std, &codes, labels, opts)?;
                ds.counts = Some((counts, std));
                Ok(ds)
            }
        }
    }

    pub fn from_files(input: &InputConfig, opts: &RateOptions) -> Result<Self> {
        let missing = |k: &str| Error::Config(format!("input.{k} is required"));
        let regions_path = input.regions.as_deref().ok_or_else(|| missing("regions"))?;
        let graph = match (&input.edges, &input.polygons) {
            (Some(edges), _) => load_adjacency(regions_path, edges)?,
            (None, Some(poly)) => {
                let id_prop = input.id_property.as_deref().unwrap_or("id");
                queen_contiguity(
                    read_regions(regions_path)?,
                    &read_geojson(poly, id_prop)?,
                    DEFAULT_SNAP_DEGREES,
                )?
            }
            (None, None) => return Err(missing("edges")),
        };
        info!("{} regions, {} edges", graph.n(), graph.edge_count());
        let labels = match &input.codes {
            Some(p) => read_codes(p)?,
            None => BTreeMap::new(),
        };
        if let Some(path) = &input.fields {
            let fields = read_fields(graph.regions(), path)?;
            return Ok(Self::with_fields(graph, fields, labels, opts.coverage_threshold));
        }
        let (counts_path, totals_path) = match (&input.counts, &input.totals) {
            (Some(c), Some(t)) => (c, t),
            _ => return Err(missing("counts and input.totals")),
        };
        let counts = StratifiedCounts::read(graph.regions(), counts_path, totals_path)?;
        let std = match &input.standard_population {
            Some(p) => StandardPopulation::read(p)?,
            None => StandardPopulation::uniform(),
        };
        let codes: Vec<String> = counts.codes().map(String::from).collect();
        if codes.is_empty() {
            warn!("{}: no codes found", counts_path.display());
        }
        let mut ds = Self::with_counts(graph, &counts, &std, &codes, labels, opts)?;
        ds.counts = Some((counts, std));
        Ok(ds)
    }

    fn with_fields(
        graph: NeighborGraph,
        fields: Vec<RateField>,
        labels: BTreeMap<String, CodeLabel>,
        threshold: f64,
    ) -> Self {
        let n = graph.n();
        let outcomes = fields.into_iter().map(|f| apply_coverage(f, n, threshold)).collect();
        Self::collect(graph, outcomes, labels)
    }

    fn with_counts(
        graph: NeighborGraph,
        counts: &StratifiedCounts,
        std: &StandardPopulation,
        codes: &[String],
        labels: BTreeMap<String, CodeLabel>,
        opts: &RateOptions,
    ) -> Result<Self> {
        let outcomes = codes
            .iter()
            .map(|c| build_rate_field(counts, std, c, &graph, opts))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::collect(graph, outcomes, labels))
    }

    fn collect(graph: NeighborGraph, outcomes: Vec<Coverage>, labels: BTreeMap<String, CodeLabel>) -> Self {
        let n = graph.n();
        let mut ds = Dataset {
            graph,
            fields: Vec::new(),
            labels,
            coverage: Vec::new(),
            failures: Vec::new(),
            counts: None,
        };
        for o in outcomes {
            match o {
                Coverage::Accepted(f) => {
                    ds.coverage.push(CoverageRow {
                        code: f.code.clone(),
                        observed: f.observed_count(),
                        regions: n,
                        fraction: f.observed_count() as f64 / n as f64,
                        accepted: true,
                    });
                    ds.fields.push(f);
                }
                Coverage::Rejected {
                    code,
                    observed,
                    regions,
                    fraction,
                } => {
                    ds.failures.push(Failure::coverage(&code, observed, regions, fraction));
                    ds.coverage.push(CoverageRow {
                        code,
                        observed,
                        regions,
                        fraction,
                        accepted: false,
                    });
                }
            }
        }
        ds
    }

    /// Labels for every code, filling in bare entries for unlabeled ones.
    pub fn all_labels(&self) -> BTreeMap<String, CodeLabel> {
        let mut out = self.labels.clone();
        for c in &self.coverage {
            out.entry(c.code.clone()).or_default();
        }
        out
    }

    /// Writes a self-contained bundle (regions, edges, fields, codes,
    /// failures, validation report and a `run.toml` pointing at them).
    pub fn write_bundle(&self, dir: &Path) -> Result<BundleReport> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_regions(self.graph.regions(), create(&dir.join("regions.csv"))?)?;
        write_edges(&self.graph, create(&dir.join("edges.csv"))?)?;
        crate::rates::write_fields(&self.fields, create(&dir.join("fields.csv"))?)?;
        write_codes(&self.all_labels(), create(&dir.join("codes.csv"))?)?;
        super::output::write_failures(&self.failures, create(&dir.join("failures.csv"))?)?;
        if let Some((counts, std)) = &self.counts {
            counts.write_counts(create(&dir.join("counts.csv"))?)?;
            counts.write_totals(create(&dir.join("totals.csv"))?)?;
            std.write(create(&dir.join("standard_population.csv"))?)?;
        }
        let report = BundleReport {
            regions: self.graph.n(),
            edges: self.graph.edge_count(),
            connected_components: self.graph.connected_components(),
            isolated: self.graph.isolated_ids().into_iter().map(String::from).collect(),
            codes: self.coverage.len(),
            accepted: self.fields.len(),
            coverage: self.coverage.clone(),
        };
        let text = toml::to_string(&report).map_err(|e| Error::Config(e.to_string()))?;
        fs::write(dir.join("report.toml"), text).map_err(|e| Error::io(dir.join("report.toml"), e))?;

        let run = RunConfig {
            input: InputConfig {
                regions: Some("regions.csv".into()),
                edges: Some("edges.csv".into()),
                fields: Some("fields.csv".into()),
                codes: Some("codes.csv".into()),
                ..Default::default()
            },
            output: Some("results".into()),
            ..Default::default()
        };
        fs::write(dir.join("run.toml"), run.to_toml()).map_err(|e| Error::io(dir.join("run.toml"), e))?;
        Ok(report)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BundleReport {
    pub regions: usize,
    pub edges: usize,
    pub connected_components: usize,
    pub isolated: Vec<String>,
    pub codes: usize,
    pub accepted: usize,
    pub coverage: Vec<CoverageRow>,
}
