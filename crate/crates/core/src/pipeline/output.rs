use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::moran::MoranResult;
use crate::nb2::{Nb2Result, Variant};
use crate::ranker::opt;
use crate::region_graph::io_check_header;
use crate::variogram::VariogramModel;

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// A per-code problem that did not stop the run.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: String,
    pub stage: &'static str,
    pub reason: String,
    /// Achieved coverage, for coverage rejections.
    pub fraction: Option<f64>,
    pub detail: String,
}

impl Failure {
    pub fn new(code: &str, stage: &'static str, reason: impl Into<String>, detail: impl Into<String>) -> Self {
        Failure {
            code: code.to_string(),
            stage,
            reason: reason.into(),
            fraction: None,
            detail: detail.into(),
        }
    }

    pub fn coverage(code: &str, observed: usize, regions: usize, fraction: f64) -> Self {
        Failure {
            fraction: Some(fraction),
            ..Failure::new(
                code,
                "coverage",
                "coverage_rejected",
                format!("observed in {observed} of {regions} regions"),
            )
        }
    }

    pub fn from_error(code: &str, stage: &'static str, e: &Error) -> Self {
        let reason = match e {
            Error::InsufficientData { .. } => "insufficient_data",
            Error::UndefinedStatistic(_) => "undefined_statistic",
            Error::Contract(_) => "contract",
            _ => "error",
        };
        Failure::new(code, stage, reason, e.to_string())
    }
}

/// `code,stage,reason,fraction,detail`
pub fn write_failures(failures: &[Failure], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["code", "stage", "reason", "fraction", "detail"])?;
    for f in failures {
        w.write_record([&f.code, f.stage, &f.reason, &opt(f.fraction), &f.detail])?;
    }
    w.flush().map_err(|e| Error::io("failures", e))
}

/// `code,variant,statistic,n_effective,M,master_seed,flags`
pub fn write_nb2_results<'a>(results: impl IntoIterator<Item = &'a Nb2Result>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "code",
        "variant",
        "statistic",
        "n_effective",
        "M",
        "master_seed",
        "flags",
    ])?;
    for r in results {
        w.write_record([
            r.code.clone(),
            r.variant.name().to_string(),
            format!("{:?}", r.statistic),
            r.n_effective.to_string(),
            r.repetitions.to_string(),
            r.master_seed.to_string(),
            r.flag_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("nb2_results", e))
}

/// `code,rep_index,value`, the per-repetition t statistics or success counts.
pub fn write_repetitions<'a>(results: impl IntoIterator<Item = &'a Nb2Result>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["code", "rep_index", "value"])?;
    for r in results {
        for (k, v) in r.per_repetition.iter().enumerate() {
            w.write_record([r.code.clone(), k.to_string(), format!("{v:?}")])?;
        }
    }
    w.flush().map_err(|e| Error::io("nb2_reps", e))
}

/// `code,I,n,scheme`
pub fn write_moran<'a>(results: impl IntoIterator<Item = &'a MoranResult>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["code", "I", "n", "scheme"])?;
    for r in results {
        w.write_record([
            r.code.clone(),
            format!("{:?}", r.i),
            r.n.to_string(),
            r.scheme.name().to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("moran", e))
}

/// `code,nugget,sill,length_param_km,practical_range_km,converged,rss`
pub fn write_variograms<'a>(
    models: impl IntoIterator<Item = (&'a str, &'a VariogramModel)>,
    out: impl Write,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "code",
        "nugget",
        "sill",
        "length_param_km",
        "practical_range_km",
        "converged",
        "rss",
    ])?;
    for (code, m) in models {
        w.write_record([
            code.to_string(),
            format!("{:?}", m.nugget),
            format!("{:?}", m.sill),
            format!("{:?}", m.length_km),
            format!("{:?}", m.practical_range_km),
            m.converged.to_string(),
            format!("{:?}", m.rss),
        ])?;
    }
    w.flush().map_err(|e| Error::io("variogram", e))
}

fn parse<T: std::str::FromStr>(name: &str, row: u64, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Schema {
        file: name.to_string(),
        line: row,
        message: format!("cannot parse `{s}`"),
    })
}

fn reader(path: &Path, required: &[&str]) -> Result<(csv::Reader<impl Read>, String)> {
    let name = path.display().to_string();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(open(path)?);
    io_check_header(&name, rdr.headers()?, required, &[])?;
    Ok((rdr, name))
}

/// Statistic per `(code, variant)` from a results file.
pub fn read_nb2_statistics(path: &Path) -> Result<BTreeMap<(String, Variant), f64>> {
    let (mut rdr, name) = reader(
        path,
        &[
            "code",
            "variant",
            "statistic",
            "n_effective",
            "M",
            "master_seed",
            "flags",
        ],
    )?;
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line());
        let variant: Variant = parse(&name, row, &rec[1])?;
        out.insert((rec[0].to_string(), variant), parse(&name, row, &rec[2])?);
    }
    Ok(out)
}

pub fn read_moran(path: &Path) -> Result<BTreeMap<String, f64>> {
    let (mut rdr, name) = reader(path, &["code", "I", "n", "scheme"])?;
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line());
        out.insert(rec[0].to_string(), parse(&name, row, &rec[1])?);
    }
    Ok(out)
}

pub fn read_variograms(path: &Path) -> Result<BTreeMap<String, VariogramModel>> {
    let (mut rdr, name) = reader(
        path,
        &[
            "code",
            "nugget",
            "sill",
            "length_param_km",
            "practical_range_km",
            "converged",
            "rss",
        ],
    )?;
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line());
        let m = VariogramModel {
            nugget: parse(&name, row, &rec[1])?,
            sill: parse(&name, row, &rec[2])?,
            length_km: parse(&name, row, &rec[3])?,
            practical_range_km: parse(&name, row, &rec[4])?,
            converged: parse(&name, row, &rec[5])?,
            rss: parse(&name, row, &rec[6])?,
        };
        out.insert(rec[0].to_string(), m);
    }
    Ok(out)
}
