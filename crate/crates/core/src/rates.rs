//! Crude and directly standardized incidence rates.
//!
//! Counts are stratified by 19 age groups and two genders. A crude rate is
//! cases over the stratum's total record count, scaled to cases per 100,000
//! person-years; the adjusted rate is the standard-population weighted sum of
//! the crude rates. Fields are stored as natural logs of adjusted rates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region_graph::{NeighborGraph, RegionSet};

pub const AGE_GROUPS: usize = 19;
pub const STRATA: usize = AGE_GROUPS * 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gender {
    F,
    M,
}

impl Gender {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "F" | "f" => Some(Gender::F),
            "M" | "m" => Some(Gender::M),
            _ => None,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gender::F => "F",
            Gender::M => "M",
        })
    }
}

/// One age/gender cell. Age groups are numbered 1 through 19.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stratum {
    pub age_group: u8,
    pub gender: Gender,
}

impl Stratum {
    pub fn new(age_group: u8, gender: Gender) -> Option<Self> {
        (1..=AGE_GROUPS as u8)
            .contains(&age_group)
            .then_some(Stratum { age_group, gender })
    }

    pub fn index(self) -> usize {
        (self.age_group as usize - 1) * 2 + self.gender as usize
    }

    pub fn from_index(k: usize) -> Self {
        let gender = if k.is_multiple_of(2) { Gender::F } else { Gender::M };
        Stratum {
            age_group: (k / 2 + 1) as u8,
            gender,
        }
    }

    pub fn all() -> impl Iterator<Item = Stratum> {
        (0..STRATA).map(Stratum::from_index)
    }
}

/// Cases per 100,000 person-years. `None` when the stratum has no records.
pub fn crude_rate(cases: u64, total_cases: u64, years: f64) -> Option<f64> {
    if total_cases == 0 {
        return None;
    }
    Some(cases as f64 / total_cases as f64 * 100_000.0 / years)
}

/// Population of the standard population in each stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardPopulation {
    population: [u64; STRATA],
    total: u64,
}

impl StandardPopulation {
    pub fn new(population: [u64; STRATA]) -> Result<Self> {
        let total: u64 = population.iter().sum();
        if total == 0 {
            return Err(Error::Config("standard population is empty".into()));
        }
        Ok(StandardPopulation { population, total })
    }

    /// Equal population in every stratum.
    pub fn uniform() -> Self {
        StandardPopulation::new([1; STRATA]).expect("nonzero")
    }

    pub fn weight(&self, s: Stratum) -> f64 {
        self.population[s.index()] as f64 / self.total as f64
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn read(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(f, &path.display().to_string())
    }

    pub fn read_from(reader: impl Read, name: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        crate::region_graph::io_check_header(name, rdr.headers()?, &["age_group", "gender", "population"], &[])?;
        let mut population = [0u64; STRATA];
        let mut seen = [false; STRATA];
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let s = parse_stratum(&record[0], &record[1], name, line)?;
            if std::mem::replace(&mut seen[s.index()], true) {
                return Err(schema(
                    name,
                    line,
                    format!("duplicate stratum {}{}", s.age_group, s.gender),
                ));
            }
            population[s.index()] = parse_count(&record[2], name, line)?;
        }
        Self::new(population).map_err(|e| schema(name, 1, e.to_string()))
    }

    pub fn write(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["age_group", "gender", "population"])?;
        for s in Stratum::all() {
            w.write_record([
                s.age_group.to_string(),
                s.gender.to_string(),
                self.population[s.index()].to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<std population>", e))?;
        Ok(())
    }
}

/// Options for adjusted-rate computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateOptions {
    /// Length of the observation window in years.
    pub years: f64,
    /// Minimum fraction of the graph's regions a code must be observed in.
    pub coverage_threshold: f64,
    /// When set, use `ln(rate + offset)` for every region instead of
    /// dropping regions whose adjusted rate is zero.
    pub zero_offset: Option<f64>,
    /// Rescale the weights of the strata that have records so they sum to one.
    pub renormalize: bool,
}

impl Default for RateOptions {
    fn default() -> Self {
        RateOptions {
            years: 8.0,
            coverage_threshold: 2.0 / 3.0,
            zero_offset: None,
            renormalize: false,
        }
    }
}

/// Weighted sum of stratum crude rates. Strata without records are skipped;
/// `None` when every stratum is missing.
pub fn adjusted_rate(crude: &[Option<f64>; STRATA], std: &StandardPopulation, renormalize: bool) -> Option<f64> {
    let mut sum = 0.0;
    let mut present = 0u64;
    let mut any = false;
    for s in Stratum::all() {
        if let Some(rate) = crude[s.index()] {
            let pop = std.population[s.index()];
            sum += rate * pop as f64;
            present += pop;
            any = true;
        }
    }
    match (any, renormalize) {
        (false, _) => None,
        (true, true) if present > 0 => Some(sum / present as f64),
        (true, true) => Some(0.0),
        (true, false) => Some(sum / std.total as f64),
    }
}

/// Stratified case counts per code and total record counts per region.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StratifiedCounts {
    cases: BTreeMap<String, HashMap<String, [u64; STRATA]>>,
    totals: HashMap<String, [u64; STRATA]>,
}

impl StratifiedCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_total(&mut self, region: &str, s: Stratum, total: u64) {
        self.totals.entry(region.to_string()).or_insert([0; STRATA])[s.index()] = total;
    }

    /// Records cases for a code. Fails when cases would exceed the stratum's
    /// total, so totals must be set first.
    pub fn set_cases(&mut self, code: &str, region: &str, s: Stratum, cases: u64) -> Result<()> {
        let total = self.totals.get(region).map_or(0, |t| t[s.index()]);
        if cases > total {
            return Err(Error::Contract(format!(
                "{cases} cases of `{code}` exceed {total} records in {region} stratum {}{}",
                s.age_group, s.gender
            )));
        }
        self.cases
            .entry(code.to_string())
            .or_default()
            .entry(region.to_string())
            .or_insert([0; STRATA])[s.index()] = cases;
        Ok(())
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.cases.keys().map(String::as_str)
    }

    pub fn total(&self, region: &str, s: Stratum) -> u64 {
        self.totals.get(region).map_or(0, |t| t[s.index()])
    }

    pub fn cases(&self, code: &str, region: &str, s: Stratum) -> u64 {
        self.cases
            .get(code)
            .and_then(|m| m.get(region))
            .map_or(0, |c| c[s.index()])
    }

    /// Adjusted rate of `code` in `region`; `None` when the region has no
    /// records at all.
    pub fn adjusted(&self, code: &str, region: &str, std: &StandardPopulation, opts: &RateOptions) -> Option<f64> {
        let totals = self.totals.get(region)?;
        let cases = self.cases.get(code).and_then(|m| m.get(region));
        let mut crude = [None; STRATA];
        for k in 0..STRATA {
            crude[k] = crude_rate(cases.map_or(0, |c| c[k]), totals[k], opts.years);
        }
        adjusted_rate(&crude, std, opts.renormalize)
    }

    /// Reads the totals file (`id,age_group,gender,total`) then the counts
    /// file (`id,code,age_group,gender,cases`), checking region ids.
    pub fn read(regions: &RegionSet, counts: &Path, totals: &Path) -> Result<Self> {
        let open = |p: &Path| std::fs::File::open(p).map_err(|e| Error::io(p, e));
        let mut out = StratifiedCounts::new();
        out.read_totals_from(regions, open(totals)?, &totals.display().to_string())?;
        out.read_counts_from(regions, open(counts)?, &counts.display().to_string())?;
        Ok(out)
    }

    pub fn read_totals_from(&mut self, regions: &RegionSet, reader: impl Read, name: &str) -> Result<()> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        crate::region_graph::io_check_header(name, rdr.headers()?, &["id", "age_group", "gender", "total"], &[])?;
        for record in rdr.records() {
            let record = record?;
            let row = record.position().map_or(0, |p| p.line());
            let id = &record[0];
            if regions.index_of(id).is_none() {
                return Err(Error::UnknownRegion {
                    id: id.to_string(),
                    row,
                });
            }
            let s = parse_stratum(&record[1], &record[2], name, row)?;
            self.set_total(id, s, parse_count(&record[3], name, row)?);
        }
        Ok(())
    }

    pub fn read_counts_from(&mut self, regions: &RegionSet, reader: impl Read, name: &str) -> Result<()> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        crate::region_graph::io_check_header(
            name,
            rdr.headers()?,
            &["id", "code", "age_group", "gender", "cases"],
            &[],
        )?;
        for record in rdr.records() {
            let record = record?;
            let row = record.position().map_or(0, |p| p.line());
            let id = &record[0];
            if regions.index_of(id).is_none() {
                return Err(Error::UnknownRegion {
                    id: id.to_string(),
                    row,
                });
            }
            let code = &record[1];
            if code.is_empty() {
                return Err(schema(name, row, "empty code"));
            }
            let s = parse_stratum(&record[2], &record[3], name, row)?;
            let cases = parse_count(&record[4], name, row)?;
            self.set_cases(code, id, s, cases)
                .map_err(|e| schema(name, row, e.to_string()))?;
        }
        Ok(())
    }

    pub fn write_counts(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "code", "age_group", "gender", "cases"])?;
        for (code, by_region) in &self.cases {
            let mut ids: Vec<&String> = by_region.keys().collect();
            ids.sort();
            for id in ids {
                for s in Stratum::all() {
                    let c = by_region[id][s.index()];
                    if c > 0 {
                        w.write_record([
                            id.as_str(),
                            code,
                            &s.age_group.to_string(),
                            &s.gender.to_string(),
                            &c.to_string(),
                        ])?;
                    }
                }
            }
        }
        w.flush().map_err(|e| Error::io("<counts>", e))?;
        Ok(())
    }

    pub fn write_totals(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "age_group", "gender", "total"])?;
        let mut ids: Vec<&String> = self.totals.keys().collect();
        ids.sort();
        for id in ids {
            for s in Stratum::all() {
                let t = self.totals[id][s.index()];
                if t > 0 {
                    w.write_record([
                        id.as_str(),
                        &s.age_group.to_string(),
                        &s.gender.to_string(),
                        &t.to_string(),
                    ])?;
                }
            }
        }
        w.flush().map_err(|e| Error::io("<totals>", e))?;
        Ok(())
    }
}

fn schema(file: &str, line: u64, message: impl Into<String>) -> Error {
    Error::Schema {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

fn parse_count(s: &str, file: &str, line: u64) -> Result<u64> {
    s.parse().map_err(|_| schema(file, line, format!("bad count `{s}`")))
}

fn parse_stratum(age: &str, gender: &str, file: &str, line: u64) -> Result<Stratum> {
    let g = Gender::parse(gender).ok_or_else(|| schema(file, line, format!("bad gender `{gender}`")))?;
    age.parse::<u8>()
        .ok()
        .and_then(|a| Stratum::new(a, g))
        .ok_or_else(|| schema(file, line, format!("age group `{age}` outside 1..=19")))
}

/// Log adjusted rates of one code, by region id.
#[derive(Debug, Clone, PartialEq)]
pub struct RateField {
    pub code: String,
    pub values: BTreeMap<String, f64>,
}

impl RateField {
    pub fn new(code: impl Into<String>, values: BTreeMap<String, f64>) -> Result<Self> {
        let code = code.into();
        if let Some((id, v)) = values.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Contract(format!(
                "field `{code}` has non-finite value {v} at `{id}`"
            )));
        }
        Ok(RateField { code, values })
    }

    pub fn observed_count(&self) -> usize {
        self.values.len()
    }

    /// Values in the order of `regions`; `None` if any region is missing.
    pub fn aligned(&self, regions: &RegionSet) -> Option<Vec<f64>> {
        regions.iter().map(|r| self.values.get(&r.id).copied()).collect()
    }
}

/// Outcome of [`build_rate_field`].
#[derive(Debug, Clone, PartialEq)]
pub enum Coverage {
    Accepted(RateField),
    Rejected {
        code: String,
        observed: usize,
        regions: usize,
        fraction: f64,
    },
}

/// Builds the log-rate field for one code and applies the coverage filter
/// against the full graph.
pub fn build_rate_field(
    counts: &StratifiedCounts,
    std: &StandardPopulation,
    code: &str,
    graph: &NeighborGraph,
    opts: &RateOptions,
) -> Result<Coverage> {
    if !(opts.coverage_threshold > 0.0 && opts.coverage_threshold <= 1.0) {
        return Err(Error::Config(format!(
            "coverage threshold {} outside (0, 1]",
            opts.coverage_threshold
        )));
    }
    if !(opts.years > 0.0) {
        return Err(Error::Config(format!("years must be positive, got {}", opts.years)));
    }
    let mut values = BTreeMap::new();
    for r in graph.regions().iter() {
        let Some(rate) = counts.adjusted(code, &r.id, std, opts) else {
            continue;
        };
        let log_rate = match opts.zero_offset {
            Some(eps) => (rate + eps).ln(),
            None if rate > 0.0 => rate.ln(),
            None => continue,
        };
        if log_rate.is_finite() {
            values.insert(r.id.clone(), log_rate);
        }
    }
    Ok(apply_coverage(
        RateField::new(code, values)?,
        graph.n(),
        opts.coverage_threshold,
    ))
}

/// Accepts `field` when it is observed in at least `threshold` of `regions`.
pub fn apply_coverage(field: RateField, regions: usize, threshold: f64) -> Coverage {
    let observed = field.observed_count();
    // small slack so exact fractions such as 2/3 of a multiple of 3 pass
    if regions > 0 && observed as f64 >= threshold * regions as f64 - 1e-9 {
        Coverage::Accepted(field)
    } else {
        Coverage::Rejected {
            fraction: if regions == 0 {
                0.0
            } else {
                observed as f64 / regions as f64
            },
            code: field.code,
            observed,
            regions,
        }
    }
}

/// Reads fields from an `id,code,log_rate` table, sorted by code.
pub fn read_fields(regions: &RegionSet, path: &Path) -> Result<Vec<RateField>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_fields_from(regions, f, &path.display().to_string())
}

pub fn read_fields_from(regions: &RegionSet, reader: impl Read, name: &str) -> Result<Vec<RateField>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    crate::region_graph::io_check_header(name, rdr.headers()?, &["id", "code", "log_rate"], &[])?;
    let mut by_code: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line());
        let id = &record[0];
        if regions.index_of(id).is_none() {
            return Err(Error::UnknownRegion {
                id: id.to_string(),
                row,
            });
        }
        let v: f64 = record[2]
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| schema(name, row, format!("bad log_rate `{}`", &record[2])))?;
        if by_code
            .entry(record[1].to_string())
            .or_default()
            .insert(id.to_string(), v)
            .is_some()
        {
            return Err(schema(name, row, format!("duplicate value for ({id}, {})", &record[1])));
        }
    }
    by_code
        .into_iter()
        .map(|(code, values)| RateField::new(code, values))
        .collect()
}

pub fn write_fields<'a>(fields: impl IntoIterator<Item = &'a RateField>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "code", "log_rate"])?;
    for f in fields {
        for (id, v) in &f.values {
            w.write_record([id.as_str(), &f.code, &format!("{v:?}")])?;
        }
    }
    w.flush().map_err(|e| Error::io("<fields>", e))?;
    Ok(())
}
