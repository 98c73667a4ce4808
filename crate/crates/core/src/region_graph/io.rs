use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{NeighborGraph, Region, RegionSet};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn schema(file: &str, line: u64, message: impl Into<String>) -> Error {
    Error::Schema {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

pub(crate) fn check_header(
    file: &str,
    headers: &csv::StringRecord,
    required: &[&str],
    optional: &[&str],
) -> Result<()> {
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    let ok = got.len() >= required.len()
        && got.len() <= required.len() + optional.len()
        && got.iter().zip(required.iter().chain(optional)).all(|(g, w)| g == w);
    if ok {
        Ok(())
    } else {
        let mut want = required.join(",");
        for o in optional {
            want.push_str(&format!("[,{o}]"));
        }
        Err(schema(
            file,
            1,
            format!("expected header `{want}`, found `{}`", got.join(",")),
        ))
    }
}

/// Reads a region metadata table: `id,lat,lon,population[,category]`.
pub fn read_regions(path: &Path) -> Result<RegionSet> {
    read_regions_from(open(path)?, &path.display().to_string())
}

pub(crate) fn read_regions_from(reader: impl Read, name: &str) -> Result<RegionSet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    check_header(name, rdr.headers()?, &["id", "lat", "lon", "population"], &["category"])?;
    let mut regions = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |k: usize, what: &str| -> Result<f64> {
            record[k]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| schema(name, line, format!("bad {what} `{}`", &record[k])))
        };
        let lat = num(1, "latitude")?;
        let lon = num(2, "longitude")?;
        let population = record[3]
            .parse::<u64>()
            .map_err(|_| schema(name, line, format!("bad population `{}`", &record[3])))?;
        let category = record.get(4).filter(|c| !c.is_empty()).map(str::to_string);
        let region = Region {
            id: record[0].to_string(),
            lat,
            lon,
            population,
            category,
        };
        region.validate().map_err(|e| schema(name, line, e.to_string()))?;
        regions.push(region);
    }
    RegionSet::new(regions)
}

pub fn write_regions(regions: &RegionSet, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let with_category = regions.iter().any(|r| r.category.is_some());
    if with_category {
        w.write_record(["id", "lat", "lon", "population", "category"])?;
    } else {
        w.write_record(["id", "lat", "lon", "population"])?;
    }
    for r in regions.iter() {
        let mut row = vec![
            r.id.clone(),
            r.lat.to_string(),
            r.lon.to_string(),
            r.population.to_string(),
        ];
        if with_category {
            row.push(r.category.clone().unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<regions>", e))?;
    Ok(())
}

/// Reads an `id_a,id_b` edge list against known regions.
pub fn read_edges(regions: RegionSet, path: &Path) -> Result<NeighborGraph> {
    read_edges_from(regions, open(path)?, &path.display().to_string())
}

pub(crate) fn read_edges_from(regions: RegionSet, reader: impl Read, name: &str) -> Result<NeighborGraph> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    check_header(name, rdr.headers()?, &["id_a", "id_b"], &[])?;
    let mut edges = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line());
        let lookup = |id: &str| {
            regions.index_of(id).ok_or_else(|| Error::UnknownRegion {
                id: id.to_string(),
                row,
            })
        };
        let a = lookup(&record[0])?;
        let b = lookup(&record[1])?;
        if a == b {
            return Err(Error::SelfLoop {
                id: record[0].to_string(),
                row,
            });
        }
        edges.push((a, b));
    }
    NeighborGraph::from_index_edges(regions, edges)
}

/// Loads a region metadata file and an edge list into a graph.
pub fn load_adjacency(regions_path: &Path, edges_path: &Path) -> Result<NeighborGraph> {
    read_edges(read_regions(regions_path)?, edges_path)
}

/// Writes each undirected edge once, `id_a < id_b`.
pub fn write_edges(graph: &NeighborGraph, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id_a", "id_b"])?;
    let regions = graph.regions();
    for (i, j) in graph.edges() {
        w.write_record([&regions[i].id, &regions[j].id])?;
    }
    w.flush().map_err(|e| Error::io("<edges>", e))?;
    Ok(())
}
