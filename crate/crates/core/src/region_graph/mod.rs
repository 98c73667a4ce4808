//! Regions and the contiguity graph over them.
//!
//! A [`RegionSet`] is kept sorted by id, so region indices, neighbor lists and
//! every file written from a graph come out in the same order no matter how
//! the input was ordered.

mod io;
mod queen;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rates::RateField;

pub(crate) use io::check_header as io_check_header;
pub use io::{load_adjacency, read_edges, read_regions, write_edges, write_regions};
pub use queen::{
    parse_geojson, queen_contiguity, read_geojson, regions_from_polygons, Polygon, RegionGeometry, DEFAULT_SNAP_DEGREES,
};

/// Fewest observed regions an analysis will accept.
pub const MIN_OBSERVED_REGIONS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub id: String,
    /// Latitude in degrees.
    pub lat: f64,
    /// Longitude in degrees.
    pub lon: f64,
    pub population: u64,
    pub category: Option<String>,
}

impl Region {
    pub fn new(id: impl Into<String>, lat: f64, lon: f64) -> Self {
        Region {
            id: id.into(),
            lat,
            lon,
            population: 0,
            category: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::InvalidRegion {
                id: self.id.clone(),
                message: "empty id".into(),
            });
        }
        if !(-90.0..=90.0).contains(&self.lat) || !(-180.0..=180.0).contains(&self.lon) {
            return Err(Error::InvalidRegion {
                id: self.id.clone(),
                message: format!("coordinates ({}, {}) out of range", self.lat, self.lon),
            });
        }
        Ok(())
    }
}

/// Regions with unique ids, sorted by id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegionSet {
    regions: Vec<Region>,
    index: HashMap<String, usize>,
}

impl RegionSet {
    pub fn new(mut regions: Vec<Region>) -> Result<Self> {
        for r in &regions {
            r.validate()?;
        }
        regions.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = regions.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateRegion(w[0].id.clone()));
        }
        let index = regions.iter().enumerate().map(|(i, r)| (r.id.clone(), i)).collect();
        Ok(RegionSet { regions, index })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, id: &str) -> Option<&Region> {
        self.index_of(id).map(|i| &self.regions[i])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Region> {
        self.regions.iter()
    }

    pub fn as_slice(&self) -> &[Region] {
        &self.regions
    }

    /// Sub-set in the same relative order, selected by index.
    fn select(&self, keep: &[usize]) -> RegionSet {
        let regions: Vec<Region> = keep.iter().map(|&i| self.regions[i].clone()).collect();
        let index = regions.iter().enumerate().map(|(i, r)| (r.id.clone(), i)).collect();
        RegionSet { regions, index }
    }
}

impl std::ops::Index<usize> for RegionSet {
    type Output = Region;
    fn index(&self, i: usize) -> &Region {
        &self.regions[i]
    }
}

/// Undirected, loop-free neighbor graph over a [`RegionSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborGraph {
    regions: RegionSet,
    adjacency: Vec<Vec<usize>>,
}

impl NeighborGraph {
    /// Builds a graph from index pairs. Pairs are symmetrized and
    /// deduplicated; a self-loop is a contract violation.
    pub fn from_index_edges(regions: RegionSet, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = regions.len();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Contract(format!("edge ({a}, {b}) out of range for {n} regions")));
            }
            if a == b {
                return Err(Error::SelfLoop {
                    id: regions[a].id.clone(),
                    row: 0,
                });
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(NeighborGraph { regions, adjacency })
    }

    /// Graph with no edges.
    pub fn isolated(regions: RegionSet) -> Self {
        let adjacency = vec![Vec::new(); regions.len()];
        NeighborGraph { regions, adjacency }
    }

    pub fn regions(&self) -> &RegionSet {
        &self.regions
    }

    /// Region count.
    pub fn n(&self) -> usize {
        self.regions.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Neighbor indices of region `i`, ascending (and therefore id-sorted).
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn neighbor_ids(&self, id: &str) -> Option<Vec<&str>> {
        let i = self.regions.index_of(id)?;
        Some(self.adjacency[i].iter().map(|&j| self.regions[j].id.as_str()).collect())
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    pub fn isolated_ids(&self) -> Vec<&str> {
        (0..self.n())
            .filter(|&i| self.adjacency[i].is_empty())
            .map(|i| self.regions[i].id.as_str())
            .collect()
    }

    /// Number of connected components, isolated regions included.
    pub fn connected_components(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut stack = Vec::new();
        let mut count = 0;
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Induced subgraph on the regions flagged in `keep`.
    pub fn induced(&self, keep: &[bool]) -> NeighborGraph {
        let kept: Vec<usize> = (0..self.n()).filter(|&i| keep[i]).collect();
        let mut remap = vec![usize::MAX; self.n()];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
        }
        let adjacency = kept
            .iter()
            .map(|&old| {
                self.adjacency[old]
                    .iter()
                    .filter(|&&j| keep[j])
                    .map(|&j| remap[j])
                    .collect()
            })
            .collect();
        NeighborGraph {
            regions: self.regions.select(&kept),
            adjacency,
        }
    }

    /// Restricts the graph to regions observed in `field`, then drops regions
    /// left without any observed neighbor.
    pub fn observed_subgraph(&self, field: &RateField) -> Result<ObservedSubgraph> {
        for id in field.values.keys() {
            if self.regions.index_of(id).is_none() {
                return Err(Error::Contract(format!(
                    "field `{}` has a value for `{id}`, which is not in the graph",
                    field.code
                )));
            }
        }
        let observed: Vec<bool> = self.regions.iter().map(|r| field.values.contains_key(&r.id)).collect();
        let restricted = self.induced(&observed);
        let unobserved = self.n() - restricted.n();

        let connected: Vec<bool> = (0..restricted.n()).map(|i| restricted.degree(i) > 0).collect();
        let dropped_isolated: Vec<String> = (0..restricted.n())
            .filter(|&i| !connected[i])
            .map(|i| restricted.regions[i].id.clone())
            .collect();
        let graph = restricted.induced(&connected);

        if graph.n() < MIN_OBSERVED_REGIONS {
            return Err(Error::InsufficientData {
                observed: graph.n(),
                required: MIN_OBSERVED_REGIONS,
            });
        }
        Ok(ObservedSubgraph {
            graph,
            unobserved,
            dropped_isolated,
        })
    }
}

/// Result of [`NeighborGraph::observed_subgraph`].
#[derive(Debug, Clone)]
pub struct ObservedSubgraph {
    pub graph: NeighborGraph,
    /// Regions of the parent graph with no value in the field.
    pub unobserved: usize,
    /// Observed regions removed because none of their neighbors were observed.
    pub dropped_isolated: Vec<String>,
}
